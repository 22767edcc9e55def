#include "ufdn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ufdn/allpass.hpp"
#include "ufdn/complete.hpp"
#include "ufdn/designs.hpp"
#include "ufdn/homogeneous.hpp"
#include "ufdn/io.hpp"
#include "ufdn/polynomial.hpp"
#include "ufdn/verify.hpp"

namespace ufdn::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string list(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s + "]";
}

double default_tolerance() {
    const char* env = std::getenv("UFDN_TOL");
    if (!env || !*env) return 1e-8;
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0) || !std::isfinite(tol)) {
        throw UsageError(std::string("UFDN_TOL must be a positive number, got '") + env + "'");
    }
    return tol;
}

Vector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> to_std(const Vector& v) {
    return {v.data(), v.data() + v.size()};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text(path, text);
    }
}

Json theorem3_json(const UniallpassCertificate& cert) {
    return {{"verdict", cert.verdict}, {"residual", cert.residual}, {"dsim", to_std(cert.dsim.d)}};
}

Json theorem4_json(const FdnSystem& sys, double tol) {
    if (sys.n() > kMaxMinorEnumerationSize) return {{"skipped", "too many delay lines for subset enumeration"}};
    try {
        const PrincipalMinorReport r = check_theorem4(sys, tol);
        return {{"verdict", r.verdict},
                {"sign", r.sign},
                {"max_deviation", r.max_deviation},
                {"mismatches", r.mismatches.size()},
                {"scope", r.sufficient ? "necessary and sufficient" : "necessary condition only"}};
    } catch (const SingularBlockError& e) {
        return {{"skipped", e.what()}};
    }
}

Json verify_json(const FdnSystem& sys, double tol) {
    Json v = Json::object();
    if (sys.dsim()) v["theorem3"] = theorem3_json(check_theorem3(sys, *sys.dsim(), tol));
    v["theorem4"] = theorem4_json(sys, tol);
    return v;
}

Json pole_summary(const FdnSystem& sys) {
    const auto p = poles(sys);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Complex z : p) {
        lo = std::min(lo, std::abs(z));
        hi = std::max(hi, std::abs(z));
    }
    return {{"count", p.size()}, {"min_modulus", lo}, {"max_modulus", hi}};
}

// Finds a diagonal similarity when the document carries none.
std::optional<std::pair<DiagonalSimilarity, std::string>> find_dsim(const FdnSystem& sys, std::string& why) {
    if (sys.dsim()) return std::make_pair(*sys.dsim(), std::string("document"));
    try {
        return std::make_pair(dsim_lyapunov(sys.a(), sys.b()), std::string("Lyapunov"));
    } catch (const Error& e) {
        why = e.what();
    }
    try {
        return std::make_pair(fit_dsim_scale(sys, dsim_hadamard(sys)), std::string("Hadamard quotient"));
    } catch (const Error& e) {
        why += std::string("; ") + e.what();
    }
    return std::nullopt;
}

struct Options {
    std::string output;
    std::vector<int> delays;
    std::vector<double> gains;
    std::vector<double> dsim;
    double gamma = 0.0;
    double slack = 0.9;
    std::uint64_t seed = 1;
    bool seed_given = false;
    bool refined = false;
    bool scaled = false;
    int n = 4;
    int p = 1;
    std::string input;
    std::string mode = "siso";
    double tol = 1e-8;
    bool require_uniallpass = false;
    int length = 0;
    std::string wav;
    int rate = 48000;
    bool multichannel = false;
};

std::optional<DelayVector> delays_of(const Options& o) {
    if (o.delays.empty()) return std::nullopt;
    return DelayVector(o.delays);
}

DelayVector delays_or_ones(const Options& o, Index n) {
    auto d = delays_of(o);
    if (d && d->size() != n) {
        throw UsageError("--delays has " + std::to_string(d->size()) + " entries, expected " + std::to_string(n));
    }
    return d.value_or(DelayVector::ones(n));
}

int write_design(const FdnDocument& doc, const Options& o, std::ostream& out) {
    emit(serialize(doc), o.output, out);
    return kOk;
}

int design_homogeneous(const Options& o, std::ostream& out) {
    if (o.delays.empty()) throw UsageError("design homogeneous needs --delays");
    HomogeneousSpec spec{DelayVector(o.delays), o.gamma, std::nullopt, o.slack};
    if (!o.dsim.empty()) spec.dsim = to_vector(o.dsim);
    const HomogeneousDesign h = design_homogeneous_siso(spec);
    FdnDocument doc{h.system, Json::object(), verify_json(h.system, o.tol), Json::object()};
    doc.meta = {{"design", "homogeneous"},
                {"gamma", o.gamma},
                {"gains", to_std(h.gains)},
                {"cauchy_nodes", to_std(h.pair.d)}};
    if (o.dsim.empty()) doc.meta["slack"] = o.slack;
    doc.extras["poles"] = pole_summary(h.system);
    return write_design(doc, o, out);
}

int design_series(const Options& o, std::ostream& out, bool nested) {
    if (o.gains.empty()) throw UsageError("--gains is required");
    const GainVector g(to_vector(o.gains));
    const DelayVector delays = delays_or_ones(o, g.size());
    const Design d = nested ? gardner_nested(g, delays) : schroeder_series(g, delays);
    FdnDocument doc{d.system, {{"design", nested ? "gardner" : "schroeder"}, {"gains", o.gains}},
                    verify_json(d.system, o.tol), Json::object()};
    return write_design(doc, o, out);
}

int design_poletti(const Options& o, std::ostream& out) {
    if (o.gains.size() != 1) throw UsageError("design poletti needs exactly one loop gain in --gains");
    const Index n = o.delays.empty() ? o.n : static_cast<Index>(o.delays.size());
    const Design d = poletti_unitary(random_orthogonal(n, o.seed), o.gains[0], delays_or_ones(o, n));
    FdnDocument doc{d.system, {{"design", "poletti"}, {"gain", o.gains[0]}, {"seed", o.seed}},
                    verify_json(d.system, o.tol), Json::object()};
    return write_design(doc, o, out);
}

int design_counterexample(const Options& o, std::ostream& out) {
    const DelayVector delays = delays_or_ones(o, 3);
    const FdnSystem sys = o.refined ? counterexample_refined(delays) : counterexample(delays);
    FdnDocument doc{sys, {{"design", o.refined ? "counterexample (refined)" : "counterexample"}},
                    verify_json(sys, o.tol), Json::object()};
    return write_design(doc, o, out);
}

int design_random(const Options& o, std::ostream& out) {
    if (o.n < 1 || o.p < 1) throw UsageError("--n and --p must be positive");
    const FdnSystem sys = random_uniallpass(o.n, o.p, o.seed, o.scaled, delays_of(o));
    FdnDocument doc{sys, {{"design", "random"}, {"seed", o.seed}, {"scaled", o.scaled}}, verify_json(sys, o.tol),
                    Json::object()};
    return write_design(doc, o, out);
}

int complete(const Options& o, std::ostream& out, std::ostream& err) {
    const Matrix a = parse_matrix(read_text(o.input), o.input);
    if (a.rows() != a.cols()) throw UsageError("feedback matrix must be square");
    const DelayVector delays = delays_or_ones(o, a.rows());
    try {
        if (o.mode == "siso") {
            if (o.p != 1) {
                throw UsageError("general (non-orthogonal) MIMO completion is not supported; use --mode orthogonal");
            }
            const SisoCompletion c = siso_completion(a, delays);
            FdnDocument doc{c.system, {{"completion", "siso"}}, verify_json(c.system, o.tol), Json::object()};
            emit(serialize(doc), o.output, out);
            return kOk;
        }
        FdnSystem sys = orthogonal_completion(a, o.p, delays);
        if (o.seed_given) {
            // Any P x P rotation of the input side gives another completion.
            const Matrix q = random_orthogonal(o.p, o.seed);
            sys = FdnSystem(sys.a(), sys.b() * q, sys.c(), sys.d() * q, sys.delays(), sys.dsim());
        }
        Json meta{{"completion", "orthogonal"}, {"p", o.p}};
        if (o.seed_given) meta["seed"] = o.seed;
        FdnDocument doc{sys, meta, verify_json(sys, o.tol), Json::object()};
        emit(serialize(doc), o.output, out);
        return kOk;
    } catch (const InadmissibleError& e) {
        err << "not admissible: " << e.what() << "\n";
        return kVerificationFailed;
    }
}

int verify(const Options& o, std::ostream& out) {
    const FdnDocument doc = load_document(o.input);
    FdnSystem sys = doc.system;
    if (!o.delays.empty()) sys = sys.with_delays(delays_or_ones(o, sys.n()));
    out << "delays: " << list(sys.delays().values()) << "\n";

    bool allpass = false;
    try {
        AllpassOptions ao;
        ao.tol = o.tol;
        const AllpassReport r = is_allpass(sys, ao);
        allpass = r.verdict;
        out << "frequency grid: " << (allpass ? "allpass" : "not allpass") << " (deviation " << num(r.grid_deviation)
            << " over " << r.grid_points << " points, reversal deviation " << num(r.reversal_deviation)
            << ", max pole modulus " << num(r.max_pole_radius) << ")\n";
    } catch (const UnstableError& e) {
        double radius = 0.0;
        for (Complex z : e.poles()) radius = std::max(radius, std::abs(z));
        out << "frequency grid: not allpass (unstable, max pole modulus " << num(radius) << ")\n";
    }

    bool certified = false;
    std::string why;
    if (auto found = find_dsim(sys, why)) {
        const UniallpassCertificate cert = check_theorem3(sys, found->first, o.tol);
        certified = cert.verdict;
        out << "theorem3: " << (certified ? "certified uniallpass" : "not certified") << " (residual "
            << num(cert.residual) << ", dsim from " << found->second << ")\n";
    } else {
        out << "theorem3: not certified (no diagonal similarity: " << why << ")\n";
    }

    const Json t4 = theorem4_json(sys, o.tol);
    if (t4.contains("skipped")) {
        out << "theorem4: skipped (" << t4["skipped"].get<std::string>() << ")\n";
    } else {
        const bool pass = t4["verdict"].get<bool>();
        out << "theorem4: " << (pass ? "pass" : "fail") << " (max deviation " << num(t4["max_deviation"].get<double>())
            << ", " << t4["mismatches"].get<std::size_t>() << " of " << (std::size_t{1} << sys.n())
            << " subsets differ)";
        if (pass && !sys.is_siso()) out << " [necessary condition only]";
        out << "\n";
    }

    if (!allpass) return kVerificationFailed;
    if (o.require_uniallpass && !certified) return kVerificationFailed;
    return kOk;
}

void write_sidecar(const std::string& wav, const WavInfo& info) {
    const Json j{{"peak", info.peak},
                 {"scale", info.scale},
                 {"rate", info.rate},
                 {"channels", info.channels},
                 {"normalization", "peak at -1 dBFS"}};
    write_text(wav + ".json", canonical_dump(j));
}

int simulate(const Options& o, std::ostream& out) {
    if (o.length < 1) throw UsageError("--length must be positive");
    FdnSystem sys = load_document(o.input).system;
    if (!o.delays.empty()) sys = sys.with_delays(delays_or_ones(o, sys.n()));
    const ImpulseResponse ir = impulse_response(sys, o.length);

    std::ostringstream csv;
    write_csv(csv, ir);
    emit(csv.str(), o.output, out);

    if (o.wav.empty()) return kOk;
    std::vector<std::vector<double>> channels;
    std::vector<std::string> names;
    double peak = 0.0;
    const bool single = ir.outputs() * ir.inputs() == 1;
    const std::filesystem::path base(o.wav);
    for (Index r = 0; r < ir.outputs(); ++r) {
        for (Index c = 0; c < ir.inputs(); ++c) {
            const auto ch = ir.channel(r, c);
            channels.emplace_back(ch.begin(), ch.end());
            for (double v : ch) peak = std::max(peak, std::abs(v));
            names.push_back((base.parent_path() / (base.stem().string() + "_" + std::to_string(r) + "_" +
                                                   std::to_string(c) + base.extension().string()))
                                .string());
        }
    }
    WavInfo info{peak, peak_normalization(peak), o.rate, 1};
    if (single || o.multichannel) {
        info.channels = static_cast<int>(channels.size());
        write_wav(o.wav, channels, o.rate, info.scale);
        write_sidecar(o.wav, info);
    } else {
        for (std::size_t k = 0; k < channels.size(); ++k) {
            write_wav(names[k], {channels[k]}, o.rate, info.scale);
            write_sidecar(names[k], info);
        }
    }
    return kOk;
}

int list_poles(const Options& o, std::ostream& out) {
    FdnSystem sys = load_document(o.input).system;
    if (!o.delays.empty()) sys = sys.with_delays(delays_or_ones(o, sys.n()));
    auto p = poles(sys);
    std::sort(p.begin(), p.end(), [](Complex l, Complex r) {
        if (std::abs(l) != std::abs(r)) return std::abs(l) > std::abs(r);
        return std::arg(l) < std::arg(r);
    });
    std::ostringstream csv;
    csv << "real,imag,modulus\n";
    char buf[96];
    for (Complex z : p) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", z.real(), z.imag(), std::abs(z));
        csv << buf;
    }
    emit(csv.str(), o.output, out);
    return kOk;
}

int export_document(const Options& o, std::ostream& out) {
    emit(serialize(load_document(o.input)), o.output, out);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    try {
        o.tol = default_tolerance();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App app{"Design, complete and verify uniallpass feedback delay networks", "ufdn"};
    app.require_subcommand(1);
    auto positive = CLI::PositiveNumber;

    auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Output file (default stdout)"); };
    auto add_delays = [&](CLI::App* sub) {
        sub->add_option("--delays", o.delays, "Delay lengths, comma separated")->delimiter(',');
    };
    auto add_tol = [&](CLI::App* sub) {
        sub->add_option("--tol", o.tol, "Certification tolerance (env UFDN_TOL)")->check(positive);
    };

    auto* design = app.add_subcommand("design", "Generate a uniallpass FDN");
    design->require_subcommand(1);
    auto* homogeneous = design->add_subcommand("homogeneous", "Homogeneous decay via a Cauchy-derived orthogonal matrix");
    homogeneous->add_option("--gamma", o.gamma, "Pole radius in (0,1)")->required();
    homogeneous->add_option("--dsim", o.dsim, "Diagonal similarity, comma separated")->delimiter(',');
    homogeneous->add_option("--slack", o.slack, "Slack factor of the default similarity");
    auto* schroeder = design->add_subcommand("schroeder", "Schroeder allpasses in series");
    auto* gardner = design->add_subcommand("gardner", "Gardner's nested allpasses");
    auto* poletti = design->add_subcommand("poletti", "Poletti's unitary reverberator");
    for (auto* sub : {schroeder, gardner, poletti}) {
        sub->add_option("--gains", o.gains, "Gains, comma separated")->delimiter(',')->required();
    }
    poletti->add_option("--n", o.n, "Number of delay lines when --delays is absent");
    poletti->add_option("--seed", o.seed, "Seed of the orthogonal matrix");
    auto* counter = design->add_subcommand("counterexample", "Three-line system that is allpass for some delays only");
    counter->add_flag("--refined", o.refined, "Use the exactly allpass refinement of the printed values");
    auto* random = design->add_subcommand("random", "Random orthogonal system matrix");
    random->add_option("--n", o.n, "Number of delay lines");
    random->add_option("--p", o.p, "Number of inputs and outputs");
    random->add_option("--seed", o.seed, "Seed");
    random->add_flag("--scaled", o.scaled, "Apply a random diagonal similarity");
    for (auto* sub : {homogeneous, schroeder, gardner, poletti, counter, random}) {
        add_output(sub);
        add_delays(sub);
        add_tol(sub);
    }

    auto* complete_cmd = app.add_subcommand("complete", "Complete a feedback matrix to a uniallpass FDN");
    complete_cmd->add_option("matrix", o.input, "Feedback matrix (JSON or whitespace text)")->required();
    complete_cmd->add_option("--mode", o.mode, "siso or orthogonal")->check(CLI::IsMember({"siso", "orthogonal"}));
    complete_cmd->add_option("--p", o.p, "Number of inputs and outputs")->check(positive);
    auto* seed_opt = complete_cmd->add_option("--seed", o.seed, "Rotate the input side by a random orthogonal matrix");
    add_output(complete_cmd);
    add_delays(complete_cmd);
    add_tol(complete_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Report allpass and uniallpass verdicts");
    verify_cmd->add_option("system", o.input, "FdnSystem JSON")->required();
    verify_cmd->add_flag("--require-uniallpass", o.require_uniallpass, "Fail unless a certificate is found");
    add_delays(verify_cmd);
    add_tol(verify_cmd);

    auto* simulate_cmd = app.add_subcommand("simulate", "Render impulse responses");
    simulate_cmd->add_option("system", o.input, "FdnSystem JSON")->required();
    simulate_cmd->add_option("--length", o.length, "Samples per response")->required();
    simulate_cmd->add_option("--wav", o.wav, "Also write 16-bit PCM WAV");
    simulate_cmd->add_option("--rate", o.rate, "WAV sample rate")->check(positive);
    simulate_cmd->add_flag("--multichannel", o.multichannel, "One WAV file with every channel");
    add_output(simulate_cmd);
    add_delays(simulate_cmd);

    auto* poles_cmd = app.add_subcommand("poles", "List system poles as CSV");
    poles_cmd->add_option("system", o.input, "FdnSystem JSON")->required();
    add_output(poles_cmd);
    add_delays(poles_cmd);

    auto* export_cmd = app.add_subcommand("export", "Rewrite a document in canonical form");
    export_cmd->add_option("system", o.input, "FdnSystem JSON")->required();
    add_output(export_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    o.seed_given = seed_opt->count() > 0;

    try {
        if (*homogeneous) return design_homogeneous(o, out);
        if (*schroeder) return design_series(o, out, false);
        if (*gardner) return design_series(o, out, true);
        if (*poletti) return design_poletti(o, out);
        if (*counter) return design_counterexample(o, out);
        if (*random) return design_random(o, out);
        if (*complete_cmd) return complete(o, out, err);
        if (*verify_cmd) return verify(o, out);
        if (*simulate_cmd) return simulate(o, out);
        if (*poles_cmd) return list_poles(o, out);
        if (*export_cmd) return export_document(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InadmissibleError& e) {
        err << "error: " << e.what() << " (residual " << num(e.residual()) << ")\n";
        return kVerificationFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kUsage;
}

}  // namespace ufdn::cli
