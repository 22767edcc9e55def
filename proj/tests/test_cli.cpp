#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "ufdn/cli.hpp"
#include "ufdn/io.hpp"

using namespace ufdn;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "ufdn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
    std::filesystem::path dir(UFDN_TEST_TMP);
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("design homogeneous reproduces the worked example") {
    const std::string path = scratch("cli_hom.json");
    const Result r = run({"design", "homogeneous", "--delays", "13,22,1,10,5,3", "--gamma", "0.99", "--dsim",
                          "1.000,1.808,2.096,2.743,3.413,3.662", "-o", path});
    REQUIRE(r.code == 0);
    const FdnDocument doc = load_document(path);
    CHECK((doc.system.a() - fixture::kHomA).cwiseAbs().maxCoeff() < 5e-3);
    CHECK(doc.verify["theorem3"]["verdict"] == true);
    CHECK(doc.extras["poles"]["count"] == 54);
    const Result v = run({"verify", path, "--require-uniallpass"});
    CHECK(v.code == 0);
    CHECK(v.out.find("certified uniallpass") != std::string::npos);
}

TEST_CASE("every generated design verifies") {
    const std::vector<std::vector<std::string>> designs{
        {"design", "homogeneous", "--delays", "4,9,2,6", "--gamma", "0.95"},
        {"design", "schroeder", "--gains", "0.3,0.4,0.5,0.6,0.7,0.8", "--delays", "5,3,7,2,4,6"},
        {"design", "gardner", "--gains", "0.3,0.4,0.5,0.6,0.7,0.8", "--delays", "5,3,7,2,4,6"},
        {"design", "poletti", "--gains", "0.7", "--delays", "3,5,7,2", "--seed", "4"},
        {"design", "random", "--n", "4", "--p", "2", "--seed", "3", "--scaled"},
    };
    int k = 0;
    for (auto args : designs) {
        const std::string path = scratch("cli_design_" + std::to_string(k++) + ".json");
        args.insert(args.end(), {"-o", path});
        REQUIRE(run(args).code == 0);
        const Result v = run({"verify", path, "--require-uniallpass"});
        CHECK(v.code == 0);
    }
}

TEST_CASE("verify flags the counterexample for delays 2,1,1") {
    const std::string path = scratch("cli_counter.json");
    REQUIRE(run({"design", "counterexample", "--refined", "-o", path}).code == 0);
    CHECK(run({"verify", path}).code == 0);
    const Result v = run({"verify", path, "--delays", "2,1,1"});
    CHECK(v.code == 1);
    CHECK(v.out.find("not allpass") != std::string::npos);
    CHECK(run({"verify", path, "--require-uniallpass"}).code == 1);
}

TEST_CASE("MIMO principal-minor passes are labelled") {
    const std::string path = scratch("cli_mimo.json");
    REQUIRE(run({"design", "random", "--n", "3", "--p", "3", "--seed", "5", "-o", path}).code == 0);
    const Result v = run({"verify", path});
    CHECK(v.out.find("necessary condition only") != std::string::npos);
}

TEST_CASE("simulate a pure delay") {
    const std::string path = scratch("cli_delay.json");
    write_text(path, R"({"version": 1, "delays": [1], "A": [[0]], "B": [[1]], "C": [[1]], "D": [[0]]})");
    const Result r = run({"simulate", path, "--length", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "n,h\n0,0\n1,1\n2,0\n3,0\n");

    const std::string wav = scratch("cli_delay.wav");
    REQUIRE(run({"simulate", path, "--length", "4", "--wav", wav, "--rate", "8000", "-o", scratch("d.csv")}).code == 0);
    CHECK(std::filesystem::file_size(wav) == 44 + 8);
    const Json side = Json::parse(read_text(wav + ".json"));
    CHECK(side["rate"] == 8000);
    CHECK(side["scale"].get<double>() == doctest::Approx(0.891250938));
}

TEST_CASE("multichannel and per-channel WAV") {
    const std::string path = scratch("cli_mimo_sim.json");
    REQUIRE(run({"design", "random", "--n", "2", "--p", "2", "--seed", "1", "-o", path}).code == 0);
    const std::string multi = scratch("multi.wav");
    REQUIRE(run({"simulate", path, "--length", "16", "--wav", multi, "--multichannel", "-o", scratch("m.csv")}).code == 0);
    CHECK(std::filesystem::file_size(multi) == 44 + 16 * 4 * 2);
    const std::string split = scratch("split.wav");
    REQUIRE(run({"simulate", path, "--length", "16", "--wav", split, "-o", scratch("s.csv")}).code == 0);
    CHECK(std::filesystem::exists(scratch("split_1_0.wav")));
}

TEST_CASE("poles CSV") {
    const std::string path = scratch("cli_poles.json");
    REQUIRE(run({"design", "schroeder", "--gains", "0.5", "--delays", "3", "-o", path}).code == 0);
    const Result r = run({"poles", path});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "real,imag,modulus");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const double modulus = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(modulus == doctest::Approx(std::pow(0.5, 1.0 / 3.0)));
    }
    CHECK(rows == 3);
}

TEST_CASE("export is byte stable and designs are deterministic") {
    const Result a = run({"design", "random", "--n", "4", "--p", "1", "--seed", "7"});
    const Result b = run({"design", "random", "--n", "4", "--p", "1", "--seed", "7"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const std::string path = scratch("cli_export.json");
    write_text(path, a.out);
    const Result e = run({"export", path});
    CHECK(e.out == a.out);
}

TEST_CASE("complete") {
    const std::string mat = scratch("cli_matrix.txt");
    // Schroeder feedback matrix for gains 0.5, 0.3
    write_text(mat, "-0.5 0\n0.75 -0.3\n");
    const std::string out = scratch("cli_completed.json");
    const Result r = run({"complete", mat, "--mode", "siso", "--delays", "3,5", "-o", out});
    REQUIRE(r.code == 0);
    CHECK(load_document(out).verify["theorem3"]["verdict"] == true);
    CHECK(run({"verify", out, "--require-uniallpass"}).code == 0);

    const std::string ortho = scratch("cli_ortho.txt");
    write_text(ortho, "[[0.6, 0.0], [0.0, 0.8]]");
    const Result o = run({"complete", ortho, "--mode", "orthogonal", "--p", "2", "--seed", "3"});
    CHECK(o.code == 0);
    const Result bad = run({"complete", ortho, "--mode", "orthogonal", "--p", "1"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("not admissible") != std::string::npos);
    const Result mimo = run({"complete", ortho, "--mode", "siso", "--p", "2"});
    CHECK(mimo.code == 2);
}

TEST_CASE("usage and parse errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"design", "schroeder"}).code == 2);
    CHECK(run({"design", "schroeder", "--gains", "1.5"}).code == 2);
    const std::string path = scratch("cli_bad.json");
    write_text(path, "{\n \"version\": 1,\n \"delays\": [1,,]\n}\n");
    const Result r = run({"verify", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("cli_bad.json:3:") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("tolerance from the environment") {
    ::setenv("UFDN_TOL", "nonsense", 1);
    CHECK(run({"design", "random"}).code == 2);
    ::setenv("UFDN_TOL", "1e-30", 1);
    // No realistic certificate reaches 1e-30.
    const std::string path = scratch("cli_tol.json");
    REQUIRE(run({"design", "random", "--n", "3", "--scaled", "-o", path}).code == 0);
    CHECK(run({"verify", path, "--require-uniallpass"}).code == 1);
    ::unsetenv("UFDN_TOL");
    CHECK(run({"verify", path, "--require-uniallpass"}).code == 0);
}
