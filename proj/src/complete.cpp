#include "ufdn/complete.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace ufdn {

namespace {

struct Roots {
    bool any = false;  // every x solves the equation (all coefficients vanish)
    int count = 0;
    std::array<double, 2> values{};
};

Roots solve_quadratic(double a, double b, double c, double tol) {
    Roots out;
    const double scale = std::abs(a) + std::abs(b) + std::abs(c);
    if (scale == 0.0) {
        out.any = true;
        return out;
    }
    constexpr double eps = 1e-12;
    if (std::abs(a) <= eps * scale) {
        if (std::abs(b) <= eps * scale) {
            out.any = std::abs(c) <= eps * scale;
            return out;
        }
        out.count = 1;
        out.values[0] = -c / b;
        return out;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        // Double roots come out with a slightly negative discriminant.
        if (disc < -tol * (b * b + 4.0 * std::abs(a * c))) return out;
        disc = 0.0;
    }
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) {
        out.count = 1;
        out.values[0] = 0.0;
        return out;
    }
    out.count = 2;
    out.values[0] = q / a;
    out.values[1] = c / q;
    return out;
}

double quadratic_defect(const QuadraticField& f, Index i, Index j, double x) {
    const double a = f.a(i, j), b = f.b(i, j), c = f.c(i, j);
    const double scale = std::abs(a) * x * x + std::abs(b * x) + std::abs(c);
    const double value = std::abs(a * x * x + b * x + c);
    return scale > 0.0 ? value / scale : 0.0;
}

// Relative condition number of the root x of a x^2 + b x + c.
double root_condition(double a, double b, double c, double x) {
    const double slope = std::abs(2.0 * a * x + b) * std::abs(x);
    const double scale = std::abs(a) * x * x + std::abs(b * x) + std::abs(c);
    return slope > 0.0 ? scale / slope : std::numeric_limits<double>::infinity();
}

bool is_any(const QuadraticField& f, Index i, Index j) {
    return std::abs(f.a(i, j)) + std::abs(f.b(i, j)) + std::abs(f.c(i, j)) == 0.0;
}

// Depth-first search over the (x_ip, x_pi) pairs of every non-pivot row.
class Rank1Search {
public:
    Rank1Search(const QuadraticField& field, const Vector& diag, Index pivot, const Rank1Options& options)
        : f_(field), diag_(diag), pivot_(pivot), opt_(options), n_(field.a.rows()) {
        for (Index i = 0; i < n_; ++i) {
            if (i != pivot_) order_.push_back(i);
        }
        ref_ = diag_.cwiseAbs().maxCoeff();
        col_ = Vector::Zero(n_);
        row_ = Vector::Zero(n_);
        col_(pivot_) = row_(pivot_) = diag_(pivot_);
    }

    std::optional<Matrix> run() {
        options_.resize(order_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) {
            options_[k] = pair_options(order_[k]);
            if (options_[k].empty()) return std::nullopt;
        }
        if (!descend(0)) return std::nullopt;
        const double xpp = diag_(pivot_);
        Matrix x = col_ * row_.transpose() / xpp;
        x.col(pivot_) = col_;
        x.row(pivot_) = row_.transpose();
        return x;
    }

    bool exhausted() const { return nodes_ > opt_.node_budget; }

private:
    using Pair = std::pair<double, double>;

    bool product_matches(double r1, double r2, double target) const {
        return std::abs(r1 * r2 - target) <= opt_.tol * (std::abs(r1 * r2) + std::abs(target)) + 1e-14 * ref_ * ref_;
    }

    std::vector<Pair> pair_options(Index i) const {
        const Roots lower = solve_quadratic(f_.a(i, pivot_), f_.b(i, pivot_), f_.c(i, pivot_), opt_.tol);
        const Roots upper = solve_quadratic(f_.a(pivot_, i), f_.b(pivot_, i), f_.c(pivot_, i), opt_.tol);
        const double target = diag_(i) * diag_(pivot_);
        std::vector<Pair> out;
        auto push = [&](double r1, double r2) {
            for (const auto& [u, v] : out) {
                if (std::abs(u - r1) <= 1e-12 * (std::abs(u) + ref_) && std::abs(v - r2) <= 1e-12 * (std::abs(v) + ref_)) {
                    return;
                }
            }
            out.emplace_back(r1, r2);
        };
        if (!lower.any && !upper.any) {
            for (int s = 0; s < lower.count; ++s) {
                for (int t = 0; t < upper.count; ++t) {
                    double r1 = lower.values[s], r2 = upper.values[t];
                    if (!product_matches(r1, r2, target)) continue;
                    // Near-double roots are accurate only to sqrt(eps); take the
                    // better conditioned one and the other from the product.
                    const double k1 = root_condition(f_.a(i, pivot_), f_.b(i, pivot_), f_.c(i, pivot_), r1);
                    const double k2 = root_condition(f_.a(pivot_, i), f_.b(pivot_, i), f_.c(pivot_, i), r2);
                    if (k1 <= k2 && r1 != 0.0) {
                        r2 = target / r1;
                    } else if (r2 != 0.0) {
                        r1 = target / r2;
                    }
                    push(r1, r2);
                }
            }
        } else if (lower.any && !upper.any) {
            for (int t = 0; t < upper.count; ++t) {
                if (upper.values[t] != 0.0) push(target / upper.values[t], upper.values[t]);
            }
        } else if (!lower.any && upper.any) {
            for (int s = 0; s < lower.count; ++s) {
                if (lower.values[s] != 0.0) push(lower.values[s], target / lower.values[s]);
            }
        }
        return out;
    }

    bool consistent(std::size_t depth) const {
        const Index i = order_[depth];
        const double xpp = diag_(pivot_);
        for (std::size_t k = 0; k < depth; ++k) {
            const Index j = order_[k];
            if (!is_any(f_, i, j) && quadratic_defect(f_, i, j, col_(i) * row_(j) / xpp) > opt_.tol) return false;
            if (!is_any(f_, j, i) && quadratic_defect(f_, j, i, col_(j) * row_(i) / xpp) > opt_.tol) return false;
        }
        return true;
    }

    bool descend(std::size_t depth) {
        if (depth == order_.size()) return true;
        const Index i = order_[depth];
        for (const auto& [lower, upper] : options_[depth]) {
            if (++nodes_ > opt_.node_budget) return false;
            col_(i) = lower;
            row_(i) = upper;
            if (consistent(depth) && descend(depth + 1)) return true;
        }
        return false;
    }

    const QuadraticField& f_;
    const Vector& diag_;
    Index pivot_;
    const Rank1Options& opt_;
    Index n_;
    double ref_ = 0.0;
    std::vector<Index> order_;
    std::vector<std::vector<Pair>> options_;
    Vector col_, row_;  // x_ip and x_pi
    long nodes_ = 0;
};

}  // namespace

AdmissibilityReport admissibility(const Matrix& a, Index p, double tol) {
    const Index n = a.rows();
    if (a.cols() != n) throw DimensionError("admissibility needs a square feedback matrix");
    if (p < 1 || p > n) throw DomainError("admissibility needs 1 <= P <= N");
    AdmissibilityReport report;
    report.singular_values = Eigen::JacobiSVD<Matrix>(a).singularValues();
    for (Index i = 0; i < n; ++i) {
        const double s = report.singular_values(i);
        if (std::abs(s - 1.0) <= tol) {
            ++report.ones;
        } else if (s < 1.0) {
            ++report.below_one;
        } else {
            ++report.above_one;
        }
    }
    if (report.above_one == 0 && report.below_one >= 1) report.admissible_for_p = report.below_one;
    report.admissible = report.above_one == 0 && report.ones == n - p && report.below_one == p;
    return report;
}

FdnSystem orthogonal_completion(const Matrix& a, Index p, const DelayVector& delays,
                                const OrthogonalCompletionOptions& options) {
    const Index n = a.rows();
    const AdmissibilityReport report = admissibility(a, p, options.admissibility_tol);
    if (!report.admissible) {
        std::ostringstream msg;
        msg << "feedback matrix is not admissible for an orthogonal completion with P = " << p << " ("
            << report.ones << " unit and " << report.below_one << " smaller singular values, " << report.above_one
            << " above one)";
        throw InadmissibleError(msg.str());
    }

    // Rank-P factor of a positive semidefinite matrix from its P largest eigenpairs.
    auto factor = [&](const Matrix& gram) -> Matrix {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
        const Vector& lambda = eig.eigenvalues();
        if (!(lambda(n - p) > options.rank_tol)) {
            throw InadmissibleError("rank of the defect matrix is below P", lambda(n - p));
        }
        return eig.eigenvectors().rightCols(p) * lambda.tail(p).cwiseSqrt().asDiagonal();
    };
    const Matrix identity = Matrix::Identity(n, n);
    const Matrix b = factor(identity - a * a.transpose());
    const Matrix ct = factor(identity - a.transpose() * a);
    const Matrix b_pinv = (b.transpose() * b).ldlt().solve(b.transpose());
    const Matrix d = -(b_pinv * a * ct).transpose();

    FdnSystem fdn(a, b, ct.transpose(), d, delays, DiagonalSimilarity::ones(n));
    const Matrix s = fdn.system_matrix();
    const double residual = (s * s.transpose() - Matrix::Identity(n + p, n + p)).cwiseAbs().maxCoeff();
    if (!(residual <= options.orthogonality_tol)) {
        std::ostringstream msg;
        msg << "orthogonal completion failed: residual " << residual;
        throw InadmissibleError(msg.str(), residual);
    }
    return fdn;
}

Matrix select_rank1_roots(const QuadraticField& field, const Rank1Options& options) {
    const Index n = field.a.rows();
    if (field.a.cols() != n || field.b.rows() != n || field.b.cols() != n || field.c.rows() != n ||
        field.c.cols() != n) {
        throw DimensionError("quadratic coefficient matrices must be square and of equal size");
    }

    Vector diag(n);
    if (field.diagonal) {
        if (field.diagonal->size() != n) throw DimensionError("known diagonal must have N entries");
        diag = *field.diagonal;
    } else {
        for (Index i = 0; i < n; ++i) {
            const Roots r = solve_quadratic(field.a(i, i), field.b(i, i), field.c(i, i), options.tol);
            if (r.any || r.count == 0) {
                throw InadmissibleError("diagonal quadratic has no determined real root");
            }
            diag(i) = r.count == 2 ? 0.5 * (r.values[0] + r.values[1]) : r.values[0];
        }
    }

    const double ref = diag.cwiseAbs().maxCoeff();
    if (!(ref > 0.0)) throw StructureError("every pivot candidate of the rank-one solution is zero");

    std::vector<Index> pivots(static_cast<std::size_t>(n));
    std::iota(pivots.begin(), pivots.end(), Index{0});
    std::stable_sort(pivots.begin(), pivots.end(),
                     [&](Index l, Index r) { return std::abs(diag(l)) > std::abs(diag(r)); });

    bool budget_hit = false;
    for (Index pivot : pivots) {
        if (std::abs(diag(pivot)) <= options.tol * ref) break;
        Rank1Search search(field, diag, pivot, options);
        if (auto x = search.run()) return *x;
        budget_hit = budget_hit || search.exhausted();
    }
    throw InadmissibleError(budget_hit ? "rank-one root search exceeded its node budget"
                                       : "no rank-one consistent root assignment exists");
}

SisoCompletion siso_completion(const Matrix& a, const DelayVector& delays, const SisoCompletionOptions& options) {
    const Index n = a.rows();
    if (a.cols() != n || delays.size() != n) throw DimensionError("completion needs square A and N delays");
    Eigen::PartialPivLU<Matrix> lu(a);
    if (!(lu.rcond() > 1e-12)) throw SingularBlockError("feedback matrix is singular", "A");
    const Matrix a_inv = lu.inverse();
    const double det = lu.determinant();

    SisoCompletionTrace trace;
    trace.a_bar = a.diagonal() - a_inv.diagonal();

    std::string failure = "no branch produced a certified system";
    double best_residual = std::numeric_limits<double>::infinity();
    for (double sign : {1.0, -1.0}) {
        const double d = sign * det;
        trace.d = d;
        trace.r = d * (a.cwiseProduct(a.transpose()) - a_inv.cwiseProduct(a_inv.transpose()) -
                       trace.a_bar * trace.a_bar.transpose());

        QuadraticField field;
        field.a = a_inv;
        field.b = -trace.r;
        field.c = a_inv.transpose().cwiseProduct(d * d * trace.a_bar * trace.a_bar.transpose());
        field.diagonal = d * trace.a_bar;
        try {
            trace.x = select_rank1_roots(field, options.rank1);
        } catch (const InadmissibleError& e) {
            failure = e.what();
            continue;
        }

        // Rank-one split through the pivot row and column keeps small entries
        // relatively accurate; the SVD split is accurate only in norm.
        Index p = 0;
        trace.x.diagonal().cwiseAbs().maxCoeff(&p);
        const double bp = std::sqrt(std::abs(trace.x(p, p)));
        const Vector b_tilde = trace.x.col(p) * (bp / trace.x(p, p));
        const Vector c_tilde = trace.x.row(p).transpose() / bp;

        const double b_scale = b_tilde.cwiseAbs().maxCoeff();
        if ((b_tilde.cwiseAbs().array() <= 1e-14 * b_scale).any()) {
            throw StructureError("rank-one factor has a zero entry; similarity recovery would divide by zero");
        }
        // Row form -(A c~)_i / (b~_i d) and, from the W^-1 identity, the column
        // form -c~_i d / (A^T b~)_i. Per entry, take the one with less cancellation.
        const Vector ac = a * c_tilde;
        const Vector atb = a.transpose() * b_tilde;
        const Vector ac_mass = a.cwiseAbs() * c_tilde.cwiseAbs();
        const Vector atb_mass = a.transpose().cwiseAbs() * b_tilde.cwiseAbs();
        Vector dsim_raw(n);
        for (Index i = 0; i < n; ++i) {
            const bool use_row = ac_mass(i) * std::abs(atb(i)) <= atb_mass(i) * std::abs(ac(i));
            dsim_raw(i) = use_row ? -ac(i) / (b_tilde(i) * d) : -c_tilde(i) * d / atb(i);
        }
        if (!(dsim_raw.array() > 0.0).all()) {
            std::ostringstream msg;
            msg << "recovered diagonal similarity is not positive (min " << dsim_raw.minCoeff() << ")";
            failure = msg.str();
            continue;
        }

        // dsim_0 = 1 first. For widely spread similarities the absolute defect
        // is dominated by the largest entries, so retry with max(dsim) = 1.
        for (const double k : {dsim_raw(0), dsim_raw.maxCoeff()}) {
            Vector b = dsim_raw.cwiseProduct(b_tilde) / std::sqrt(k);
            Vector c = c_tilde.cwiseQuotient(dsim_raw) * std::sqrt(k);
            Index lead = 0;
            b.cwiseAbs().maxCoeff(&lead);
            if (b(lead) < 0.0) {
                b = -b;
                c = -c;
            }
            trace.dsim = DiagonalSimilarity{dsim_raw / k};
            trace.b = b;
            trace.c = c;

            FdnSystem system = FdnSystem::siso(a, b, c, d, delays, trace.dsim);
            const UniallpassCertificate cert = check_theorem3(system, trace.dsim, options.certify_tol);
            trace.certificate_residual = cert.residual;
            best_residual = std::min(best_residual, cert.residual);
            if (cert.verdict) return {std::move(system), std::move(trace)};
        }
        std::ostringstream msg;
        msg << "completed system fails certification (residual " << best_residual << ")";
        failure = msg.str();
    }
    throw InadmissibleError("feedback matrix is not uniallpass-admissible: " + failure,
                            std::isfinite(best_residual) ? best_residual : 0.0);
}

Matrix random_orthogonal(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    }
    return q;
}

FdnSystem random_uniallpass(Index n, Index p, std::uint64_t seed, bool scaled, std::optional<DelayVector> delays) {
    if (n < 1 || p < 1) throw DomainError("random system needs N >= 1 and P >= 1");
    const SystemMatrix s{random_orthogonal(n + p, seed), n};
    FdnSystem fdn = s.to_fdn(delays.value_or(DelayVector::ones(n))).with_dsim(DiagonalSimilarity::ones(n));
    if (!scaled) return fdn;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    Vector t(n);
    for (Index i = 0; i < n; ++i) t(i) = scale(rng);
    return apply_diagonal_similarity(fdn, {t});
}

}  // namespace ufdn
