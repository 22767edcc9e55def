#include "ufdn/verify.hpp"

#include <cmath>
#include <sstream>

#include "ufdn/polynomial.hpp"

namespace ufdn {

namespace {

constexpr double kSingularRcond = 1e-12;

Matrix checked_inverse(const Matrix& m, const std::string& block) {
    Eigen::PartialPivLU<Matrix> lu(m);
    if (!(lu.rcond() > kSingularRcond)) {
        throw SingularBlockError("block " + block + " is singular", block);
    }
    return lu.inverse();
}

Matrix weight(const DiagonalSimilarity& dsim, Index p) {
    const Index n = dsim.size();
    Matrix w = Matrix::Zero(n + p, n + p);
    w.topLeftCorner(n, n) = dsim.d.asDiagonal();
    w.bottomRightCorner(p, p).setIdentity();
    return w;
}

}  // namespace

SchurPair schur_complements(const FdnSystem& fdn) {
    const Matrix d_inv = checked_inverse(fdn.d(), "D");
    const Matrix a_inv = checked_inverse(fdn.a(), "A");
    return {fdn.a() - fdn.b() * d_inv * fdn.c(), fdn.d() - fdn.c() * a_inv * fdn.b()};
}

FdnSystem apply_diagonal_similarity(const FdnSystem& fdn, const DiagonalSimilarity& t) {
    if (t.size() != fdn.n()) throw DimensionError("similarity must have one entry per delay line");
    if (!t.all_nonzero()) throw DomainError("diagonal similarity entries must be nonzero");
    const Vector inv = t.d.cwiseInverse();
    std::optional<DiagonalSimilarity> dsim;
    if (fdn.dsim()) dsim = DiagonalSimilarity{fdn.dsim()->d.cwiseProduct(inv.cwiseAbs2())};
    return FdnSystem(inv.asDiagonal() * fdn.a() * t.d.asDiagonal(), inv.asDiagonal() * fdn.b(),
                     fdn.c() * t.d.asDiagonal(), fdn.d(), fdn.delays(), std::move(dsim));
}

DiagonalSimilarity dsim_lyapunov(const Matrix& a, const Matrix& b, const LyapunovOptions& options) {
    const Index n = a.rows();
    if (a.cols() != n || b.rows() != n) throw DimensionError("Lyapunov solve needs square A and N-row B");

    Eigen::EigenSolver<Matrix> eig(a, false);
    const double radius = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0)) {
        const CVector& ev = eig.eigenvalues();
        std::ostringstream msg;
        msg << "spectral radius " << radius << " >= 1; Lyapunov solution is not unique";
        throw UnstableError(msg.str(), std::vector<Complex>(ev.data(), ev.data() + ev.size()));
    }

    // vec(A X A^T) = (A kron A) vec(X) for column-major vec.
    const Index nn = n * n;
    Matrix kron = Matrix::Identity(nn, nn);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            kron.block(i * n, j * n, n, n) -= a(i, j) * a;
        }
    }
    const Matrix rhs_m = b * b.transpose();
    const Vector rhs = Eigen::Map<const Vector>(rhs_m.data(), nn);
    const Vector sol = kron.partialPivLu().solve(rhs);
    Matrix x = Eigen::Map<const Matrix>(sol.data(), n, n);
    x = 0.5 * (x + x.transpose()).eval();

    const Vector diag = x.diagonal();
    const double off = (x - Matrix(diag.asDiagonal())).norm();
    if (!(off <= options.diagonal_tol * diag.norm())) {
        std::ostringstream msg;
        msg << "Lyapunov solution is not diagonal (off-diagonal mass " << off << " vs diagonal " << diag.norm()
            << "); not uniallpass-certifiable by this route";
        throw InadmissibleError(msg.str(), off);
    }
    if (!(diag.array() > 0.0).all()) {
        throw InadmissibleError("Lyapunov solution has nonpositive diagonal entries", diag.minCoeff());
    }
    return {diag};
}

DiagonalSimilarity dsim_hadamard(const FdnSystem& fdn, const HadamardOptions& options) {
    const Index n = fdn.n();
    const Matrix& a = fdn.a();
    const double scale = a.cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (!(std::abs(a(i, j)) > 1e-14 * scale)) {
                std::ostringstream msg;
                msg << "feedback matrix entry (" << i << "," << j
                    << ") is zero; Hadamard recovery needs a fully connected matrix";
                throw StructureError(msg.str());
            }
        }
    }
    const Matrix s_d = a - fdn.b() * checked_inverse(fdn.d(), "D") * fdn.c();
    const Matrix s_inv = checked_inverse(s_d, "S_D");
    const Matrix q = s_inv.cwiseQuotient(a.transpose());

    Eigen::JacobiSVD<Matrix> svd(q, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vector d = svd.matrixU().col(0);
    if (d.sum() < 0.0) d = -d;
    if (!(d.array() > 0.0).all()) {
        throw InadmissibleError("Hadamard quotient has mixed-sign dominant singular vector", d.minCoeff());
    }
    d /= d(0);

    const Matrix expected = d * d.cwiseInverse().transpose();
    const double residual = (q - expected).cwiseAbs().maxCoeff() / q.cwiseAbs().maxCoeff();
    if (!(residual <= options.tol)) {
        std::ostringstream msg;
        msg << "Hadamard quotient is not diagonally similar to the all-ones matrix (residual " << residual << ")";
        throw InadmissibleError(msg.str(), residual);
    }
    return {d};
}

DiagonalSimilarity fit_dsim_scale(const FdnSystem& fdn, const DiagonalSimilarity& dsim) {
    const Matrix base = Matrix(dsim.d.asDiagonal()) - fdn.a() * dsim.d.asDiagonal() * fdn.a().transpose();
    const Matrix target = fdn.b() * fdn.b().transpose();
    const double denom = base.cwiseAbs2().sum();
    if (!(denom > 0.0)) throw InadmissibleError("degenerate similarity; scale cannot be fitted");
    const double s = base.cwiseProduct(target).sum() / denom;
    if (!(s > 0.0)) throw InadmissibleError("fitted similarity scale is not positive", s);
    return {s * dsim.d};
}

UniallpassCertificate check_theorem3(const FdnSystem& fdn, const DiagonalSimilarity& dsim, double tol) {
    if (dsim.size() != fdn.n()) throw DimensionError("similarity must have one entry per delay line");
    const Matrix s = fdn.system_matrix();
    const Matrix w = weight(dsim, fdn.p());
    UniallpassCertificate cert{dsim, (s * w * s.transpose() - w).cwiseAbs().maxCoeff(), false};
    cert.verdict = cert.residual < tol && dsim.all_positive();
    return cert;
}

PrincipalMinorReport check_theorem4(const FdnSystem& fdn, double tol) {
    const Index n = fdn.n();
    if (n > kMaxMinorEnumerationSize) {
        std::ostringstream msg;
        msg << "principal-minor check enumerates 2^N subsets; N = " << n << " exceeds "
            << kMaxMinorEnumerationSize;
        throw DomainError(msg.str());
    }
    const SchurPair schur = schur_complements(fdn);
    const Matrix a_inv = checked_inverse(fdn.a(), "A");

    PrincipalMinorReport report;
    report.s_d_minors = principal_minors(schur.s_d);
    report.a_inv_minors = principal_minors(a_inv);
    report.sufficient = fdn.is_siso();

    // The sign is the one with fewer mismatching subsets, then smaller deviation.
    double dev[2] = {0.0, 0.0};
    std::size_t misses[2] = {0, 0};
    for (std::size_t k = 0; k < report.s_d_minors.size(); ++k) {
        const double plus = std::abs(report.s_d_minors[k] - report.a_inv_minors[k]);
        const double minus = std::abs(report.s_d_minors[k] + report.a_inv_minors[k]);
        dev[0] = std::max(dev[0], plus);
        dev[1] = std::max(dev[1], minus);
        misses[0] += plus > tol;
        misses[1] += minus > tol;
    }
    const bool plus = misses[0] != misses[1] ? misses[0] < misses[1] : dev[0] <= dev[1];
    report.sign = plus ? 1 : -1;
    report.max_deviation = plus ? dev[0] : dev[1];

    double worst = -1.0;
    Index position = 0;
    for_each_ordered_subset(static_cast<int>(n), [&](std::span<const int> subset) {
        const auto k = static_cast<std::size_t>(position);
        const double diff = std::abs(report.s_d_minors[k] - report.sign * report.a_inv_minors[k]);
        if (diff > worst) {
            worst = diff;
            report.worst_subset.assign(subset.begin(), subset.end());
        }
        if (diff > tol) report.mismatches.push_back(position);
        ++position;
    });
    report.verdict = report.max_deviation < tol;
    return report;
}

FdnSystem balanced_form(const FdnSystem& fdn, const DiagonalSimilarity& dsim) {
    if (!dsim.all_positive()) throw DomainError("balanced form needs a positive diagonal similarity");
    return apply_diagonal_similarity(fdn, {dsim.d.cwiseSqrt()});
}

}  // namespace ufdn
