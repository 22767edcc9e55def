#include "ufdn/designs.hpp"

#include <cmath>
#include <sstream>

#include "ufdn/polynomial.hpp"
#include "ufdn/verify.hpp"

namespace ufdn {

namespace {

void require_gain(double g, const char* what) {
    if (!(std::abs(g) < 1.0)) {
        std::ostringstream msg;
        msg << what << " " << g << " is not strictly inside (-1, 1)";
        throw DomainError(msg.str());
    }
}

void require_size(const GainVector& g, const DelayVector& delays) {
    if (g.size() != delays.size()) throw DimensionError("need one gain per delay line");
}

// prod_{k=from}^{to-1} f(k); empty products are 1.
template <typename F>
double product(Index from, Index to, F f) {
    double p = 1.0;
    for (Index k = from; k < to; ++k) p *= f(k);
    return p;
}

FdnSystem printed_counterexample(const DelayVector& delays) {
    Matrix a(3, 3);
    a << 1.241, 3.833, -6.028, -0.859, -2.276, 3.582, -0.048, -0.180, -0.332;
    Vector b(3), c(3);
    b << 1.833, -0.469, 0.826;
    c << 0.430, 0.831, 0.452;
    return FdnSystem::siso(a, b, c, 0.288, delays);
}

FdnSystem unpack(const Vector& x, const DelayVector& delays) {
    Matrix a = Eigen::Map<const Matrix>(x.data(), 3, 3).transpose();
    return FdnSystem::siso(a, x.segment(9, 3), x.segment(12, 3), x(15), delays);
}

// Allpass defect: numerator minus reversed denominator, for each delay vector.
Vector reversal_defect(const Vector& x) {
    const DelayVector targets[] = {DelayVector({1, 1, 1}), DelayVector({2, 2, 1})};
    std::vector<double> out;
    for (const auto& m : targets) {
        const FdnSystem f = unpack(x, m);
        const Vector den = denominator_poly(f).coeffs();
        const Vector num = numerator_poly(f, 1e-6).at(0, 0);
        for (Index j = 0; j < num.size(); ++j) out.push_back(num(j) - den(den.size() - 1 - j));
    }
    return Eigen::Map<const Vector>(out.data(), static_cast<Index>(out.size()));
}

// A point within 4.9e-4 of the printed entries whose minor and coefficient
// lists all round to the printed two-decimal values. Found offline by a
// bounded least-squares search; the loop below only polishes it.
Vector refined_anchor() {
    Vector x(16);
    x << 1.2410911605366155, 3.8332810918746567, -6.0282975795027465, -0.8591259817530946, -2.275744975640122,
        3.5818874010652464, -0.04841538778470573, -0.18043764751978042, -0.3315097320868214, 1.8334799616978639,
        -0.4688596771719765, 0.8262930368393561, 0.43019410300964617, 0.8310914208622238, 0.4517396204430206,
        0.2883628937574037;
    return x;
}

Vector refine_counterexample() {
    const Vector x0 = refined_anchor();
    Vector x = x0;
    constexpr double h = 1e-7;
    for (int iter = 0; iter < 50; ++iter) {
        const Vector r = reversal_defect(x);
        if (r.cwiseAbs().maxCoeff() < 1e-14) break;
        Matrix jac(r.size(), x.size());
        for (Index k = 0; k < x.size(); ++k) {
            Vector xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            jac.col(k) = (reversal_defect(xp) - reversal_defect(xm)) / (2.0 * h);
        }
        // Linearized nearest point to x0 on the constraint set.
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(jac);
        cod.setThreshold(1e-10);
        x = x0 + cod.solve(jac * (x - x0) - r);
    }
    return x;
}

}  // namespace

GainVector::GainVector(Vector g) : g_(std::move(g)) {
    if (g_.size() == 0) throw DomainError("gain vector is empty");
    for (Index i = 0; i < g_.size(); ++i) require_gain(g_(i), "gain");
}

Design schroeder_series(const GainVector& g, const DelayVector& delays) {
    require_size(g, delays);
    const Index n = g.size();
    auto gk = [&](Index k) { return g[k]; };
    Matrix a = Matrix::Zero(n, n);
    Vector b(n), c(n), dsim(n);
    for (Index i = 0; i < n; ++i) {
        a(i, i) = -g[i];
        for (Index j = 0; j < i; ++j) a(i, j) = (1.0 - g[j] * g[j]) * product(j + 1, i, gk);
        b(i) = product(0, i, gk);
        c(i) = (1.0 - g[i] * g[i]) * product(i + 1, n, gk);
        dsim(i) = 1.0 / (1.0 - g[i] * g[i]);
    }
    const double d = product(0, n, gk);
    return {FdnSystem::siso(a, b, c, d, delays, DiagonalSimilarity{dsim}), {dsim}};
}

Design gardner_nested(const GainVector& g, const DelayVector& delays) {
    require_size(g, delays);
    const Index n = g.size();
    auto eps = [&](Index j) { return j == 0 ? 1.0 : g[j - 1]; };
    auto loss = [&](Index k) { return 1.0 - g[k] * g[k]; };
    Matrix a = Matrix::Zero(n, n);
    Vector b = Vector::Zero(n), c(n);
    for (Index i = 0; i < n; ++i) {
        a(i, i) = -g[i] * eps(i);
        if (i + 1 < n) a(i, i + 1) = 1.0;
        for (Index j = 0; j < i; ++j) a(i, j) = -g[i] * eps(j) * product(j, i, loss);
        c(i) = eps(i) * product(i, n, loss);
    }
    b(n - 1) = 1.0;
    const DiagonalSimilarity dsim = dsim_lyapunov(a, b);
    return {FdnSystem::siso(a, b, c, g[n - 1], delays, dsim), dsim};
}

Vector gardner_printed_dsim(const GainVector& g) {
    const Index n = g.size();
    Vector out(n);
    for (Index i = 0; i < n; ++i) {
        out(i) = -1.0 / product(i, n, [&](Index k) { return 1.0 - g[k] * g[k]; });
    }
    return out;
}

Design poletti_unitary(const Matrix& u, double g, const DelayVector& delays, double tol) {
    const Index n = u.rows();
    if (u.cols() != n || delays.size() != n) throw DimensionError("Poletti needs a square U and one delay per row");
    require_gain(g, "loop gain");
    const double residual = (u * u.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(residual < tol)) {
        std::ostringstream msg;
        msg << "matrix is not orthogonal (residual " << residual << ")";
        throw DomainError(msg.str());
    }
    const Matrix identity = Matrix::Identity(n, n);
    const DiagonalSimilarity dsim{Vector::Constant(n, (1.0 + g) / (1.0 - g))};
    return {FdnSystem(-g * u, (1.0 + g) * identity, (1.0 - g) * u, g * identity, delays, dsim), dsim};
}

double poletti_printed_dsim(double g) {
    require_gain(g, "loop gain");
    return (1.0 + g) / std::sqrt(1.0 - g * g);
}

FdnSystem counterexample(const DelayVector& delays) {
    if (delays.size() != 3) throw DimensionError("the counterexample has three delay lines");
    return printed_counterexample(delays);
}

FdnSystem counterexample_refined(const DelayVector& delays) {
    if (delays.size() != 3) throw DimensionError("the counterexample has three delay lines");
    static const Vector refined = refine_counterexample();
    return unpack(refined, delays);
}

}  // namespace ufdn
