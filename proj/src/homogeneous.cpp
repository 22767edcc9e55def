#include "ufdn/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ufdn {

namespace {

std::vector<Index> ascending_order(const Vector& d) {
    std::vector<Index> order(static_cast<std::size_t>(d.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) { return d(l) < d(r); });
    return order;
}

// Product of factors kept as sum of log|f| and a sign.
struct LogProduct {
    double log_abs = 0.0;
    int sign = 1;

    void times(double f) {
        log_abs += std::log(std::abs(f));
        if (f < 0.0) sign = -sign;
    }
    void divide(double f) {
        log_abs -= std::log(std::abs(f));
        if (f < 0.0) sign = -sign;
    }
};

}  // namespace

Vector decay_gains(const DelayVector& delays, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        std::ostringstream msg;
        msg << "decay rate gamma must lie in (0,1), got " << gamma;
        throw DomainError(msg.str());
    }
    Vector g(delays.size());
    for (Index i = 0; i < delays.size(); ++i) g(i) = std::pow(gamma, delays[i]);
    return g;
}

Vector choose_dsim(const Vector& gains, double slack) {
    if (!(slack > 0.0 && slack < 1.0)) throw DomainError("slack must lie in (0,1)");
    Vector d(gains.size());
    if (d.size() == 0) return d;
    d(0) = 1.0;
    for (Index i = 1; i < d.size(); ++i) d(i) = d(i - 1) / (slack * gains(i) * gains(i));
    return d;
}

CauchyPair CauchyPair::from(const Vector& d, const Vector& gains) {
    if (d.size() != gains.size()) throw DimensionError("similarity and gains must have equal length");
    return {d, gains.cwiseAbs2().cwiseProduct(d)};
}

InterleavingCheck validate_interleaving(const Vector& d, const Vector& dq) {
    if (d.size() != dq.size()) throw DimensionError("interleaving needs node sets of equal length");
    const auto order = ascending_order(d);
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Index i = order[k];
        if (!(previous < dq(i) && dq(i) < d(i))) return {false, static_cast<Index>(k)};
        previous = d(i);
    }
    return {true, std::nullopt};
}

CauchyWeights cauchy_weights(const CauchyPair& pair, double node_tol) {
    const Vector& d = pair.d;
    const Vector& dq = pair.dq;
    const Index n = d.size();
    const InterleavingCheck check = validate_interleaving(d, dq);
    if (!check.ok) {
        std::ostringstream msg;
        msg << "Cauchy nodes do not interlace (sorted pair " << *check.violation << ")";
        throw InterleavingError(msg.str(), *check.violation);
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            // relative to the pair: nodes may span many decades
            if (std::abs(d(i) - dq(j)) < node_tol * std::max(std::abs(d(i)), std::abs(dq(j)))) {
                std::ostringstream msg;
                msg << "Cauchy nodes d_" << i << " and dq_" << j << " nearly coincide";
                throw DomainError(msg.str());
            }
        }
    }

    CauchyWeights w{Vector(n), Vector(n)};
    for (Index i = 0; i < n; ++i) {
        LogProduct alpha;
        LogProduct beta;
        alpha.sign = -1;
        for (Index k = 0; k < n; ++k) {
            alpha.times(dq(i) - d(k));
            beta.times(d(i) - dq(k));
            if (k != i) {
                alpha.divide(dq(i) - dq(k));
                beta.divide(d(i) - d(k));
            }
        }
        if (alpha.sign < 0 || beta.sign < 0) {
            throw InterleavingError("Cauchy weights are not positive", i);
        }
        w.alpha(i) = std::exp(alpha.log_abs);
        w.beta(i) = std::exp(beta.log_abs);
    }
    return w;
}

Matrix cauchy_unitary(const CauchyPair& pair, double node_tol) {
    const CauchyWeights w = cauchy_weights(pair, node_tol);
    const Index n = pair.d.size();
    Matrix u(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            u(i, j) = std::sqrt(w.beta(i) * w.alpha(j)) / (pair.d(i) - pair.dq(j));
        }
    }
    const double residual = (u * u.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(residual < 1e-9)) {
        std::ostringstream msg;
        msg << "Cauchy-derived matrix is not orthogonal (residual " << residual << ")";
        throw ConditioningError(msg.str(), residual);
    }
    return u;
}

HomogeneousDesign design_homogeneous_siso(const HomogeneousSpec& spec) {
    const Vector gains = decay_gains(spec.delays, spec.gamma);
    Vector d = spec.dsim ? *spec.dsim : choose_dsim(gains, spec.slack);
    if (d.size() != gains.size()) throw DimensionError("dsim must have one entry per delay line");
    if (!(d.array() > 0.0).all()) throw DomainError("dsim entries must be positive");

    CauchyPair pair = CauchyPair::from(d, gains);
    Matrix u = cauchy_unitary(pair);
    const Matrix a = u * gains.asDiagonal();
    SisoCompletion done = siso_completion(a, spec.delays);
    return {std::move(done.system), spec.gamma, gains, std::move(pair), std::move(u), std::move(done.trace)};
}

}  // namespace ufdn
