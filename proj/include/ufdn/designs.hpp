#pragma once

#include "ufdn/fdn.hpp"

namespace ufdn {

// Feedforward-feedback gains, each strictly inside (-1, 1).
class GainVector {
public:
    explicit GainVector(Vector g);

    const Vector& values() const { return g_; }
    Index size() const { return g_.size(); }
    double operator[](Index i) const { return g_(i); }

private:
    Vector g_;
};

struct Design {
    FdnSystem system;
    DiagonalSimilarity dsim;
};

// Schroeder allpasses in series; dsim_i = 1 / (1 - g_i^2).
Design schroeder_series(const GainVector& g, const DelayVector& delays);

// Gardner's nested allpasses, index 0 innermost. dsim from the Lyapunov
// equation of (A, b).
Design gardner_nested(const GainVector& g, const DelayVector& delays);

// The closed form printed alongside the nested realization,
// -1 / prod_{k>=i} (1 - g_k^2). Its magnitude matches the Lyapunov solution;
// the sign does not, so it is not a valid certificate. Kept for comparison.
Vector gardner_printed_dsim(const GainVector& g);

// Poletti's unitary reverberator: A = -gU, B = (1+g)I, C = (1-g)U, D = gI.
// The certificate is the scalar (1+g)/(1-g).
Design poletti_unitary(const Matrix& u, double g, const DelayVector& delays, double tol = 1e-9);

// The printed scalar (1+g)/sqrt(1-g^2). This is the square root of the
// certificate above, i.e. the balancing transform, not dsim itself.
double poletti_printed_dsim(double g);

// Three-line system that is allpass for some delay vectors only, exactly as
// printed with three decimals.
FdnSystem counterexample(const DelayVector& delays = DelayVector::ones(3));

// The printed counterexample moved by the smallest amount (below the printing
// precision) that makes it exactly allpass for m = [1,1,1] and [2,2,1].
FdnSystem counterexample_refined(const DelayVector& delays = DelayVector::ones(3));

}  // namespace ufdn
