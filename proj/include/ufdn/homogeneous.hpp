#pragma once

#include <optional>

#include "ufdn/complete.hpp"
#include "ufdn/fdn.hpp"

namespace ufdn {

struct HomogeneousSpec {
    DelayVector delays;
    double gamma = 0.0;
    std::optional<Vector> dsim;  // chosen by choose_dsim when empty
    double slack = 0.9;
};

// Delay-proportional absorption: gains_i = gamma^m_i. Returns the diagonal.
Vector decay_gains(const DelayVector& delays, double gamma);

// d_1 = 1, d_i = d_{i-1} / (slack * gains_i^2). Any slack in (0,1) interleaves.
Vector choose_dsim(const Vector& gains, double slack = 0.9);

// Node sets of the Cauchy matrix: d (the similarity diagonal) and
// dq_i = gains_i^2 d_i.
struct CauchyPair {
    Vector d;
    Vector dq;

    static CauchyPair from(const Vector& d, const Vector& gains);
};

struct InterleavingCheck {
    bool ok = false;
    // 0-based index, in d-ascending order, of the first pair that breaks
    // dq_1 < d_1 < dq_2 < ... < dq_N < d_N.
    std::optional<Index> violation;
};

InterleavingCheck validate_interleaving(const Vector& d, const Vector& dq);

struct CauchyWeights {
    Vector alpha;
    Vector beta;
};

// alpha_i = -A(dq_i) / B'(dq_i), beta_i = B(d_i) / A'(d_i) with
// A(x) = prod(x - d_k), B(x) = prod(x - dq_k). Products are accumulated as
// log-magnitude plus sign.
CauchyWeights cauchy_weights(const CauchyPair& pair, double node_tol = 1e-10);

// U_ij = sqrt(beta_i alpha_j) / (d_i - dq_j). Throws InterleavingError when
// the nodes do not interlace, DomainError for (nearly) coincident nodes and
// ConditioningError when U U^T misses the identity by more than 1e-9.
Matrix cauchy_unitary(const CauchyPair& pair, double node_tol = 1e-10);

struct HomogeneousDesign {
    FdnSystem system;
    double gamma;
    Vector gains;
    CauchyPair pair;
    Matrix u;
    SisoCompletionTrace trace;
};

// A = U diag(gains), completed with siso_completion. All poles of the result
// lie on the circle of radius gamma.
HomogeneousDesign design_homogeneous_siso(const HomogeneousSpec& spec);

}  // namespace ufdn
