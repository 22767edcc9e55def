#pragma once

#include <vector>

#include "ufdn/fdn.hpp"

namespace ufdn {

struct UniallpassCertificate {
    DiagonalSimilarity dsim;
    // max-abs defect of  S diag(dsim, I) S^T - diag(dsim, I)
    double residual = 0.0;
    bool verdict = false;
};

// Schur complements of the system matrix blocks.
struct SchurPair {
    Matrix s_d;  // A - B D^-1 C
    Matrix s_a;  // D - C A^-1 B
};

// Throws SingularBlockError naming the block ("D" or "A") that cannot be inverted.
SchurPair schur_complements(const FdnSystem& fdn);

// A~ = T^-1 A T, B~ = T^-1 B, C~ = C T, D~ = D. The transfer function is
// unchanged. A stored dsim is transformed to dsim / T^2.
FdnSystem apply_diagonal_similarity(const FdnSystem& fdn, const DiagonalSimilarity& t);

struct LyapunovOptions {
    // off-diagonal Frobenius mass relative to the diagonal mass
    double diagonal_tol = 1e-8;
};

// Solves X - A X A^T = B B^T (Kronecker form) and returns diag(X) when X is
// diagonal and positive. Throws UnstableError for spectral radius >= 1 and
// InadmissibleError when X is not diagonal or not positive.
DiagonalSimilarity dsim_lyapunov(const Matrix& a, const Matrix& b, const LyapunovOptions& options = {});

struct HadamardOptions {
    double tol = 1e-8;
};

// Recovers the diagonal similarity from the Hadamard quotient
// Q = S_D^-1 ./ A^T, which equals d_i / d_j for a uniallpass system with
// fully connected A. The result is normalized to d_0 = 1.
DiagonalSimilarity dsim_hadamard(const FdnSystem& fdn, const HadamardOptions& options = {});

// Fits the global scale s minimizing || s (D - A D A^T) - B B^T || so that a
// scale-free similarity can be plugged into check_theorem3.
DiagonalSimilarity fit_dsim_scale(const FdnSystem& fdn, const DiagonalSimilarity& dsim);

// Sufficient uniallpass condition: true verdict certifies allpass for every
// delay vector.
UniallpassCertificate check_theorem3(const FdnSystem& fdn, const DiagonalSimilarity& dsim, double tol = 1e-8);

struct PrincipalMinorReport {
    bool verdict = false;
    int sign = 1;
    double max_deviation = 0.0;
    std::vector<int> worst_subset;
    // positions (in ordered_subsets order) where the minors differ by more than tol
    std::vector<Index> mismatches;
    std::vector<double> s_d_minors;
    std::vector<double> a_inv_minors;
    // Necessary and sufficient only for SISO systems.
    bool sufficient = false;
};

inline constexpr Index kMaxMinorEnumerationSize = 20;

// Principal-minor condition det S_D(I) = sign * det A^-1(I) for all I.
PrincipalMinorReport check_theorem4(const FdnSystem& fdn, double tol = 1e-8);

// Diagonal similarity with T = dsim^(1/2); the result has an orthogonal
// system matrix when the certificate holds.
FdnSystem balanced_form(const FdnSystem& fdn, const DiagonalSimilarity& dsim);

}  // namespace ufdn
