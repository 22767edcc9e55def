#pragma once

#include <cstdint>
#include <optional>

#include "ufdn/fdn.hpp"
#include "ufdn/verify.hpp"

namespace ufdn {

// Fiedler's characterization: an N x N block of an orthogonal (N+P) x (N+P)
// matrix has N-P unit singular values and P singular values below one.
struct AdmissibilityReport {
    Vector singular_values;  // descending
    Index below_one = 0;     // count < 1 - tol
    Index ones = 0;          // count within tol of 1
    Index above_one = 0;     // count > 1 + tol
    // smallest P with N-P unit singular values (and none above one)
    std::optional<Index> admissible_for_p;
    bool admissible = false;  // for the requested P
};

AdmissibilityReport admissibility(const Matrix& a, Index p, double tol = 1e-9);

struct OrthogonalCompletionOptions {
    double rank_tol = 1e-10;
    double admissibility_tol = 1e-9;
    double orthogonality_tol = 1e-9;
};

// Completes A to an orthogonal system matrix (dsim = ones). Throws
// InadmissibleError when the singular values do not fit P, or when the
// assembled matrix fails the orthogonality check.
FdnSystem orthogonal_completion(const Matrix& a, Index p, const DelayVector& delays,
                                const OrthogonalCompletionOptions& options = {});

// Per-entry quadratics  a_ij x^2 + b_ij x + c_ij = 0  for the entries of the
// rank-one matrix X = b~ c~.
struct QuadraticField {
    Matrix a, b, c;
    // Entries known independently of the quadratics (the diagonal, for the
    // SISO completion). Empty when unknown.
    std::optional<Vector> diagonal;
};

struct Rank1Options {
    double tol = 1e-7;
    long node_budget = 1'000'000;
};

// Chooses one root per entry such that X has rank one. Throws
// InadmissibleError when no consistent assignment exists and StructureError
// when every pivot candidate is degenerate.
Matrix select_rank1_roots(const QuadraticField& field, const Rank1Options& options = {});

struct SisoCompletionTrace {
    double d = 0.0;
    Vector a_bar;  // diag(A) - diag(A^-1)
    Matrix r;      // d (A.*A^T - A^-1.*A^-T - a_bar a_bar^T)
    Matrix x;      // rank-one solution b~ c~
    DiagonalSimilarity dsim;
    Vector b, c;
    double certificate_residual = 0.0;
};

struct SisoCompletion {
    FdnSystem system;
    SisoCompletionTrace trace;
};

struct SisoCompletionOptions {
    double certify_tol = 1e-8;
    Rank1Options rank1;
};

// Six-step SISO completion: direct gain from det A, diagonal defect, right
// hand side, rank-one quadratic solve, similarity recovery, gains. The
// returned system is certified with its dsim; dsim is normalized so that
// dsim_0 = 1, and the joint sign of (b, c) makes the largest |b_i| positive.
SisoCompletion siso_completion(const Matrix& a, const DelayVector& delays, const SisoCompletionOptions& options = {});

// Haar-distributed orthogonal matrix from the QR factorization of a seeded
// Gaussian matrix.
Matrix random_orthogonal(Index n, std::uint64_t seed);

// Splits a random orthogonal (N+P) x (N+P) system matrix; optionally applies a
// random positive diagonal similarity. delays default to ones.
FdnSystem random_uniallpass(Index n, Index p, std::uint64_t seed, bool scaled,
                            std::optional<DelayVector> delays = std::nullopt);

}  // namespace ufdn
