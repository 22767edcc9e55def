#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ufdn/fdn.hpp"

namespace ufdn {

// Generalized characteristic polynomial det(diag(z^m) - A) of degree
// M = sum(m), normalized by z^-M.
//
// Storage is ascending in powers of z^-1: coeffs()[j] multiplies z^-j, so
// coeffs()[0] is always 1. In terms of the principal-minor expansion
//
//   det(diag(z^m) - A) = sum_k c_k z^k,
//   c_k = sum_{I : sum_{i in I} m_i = k} (-1)^{N-|I|} det A(I^c),
//
// coeffs()[j] = c_{M-j}. Use c(k) to read the positive-power form.
class GcpPolynomial {
public:
    explicit GcpPolynomial(Vector coeffs) : coeffs_(std::move(coeffs)) {}

    const Vector& coeffs() const { return coeffs_; }
    Index degree() const { return coeffs_.size() - 1; }
    double c(Index k) const { return coeffs_(degree() - k); }

    // Evaluates sum_j coeffs[j] z^-j.
    Complex operator()(Complex z) const;

private:
    Vector coeffs_;
};

// Evaluates sum_j coeffs[j] w^j (Horner).
Complex evaluate_ascending(const Eigen::Ref<const Vector>& coeffs, Complex w);

// Determinant of A restricted to rows/columns `indices` (0-based). The empty
// set yields 1. Throws DomainError for out-of-range or repeated indices.
double principal_minor(const Matrix& a, std::span<const int> indices);

// All subsets of {0..n-1}, ordered by cardinality, then lexicographically.
std::vector<std::vector<int>> ordered_subsets(int n);

// Visits the subsets of ordered_subsets(n) in order without materializing them.
void for_each_ordered_subset(int n, const std::function<void(std::span<const int>)>& visit);

// Principal minors of A over ordered_subsets(N).
std::vector<double> principal_minors(const Matrix& a);

// GCP via the principal-minor expansion when N <= 16, otherwise by
// evaluating det(diag(z^m) - A) on the unit circle and interpolating.
GcpPolynomial gcp(const Matrix& a, const DelayVector& delays);

// GCP via the principal-minor expansion only (2^N determinants).
GcpPolynomial gcp_from_minors(const Matrix& a, const DelayVector& delays);

// GCP via evaluation on the unit circle and interpolation.
GcpPolynomial gcp_from_samples(const Matrix& a, const DelayVector& delays);

// Result of fitting a polynomial in w = z^-1 of known degree to samples on
// the unit circle. `residual` is the worst sample misfit relative to the
// largest sample magnitude, including the imaginary parts discarded from the
// real coefficients.
struct CircleFit {
    Vector coeffs;
    double residual;
};

// Fits sum_j c_j w^j (j = 0..degree) to f(w) sampled at 2(degree+1) equally
// spaced points of the unit circle.
CircleFit fit_on_circle(const std::function<Complex(Complex)>& f, Index degree);

GcpPolynomial denominator_poly(const FdnSystem& fdn);

// P x P matrix of numerator polynomials, ascending in z^-1.
struct NumeratorPolys {
    Index rows = 0;
    Index cols = 0;
    std::vector<Vector> entries;  // row-major
    double residual = 0.0;

    const Vector& at(Index i, Index j) const { return entries[static_cast<std::size_t>(i * cols + j)]; }
};

// Numerators of H(z) = N(z) / gcp(z) by evaluation and interpolation. Throws
// ConditioningError when the fit residual exceeds `tol`.
NumeratorPolys numerator_poly(const FdnSystem& fdn, double tol = 1e-8);

// Numerator of det H(z) over the same denominator.
CircleFit det_numerator_poly(const FdnSystem& fdn);

// Roots of sum_j coeffs[j] x^(K-j) (descending powers, coeffs[0] leading)
// from the eigenvalues of the balanced companion matrix. Throws DomainError
// when the leading coefficient is zero.
std::vector<Complex> polynomial_roots(const Eigen::Ref<const Vector>& descending);

// All sum(m) poles of the network.
std::vector<Complex> poles(const FdnSystem& fdn);

bool is_stable(std::span<const Complex> poles);

}  // namespace ufdn
