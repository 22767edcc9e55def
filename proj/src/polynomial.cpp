#include "ufdn/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ufdn {

namespace {

// Subsets are enumerated as bit masks; above this the 2^N expansion is
// replaced by interpolation.
constexpr Index kMinorExpansionLimit = 16;

std::vector<Complex> circle_nodes(Index count) {
    // Half-step offset keeps the nodes away from w = +-1.
    std::vector<Complex> nodes(static_cast<std::size_t>(count));
    for (Index k = 0; k < count; ++k) {
        const double theta = std::numbers::pi * (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
        nodes[static_cast<std::size_t>(k)] = std::polar(1.0, theta);
    }
    return nodes;
}

// Projects samples taken at circle_nodes(K) onto 1, w, ..., w^degree. The
// monomials are orthogonal over the nodes as long as degree < K.
CircleFit fit_samples(const std::vector<Complex>& nodes, const std::vector<Complex>& samples, Index degree) {
    const Index count = static_cast<Index>(nodes.size());
    CVector coeffs = CVector::Zero(degree + 1);
    for (Index k = 0; k < count; ++k) {
        const Complex inv = std::conj(nodes[static_cast<std::size_t>(k)]);
        Complex power(1.0, 0.0);
        const Complex y = samples[static_cast<std::size_t>(k)];
        for (Index j = 0; j <= degree; ++j) {
            coeffs(j) += y * power;
            power *= inv;
        }
    }
    coeffs /= static_cast<double>(count);

    CircleFit fit{coeffs.real(), 0.0};
    double scale = 0.0;
    double misfit = 0.0;
    for (Index k = 0; k < count; ++k) {
        const Complex y = samples[static_cast<std::size_t>(k)];
        scale = std::max(scale, std::abs(y));
        misfit = std::max(misfit, std::abs(y - evaluate_ascending(fit.coeffs, nodes[static_cast<std::size_t>(k)])));
    }
    fit.residual = scale > 0.0 ? misfit / scale : misfit;
    return fit;
}

void balance(Matrix& m) {
    constexpr double radix = 2.0;
    constexpr double radix2 = radix * radix;
    const Index n = m.rows();
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Index i = 0; i < n; ++i) {
            double c = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
            double r = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= radix2;
            }
            g = r * radix;
            while (c >= g) {
                f /= radix;
                c /= radix2;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                m.row(i) /= f;
                m.col(i) *= f;
            }
        }
    }
}

}  // namespace

Complex evaluate_ascending(const Eigen::Ref<const Vector>& coeffs, Complex w) {
    Complex acc(0.0, 0.0);
    for (Index j = coeffs.size() - 1; j >= 0; --j) {
        acc = acc * w + coeffs(j);
    }
    return acc;
}

Complex GcpPolynomial::operator()(Complex z) const {
    return evaluate_ascending(coeffs_, 1.0 / z);
}

double principal_minor(const Matrix& a, std::span<const int> indices) {
    const Index k = static_cast<Index>(indices.size());
    std::vector<bool> seen(static_cast<std::size_t>(a.rows()), false);
    for (int idx : indices) {
        if (idx < 0 || idx >= a.rows()) {
            std::ostringstream msg;
            msg << "principal minor index " << idx << " out of range for " << a.rows() << "x" << a.cols()
                << " matrix";
            throw DomainError(msg.str());
        }
        if (seen[static_cast<std::size_t>(idx)]) {
            throw DomainError("principal minor indices must be distinct");
        }
        seen[static_cast<std::size_t>(idx)] = true;
    }
    if (k == 0) return 1.0;
    Matrix sub(k, k);
    for (Index r = 0; r < k; ++r) {
        for (Index c = 0; c < k; ++c) {
            sub(r, c) = a(indices[static_cast<std::size_t>(r)], indices[static_cast<std::size_t>(c)]);
        }
    }
    return sub.determinant();
}

void for_each_ordered_subset(int n, const std::function<void(std::span<const int>)>& visit) {
    std::vector<int> current;
    for (int size = 0; size <= n; ++size) {
        // Lexicographic k-combinations of {0..n-1}.
        current.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) current[static_cast<std::size_t>(i)] = i;
        while (true) {
            visit(current);
            int i = size - 1;
            while (i >= 0 && current[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++current[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) {
                current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
}

std::vector<std::vector<int>> ordered_subsets(int n) {
    std::vector<std::vector<int>> out;
    out.reserve(std::size_t{1} << n);
    for_each_ordered_subset(n, [&](std::span<const int> s) { out.emplace_back(s.begin(), s.end()); });
    return out;
}

std::vector<double> principal_minors(const Matrix& a) {
    std::vector<double> out;
    for_each_ordered_subset(static_cast<int>(a.rows()), [&](std::span<const int> s) {
        out.push_back(principal_minor(a, s));
    });
    return out;
}

GcpPolynomial gcp_from_minors(const Matrix& a, const DelayVector& delays) {
    const Index n = a.rows();
    if (a.cols() != n || delays.size() != n) {
        throw DimensionError("gcp needs a square matrix with one delay per row");
    }
    if (n > 30) {
        throw DomainError("principal-minor expansion is limited to N <= 30");
    }
    const long order = delays.order();
    Vector coeffs = Vector::Zero(order + 1);
    std::vector<int> complement;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
        // `mask` selects the rows contributing z^{m_i}; the rest form the minor.
        long k = 0;
        complement.clear();
        for (Index i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                k += delays[i];
            } else {
                complement.push_back(static_cast<int>(i));
            }
        }
        const double sign = (complement.size() % 2 == 0) ? 1.0 : -1.0;
        coeffs(order - k) += sign * principal_minor(a, complement);
    }
    return GcpPolynomial(std::move(coeffs));
}

GcpPolynomial gcp_from_samples(const Matrix& a, const DelayVector& delays) {
    const Index n = a.rows();
    if (a.cols() != n || delays.size() != n) {
        throw DimensionError("gcp needs a square matrix with one delay per row");
    }
    const Index order = delays.order();
    // z^-M det(diag(z^m) - A) = det(I - diag(w^m) A) with w = z^-1.
    auto nodes = circle_nodes(2 * (order + 1));
    std::vector<Complex> samples;
    samples.reserve(nodes.size());
    const CMatrix ac = a.cast<Complex>();
    for (Complex w : nodes) {
        CMatrix loop = CMatrix::Identity(n, n);
        for (Index i = 0; i < n; ++i) {
            loop.row(i) -= std::pow(w, delays[i]) * ac.row(i);
        }
        samples.push_back(loop.determinant());
    }
    CircleFit fit = fit_samples(nodes, samples, order);
    fit.coeffs(0) = 1.0;
    return GcpPolynomial(std::move(fit.coeffs));
}

GcpPolynomial gcp(const Matrix& a, const DelayVector& delays) {
    return a.rows() <= kMinorExpansionLimit ? gcp_from_minors(a, delays) : gcp_from_samples(a, delays);
}

CircleFit fit_on_circle(const std::function<Complex(Complex)>& f, Index degree) {
    auto nodes = circle_nodes(2 * (degree + 1));
    std::vector<Complex> samples;
    samples.reserve(nodes.size());
    for (Complex w : nodes) samples.push_back(f(w));
    return fit_samples(nodes, samples, degree);
}

GcpPolynomial denominator_poly(const FdnSystem& fdn) {
    return gcp(fdn.a(), fdn.delays());
}

NumeratorPolys numerator_poly(const FdnSystem& fdn, double tol) {
    const GcpPolynomial den = denominator_poly(fdn);
    const Index order = den.degree();
    const Index p = fdn.p();
    auto nodes = circle_nodes(2 * (order + 1));

    std::vector<CMatrix> values;
    values.reserve(nodes.size());
    for (Complex w : nodes) {
        values.push_back(transfer_function(fdn, 1.0 / w).h * evaluate_ascending(den.coeffs(), w));
    }

    NumeratorPolys out;
    out.rows = p;
    out.cols = p;
    std::vector<Complex> samples(nodes.size());
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            for (std::size_t k = 0; k < nodes.size(); ++k) samples[k] = values[k](i, j);
            CircleFit fit = fit_samples(nodes, samples, order);
            out.residual = std::max(out.residual, fit.residual);
            out.entries.push_back(std::move(fit.coeffs));
        }
    }
    if (!(out.residual <= tol)) {
        std::ostringstream msg;
        msg << "numerator interpolation residual " << out.residual << " exceeds " << tol;
        throw ConditioningError(msg.str(), out.residual);
    }
    return out;
}

CircleFit det_numerator_poly(const FdnSystem& fdn) {
    const GcpPolynomial den = denominator_poly(fdn);
    return fit_on_circle(
        [&](Complex w) {
            return transfer_function(fdn, 1.0 / w).h.determinant() * evaluate_ascending(den.coeffs(), w);
        },
        den.degree());
}

std::vector<Complex> polynomial_roots(const Eigen::Ref<const Vector>& descending) {
    if (descending.size() == 0) {
        throw DomainError("polynomial has no coefficients");
    }
    const double lead = descending(0);
    if (lead == 0.0 || !std::isfinite(lead)) {
        throw DomainError("polynomial leading coefficient is zero; degree is degenerate");
    }
    const Index degree = descending.size() - 1;
    std::vector<Complex> roots;
    if (degree == 0) return roots;
    if (degree == 1) {
        roots.emplace_back(-descending(1) / lead, 0.0);
        return roots;
    }
    Matrix companion = Matrix::Zero(degree, degree);
    companion.row(0) = -descending.tail(degree).transpose() / lead;
    companion.diagonal(-1).setOnes();
    balance(companion);
    Eigen::EigenSolver<Matrix> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw ConditioningError("companion eigenvalue iteration did not converge", 0.0);
    }
    const CVector& eig = solver.eigenvalues();
    roots.assign(eig.data(), eig.data() + eig.size());
    return roots;
}

std::vector<Complex> poles(const FdnSystem& fdn) {
    return polynomial_roots(denominator_poly(fdn).coeffs());
}

bool is_stable(std::span<const Complex> poles) {
    return std::all_of(poles.begin(), poles.end(), [](Complex p) { return std::abs(p) < 1.0; });
}

}  // namespace ufdn
