#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ufdn/types.hpp"

namespace ufdn {

// Lengths of the N delay lines in samples. Every entry is at least one.
class DelayVector {
public:
    explicit DelayVector(std::vector<int> lengths);

    static DelayVector ones(Index n);

    Index size() const { return static_cast<Index>(lengths_.size()); }
    int operator[](Index i) const { return lengths_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& values() const { return lengths_; }

    // Sum of all delay lengths, i.e. the number of poles of the network.
    long order() const;

    friend bool operator==(const DelayVector&, const DelayVector&) = default;

private:
    std::vector<int> lengths_;
};

// Diagonal of a diagonal similarity transform. Entries must be nonzero; a
// uniallpass certificate additionally requires them to be positive.
struct DiagonalSimilarity {
    Vector d;

    static DiagonalSimilarity ones(Index n) { return {Vector::Ones(n)}; }

    Index size() const { return d.size(); }
    bool all_positive() const { return d.size() > 0 && (d.array() > 0.0).all(); }
    bool all_nonzero() const { return (d.array() != 0.0).all(); }
};

// A feedback delay network in delay state space form:
//
//   y(n)     = C s(n) + D x(n)
//   s(n + m) = A s(n) + B x(n)
//
// with N delay lines and P inputs/outputs. The optional `dsim` carries a
// diagonal similarity for which the system matrix certifies as uniallpass.
class FdnSystem {
public:
    FdnSystem(Matrix a, Matrix b, Matrix c, Matrix d, DelayVector delays,
              std::optional<DiagonalSimilarity> dsim = std::nullopt);

    // SISO convenience constructor.
    static FdnSystem siso(Matrix a, const Vector& b, const Vector& c, double d, DelayVector delays,
                          std::optional<DiagonalSimilarity> dsim = std::nullopt);

    const Matrix& a() const { return a_; }
    const Matrix& b() const { return b_; }
    const Matrix& c() const { return c_; }
    const Matrix& d() const { return d_; }
    const DelayVector& delays() const { return delays_; }
    const std::optional<DiagonalSimilarity>& dsim() const { return dsim_; }

    Index n() const { return a_.rows(); }
    Index p() const { return d_.rows(); }
    bool is_siso() const { return p() == 1; }

    FdnSystem with_delays(DelayVector delays) const;
    FdnSystem with_dsim(std::optional<DiagonalSimilarity> dsim) const;

    // The (N+P) x (N+P) block matrix [[A, B], [C, D]].
    Matrix system_matrix() const;

private:
    Matrix a_, b_, c_, d_;
    DelayVector delays_;
    std::optional<DiagonalSimilarity> dsim_;
};

// Block matrix [[A, B], [C, D]] together with its split point N.
struct SystemMatrix {
    Matrix u;
    Index split;

    static SystemMatrix from(const FdnSystem& fdn) { return {fdn.system_matrix(), fdn.n()}; }

    Matrix a() const { return u.topLeftCorner(split, split); }
    Matrix b() const { return u.topRightCorner(split, u.cols() - split); }
    Matrix c() const { return u.bottomLeftCorner(u.rows() - split, split); }
    Matrix d() const { return u.bottomRightCorner(u.rows() - split, u.cols() - split); }

    FdnSystem to_fdn(DelayVector delays) const;
};

// diag(z^-m_1, ..., z^-m_N). Throws DomainError for z = 0.
CMatrix delay_matrix(const DelayVector& delays, Complex z);

struct TransferSample {
    Complex z;
    CMatrix h;
};

// H(z) = C (diag(z^m) - A)^-1 B + D. Throws PoleEvaluationError when the loop
// matrix is numerically singular at z.
TransferSample transfer_function(const FdnSystem& fdn, Complex z);

// Impulse responses h[out][in][n] of the time-domain recursion.
class ImpulseResponse {
public:
    ImpulseResponse(Index outputs, Index inputs, Index length)
        : outputs_(outputs), inputs_(inputs), length_(length),
          data_(static_cast<std::size_t>(outputs * inputs * length), 0.0) {}

    Index outputs() const { return outputs_; }
    Index inputs() const { return inputs_; }
    Index length() const { return length_; }

    double& at(Index out, Index in, Index n) { return data_[offset(out, in, n)]; }
    double at(Index out, Index in, Index n) const { return data_[offset(out, in, n)]; }

    std::span<const double> channel(Index out, Index in) const {
        return {data_.data() + offset(out, in, 0), static_cast<std::size_t>(length_)};
    }

private:
    std::size_t offset(Index out, Index in, Index n) const {
        return static_cast<std::size_t>((out * inputs_ + in) * length_ + n);
    }

    Index outputs_, inputs_, length_;
    std::vector<double> data_;
};

// Drives unit impulses into each input in turn. Delay lines are ring buffers.
ImpulseResponse impulse_response(const FdnSystem& fdn, Index length);

}  // namespace ufdn
