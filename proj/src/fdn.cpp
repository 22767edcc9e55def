#include "ufdn/fdn.hpp"

#include <numeric>
#include <sstream>

namespace ufdn {

DelayVector::DelayVector(std::vector<int> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty()) {
        throw DomainError("delay vector must contain at least one delay line");
    }
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
        if (lengths_[i] < 1) {
            std::ostringstream msg;
            msg << "delay line " << i << " has length " << lengths_[i] << "; lengths must be >= 1";
            throw DomainError(msg.str());
        }
    }
}

DelayVector DelayVector::ones(Index n) {
    return DelayVector(std::vector<int>(static_cast<std::size_t>(n), 1));
}

long DelayVector::order() const {
    return std::accumulate(lengths_.begin(), lengths_.end(), 0L);
}

FdnSystem::FdnSystem(Matrix a, Matrix b, Matrix c, Matrix d, DelayVector delays,
                     std::optional<DiagonalSimilarity> dsim)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)),
      delays_(std::move(delays)), dsim_(std::move(dsim)) {
    const Index n = a_.rows();
    const Index p = d_.rows();
    auto fail = [&](const std::string& what) {
        std::ostringstream msg;
        msg << what << " (N=" << n << ", P=" << p << ", A " << a_.rows() << "x" << a_.cols() << ", B "
            << b_.rows() << "x" << b_.cols() << ", C " << c_.rows() << "x" << c_.cols() << ", D "
            << d_.rows() << "x" << d_.cols() << ", " << delays_.size() << " delays)";
        throw DimensionError(msg.str());
    };
    if (n < 1 || a_.cols() != n) fail("feedback matrix must be square and non-empty");
    if (p < 1 || d_.cols() != p) fail("direct gain matrix must be square and non-empty");
    if (b_.rows() != n || b_.cols() != p) fail("input gains must be N x P");
    if (c_.rows() != p || c_.cols() != n) fail("output gains must be P x N");
    if (delays_.size() != n) fail("delay count must equal the feedback matrix size");
    if (dsim_ && dsim_->size() != n) fail("diagonal similarity must have N entries");
}

FdnSystem FdnSystem::siso(Matrix a, const Vector& b, const Vector& c, double d, DelayVector delays,
                          std::optional<DiagonalSimilarity> dsim) {
    Matrix dm(1, 1);
    dm(0, 0) = d;
    return FdnSystem(std::move(a), Matrix(b), Matrix(c.transpose()), dm, std::move(delays),
                     std::move(dsim));
}

FdnSystem FdnSystem::with_delays(DelayVector delays) const {
    return FdnSystem(a_, b_, c_, d_, std::move(delays), dsim_);
}

FdnSystem FdnSystem::with_dsim(std::optional<DiagonalSimilarity> dsim) const {
    return FdnSystem(a_, b_, c_, d_, delays_, std::move(dsim));
}

Matrix FdnSystem::system_matrix() const {
    const Index n = this->n();
    const Index p = this->p();
    Matrix u(n + p, n + p);
    u << a_, b_, c_, d_;
    return u;
}

FdnSystem SystemMatrix::to_fdn(DelayVector delays) const {
    if (u.rows() != u.cols() || split < 1 || split >= u.rows()) {
        throw DimensionError("system matrix must be square with 1 <= split < size");
    }
    return FdnSystem(a(), b(), c(), d(), std::move(delays));
}

CMatrix delay_matrix(const DelayVector& delays, Complex z) {
    if (z == Complex(0.0, 0.0)) {
        throw DomainError("delay matrix is undefined at z = 0");
    }
    CMatrix out = CMatrix::Zero(delays.size(), delays.size());
    for (Index i = 0; i < delays.size(); ++i) {
        out(i, i) = std::pow(z, -delays[i]);
    }
    return out;
}

TransferSample transfer_function(const FdnSystem& fdn, Complex z) {
    if (z == Complex(0.0, 0.0)) {
        throw DomainError("transfer function is evaluated at z != 0 only");
    }
    const Index n = fdn.n();
    CMatrix loop = -fdn.a().cast<Complex>();
    for (Index i = 0; i < n; ++i) {
        loop(i, i) += std::pow(z, fdn.delays()[i]);
    }
    Eigen::PartialPivLU<CMatrix> lu(loop);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream msg;
        msg << "loop matrix is singular at z = " << z;
        throw PoleEvaluationError(msg.str(), z);
    }
    CMatrix h = fdn.c().cast<Complex>() * lu.solve(fdn.b().cast<Complex>()) + fdn.d().cast<Complex>();
    return {z, std::move(h)};
}

ImpulseResponse impulse_response(const FdnSystem& fdn, Index length) {
    if (length < 1) {
        throw DomainError("impulse response length must be positive");
    }
    const Index n = fdn.n();
    const Index p = fdn.p();
    ImpulseResponse out(p, p, length);

    // One ring buffer per delay line; `head` points at the sample leaving the line now.
    std::vector<std::vector<double>> lines(static_cast<std::size_t>(n));
    std::vector<std::size_t> head(static_cast<std::size_t>(n), 0);
    Vector state(n), feedback(n);

    for (Index in = 0; in < p; ++in) {
        for (Index i = 0; i < n; ++i) {
            lines[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(fdn.delays()[i]), 0.0);
            head[static_cast<std::size_t>(i)] = 0;
        }
        for (Index t = 0; t < length; ++t) {
            const double x = (t == 0) ? 1.0 : 0.0;
            for (Index i = 0; i < n; ++i) {
                state(i) = lines[static_cast<std::size_t>(i)][head[static_cast<std::size_t>(i)]];
            }
            for (Index o = 0; o < p; ++o) {
                out.at(o, in, t) = fdn.c().row(o).dot(state) + fdn.d()(o, in) * x;
            }
            feedback.noalias() = fdn.a() * state;
            feedback += fdn.b().col(in) * x;
            for (Index i = 0; i < n; ++i) {
                auto& line = lines[static_cast<std::size_t>(i)];
                auto& h = head[static_cast<std::size_t>(i)];
                line[h] = feedback(i);
                h = (h + 1) % line.size();
            }
        }
    }
    return out;
}

}  // namespace ufdn
