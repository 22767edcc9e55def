#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ufdn {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument values (z = 0, gamma outside (0,1), nonpositive delays, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Inconsistent matrix/vector dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

// The loop matrix diag(z^m) - A is singular at the requested z.
class PoleEvaluationError : public Error {
public:
    PoleEvaluationError(const std::string& what, Complex z) : Error(what), z_(z) {}
    Complex z() const { return z_; }

private:
    Complex z_;
};

// A numerical fit or decomposition is too ill-conditioned to be trusted.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// The system (or polynomial) has poles on or outside the unit circle.
class UnstableError : public Error {
public:
    UnstableError(const std::string& what, std::vector<Complex> poles)
        : Error(what), poles_(std::move(poles)) {}
    const std::vector<Complex>& poles() const { return poles_; }

private:
    std::vector<Complex> poles_;
};

// A block that has to be inverted is singular. `block` names it ("A" or "D").
class SingularBlockError : public Error {
public:
    SingularBlockError(const std::string& what, std::string block) : Error(what), block_(std::move(block)) {}
    const std::string& block() const { return block_; }

private:
    std::string block_;
};

// A structural requirement (fully connected matrix, nonzero pivot) is violated.
class StructureError : public Error {
public:
    using Error::Error;
};

// No uniallpass certificate / completion exists along the attempted route.
class InadmissibleError : public Error {
public:
    InadmissibleError(const std::string& what, double residual = 0.0) : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// The node sets of a Cauchy pair do not interlace. `index` is the 0-based
// position of the offending pair after sorting by d.
class InterleavingError : public Error {
public:
    InterleavingError(const std::string& what, Index index) : Error(what), index_(index) {}
    Index index() const { return index_; }

private:
    Index index_;
};

// Malformed input files.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace ufdn
