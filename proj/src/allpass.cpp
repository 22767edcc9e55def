#include "ufdn/allpass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ufdn/polynomial.hpp"

namespace ufdn {

AllpassReport is_allpass(const FdnSystem& fdn, const AllpassOptions& options) {
    AllpassReport report;

    const auto pole_list = poles(fdn);
    for (Complex pole : pole_list) report.max_pole_radius = std::max(report.max_pole_radius, std::abs(pole));
    if (!is_stable(pole_list)) {
        std::ostringstream msg;
        msg << "system is unstable: largest pole radius " << report.max_pole_radius;
        throw UnstableError(msg.str(), pole_list);
    }

    const long order = fdn.delays().order();
    const Index p = fdn.p();
    const CMatrix identity = CMatrix::Identity(p, p);

    std::vector<double> freqs;
    const long grid = 4 * order;
    for (long k = 0; k < grid; ++k) {
        freqs.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid));
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> omega(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < options.random_points; ++k) freqs.push_back(omega(rng));

    for (double w : freqs) {
        const CMatrix h = transfer_function(fdn, std::polar(1.0, w)).h;
        const CMatrix defect = h * h.adjoint() - identity;
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(defect, Eigen::EigenvaluesOnly);
        report.grid_deviation = std::max(report.grid_deviation, eig.eigenvalues().cwiseAbs().maxCoeff());
    }
    report.grid_points = static_cast<Index>(freqs.size());

    const Vector den = denominator_poly(fdn).coeffs();
    const Vector num = det_numerator_poly(fdn).coeffs;
    const Vector reversed = den.reverse();
    const double plus = (num - reversed).cwiseAbs().maxCoeff();
    const double minus = (num + reversed).cwiseAbs().maxCoeff();
    report.sign = plus <= minus ? 1 : -1;
    report.reversal_deviation = std::min(plus, minus);

    report.verdict = report.grid_deviation < options.tol && report.reversal_deviation < options.tol;
    return report;
}

bool stability_certificate(const Matrix& a, const Vector& t) {
    if (a.rows() != a.cols() || t.size() != a.rows()) {
        throw DimensionError("stability certificate needs square A and one scaling per row");
    }
    if (!(t.array() > 0.0).all()) {
        throw DomainError("diagonal scaling entries must be positive");
    }
    const Matrix scaled = t.cwiseInverse().asDiagonal() * a * t.asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(scaled);
    return svd.singularValues()(0) < 1.0;
}

}  // namespace ufdn
