// Rounded reference values (three or two decimals).
#pragma once

#include <vector>

#include "ufdn/types.hpp"

namespace fixture {

using ufdn::Matrix;
using ufdn::Vector;

inline Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<ufdn::Index>(v.size()));
    ufdn::Index k = 0;
    for (double x : v) out(k++) = x;
    return out;
}

inline Matrix mat6(std::initializer_list<double> v) {
    Matrix m(6, 6);
    ufdn::Index k = 0;
    for (double x : v) {
        m(k / 6, k % 6) = x;
        ++k;
    }
    return m;
}

// Three-line counterexample: minors over (cardinality, lexicographic) subsets.
inline const std::vector<double> kInvMinors{1.00, -4.86, 2.44, -1.63, 1.15, 7.89, -4.30, -3.47};
inline const std::vector<double> kSchurMinors{1.00, -1.49, -0.92, -1.63, 1.15, -8.97, 12.56, -3.47};
// numerator / denominator lists for m = [1,1,1], [2,1,1], [2,2,1]
inline const std::vector<double> kNum111{0.29, 1.17, 1.37, 1.00};
inline const std::vector<double> kDen111{1.00, 1.37, 1.17, 0.29};
inline const std::vector<double> kNum211{0.29, 0.74, 4.05, -2.26, 1.00};
inline const std::vector<double> kDen211{1.00, 2.61, 0.16, -0.23, 0.29};
inline const std::vector<double> kNum221{0.29, 0.47, 0.70, 1.03, 0.33, 1.00};
inline const std::vector<double> kDen221{1.00, 0.33, 1.03, 0.70, 0.47, 0.29};

// Homogeneous-decay worked example.
inline const std::vector<int> kHomDelays{13, 22, 1, 10, 5, 3};
inline constexpr double kHomGamma = 0.99;
inline const Vector kHomGains = vec({0.878, 0.802, 0.990, 0.904, 0.951, 0.970});
inline const Vector kHomDsim = vec({1.000, 1.808, 2.096, 2.743, 3.413, 3.662});
inline const Matrix kHomU = mat6({0.702, -0.708, -0.034, -0.059, -0.027, -0.006,  //
                                  0.474, 0.540,  -0.448, -0.515, -0.132, -0.026,  //
                                  0.120, 0.120,  0.853,  -0.491, -0.055, -0.010,  //
                                  0.327, 0.289,  0.210,  0.589,  -0.642, -0.078,  //
                                  0.136, 0.114,  0.059,  0.141,  0.378,  -0.896,  //
                                  0.378, 0.310,  0.152,  0.352,  0.651,  0.437});
inline const Matrix kHomA = mat6({0.616, -0.568, -0.034, -0.054, -0.025, -0.005,  //
                                  0.416, 0.433,  -0.443, -0.466, -0.125, -0.025,  //
                                  0.105, 0.097,  0.844,  -0.444, -0.052, -0.010,  //
                                  0.287, 0.232,  0.208,  0.533,  -0.611, -0.076,  //
                                  0.120, 0.091,  0.059,  0.127,  0.360,  -0.869,  //
                                  0.332, 0.249,  0.151,  0.318,  0.619,  0.424});
inline const Vector kHomB = vec({0.159, 0.483, 0.156, 0.633, 0.354, 1.073});
inline const Vector kHomC = -vec({0.675, 0.290, 0.064, 0.109, 0.062, 0.014});
inline constexpr double kHomD = 0.581;

inline const Vector kDesignGains = vec({0.3, 0.4, 0.5, 0.6, 0.7, 0.8});

}  // namespace fixture
