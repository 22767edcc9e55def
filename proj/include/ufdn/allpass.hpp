#pragma once

#include <cstdint>

#include "ufdn/fdn.hpp"

namespace ufdn {

struct AllpassOptions {
    double tol = 1e-8;
    // The grid is 4 * order equally spaced frequencies plus `random_points`
    // drawn from a fixed-seed generator.
    int random_points = 8;
    std::uint64_t seed = 0x5eedu;
};

struct AllpassReport {
    // max over the grid of the spectral norm of H H^* - I
    double grid_deviation = 0.0;
    Index grid_points = 0;
    // max_j |num_j - sign * den_{M-j}| for the numerator of det H
    double reversal_deviation = 0.0;
    int sign = 1;
    double max_pole_radius = 0.0;
    bool verdict = false;
};

// Checks the allpass property for the system's own delays. Throws
// UnstableError (with the pole list) for systems with |pole| >= 1.
AllpassReport is_allpass(const FdnSystem& fdn, const AllpassOptions& options = {});

// true iff || T^-1 A T ||_2 < 1, a sufficient stability condition for every
// choice of delays.
bool stability_certificate(const Matrix& a, const Vector& t);

}  // namespace ufdn
