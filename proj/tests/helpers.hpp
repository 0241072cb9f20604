#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mtlab/profile.hpp"

namespace mtlab::testing {

// smooth decreasing profile: sum of centered Gaussians with random widths
inline RadialProfile random_decreasing_profile(std::mt19937& rng, const RadialGrid& grid) {
    std::uniform_real_distribution<double> amp(0.2, 1.5), width(0.5, 3.0);
    const int terms = 1 + static_cast<int>(rng() % 3);
    std::vector<double> a(terms), s(terms);
    for (int m = 0; m < terms; ++m) {
        a[m] = amp(rng);
        s[m] = width(rng);
    }
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.r_nodes()[i];
        double sum = 0.0;
        for (int m = 0; m < terms; ++m) {
            const double x = r / s[m];
            if (x < 30.0) sum += a[m] * std::exp(-x * x);
        }
        v[i] = sum;
    }
    return RadialProfile(grid, std::move(v), Interp::MonotoneCubic);
}

inline RadialProfile gaussian_profile(const RadialGrid& grid, double width = 1.0,
                                      double amp = 1.0) {
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.r_nodes()[i] / width;
        v[i] = (x < 30.0) ? amp * std::exp(-x * x) : 0.0;
    }
    return RadialProfile(grid, std::move(v), Interp::MonotoneCubic);
}

}  // namespace mtlab::testing
