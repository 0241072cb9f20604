#pragma once

#include <cmath>

namespace mtlab {

/// Modified Bessel functions I0, K0 of a positive real argument.
/// Small arguments use the exact power series (machine precision for x <= 2);
/// large arguments use the standard Abramowitz-Stegun rational forms
/// (relative error below 2e-7, ample for the oracle comparisons here).

inline double bessel_i0(double x) {
    const double ax = std::abs(x);
    if (ax <= 3.75) {
        double sum = 1.0, term = 1.0;
        const double q = 0.25 * x * x;
        for (int k = 1; k < 40; ++k) {
            term *= q / (k * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum;
    }
    const double t = 3.75 / ax;
    const double p = 0.39894228 + t * (0.01328592 + t * (0.00225319 + t * (-0.00157565 +
                     t * (0.00916281 + t * (-0.02057706 + t * (0.02635537 +
                     t * (-0.01647633 + t * 0.00392377)))))));
    return p * std::exp(ax) / std::sqrt(ax);
}

inline double bessel_k0(double x) {
    if (!(x > 0.0)) return INFINITY;
    if (x <= 2.0) {
        // K0 = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} (x^2/4)^k H_k / (k!)^2
        constexpr double gamma = 0.577215664901532860606512;
        const double q = 0.25 * x * x;
        double term = 1.0, hk = 0.0, sum = 0.0;
        for (int k = 1; k < 40; ++k) {
            term *= q / (k * k);
            hk += 1.0 / k;
            sum += term * hk;
            if (term * hk < 1e-17 * (sum + 1e-300)) break;
        }
        return -(std::log(0.5 * x) + gamma) * bessel_i0(x) + sum;
    }
    const double t = 2.0 / x;
    const double p = 1.25331414 + t * (-0.07832358 + t * (0.02189568 + t * (-0.01062446 +
                     t * (0.00587872 + t * (-0.00251540 + t * 0.00053208)))));
    return p * std::exp(-x) / std::sqrt(x);
}

}  // namespace mtlab
