#pragma once

#include <stdexcept>

namespace mtlab {

/// Dimension-indexed constants of the Moser-Trudinger problem on R^N.
///
/// omega   = 2 pi^{N/2} / Gamma(N/2), surface area of the unit sphere,
/// beta_n  = N omega^{1/(N-1)}, the sharp exponent,
/// c_n     = (omega/N)^{1/(N-1)} = beta_n / N^{N/(N-1)}, the bubble constant.
struct Dimension {
    int n = 2;
    double omega = 0.0;
    double beta_n = 0.0;
    double c_n = 0.0;
};

/// Builds the constants for integer N >= 2. Gamma(N/2) is evaluated by exact
/// recursion from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi).
Dimension make_dimension(int n);

/// Cap (natural-log scale) above which the truncated exponentials saturate
/// instead of overflowing. Callers distinguish "huge" from NaN via the flag.
inline constexpr double kExpCap = 700.0;

/// Argument below which Phi_N switches to the convergent tail series; above,
/// e^t minus the partial sum is safe from cancellation.
inline constexpr double kSeriesSwitch = 0.5;

/// Phi_N(t) = e^t - sum_{k=0}^{N-2} t^k/k!.  t >= 0.
/// Sets *saturated when t exceeds kExpCap (value is then Phi_N(kExpCap)).
double phi_n(double t, const Dimension& dim, bool* saturated = nullptr);

/// Psi_N(t) = Phi_N(t) - t^{N-1}/(N-1)!.
double psi_n(double t, const Dimension& dim, bool* saturated = nullptr);

/// Phi_N'(t) = Phi_N(t) + t^{N-2}/(N-2)!.  For N = 2 the added term is 1.
double phi_n_prime(double t, const Dimension& dim, bool* saturated = nullptr);

/// sum_{k=1}^{N-1} 1/k, the Carleson-Chang exponent.
double harmonic_sum(const Dimension& dim);

/// k! for small integer k.
double factorial(int k);

}  // namespace mtlab
