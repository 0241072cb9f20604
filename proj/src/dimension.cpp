#include "mtlab/dimension.hpp"

#include <cmath>

namespace mtlab {

namespace {

// Gamma(n/2) by exact recursion; n is the doubled argument.
double gamma_half_integer(int n) {
    double g = (n % 2 == 0) ? 1.0 : std::sqrt(M_PI);  // Gamma(1) or Gamma(1/2)
    for (int m = (n % 2 == 0) ? 2 : 1; m < n; m += 2) {
        g *= 0.5 * m;  // Gamma(x+1) = x Gamma(x) with x = m/2
    }
    return g;
}

}  // namespace

Dimension make_dimension(int n) {
    if (n < 2) throw std::invalid_argument("make_dimension: N must be >= 2");
    Dimension d;
    d.n = n;
    d.omega = 2.0 * std::pow(M_PI, 0.5 * n) / gamma_half_integer(n);
    d.beta_n = n * std::pow(d.omega, 1.0 / (n - 1));
    d.c_n = std::pow(d.omega / n, 1.0 / (n - 1));
    return d;
}

double factorial(int k) {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
}

namespace {

// sum_{k>=k0} t^k/k!, truncated at 1e-16 relative. Safe for small t where the
// e^t-minus-partial-sum form cancels.
double exp_tail_series(double t, int k0) {
    double term = 1.0;
    for (int k = 1; k <= k0; ++k) term *= t / k;
    double sum = term;
    for (int k = k0 + 1; term > 1e-16 * sum && k < 200; ++k) {
        term *= t / k;
        sum += term;
    }
    return sum;
}

// e^t - sum_{k=0}^{k0-1} t^k/k! for t above the series switch.
double exp_minus_partial(double t, int k0) {
    double partial = 0.0, term = 1.0;
    for (int k = 0; k < k0; ++k) {
        partial += term;
        term *= t / (k + 1);
    }
    return std::exp(t) - partial;
}

double truncated_exp(double t, int k0, bool* saturated) {
    if (t < 0.0) throw std::invalid_argument("truncated exponential: t must be >= 0");
    if (t > kExpCap) {
        if (saturated) *saturated = true;
        t = kExpCap;
    }
    return t < kSeriesSwitch ? exp_tail_series(t, k0) : exp_minus_partial(t, k0);
}

}  // namespace

double phi_n(double t, const Dimension& dim, bool* saturated) {
    return truncated_exp(t, dim.n - 1, saturated);
}

double psi_n(double t, const Dimension& dim, bool* saturated) {
    return truncated_exp(t, dim.n, saturated);
}

double phi_n_prime(double t, const Dimension& dim, bool* saturated) {
    if (t < 0.0) throw std::invalid_argument("phi_n_prime: t must be >= 0");
    const double capped = std::min(t, kExpCap);
    double lead = 1.0;
    for (int k = 1; k <= dim.n - 2; ++k) lead *= capped / k;
    return phi_n(t, dim, saturated) + lead;
}

double harmonic_sum(const Dimension& dim) {
    double s = 0.0;
    for (int k = 1; k <= dim.n - 1; ++k) s += 1.0 / k;
    return s;
}

}  // namespace mtlab
