#pragma once

#include <vector>

#include "mtlab/profile.hpp"

namespace mtlab {

/// Parameters (beta, alpha) of the functional
///   J[u] = int Phi_N(beta (1 + alpha ||u||_N^N)^{1/(N-1)} |u|^{N/(N-1)}) dx.
/// alpha = 1 is admitted only to demonstrate divergence; beta > beta_N
/// requires the explicit override since the supremum is infinite there.
struct FunctionalParams {
    double beta = 1.0;
    double alpha = 0.0;
    bool allow_supercritical = false;
};

/// Tolerance on membership in the unit Sobolev ball.
inline constexpr double kNormTolerance = 1e-9;

double mt_functional(const RadialProfile& u, const FunctionalParams& p,
                     EvalFlags* flags = nullptr);

/// Same with Psi_N in place of Phi_N; differs from mt_functional by the
/// closed-form L^N term beta^{N-1}(1+alpha m) m / (N-1)! with m = ||u||_N^N.
double mt_functional_psi(const RadialProfile& u, const FunctionalParams& p,
                         EvalFlags* flags = nullptr);

/// Node-wise check of the tau-scaling reduction: with tau = 1 - alpha and
/// w = u / (||grad u||_N^N + tau ||u||_N^N)^{1/N}, the exponent
/// (1+alpha||u||_N^N)^{1/(N-1)} |u|^{N/(N-1)} never exceeds |w|^{N/(N-1)}.
/// Returns both sides at the node where the left side peaks.
struct TauReduction {
    double lhs = 0.0;
    double rhs = 0.0;
    double max_violation = 0.0;  // max over nodes of lhs - rhs
};
TauReduction tau_reduction_check(const RadialProfile& u, double alpha);

/// One sample of the scaled-family lower-bound sweep: J on the normalized
/// family v_t against the two-term expansion of the same quantity.
struct LowerBoundPoint {
    double t = 0.0;
    double j_value = 0.0;
    double expansion_value = 0.0;
};
std::vector<LowerBoundPoint> lower_bound_curve(const RadialProfile& v,
                                               const FunctionalParams& p,
                                               const std::vector<double>& t_values);

/// d/dt J[w_t] at t = 1 along the normalized scaling curve (N = 2 only).
/// finite_difference is the primary estimate (central difference with
/// Richardson extrapolation); series is the independent truncated-series
/// route. A negative sign across unit-norm profiles signals nonexistence.
struct IshiwataDerivative {
    double finite_difference = 0.0;
    double series = 0.0;
};
IshiwataDerivative ishiwata_derivative(const RadialProfile& v, const FunctionalParams& p);

}  // namespace mtlab
