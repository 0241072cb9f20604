#pragma once

#include <string>

#include "mtlab/functional.hpp"

namespace mtlab {

/// Euler-Lagrange multipliers of the constrained problem:
///   lambda    = int Phi_N'(E) u^{N/(N-1)} dx  with the full exponent E,
///   alpha_eps = (1 + alpha m)/(1 + 2 alpha m),  gamma_eps = alpha/(1 + 2 alpha m),
/// where m = ||u||_N^N.
struct Multipliers {
    double lambda = 0.0;
    double alpha_eps = 1.0;
    double gamma_eps = 0.0;
};

struct ConcentrationDiagnostics {
    double c0 = 0.0;      // u(0)
    double ln_mass = 0.0; // ||u||_N^N
    double r_conc = 0.0;  // concentration radius; underflows to 0 legitimately
};

struct MaximizerReport {
    RadialProfile profile;
    double value = 0.0;
    Multipliers multipliers;
    double el_residual = 0.0;
    ConcentrationDiagnostics concentration;
    int iterations = 0;
    bool converged = false;
    double monotonicity_defect = 0.0;  // most negative accepted step gain
    bool experimental_critical = false;  // beta at beta_N: concentration may hit the grid
};

Multipliers el_multipliers(const RadialProfile& u, const FunctionalParams& p,
                           const Dimension& dim);

/// Weak-form defect of the Euler-Lagrange equation against a battery of
/// compactly supported radial bumps, each normalized by its Sobolev norm,
/// evaluated with the library quadrature (so the defect vanishes at the
/// discrete optimum up to the remaining ascent gap).
double el_residual(const RadialProfile& u, const FunctionalParams& p, const Dimension& dim);

ConcentrationDiagnostics concentration_diagnostics(const RadialProfile& u,
                                                   const FunctionalParams& p,
                                                   const Dimension& dim);

/// Projected gradient ascent over decreasing nonnegative profiles on the unit
/// Sobolev sphere: analytic discrete gradient, tangent projection,
/// backtracking step, pool-adjacent-violators projection, renormalization.
/// Deterministic for a fixed seed and budget.
MaximizerReport maximize(const FunctionalParams& p, const Dimension& dim,
                         const RadialProfile& seed, int budget);

/// Named seed battery: "gaussian", "moser5", "bump", "sech", and
/// "ground-state" (N = 2 only). Unit Sobolev norm, decreasing.
RadialProfile make_seed(const std::string& name, const Dimension& dim,
                        const RadialGrid* grid = nullptr);

}  // namespace mtlab
