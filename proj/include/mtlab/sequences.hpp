#pragma once

#include "mtlab/functional.hpp"
#include "mtlab/odes.hpp"
#include "mtlab/profile.hpp"

namespace mtlab {

/// Moser family: height parameter k and dilation R.
struct MoserParams {
    double k = 1.0;
    double big_r = 1.0;
};

/// The truncated-logarithm Moser function u_k(x/R): constant
/// omega^{-1/N}(k/N)^{(N-1)/N} core for |x| < R e^{-k/N}, logarithmic in the
/// annulus, zero outside |x| >= R. Built on a window translate of `grid`
/// (or of the standard grid) so the kinks fall on nodes and the unit
/// gradient norm is exact. Throws if the window cannot contain the core.
RadialProfile moser_profile(const MoserParams& mp, const Dimension& dim,
                            const RadialGrid* grid = nullptr);

/// Leading term R^N N!/(N^N k) of ||u_{k,R}||_N^N.
double moser_norm_asymptotic(const MoserParams& mp, const Dimension& dim);

/// u_{k,R} / ||u_{k,R}||_{W^{1,N}}.
RadialProfile normalized_moser(const MoserParams& mp, const Dimension& dim,
                               const RadialGrid* grid = nullptr);

/// Core-region part of the functional on the normalized Moser function:
///   R^N (omega/N) Phi_N(k [(1+alpha||u~||_N^N)/||u||_W^N]^{1/(N-1)}) e^{-k},
/// the quantity whose k -> infinity limit R^N omega/N drives the divergence
/// MT(N, beta_N, 1) = infinity. Monotone increasing in k, unlike the full
/// functional, which approaches its limit from above.
double moser_core_bound(const MoserParams& mp, const Dimension& dim, double alpha,
                        const RadialGrid* grid = nullptr);

/// The Liouville bubble phi(x) = -((N-1)/beta_N) ln(1 + c_N |x|^{N/(N-1)});
/// phi(0) = 0, decreasing (and negative away from the origin).
RadialProfile blowup_profile(const Dimension& dim, const RadialGrid* grid = nullptr);

/// Quadrature of int e^{(N/(N-1)) beta_N phi} dx over a window wide enough
/// that the integrand falls below 1e-12 of its peak, plus the closed-form
/// power tail. Equals 1 for every N.
double blowup_mass(const Dimension& dim);

/// Moment of the bubble: quadrature of int (1 + c_N |x|^{N/(N-1)})^{-N(1+delta)} dx
/// next to its Gamma-function value Gamma(N) Gamma(1+N delta) / Gamma(N+N delta).
struct LiouvilleMoment {
    double quadrature = 0.0;
    double gamma_value = 0.0;
};
LiouvilleMoment liouville_moment(const Dimension& dim, double delta);

/// (omega/N) e^{beta_N A_alpha + sum_{k=1}^{N-1} 1/k}, the concentration
/// ceiling no blow-up sequence can exceed.
double carleson_chang_bound(const Dimension& dim, double a_alpha);

/// Matched test function of the critical case: Liouville bubble at scale eps
/// inside |x| <= R eps (R = -ln eps), glued to c^{-1/(N-1)} G_alpha outside.
/// The constants (c, A) solve continuity at R eps and unit Sobolev norm.
struct TestFunctionParams {
    double eps = 1e-3;
    double alpha = 0.0;
    // outputs of the matching solve
    double big_r = 0.0;       // -ln eps
    double c = 0.0;           // peak normalization
    double a_const = 0.0;     // interior additive constant
    double a_alpha = 0.0;
    double continuity_defect = 0.0;
    double norm_defect = 0.0;
    int iterations = 0;
};

struct TestFunction {
    TestFunctionParams params;
    RadialProfile profile;
};

TestFunction test_function(double eps, double alpha, const GreenSolution& g_alpha,
                           const Dimension& dim, const RadialGrid* grid = nullptr);

/// mt_functional(phi_eps, beta_N, alpha) - carleson_chang_bound(A_alpha);
/// positive for small alpha > 0 and small eps.
double test_function_excess(const TestFunction& tf, const Dimension& dim,
                            EvalFlags* flags = nullptr);

}  // namespace mtlab
