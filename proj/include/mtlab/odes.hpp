#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mtlab/profile.hpp"

namespace mtlab {

/// Gagliardo-Nirenberg ground state in R^2: the positive decaying solution of
/// Q'' + Q'/r - Q + Q^3 = 0, Q'(0) = 0, found by shooting on Q(0).
/// b2 is the quotient ||Q||_4^4 / (||grad Q||_2^2 ||Q||_2^2) evaluated from
/// integrals carried inside the solve; by the Pohozaev identities it equals
/// 2 / ||Q||_2^2 for the exact solution, which b2_identity reports.
struct GroundState {
    RadialProfile profile;
    double residual = 0.0;       // sup-norm defect of the integrated flux identity
    double b2 = 0.0;
    double b2_identity = 0.0;    // 2 / ||Q||_2^2 from the same solve
    double q0 = 0.0;             // Q(0), the shooting parameter
    double l2_sq = 0.0;          // ||Q||_2^2
    double l4_pow4 = 0.0;        // ||Q||_4^4
    double grad_sq = 0.0;        // ||grad Q||_2^2
    double bracket_width = 0.0;  // final shooting bracket on Q(0)
};

GroundState gn_ground_state();

/// Radial solution of -Delta_N G + (1-alpha) G^{N-1} = delta_0, integrated in
/// tau = ln r with the flux s = r^{N-1}|G'|^{N-2}G' as state. Near the origin
/// G = -(N/beta_N) ln r + A_alpha + O(r^N ln^{N-1} r).
class GreenSolution {
public:
    double alpha = 0.0;
    double a_alpha = 0.0;          // additive constant at the singularity
    double log_coefficient = 0.0;  // N / beta_N
    double norm_n_pow = 0.0;       // ||G||_N^N
    double grad_n_pow = 0.0;       // ||grad G||_N^N
    double r0_sensitivity = 0.0;   // |A(r0) - A(r0/2)|
    double r_inner = 0.0, r_outer = 0.0;

    /// Trajectory samples (tau = ln r ascending) with flux and the cumulative
    /// integrals mass(tau) = int_{B_r} G^N dx / omega, grad(tau) likewise.
    std::vector<double> tau, g, s, cum_mass, cum_grad;

    Dimension dim;

    double g_at(double r) const;
    double s_at(double r) const;
    /// int_{B_r} G^N dx (with the omega factor).
    double mass_within(double r) const;

    /// G sampled on a grid (singular form inside r_inner, zero beyond decay).
    RadialProfile sample(const RadialGrid& grid) const;

private:
    double interp_state(double r, const std::vector<double>& y, bool log_weight) const;
};

struct GreenOptions {
    double r0 = 1e-6;        // inner matching radius
    double rtol = 1e-12;
    double atol = 1e-14;
    bool sensitivity = true; // re-solve at r0/2 and report the A shift
};

/// alpha = 0 solve by shooting on A.
GreenSolution green_g0(const Dimension& dim, const GreenOptions& opt = {});

/// Direct solve of the alpha-equation (used as the independent check).
GreenSolution green_solve(const Dimension& dim, double alpha, const GreenOptions& opt = {});

/// G_alpha from G_0 by the exact scaling G_alpha(x) = G_0((1-alpha)^{1/N} x):
/// A_alpha = A_0 - ln(1-alpha)/beta_N and ||G_alpha||_N^N = ||G_0||_N^N/(1-alpha).
GreenSolution green_alpha(const GreenSolution& g0, double alpha, const Dimension& dim);

/// Sup over a battery of annuli of the weak-form defect
///   s(b) - s(a) - (1-alpha) int_a^b G^{N-1} rho^{N-1} drho.
double green_direct_check(const GreenSolution& g, const Dimension& dim);

}  // namespace mtlab
