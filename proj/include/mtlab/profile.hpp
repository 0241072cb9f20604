#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtlab/grid.hpp"

namespace mtlab {

/// Resampling rule. Piecewise-linear profiles (Moser functions) must be
/// resampled linearly to keep kinks sharp; smooth profiles use a monotone
/// cubic that cannot overshoot or break monotonicity.
enum class Interp { MonotoneCubic, Linear };

/// Per-evaluation diagnostics. saturation_events counts nodes where a
/// truncated exponential hit the overflow cap; tail_ratio estimates the mass
/// fraction of a norm lost to the grid window.
struct EvalFlags {
    int saturation_events = 0;
    double tail_ratio = 0.0;
    double clipped_mass = 0.0;

    void merge(const EvalFlags& o) {
        saturation_events += o.saturation_events;
        if (o.tail_ratio > tail_ratio) tail_ratio = o.tail_ratio;
        if (o.clipped_mass > clipped_mass) clipped_mass = o.clipped_mass;
    }
};

/// Radial function sampled on a RadialGrid. Immutable after construction;
/// the gradient-N and L^N norms are computed once, up front.
class RadialProfile {
public:
    RadialProfile(RadialGrid grid, std::vector<double> values,
                  Interp hint = Interp::MonotoneCubic);

    const RadialGrid& grid() const { return grid_; }
    const Dimension& dim() const { return grid_.dim(); }
    std::span<const double> values() const { return values_; }
    Interp interp_hint() const { return hint_; }
    int size() const { return static_cast<int>(values_.size()); }

    /// ||grad u||_N, exact for profiles piecewise linear in t.
    double grad_norm() const { return grad_norm_; }
    /// ||u||_N.
    double ln_norm() const { return ln_norm_; }
    /// (||grad u||_N^N + ||u||_N^N)^{1/N}.
    double sobolev_norm() const;

    /// Value at radius r by interpolation in t (hint-dependent). Outside the
    /// window the edge value is extended on the small-r side and zero is
    /// assumed on the large-r side.
    double value_at_r(double r) const;
    double value_at_t(double t) const;

private:
    RadialGrid grid_;
    std::vector<double> values_;
    Interp hint_;
    double grad_norm_ = 0.0;
    double ln_norm_ = 0.0;
};

/// L^p norm (omega_{N-1} int u^p r^{N-1} dr)^{1/p} by trapezoid in t.
double lp_norm(const RadialProfile& u, double p, EvalFlags* flags = nullptr);

/// ||grad u||_N from per-interval slopes in t.
double grad_norm_n(const RadialProfile& u);

double full_sobolev_norm(const RadialProfile& u);

/// u scaled so that the full Sobolev norm is 1.
RadialProfile normalize_sobolev(const RadialProfile& u);

/// v_t(x) = t^{1/N} v(t^{1/N} x), represented exactly: node values scale by
/// t^{1/N}, the grid window translates by ln t. No resampling error.
RadialProfile scale_family(const RadialProfile& v, double t);

/// u(x/R), represented exactly by a window translation of -N ln R.
RadialProfile dilate(const RadialProfile& u, double big_r);

/// Resample onto a target grid (interp per the profile hint). Returns the
/// relative norm mass clipped by the new window through *flags.
RadialProfile resample_to(const RadialProfile& u, const RadialGrid& grid,
                          EvalFlags* flags = nullptr);

/// w(t) = N^{1-1/N} omega^{1/N} u(e^{-t/N}) on the shared t-grid.
LineProfile moser_transform(const RadialProfile& u);

/// Inverse of moser_transform onto the given grid (node-wise).
RadialProfile inverse_moser_transform(const LineProfile& w, const RadialGrid& grid);

/// Both sides of the change-of-variables identity
///   int Phi_N(beta |u|^{N/(N-1)}) dx
///     = (omega/N) int_R Phi_N((beta/beta_N)|w|^{N/(N-1)}) e^{-t} dt.
/// The left side is integrated by trapezoid in r, the right by trapezoid in
/// t, on a grid refined 4x, so agreement is a genuine two-route check.
struct ChangeOfVariables {
    double lhs = 0.0;
    double rhs = 0.0;
};
ChangeOfVariables functional_change_of_variables(const RadialProfile& u, double beta,
                                                 EvalFlags* flags = nullptr);

/// Empirical radial-lemma constant: sup_r r^{N-1}|u(r)|^N / (||u||_N^{N-1} ||grad u||_N),
/// the scaling-invariant form produced by the Hoelder step of the lemma.
double radial_bound_check(const RadialProfile& u);

/// max(u(r) - u(R), 0) supported in r < R.
RadialProfile boundary_truncate(const RadialProfile& u, double big_r);

/// Nearest non-increasing-in-r profile in the quadrature-weighted least
/// squares sense (pool-adjacent-violators). Idempotent.
RadialProfile decreasing_projection(const RadialProfile& u);

/// Relative norm mass sitting in the outermost grid cells; a cheap estimate
/// of what the window truncation costs.
double window_tail_ratio(const RadialProfile& u);

}  // namespace mtlab
