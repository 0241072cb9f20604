#include "mtlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtlab {

namespace {

// Compensated accumulator; the norm sums run over ~1e4 nodes and the Moser
// gradient norms are asserted to 1e-12.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

// Interval slopes and Fritsch-Carlson limited node derivatives for a local
// monotone cubic evaluation on a uniform grid.
double fc_derivative(std::span<const double> v, int i, double h) {
    const int n = static_cast<int>(v.size());
    const double ml = (i > 0) ? (v[i] - v[i - 1]) / h : 0.0;
    const double mr = (i + 1 < n) ? (v[i + 1] - v[i]) / h : 0.0;
    if (i == 0) return mr;
    if (i + 1 == n) return ml;
    if (ml * mr <= 0.0) return 0.0;
    double d = 0.5 * (ml + mr);
    // limit to three times the smaller one-sided slope
    const double lim = 3.0 * std::min(std::abs(ml), std::abs(mr));
    if (std::abs(d) > lim) d = (d > 0 ? lim : -lim);
    return d;
}

double hermite(double v0, double v1, double d0, double d1, double h, double s) {
    // s in [0,1] across the interval
    const double s2 = s * s, s3 = s2 * s;
    return v0 * (2 * s3 - 3 * s2 + 1) + v1 * (-2 * s3 + 3 * s2) +
           h * (d0 * (s3 - 2 * s2 + s) + d1 * (s3 - s2));
}

double interp_at(std::span<const double> v, double t0, double h, double t, Interp hint) {
    const int n = static_cast<int>(v.size());
    const double x = (t - t0) / h;
    if (x <= 0.0) return v.front();
    if (x >= n - 1) return v.back();
    const int i = std::min(static_cast<int>(x), n - 2);
    const double s = x - i;
    if (hint == Interp::Linear) return v[i] + s * (v[i + 1] - v[i]);
    return hermite(v[i], v[i + 1], fc_derivative(v, i, h), fc_derivative(v, i + 1, h), h, s);
}

}  // namespace

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values, Interp hint)
    : grid_(std::move(grid)), values_(std::move(values)), hint_(hint) {
    if (static_cast<int>(values_.size()) != grid_.size())
        throw std::invalid_argument("RadialProfile: value count != grid size");
    const int n = dim().n;
    const double h = grid_.spacing();
    const auto w = grid_.quad_weights();

    Kahan mass;
    for (int i = 0; i < size(); ++i) mass.add(w[i] * ipow(std::abs(values_[i]), n));
    ln_norm_ = std::pow(dim().omega / n * mass.s, 1.0 / n);

    Kahan grad;
    for (int i = 0; i + 1 < size(); ++i) {
        const double slope = (values_[i + 1] - values_[i]) / h;
        grad.add(ipow(std::abs(slope), n) * h);
    }
    grad_norm_ = std::pow(dim().omega * ipow(double(n), n - 1) * grad.s, 1.0 / n);
}

double RadialProfile::sobolev_norm() const {
    const int n = dim().n;
    return std::pow(ipow(grad_norm_, n) + ipow(ln_norm_, n), 1.0 / n);
}

double RadialProfile::value_at_t(double t) const {
    return interp_at(values_, grid_.t_min(), grid_.spacing(), t, hint_);
}

double RadialProfile::value_at_r(double r) const {
    if (!(r > 0.0)) return values_.back();  // r -> 0 is the t -> +inf edge
    const double t = -dim().n * std::log(r);
    if (t < grid_.t_min()) return 0.0;  // beyond the large-r window edge
    return value_at_t(t);
}

double lp_norm(const RadialProfile& u, double p, EvalFlags* flags) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const auto w = u.grid().quad_weights();
    const auto v = u.values();
    Kahan sum;
    for (int i = 0; i < u.size(); ++i) sum.add(w[i] * std::pow(std::abs(v[i]), p));
    if (!std::isfinite(sum.s)) throw std::domain_error("lp_norm: non-finite integrand");
    if (flags) {
        const double edge = w.front() * std::pow(std::abs(v.front()), p) +
                            w.back() * std::pow(std::abs(v.back()), p);
        flags->tail_ratio = std::max(flags->tail_ratio, sum.s > 0 ? edge / sum.s : 0.0);
    }
    return std::pow(u.dim().omega / u.dim().n * sum.s, 1.0 / p);
}

double grad_norm_n(const RadialProfile& u) { return u.grad_norm(); }

double full_sobolev_norm(const RadialProfile& u) { return u.sobolev_norm(); }

RadialProfile normalize_sobolev(const RadialProfile& u) {
    const double s = u.sobolev_norm();
    if (!(s > 0.0)) throw std::domain_error("normalize_sobolev: zero profile");
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x /= s;
    return RadialProfile(u.grid(), std::move(v), u.interp_hint());
}

RadialProfile scale_family(const RadialProfile& v, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("scale_family: t must be > 0");
    const double amp = std::pow(t, 1.0 / v.dim().n);
    std::vector<double> vals(v.values().begin(), v.values().end());
    for (double& x : vals) x *= amp;
    return RadialProfile(v.grid().shifted(std::log(t)), std::move(vals), v.interp_hint());
}

RadialProfile dilate(const RadialProfile& u, double big_r) {
    if (!(big_r > 0.0)) throw std::invalid_argument("dilate: R must be > 0");
    std::vector<double> vals(u.values().begin(), u.values().end());
    return RadialProfile(u.grid().shifted(-u.dim().n * std::log(big_r)), std::move(vals),
                         u.interp_hint());
}

RadialProfile resample_to(const RadialProfile& u, const RadialGrid& grid, EvalFlags* flags) {
    std::vector<double> vals(grid.size());
    const auto tn = grid.t_nodes();
    for (int i = 0; i < grid.size(); ++i) {
        const double t = tn[i];
        vals[i] = (t < u.grid().t_min() - 1e-12) ? 0.0 : u.value_at_t(t);
    }
    if (flags) {
        // mass of the source outside the target window, relative to its norm
        const auto w = u.grid().quad_weights();
        const auto v = u.values();
        const int n = u.dim().n;
        Kahan total, lost;
        for (int i = 0; i < u.size(); ++i) {
            const double m = w[i] * ipow(std::abs(v[i]), n);
            total.add(m);
            if (u.grid().t_nodes()[i] < grid.t_min() || u.grid().t_nodes()[i] > grid.t_max())
                lost.add(m);
        }
        if (total.s > 0.0)
            flags->clipped_mass = std::max(flags->clipped_mass, lost.s / total.s);
    }
    return RadialProfile(grid, std::move(vals), u.interp_hint());
}

LineProfile moser_transform(const RadialProfile& u) {
    const int n = u.dim().n;
    const double c = std::pow(double(n), 1.0 - 1.0 / n) * std::pow(u.dim().omega, 1.0 / n);
    LineProfile w;
    w.t0 = u.grid().t_min();
    w.h = u.grid().spacing();
    w.w.resize(u.size());
    for (int i = 0; i < u.size(); ++i) w.w[i] = c * u.values()[i];
    return w;
}

RadialProfile inverse_moser_transform(const LineProfile& w, const RadialGrid& grid) {
    if (static_cast<int>(w.w.size()) != grid.size() ||
        std::abs(w.t0 - grid.t_min()) > 1e-10 || std::abs(w.h - grid.spacing()) > 1e-14)
        throw std::invalid_argument("inverse_moser_transform: grid mismatch");
    const int n = grid.dim().n;
    const double c = std::pow(double(n), 1.0 - 1.0 / n) * std::pow(grid.dim().omega, 1.0 / n);
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.size(); ++i) v[i] = w.w[i] / c;
    return RadialProfile(grid, std::move(v), Interp::Linear);
}

ChangeOfVariables functional_change_of_variables(const RadialProfile& u, double beta,
                                                 EvalFlags* flags) {
    if (!(beta > 0.0)) throw std::invalid_argument("change_of_variables: beta must be > 0");
    const Dimension& d = u.dim();
    const int n = d.n;
    const double q = double(n) / (n - 1);

    // refined sampling (4x) keeps both trapezoid routes inside 1e-6
    const int refine = 4;
    const double h = u.grid().spacing() / refine;
    const int m = (u.size() - 1) * refine + 1;
    const double t0 = u.grid().t_min();

    bool sat = false;
    std::vector<double> phi_vals(m), radii(m);
    for (int j = 0; j < m; ++j) {
        const double t = t0 + j * h;
        const double uv = std::abs(u.value_at_t(t));
        phi_vals[j] = phi_n(beta * std::pow(uv, q), d, &sat);
        radii[j] = std::exp(-t / n);
    }

    // lhs: trapezoid in r of omega Phi r^{N-1}; node order has r decreasing
    Kahan lhs;
    for (int j = 0; j + 1 < m; ++j) {
        const double f0 = phi_vals[j] * ipow(radii[j], n - 1);
        const double f1 = phi_vals[j + 1] * ipow(radii[j + 1], n - 1);
        lhs.add(0.5 * (f0 + f1) * (radii[j] - radii[j + 1]));
    }

    // rhs: trapezoid in t of (omega/N) Phi((beta/beta_N) w^q) e^{-t}; the
    // Moser transform makes the integrand identical pointwise, so only the
    // quadrature route differs.
    Kahan rhs;
    for (int j = 0; j < m; ++j) {
        const double wq = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
        rhs.add(wq * h * phi_vals[j] * std::exp(-(t0 + j * h)));
    }

    if (flags && sat) flags->saturation_events++;
    return {d.omega * lhs.s, d.omega / n * rhs.s};
}

double radial_bound_check(const RadialProfile& u) {
    const int n = u.dim().n;
    const double denom = ipow(u.ln_norm(), n - 1) * u.grad_norm();
    if (!(denom > 0.0)) return 0.0;
    double sup = 0.0;
    const auto r = u.grid().r_nodes();
    const auto v = u.values();
    for (int i = 0; i < u.size(); ++i)
        sup = std::max(sup, ipow(r[i], n - 1) * ipow(std::abs(v[i]), n));
    return sup / denom;
}

RadialProfile boundary_truncate(const RadialProfile& u, double big_r) {
    const double t_r = -u.dim().n * std::log(big_r);
    if (t_r < u.grid().t_min() || t_r > u.grid().t_max())
        throw std::invalid_argument("boundary_truncate: R outside grid window");
    const double u_r = u.value_at_r(big_r);
    std::vector<double> v(u.size());
    const auto tn = u.grid().t_nodes();
    for (int i = 0; i < u.size(); ++i)
        v[i] = (tn[i] > t_r) ? std::max(u.values()[i] - u_r, 0.0) : 0.0;
    return RadialProfile(u.grid(), std::move(v), u.interp_hint());
}

RadialProfile decreasing_projection(const RadialProfile& u) {
    // isotonic (non-decreasing in t) regression under the quadrature weights
    const auto w = u.grid().quad_weights();
    const auto v = u.values();
    const int n = u.size();
    std::vector<double> level(n), weight(n);
    std::vector<int> count(n);
    int top = 0;
    for (int i = 0; i < n; ++i) {
        level[top] = v[i];
        weight[top] = w[i];
        count[top] = 1;
        while (top > 0 && level[top - 1] > level[top]) {
            const double tw = weight[top - 1] + weight[top];
            level[top - 1] = (weight[top - 1] * level[top - 1] + weight[top] * level[top]) / tw;
            weight[top - 1] = tw;
            count[top - 1] += count[top];
            --top;
        }
        ++top;
    }
    std::vector<double> out;
    out.reserve(n);
    for (int b = 0; b < top; ++b) out.insert(out.end(), count[b], level[b]);
    return RadialProfile(u.grid(), std::move(out), u.interp_hint());
}

double window_tail_ratio(const RadialProfile& u) {
    const auto w = u.grid().quad_weights();
    const auto v = u.values();
    const int n = u.dim().n;
    Kahan total;
    for (int i = 0; i < u.size(); ++i) total.add(w[i] * ipow(std::abs(v[i]), n));
    if (!(total.s > 0.0)) return 0.0;
    const double edge = w.front() * ipow(std::abs(v.front()), n) +
                        w.back() * ipow(std::abs(v.back()), n);
    return edge / total.s;
}

}  // namespace mtlab
