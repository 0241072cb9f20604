#include "mtlab/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace mtlab {

namespace {

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

void check_params(const RadialProfile& u, const FunctionalParams& p) {
    if (p.alpha < 0.0 || p.alpha > 1.0)
        throw std::invalid_argument("mt_functional: alpha must lie in [0, 1]");
    if (!(p.beta > 0.0)) throw std::invalid_argument("mt_functional: beta must be > 0");
    if (p.beta > u.dim().beta_n * (1.0 + 1e-12) && !p.allow_supercritical)
        throw std::invalid_argument(
            "mt_functional: beta > beta_N needs the supercritical override");
    const double norm = u.sobolev_norm();
    if (norm > 1.0 + kNormTolerance && !p.allow_supercritical)
        throw std::invalid_argument("mt_functional: profile outside the unit Sobolev ball");
}

double functional_common(const RadialProfile& u, const FunctionalParams& p, EvalFlags* flags,
                         bool psi_variant) {
    check_params(u, p);
    const Dimension& d = u.dim();
    const int n = d.n;
    const double q = double(n) / (n - 1);
    const double m = std::pow(u.ln_norm(), n);
    const double coef = p.beta * std::pow(1.0 + p.alpha * m, 1.0 / (n - 1));
    const auto w = u.grid().quad_weights();
    const auto v = u.values();
    bool sat = false;
    Kahan sum;
    for (int i = 0; i < u.size(); ++i) {
        const double e = coef * std::pow(std::abs(v[i]), q);
        sum.add(w[i] * (psi_variant ? psi_n(e, d, &sat) : phi_n(e, d, &sat)));
    }
    if (flags) {
        if (sat) flags->saturation_events++;
        flags->tail_ratio = std::max(flags->tail_ratio, window_tail_ratio(u));
    }
    return d.omega / n * sum.s;
}

}  // namespace

double mt_functional(const RadialProfile& u, const FunctionalParams& p, EvalFlags* flags) {
    return functional_common(u, p, flags, false);
}

double mt_functional_psi(const RadialProfile& u, const FunctionalParams& p, EvalFlags* flags) {
    return functional_common(u, p, flags, true);
}

TauReduction tau_reduction_check(const RadialProfile& u, double alpha) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("tau_reduction_check: alpha must lie in [0, 1)");
    if (u.sobolev_norm() > 1.0 + kNormTolerance)
        throw std::invalid_argument("tau_reduction_check: profile outside the unit ball");
    const int n = u.dim().n;
    const double q = double(n) / (n - 1);
    const double m = std::pow(u.ln_norm(), n);
    const double g = std::pow(u.grad_norm(), n);
    const double denom = std::pow(g + (1.0 - alpha) * m, 1.0 / n);
    const double lhs_coef = std::pow(1.0 + alpha * m, 1.0 / (n - 1));

    TauReduction out;
    out.max_violation = -1e300;
    const auto v = u.values();
    for (int i = 0; i < u.size(); ++i) {
        const double uq = std::pow(std::abs(v[i]), q);
        const double lhs = lhs_coef * uq;
        const double rhs = std::pow(std::abs(v[i]) / denom, q);
        if (lhs > out.lhs) {
            out.lhs = lhs;
            out.rhs = rhs;
        }
        out.max_violation = std::max(out.max_violation, lhs - rhs);
    }
    return out;
}

std::vector<LowerBoundPoint> lower_bound_curve(const RadialProfile& v,
                                               const FunctionalParams& p,
                                               const std::vector<double>& t_values) {
    const Dimension& d = v.dim();
    const int n = d.n;
    if (!(v.sobolev_norm() > 0.0))
        throw std::invalid_argument("lower_bound_curve: v must be nonzero");

    const double grad_n = std::pow(v.grad_norm(), n);
    const double mass_n = std::pow(v.ln_norm(), n);
    const double q_big = double(n) * n / (n - 1);  // the N^2/(N-1) norm
    const double mq = std::pow(lp_norm(v, q_big), q_big);
    const double lead = std::pow(p.beta, n - 1) / factorial(n - 1);
    const double second = std::pow(p.beta, n) / factorial(n) *
                          std::pow(1.0 + p.alpha, double(n) / (n - 1)) * mq /
                          std::pow(mass_n, double(n) / (n - 1));

    std::vector<LowerBoundPoint> out;
    out.reserve(t_values.size());
    for (double t : t_values) {
        if (!(t > 0.0)) throw std::invalid_argument("lower_bound_curve: t must be > 0");
        const RadialProfile wt = normalize_sobolev(scale_family(v, t));
        LowerBoundPoint pt;
        pt.t = t;
        pt.j_value = mt_functional(wt, p);
        pt.expansion_value = lead * (1.0 + p.alpha) -
                             t * lead * (1.0 + 2.0 * p.alpha) * grad_n / mass_n +
                             second * std::pow(t, 1.0 / (n - 1));
        out.push_back(pt);
    }
    return out;
}

IshiwataDerivative ishiwata_derivative(const RadialProfile& v, const FunctionalParams& p) {
    const Dimension& d = v.dim();
    if (d.n != 2) throw std::invalid_argument("ishiwata_derivative: dimension-two test");
    if (std::abs(v.sobolev_norm() - 1.0) > kNormTolerance)
        throw std::invalid_argument("ishiwata_derivative: v must have unit Sobolev norm");

    auto j_at = [&](double t) {
        return mt_functional(normalize_sobolev(scale_family(v, t)), p);
    };
    auto central = [&](double h) { return (j_at(1.0 + h) - j_at(1.0 - h)) / (2.0 * h); };

    const double h = 1e-4;
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    const double fd = (4.0 * d2 - d1) / 3.0;  // Richardson

    // one-sided sanity: disagreement flags a bad step size
    const double j0 = j_at(1.0);
    const double fwd = (j_at(1.0 + h) - j0) / h;
    const double bwd = (j0 - j_at(1.0 - h)) / h;
    const double scale = std::max({std::abs(fwd), std::abs(bwd), 1e-30});
    if (std::abs(fwd - bwd) > 1e-3 * scale + 1e-3 * std::abs(fd) + 1e-12)
        throw std::runtime_error("ishiwata_derivative: one-sided differences disagree");

    // series route: sum_j (beta^j/j!) (1+alpha m)^{j-1} ||v||_{2j}^{2j} *
    //   [ -j alpha m g + (j-1)(1+alpha m) - j g (1+alpha m) ]
    const double m = v.ln_norm() * v.ln_norm();
    const double g = v.grad_norm() * v.grad_norm();
    const double am = 1.0 + p.alpha * m;
    double series = 0.0, magnitude = 0.0;
    double beta_pow = 1.0;  // beta^j / j!
    for (int j = 1; j <= 220; ++j) {
        beta_pow *= p.beta / j;
        const double norm2j = std::pow(lp_norm(v, 2.0 * j), 2.0 * j);
        const double bracket =
            -j * p.alpha * m * g + (j - 1) * am - j * g * am;
        const double term = beta_pow * std::pow(am, j - 1) * norm2j * bracket;
        series += term;
        magnitude += std::abs(term);
        if (std::abs(term) < 1e-14 * magnitude && j > 2) break;
    }
    return {fd, series};
}

}  // namespace mtlab
