#include "mtlab/maximizer.hpp"

#include <cmath>
#include <stdexcept>

#include "mtlab/odes.hpp"
#include "mtlab/sequences.hpp"

namespace mtlab {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

// sign(x) |x|^k
double signed_pow(double x, int k) {
    if (k == 1) return x;
    return std::copysign(std::pow(std::abs(x), k), x);
}

// discretized functional and its analytic gradient
struct Discrete {
    const Dimension& dim;
    const FunctionalParams& p;
    const RadialGrid& grid;

    double value(std::span<const double> u, double* lambda_out = nullptr,
                 bool* saturated = nullptr) const {
        const int n = dim.n;
        const double q = double(n) / (n - 1);
        const auto w = grid.quad_weights();
        double mass = 0.0;
        for (size_t i = 0; i < u.size(); ++i) mass += w[i] * ipow(std::abs(u[i]), n);
        const double m = dim.omega / n * mass;
        const double coef = p.beta * std::pow(1.0 + p.alpha * m, 1.0 / (n - 1));
        double sum = 0.0, lam = 0.0;
        for (size_t i = 0; i < u.size(); ++i) {
            const double uq = std::pow(std::abs(u[i]), q);
            const double e = coef * uq;
            sum += w[i] * phi_n(e, dim, saturated);
            if (lambda_out) lam += w[i] * phi_n_prime(e, dim) * uq;
        }
        if (lambda_out) *lambda_out = dim.omega / n * lam;
        return dim.omega / n * sum;
    }

    // gradient of the discretized functional at u (no constraint terms)
    void gradient(std::span<const double> u, std::vector<double>& g) const {
        const int n = dim.n;
        const double q = double(n) / (n - 1);
        const auto w = grid.quad_weights();
        double mass = 0.0;
        for (size_t i = 0; i < u.size(); ++i) mass += w[i] * ipow(std::abs(u[i]), n);
        const double m = dim.omega / n * mass;
        const double big_q = 1.0 + p.alpha * m;
        const double coef = p.beta * std::pow(big_q, 1.0 / (n - 1));
        double lam = 0.0;
        for (size_t i = 0; i < u.size(); ++i) {
            const double uq = std::pow(std::abs(u[i]), q);
            lam += w[i] * phi_n_prime(coef * uq, dim) * uq;
        }
        lam *= dim.omega / n;
        const double mass_coef = double(n) * p.beta * p.alpha / (n - 1) *
                                 std::pow(big_q, (2.0 - n) / (n - 1)) * lam;
        g.resize(u.size());
        for (size_t i = 0; i < u.size(); ++i) {
            const double uq1 = std::pow(std::abs(u[i]), 1.0 / (n - 1));
            g[i] = dim.omega / n * w[i] *
                   (double(n) * p.beta / (n - 1) * std::pow(big_q, 1.0 / (n - 1)) *
                        phi_n_prime(coef * std::pow(std::abs(u[i]), q), dim) * uq1 +
                    mass_coef * signed_pow(u[i], n - 1));
        }
    }

    // gradient of the Sobolev-norm constraint C = ||grad u||^N + ||u||^N
    void constraint_gradient(std::span<const double> u, std::vector<double>& g) const {
        const int n = dim.n;
        const double h = grid.spacing();
        const auto w = grid.quad_weights();
        const int sz = static_cast<int>(u.size());
        g.assign(sz, 0.0);
        const double gc = dim.omega * ipow(double(n), n);
        for (int i = 0; i + 1 < sz; ++i) {
            const double s = (u[i + 1] - u[i]) / h;
            const double flux = signed_pow(s, n - 1);
            g[i] -= gc * flux;
            g[i + 1] += gc * flux;
        }
        for (int i = 0; i < sz; ++i) g[i] += dim.omega * w[i] * signed_pow(u[i], n - 1);
    }
};

// Symmetric tridiagonal SPD solve (Thomas), for the preconditioner.
void tridiag_solve(const std::vector<double>& diag, const std::vector<double>& off,
                   const std::vector<double>& rhs, std::vector<double>& out,
                   std::vector<double>& cp, std::vector<double>& dp) {
    const int n = static_cast<int>(diag.size());
    cp.resize(n);
    dp.resize(n);
    out.resize(n);
    cp[0] = off[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
        const double m = diag[i] - off[i - 1] * cp[i - 1];
        cp[i] = (i + 1 < n) ? off[i] / m : 0.0;
        dp[i] = (rhs[i] - off[i - 1] * dp[i - 1]) / m;
    }
    out[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) out[i] = dp[i] - cp[i] * out[i + 1];
}

// Linearized second variation of the Sobolev constraint: the stiff metric
// that makes ascent steps uniform across the e^{-t} weight range.
struct Preconditioner {
    std::vector<double> diag, off, cp, dp;

    void build(std::span<const double> u, const Discrete& d) {
        const int n = d.dim.n;
        const int sz = static_cast<int>(u.size());
        const double h = d.grid.spacing();
        const auto w = d.grid.quad_weights();
        diag.assign(sz, 0.0);
        off.assign(sz - 1, 0.0);
        double smax = 0.0, umax = 0.0;
        for (int i = 0; i + 1 < sz; ++i)
            smax = std::max(smax, std::abs(u[i + 1] - u[i]) / h);
        for (int i = 0; i < sz; ++i) umax = std::max(umax, std::abs(u[i]));
        const double floor_s = 1e-30 + 1e-6 * std::pow(smax, n - 2);
        const double floor_u = 1e-30 + 1e-6 * std::pow(umax, n - 2);
        const double gc = d.dim.omega * ipow(double(n), n) * (n - 1.0) / h;
        for (int i = 0; i + 1 < sz; ++i) {
            const double s = std::abs(u[i + 1] - u[i]) / h;
            const double a = gc * (std::pow(s, n - 2) + floor_s);
            diag[i] += a;
            diag[i + 1] += a;
            off[i] -= a;
        }
        for (int i = 0; i < sz; ++i)
            diag[i] += d.dim.omega * (n - 1.0) * w[i] * (std::pow(std::abs(u[i]), n - 2) + floor_u);
    }

    void apply_inverse(const std::vector<double>& rhs, std::vector<double>& out) {
        tridiag_solve(diag, off, rhs, out, cp, dp);
    }
};

// PAV toward non-decreasing in t, in place
void pav_nondecreasing(std::vector<double>& v, std::span<const double> w) {
    const int n = static_cast<int>(v.size());
    static thread_local std::vector<double> level, weight;
    static thread_local std::vector<int> count;
    level.resize(n);
    weight.resize(n);
    count.resize(n);
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
    int pos = 0;
    for (int b = 0; b < top; ++b)
        for (int c = 0; c < count[b]; ++c) v[pos++] = level[b];
}

// project to the feasible set: nonnegative, non-decreasing in t, unit norm
void feasible_project(std::vector<double>& v, const Discrete& d) {
    for (double& x : v) x = std::max(x, 0.0);
    pav_nondecreasing(v, d.grid.quad_weights());
    const int n = d.dim.n;
    double mass = 0.0, grad = 0.0;
    const auto w = d.grid.quad_weights();
    const double h = d.grid.spacing();
    for (size_t i = 0; i < v.size(); ++i) mass += w[i] * ipow(v[i], n);
    for (size_t i = 0; i + 1 < v.size(); ++i)
        grad += ipow(std::abs(v[i + 1] - v[i]) / h, n) * h;
    const double norm = std::pow(d.dim.omega / n * mass +
                                     d.dim.omega * ipow(double(n), n - 1) * grad,
                                 1.0 / n);
    if (!(norm > 0.0)) throw std::domain_error("maximize: projection collapsed to zero");
    for (double& x : v) x /= norm;
}

}  // namespace

Multipliers el_multipliers(const RadialProfile& u, const FunctionalParams& p,
                           const Dimension& dim) {
    if (std::abs(u.sobolev_norm() - 1.0) > kNormTolerance)
        throw std::invalid_argument("el_multipliers: u must have unit Sobolev norm");
    Discrete d{dim, p, u.grid()};
    Multipliers mult;
    d.value(u.values(), &mult.lambda);
    const double m = std::pow(u.ln_norm(), dim.n);
    mult.alpha_eps = (1.0 + p.alpha * m) / (1.0 + 2.0 * p.alpha * m);
    mult.gamma_eps = p.alpha / (1.0 + 2.0 * p.alpha * m);
    return mult;
}

double el_residual(const RadialProfile& u, const FunctionalParams& p, const Dimension& dim) {
    if (std::abs(u.sobolev_norm() - 1.0) > kNormTolerance)
        throw std::invalid_argument("el_residual: u must have unit Sobolev norm");
    const Multipliers mult = el_multipliers(u, p, dim);
    const int n = dim.n;
    const double q = double(n) / (n - 1);
    const double h = u.grid().spacing();
    const auto w = u.grid().quad_weights();
    const auto uv = u.values();
    const double m = std::pow(u.ln_norm(), n);
    const double coef = p.beta * std::pow(1.0 + p.alpha * m, 1.0 / (n - 1));

    double worst = 0.0;
    const double test_radii[] = {0.5, 1.0, 2.0, 4.0, 8.0};
    for (double R : test_radii) {
        // C^1 bump (1 - (r/R)^2)_+^2 sampled on the grid
        std::vector<double> phi(u.size());
        for (int i = 0; i < u.size(); ++i) {
            const double x = u.grid().r_nodes()[i] / R;
            const double y = std::max(0.0, 1.0 - x * x);
            phi[i] = y * y;
        }
        const RadialProfile tp(u.grid(), phi, Interp::MonotoneCubic);
        const double tnorm = tp.sobolev_norm();

        double a_grad = 0.0, a_mass = 0.0, a_rhs = 0.0, a_gam = 0.0;
        for (int i = 0; i + 1 < u.size(); ++i) {
            const double su = (uv[i + 1] - uv[i]) / h;
            const double sp = (phi[i + 1] - phi[i]) / h;
            a_grad += signed_pow(su, n - 1) * sp * h;
        }
        a_grad *= dim.omega * ipow(double(n), n - 1);
        for (int i = 0; i < u.size(); ++i) {
            const double base = w[i] * phi[i];
            a_mass += base * signed_pow(uv[i], n - 1);
            a_rhs += base * std::pow(std::abs(uv[i]), 1.0 / (n - 1)) *
                     phi_n_prime(coef * std::pow(std::abs(uv[i]), q), dim);
            a_gam += base * signed_pow(uv[i], n - 1);
        }
        a_mass *= dim.omega / n;
        a_rhs *= dim.omega / n;
        a_gam *= dim.omega / n;
        const double defect =
            a_grad + a_mass - mult.alpha_eps / mult.lambda * a_rhs - mult.gamma_eps * a_gam;
        worst = std::max(worst, std::abs(defect) / tnorm);
    }
    return worst;
}

ConcentrationDiagnostics concentration_diagnostics(const RadialProfile& u,
                                                   const FunctionalParams& p,
                                                   const Dimension& dim) {
    const Multipliers mult = el_multipliers(u, p, dim);
    ConcentrationDiagnostics out;
    out.c0 = u.values().back();  // t -> +inf end is r -> 0
    out.ln_mass = std::pow(u.ln_norm(), dim.n);
    const double q = double(dim.n) / (dim.n - 1);
    const double cq = std::pow(out.c0, q);
    const double expo = -p.beta * std::pow(1.0 + p.alpha * out.ln_mass, 1.0 / (dim.n - 1)) * cq;
    const double rn = mult.lambda / mult.alpha_eps / cq * std::exp(expo);
    out.r_conc = rn > 0.0 ? std::pow(rn, 1.0 / dim.n) : 0.0;
    return out;
}

MaximizerReport maximize(const FunctionalParams& p, const Dimension& dim,
                         const RadialProfile& seed, int budget) {
    if (p.beta > dim.beta_n + 1e-12 && !p.allow_supercritical)
        throw std::invalid_argument("maximize: beta > beta_N is not a finite problem");
    if (budget < 1) throw std::invalid_argument("maximize: budget must be >= 1");

    Discrete d{dim, p, seed.grid()};
    std::vector<double> u(seed.values().begin(), seed.values().end());
    feasible_project(u, d);

    double value = d.value(u);
    std::vector<double> g, cg, dir, pg, pc, trial;
    Preconditioner prec;
    double step = 1.0;
    double monotonicity_defect = 0.0;
    bool converged = false;
    int it = 0;
    int stall = 0;

    for (it = 1; it <= budget; ++it) {
        d.gradient(u, g);
        d.constraint_gradient(u, cg);
        prec.build(u, d);
        prec.apply_inverse(g, pg);
        prec.apply_inverse(cg, pc);
        // tangent direction in the preconditioned metric: <cg, dir> = 0
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < u.size(); ++i) {
            num += cg[i] * pg[i];
            den += cg[i] * pc[i];
        }
        const double mu = den != 0.0 ? num / den : 0.0;
        dir.resize(u.size());
        for (size_t i = 0; i < u.size(); ++i) dir[i] = pg[i] - mu * pc[i];

        double new_value = value;
        bool accepted = false;
        double s = step;
        for (int bt = 0; bt < 60; ++bt) {
            trial = u;
            for (size_t i = 0; i < u.size(); ++i) trial[i] += s * dir[i];
            feasible_project(trial, d);
            bool sat = false;
            const double v = d.value(trial, nullptr, &sat);
            // a saturated trial is a rejected step, not a gain
            if (std::isfinite(v) && !sat && v >= value) {
                new_value = v;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            converged = true;  // no ascent left at line-search resolution
            break;
        }
        step = std::min(s * 1.3, 16.0);
        monotonicity_defect = std::min(monotonicity_defect, new_value - value);
        u = trial;
        const double rel = (new_value - value) / std::max(std::abs(new_value), 1e-300);
        value = new_value;
        if (rel < 1e-10) {
            if (++stall >= 5) {
                converged = true;
                break;
            }
        } else {
            stall = 0;
        }
    }

    RadialProfile prof(seed.grid(), std::move(u), Interp::MonotoneCubic);
    MaximizerReport rep{std::move(prof), value, {}, 0.0, {}, 0, false, 0.0, false};
    rep.iterations = std::min(it, budget);
    rep.converged = converged;
    rep.monotonicity_defect = monotonicity_defect;
    rep.experimental_critical = p.beta >= dim.beta_n - 1e-12;
    rep.multipliers = el_multipliers(rep.profile, p, dim);
    rep.el_residual = el_residual(rep.profile, p, dim);
    rep.concentration = concentration_diagnostics(rep.profile, p, dim);
    return rep;
}

RadialProfile make_seed(const std::string& name, const Dimension& dim,
                        const RadialGrid* grid) {
    const RadialGrid g = grid ? *grid : RadialGrid::standard(dim);
    std::vector<double> v(g.size());
    if (name == "gaussian") {
        for (int i = 0; i < g.size(); ++i) {
            const double r = g.r_nodes()[i];
            v[i] = (r < 40.0) ? std::exp(-0.5 * r * r) : 0.0;
        }
    } else if (name == "bump") {
        for (int i = 0; i < g.size(); ++i)
            v[i] = std::pow(1.0 + g.r_nodes()[i] * g.r_nodes()[i], -double(dim.n));
    } else if (name == "sech") {
        for (int i = 0; i < g.size(); ++i) {
            const double r = g.r_nodes()[i];
            v[i] = (r < 600.0) ? 1.0 / std::cosh(r) : 0.0;
        }
    } else if (name == "moser5") {
        return normalized_moser(MoserParams{5.0, 1.0}, dim, &g);
    } else if (name == "ground-state") {
        if (dim.n != 2)
            throw std::invalid_argument("make_seed: ground-state seed exists for N = 2 only");
        GroundState gs = gn_ground_state();
        RadialProfile q = resample_to(gs.profile, g);
        return normalize_sobolev(q);
    } else {
        throw std::invalid_argument("make_seed: unknown seed '" + name + "'");
    }
    return normalize_sobolev(RadialProfile(g, std::move(v), Interp::MonotoneCubic));
}

}  // namespace mtlab
