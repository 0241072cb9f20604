#include "mtlab/odes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtlab/bessel.hpp"

namespace mtlab {

namespace {

constexpr int kMaxState = 8;
using State = std::array<double, kMaxState>;

struct Trajectory {
    std::vector<double> x;
    std::vector<State> y;
    std::vector<State> f;
    int event = 0;  // 0 when the right end was reached
};

// Dormand-Prince 5(4) with FSAL, fixed tolerances, optional event stop.
template <typename Rhs, typename Event>
Trajectory rk45(const Rhs& rhs, int m, double x0, double x1, State y0, double rtol,
                double atol, const Event& event, bool store) {
    Trajectory out;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                     e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                     e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    double x = x0;
    State y = y0, k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, yt{}, ynew{};
    rhs(x, y, k1);
    if (store) {
        out.x.push_back(x);
        out.y.push_back(y);
        out.f.push_back(k1);
    }
    double h = (x1 - x0) * 1e-4;
    const double hmax = (x1 - x0) * 0.5;
    for (long step = 0; step < 4000000 && x < x1; ++step) {
        if (x + h > x1) h = x1 - x;
        for (int i = 0; i < m; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(x + c2 * h, yt, k2);
        for (int i = 0; i < m; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + c3 * h, yt, k3);
        for (int i = 0; i < m; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + c4 * h, yt, k4);
        for (int i = 0; i < m; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + c5 * h, yt, k5);
        for (int i = 0; i < m; ++i)
            yt[i] = y[i] +
                    h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(x + h, yt, k6);
        for (int i = 0; i < m; ++i)
            ynew[i] = y[i] +
                      h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(x + h, ynew, k7);

        double err = 0.0;
        bool finite = true;
        for (int i = 0; i < m; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(ei) / sc);
            if (!std::isfinite(ynew[i])) finite = false;
        }
        if (finite && err <= 1.0) {
            x += h;
            y = ynew;
            k1 = k7;
            if (store) {
                out.x.push_back(x);
                out.y.push_back(y);
                out.f.push_back(k1);
            }
            const int ev = event(x, y);
            if (ev != 0) {
                out.event = ev;
                return out;
            }
        }
        const double fac = finite ? 0.9 * std::pow(std::max(err, 1e-10), -0.2) : 0.3;
        h *= std::clamp(fac, 0.2, 5.0);
        h = std::min(h, hmax);
    }
    if (!store) {
        out.x.push_back(x);
        out.y.push_back(y);
        out.f.push_back(k1);
    }
    return out;
}

// cubic Hermite lookup in a stored trajectory
double traj_interp(const std::vector<double>& xs, const std::vector<State>& ys,
                   const std::vector<State>& fs, int comp, double x) {
    if (xs.empty()) return 0.0;
    if (x <= xs.front()) return ys.front()[comp];
    if (x >= xs.back()) return ys.back()[comp];
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const int i = static_cast<int>(it - xs.begin()) - 1;
    const double h = xs[i + 1] - xs[i];
    const double s = (x - xs[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return ys[i][comp] * (2 * s3 - 3 * s2 + 1) + ys[i + 1][comp] * (-2 * s3 + 3 * s2) +
           h * (fs[i][comp] * (s3 - 2 * s2 + s) + fs[i + 1][comp] * (s3 - s2));
}

double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

// odd power-law nonlinearity |g|^{n-2} g
double odd_pow(double g, int n) {
    return (n == 2) ? g : std::copysign(std::pow(std::abs(g), n - 1), g);
}

}  // namespace

// ---------------------------------------------------------------------------
// Gagliardo-Nirenberg ground state (N = 2)
// ---------------------------------------------------------------------------

namespace {

// state: Q, P = Q', I2, I4, IG, Iode
void ground_rhs(double r, const State& y, State& f) {
    const double q = y[0], p = y[1];
    f[0] = p;
    f[1] = -p / r + q - q * q * q;
    f[2] = q * q * r;
    f[3] = q * q * q * q * r;
    f[4] = p * p * r;
    f[5] = (q - q * q * q) * r;
}

// +1: crossed zero (amplitude too high), -1: turned back up (too low)
int ground_event(double, const State& y) {
    if (y[0] <= 0.0) return 1;
    if (y[1] > 0.0 && y[0] < 1.0) return -1;
    return 0;
}

Trajectory ground_run(double a, double r_end, bool store) {
    const double r0 = 1e-8;
    const double b = 0.25 * (a - a * a * a);
    State y0{};
    y0[0] = a + b * r0 * r0;
    y0[1] = 2.0 * b * r0;
    y0[2] = 0.5 * a * a * r0 * r0;
    y0[3] = 0.5 * a * a * a * a * r0 * r0;
    y0[4] = 0.0;
    y0[5] = 0.5 * (a - a * a * a) * r0 * r0;
    return rk45(ground_rhs, 6, r0, r_end, y0, 3e-12, 1e-14, ground_event, store);
}

}  // namespace

GroundState gn_ground_state() {
    const Dimension d2 = make_dimension(2);
    double lo = 2.0, hi = 2.5;  // turn-back vs zero-crossing bracket
    {
        const int elo = ground_run(lo, 15.0, false).event;
        const int ehi = ground_run(hi, 15.0, false).event;
        if (elo != -1 || ehi != 1)
            throw std::runtime_error("gn_ground_state: shooting bracket failed to classify");
    }
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (ground_run(mid, 15.0, false).event == 1 ? hi : lo) = mid;
    }
    const double a = 0.5 * (lo + hi);

    const double r_cut = 13.0;
    Trajectory tr = ground_run(a, r_cut, true);
    if (tr.x.back() < r_cut - 1e-9)
        throw std::runtime_error("gn_ground_state: trajectory ended before the cut radius");

    const State& yf = tr.y.back();
    const double q_cut = yf[0];
    // exponential tail: Q ~ Q(rc) e^{-(r-rc)} sqrt(rc/r), so the weighted
    // tails close in near-closed form
    const double tail2 = 0.5 * q_cut * q_cut * r_cut;
    const double tail4 = 0.25 * ipow(q_cut, 4) * r_cut;
    const double i2 = yf[2] + tail2;
    const double i4 = yf[3] + tail4;
    const double ig = yf[4] + tail2;  // |Q'| ~ Q in the far field

    GroundState gs{RadialProfile(RadialGrid::standard(d2),
                                 std::vector<double>(RadialGrid::standard(d2).size(), 0.0)),
                   0.0};
    gs.q0 = a;
    gs.bracket_width = hi - lo;
    gs.l2_sq = 2.0 * M_PI * i2;
    gs.l4_pow4 = 2.0 * M_PI * i4;
    gs.grad_sq = 2.0 * M_PI * ig;
    gs.b2 = i4 / (2.0 * M_PI * ig * i2);
    gs.b2_identity = 2.0 / gs.l2_sq;

    // flux-identity defect along the trajectory
    double res = 0.0;
    const double flux0 = tr.x.front() * tr.y.front()[1] - tr.y.front()[5];
    for (size_t i = 0; i < tr.x.size(); ++i) {
        const double lhs = tr.x[i] * tr.y[i][1];
        const double rhs = tr.y[i][5] + flux0;
        res = std::max(res, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    gs.residual = res;

    // sample onto the standard grid with the K0-shaped tail
    const RadialGrid grid = RadialGrid::standard(d2);
    const double k0_cut = bessel_k0(r_cut);
    std::vector<double> vals(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.r_nodes()[i];
        if (r <= tr.x.front()) {
            vals[i] = a;
        } else if (r <= r_cut) {
            vals[i] = traj_interp(tr.x, tr.y, tr.f, 0, r);
        } else if (r < r_cut + 600.0) {
            vals[i] = q_cut * bessel_k0(r) / k0_cut;
        } else {
            vals[i] = 0.0;
        }
    }
    gs.profile = RadialProfile(grid, std::move(vals), Interp::MonotoneCubic);
    return gs;
}

// ---------------------------------------------------------------------------
// Green function of -Delta_N G + (1-alpha) G^{N-1} = delta_0
// ---------------------------------------------------------------------------

namespace {

struct GreenRhs {
    int n;
    double one_minus_alpha;
    // state: G, s, cum_grad, cum_mass; independent variable tau = ln r
    void operator()(double tau, const State& y, State& f) const {
        const double g = y[0], s = y[1];
        const double gp = std::copysign(std::pow(std::abs(s), 1.0 / (n - 1)), s);
        f[0] = gp;
        f[1] = one_minus_alpha * std::exp(n * tau) * odd_pow(g, n);
        f[2] = std::pow(std::abs(s), double(n) / (n - 1));
        f[3] = ipow(std::abs(g), n) * std::exp(n * tau);
    }
};

int green_event(double, const State& y) {
    if (y[0] <= 0.0) return -1;  // undershoot: A too small
    if (y[1] >= 0.0) return 1;   // flux turned: A too large
    return 0;
}

Trajectory green_run(const Dimension& dim, double alpha, double a_const, double r0,
                     double tau_end, double rtol, double atol, bool store) {
    const int n = dim.n;
    State y0{};
    y0[0] = -(n / dim.beta_n) * std::log(r0) + a_const;
    // flux carries the inner source correction int_0^{r0} rho^{N-1} G^{N-1} drho
    double corr = 0.0;
    {
        const int m = 24;
        for (int j = 0; j < m; ++j) {
            const double rho = r0 * (j + 0.5) / m;
            corr += ipow(rho, n - 1) *
                    std::pow(std::abs(-(n / dim.beta_n) * std::log(rho) + a_const), n - 1) *
                    (r0 / m);
        }
    }
    y0[1] = -1.0 / dim.omega + (1.0 - alpha) * corr;
    GreenRhs rhs{n, 1.0 - alpha};
    return rk45(rhs, 4, std::log(r0), tau_end, y0, rtol, atol, green_event, store);
}

double green_shoot(const Dimension& dim, double alpha, double r0, double tau_end, double rtol,
                   double atol) {
    double lo = -1.0, hi = 1.0;
    auto classify = [&](double a) {
        return green_run(dim, alpha, a, r0, tau_end, rtol, atol, false).event;
    };
    int span = 0;
    while (classify(lo) != -1 && span < 8) {
        lo *= 2.0;
        ++span;
    }
    span = 0;
    while (classify(hi) != 1 && span < 8) {
        hi *= 2.0;
        ++span;
    }
    if (classify(lo) != -1 || classify(hi) != 1)
        throw std::runtime_error("green solve: shooting bracket failed on A in [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    while (hi - lo > 1e-14 * (1.0 + std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        (classify(mid) == 1 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

GreenSolution green_solve(const Dimension& dim, double alpha, const GreenOptions& opt) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("green_solve: alpha must lie in [0, 1)");
    const int n = dim.n;
    const double decay = std::pow((1.0 - alpha) / (n - 1), 1.0 / n);
    const double tau_end = std::log(30.0 / decay + 15.0);

    const double a_const = green_shoot(dim, alpha, opt.r0, tau_end, opt.rtol, opt.atol);
    Trajectory tr =
        green_run(dim, alpha, a_const, opt.r0, tau_end, opt.rtol, opt.atol, true);

    GreenSolution g;
    g.dim = dim;
    g.alpha = alpha;
    g.a_alpha = a_const;
    g.log_coefficient = n / dim.beta_n;
    g.r_inner = opt.r0;

    // keep the trajectory while it is still on the decaying branch; the last
    // stretch before the shooting event is separation noise
    size_t keep = tr.x.size();
    while (keep > 1 && !(tr.y[keep - 1][0] > 1e-9 && tr.y[keep - 1][1] < 0.0)) --keep;
    g.tau.assign(tr.x.begin(), tr.x.begin() + keep);
    g.g.resize(keep);
    g.s.resize(keep);
    g.cum_grad.resize(keep);
    g.cum_mass.resize(keep);
    for (size_t i = 0; i < keep; ++i) {
        g.g[i] = tr.y[i][0];
        g.s[i] = tr.y[i][1];
        g.cum_grad[i] = tr.y[i][2];
        g.cum_mass[i] = tr.y[i][3];
    }
    g.r_outer = std::exp(g.tau.back());
    g.norm_n_pow = dim.omega * g.cum_mass.back();
    g.grad_n_pow = dim.omega * g.cum_grad.back();

    if (opt.sensitivity) {
        GreenOptions o2 = opt;
        o2.r0 *= 0.5;
        o2.sensitivity = false;
        const double a2 = green_shoot(dim, alpha, o2.r0, tau_end, o2.rtol, o2.atol);
        g.r0_sensitivity = std::abs(a2 - a_const);
    }
    return g;
}

GreenSolution green_g0(const Dimension& dim, const GreenOptions& opt) {
    return green_solve(dim, 0.0, opt);
}

GreenSolution green_alpha(const GreenSolution& g0, double alpha, const Dimension& dim) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("green_alpha: alpha must lie in [0, 1)");
    if (alpha == 0.0) return g0;
    const int n = dim.n;
    const double shift = -std::log(1.0 - alpha) / n;  // tau shift, positive
    GreenSolution g = g0;
    g.alpha = alpha;
    g.a_alpha = g0.a_alpha - std::log(1.0 - alpha) / dim.beta_n;
    for (double& t : g.tau) t += shift;
    for (double& m : g.cum_mass) m /= (1.0 - alpha);
    g.norm_n_pow = g0.norm_n_pow / (1.0 - alpha);
    g.grad_n_pow = g0.grad_n_pow;
    g.r_inner = g0.r_inner * std::exp(shift);
    g.r_outer = g0.r_outer * std::exp(shift);
    return g;
}

double GreenSolution::interp_state(double r, const std::vector<double>& y,
                                   bool log_weight) const {
    if (tau.empty()) return 0.0;
    const double t = std::log(r);
    if (t <= tau.front()) {
        if (&y == &g && log_weight)
            return -(dim.n / dim.beta_n) * std::log(r) + a_alpha;
        return y.front();
    }
    if (t >= tau.back()) {
        if (&y == &g || &y == &s) {
            // exponential continuation fitted to the last stored decade
            const size_t m = tau.size();
            const size_t j = m > 40 ? m - 40 : 0;
            const double& v1 = y[j];
            const double& v2 = y[m - 1];
            if (std::abs(v2) < 1e-300 || std::abs(v1) < 1e-300 || v1 * v2 <= 0.0) return 0.0;
            const double rate =
                std::log(std::abs(v2 / v1)) / (std::exp(tau[m - 1]) - std::exp(tau[j]));
            const double dr = r - std::exp(tau[m - 1]);
            if (rate * dr < -700.0) return 0.0;
            return v2 * std::exp(rate * dr);
        }
        return y.back();
    }
    const auto it = std::upper_bound(tau.begin(), tau.end(), t);
    const int i = static_cast<int>(it - tau.begin()) - 1;
    const double h = tau[i + 1] - tau[i];
    const double u = (t - tau[i]) / h;
    // Hermite using the ODE right-hand side for the two function states
    auto deriv = [&](int idx) {
        if (&y == &g)
            return std::copysign(std::pow(std::abs(s[idx]), 1.0 / (dim.n - 1)), s[idx]);
        if (&y == &s)
            return (1.0 - alpha) * std::exp(dim.n * tau[idx]) * odd_pow(g[idx], dim.n);
        if (&y == &cum_grad)
            return std::pow(std::abs(s[idx]), double(dim.n) / (dim.n - 1));
        return ipow(std::abs(g[idx]), dim.n) * std::exp(dim.n * tau[idx]);
    };
    const double d0 = deriv(i), d1 = deriv(i + 1);
    const double u2 = u * u, u3 = u2 * u;
    return y[i] * (2 * u3 - 3 * u2 + 1) + y[i + 1] * (-2 * u3 + 3 * u2) +
           h * (d0 * (u3 - 2 * u2 + u) + d1 * (u3 - u2));
}

double GreenSolution::g_at(double r) const { return interp_state(r, g, true); }
double GreenSolution::s_at(double r) const { return interp_state(r, s, false); }

double GreenSolution::mass_within(double r) const {
    return dim.omega * interp_state(r, cum_mass, false);
}

RadialProfile GreenSolution::sample(const RadialGrid& grid) const {
    std::vector<double> vals(grid.size());
    for (int i = 0; i < grid.size(); ++i) vals[i] = g_at(grid.r_nodes()[i]);
    return RadialProfile(grid, std::move(vals), Interp::MonotoneCubic);
}

double green_direct_check(const GreenSolution& g, const Dimension& dim) {
    if (g.tau.empty()) return 0.0;
    const int n = dim.n;
    const double radii[] = {0.05, 0.1, 0.5, 1.0, 2.0, 5.0};
    double worst = 0.0;
    for (size_t ia = 0; ia + 1 < std::size(radii); ++ia) {
        const double a = radii[ia], b = radii[ia + 1];
        if (a < g.r_inner * 1.5 || b > g.r_outer * 0.7) continue;
        const int m = 4000;
        const double ta = std::log(a), tb = std::log(b);
        const double h = (tb - ta) / m;
        double integral = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double t = ta + j * h;
            const double gg = g.g_at(std::exp(t));
            const double w = (j == 0 || j == m) ? 0.5 : 1.0;
            integral += w * h * std::pow(std::abs(gg), n - 1) * std::exp(n * t);
        }
        const double defect =
            std::abs(g.s_at(b) - g.s_at(a) - (1.0 - g.alpha) * integral);
        worst = std::max(worst, defect);
    }
    return worst;
}

}  // namespace mtlab
