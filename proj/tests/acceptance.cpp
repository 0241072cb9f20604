// Acceptance suite: every criterion runs at its stated tolerance and prints
// one PASS/FAIL line; the exit status is the number of failed criteria.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mtlab/bessel.hpp"
#include "mtlab/functional.hpp"
#include "mtlab/io.hpp"
#include "mtlab/maximizer.hpp"
#include "mtlab/odes.hpp"
#include "mtlab/sequences.hpp"

using namespace mtlab;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
    std::printf("[%2d] %s  %s: %s\n", id, ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

RadialProfile smooth_profile(const RadialGrid& g, double width, double power = 2.0) {
    std::vector<double> v(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.r_nodes()[i] / width;
        v[i] = (x < 30.0) ? std::exp(-std::pow(x, power)) : 0.0;
    }
    return RadialProfile(g, std::move(v), Interp::MonotoneCubic);
}

RadialProfile random_decreasing(std::mt19937& rng, const RadialGrid& g) {
    std::uniform_real_distribution<double> amp(0.2, 1.5), width(0.5, 3.0);
    const int terms = 1 + static_cast<int>(rng() % 3);
    std::vector<double> a(terms), s(terms);
    for (int m = 0; m < terms; ++m) {
        a[m] = amp(rng);
        s[m] = width(rng);
    }
    std::vector<double> v(g.size());
    for (int i = 0; i < g.size(); ++i) {
        double sum = 0.0;
        for (int m = 0; m < terms; ++m) {
            const double x = g.r_nodes()[i] / s[m];
            if (x < 30.0) sum += a[m] * std::exp(-x * x);
        }
        v[i] = sum;
    }
    return RadialProfile(g, std::move(v), Interp::MonotoneCubic);
}

// closed-form ||u_k||_N^N, R = 1
double moser_mass_exact(double k, int n) {
    double partial = 0.0, term = 1.0;
    for (int j = 0; j <= n; ++j) {
        partial += term;
        term *= k / (j + 1);
    }
    const double lower = factorial(n) * (1.0 - std::exp(-k) * partial);
    return std::pow(k, n - 1) * std::exp(-k) / std::pow(double(n), n) +
           lower / (std::pow(double(n), n) * k);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------

void criterion_1_constants() {
    bool ok = true;
    for (int n = 2; n <= 6; ++n) {
        const Dimension d = make_dimension(n);
        const double c1 = std::pow(d.omega / n, 1.0 / (n - 1));
        const double c2 = d.beta_n / std::pow(double(n), double(n) / (n - 1));
        ok = ok && std::abs(c1 - c2) <= 1e-14 * c1;
        ok = ok && std::abs(d.beta_n - n * std::pow(d.omega, 1.0 / (n - 1))) <= 1e-14 * d.beta_n;
        ok = ok && std::abs(d.omega - 2.0 * std::pow(M_PI, 0.5 * n) /
                                          std::tgamma(0.5 * n)) <= 1e-13 * d.omega;
    }
    const Dimension d2 = make_dimension(2);
    ok = ok && d2.omega == 2.0 * M_PI && d2.beta_n == 4.0 * M_PI && d2.c_n == M_PI;
    report(1, ok, "constants",
           fmt("N=2..6 dual formulas at 1e-14; N=2 = (2pi, 4pi, pi) bit-exact"));
}

void criterion_2_truncated_exponentials() {
    bool ineq_ok = true, fd_ok = true;
    double worst_fd = 0.0;
    for (int n : {2, 3, 4, 5}) {
        const Dimension d = make_dimension(n);
        for (int i = 0; i < 1000; ++i) {
            const double t = std::pow(10.0, -8.0 + (std::log10(500.0) + 8.0) * i / 999.0);
            const double phi = phi_n(t, d);
            double lead = 1.0;
            for (int k = 1; k <= n - 1; ++k) lead *= t / k;
            ineq_ok = ineq_ok && phi >= lead * (1.0 - 1e-14);
            ineq_ok = ineq_ok && t * phi_n_prime(t, d) >= phi * (1.0 - 1e-14);
        }
        for (int i = 0; i < 200; ++i) {
            const double t = std::pow(10.0, -4.0 + (std::log10(50.0) + 4.0) * i / 199.0);
            const double h = 1e-6 * t;
            const double fd = (phi_n(t + h, d) - phi_n(t - h, d)) / (2.0 * h);
            const double rel = std::abs(phi_n_prime(t, d) - fd) / std::abs(fd);
            worst_fd = std::max(worst_fd, rel);
            fd_ok = fd_ok && rel <= 1e-6;
        }
    }
    report(2, ineq_ok && fd_ok, "truncated exponentials",
           fmt("inequalities on 1000-pt sweep, N=2..5; worst FD mismatch %.2e", worst_fd));
}

void criterion_3_scaling_laws() {
    std::mt19937 rng(20240811);
    bool ok = true;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Dimension d = make_dimension(2 + rep % 3);
        const RadialGrid g = RadialGrid::standard(d);
        const int n = d.n;
        const RadialProfile v = random_decreasing(rng, g);
        const double t = std::uniform_real_distribution<double>(0.2, 5.0)(rng);
        const RadialProfile vt = scale_family(v, t);
        const double p = 2.0 * n;
        const double e1 = std::abs(std::pow(vt.grad_norm(), n) -
                                   t * std::pow(v.grad_norm(), n)) /
                          (t * std::pow(v.grad_norm(), n));
        const double e2 =
            std::abs(std::pow(lp_norm(vt, p), p) -
                     std::pow(t, (p - n) / n) * std::pow(lp_norm(v, p), p)) /
            (std::pow(t, (p - n) / n) * std::pow(lp_norm(v, p), p));
        worst = std::max({worst, e1, e2});
        ok = ok && e1 <= 1e-6 && e2 <= 1e-6;
    }
    report(3, ok, "scaling laws", fmt("100 random profiles, worst deviation %.2e", worst));
}

void criterion_4_moser() {
    bool grad_ok = true, dev_ok = true, link_ok = true;
    double worst_grad = 0.0;
    for (int n : {2, 3}) {
        const Dimension d = make_dimension(n);
        const RadialGrid g(d, -20.0, 135.0, 0.01);
        for (int k = 1; k <= 100; ++k) {
            const RadialProfile u = moser_profile(MoserParams{double(k), 1.0}, d, &g);
            const double dev = std::abs(u.grad_norm() - 1.0);
            worst_grad = std::max(worst_grad, dev);
            grad_ok = grad_ok && dev <= 1e-12;
            if (k >= 10) {
                const double mass_dev = std::abs(
                    moser_mass_exact(k, n) - factorial(n) / (std::pow(double(n), n) * k));
                dev_ok = dev_ok && mass_dev <= 10.0 * std::pow(double(k), n - 1) *
                                                   std::exp(-double(k));
            }
            if (k == 5 || k == 10 || k == 20) {
                const double quad = std::pow(u.ln_norm(), n);
                link_ok = link_ok &&
                          std::abs(quad - moser_mass_exact(k, n)) <= 1e-6 * quad;
            }
        }
    }
    report(4, grad_ok && dev_ok && link_ok, "moser sequence",
           fmt("grad norm worst |.-1| = %.2e (k=1..100); mass remainder inside "
               "10 k^{N-1}e^{-k}; quadrature links at 1e-6",
               worst_grad));
}

void criterion_5_change_of_variables() {
    bool ok = true;
    double worst = 0.0;
    for (int n : {2, 3}) {
        const Dimension d = make_dimension(n);
        const RadialGrid g(d, -20.0, 60.0, 0.01);
        for (double k : {2.0, 5.0, 10.0}) {
            for (double beta : {d.beta_n / 2.0, d.beta_n}) {
                const RadialProfile u = moser_profile(MoserParams{k, 1.0}, d, &g);
                const auto cov = functional_change_of_variables(u, beta);
                const double rel = std::abs(cov.lhs - cov.rhs) / std::abs(cov.rhs);
                worst = std::max(worst, rel);
                ok = ok && rel <= 1e-6;
            }
        }
    }
    report(5, ok, "change of variables", fmt("worst lhs/rhs mismatch %.2e", worst));
}

void criterion_6_divergence() {
    const Dimension d = make_dimension(2);
    const RadialGrid g = RadialGrid::standard(d);
    const FunctionalParams p{d.beta_n, 1.0, false};
    bool ok = true;
    std::string note;
    for (double big_r : {1.0, 2.0}) {
        double prev = 0.0;
        for (double k : {10.0, 20.0, 30.0, 40.0}) {
            const double core = moser_core_bound(MoserParams{k, big_r}, d, 1.0, &g);
            ok = ok && core > prev;
            prev = core;
        }
        const double target = 0.9 * big_r * big_r * M_PI;
        const double full40 =
            mt_functional(normalized_moser(MoserParams{40.0, big_r}, d, &g), p);
        ok = ok && prev >= target && full40 >= target;
        if (big_r == 2.0) note = fmt("k=40 R=2: core %.3f, full %.3f vs 0.9R^2pi=%.3f", prev,
                                     full40, target);
    }
    const double v1 = mt_functional(normalized_moser(MoserParams{40.0, 1.0}, d, &g), p);
    const double v2 = mt_functional(normalized_moser(MoserParams{40.0, 2.0}, d, &g), p);
    const double quad_ratio = v2 / (4.0 * v1);
    ok = ok && std::abs(quad_ratio - 1.0) <= 0.1;
    report(6, ok, "divergence at alpha=1",
           note + fmt("; R-doubling ratio/4 = %.4f", quad_ratio));
}

void criterion_7_blowup() {
    bool ok = true;
    double worst_mass = 0.0, worst_mom = 0.0;
    for (int n : {2, 3, 4, 5}) {
        const double mass = blowup_mass(make_dimension(n));
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
        ok = ok && std::abs(mass - 1.0) <= 1e-6;
    }
    for (int n : {2, 3}) {
        const Dimension d = make_dimension(n);
        for (double delta : {0.0, 0.1, 0.5}) {
            const auto lm = liouville_moment(d, delta);
            const double rel = std::abs(lm.quadrature - lm.gamma_value) /
                               std::abs(lm.gamma_value);
            worst_mom = std::max(worst_mom, rel);
            ok = ok && rel <= 1e-6;
        }
    }
    report(7, ok, "blow-up mass and gamma moment",
           fmt("worst |mass-1| = %.2e, worst moment mismatch %.2e", worst_mass, worst_mom));
}

void criterion_8_b2(const GroundState& gs) {
    bool ok = true;
    ok = ok && gs.b2 > 1.0 / (2.0 * M_PI) + 0.005 && gs.b2 < 0.2;
    const double gaussian = (M_PI / 2.0) / (M_PI * M_PI);
    ok = ok && std::abs(gaussian - 1.0 / (2.0 * M_PI)) <= 1e-10;
    ok = ok && gaussian < gs.b2;
    const double ident = std::abs(gs.b2 - gs.b2_identity) / gs.b2;
    ok = ok && ident <= 1e-8;

    // spline-family lower bound: dilation-invariant two-parameter scan
    const Dimension d2 = make_dimension(2);
    const RadialGrid g = RadialGrid::standard(d2);
    double best = 0.0;
    for (double q = 1.05; q <= 3.0; q += 0.0125) {
        std::vector<double> vals(g.size());
        for (int i = 0; i < g.size(); ++i)
            vals[i] = std::pow(1.0 + g.r_nodes()[i] * g.r_nodes()[i], -q);
        const RadialProfile u(g, std::move(vals), Interp::MonotoneCubic);
        best = std::max(best, std::pow(lp_norm(u, 4.0), 4.0) /
                                  (std::pow(u.grad_norm(), 2) *
                                   std::pow(lp_norm(u, 2.0), 2)));
    }
    ok = ok && best <= gs.b2 + 1e-9 && best >= gs.b2 - 5e-4;
    report(8, ok, "B2",
           fmt("b2 = %.6f, identity gap %.1e, family best %.6f, gaussian = 1/(2pi)",
               gs.b2, ident, best));
}

void criterion_9_green(const GreenSolution& g0) {
    constexpr double euler_gamma = 0.57721566490153286;
    const Dimension d2 = make_dimension(2);
    const double a0_exact = (std::log(2.0) - euler_gamma) / (2.0 * M_PI);
    bool ok = std::abs(g0.a_alpha - a0_exact) <= 1e-5;

    const GreenSolution g_half = green_alpha(g0, 0.5, d2);
    const double shift = g_half.a_alpha - g0.a_alpha;
    ok = ok && std::abs(shift - std::log(2.0) / (4.0 * M_PI)) <= 1e-10;

    const GreenSolution direct = green_solve(d2, 0.5);
    ok = ok && std::abs(direct.a_alpha - g_half.a_alpha) <= 1e-4;

    const double defect = std::max({green_direct_check(g0, d2),
                                    green_direct_check(g_half, d2),
                                    green_direct_check(direct, d2)});
    ok = ok && defect <= 1e-6;
    report(9, ok, "green constants",
           fmt("A0 err %.2e, scaling shift err %.2e, direct-vs-scaled %.2e, defect %.2e",
               std::abs(g0.a_alpha - a0_exact),
               std::abs(shift - std::log(2.0) / (4.0 * M_PI)),
               std::abs(direct.a_alpha - g_half.a_alpha), defect));
}

void criterion_10_lower_bound(const GroundState& gs) {
    bool ok = true;
    const Dimension d3 = make_dimension(3);
    const RadialGrid g3 = RadialGrid::standard(d3);
    const RadialProfile v3 = smooth_profile(g3, 1.0);
    const std::vector<double> ts{0.3, 0.1, 0.03, 0.01, 0.003, 0.001};
    for (double alpha : {0.0, 0.5}) {
        const FunctionalParams p{d3.beta_n / 2.0, alpha, false};
        const auto pts = lower_bound_curve(v3, p, ts);
        const double target = p.beta * p.beta / 2.0 * (1.0 + alpha);
        bool exceeded = false;
        for (const auto& pt : pts) exceeded = exceeded || pt.j_value > target;
        ok = ok && exceeded;
    }
    // N = 2: v = the B2 maximizer, beta just above 2/B2
    const Dimension d2 = make_dimension(2);
    const FunctionalParams p2{12.2, 0.0, false};
    const double threshold = 2.0 / gs.b2;
    const auto pts = lower_bound_curve(gs.profile, p2, ts);
    bool exceeded2 = false;
    double best = 0.0;
    for (const auto& pt : pts) {
        exceeded2 = exceeded2 || pt.j_value > 12.2;
        best = std::max(best, pt.j_value);
    }
    ok = ok && exceeded2 && 12.2 > threshold;
    report(10, ok, "scaled-family lower bound",
           fmt("N=3 sweeps exceed beta^2(1+a)/2; N=2 best J = %.4f > beta = 12.2 "
               "(threshold 2/B2 = %.4f)",
               best, threshold));
}

void criterion_11_ishiwata() {
    const Dimension d2 = make_dimension(2);
    const RadialGrid g = RadialGrid::standard(d2);
    std::vector<RadialProfile> battery;
    battery.push_back(normalize_sobolev(smooth_profile(g, 1.0)));
    battery.push_back(normalize_sobolev(smooth_profile(g, 0.6)));
    battery.push_back(normalize_sobolev(smooth_profile(g, 2.0)));
    battery.push_back(normalize_sobolev(smooth_profile(g, 1.0, 1.5)));
    {
        std::vector<double> v(g.size());
        for (int i = 0; i < g.size(); ++i) {
            const double r = g.r_nodes()[i];
            v[i] = (r < 600.0) ? 1.0 / std::cosh(r) : 0.0;
        }
        battery.push_back(normalize_sobolev(RadialProfile(g, std::move(v), Interp::MonotoneCubic)));
    }
    bool ok = true;
    double worst_agree = 0.0;
    for (double beta : {0.02, 0.05, 0.1}) {
        for (double alpha : {0.0, 0.25, 0.5}) {
            for (const auto& v : battery) {
                const auto der = ishiwata_derivative(v, {beta, alpha, false});
                ok = ok && der.finite_difference < 0.0 && der.series < 0.0;
                const double agree = std::abs(der.finite_difference - der.series) /
                                     std::abs(der.series);
                worst_agree = std::max(worst_agree, agree);
                ok = ok && agree <= 1e-4;
            }
        }
    }
    report(11, ok, "ishiwata nonexistence signal",
           fmt("all 45 derivatives negative; worst dual-method gap %.2e", worst_agree));
}

void criterion_12_maximizer() {
    const Dimension d3 = make_dimension(3);
    const RadialGrid g(d3, -20.0, 60.0, 0.01);
    const FunctionalParams p{d3.beta_n / 2.0, 0.3, false};
    const RadialProfile seed = make_seed("gaussian", d3, &g);
    const MaximizerReport rep = maximize(p, d3, seed, 40000);
    bool ok = rep.converged;
    ok = ok && rep.el_residual <= 1e-5;
    ok = ok && rep.monotonicity_defect >= 0.0;
    const double m = rep.concentration.ln_mass;
    ok = ok && rep.multipliers.alpha_eps >= (1.0 + p.alpha) / (1.0 + 2.0 * p.alpha) - 1e-12;
    ok = ok && rep.multipliers.alpha_eps <= 1.0 + 1e-12;
    ok = ok && rep.multipliers.gamma_eps >= p.alpha / (1.0 + 2.0 * p.alpha) - 1e-12;
    ok = ok && rep.multipliers.gamma_eps <= p.alpha + 1e-12;
    ok = ok && rep.multipliers.lambda >=
                   rep.value / (p.beta * std::sqrt(1.0 + p.alpha)) - 1e-12;
    ok = ok && std::abs(rep.profile.sobolev_norm() - 1.0) <= 1e-9;
    report(12, ok, "subcritical maximizer (N=3)",
           fmt("converged in %d its, value %.6f, el_residual %.2e, mass %.4f",
               rep.iterations, rep.value, rep.el_residual, m));
}

void criterion_13_testfn(const GreenSolution& g0) {
    const Dimension d2 = make_dimension(2);
    const GreenSolution ga = green_alpha(g0, 0.05, d2);
    const TestFunction tf = test_function(1e-3, 0.05, ga, d2);
    const double excess = test_function_excess(tf, d2);
    const bool ok = excess > 0.0 && tf.params.continuity_defect <= 1e-8 &&
                    tf.params.norm_defect <= 1e-8;
    report(13, ok, "test-function excess",
           fmt("excess %.4f > 0, defects (%.1e, %.1e)", excess,
               tf.params.continuity_defect, tf.params.norm_defect));
}

void criterion_14_reproducibility() {
    const std::string cli = MTLAB_CLI_PATH;
    bool ok = true;
    std::string detail;
    const std::vector<std::string> runs = {
        "constants --dim 3 --no-timing",
        "green --dim 2 --alpha 0.5 --method scale --no-timing",
    };
    for (size_t i = 0; i < runs.size(); ++i) {
        const std::string o1 = fmt("acc_rep_%zu_a.json", i), o2 = fmt("acc_rep_%zu_b.json", i);
        const int r1 = std::system((cli + " " + runs[i] + " --output " + o1).c_str());
        const int r2 = std::system((cli + " " + runs[i] + " --output " + o2).c_str());
        const std::string s1 = slurp(o1), s2 = slurp(o2);
        ok = ok && r1 == 0 && r2 == 0 && !s1.empty() && s1 == s2;
        std::remove(o1.c_str());
        std::remove(o2.c_str());
    }
    report(14, ok, "reproducibility", "two byte-identical reports per config");
}

}  // namespace

int main() {
    std::printf("mtlab acceptance suite\n");
    criterion_1_constants();
    criterion_2_truncated_exponentials();
    criterion_3_scaling_laws();
    criterion_4_moser();
    criterion_5_change_of_variables();
    criterion_6_divergence();
    criterion_7_blowup();
    const GroundState gs = gn_ground_state();
    criterion_8_b2(gs);
    const GreenSolution g0 = green_g0(make_dimension(2));
    criterion_9_green(g0);
    criterion_10_lower_bound(gs);
    criterion_11_ishiwata();
    criterion_12_maximizer();
    criterion_13_testfn(g0);
    criterion_14_reproducibility();
    if (failures == 0) {
        std::printf("all 14 criteria passed\n");
    } else {
        std::printf("%d criteria failed\n", failures);
    }
    return failures;
}
