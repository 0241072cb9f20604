// mtlab: numerical experiments around the Moser-Trudinger variational
// problem MT(N, beta, alpha) on R^N. Every run writes a JSON report that
// embeds its fully resolved configuration; profiles go to CSV.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtlab/io.hpp"
#include "mtlab/maximizer.hpp"
#include "mtlab/odes.hpp"
#include "mtlab/sequences.hpp"

using json = nlohmann::ordered_json;
using namespace mtlab;

namespace {

struct CommonOpts {
    int dim = 2;
    double grid_tmin = -20.0;
    double grid_tmax = 60.0;
    double grid_h = 0.01;
    std::string output;
    std::string profile_out;
    std::string format = "json";
    bool no_timing = false;
};

struct RunContext {
    json config;
    json results = json::object();
    json diagnostics = json::object();
    std::vector<std::pair<std::string, RadialProfile>> profiles;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_dim = true) {
    if (with_dim) cmd->add_option("--dim", c.dim, "space dimension N >= 2");
    cmd->add_option("--grid-tmin", c.grid_tmin, "grid window lower end in t = -N ln r");
    cmd->add_option("--grid-tmax", c.grid_tmax, "grid window upper end");
    cmd->add_option("--grid-h", c.grid_h, "grid spacing in t");
    cmd->add_option("--output", c.output, "JSON report path");
    cmd->add_option("--profile-out", c.profile_out, "CSV profile path");
    cmd->add_option("--format", c.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--no-timing", c.no_timing, "omit wall_time_s from the report");
}

json common_config(const std::string& command, const CommonOpts& c) {
    json j;
    j["command"] = command;
    j["dim"] = c.dim;
    j["grid_tmin"] = c.grid_tmin;
    j["grid_tmax"] = c.grid_tmax;
    j["grid_h"] = c.grid_h;
    j["format"] = c.format;
    return j;
}

RadialGrid make_grid(const CommonOpts& c, const Dimension& d) {
    return RadialGrid(d, c.grid_tmin, c.grid_tmax, c.grid_h);
}

json flags_to_json(const EvalFlags& f) {
    json j;
    j["saturation_events"] = f.saturation_events;
    j["tail_estimates"] = f.tail_ratio;
    return j;
}

std::string csv_cell(const json& v) {
    if (v.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        for (char& ch : s)
            if (ch == ',') ch = ';';
        return s;
    }
    return v.dump();
}

// tabular rendering of the results: row tables become one CSV line per row
// (nested per-row results flattened into columns), scalars a key,value list
std::string results_as_csv(const json& results) {
    std::ostringstream out;
    if (results.contains("rows") && results["rows"].is_array() &&
        !results["rows"].empty()) {
        const auto& rows = results["rows"];
        std::vector<std::string> cols;
        for (const auto& [key, val] : rows.front().items()) {
            if (val.is_object())
                for (const auto& [k2, v2] : val.items()) cols.push_back(key + "." + k2);
            else
                cols.push_back(key);
        }
        for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << "\n";
        for (const auto& row : rows) {
            bool first = true;
            for (const auto& col : cols) {
                const auto dot = col.find('.');
                json cell;
                if (dot == std::string::npos) {
                    cell = row.contains(col) ? row[col] : json();
                } else {
                    const std::string outer = col.substr(0, dot), inner = col.substr(dot + 1);
                    if (row.contains(outer) && row[outer].is_object() &&
                        row[outer].contains(inner))
                        cell = row[outer][inner];
                }
                out << (first ? "" : ",") << csv_cell(cell);
                first = false;
            }
            out << "\n";
        }
    } else {
        out << "key,value\n";
        for (const auto& [key, val] : results.items())
            out << key << "," << csv_cell(val) << "\n";
    }
    return out.str();
}

void write_report(const RunContext& ctx, const CommonOpts& c, double wall_s) {
    json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["version"] = kVersion;
    rep["config"] = ctx.config;
    rep["results"] = ctx.results;
    rep["diagnostics"] = ctx.diagnostics;
    if (!c.no_timing) rep["wall_time_s"] = wall_s;
    const std::string text =
        c.format == "csv" ? results_as_csv(ctx.results) : rep.dump(2) + "\n";
    if (c.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.output, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + c.output);
        out << text;
    }
    for (const auto& [path, prof] : ctx.profiles) write_profile_csv(path, prof);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("empty value list");
    return out;
}

// ---------------------------------------------------------------------
// command bodies; each returns results/diagnostics inside the context
// ---------------------------------------------------------------------

void run_constants(RunContext& ctx, const CommonOpts& c) {
    const Dimension d = make_dimension(c.dim);
    ctx.results["omega"] = d.omega;
    ctx.results["beta_N"] = d.beta_n;
    ctx.results["c_N"] = d.c_n;
    ctx.results["harmonic_sum"] = harmonic_sum(d);
}

void run_functional(RunContext& ctx, const CommonOpts& c, double beta, double alpha,
                    const std::string& seed, bool supercritical) {
    const Dimension d = make_dimension(c.dim);
    const RadialGrid g = make_grid(c, d);
    const RadialProfile u = make_seed(seed, d, &g);
    FunctionalParams p{beta, alpha, supercritical};
    EvalFlags flags;
    const double value = mt_functional(u, p, &flags);
    const double psi_value = mt_functional_psi(u, p);
    ctx.results["value"] = value;
    ctx.results["psi_value"] = psi_value;
    ctx.results["ln_mass"] = std::pow(u.ln_norm(), d.n);
    ctx.results["sobolev_norm"] = u.sobolev_norm();
    ctx.diagnostics = flags_to_json(flags);
    if (!c.profile_out.empty()) ctx.profiles.emplace_back(c.profile_out, u);
}

void run_moser_diverge(RunContext& ctx, const CommonOpts& c, double alpha, double big_r,
                       double k_max, double k_step) {
    const Dimension d = make_dimension(c.dim);
    CommonOpts cc = c;
    cc.grid_tmax = std::max(c.grid_tmax, k_max + 30.0);
    const RadialGrid g = make_grid(cc, d);
    FunctionalParams p{d.beta_n, alpha, false};
    json rows = json::array();
    EvalFlags flags;
    for (double k = k_step; k <= k_max + 1e-9; k += k_step) {
        const RadialProfile u = normalized_moser(MoserParams{k, big_r}, d, &g);
        json row;
        row["k"] = k;
        row["value"] = mt_functional(u, p, &flags);
        rows.push_back(row);
    }
    ctx.results["rows"] = rows;
    ctx.results["bound_R^N_omega_over_N"] =
        std::pow(big_r, d.n) * d.omega / d.n;
    ctx.diagnostics = flags_to_json(flags);
}

void run_lower_bound(RunContext& ctx, const CommonOpts& c, double beta, double alpha,
                     const std::string& seed, const std::string& t_list) {
    const Dimension d = make_dimension(c.dim);
    const RadialGrid g = make_grid(c, d);
    const RadialProfile v = make_seed(seed, d, &g);
    FunctionalParams p{beta, alpha, false};
    const auto pts = lower_bound_curve(v, p, parse_list(t_list));
    const double target = std::pow(beta, d.n - 1) / factorial(d.n - 1) * (1.0 + alpha);
    json rows = json::array();
    bool exceeds = false;
    for (const auto& pt : pts) {
        json row;
        row["t"] = pt.t;
        row["j_value"] = pt.j_value;
        row["expansion_value"] = pt.expansion_value;
        rows.push_back(row);
        if (pt.j_value > target) exceeds = true;
    }
    ctx.results["rows"] = rows;
    ctx.results["leading_term"] = target;
    ctx.results["exceeds_leading_term"] = exceeds;
}

void run_ishiwata(RunContext& ctx, const CommonOpts& c, double beta, double alpha,
                  const std::string& seed) {
    CommonOpts cc = c;
    cc.dim = 2;
    const Dimension d = make_dimension(2);
    const RadialGrid g = make_grid(cc, d);
    const RadialProfile v = make_seed(seed, d, &g);
    const auto der = ishiwata_derivative(v, FunctionalParams{beta, alpha, false});
    ctx.results["finite_difference"] = der.finite_difference;
    ctx.results["series"] = der.series;
    ctx.results["negative"] = der.finite_difference < 0.0;
}

void run_blowup(RunContext& ctx, const CommonOpts& c) {
    const Dimension d = make_dimension(c.dim);
    ctx.results["mass"] = blowup_mass(d);
    json moments = json::array();
    for (double delta : {0.0, 0.1, 0.5}) {
        const auto lm = liouville_moment(d, delta);
        json row;
        row["delta"] = delta;
        row["quadrature"] = lm.quadrature;
        row["gamma_value"] = lm.gamma_value;
        moments.push_back(row);
    }
    ctx.results["gamma_moments"] = moments;
    if (!c.profile_out.empty())
        ctx.profiles.emplace_back(c.profile_out, blowup_profile(d));
}

void run_b2(RunContext& ctx, const CommonOpts& c) {
    const GroundState gs = gn_ground_state();
    ctx.results["b2"] = gs.b2;
    ctx.results["b2_identity"] = gs.b2_identity;
    ctx.results["q0"] = gs.q0;
    ctx.results["l2_norm_sq"] = gs.l2_sq;
    ctx.results["l4_norm_pow4"] = gs.l4_pow4;
    ctx.results["grad_norm_sq"] = gs.grad_sq;
    ctx.results["gaussian_quotient"] = 1.0 / (2.0 * M_PI);
    ctx.diagnostics["residual"] = gs.residual;
    ctx.diagnostics["bracket_width"] = gs.bracket_width;
    if (!c.profile_out.empty()) ctx.profiles.emplace_back(c.profile_out, gs.profile);
}

void run_green(RunContext& ctx, const CommonOpts& c, double alpha,
               const std::string& method) {
    const Dimension d = make_dimension(c.dim);
    GreenSolution g = [&] {
        if (method == "direct" || alpha == 0.0) return green_solve(d, alpha);
        return green_alpha(green_g0(d), alpha, d);
    }();
    ctx.results["A_alpha"] = g.a_alpha;
    ctx.results["log_coefficient"] = g.log_coefficient;
    ctx.results["norm_N_pow_N"] = g.norm_n_pow;
    ctx.results["weak_form_defect"] = green_direct_check(g, d);
    ctx.results["carleson_chang_bound"] = carleson_chang_bound(d, g.a_alpha);
    ctx.diagnostics["r0_sensitivity"] = g.r0_sensitivity;
    if (!c.profile_out.empty())
        ctx.profiles.emplace_back(c.profile_out, g.sample(make_grid(c, d)));
}

void run_testfn(RunContext& ctx, const CommonOpts& c, double alpha, double eps) {
    const Dimension d = make_dimension(c.dim);
    const RadialGrid g = make_grid(c, d);
    const GreenSolution ga = green_alpha(green_g0(d), alpha, d);
    const TestFunction tf = test_function(eps, alpha, ga, d, &g);
    EvalFlags flags;
    const double excess = test_function_excess(tf, d, &flags);
    ctx.results["c"] = tf.params.c;
    ctx.results["A"] = tf.params.a_const;
    ctx.results["A_alpha"] = tf.params.a_alpha;
    ctx.results["continuity_defect"] = tf.params.continuity_defect;
    ctx.results["norm_defect"] = tf.params.norm_defect;
    ctx.results["excess"] = excess;
    ctx.results["carleson_chang_bound"] = carleson_chang_bound(d, tf.params.a_alpha);
    ctx.diagnostics = flags_to_json(flags);
    ctx.diagnostics["iterations"] = tf.params.iterations;
    if (!c.profile_out.empty()) ctx.profiles.emplace_back(c.profile_out, tf.profile);
}

void run_maximize(RunContext& ctx, const CommonOpts& c, double beta, double alpha,
                  const std::string& seed, int budget) {
    const Dimension d = make_dimension(c.dim);
    const RadialGrid g = make_grid(c, d);
    const RadialProfile s = make_seed(seed, d, &g);
    const MaximizerReport rep = maximize(FunctionalParams{beta, alpha, false}, d, s, budget);
    ctx.results["value"] = rep.value;
    ctx.results["lambda"] = rep.multipliers.lambda;
    ctx.results["alpha_eps"] = rep.multipliers.alpha_eps;
    ctx.results["gamma_eps"] = rep.multipliers.gamma_eps;
    ctx.results["el_residual"] = rep.el_residual;
    ctx.results["c0"] = rep.concentration.c0;
    ctx.results["ln_mass"] = rep.concentration.ln_mass;
    ctx.results["r_concentration"] = rep.concentration.r_conc;
    ctx.results["converged"] = rep.converged;
    ctx.diagnostics["iterations"] = rep.iterations;
    ctx.diagnostics["monotonicity_defect"] = rep.monotonicity_defect;
    if (!c.profile_out.empty()) ctx.profiles.emplace_back(c.profile_out, rep.profile);
    if (!rep.converged) throw std::runtime_error("maximize: budget exhausted");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mtlab: Moser-Trudinger variational laboratory"};
    app.set_config("--config", "", "flat key=value config file; flags override");
    app.require_subcommand(1);

    CommonOpts copt;

    // constants
    auto* cmd_constants = app.add_subcommand("constants", "dimension constants");
    add_common(cmd_constants, copt);

    // functional
    double beta = 1.0, alpha = 0.0, eps = 1e-3, big_r = 1.0;
    double k_max = 40.0, k_step = 10.0;
    int budget = 20000;
    bool supercritical = false;
    std::string seed = "gaussian", t_list = "0.3,0.1,0.03,0.01,0.003", method = "scale";

    auto* cmd_fn = app.add_subcommand("functional", "evaluate the MT functional on a seed");
    add_common(cmd_fn, copt);
    cmd_fn->add_option("--beta", beta);
    cmd_fn->add_option("--alpha", alpha);
    cmd_fn->add_option("--seed", seed, "gaussian, moser5, bump, sech, ground-state");
    cmd_fn->add_flag("--supercritical", supercritical, "allow beta > beta_N");

    auto* cmd_md = app.add_subcommand("moser-diverge",
                                      "functional along the normalized Moser sequence");
    add_common(cmd_md, copt);
    cmd_md->add_option("--alpha", alpha);
    cmd_md->add_option("--R", big_r);
    cmd_md->add_option("--k-max", k_max);
    cmd_md->add_option("--k-step", k_step);

    auto* cmd_lb = app.add_subcommand("lower-bound", "scaled-family lower bound sweep");
    add_common(cmd_lb, copt);
    cmd_lb->add_option("--beta", beta);
    cmd_lb->add_option("--alpha", alpha);
    cmd_lb->add_option("--seed", seed, "profile family to scale");
    cmd_lb->add_option("--t-list", t_list);

    auto* cmd_ish = app.add_subcommand("ishiwata", "scaling-curve derivative at t = 1 (N=2)");
    add_common(cmd_ish, copt, false);
    cmd_ish->add_option("--beta", beta);
    cmd_ish->add_option("--alpha", alpha);
    cmd_ish->add_option("--seed", seed, "unit-norm trial profile");

    auto* cmd_bu = app.add_subcommand("blowup", "Liouville bubble mass and moments");
    add_common(cmd_bu, copt);

    auto* cmd_b2 = app.add_subcommand("b2", "Gagliardo-Nirenberg constant B2 (N=2)");
    add_common(cmd_b2, copt, false);

    auto* cmd_gr = app.add_subcommand("green", "Green function G_alpha and A_alpha");
    add_common(cmd_gr, copt);
    cmd_gr->add_option("--alpha", alpha);
    cmd_gr->add_option("--method", method, "scale (from G_0) or direct")
        ->check(CLI::IsMember({"scale", "direct"}));

    auto* cmd_tf = app.add_subcommand("testfn", "matched test function and its excess");
    add_common(cmd_tf, copt);
    cmd_tf->add_option("--alpha", alpha);
    cmd_tf->add_option("--eps", eps);

    auto* cmd_mx = app.add_subcommand("maximize", "projected gradient ascent");
    add_common(cmd_mx, copt);
    cmd_mx->add_option("--beta", beta);
    cmd_mx->add_option("--alpha", alpha);
    cmd_mx->add_option("--seed", seed, "ascent starting profile");
    cmd_mx->add_option("--budget", budget);

    auto* cmd_sw = app.add_subcommand("sweep", "run a command over a value list");
    add_common(cmd_sw, copt);
    std::string sw_command = "ishiwata", sw_axis = "beta", sw_values = "0.05,0.1";
    cmd_sw->add_option("--command", sw_command,
                       "one of: functional, ishiwata, testfn, maximize, green");
    cmd_sw->add_option("--axis", sw_axis, "numeric option to vary (beta, alpha, eps)");
    cmd_sw->add_option("--values", sw_values, "comma-separated values");
    cmd_sw->add_option("--beta", beta);
    cmd_sw->add_option("--alpha", alpha);
    cmd_sw->add_option("--eps", eps);
    cmd_sw->add_option("--seed", seed);
    cmd_sw->add_option("--budget", budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // validation error
    }

    const auto t_start = std::chrono::steady_clock::now();
    RunContext ctx;
    int status = 0;
    try {
        if (app.got_subcommand(cmd_constants)) {
            ctx.config = common_config("constants", copt);
            run_constants(ctx, copt);
        } else if (app.got_subcommand(cmd_fn)) {
            ctx.config = common_config("functional", copt);
            ctx.config["beta"] = beta;
            ctx.config["alpha"] = alpha;
            ctx.config["seed"] = seed;
            ctx.config["supercritical"] = supercritical;
            run_functional(ctx, copt, beta, alpha, seed, supercritical);
        } else if (app.got_subcommand(cmd_md)) {
            ctx.config = common_config("moser-diverge", copt);
            ctx.config["alpha"] = alpha;
            ctx.config["R"] = big_r;
            ctx.config["k_max"] = k_max;
            ctx.config["k_step"] = k_step;
            run_moser_diverge(ctx, copt, alpha, big_r, k_max, k_step);
        } else if (app.got_subcommand(cmd_lb)) {
            ctx.config = common_config("lower-bound", copt);
            ctx.config["beta"] = beta;
            ctx.config["alpha"] = alpha;
            ctx.config["seed"] = seed;
            ctx.config["t_list"] = t_list;
            run_lower_bound(ctx, copt, beta, alpha, seed, t_list);
        } else if (app.got_subcommand(cmd_ish)) {
            CommonOpts c2 = copt;
            c2.dim = 2;
            ctx.config = common_config("ishiwata", c2);
            ctx.config["beta"] = beta;
            ctx.config["alpha"] = alpha;
            ctx.config["seed"] = seed;
            run_ishiwata(ctx, c2, beta, alpha, seed);
        } else if (app.got_subcommand(cmd_bu)) {
            ctx.config = common_config("blowup", copt);
            run_blowup(ctx, copt);
        } else if (app.got_subcommand(cmd_b2)) {
            CommonOpts c2 = copt;
            c2.dim = 2;
            ctx.config = common_config("b2", c2);
            run_b2(ctx, c2);
        } else if (app.got_subcommand(cmd_gr)) {
            ctx.config = common_config("green", copt);
            ctx.config["alpha"] = alpha;
            ctx.config["method"] = method;
            run_green(ctx, copt, alpha, method);
        } else if (app.got_subcommand(cmd_tf)) {
            ctx.config = common_config("testfn", copt);
            ctx.config["alpha"] = alpha;
            ctx.config["eps"] = eps;
            run_testfn(ctx, copt, alpha, eps);
        } else if (app.got_subcommand(cmd_mx)) {
            ctx.config = common_config("maximize", copt);
            ctx.config["beta"] = beta;
            ctx.config["alpha"] = alpha;
            ctx.config["seed"] = seed;
            ctx.config["budget"] = budget;
            run_maximize(ctx, copt, beta, alpha, seed, budget);
        } else if (app.got_subcommand(cmd_sw)) {
            ctx.config = common_config("sweep", copt);
            ctx.config["sweep_command"] = sw_command;
            ctx.config["axis"] = sw_axis;
            ctx.config["values"] = sw_values;
            ctx.config["beta"] = beta;
            ctx.config["alpha"] = alpha;
            ctx.config["eps"] = eps;
            ctx.config["seed"] = seed;
            json rows = json::array();
            for (double v : parse_list(sw_values)) {
                double b = beta, a = alpha, e = eps;
                if (sw_axis == "beta") b = v;
                else if (sw_axis == "alpha") a = v;
                else if (sw_axis == "eps") e = v;
                else throw CLI::ValidationError("unknown sweep axis " + sw_axis);
                RunContext sub;
                json row;
                row["value_of_" + sw_axis] = v;
                try {
                    if (sw_command == "ishiwata") run_ishiwata(sub, copt, b, a, seed);
                    else if (sw_command == "functional")
                        run_functional(sub, copt, b, a, seed, false);
                    else if (sw_command == "testfn") run_testfn(sub, copt, a, e);
                    else if (sw_command == "green") run_green(sub, copt, a, "scale");
                    else if (sw_command == "maximize")
                        run_maximize(sub, copt, b, a, seed, budget);
                    else throw CLI::ValidationError("unknown sweep command " + sw_command);
                    row["status"] = "ok";
                    row["results"] = sub.results;
                } catch (const std::exception& ex) {
                    row["status"] = std::string("error: ") + ex.what();
                }
                rows.push_back(row);
            }
            ctx.results["rows"] = rows;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                .count();
        write_report(ctx, copt, wall);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        status = 2;
    } catch (const CLI::Error& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        status = 2;
    } catch (const std::exception& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        // partial diagnostics still get written
        try {
            ctx.diagnostics["error"] = ex.what();
            write_report(ctx, copt, 0.0);
        } catch (...) {
        }
        status = 3;
    }
    return status;
}
