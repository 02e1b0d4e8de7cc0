#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "gsv/closed_form.hpp"
#include "gsv/error.hpp"
#include "gsv/explosion.hpp"
#include "gsv/growth.hpp"
#include "gsv/normal.hpp"
#include "gsv/pricing.hpp"
#include "gsv/rates.hpp"
#include "gsv/sampling.hpp"
#include "gsv/simulate.hpp"

namespace gsv::cli {

namespace {

nlohmann::json estimate_json(const MCEstimate& e) {
    nlohmann::json j{{"mean", e.mean}, {"std_error", e.std_error}, {"count", e.count}, {"seed", e.seed},
                     {"hits", e.hits}};
    j["scaled_log"] = e.scaled_log ? nlohmann::json(*e.scaled_log) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json rate_json(const RateResult& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : r.grid_levels) levels.push_back({{"n", l.n}, {"value", l.value}});
    nlohmann::json j{{"value", r.value},
                     {"status", to_string(r.status)},
                     {"iterations", r.iterations},
                     {"restarts_used", r.restarts_used},
                     {"restart_values", r.restart_values},
                     {"grid_levels", levels},
                     {"minimizer", {{"n", r.minimizer.grid.steps()},
                                    {"fdot", r.minimizer.fdot},
                                    {"ldot", r.minimizer.ldot},
                                    {"energy", r.minimizer.energy()}}}};
    if (r.hit_time) j["hit_time"] = *r.hit_time;
    if (r.hit_level) j["hit_level"] = *r.hit_level;
    return j;
}

bool linear_growth(const ModelSpec& model) { return growth_class(model.sigma).cls == GrowthClass::linear; }

SimulationOptions sim_options(const ExperimentConfig& c) {
    SimulationOptions o;
    o.bridge = c.bridge;
    return o;
}

// Sweep row shared by the probability-type tasks.
struct Limit {
    std::optional<double> value;
    std::string compare;  // "scaled_log" or "value"
    std::string note;
};

TaskOutput run_simulate(const ExperimentConfig& c) {
    const ModelSpec model = c.model();
    const PathGrid grid = c.grid();
    const double x = *c.x;
    TaskOutput out;
    out.table.header = {"eps", "regime", "estimate", "std_error", "hits", "scaled_log", "limit", "compare", "gap", "note"};

    std::optional<RateResult> rate;
    const bool any_ldp = std::any_of(c.eps.begin(), c.eps.end(), [&](double e) { return c.scaling(e).regime() == Regime::ldp; });
    if ((any_ldp && linear_growth(model)) || c.tilt == "control") {
        rate = ldp_rate_terminal(model, x, c.solver());
        out.results["ldp_rate"] = rate_json(*rate);
    }

    nlohmann::json rows = nlohmann::json::array();
    for (double eps : c.eps) {
        const ScalingParams sp = c.scaling(eps);
        const Regime regime = sp.regime();
        Limit lim;
        const double s0 = model.sigma.sigma0();
        switch (regime) {
            case Regime::cl:
                lim = {cl_tail(s0, model.T, x), "value", ""};
                break;
            case Regime::exceptional:
                lim = {normal_sf(x / (s0 * std::sqrt(model.T))), "value", ""};
                break;
            case Regime::mdp:
                lim = {-mdp_rate_terminal(s0, model.T, x), "scaled_log", ""};
                break;
            case Regime::ldp:
                if (linear_growth(model))
                    lim = {-rate->value, "scaled_log", ""};
                else
                    lim = {std::nullopt, "scaled_log", std::string(to_string(ErrorCode::growth_violation))};
                break;
        }

        std::vector<double> tilt;
        if (c.tilt == "constant") tilt = constant_tail_tilt(model, sp, x, grid);
        if (c.tilt == "control") {
            if (rate->minimizer.grid.steps() != grid.steps())
                fail(ErrorCode::config_invalid, "mc.tilt: control tilt needs n equal to the finest solver level");
            tilt = tilt_from_control(rate->minimizer.ldot, sp);
        }

        nlohmann::json row{{"eps", eps}, {"regime", to_string(regime)}};
        std::vector<Cell> cells{eps, to_string(regime)};
        try {
            const MCEstimate e = estimate_tail(model, sp, x, grid, c.mc_count, c.seed, tilt.empty() ? nullptr : &tilt,
                                               sim_options(c));
            row["estimate"] = estimate_json(e);
            std::optional<double> gap;
            if (lim.value && lim.compare == "value") gap = e.mean - *lim.value;
            if (lim.value && lim.compare == "scaled_log" && e.scaled_log) gap = *e.scaled_log - *lim.value;
            row["limit"] = lim.value ? nlohmann::json(*lim.value) : nlohmann::json(nullptr);
            row["compare"] = lim.compare;
            row["gap"] = gap ? nlohmann::json(*gap) : nlohmann::json(nullptr);
            row["note"] = lim.note;
            cells.insert(cells.end(), {e.mean, e.std_error, static_cast<double>(e.hits),
                                       e.scaled_log ? Cell(*e.scaled_log) : Cell(std::string()),
                                       lim.value ? Cell(*lim.value) : Cell(std::string()), lim.compare,
                                       gap ? Cell(*gap) : Cell(std::string()), lim.note});
        } catch (const Error& err) {
            if (err.code() != ErrorCode::degenerate_estimate) throw;
            const std::string note(to_string(err.code()));
            row["note"] = note;
            cells.insert(cells.end(), {std::string(), std::string(), std::string(), std::string(),
                                       lim.value ? Cell(*lim.value) : Cell(std::string()), lim.compare, std::string(),
                                       note});
        }
        rows.push_back(row);
        out.table.rows.push_back(cells);
    }
    out.results["sweep"] = rows;
    return out;
}

TaskOutput run_rate(const ExperimentConfig& c) {
    const ModelSpec model = c.model();
    TaskOutput out;
    RateResult r;
    if (c.path) {
        r = ldp_rate_path(model, *c.path, c.solver());
        out.results["kind"] = "path";
    } else {
        r = ldp_rate_terminal(model, *c.x, c.solver());
        out.results["kind"] = "terminal";
        out.results["mdp_rate"] = mdp_rate_terminal(model.sigma.sigma0(), model.T, *c.x);
    }
    out.results["rate"] = rate_json(r);
    out.table.header = {"n", "value"};
    for (const auto& l : r.grid_levels) out.table.rows.push_back({static_cast<double>(l.n), l.value});
    return out;
}

TaskOutput run_exit_rate(const ExperimentConfig& c) {
    const ModelSpec model = c.model();
    const PathGrid grid = c.grid();
    const double a = *c.lower;
    const double b = *c.upper;
    const double t = *c.t;
    TaskOutput out;
    const RateResult r = exit_rate(model, a, b, t, c.solver());
    out.results["exit_rate"] = rate_json(r);
    const double s0 = model.sigma.sigma0();
    const double mdp = std::min(a * a, b * b) / (2.0 * t * s0 * s0);
    out.results["mdp_exit_rate"] = mdp;

    out.table.header = {"eps", "regime", "estimate", "std_error", "scaled_log", "limit", "gap", "note"};
    nlohmann::json rows = nlohmann::json::array();
    if (c.mc_count > 0) {
        for (double eps : c.eps) {
            const ScalingParams sp = c.scaling(eps);
            const Regime regime = sp.regime();
            std::optional<double> lim;
            std::string note;
            if (regime == Regime::ldp)
                lim = -r.value;
            else if (regime == Regime::mdp)
                lim = -mdp;
            else
                note = "no logarithmic limit in this regime";
            const MCEstimate e = estimate_exit_prob(model, sp, a, b, t, grid, c.mc_count, c.seed, sim_options(c));
            std::optional<double> gap;
            if (lim && e.scaled_log) gap = *e.scaled_log - *lim;
            rows.push_back({{"eps", eps},
                            {"regime", to_string(regime)},
                            {"estimate", estimate_json(e)},
                            {"limit", lim ? nlohmann::json(*lim) : nlohmann::json(nullptr)},
                            {"gap", gap ? nlohmann::json(*gap) : nlohmann::json(nullptr)},
                            {"note", note}});
            out.table.rows.push_back({eps, to_string(regime), e.mean, e.std_error,
                                      e.scaled_log ? Cell(*e.scaled_log) : Cell(std::string()),
                                      lim ? Cell(*lim) : Cell(std::string()), gap ? Cell(*gap) : Cell(std::string()),
                                      note});
        }
    }
    out.results["sweep"] = rows;
    return out;
}

TaskOutput run_callprice(const ExperimentConfig& c) {
    const ModelSpec model = c.model();
    const PathGrid grid = c.grid();
    const double x = *c.x;
    const double s0 = model.sigma.sigma0();
    TaskOutput out;
    out.table.header = {"eps", "regime", "price", "std_error", "scaled_log", "limit", "compare", "gap"};

    std::optional<double> rate;
    nlohmann::json rows = nlohmann::json::array();
    for (double eps : c.eps) {
        const ScalingParams sp = c.scaling(eps);
        const Regime regime = sp.regime();
        double limit = 0.0;
        std::string compare = "value";
        nlohmann::json term_json;
        if (regime == Regime::ldp || regime == Regime::mdp) {
            if (regime == Regime::ldp && !rate) {
                if (!linear_growth(model))
                    fail(ErrorCode::growth_violation, "volatility grows faster than linearly; the call estimates do not apply");
                const RateResult r = ldp_rate_terminal(model, x, c.solver());
                out.results["ldp_rate"] = rate_json(r);
                rate = r.value;
            }
            const AsymptoticTerm term = call_asymptote(model, sp, x, rate);
            limit = -term.coefficient;
            compare = "scaled_log";
            term_json = {{"coefficient", term.coefficient}, {"eps_exponent", term.eps_exponent},
                         {"description", term.description}};
        } else if (regime == Regime::cl) {
            limit = call_limit_cl(s0, model.T, x);
            term_json = {{"value", limit}, {"description", "C(x, sqrt(T) sigma0)"}};
        } else {
            const AsymptoticTerm term = call_exceptional(s0, model.T, x, c.alpha);
            limit = term.evaluate(eps);
            term_json = {{"coefficient", term.coefficient}, {"eps_exponent", term.eps_exponent},
                         {"description", term.description}};
        }
        const MCEstimate e = estimate_call(model, sp, x, grid, c.mc_count, c.seed, sim_options(c));
        std::optional<double> gap;
        if (compare == "value")
            gap = e.mean - limit;
        else if (e.scaled_log)
            gap = *e.scaled_log - limit;
        rows.push_back({{"eps", eps},
                        {"regime", to_string(regime)},
                        {"estimate", estimate_json(e)},
                        {"asymptote", term_json},
                        {"limit", limit},
                        {"compare", compare},
                        {"gap", gap ? nlohmann::json(*gap) : nlohmann::json(nullptr)}});
        out.table.rows.push_back({eps, to_string(regime), e.mean, e.std_error,
                                  e.scaled_log ? Cell(*e.scaled_log) : Cell(std::string()), limit, compare,
                                  gap ? Cell(*gap) : Cell(std::string())});
    }
    out.results["sweep"] = rows;
    return out;
}

TaskOutput run_impliedvol(const ExperimentConfig& c) {
    const ModelSpec model = c.model();
    const PathGrid grid = c.grid();
    const double x = *c.x;
    const double s0 = model.sigma.sigma0();
    TaskOutput out;
    out.table.header = {"eps", "regime", "price", "std_error", "nu", "iv_scaled", "asymptote", "gap", "note"};

    std::optional<double> rate;
    nlohmann::json rows = nlohmann::json::array();
    for (double eps : c.eps) {
        const ScalingParams sp = c.scaling(eps);
        const Regime regime = sp.regime();
        if (regime == Regime::ldp && !rate) {
            const RateResult r = ldp_rate_terminal(model, x, c.solver());
            out.results["ldp_rate"] = rate_json(r);
            rate = r.value;
        }
        const AsymptoticTerm term = iv_asymptote(sp, x, s0, model.T, rate);
        const double asym = term.evaluate(eps);
        const MCEstimate e = estimate_call(model, sp, x, grid, c.mc_count, c.seed, sim_options(c));
        const double k = x * sp.eps_pow(sp.alpha);
        nlohmann::json row{{"eps", eps}, {"regime", to_string(regime)}, {"estimate", estimate_json(e)},
                           {"asymptote", asym}, {"description", term.description}};
        std::vector<Cell> cells{eps, to_string(regime), e.mean, e.std_error};
        try {
            const double nu = implied_vol(k, e.mean);
            // Total vol over the horizon eps T, per unit sqrt(eps).
            const double iv = nu / std::sqrt(eps);
            row["nu"] = nu;
            row["iv_scaled"] = iv;
            row["gap"] = iv - asym;
            row["note"] = "";
            cells.insert(cells.end(), {nu, iv, asym, iv - asym, std::string()});
        } catch (const Error& err) {
            if (err.code() != ErrorCode::price_out_of_range) throw;
            const std::string note(to_string(err.code()));
            row["nu"] = nullptr;
            row["iv_scaled"] = nullptr;
            row["gap"] = nullptr;
            row["note"] = note;
            cells.insert(cells.end(), {std::string(), std::string(), asym, std::string(), note});
        }
        rows.push_back(row);
        out.table.rows.push_back(cells);
    }
    out.results["sweep"] = rows;
    return out;
}

TaskOutput run_explode(const ExperimentConfig& c) {
    const ModelSpec model = c.model();
    const PathGrid grid = c.grid();
    const double gamma = *c.gamma;
    const double t = *c.t;
    TaskOutput out;

    const GrowthWitness growth = growth_class(model.sigma);
    out.results["growth_class"] = to_string(growth.cls);
    std::optional<GrowthWitness> witness;
    if (growth.cls == GrowthClass::faster_than_linear)
        witness = convex_minorant(model.sigma);
    else if (c.sigma == "affine" && c.sigma_c1 > 0.0)
        witness = linear_minorant(model.sigma);
    if (witness) out.results["witness"] = {{"x3", witness->x3}, {"offset", witness->offset}, {"note", witness->note}};

    const MomentReduction red = moment_reduction(gamma, model.rho);
    out.results["moment_reduction"] = {{"c_quad", red.c_quad}, {"c_lin", red.c_lin}};
    try {
        const HolderSplit hs = holder_split(gamma, model.rho);
        out.results["holder_split"] = {{"p", hs.p}, {"eta", hs.eta}, {"l", hs.l}};
    } catch (const Error& err) {
        out.results["holder_split"] = {{"error", std::string(to_string(err.code()))}, {"message", err.what()}};
    }

    out.table.header = {"M", "status", "u_star", "log_lower_bound", "log_variance_bound", "mc_mean", "mc_std_error"};
    nlohmann::json rows = nlohmann::json::array();
    for (double M : c.M) {
        nlohmann::json row{{"M", M}};
        std::vector<Cell> cells{M};
        if (witness) {
            const ExplosionCertificate cert = explosion_certificate(model, *witness, gamma, t, M, grid);
            row["certificate"] = {{"status", to_string(cert.status)},
                                  {"u_star", cert.u_star},
                                  {"log_lower_bound", cert.log_lower_bound},
                                  {"log_variance_bound", cert.log_variance_bound},
                                  {"variance_v", cert.variance_v},
                                  {"steps", cert.steps},
                                  {"note", cert.note}};
            cells.insert(cells.end(), {to_string(cert.status), cert.u_star, cert.log_lower_bound,
                                       cert.log_variance_bound});
        } else {
            row["certificate"] = nullptr;
            cells.insert(cells.end(), {std::string("NO_WITNESS"), std::string(), std::string(), std::string()});
        }
        if (c.mc_count > 0) {
            const MCEstimate e = truncated_moment_mc(model, gamma, t, M, grid, c.mc_count, c.seed, sim_options(c));
            row["truncated_moment"] = estimate_json(e);
            cells.insert(cells.end(), {e.mean, e.std_error});
        } else {
            cells.insert(cells.end(), {std::string(), std::string()});
        }
        rows.push_back(row);
        out.table.rows.push_back(cells);
    }
    out.results["thresholds"] = rows;
    return out;
}

TaskOutput run_verify(const ExperimentConfig& c) {
    const ModelSpec model = c.model();
    const PathGrid grid = c.grid();
    TaskOutput out;
    out.table.header = {"check", "value", "reference", "std_error", "passed"};
    nlohmann::json checks = nlohmann::json::array();
    auto record = [&](const std::string& name, double value, double ref, double se, bool ok) {
        checks.push_back({{"check", name}, {"value", value}, {"reference", ref}, {"std_error", se}, {"passed", ok}});
        out.table.rows.push_back({name, value, ref, se, std::string(ok ? "true" : "false")});
        out.passed = out.passed && ok;
    };

    // E[S_T] = 1 for bounded-growth volatility
    if (linear_growth(model)) {
        for (double eps : c.eps) {
            const ScalingParams sp = c.scaling(eps);
            LogPriceSimulator sim(model, sp, grid, sim_options(c));
            const MCEstimate e = monte_carlo(sim, c.mc_count, c.seed, [&](std::uint64_t k, LogPriceSimulator::Workspace& ws) {
                sim.run(c.seed, k, nullptr, ws);
                return std::exp(ws.x.back());
            });
            record("martingale eps=" + std::to_string(eps), e.mean, 1.0, e.std_error,
                   std::abs(e.mean - 1.0) <= 4.0 * e.std_error + 1e-12);
        }
    }

    // sampled covariance at (T, T/2) and (T, T)
    const auto samples = sample_gaussian_paths(model.kernel, grid, c.mc_count, c.seed);
    const std::size_t n = grid.steps();
    for (std::size_t j : {n / 2, n}) {
        if (j == 0) continue;
        std::vector<double> prod(samples.size());
        for (std::size_t s = 0; s < samples.size(); ++s) prod[s] = samples[s].vol_path[n] * samples[s].vol_path[j];
        const MCEstimate e = summarize(prod, c.seed);
        const double ref = covariance(model.kernel, grid.node(n), grid.node(j));
        record("covariance t=" + std::to_string(grid.node(n)) + " s=" + std::to_string(grid.node(j)), e.mean, ref,
               e.std_error, std::abs(e.mean - ref) <= 4.0 * e.std_error);
    }

    // implied vol round trip
    const double k = c.x.value_or(0.1);
    const double nu = model.sigma.sigma0() * std::sqrt(model.T);
    const double price = bs_dimensionless_call(k, nu);
    const double back = implied_vol(k, price);
    record("implied vol round trip", back, nu, 0.0, std::abs(bs_dimensionless_call(k, back) - price) <= 1e-10);

    out.results["checks"] = checks;
    out.results["passed"] = out.passed;
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

TaskOutput run_task(const ExperimentConfig& config) {
    switch (config.task) {
        case Task::simulate: return run_simulate(config);
        case Task::rate: return run_rate(config);
        case Task::exit_rate: return run_exit_rate(config);
        case Task::callprice: return run_callprice(config);
        case Task::impliedvol: return run_impliedvol(config);
        case Task::explode: return run_explode(config);
        case Task::verify: return run_verify(config);
    }
    return {};
}

nlohmann::json make_report(const ExperimentConfig& config, const TaskOutput& output, double wall_seconds) {
    nlohmann::json r;
    r["schema"] = "gsv-report/1";
    r["task"] = to_string(config.task);
    r["config"] = config.to_json();
    r["results"] = output.results;
    r["versions"] = {{"gsv", GSV_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION}};
    r["timing"] = {{"wall_seconds", wall_seconds}};
    return r;
}

std::string to_csv(const Table& table) {
    std::string s;
    for (std::size_t i = 0; i < table.header.size(); ++i) s += (i ? "," : "") + table.header[i];
    s += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ",";
            if (const double* d = std::get_if<double>(&row[i]))
                s += format_double(*d);
            else
                s += std::get<std::string>(row[i]);
        }
        s += "\n";
    }
    return s;
}

void write_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::invalid_argument, "cannot write " + tmp);
        out << contents;
        if (!out.flush()) fail(ErrorCode::invalid_argument, "cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace gsv::cli
