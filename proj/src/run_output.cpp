#include "banksim/run_output.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "banksim/errors.hpp"

namespace banksim {

std::string format17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::ofstream out(dir + "/" + name);
    if (!out)
        throw io_error("cannot write " + dir + "/" + name);
    return out;
}

void finish(std::ofstream& out, const std::string& dir, const std::string& name) {
    out.flush();
    if (!out)
        throw io_error("write failed for " + dir + "/" + name);
}

} // namespace

std::string write_paths_csv(const std::string& dir, const std::vector<PathRecord>& paths) {
    const std::string name = "paths.csv";
    auto out = open_out(dir, name);
    out << "path,n_defaults,mean_hit,terminal_live,terminal_mean\n";
    for (const auto& p : paths) {
        out << p.path << ',' << p.n_defaults << ',' << (p.mean_hit ? 1 : 0) << ','
            << p.terminal_live << ',';
        if (p.terminal_mean) out << format17(*p.terminal_mean);
        out << '\n';
    }
    finish(out, dir, name);
    return name;
}

std::string write_defaults_csv(const std::string& dir, const std::vector<PathRecord>& paths) {
    const std::string name = "defaults.csv";
    auto out = open_out(dir, name);
    out << "path,bank,time\n";
    for (const auto& p : paths)
        for (const auto& d : p.defaults)
            out << p.path << ',' << d.bank << ',' << format17(d.time) << '\n';
    finish(out, dir, name);
    return name;
}

std::string write_trajectories_csv(
    const std::string& dir,
    const std::vector<std::pair<std::size_t, std::vector<RecordedPoint>>>& recorded) {
    const std::string name = "trajectories.csv";
    auto out = open_out(dir, name);
    out << "path,t,bank,value\n";
    for (const auto& [path, points] : recorded)
        for (const auto& point : points)
            for (std::size_t i = 0; i < point.ids.size(); ++i)
                out << path << ',' << format17(point.t) << ',' << point.ids[i] << ','
                    << format17(point.reserves[i]) << '\n';
    finish(out, dir, name);
    return name;
}

std::string write_loss_distribution_csv(const std::string& dir, const LossDistribution& dist) {
    const std::string name = "loss_distribution.csv";
    auto out = open_out(dir, name);
    out << "k,count,probability\n";
    for (std::size_t k = 0; k < dist.counts.size(); ++k)
        out << k << ',' << dist.counts[k] << ',' << format17(dist.probability(k)) << '\n';
    finish(out, dir, name);
    return name;
}

std::string write_risk_estimates_csv(const std::string& dir,
                                     const std::vector<RiskEstimate>& estimates) {
    const std::string name = "risk_estimates.csv";
    auto out = open_out(dir, name);
    out << "definition,threshold,probability,std_error,n_paths\n";
    for (const auto& est : estimates) {
        const bool majority = est.definition == SystemicDefinition::majority_defaults;
        out << (majority ? "majority_defaults" : "mean_barrier") << ',';
        if (majority) out << est.threshold;
        out << ',' << format17(est.probability) << ',' << format17(est.std_error) << ','
            << est.n_paths << '\n';
    }
    finish(out, dir, name);
    return name;
}

std::string write_riccati_csv(const std::string& dir, const RiccatiSolution& sol) {
    const std::string name = "riccati_coefficients.csv";
    auto out = open_out(dir, name);
    out << "t,a,b,c\n";
    for (std::size_t i = 0; i < sol.a.size(); ++i) {
        const double t = sol.t_start + static_cast<double>(i) * sol.dt;
        out << format17(t) << ',' << format17(sol.a[i]) << ',' << format17(sol.b[i]) << ','
            << format17(sol.c[i]) << '\n';
    }
    finish(out, dir, name);
    return name;
}

std::string write_control_law_csv(const std::string& dir, const ControlLaw& law) {
    const std::string name = "control_law.csv";
    auto out = open_out(dir, name);
    out << "t,alpha,gamma,xbar,b,c\n";
    for (std::size_t k = 0; k < law.alpha.size(); ++k)
        out << format17(law.grid.time(k)) << ',' << format17(law.alpha[k]) << ','
            << format17(law.gamma[k]) << ',' << format17(law.xbar[k]) << ','
            << format17(law.b[k]) << ',' << format17(law.c[k]) << '\n';
    finish(out, dir, name);
    return name;
}

std::string write_meanfield_csv(const std::string& dir, const MeanFieldPath& path,
                                bool has_mean_column) {
    const std::string name = "meanfield.csv";
    auto out = open_out(dir, name);
    out << "t,x,xbar\n";
    for (std::size_t i = 0; i < path.t.size(); ++i) {
        out << format17(path.t[i]) << ',' << format17(path.x[i]) << ',';
        if (has_mean_column) out << format17(path.xbar[i]);
        out << '\n';
    }
    finish(out, dir, name);
    return name;
}

std::string write_series_csv(const std::string& dir, const std::vector<SeriesPoint>& series) {
    const std::string name = "series.csv";
    auto out = open_out(dir, name);
    out << "quarter,tau1,probability,std_error,chosen_n,fallback\n";
    for (const auto& p : series) {
        out << p.quarter << ',' << format17(p.tau1) << ',' << format17(p.probability) << ','
            << format17(p.std_error) << ',';
        if (p.chosen_n) out << *p.chosen_n;
        out << ',' << (p.fallback ? 1 : 0) << '\n';
    }
    finish(out, dir, name);
    return name;
}

std::string write_quarters_csv(const std::string& dir,
                               const std::vector<GovernanceRecord>& quarters) {
    const std::string name = "quarters.csv";
    auto out = open_out(dir, name);
    out << "quarter,tau1,order,n,feasible,probability,std_error,chosen,fallback\n";
    for (const auto& q : quarters)
        for (std::size_t i = 0; i < q.evaluations.size(); ++i) {
            const auto& e = q.evaluations[i];
            out << q.quarter << ',' << format17(q.tau1) << ',' << i << ',' << e.n << ','
                << (e.feasible ? 1 : 0) << ',' << format17(e.estimate.probability) << ','
                << format17(e.estimate.std_error) << ',' << (e.n == q.chosen_n ? 1 : 0) << ','
                << (q.fallback ? 1 : 0) << '\n';
        }
    finish(out, dir, name);
    return name;
}

std::string write_candidates_csv(const std::string& dir,
                                 const std::vector<GovernanceRecord>& quarters,
                                 const GovernanceConfig& cfg) {
    const std::string name = "candidates.csv";
    auto out = open_out(dir, name);
    out << "quarter,n,anchor,slope,plateau,feasible,chosen\n";
    for (const auto& q : quarters) {
        for (const auto& e : q.evaluations) {
            const double slope = static_cast<double>(e.n) / cfg.menu_steps;
            out << q.quarter << ',' << e.n << ',' << format17(q.xi_anchor) << ','
                << format17(slope) << ',' << format17(q.xi_anchor + slope * cfg.dtau) << ','
                << (e.feasible ? 1 : 0) << ',' << (e.n == q.chosen_n ? 1 : 0) << '\n';
        }
    }
    finish(out, dir, name);
    return name;
}

std::string write_realized_csv(const std::string& dir,
                               const std::vector<RecordedPoint>& recorded) {
    const std::string name = "realized.csv";
    auto out = open_out(dir, name);
    out << "t,bank,value\n";
    for (const auto& point : recorded)
        for (std::size_t i = 0; i < point.ids.size(); ++i)
            out << format17(point.t) << ',' << point.ids[i] << ','
                << format17(point.reserves[i]) << '\n';
    finish(out, dir, name);
    return name;
}

std::string write_experiment_summary(const std::string& dir, const ExperimentResult& result) {
    const std::string name = "summary.json";
    nlohmann::json j;
    j["mode"] = result.governed ? "governed" : "reference";
    auto& decisions = j["decisions"];
    decisions = nlohmann::json::array();
    for (const auto& p : result.series) {
        nlohmann::json d;
        d["quarter"] = p.quarter;
        d["tau1"] = p.tau1;
        d["probability"] = p.probability;
        d["std_error"] = p.std_error;
        if (p.chosen_n) d["chosen_n"] = *p.chosen_n;
        d["fallback"] = p.fallback;
        decisions.push_back(std::move(d));
    }
    for (const auto& q : result.quarters) {
        nlohmann::json& d = decisions[q.quarter];
        d["anchor"] = q.xi_anchor;
        d["n_evaluations"] = q.evaluations.size();
    }
    j["final_live"] = result.final_state.active_count();
    if (result.final_state.active_count() > 0)
        j["final_mean"] = empirical_mean(result.final_state);
    auto out = open_out(dir, name);
    out << j.dump(2) << '\n';
    finish(out, dir, name);
    return name;
}

std::string write_manifest(const std::string& dir, const std::string& command,
                           const RunConfig& cfg, const std::vector<std::string>& outputs,
                           double wall_seconds) {
    const std::string name = "manifest.json";
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config_entries(cfg);
    j["config_hash"] = config_hash(cfg);
    j["seed"] = cfg.seed;
    j["quick"] = cfg.quick;
    j["threads"] = cfg.threads;
    j["outputs"] = outputs;
    j["versions"] = {{"banksim", "0.1.0"}, {"compiler", __VERSION__}};
    j["wall_time_seconds"] = wall_seconds;
    auto out = open_out(dir, name);
    out << j.dump(2) << '\n';
    finish(out, dir, name);
    return name;
}

} // namespace banksim
