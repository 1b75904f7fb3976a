#include "banksim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "banksim/errors.hpp"

namespace banksim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

long long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(value, &used);
        if (used != value.size())
            throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

bool parse_flag(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw config_error("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<VolSchedule::Point> parse_schedule(const std::string& key, const std::string& value) {
    std::vector<VolSchedule::Point> points;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw config_error("config key '" + key + "': expected time:sigma pairs, got '" +
                               item + "'");
        points.push_back(VolSchedule::Point{
            parse_number(key, trim(item.substr(0, colon))),
            parse_number(key, trim(item.substr(colon + 1)))});
    }
    if (points.empty())
        throw config_error("config key '" + key + "': empty schedule");
    return points;
}

void parse_target(RunConfig& cfg, const std::string& value) {
    std::stringstream ss(value);
    std::string kind;
    ss >> kind;
    std::vector<double> args;
    std::string tok;
    while (ss >> tok) args.push_back(parse_number("xi", tok));
    if (kind == "constant" && args.size() == 1) {
        cfg.xi_kind = kind;
        cfg.xi_value = args[0];
    } else if (kind == "linear" && args.size() == 2) {
        cfg.xi_kind = kind;
        cfg.xi_slope = args[0];
        cfg.xi_value = args[1];
    } else if (kind == "sinusoid" && args.size() == 4) {
        cfg.xi_kind = kind;
        cfg.xi_amplitude = args[0];
        cfg.xi_omega = args[1];
        cfg.xi_phase = args[2];
        cfg.xi_offset = args[3];
    } else {
        throw config_error("config key 'xi': expected 'constant V', 'linear SLOPE START' or "
                           "'sinusoid AMP OMEGA PHASE OFFSET', got '" + value + "'");
    }
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "family") {
        if (value != "independent" && value != "coupled" && value != "supported")
            throw config_error("config key 'family': expected independent|coupled|supported, got '" +
                               value + "'");
        cfg.family = value;
    } else if (key == "n_banks") {
        const long long n = parse_integer(key, value);
        if (n < 1) throw config_error("config key 'n_banks': must be >= 1");
        cfg.n_banks = static_cast<std::size_t>(n);
    } else if (key == "alpha") cfg.alpha = parse_number(key, value);
    else if (key == "gamma") cfg.gamma = parse_number(key, value);
    else if (key == "sigma") cfg.vol = parse_schedule(key, value);
    else if (key == "default_level") cfg.default_level = parse_number(key, value);
    else if (key == "xi") parse_target(cfg, value);
    else if (key == "epsilon") cfg.epsilon = parse_number(key, value);
    else if (key == "t0") cfg.t0 = parse_number(key, value);
    else if (key == "t1") cfg.t1 = parse_number(key, value);
    else if (key == "dt") cfg.dt = parse_number(key, value);
    else if (key == "dt_ode") cfg.dt_ode = parse_number(key, value);
    else if (key == "n_paths") {
        const long long n = parse_integer(key, value);
        if (n < 1) throw config_error("config key 'n_paths': must be >= 1");
        cfg.n_paths = static_cast<std::size_t>(n);
    } else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    else if (key == "threads") {
        const long long n = parse_integer(key, value);
        if (n < 0) throw config_error("config key 'threads': must be >= 0");
        cfg.threads = static_cast<unsigned>(n);
    } else if (key == "t2") cfg.t2 = parse_number(key, value);
    else if (key == "dtau") cfg.dtau = parse_number(key, value);
    else if (key == "lookahead") cfg.lookahead = parse_number(key, value);
    else if (key == "s1") cfg.s1 = parse_number(key, value);
    else if (key == "s2") cfg.s2 = parse_number(key, value);
    else if (key == "lambda") cfg.lambda = parse_number(key, value);
    else if (key == "xi0") cfg.xi0 = parse_number(key, value);
    else if (key == "menu_steps") {
        const long long n = parse_integer(key, value);
        if (n < 1) throw config_error("config key 'menu_steps': must be >= 1");
        cfg.menu_steps = static_cast<int>(n);
    } else if (key == "baseline_alpha") cfg.baseline_alpha = parse_number(key, value);
    else if (key == "baseline_gamma") cfg.baseline_gamma = parse_number(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "quick") cfg.quick = parse_flag(key, value);
    else if (key == "ungoverned") cfg.ungoverned = parse_flag(key, value);
    else if (key == "record_points") {
        const long long n = parse_integer(key, value);
        if (n < 2) throw config_error("config key 'record_points': must be >= 2");
        cfg.record_points = static_cast<std::size_t>(n);
    } else if (key == "record_paths") {
        const long long n = parse_integer(key, value);
        if (n < 0) throw config_error("config key 'record_paths': must be >= 0");
        cfg.record_paths = static_cast<std::size_t>(n);
    } else {
        throw config_error("unknown config key '" + key + "'");
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value', got '" + line + "'");
        try {
            set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const config_error& err) {
            throw config_error("config line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_override(RunConfig& cfg, const std::string& key_equals_value) {
    const auto eq = key_equals_value.find('=');
    if (eq == std::string::npos)
        throw config_error("override must look like key=value, got '" + key_equals_value + "'");
    set_key(cfg, trim(key_equals_value.substr(0, eq)), trim(key_equals_value.substr(eq + 1)));
}

void validate_run_config(const RunConfig& cfg) {
    if (cfg.family != "independent" && cfg.family != "coupled" && cfg.family != "supported")
        throw config_error("config: unknown family '" + cfg.family + "'");
    if (!(cfg.dt > 0.0)) throw config_error("config: dt must be positive");
    if (!(cfg.dt_ode > 0.0)) throw config_error("config: dt_ode must be positive");
    if (!(cfg.t1 > cfg.t0)) throw config_error("config: need t1 > t0");
    if (!(cfg.epsilon >= 0.0)) throw config_error("config: epsilon must be >= 0");
    if (!(0.0 < cfg.s1 && cfg.s1 < cfg.s2 && cfg.s2 < 1.0))
        throw config_error("config: need 0 < s1 < s2 < 1");
    if (!(cfg.lambda > 0.0)) throw config_error("config: lambda must be positive");
    make_schedule(cfg.vol);  // ordering + positivity
    if (cfg.family == "coupled" && cfg.alpha < 0.0)
        throw config_error("config: alpha must be >= 0");
    if (cfg.family == "supported" && cfg.gamma > 0.0)
        throw config_error("config: gamma must be <= 0");
}

void apply_quick(RunConfig& cfg) {
    cfg.quick = true;
    cfg.n_paths = 2000;
    cfg.dt = 1e-3;
}

TargetTrajectory target_from_config(const RunConfig& cfg, double t0, double t1) {
    if (cfg.xi_kind == "constant")
        return TargetTrajectory::constant(t0, t1, cfg.xi_value);
    if (cfg.xi_kind == "linear")
        return TargetTrajectory::linear(t0, t1, cfg.xi_slope, cfg.xi_value);
    return TargetTrajectory::sinusoid(t0, t1, cfg.xi_amplitude, cfg.xi_omega,
                                      cfg.xi_phase, cfg.xi_offset);
}

VolSchedule schedule_from_config(const RunConfig& cfg) {
    return make_schedule(cfg.vol);
}

ModelSpec model_from_config(const RunConfig& cfg) {
    validate_run_config(cfg);
    auto vol = schedule_from_config(cfg);
    if (cfg.family == "independent")
        return ModelSpec::independent(cfg.n_banks, std::move(vol), cfg.default_level);
    if (cfg.family == "coupled")
        return ModelSpec::coupled(cfg.n_banks, cfg.alpha, std::move(vol), cfg.default_level);
    auto targets = make_perturbed(target_from_config(cfg, cfg.t0, cfg.t1), cfg.epsilon);
    const double alpha = cfg.alpha;
    const double gamma = cfg.gamma;
    return ModelSpec::supported(
        cfg.n_banks, [alpha](double) { return alpha; }, [gamma](double) { return gamma; },
        std::move(vol), std::move(targets), cfg.default_level);
}

GovernanceConfig governance_from_config(const RunConfig& cfg) {
    validate_run_config(cfg);
    GovernanceConfig g;
    g.n_banks = cfg.n_banks;
    g.xi0 = cfg.xi0;
    g.epsilon = cfg.epsilon;
    g.lambda = cfg.lambda;
    g.s1 = cfg.s1;
    g.s2 = cfg.s2;
    g.default_level = cfg.default_level;
    g.t_start = cfg.t0;
    g.t_end = cfg.t2;
    g.dtau = cfg.dtau;
    g.lookahead = cfg.lookahead;
    g.menu_steps = cfg.menu_steps;
    g.dt_sim = cfg.dt;
    g.dt_ode = cfg.dt_ode;
    g.n_paths = cfg.n_paths;
    g.seed = cfg.seed;
    g.threads = cfg.threads;
    g.vol = schedule_from_config(cfg);
    g.baseline_alpha = cfg.baseline_alpha;
    g.baseline_gamma = cfg.baseline_gamma;
    g.record_points = cfg.record_points;
    validate_config(g);
    return g;
}

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

std::map<std::string, std::string> config_entries(const RunConfig& cfg) {
    std::map<std::string, std::string> m;
    m["family"] = cfg.family;
    m["n_banks"] = std::to_string(cfg.n_banks);
    m["alpha"] = fmt17(cfg.alpha);
    m["gamma"] = fmt17(cfg.gamma);
    {
        std::string s;
        for (const auto& p : cfg.vol) {
            if (!s.empty()) s += ",";
            s += fmt17(p.time) + ":" + fmt17(p.sigma);
        }
        m["sigma"] = s;
    }
    m["default_level"] = fmt17(cfg.default_level);
    if (cfg.xi_kind == "constant")
        m["xi"] = "constant " + fmt17(cfg.xi_value);
    else if (cfg.xi_kind == "linear")
        m["xi"] = "linear " + fmt17(cfg.xi_slope) + " " + fmt17(cfg.xi_value);
    else
        m["xi"] = "sinusoid " + fmt17(cfg.xi_amplitude) + " " + fmt17(cfg.xi_omega) + " " +
                  fmt17(cfg.xi_phase) + " " + fmt17(cfg.xi_offset);
    m["epsilon"] = fmt17(cfg.epsilon);
    m["t0"] = fmt17(cfg.t0);
    m["t1"] = fmt17(cfg.t1);
    m["dt"] = fmt17(cfg.dt);
    m["dt_ode"] = fmt17(cfg.dt_ode);
    m["n_paths"] = std::to_string(cfg.n_paths);
    m["seed"] = std::to_string(cfg.seed);
    // threads and out_dir are execution details, not part of the experiment:
    // the same hash must come back whatever machine reran the config.
    m["t2"] = fmt17(cfg.t2);
    m["dtau"] = fmt17(cfg.dtau);
    m["lookahead"] = fmt17(cfg.lookahead);
    m["s1"] = fmt17(cfg.s1);
    m["s2"] = fmt17(cfg.s2);
    m["lambda"] = fmt17(cfg.lambda);
    m["xi0"] = fmt17(cfg.xi0);
    m["menu_steps"] = std::to_string(cfg.menu_steps);
    m["baseline_alpha"] = fmt17(cfg.baseline_alpha);
    m["baseline_gamma"] = fmt17(cfg.baseline_gamma);
    m["quick"] = cfg.quick ? "true" : "false";
    m["ungoverned"] = cfg.ungoverned ? "true" : "false";
    m["record_points"] = std::to_string(cfg.record_points);
    m["record_paths"] = std::to_string(cfg.record_paths);
    return m;
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    const auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001B3ull;
        }
        h ^= 0x1F;
        h *= 0x100000001B3ull;
    };
    for (const auto& [key, value] : config_entries(cfg)) {
        mix(key);
        mix(value);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace banksim
