#include "fluxres/config.hpp"

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace fluxres {

using nlohmann::json;

namespace {

void require_object(const json &j, const std::string &where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
}

void check_keys(const json &j, std::initializer_list<std::string_view> allowed,
                const std::string &where) {
    require_object(j, where);
    for (const auto &[key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw InvalidArgument("unknown key '" + key + "' in " + where);
    }
}

double number(const json &j, const std::string &key, const std::string &where) {
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidArgument("missing key '" + key + "' in " + where);
    if (!it->is_number()) throw InvalidArgument("'" + key + "' in " + where + " must be a number");
    return it->get<double>();
}

double number_or(const json &j, const std::string &key, double fallback, const std::string &where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

TimeInterval interval(const json &j, const std::string &what) {
    if (j.is_number()) return {0.0, j.get<double>()};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        TimeInterval t{j[0].get<double>(), j[1].get<double>()};
        if (!(t.end >= t.start)) throw InvalidArgument(what + " must satisfy start <= end");
        return t;
    }
    throw InvalidArgument(what + " must be a number or a [start, end] pair");
}

json interval_json(TimeInterval t) { return json::array({t.start, t.end}); }

ResonatorParams resonator_from_json(const json &j) {
    const std::string where = "resonator";
    check_keys(j, {"omega_r", "q_factor", "epsilon", "omega_p", "beta", "alpha", "lambda",
                   "capacitance", "damped"},
               where);
    ResonatorParams p;
    p.omega_r = number(j, "omega_r", where);
    p.q_factor = number(j, "q_factor", where);
    p.epsilon = number_or(j, "epsilon", 0.0, where);
    p.omega_p = number_or(j, "omega_p", 1.0, where);
    p.beta = number_or(j, "beta", 0.0, where);
    p.alpha = number_or(j, "alpha", 0.0, where);
    p.lambda_corr = number_or(j, "lambda", 0.0, where);
    p.capacitance = number_or(j, "capacitance", 1.0, where);
    if (j.contains("damped")) {
        if (!j["damped"].is_boolean()) throw InvalidArgument("'damped' in resonator must be a boolean");
        p.damped = j["damped"].get<bool>();
    }
    check_param_ranges(p);
    return p;
}

std::string type_of(const json &j, const std::string &where) {
    require_object(j, where);
    const auto it = j.find("type");
    if (it == j.end() || !it->is_string()) throw InvalidArgument(where + " needs a string 'type'");
    return it->get<std::string>();
}

DriveSpec drive_from_json(const json &j) {
    const std::string where = "drive";
    const std::string type = type_of(j, where);
    DriveSpec drive;
    if (type == "zero") {
        check_keys(j, {"type"}, where);
        drive = ZeroDrive{};
    } else if (type == "sinusoid") {
        check_keys(j, {"type", "xi0", "omega_d", "theta"}, where);
        drive = SinusoidDrive{number(j, "xi0", where), number(j, "omega_d", where),
                              number_or(j, "theta", 0.0, where)};
    } else if (type == "power_of_omega") {
        check_keys(j, {"type", "xi0", "exponent", "delta"}, where);
        if (j.contains("exponent") == j.contains("delta"))
            throw InvalidArgument("power_of_omega drive needs exactly one of 'exponent', 'delta'");
        const double exponent =
            j.contains("delta") ? 1.5 + number(j, "delta", where) : number(j, "exponent", where);
        drive = PowerOfOmegaDrive{number(j, "xi0", where), exponent};
    } else if (type == "tabulated") {
        check_keys(j, {"type", "samples"}, where);
        const auto &s = j.at("samples");
        if (!s.is_array()) throw InvalidArgument("tabulated drive 'samples' must be an array");
        TabulatedDrive tab;
        tab.times.resize(static_cast<Eigen::Index>(s.size()));
        tab.values.resize(tab.times.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto &row = s[i];
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
                throw InvalidArgument("tabulated drive samples must be [t, xi] number pairs");
            tab.times[static_cast<Eigen::Index>(i)] = row[0].get<double>();
            tab.values[static_cast<Eigen::Index>(i)] = row[1].get<double>();
        }
        drive = std::move(tab);
    } else {
        throw InvalidArgument("unknown drive type '" + type + "'");
    }
    check_drive(drive);
    return drive;
}

json drive_to_json(const DriveSpec &drive) {
    if (std::holds_alternative<ZeroDrive>(drive)) return {{"type", "zero"}};
    if (const auto *d = std::get_if<SinusoidDrive>(&drive))
        return {{"type", "sinusoid"}, {"xi0", d->xi0}, {"omega_d", d->omega_d}, {"theta", d->theta}};
    if (const auto *d = std::get_if<PowerOfOmegaDrive>(&drive))
        return {{"type", "power_of_omega"}, {"xi0", d->xi0}, {"exponent", d->exponent}};
    const auto &tab = std::get<TabulatedDrive>(drive);
    json samples = json::array();
    for (Eigen::Index i = 0; i < tab.times.size(); ++i)
        samples.push_back(json::array({tab.times[i], tab.values[i]}));
    return {{"type", "tabulated"}, {"samples", samples}};
}

InitialConditions init_from_json(const json &j) {
    const std::string where = "init";
    const std::string type = type_of(j, where);
    if (type == "energy") {
        check_keys(j, {"type", "e0"}, where);
        const double e0 = number(j, "e0", where);
        if (!(e0 >= 0)) throw InvalidArgument("init e0 must be >= 0");
        return EnergyInit{e0};
    }
    if (type == "state") {
        check_keys(j, {"type", "phi0", "phidot0"}, where);
        return StateInit{number(j, "phi0", where), number(j, "phidot0", where)};
    }
    throw InvalidArgument("unknown init type '" + type + "'");
}

json init_to_json(const InitialConditions &init) {
    if (const auto *e = std::get_if<EnergyInit>(&init)) return {{"type", "energy"}, {"e0", e->e0}};
    const auto &s = std::get<StateInit>(init);
    return {{"type", "state"}, {"phi0", s.phi0}, {"phidot0", s.phidot0}};
}

IntegratorConfig integrator_from_json(const json &j) {
    const std::string where = "integrator";
    check_keys(j, {"rel_tol", "abs_tol", "max_step", "sample_dt"}, where);
    IntegratorConfig c;
    c.rel_tol = number_or(j, "rel_tol", c.rel_tol, where);
    c.abs_tol = number_or(j, "abs_tol", c.abs_tol, where);
    c.sample_dt = number_or(j, "sample_dt", c.sample_dt, where);
    if (j.contains("max_step")) c.max_step = number(j, "max_step", where);
    check_integrator_config(c);
    return c;
}

json integrator_to_json(const IntegratorConfig &c) {
    json j{{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}, {"sample_dt", c.sample_dt}};
    if (c.max_step) j["max_step"] = *c.max_step;
    return j;
}

}  // namespace

Scenario scenario_from_json(const json &j) {
    check_keys(j, {"resonator", "drive", "init", "integrator", "horizon", "window"}, "scenario");
    Scenario s;
    if (!j.contains("resonator")) throw InvalidArgument("missing key 'resonator'");
    s.params = resonator_from_json(j["resonator"]);
    if (j.contains("drive")) s.drive = drive_from_json(j["drive"]);
    if (j.contains("init")) s.init = init_from_json(j["init"]);
    if (j.contains("integrator")) s.integrator = integrator_from_json(j["integrator"]);
    if (j.contains("horizon")) s.horizon = interval(j["horizon"], "horizon");
    if (j.contains("window")) s.window = interval(j["window"], "window");
    return s;
}

json to_json(const Scenario &s) {
    json j;
    j["resonator"] = {{"omega_r", s.params.omega_r},   {"q_factor", s.params.q_factor},
                      {"epsilon", s.params.epsilon},   {"omega_p", s.params.omega_p},
                      {"beta", s.params.beta},         {"alpha", s.params.alpha},
                      {"lambda", s.params.lambda_corr}, {"capacitance", s.params.capacitance},
                      {"damped", s.params.damped}};
    j["drive"] = drive_to_json(s.drive);
    j["init"] = init_to_json(s.init);
    j["integrator"] = integrator_to_json(s.integrator);
    j["horizon"] = interval_json(s.horizon);
    if (s.window) j["window"] = interval_json(*s.window);
    return j;
}

RunConfig run_config_from_json(const json &j) {
    check_keys(j, {"name", "resonator", "drive", "init", "integrator", "horizon", "window", "sweep",
                   "optimize", "output"},
               "config");
    RunConfig c;
    json scenario = json::object();
    for (const char *key : {"resonator", "drive", "init", "integrator", "horizon", "window"})
        if (j.contains(key)) scenario[key] = j[key];
    c.scenario = scenario_from_json(scenario);

    if (j.contains("name")) {
        if (!j["name"].is_string()) throw InvalidArgument("'name' must be a string");
        c.name = j["name"].get<std::string>();
    }
    if (j.contains("sweep")) {
        const auto &s = j["sweep"];
        check_keys(s, {"axis", "values", "numerical"}, "sweep");
        SweepSettings sw;
        if (!s.contains("axis") || !s["axis"].is_string())
            throw InvalidArgument("sweep needs a string 'axis'");
        sw.axis = s["axis"].get<std::string>();
        if (!s.contains("values") || !s["values"].is_array())
            throw InvalidArgument("sweep needs a 'values' array");
        for (const auto &v : s["values"]) {
            if (!v.is_number()) throw InvalidArgument("sweep values must be numbers");
            sw.values.push_back(v.get<double>());
        }
        if (s.contains("numerical")) {
            if (!s["numerical"].is_boolean()) throw InvalidArgument("sweep 'numerical' must be a boolean");
            sw.numerical = s["numerical"].get<bool>();
        }
        c.sweep = std::move(sw);
    }
    if (j.contains("optimize")) {
        const auto &o = j["optimize"];
        check_keys(o, {"search", "tol"}, "optimize");
        if (o.contains("search")) {
            const auto range = interval(o["search"], "optimize search");
            c.optimize.search = {range.start, range.end};
        }
        c.optimize.tol = number_or(o, "tol", c.optimize.tol, "optimize");
    }
    if (j.contains("output")) {
        const auto &o = j["output"];
        check_keys(o, {"dir"}, "output");
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) throw InvalidArgument("output 'dir' must be a string");
            c.output_dir = o["dir"].get<std::string>();
        }
    }
    return c;
}

json to_json(const RunConfig &c) {
    json j = to_json(c.scenario);
    j["name"] = c.name;
    if (c.sweep)
        j["sweep"] = {{"axis", c.sweep->axis}, {"values", c.sweep->values},
                      {"numerical", c.sweep->numerical}};
    j["optimize"] = {{"search", json::array({c.optimize.search.lo, c.optimize.search.hi})},
                     {"tol", c.optimize.tol}};
    j["output"] = {{"dir", c.output_dir}};
    return j;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw InvalidArgument("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (j.is_object() && !j.contains("name")) j["name"] = path.stem().string();
    return run_config_from_json(j);
}

std::filesystem::path preset_directory() {
    if (const char *env = std::getenv("FLUXRES_PRESET_DIR"); env != nullptr && *env != '\0')
        return env;
#ifdef FLUXRES_PRESET_DIR
    return FLUXRES_PRESET_DIR;
#else
    return "presets";
#endif
}

std::filesystem::path preset_path(std::string_view name,
                                  const std::optional<std::filesystem::path> &dir) {
    for (char ch : name) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
            throw InvalidArgument("invalid preset name '" + std::string(name) + "'");
    }
    auto path = dir.value_or(preset_directory()) / (std::string(name) + ".json");
    if (!std::filesystem::exists(path))
        throw InvalidArgument("unknown preset '" + std::string(name) + "' (looked for " +
                              path.string() + ")");
    return path;
}

std::string config_hash(const json &j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

json provenance(const json &j) { return {{"config", j}, {"config_hash", config_hash(j)}}; }

}  // namespace fluxres
