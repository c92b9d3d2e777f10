#include "flexwing/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "flexwing/numfmt.hpp"

namespace flexwing {

ConfigError::ConfigError(int line, const std::string& msg)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

RunConfig default_config() {
    RunConfig c;
    // rho, I_w, EI, GJ, alpha_w, alpha_phi are placeholders (section data not
    // published); chosen so the reference eps values certify with aero on.
    c.wing = {16.2, 100.0, 50.0, 3.0e6, 4.0e6, 0.02, 0.02, 2.0, 1000.0, 500.0};
    c.aero.alpha_w = 9.0;
    c.aero.alpha_phi = 6.0;
    c.aero.beta_w = c.aero.gamma_w = c.aero.alpha_w / 3.0;
    c.aero.beta_phi = c.aero.gamma_phi = -c.aero.alpha_phi / 2.0;
    c.gains = {5000.0, 2500.0, 3.189e-4, 1.195e-3};
    // Small enough that stiff Kelvin-Voigt modes are not left ringing by the
    // trapezoidal rule.
    c.sim.dt = 2e-4;
    c.sim.t_end = 10.0;
    c.sim.record_every = 10;
    c.w_bar = 0.1;
    c.phi_bar = 0.002;
    return c;
}

namespace {

enum class Kind { Number, Integer, Boolean, Text, Scheme, List };

struct Key {
    std::string name;
    std::string unit;
    Kind kind;
    std::string help;
    std::function<double*(RunConfig&)> number;  // Number keys only
};

#define NUM(field) [](RunConfig& c) -> double* { return &c.field; }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        {"wing.l", "m", Kind::Number, "span length", NUM(wing.l)},
        {"wing.rho", "kg/m", Kind::Number, "mass per unit span", NUM(wing.rho)},
        {"wing.I_w", "kg*m", Kind::Number, "torsional inertia per unit span", NUM(wing.I_w)},
        {"wing.EI", "N*m^2", Kind::Number, "bending stiffness", NUM(wing.EI)},
        {"wing.GJ", "N*m^2", Kind::Number, "torsional stiffness", NUM(wing.GJ)},
        {"wing.eta_w", "s", Kind::Number, "bending Kelvin-Voigt coefficient", NUM(wing.eta_w)},
        {"wing.eta_phi", "s", Kind::Number, "torsional Kelvin-Voigt coefficient", NUM(wing.eta_phi)},
        {"wing.x_c", "m", Kind::Number, "centre of gravity to elastic axis offset", NUM(wing.x_c)},
        {"wing.m_s", "kg", Kind::Number, "store mass", NUM(wing.m_s)},
        {"wing.J_s", "kg*m^2", Kind::Number, "store inertia", NUM(wing.J_s)},
        {"aero.alpha_w", "N/m", Kind::Number, "lift per unit twist", NUM(aero.alpha_w)},
        {"aero.beta_w", "N*s/m", Kind::Number, "lift per unit twist rate", NUM(aero.beta_w)},
        {"aero.gamma_w", "N*s/m^2", Kind::Number, "lift per unit plunge rate", NUM(aero.gamma_w)},
        {"aero.alpha_phi", "N", Kind::Number, "moment per unit twist", NUM(aero.alpha_phi)},
        {"aero.beta_phi", "N*s", Kind::Number, "moment per unit twist rate", NUM(aero.beta_phi)},
        {"aero.gamma_phi", "N*s/m", Kind::Number, "moment per unit plunge rate", NUM(aero.gamma_phi)},
        {"gains.k1", "N*s/m", Kind::Number, "tip force gain", NUM(gains.k1)},
        {"gains.k2", "N*m*s", Kind::Number, "tip moment gain", NUM(gains.k2)},
        {"gains.eps1", "1/s", Kind::Number, "proportional weight of the tip force", NUM(gains.eps1)},
        {"gains.eps2", "1/s", Kind::Number, "proportional weight of the tip moment", NUM(gains.eps2)},
        {"sim.dt", "s", Kind::Number, "time step", NUM(sim.dt)},
        {"sim.t_end", "s", Kind::Number, "horizon", NUM(sim.t_end)},
        {"sim.scheme", "", Kind::Scheme, "newmark or generalized-alpha", nullptr},
        {"sim.rho_inf", "", Kind::Number, "generalized-alpha spectral radius at infinity", NUM(sim.rho_inf)},
        {"sim.control", "", Kind::Boolean, "close the tip feedback loop", nullptr},
        {"sim.record_every", "", Kind::Integer, "keep every k-th step", nullptr},
        {"mesh.n_elem", "", Kind::Integer, "number of finite elements", nullptr},
        {"init.w_bar", "m", Kind::Number, "initial tip deflection", NUM(w_bar)},
        {"init.phi_bar", "rad", Kind::Number, "initial tip twist", NUM(phi_bar)},
        {"output.dir", "", Kind::Text, "output directory", nullptr},
        {"output.state", "", Kind::Boolean, "also write state.csv", nullptr},
        {"certify.search_eps", "", Kind::Boolean, "search eps1, eps2 instead of using the gains", nullptr},
        {"sweep.key", "", Kind::Text, "numeric key varied by sweep", nullptr},
        {"sweep.values", "", Kind::List, "comma-separated values of sweep.key", nullptr},
    };
    return table;
}

#undef NUM

const Key* find_key(std::string_view name) {
    for (const auto& k : keys()) {
        if (k.name == name) return &k;
    }
    return nullptr;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_number(int line, const std::string& key, const std::string& tok) {
    const auto v = parse_double(tok);
    if (!v || !std::isfinite(*v)) throw ConfigError(line, key + ": '" + tok + "' is not a finite number");
    return *v;
}

bool to_bool(int line, const std::string& key, const std::string& tok) {
    if (tok == "true") return true;
    if (tok == "false") return false;
    throw ConfigError(line, key + ": expected true or false, got '" + tok + "'");
}

// Splits "value unit" for scalar numeric keys; the unit is optional but must
// match the canonical one when present.
std::string strip_unit(int line, const Key& k, const std::string& raw) {
    const auto sp = raw.find_first_of(" \t");
    if (sp == std::string::npos) return raw;
    const std::string value = raw.substr(0, sp);
    const std::string unit = trim(std::string_view(raw).substr(sp));
    if (k.unit.empty()) throw ConfigError(line, k.name + " takes no unit, got '" + unit + "'");
    if (unit != k.unit) {
        throw ConfigError(line, k.name + ": unit '" + unit + "' does not match '" + k.unit + "'");
    }
    return value;
}

void assign(RunConfig& c, int line, const Key& k, const std::string& raw) {
    switch (k.kind) {
        case Kind::Number:
            *k.number(c) = to_number(line, k.name, strip_unit(line, k, raw));
            return;
        case Kind::Integer: {
            const std::string tok = strip_unit(line, k, raw);
            int v = 0;
            std::istringstream is(tok);
            if (!(is >> v) || !is.eof()) throw ConfigError(line, k.name + ": '" + tok + "' is not an integer");
            if (k.name == "sim.record_every") c.sim.record_every = v;
            else c.n_elem = v;
            return;
        }
        case Kind::Boolean: {
            const bool v = to_bool(line, k.name, raw);
            if (k.name == "sim.control") c.sim.control_enabled = v;
            else if (k.name == "output.state") c.save_state = v;
            else c.search_eps = v;
            return;
        }
        case Kind::Text:
            if (raw.empty()) throw ConfigError(line, k.name + ": empty value");
            if (k.name == "output.dir") c.out_dir = raw;
            else c.sweep.key = raw;
            return;
        case Kind::Scheme:
            if (raw == "newmark") c.sim.scheme = sim::Scheme::NewmarkAverageAcceleration;
            else if (raw == "generalized-alpha") c.sim.scheme = sim::Scheme::GeneralizedAlpha;
            else throw ConfigError(line, "sim.scheme: expected newmark or generalized-alpha, got '" + raw + "'");
            return;
        case Kind::List: {
            c.sweep.values.clear();
            std::string item;
            std::istringstream is(raw);
            while (std::getline(is, item, ',')) {
                c.sweep.values.push_back(to_number(line, k.name, trim(item)));
            }
            if (c.sweep.values.empty()) throw ConfigError(line, "sweep.values: empty list");
            return;
        }
    }
}

std::string render(const RunConfig& c, const Key& k) {
    RunConfig& m = const_cast<RunConfig&>(c);
    switch (k.kind) {
        case Kind::Number: {
            std::string s = format_shortest(*k.number(m));
            if (!k.unit.empty()) s += " " + k.unit;
            return s;
        }
        case Kind::Integer:
            return std::to_string(k.name == "sim.record_every" ? c.sim.record_every : c.n_elem);
        case Kind::Boolean: {
            const bool v = k.name == "sim.control" ? c.sim.control_enabled
                           : k.name == "output.state" ? c.save_state
                                                      : c.search_eps;
            return v ? "true" : "false";
        }
        case Kind::Text:
            return k.name == "output.dir" ? c.out_dir : c.sweep.key;
        case Kind::Scheme:
            return c.sim.scheme == sim::Scheme::GeneralizedAlpha ? "generalized-alpha" : "newmark";
        case Kind::List: {
            std::string s;
            for (std::size_t i = 0; i < c.sweep.values.size(); ++i) {
                if (i) s += ", ";
                s += format_shortest(c.sweep.values[i]);
            }
            return s;
        }
    }
    return {};
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig c = default_config();
    std::map<std::string, int> seen;
    std::istringstream in{std::string(text)};
    std::string raw_line;
    int line = 0;
    while (std::getline(in, raw_line)) {
        ++line;
        const auto hash = raw_line.find('#');
        const std::string body = trim(std::string_view(raw_line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected 'section.key = value'");
        const std::string name = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        const Key* k = find_key(name);
        if (!k) throw ConfigError(line, "unknown key '" + name + "'");
        if (auto it = seen.find(name); it != seen.end()) {
            throw ConfigError(line, "key '" + name + "' already set on line " + std::to_string(it->second));
        }
        if (value.empty()) throw ConfigError(line, name + ": missing value");
        seen.emplace(name, line);
        assign(c, line, *k, value);
    }
    if (!seen.count("aero.beta_w")) c.aero.beta_w = c.aero.alpha_w / 3.0;
    if (!seen.count("aero.gamma_w")) c.aero.gamma_w = c.aero.alpha_w / 3.0;
    if (!seen.count("aero.beta_phi")) c.aero.beta_phi = -c.aero.alpha_phi / 2.0;
    if (!seen.count("aero.gamma_phi")) c.aero.gamma_phi = -c.aero.alpha_phi / 2.0;
    validate_config(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
    auto fail = [](const std::string& section, const ValidationReport& r) {
        std::string msg;
        for (const auto& v : r.violations) {
            if (!msg.empty()) msg += "; ";
            msg += section + "." + v;
        }
        throw ConfigError(0, msg);
    };
    if (auto r = validate(c.wing); !r.ok()) fail("wing", r);
    if (auto r = validate(c.aero); !r.ok()) fail("aero", r);
    if (auto r = validate(c.gains); !r.ok()) fail("gains", r);
    try {
        sim::validate(c.sim);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    if (c.n_elem < 2) throw ConfigError(0, "mesh.n_elem must be >= 2");
    if (!std::isfinite(c.w_bar)) throw ConfigError(0, "init.w_bar must be finite");
    if (!std::isfinite(c.phi_bar)) throw ConfigError(0, "init.phi_bar must be finite");
    if (!c.sweep.key.empty()) {
        const Key* k = find_key(c.sweep.key);
        if (!k || (k->kind != Kind::Number && k->kind != Kind::Integer)) {
            throw ConfigError(0, "sweep.key '" + c.sweep.key + "' is not a numeric key");
        }
    }
}

std::string serialize(const RunConfig& c) {
    std::string out;
    std::string section;
    for (const auto& k : keys()) {
        const std::string sec = k.name.substr(0, k.name.find('.'));
        if (k.kind == Kind::List && c.sweep.values.empty()) continue;
        if (k.name == "sweep.key" && c.sweep.key.empty()) continue;
        if (sec != section) {
            if (!section.empty()) out += "\n";
            section = sec;
        }
        out += k.name + " = " + render(c, k) + "\n";
    }
    return out;
}

void set_numeric(RunConfig& c, std::string_view key, double value) {
    const Key* k = find_key(key);
    if (!k) throw ConfigError(0, "unknown key '" + std::string(key) + "'");
    if (k->kind == Kind::Integer) {
        const double r = std::round(value);
        if (r != value) throw ConfigError(0, std::string(key) + " needs an integer value");
        if (k->name == "sim.record_every") c.sim.record_every = static_cast<int>(r);
        else c.n_elem = static_cast<int>(r);
        return;
    }
    if (k->kind != Kind::Number) throw ConfigError(0, std::string(key) + " is not numeric");
    *k->number(c) = value;
}

std::vector<KeyInfo> config_keys() {
    std::vector<KeyInfo> out;
    for (const auto& k : keys()) out.push_back({k.name, k.unit, k.help});
    return out;
}

}  // namespace flexwing
