#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flexwing/model.hpp"
#include "flexwing/sim.hpp"

namespace flexwing {

struct SweepSpec {
    std::string key;             ///< any numeric config key, e.g. gains.k1
    std::vector<double> values;  ///< one run per value, in order
};

struct RunConfig {
    WingParameters wing;
    AeroCoefficients aero;
    ControllerGains gains;
    sim::SimConfig sim;
    int n_elem = 16;
    double w_bar = 0.1;     ///< initial tip deflection amplitude [m]
    double phi_bar = 0.002;  ///< initial tip twist amplitude [rad]
    bool save_state = false;
    std::string out_dir = "out";
    bool search_eps = false;  ///< certify: search eps as well as r1..r8
    SweepSpec sweep;
};

/// Parse error carrying the 1-based line number (0 for whole-config checks).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& msg);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// Built-in preset: span, damping, offset, store and gains of the reference
/// wing; rho, I_w, EI, GJ, alpha_w, alpha_phi are calibrated placeholders.
[[nodiscard]] RunConfig default_config();

/// Flat `section.key = value [unit]` text. `#` starts a comment. Unknown
/// keys, malformed values, repeated keys and unit mismatches are errors.
/// aero.beta_w and aero.gamma_w default to alpha_w / 3, aero.beta_phi and
/// aero.gamma_phi to -alpha_phi / 2, unless set explicitly.
[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Full validation (parameters, gains, sim settings, mesh, sweep); throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Canonical text: every key in fixed order, shortest round-trip numbers, units.
[[nodiscard]] std::string serialize(const RunConfig& cfg);

/// Sets one numeric key by name (used by sweeps). Throws ConfigError on unknown
/// or non-numeric keys.
void set_numeric(RunConfig& cfg, std::string_view key, double value);

/// All keys with their canonical units, in canonical order.
struct KeyInfo {
    std::string name;
    std::string unit;
    std::string help;
};
[[nodiscard]] std::vector<KeyInfo> config_keys();

}  // namespace flexwing
