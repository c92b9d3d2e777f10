#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "flexwing/analysis.hpp"
#include "flexwing/certify.hpp"
#include "flexwing/config.hpp"
#include "flexwing/fem.hpp"
#include "flexwing/sim.hpp"

namespace flexwing {

enum ExitCode : int { Ok = 0, Infeasible = 1, BadConfig = 2, NumericFailure = 3 };

/// Certificate for the configured wing. By default eps1, eps2 come from the
/// gains and only r1..r8 are searched; certify.search_eps frees them too.
/// Zero gains are never certified.
[[nodiscard]] certify::Certificate certify_config(const RunConfig& cfg);

struct SimulationRun {
    fem::DiscreteSystem sys;
    sim::Trajectory traj;
};

/// Default initial condition, zero initial velocity. Throws sim::NumericalFailure.
[[nodiscard]] SimulationRun simulate_config(const RunConfig& cfg);

/// Each writes its artifacts under `out` (created if missing) and returns an ExitCode.
int run_certify(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int run_simulate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int run_spectrum(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int run_sweep(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// CSV writers (shortest round-trip numbers).
void write_trajectory_csv(const SimulationRun& run, const RunConfig& cfg, const std::filesystem::path& file);
void write_state_csv(const SimulationRun& run, const std::filesystem::path& file);
void write_fields_csv(const SimulationRun& run, const std::filesystem::path& file, int max_slices = 200);
void write_eigenvalues_csv(const analysis::SpectrumReport& s, const std::filesystem::path& file);

}  // namespace flexwing
