#include "flexwing/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "flexwing/numfmt.hpp"

namespace flexwing {

namespace fs = std::filesystem;

certify::Certificate certify_config(const RunConfig& cfg) {
    const DerivedConstants d = derive(cfg.wing);
    certify::SearchConfig sc;
    if (!cfg.search_eps) sc.fixed_eps = std::make_pair(cfg.gains.eps1, cfg.gains.eps2);
    certify::Certificate c = certify::search_feasible(d, cfg.wing, cfg.aero, sc);
    // The multiplier argument relies on the tip feedback terms, so open loop
    // (or a missing channel) is not covered.
    if (!(cfg.gains.k1 > 0.0) || !(cfg.gains.k2 > 0.0)) {
        c.feasible = false;
        c.Lambda = 0.0;
        c.mu_m = 0.0;
    }
    return c;
}

SimulationRun simulate_config(const RunConfig& cfg) {
    SimulationRun run{fem::assemble(cfg.wing, cfg.aero, cfg.n_elem), {}};
    const Eigen::VectorXd u0 = sim::default_initial_displacement(run.sys, cfg.w_bar, cfg.phi_bar);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(run.sys.size());
    run.traj = sim::integrate(run.sys, cfg.gains, u0, v0, cfg.sim);
    return run;
}

namespace {

std::ofstream open_out(const fs::path& file) {
    std::ofstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + file.string() + "'");
    return f;
}

std::string num(double v) { return format_shortest(v); }

}  // namespace

void write_trajectory_csv(const SimulationRun& run, const RunConfig&, const fs::path& file) {
    auto f = open_out(file);
    f << "t,E,E_aug,w_tip,phi_tip,L_tip,M_tip\n";
    const int tw = run.sys.dofs.tip_w();
    const int tp = run.sys.dofs.tip_phi();
    const auto& tr = run.traj;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const auto& s = tr.snapshots[k];
        f << num(s.t) << ',' << num(tr.E[k]) << ',' << num(tr.E_aug[k]) << ',' << num(s.u(tw)) << ','
          << num(s.u(tp)) << ',' << num(tr.controls[k].first) << ',' << num(tr.controls[k].second) << '\n';
    }
}

void write_state_csv(const SimulationRun& run, const fs::path& file) {
    auto f = open_out(file);
    const int n = run.sys.size();
    f << "t";
    for (int i = 0; i < n; ++i) f << ",u" << i;
    for (int i = 0; i < n; ++i) f << ",v" << i;
    f << '\n';
    for (const auto& s : run.traj.snapshots) {
        f << num(s.t);
        for (int i = 0; i < n; ++i) f << ',' << num(s.u(i));
        for (int i = 0; i < n; ++i) f << ',' << num(s.v(i));
        f << '\n';
    }
}

void write_fields_csv(const SimulationRun& run, const fs::path& file, int max_slices) {
    auto f = open_out(file);
    f << "t,y,w,phi\n";
    const auto& snaps = run.traj.snapshots;
    const std::size_t count = snaps.size();
    const std::size_t stride = std::max<std::size_t>(1, (count + max_slices - 1) / max_slices);
    for (std::size_t k = 0; k < count; k += stride) {
        const auto& s = snaps[k];
        const Eigen::VectorXd w = fem::nodal_w(run.sys, s.u);
        const Eigen::VectorXd phi = fem::nodal_phi(run.sys, s.u);
        for (int i = 0; i <= run.sys.mesh.n_elem; ++i) {
            f << num(s.t) << ',' << num(run.sys.mesh.nodes[i]) << ',' << num(w(i)) << ',' << num(phi(i)) << '\n';
        }
    }
}

void write_eigenvalues_csv(const analysis::SpectrumReport& s, const fs::path& file) {
    auto f = open_out(file);
    f << "re,im\n";
    for (const auto& e : s.eigenvalues) f << num(e.real()) << ',' << num(e.imag()) << '\n';
}

int run_certify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    fs::create_directories(out);
    const certify::Certificate c = certify_config(cfg);
    auto f = open_out(out / "certificate.txt");
    f << certify::to_text(c);
    log << (c.feasible ? "feasible" : "infeasible") << ": Lambda = " << num(c.Lambda)
        << " 1/s, margin = " << num(c.margin) << '\n';
    return c.feasible ? Ok : Infeasible;
}

int run_simulate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    fs::create_directories(out);
    SimulationRun run;
    try {
        run = simulate_config(cfg);
    } catch (const sim::NumericalFailure& e) {
        log << "numerical failure: " << e.what() << '\n';
        return NumericFailure;
    }
    write_trajectory_csv(run, cfg, out / "trajectory.csv");
    write_fields_csv(run, out / "fields.csv");
    if (cfg.save_state) write_state_csv(run, out / "state.csv");
    const auto& E = run.traj.E;
    log << "E(0) = " << num(E.front()) << ", E(t_end) = " << num(E.back()) << '\n';
    return Ok;
}

int run_spectrum(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    fs::create_directories(out);
    const fem::DiscreteSystem sys = fem::assemble(cfg.wing, cfg.aero, cfg.n_elem);
    const analysis::SpectrumReport s = analysis::closed_loop_spectrum(sys, cfg.gains, cfg.sim.control_enabled);
    write_eigenvalues_csv(s, out / "eigenvalues.csv");
    log << "max Re = " << num(s.max_real_part) << '\n';
    return Ok;
}

namespace {

struct SweepRow {
    double value = 0.0;
    bool feasible = false;
    double Lambda = 0.0;
    double Lambda_hat = std::numeric_limits<double>::quiet_NaN();
    double max_re = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    std::string error;
};

SweepRow sweep_one(const RunConfig& cfg, double value, const fs::path& dir) {
    SweepRow row;
    row.value = value;
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "config.txt", std::ios::binary);
        f << serialize(cfg);
    }
    const certify::Certificate c = certify_config(cfg);
    row.feasible = c.feasible;
    row.Lambda = c.Lambda;
    {
        std::ofstream f(dir / "certificate.txt", std::ios::binary);
        f << certify::to_text(c);
    }
    try {
        const SimulationRun run = simulate_config(cfg);
        write_trajectory_csv(run, cfg, dir / "trajectory.csv");
        row.Lambda_hat = analysis::fit_decay(run.traj.times(), run.traj.E).Lambda_hat;
        const auto s = analysis::closed_loop_spectrum(run.sys, cfg.gains, cfg.sim.control_enabled);
        write_eigenvalues_csv(s, dir / "eigenvalues.csv");
        row.max_re = s.max_real_part;
    } catch (const sim::NumericalFailure& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

int thread_cap() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("FLEXWING_THREADS")) {
        const auto v = parse_double(env);
        if (v && *v >= 1.0) n = std::min(n, static_cast<int>(*v));
        else if (v) n = 1;
    }
    return n;
}

}  // namespace

int run_sweep(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    if (cfg.sweep.key.empty() || cfg.sweep.values.empty()) {
        throw ConfigError(0, "sweep needs sweep.key and sweep.values");
    }
    // Validate every variant before running anything.
    std::vector<RunConfig> variants;
    for (double v : cfg.sweep.values) {
        RunConfig c = cfg;
        set_numeric(c, cfg.sweep.key, v);
        c.sweep = {};
        validate_config(c);
        variants.push_back(std::move(c));
    }
    fs::create_directories(out);

    const std::size_t n = variants.size();
    std::vector<SweepRow> rows(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu", i);
            rows[i] = sweep_one(variants[i], cfg.sweep.values[i], out / name);
        }
    };
    const int threads = std::min<int>(thread_cap(), static_cast<int>(n));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    auto f = open_out(out / "summary.csv");
    f << cfg.sweep.key << ",feasible,Lambda,Lambda_hat,max_re\n";
    bool failed = false;
    for (const auto& r : rows) {
        f << num(r.value) << ',' << (r.feasible ? "true" : "false") << ',' << num(r.Lambda) << ','
          << num(r.Lambda_hat) << ',' << num(r.max_re) << '\n';
        if (r.failed) {
            failed = true;
            log << cfg.sweep.key << " = " << num(r.value) << ": numerical failure: " << r.error << '\n';
        }
    }
    log << n << " runs written to " << out.string() << '\n';
    return failed ? NumericFailure : Ok;
}

}  // namespace flexwing
