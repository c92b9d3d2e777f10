#include "flexwing/sim.hpp"

#include <cmath>
#include <string>

#include "flexwing/numfmt.hpp"

namespace flexwing::sim {

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("sim.dt must be > 0");
    if (!(cfg.t_end >= cfg.dt) || !std::isfinite(cfg.t_end)) {
        throw std::invalid_argument("sim.t_end must be >= sim.dt");
    }
    if (!(cfg.rho_inf >= 0.0 && cfg.rho_inf <= 1.0)) {
        throw std::invalid_argument("sim.rho_inf must lie in [0, 1]");
    }
    if (cfg.record_every < 1) throw std::invalid_argument("sim.record_every must be >= 1");
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
}

std::pair<double, double> control_law(const TipState& tip, const ControllerGains& g) {
    return {-g.k1 * (tip.w_t + g.eps1 * tip.w), -g.k2 * (tip.phi_t + g.eps2 * tip.phi)};
}

TipState tip_state(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const int tw = sys.dofs.tip_w();
    const int tp = sys.dofs.tip_phi();
    return {u(tw), v(tw), u(tp), v(tp)};
}

ClosedLoop close_loop(const fem::DiscreteSystem& sys, const ControllerGains& g, bool control_enabled) {
    ClosedLoop cl;
    cl.M = sys.M;
    cl.C_hat = sys.C - sys.A_vel;
    cl.K_hat = sys.K - sys.A_pos;
    if (control_enabled) {
        const int tw = sys.dofs.tip_w();
        const int tp = sys.dofs.tip_phi();
        cl.C_hat(tw, tw) += g.k1;
        cl.K_hat(tw, tw) += g.k1 * g.eps1;
        cl.C_hat(tp, tp) += g.k2;
        cl.K_hat(tp, tp) += g.k2 * g.eps2;
    }
    return cl;
}

double energy(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return 0.5 * u.dot(sys.K * u) + 0.5 * v.dot(sys.M * v);
}

Eigen::VectorXd eps_weights(const fem::DiscreteSystem& sys, double eps1, double eps2) {
    Eigen::VectorXd w(sys.size());
    w.head(sys.dofs.n_bending()).setConstant(eps1);
    w.tail(sys.dofs.n_torsion()).setConstant(eps2);
    return w;
}

double augmented_energy(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                        double eps1, double eps2) {
    const Eigen::VectorXd du = eps_weights(sys, eps1, eps2).cwiseProduct(u);
    return energy(sys, u, v) + v.dot(sys.M * du);
}

Eigen::VectorXd default_initial_displacement(const fem::DiscreteSystem& sys, double w_bar, double phi_bar) {
    const double l = sys.mesh.l;
    return fem::interpolate(
        sys, [&](double y) { return w_bar * (y / l) * (y / l); },
        [&](double y) { return 2.0 * w_bar * y / (l * l); }, [&](double y) { return phi_bar * y / l; });
}

namespace {

struct Coefficients {
    double alpha_m, alpha_f, beta, gamma;
};

Coefficients coefficients(const SimConfig& cfg) {
    if (cfg.scheme == Scheme::NewmarkAverageAcceleration) return {0.0, 0.0, 0.25, 0.5};
    const double r = cfg.rho_inf;
    const double am = (2.0 * r - 1.0) / (r + 1.0);
    const double af = r / (r + 1.0);
    const double gamma = 0.5 - am + af;
    const double beta = 0.25 * (1.0 - am + af) * (1.0 - am + af);
    return {am, af, beta, gamma};
}

bool finite(const Eigen::VectorXd& x) { return x.allFinite(); }

}  // namespace

Trajectory integrate(const fem::DiscreteSystem& sys, const ControllerGains& g, const Eigen::VectorXd& u0,
                     const Eigen::VectorXd& v0, const SimConfig& cfg) {
    validate(cfg);
    const int n = sys.size();
    if (u0.size() != n || v0.size() != n) {
        throw std::invalid_argument("initial state length does not match the DOF count");
    }
    const ClosedLoop cl = close_loop(sys, g, cfg.control_enabled);
    const Coefficients k = coefficients(cfg);
    const double h = cfg.dt;
    const long steps = std::lround(cfg.t_end / h);

    Eigen::PartialPivLU<Eigen::MatrixXd> mass_lu(cl.M);
    Eigen::VectorXd u = u0;
    Eigen::VectorXd v = v0;
    Eigen::VectorXd a = mass_lu.solve(-(cl.C_hat * v + cl.K_hat * u));

    const Eigen::MatrixXd lhs = (1.0 - k.alpha_m) * cl.M + (1.0 - k.alpha_f) * k.gamma * h * cl.C_hat +
                                (1.0 - k.alpha_f) * k.beta * h * h * cl.K_hat;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);

    Trajectory traj;
    const std::size_t expected = static_cast<std::size_t>(steps / cfg.record_every) + 2;
    traj.snapshots.reserve(expected);
    traj.E.reserve(expected);
    traj.E_aug.reserve(expected);
    traj.controls.reserve(expected);

    const ControllerGains active = cfg.control_enabled ? g : ControllerGains{0.0, 0.0, g.eps1, g.eps2};
    auto record = [&](double t) {
        traj.snapshots.push_back({t, u, v, a});
        traj.E.push_back(energy(sys, u, v));
        traj.E_aug.push_back(augmented_energy(sys, u, v, g.eps1, g.eps2));
        traj.controls.push_back(control_law(tip_state(sys, u, v), active));
    };
    record(0.0);

    for (long step = 1; step <= steps; ++step) {
        const Eigen::VectorXd u_pred = u + h * v + h * h * (0.5 - k.beta) * a;
        const Eigen::VectorXd v_pred = v + h * (1.0 - k.gamma) * a;
        Eigen::VectorXd rhs = -cl.C_hat * ((1.0 - k.alpha_f) * v_pred + k.alpha_f * v) -
                              cl.K_hat * ((1.0 - k.alpha_f) * u_pred + k.alpha_f * u);
        if (k.alpha_m != 0.0) rhs -= k.alpha_m * (cl.M * a);
        a = lu.solve(rhs);
        u = u_pred + k.beta * h * h * a;
        v = v_pred + k.gamma * h * a;
        if (!finite(u) || !finite(v)) {
            throw NumericalFailure("non-finite state at t = " + format_shortest(step * h));
        }
        if (step % cfg.record_every == 0 || step == steps) record(step * h);
    }
    return traj;
}

}  // namespace flexwing::sim
