#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flexwing/fem.hpp"
#include "flexwing/model.hpp"

namespace flexwing::sim {

enum class Scheme { NewmarkAverageAcceleration, GeneralizedAlpha };

struct SimConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    Scheme scheme = Scheme::NewmarkAverageAcceleration;
    double rho_inf = 1.0;  ///< spectral radius at infinity, generalized-alpha only
    bool control_enabled = true;
    int record_every = 1;  ///< keep every k-th step and the last one
};

/// Throws std::invalid_argument on dt <= 0, t_end < dt, rho_inf outside [0, 1].
void validate(const SimConfig& cfg);

struct StateSnapshot {
    double t = 0.0;
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    Eigen::VectorXd acc;
};

struct Trajectory {
    std::vector<StateSnapshot> snapshots;
    std::vector<double> E;
    std::vector<double> E_aug;
    std::vector<std::pair<double, double>> controls;  ///< (L_tip, M_tip)

    [[nodiscard]] std::size_t size() const { return snapshots.size(); }
    [[nodiscard]] std::vector<double> times() const;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tip measurements fed to the controller.
struct TipState {
    double w = 0.0;
    double w_t = 0.0;
    double phi = 0.0;
    double phi_t = 0.0;
};

/// (L_tip, M_tip) = (-k1 (w_t + eps1 w), -k2 (phi_t + eps2 phi)).
[[nodiscard]] std::pair<double, double> control_law(const TipState& tip, const ControllerGains& g);

[[nodiscard]] TipState tip_state(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v);

/// Closed-loop second-order matrices with aerodynamics moved to the left and
/// the tip feedback folded in:  M u'' + C_hat u' + K_hat u = 0.
struct ClosedLoop {
    Eigen::MatrixXd M;
    Eigen::MatrixXd C_hat;
    Eigen::MatrixXd K_hat;
};

[[nodiscard]] ClosedLoop close_loop(const fem::DiscreteSystem& sys, const ControllerGains& g,
                                    bool control_enabled);

/// Physical energy: 1/2 u^T K u + 1/2 v^T M v (structural K, store included in M).
[[nodiscard]] double energy(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v);

/// Augmented energy: E + v^T M D_eps u, where D_eps weights bending DOFs by
/// eps1 and twist DOFs by eps2.
[[nodiscard]] double augmented_energy(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& v, double eps1, double eps2);

/// Diagonal of D_eps.
[[nodiscard]] Eigen::VectorXd eps_weights(const fem::DiscreteSystem& sys, double eps1, double eps2);

/// Default initial displacement w0 = w_bar (y/l)^2, phi0 = phi_bar (y/l).
[[nodiscard]] Eigen::VectorXd default_initial_displacement(const fem::DiscreteSystem& sys, double w_bar,
                                                           double phi_bar);

/// Time-steps the closed-loop system from (u0, v0). The initial acceleration
/// is solved from the semi-discrete equation. Throws NumericalFailure on a
/// non-finite state.
[[nodiscard]] Trajectory integrate(const fem::DiscreteSystem& sys, const ControllerGains& g,
                                   const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                                   const SimConfig& cfg);

}  // namespace flexwing::sim
