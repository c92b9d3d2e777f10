#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "flexwing/certify.hpp"
#include "flexwing/fem.hpp"
#include "flexwing/model.hpp"
#include "flexwing/sim.hpp"

namespace flexwing::analysis {

struct DecayFit {
    double Lambda_hat = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    int samples = 0;
};

/// Least-squares slope of log E over the window; Lambda_hat = -slope.
/// Samples below 1e-300 * E(0) are skipped. Without a window, a coarse fit
/// over the whole series gives Lambda0 and the window starts at 3 / Lambda0
/// (capped at half the horizon).
[[nodiscard]] DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& E,
                                 std::optional<std::pair<double, double>> window = std::nullopt);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;  ///< descending real part, then descending imag
    double max_real_part = 0.0;
};

/// Eigenvalues of [[0, I], [-M^-1 K_hat, -M^-1 C_hat]].
[[nodiscard]] SpectrumReport closed_loop_spectrum(const fem::DiscreteSystem& sys, const ControllerGains& g,
                                                  bool control_enabled = true);

struct EnvelopeReport {
    int violations_w = 0;
    int violations_wy = 0;
    int violations_phi = 0;
    /// Largest observed ratio sup|field| / envelope over the run.
    double worst_ratio_w = 0.0;
    double worst_ratio_wy = 0.0;
    double worst_ratio_phi = 0.0;

    [[nodiscard]] int violations() const { return violations_w + violations_wy + violations_phi; }
};

/// Checks sup|psi(., t)| <= K_psi sqrt(E0) exp(-Lambda t / 2) for psi in {w, w_y, phi}.
/// w and w_y are sampled inside every element through the Hermite basis.
[[nodiscard]] EnvelopeReport supnorm_envelope_check(const fem::DiscreteSystem& sys, const sim::Trajectory& traj,
                                                    const certify::Certificate& cert, double E0,
                                                    double rel_tol = 1e-6, int samples_per_element = 16);

/// Largest spanwise |w|, |w_y| and |phi| of a state.
struct SupNorms {
    double w = 0.0;
    double w_y = 0.0;
    double phi = 0.0;
};
[[nodiscard]] SupNorms sup_norms(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u,
                                 int samples_per_element = 16);

struct BoundReport {
    int violations = 0;
    double worst_ratio = 0.0;  ///< max over samples of E / bound
};

/// E(t) <= K_E E(0) exp(-Lambda t) at every sample.
[[nodiscard]] BoundReport energy_bound_check(const sim::Trajectory& traj, const certify::Certificate& cert,
                                             double rel_tol = 1e-9);

/// E_aug(t_{k+1}) <= E_aug(t_k) (1 + rel_tol) for every step.
[[nodiscard]] BoundReport monotonicity_check(const std::vector<double>& E_aug, double rel_tol = 1e-10);

/// Right-hand side of A1 X = X~, given as functions of y.
struct A1Rhs {
    std::function<double(double)> f_t;  ///< f~, in H^2 with f~(0) = f~'(0) = 0
    std::function<double(double)> g_t;
    std::function<double(double)> h_t;  ///< h~, with h~(0) = 0
    std::function<double(double)> z_t;
    double zeta_w = 0.0;
    double zeta_phi = 0.0;
};

struct A1Report {
    int n_quad = 0;
    std::vector<double> y;
    std::vector<double> f;
    std::vector<double> h;
    /// Interior residuals of -c_w^2 (f'' + eta_w f~'')'' = g^ and
    /// c_phi^2 (h' + eta_phi h~')' = z^, relative to max |g^|, max |z^|.
    double interior_residual_w = 0.0;
    double interior_residual_phi = 0.0;
    /// Tip force/moment balances relative to the sum of their term magnitudes
    /// plus the resultant of the distributed load.
    double boundary_residual_w = 0.0;
    double boundary_residual_phi = 0.0;
    /// |f(0)|, |f'(0)|, |h(0)|, |(f'' + eta_w f~'')(l)|, scaled by the field size.
    double clamp_residual = 0.0;
    double curvature_residual = 0.0;
    /// max |f_n - f_{n/2}| relative to max |f_n| (same for h), and the
    /// observed order from the n, n/2, n/4 sequence.
    double refinement_residual = 0.0;
    double observed_order = 0.0;
    bool under_resolved = false;

    [[nodiscard]] double worst_residual() const;
};

/// Closed-form inverse evaluated with nested composite Simpson quadrature on
/// n_quad intervals, then checked by high-order finite differences on a
/// coarser sub-grid of about fd_points intervals. n_quad must be a multiple of 4
/// and >= 100.
[[nodiscard]] A1Report a1_inverse_check(const WingParameters& p, const ControllerGains& g, const A1Rhs& rhs,
                                        int n_quad, int fd_points = 50);

/// Cumulative integral from 0 of samples on a uniform grid of spacing h:
/// Simpson on even nodes, a 3-point rule at node 1 and Simpson + 3/8 on odd nodes.
[[nodiscard]] std::vector<double> cumulative_simpson(const std::vector<double>& v, double h);

/// Finite-difference weights for derivative `order` at x0 from the given nodes.
[[nodiscard]] std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int order);

}  // namespace flexwing::analysis
