#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexwing {

/// Physical constants of a homogeneous wing with a tip store.
///
/// All quantities are SI. Units are documented, not enforced.
struct WingParameters {
    double l = 0.0;        ///< span length [m]
    double rho = 0.0;      ///< mass per unit span [kg/m]
    double I_w = 0.0;      ///< torsional inertia per unit span [kg*m]
    double EI = 0.0;       ///< bending stiffness [N*m^2]
    double GJ = 0.0;       ///< torsional stiffness [N*m^2]
    double eta_w = 0.0;    ///< bending Kelvin-Voigt coefficient [s]
    double eta_phi = 0.0;  ///< torsional Kelvin-Voigt coefficient [s]
    double x_c = 0.0;      ///< offset between centre of gravity and elastic axis [m]
    double m_s = 0.0;      ///< store mass [kg]
    double J_s = 0.0;      ///< store inertia [kg*m^2]
};

/// Coefficients of the unsteady distributed loads
///   F_a = alpha_w phi + beta_w phi_t + gamma_w w_t
///   M_a = alpha_phi phi + beta_phi phi_t + gamma_phi w_t
/// Any finite real is accepted; negative values are used as given.
struct AeroCoefficients {
    double alpha_w = 0.0;
    double beta_w = 0.0;
    double gamma_w = 0.0;
    double alpha_phi = 0.0;
    double beta_phi = 0.0;
    double gamma_phi = 0.0;

    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] AeroCoefficients scaled(double factor) const;
};

/// Tip PD controller: L = -k1 (w_t(l) + eps1 w(l)), M = -k2 (phi_t(l) + eps2 phi(l)).
struct ControllerGains {
    double k1 = 0.0;
    double k2 = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
};

/// Symmetric 2x2 matrix [[a, b], [b, c]].
struct Sym2 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    [[nodiscard]] double det() const { return a * c - b * b; }
    [[nodiscard]] double trace() const { return a + c; }
    /// Closed-form eigenvalues, ascending.
    [[nodiscard]] std::array<double, 2> eigenvalues() const;
};

struct DerivedConstants {
    Sym2 M;                ///< [[rho, rho x_c], [rho x_c, I_w*]]
    Sym2 M_s;              ///< [[m_s, m_s x_c], [m_s x_c, J_s*]]
    double c_w = 0.0;      ///< sqrt(EI / rho)
    double c_phi = 0.0;    ///< sqrt(GJ / I_w)
    double I_w_star = 0.0; ///< I_w + rho x_c^2
    double J_s_star = 0.0; ///< J_s + m_s x_c^2
    double lam_min_M = 0.0;
    double lam_max_M = 0.0;
    double lam_min_Ms = 0.0;
    double lam_max_Ms = 0.0;
};

/// Names every violated positivity/finiteness constraint; empty iff valid.
struct ValidationReport {
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string str() const;
};

class InvalidParameters : public std::invalid_argument {
public:
    explicit InvalidParameters(const ValidationReport& report);
    [[nodiscard]] const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Undamped wings (eta = 0) are admitted only for simulation; every
/// certificate formula assumes eta > 0.
enum class Damping { Required, MayBeZero };

[[nodiscard]] ValidationReport validate(const WingParameters& p, Damping damping = Damping::Required);
[[nodiscard]] ValidationReport validate(const AeroCoefficients& a);
/// k1, k2 may be zero (open loop); eps1, eps2 must be strictly positive.
[[nodiscard]] ValidationReport validate(const ControllerGains& g);

/// Throws InvalidParameters if validate(p) fails.
[[nodiscard]] DerivedConstants derive(const WingParameters& p, Damping damping = Damping::Required);

}  // namespace flexwing
