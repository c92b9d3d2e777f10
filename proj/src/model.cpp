#include "flexwing/model.hpp"

#include <cmath>

namespace flexwing {

namespace {

void require_positive(ValidationReport& r, const char* name, double v) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        r.violations.push_back(std::string(name) + " must be > 0");
    }
}

void require_nonnegative(ValidationReport& r, const char* name, double v) {
    if (!std::isfinite(v) || v < 0.0) {
        r.violations.push_back(std::string(name) + " must be >= 0");
    }
}

void require_finite(ValidationReport& r, const char* name, double v) {
    if (!std::isfinite(v)) {
        r.violations.push_back(std::string(name) + " must be finite");
    }
}

}  // namespace

bool AeroCoefficients::is_zero() const {
    return alpha_w == 0.0 && beta_w == 0.0 && gamma_w == 0.0 && alpha_phi == 0.0 &&
           beta_phi == 0.0 && gamma_phi == 0.0;
}

AeroCoefficients AeroCoefficients::scaled(double factor) const {
    return {alpha_w * factor,   beta_w * factor,   gamma_w * factor,
            alpha_phi * factor, beta_phi * factor, gamma_phi * factor};
}

std::array<double, 2> Sym2::eigenvalues() const {
    // Written so that the smaller root does not suffer cancellation.
    const double half_tr = 0.5 * (a + c);
    const double half_diff = 0.5 * (a - c);
    const double disc = std::hypot(half_diff, b);
    const double hi = half_tr + disc;
    const double lo = hi != 0.0 ? det() / hi : half_tr - disc;
    return {lo, hi};
}

std::string ValidationReport::str() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v;
    }
    return out;
}

InvalidParameters::InvalidParameters(const ValidationReport& report)
    : std::invalid_argument("invalid parameters: " + report.str()), report_(report) {}

ValidationReport validate(const WingParameters& p, Damping damping) {
    ValidationReport r;
    require_positive(r, "l", p.l);
    require_positive(r, "rho", p.rho);
    require_positive(r, "I_w", p.I_w);
    require_positive(r, "EI", p.EI);
    require_positive(r, "GJ", p.GJ);
    if (damping == Damping::Required) {
        require_positive(r, "eta_w", p.eta_w);
        require_positive(r, "eta_phi", p.eta_phi);
    } else {
        require_nonnegative(r, "eta_w", p.eta_w);
        require_nonnegative(r, "eta_phi", p.eta_phi);
    }
    require_finite(r, "x_c", p.x_c);
    require_positive(r, "m_s", p.m_s);
    require_positive(r, "J_s", p.J_s);
    return r;
}

ValidationReport validate(const AeroCoefficients& a) {
    ValidationReport r;
    require_finite(r, "alpha_w", a.alpha_w);
    require_finite(r, "beta_w", a.beta_w);
    require_finite(r, "gamma_w", a.gamma_w);
    require_finite(r, "alpha_phi", a.alpha_phi);
    require_finite(r, "beta_phi", a.beta_phi);
    require_finite(r, "gamma_phi", a.gamma_phi);
    return r;
}

ValidationReport validate(const ControllerGains& g) {
    ValidationReport r;
    require_nonnegative(r, "k1", g.k1);
    require_nonnegative(r, "k2", g.k2);
    require_positive(r, "eps1", g.eps1);
    require_positive(r, "eps2", g.eps2);
    return r;
}

DerivedConstants derive(const WingParameters& p, Damping damping) {
    if (auto r = validate(p, damping); !r.ok()) throw InvalidParameters(r);

    DerivedConstants d;
    d.I_w_star = p.I_w + p.rho * p.x_c * p.x_c;
    d.J_s_star = p.J_s + p.m_s * p.x_c * p.x_c;
    d.M = {p.rho, p.rho * p.x_c, d.I_w_star};
    d.M_s = {p.m_s, p.m_s * p.x_c, d.J_s_star};
    d.c_w = std::sqrt(p.EI / p.rho);
    d.c_phi = std::sqrt(p.GJ / p.I_w);

    const auto eM = d.M.eigenvalues();
    const auto eMs = d.M_s.eigenvalues();
    d.lam_min_M = eM[0];
    d.lam_max_M = eM[1];
    d.lam_min_Ms = eMs[0];
    d.lam_max_Ms = eMs[1];
    return d;
}

}  // namespace flexwing
