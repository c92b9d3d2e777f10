#pragma once

#include <cmath>
#include <random>

#include "flexwing/certify.hpp"
#include "flexwing/model.hpp"
#include "oracles.hpp"

namespace testing {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random physically valid wing; x_c is exactly zero in about one draw in eight.
inline flexwing::WingParameters random_wing(std::mt19937_64& rng) {
    flexwing::WingParameters p;
    p.l = log_uniform(rng, 0.5, 20.0);
    p.rho = log_uniform(rng, 1.0, 500.0);
    p.I_w = log_uniform(rng, 0.1, 100.0);
    p.EI = log_uniform(rng, 1e3, 1e8);
    p.GJ = log_uniform(rng, 1e3, 1e8);
    p.eta_w = log_uniform(rng, 1e-4, 1e-1);
    p.eta_phi = log_uniform(rng, 1e-4, 1e-1);
    p.x_c = (rng() % 8 == 0) ? 0.0 : uniform(rng, -0.5, 0.5);
    p.m_s = log_uniform(rng, 0.1, 100.0);
    p.J_s = log_uniform(rng, 0.1, 100.0);
    return p;
}

inline flexwing::AeroCoefficients random_aero(std::mt19937_64& rng, double scale) {
    flexwing::AeroCoefficients a;
    a.alpha_w = uniform(rng, -scale, scale);
    a.beta_w = uniform(rng, -scale, scale);
    a.gamma_w = uniform(rng, -scale, scale);
    a.alpha_phi = uniform(rng, -scale, scale);
    a.beta_phi = uniform(rng, -scale, scale);
    a.gamma_phi = uniform(rng, -scale, scale);
    return a;
}

inline oracle::Wing to_oracle(const flexwing::WingParameters& p) {
    return {p.l, p.rho, p.I_w, p.EI, p.GJ, p.eta_w, p.eta_phi, p.x_c, p.m_s, p.J_s};
}

inline oracle::Aero to_oracle(const flexwing::AeroCoefficients& a) {
    return {a.alpha_w, a.beta_w, a.gamma_w, a.alpha_phi, a.beta_phi, a.gamma_phi};
}

inline oracle::Point to_oracle(const flexwing::certify::MultiplierPoint& pt) {
    oracle::Point o{};
    o.e1 = pt.eps1;
    o.e2 = pt.eps2;
    for (int i = 0; i < 8; ++i) o.r[i + 1] = pt.r[i];
    return o;
}

/// Relative difference, with `scale` as a floor on the denominator.
inline double rel(double a, double b, double scale = 0.0) {
    if (a == b) return 0.0;
    const double den = std::max({std::abs(a), std::abs(b), scale});
    return std::abs(a - b) / den;
}

}  // namespace testing
