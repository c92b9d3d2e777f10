#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "flexwing/model.hpp"

namespace flexwing::certify {

/// Free multipliers of the Lyapunov certificate: control weights eps1, eps2
/// and the eight Young-inequality parameters r1..r8.
struct MultiplierPoint {
    double eps1 = 0.0;
    double eps2 = 0.0;
    std::array<double, 8> r{};  ///< r[0] is r1, ..., r[7] is r8

    [[nodiscard]] bool positive() const;
};

struct LambdaSet {
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
    double lambda4 = 0.0, lambda5 = 0.0, lambda6 = 0.0;
    double mu3 = 0.0, mu6 = 0.0;
    double nu1 = 0.0, nu2 = 0.0;
};

struct Certificate {
    double K_m1 = 0.0, K_m2 = 0.0;
    double eps1_star = 0.0, eps2_star = 0.0;
    MultiplierPoint point;
    LambdaSet lambdas;
    double alpha = 0.0;
    double lambda3_split = 0.0, lambda6_split = 0.0;
    double mu_m = 0.0;
    double Lambda = 0.0;
    double K_E = 0.0;
    double K_w = 0.0, K_wy = 0.0, K_phi = 0.0;
    bool feasible = false;
    /// Worst normalized margin of the returned point (> 0 iff the strict
    /// inequalities hold).
    double margin = 0.0;
    /// True if any aerodynamic coefficient is negative (formulas are used as given).
    bool negative_aero = false;
};

class CertificationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inner-product admissibility bounds (K_m1, K_m2). Terms carrying a 1/|x_c|
/// factor are +inf when x_c = 0 and drop out of the minimum.
[[nodiscard]] std::pair<double, double> compute_km(const DerivedConstants& d, const WingParameters& p);

/// Dissipativity bounds (eps1*, eps2*).
[[nodiscard]] std::pair<double, double> compute_eps_star(const DerivedConstants& d,
                                                         const WingParameters& p);

[[nodiscard]] LambdaSet compute_lambdas(const DerivedConstants& d, const WingParameters& p,
                                        const AeroCoefficients& a, const MultiplierPoint& pt);

/// lambda1, lambda3, lambda4, lambda6, mu3, mu6 > 0 and lambda2, lambda5 >= 0.
[[nodiscard]] bool check_assumption(const LambdaSet& ls, double l);

/// max(eps1/K_m1, eps2/K_m2); throws CertificationError if not in [0, 1).
[[nodiscard]] double compute_alpha(double eps1, double eps2, double K_m1, double K_m2);

struct Splits {
    double lambda3_star = 0.0;
    double lambda6_star = 0.0;
};

struct DecayRate {
    double mu_m = 0.0;
    double Lambda = 0.0;
};

/// Six-term decay-rate numerator and Lambda = mu_m / (1 + alpha).
/// Throws CertificationError if a split leaves mu3* or mu6* (or the
/// remainders) non-positive.
[[nodiscard]] DecayRate compute_decay_rate(const LambdaSet& ls, const DerivedConstants& d, double l,
                                           double alpha, const Splits& splits);

/// Splits maximizing mu_m, each by golden-section search on its own pair of
/// min-arguments. Requires mu3 > 0 and mu6 > 0.
[[nodiscard]] Splits optimize_splits(const LambdaSet& ls, const DerivedConstants& d, double l);

struct Envelopes {
    double K_E = 0.0;
    double K_w = 0.0;
    double K_wy = 0.0;
    double K_phi = 0.0;
};

[[nodiscard]] Envelopes compute_envelopes(double alpha, const DerivedConstants& d,
                                          const WingParameters& p);

struct SearchConfig {
    /// If set, (eps1, eps2) are held fixed and only r1..r8 are searched.
    std::optional<std::pair<double, double>> fixed_eps;
    int eps_grid = 9;        ///< log-grid points per eps axis in phase 1
    int r_grid = 7;          ///< log-grid points per r axis in phase 1
    int refine_sweeps = 12;  ///< coordinate sweeps in phase 2
    double line_tol = 1e-6;  ///< relative tolerance of each 1-D line search (in log space)
    int seeds = 4;           ///< best grid points refined in phase 2
};

/// Worst normalized margin used as the search objective.
/// Positive iff every strict and non-strict condition of the certificate holds
/// and eps_i lies strictly inside (0, min(eps_i*, K_mi)).
[[nodiscard]] double normalized_margin(const LambdaSet& ls, const DerivedConstants& d,
                                       const WingParameters& p, const MultiplierPoint& pt);

/// Deterministic two-phase search (grid, then smoothed max-min ascent and
/// coordinate polishing from the best grid points) for a point satisfying the certificate
/// conditions. Infeasibility is reported through Certificate::feasible.
[[nodiscard]] Certificate search_feasible(const DerivedConstants& d, const WingParameters& p,
                                          const AeroCoefficients& a, const SearchConfig& cfg = {});

/// Evaluates every constant at a given point. The certificate is feasible iff
/// the point passes all checks; otherwise derived rate/envelopes stay zero.
[[nodiscard]] Certificate evaluate(const DerivedConstants& d, const WingParameters& p,
                                   const AeroCoefficients& a, const MultiplierPoint& pt);

/// Flat `key = value` block, fixed key order, 17 significant digits.
[[nodiscard]] std::string to_text(const Certificate& c);

}  // namespace flexwing::certify
