#include "flexwing/certify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "flexwing/numfmt.hpp"

namespace flexwing::certify {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;
constexpr double pi4 = pi2 * pi2;
constexpr double inf = std::numeric_limits<double>::infinity();

// a / (b * |x_c|), with the x_c = 0 case mapped to +inf.
double over_abs_xc(double num, double den, double x_c) {
    const double ax = std::abs(x_c);
    return ax == 0.0 ? inf : num / (den * ax);
}

// Golden-section maximization of a unimodal function on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    const double scale = std::max(std::abs(a), std::abs(b));
    for (int it = 0; it < 400 && (b - a) > rel_tol * scale; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

struct Scales {
    double eps1_bar, eps2_bar;
    double s3, s6, s_mu3, s_mu6;
};

Scales make_scales(const DerivedConstants& d, const WingParameters& p) {
    const auto [km1, km2] = compute_km(d, p);
    const auto [e1s, e2s] = compute_eps_star(d, p);
    Scales s{};
    s.eps1_bar = std::min(e1s, km1);
    s.eps2_bar = std::min(e2s, km2);
    // Suprema over admissible multipliers of the aero-free quantities.
    s.s3 = p.rho * p.eta_w * d.c_w * d.c_w;
    s.s6 = p.I_w * p.eta_phi * d.c_phi * d.c_phi;
    s.s_mu3 = pi4 * s.s3 / (16.0 * std::pow(p.l, 4));
    s.s_mu6 = pi2 * s.s6 / (4.0 * p.l * p.l);
    return s;
}

// Normalized terms whose minimum is the search objective. The non-strict
// lambda2, lambda5 conditions only count once violated: `steep` is the
// weight given to their positive side (+inf for the exact margin).
std::array<double, 10> margin_terms(const Scales& s, const LambdaSet& ls, const MultiplierPoint& pt,
                                    double steep) {
    auto one_sided = [steep](double x) { return x < 0.0 ? x : (std::isinf(steep) ? inf : steep * x); };
    std::array<double, 10> t = {ls.lambda1 / s.eps1_bar,        ls.lambda3 / s.s3,
                                ls.lambda4 / s.eps2_bar,        ls.lambda6 / s.s6,
                                ls.mu3 / s.s_mu3,               ls.mu6 / s.s_mu6,
                                1.0 - pt.eps1 / s.eps1_bar,     1.0 - pt.eps2 / s.eps2_bar,
                                one_sided(ls.lambda2 / s.s_mu3), one_sided(ls.lambda5 / s.s_mu6)};
    if (!(pt.eps1 > 0.0) || !(pt.eps2 > 0.0)) t.fill(-inf);
    for (double& v : t) {
        if (std::isnan(v)) v = -inf;
    }
    return t;
}

double margin_with(const Scales& s, const LambdaSet& ls, const MultiplierPoint& pt) {
    const auto t = margin_terms(s, ls, pt, inf);
    return *std::min_element(t.begin(), t.end());
}

// -tau log sum exp(-t_i / tau): a smooth lower bound of min t_i.
double soft_min(const std::array<double, 10>& t, double tau) {
    const double m = *std::min_element(t.begin(), t.end());
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double v : t) acc += std::exp(-(v - m) / tau);
    return m - tau * std::log(acc);
}

}  // namespace

bool MultiplierPoint::positive() const {
    if (!(eps1 > 0.0) || !(eps2 > 0.0)) return false;
    return std::all_of(r.begin(), r.end(), [](double v) { return v > 0.0; });
}

std::pair<double, double> compute_km(const DerivedConstants& d, const WingParameters& p) {
    const double l = p.l;
    const double ax = std::abs(p.x_c);
    const double cw = d.c_w;
    const double cp = d.c_phi;
    const double sq_rho = std::sqrt(p.rho);
    const double sq_Iw = std::sqrt(p.I_w);

    const double k1_a = pi4 * p.rho * cw * cw /
                        (4.0 * l * l * l * (1.0 + ax) * (4.0 * l * std::pow(p.rho, 1.5) * cw + pi2 * p.m_s));
    const double k1_b = cw * d.lam_min_M / (2.0 * sq_rho);
    const double k1_c = over_abs_xc(cw * d.lam_min_M, 2.0 * sq_rho, p.x_c);
    const double k1_d = d.lam_min_Ms / (2.0 * p.m_s);
    const double k1_e = over_abs_xc(d.lam_min_Ms, 2.0 * p.m_s, p.x_c);

    const double k2_a = pi2 * p.I_w * cp * cp /
                        (4.0 * l * l * (d.I_w_star + p.rho * ax) * sq_Iw * cp +
                         pi2 * l * (d.J_s_star + p.m_s * ax));
    const double k2_b = over_abs_xc(sq_Iw * cp * d.lam_min_M, 2.0 * p.rho, p.x_c);
    const double k2_c = sq_Iw * cp * d.lam_min_M / (2.0 * d.I_w_star);
    const double k2_d = over_abs_xc(d.lam_min_Ms, 2.0 * p.m_s, p.x_c);
    const double k2_e = d.lam_min_Ms / (2.0 * d.J_s_star);

    return {std::min({k1_a, k1_b, k1_c, k1_d, k1_e}), std::min({k2_a, k2_b, k2_c, k2_d, k2_e})};
}

std::pair<double, double> compute_eps_star(const DerivedConstants& d, const WingParameters& p) {
    const double l = p.l;
    const double l2 = l * l;
    const double l3 = l2 * l;
    const double l4 = l3 * l;
    const double ax = std::abs(p.x_c);
    const double cw2 = d.c_w * d.c_w;
    const double cp2 = d.c_phi * d.c_phi;

    const double e1_a = over_abs_xc(pi2 * p.I_w * p.eta_phi * cp2,
                                    l * (4.0 * l * p.rho + pi2 * p.m_s), p.x_c);
    const double e1_b = 2.0 * pi4 * p.rho * p.eta_w * cw2 /
                        (32.0 * l4 * (2.0 + ax) * p.rho + 8.0 * pi2 * l3 * (2.0 + ax) * p.m_s +
                         pi4 * p.rho * p.eta_w * p.eta_w * cw2);

    const double e2_a = over_abs_xc(pi4 * p.rho * p.eta_w * cw2,
                                    4.0 * l3 * (4.0 * l * p.rho + pi2 * p.m_s), p.x_c);
    const double e2_b = 2.0 * pi2 * p.I_w * p.eta_phi * cp2 /
                        (8.0 * l2 * (2.0 * d.I_w_star + ax * p.rho) +
                         2.0 * pi2 * l * (2.0 * d.J_s_star + ax * p.m_s) +
                         pi2 * p.I_w * p.eta_phi * p.eta_phi * cp2);

    return {std::min(e1_a, e1_b), std::min(e2_a, e2_b)};
}

LambdaSet compute_lambdas(const DerivedConstants& d, const WingParameters& p,
                          const AeroCoefficients& a, const MultiplierPoint& pt) {
    const double l = p.l;
    const double l2 = l * l;
    const double l3 = l2 * l;
    const double l4 = l3 * l;
    const double ax = std::abs(p.x_c);
    const double cw2 = d.c_w * d.c_w;
    const double cp2 = d.c_phi * d.c_phi;
    const double e1 = pt.eps1;
    const double e2 = pt.eps2;
    const auto& r = pt.r;

    LambdaSet s;
    s.lambda1 = e1 * (1.0 - p.eta_w / (2.0 * r[0]) -
                      8.0 * l4 / (pi4 * p.rho * cw2) *
                          (a.alpha_w / r[3] + a.beta_w / r[4] + a.gamma_w / r[2]));
    s.lambda2 = a.gamma_w + (a.alpha_w + e2 * a.gamma_phi) / (2.0 * r[5]) +
                e1 * a.gamma_w * r[2] / 2.0 + (a.beta_w + a.gamma_phi) / (2.0 * r[6]);
    s.nu1 = p.eta_w * cw2 - e2 * (2.0 * l3 * ax / pi2) * (4.0 * l / pi2 + p.m_s / p.rho) -
            e1 * (8.0 * l4 * (2.0 + ax) / pi4 + p.eta_w * cw2 * r[0] / 2.0 +
                  2.0 * l3 * (2.0 + ax) * p.m_s / (pi2 * p.rho));
    s.lambda3 = p.rho * s.nu1;
    s.lambda4 = e2 * (1.0 - p.eta_phi / (2.0 * r[1])) -
                4.0 * l2 / (pi2 * p.I_w * cp2) *
                    ((a.alpha_w + e2 * a.gamma_phi) * r[5] / 2.0 +
                     (a.alpha_phi + e2 * a.beta_phi) / (2.0 * r[7]) + e1 * a.alpha_w * r[3] / 2.0 +
                     e2 * a.alpha_phi);
    s.lambda5 = a.beta_phi + (a.beta_w + a.gamma_phi) * r[6] / 2.0 +
                (a.alpha_phi + e2 * a.beta_phi) * r[7] / 2.0 + e1 * a.beta_w * r[4] / 2.0;
    s.nu2 = p.eta_phi * cp2 - e1 * (l * ax / p.I_w) * (2.0 * l * p.rho / pi2 + p.m_s / 2.0) -
            e2 * (2.0 * l2 * (2.0 * d.I_w_star + ax * p.rho) / (pi2 * p.I_w) +
                  p.eta_phi * cp2 * r[1] / 2.0 +
                  l * (2.0 * d.J_s_star + ax * p.m_s) / (2.0 * p.I_w));
    s.lambda6 = p.I_w * s.nu2;
    s.mu3 = pi4 * s.lambda3 / (16.0 * l4) - s.lambda2;
    s.mu6 = pi2 * s.lambda6 / (4.0 * l2) - s.lambda5;
    return s;
}

bool check_assumption(const LambdaSet& ls, double l) {
    const double mu3 = pi4 * ls.lambda3 / (16.0 * std::pow(l, 4)) - ls.lambda2;
    const double mu6 = pi2 * ls.lambda6 / (4.0 * l * l) - ls.lambda5;
    return ls.lambda1 > 0.0 && ls.lambda3 > 0.0 && ls.lambda4 > 0.0 && ls.lambda6 > 0.0 &&
           mu3 > 0.0 && mu6 > 0.0 && ls.lambda2 >= 0.0 && ls.lambda5 >= 0.0;
}

double compute_alpha(double eps1, double eps2, double K_m1, double K_m2) {
    const double alpha = std::max(eps1 / K_m1, eps2 / K_m2);
    if (!(alpha >= 0.0) || !(alpha < 1.0)) {
        throw CertificationError("eps not strictly admissible: alpha = " + format_shortest(alpha));
    }
    return alpha;
}

namespace {

struct SplitTerms {
    // min-arguments driven by one split: increasing (mu*-term) and decreasing (remainder).
    std::function<double(double)> rising;
    std::function<double(double)> falling;
    double lo, hi;
};

SplitTerms lambda3_terms(const LambdaSet& ls, const DerivedConstants& d, double l) {
    const double l4 = std::pow(l, 4);
    SplitTerms t;
    t.rising = [=](double x) { return (pi4 * x / (16.0 * l4) - ls.lambda2) / d.lam_max_M; };
    t.falling = [=](double x) { return pi2 * (ls.lambda3 - x) / (4.0 * l * l * l * d.lam_max_Ms); };
    t.lo = std::max(0.0, 16.0 * l4 * ls.lambda2 / pi4);
    t.hi = ls.lambda3;
    return t;
}

SplitTerms lambda6_terms(const LambdaSet& ls, const DerivedConstants& d, double l) {
    SplitTerms t;
    t.rising = [=](double x) { return (pi2 * x / (4.0 * l * l) - ls.lambda5) / d.lam_max_M; };
    t.falling = [=](double x) { return (ls.lambda6 - x) / (l * d.lam_max_Ms); };
    t.lo = std::max(0.0, 4.0 * l * l * ls.lambda5 / pi2);
    t.hi = ls.lambda6;
    return t;
}

}  // namespace

DecayRate compute_decay_rate(const LambdaSet& ls, const DerivedConstants& d, double l, double alpha,
                             const Splits& splits) {
    const auto t3 = lambda3_terms(ls, d, l);
    const auto t6 = lambda6_terms(ls, d, l);
    const double a3 = t3.rising(splits.lambda3_star);
    const double b3 = t3.falling(splits.lambda3_star);
    const double a6 = t6.rising(splits.lambda6_star);
    const double b6 = t6.falling(splits.lambda6_star);
    if (!(splits.lambda3_star > 0.0) || !(a3 > 0.0) || !(b3 > 0.0)) {
        throw CertificationError("invalid lambda3 split");
    }
    if (!(splits.lambda6_star > 0.0) || !(a6 > 0.0) || !(b6 > 0.0)) {
        throw CertificationError("invalid lambda6 split");
    }
    DecayRate r;
    r.mu_m = 2.0 * std::min({ls.lambda1, ls.lambda4, a3, a6, b3, b6});
    r.Lambda = r.mu_m / (1.0 + alpha);
    return r;
}

Splits optimize_splits(const LambdaSet& ls, const DerivedConstants& d, double l) {
    if (!(ls.mu3 > 0.0) || !(ls.mu6 > 0.0) || !(ls.lambda3 > 0.0) || !(ls.lambda6 > 0.0)) {
        throw CertificationError("no admissible split: mu3 or mu6 not positive");
    }
    auto solve = [](const SplitTerms& t) {
        auto obj = [&](double x) { return std::min(t.rising(x), t.falling(x)); };
        return golden_max(obj, t.lo, t.hi, 1e-10);
    };
    return {solve(lambda3_terms(ls, d, l)), solve(lambda6_terms(ls, d, l))};
}

Envelopes compute_envelopes(double alpha, const DerivedConstants& d, const WingParameters& p) {
    if (!(alpha >= 0.0) || !(alpha < 1.0)) {
        throw CertificationError("alpha must lie in [0, 1)");
    }
    Envelopes e;
    e.K_E = (1.0 + alpha) / (1.0 - alpha);
    const double l = p.l;
    e.K_phi = 2.0 / d.c_phi * std::sqrt(2.0 * l / (pi * p.I_w) * e.K_E);
    // Agmon then Poincare twice (f(0) = f'(0) = 0): ||f||_inf^2 <= 16 l^3/pi^3 ||f''||^2.
    e.K_w = 4.0 / d.c_w * std::sqrt(2.0 * l * l * l / (pi * pi2 * p.rho) * e.K_E);
    // Agmon then Poincare once on f' (f'(0) = 0): ||f'||_inf^2 <= 4 l/pi ||f''||^2.
    e.K_wy = 2.0 / d.c_w * std::sqrt(2.0 * l / (pi * p.rho) * e.K_E);
    return e;
}

double normalized_margin(const LambdaSet& ls, const DerivedConstants& d, const WingParameters& p,
                         const MultiplierPoint& pt) {
    return margin_with(make_scales(d, p), ls, pt);
}

Certificate evaluate(const DerivedConstants& d, const WingParameters& p, const AeroCoefficients& a,
                     const MultiplierPoint& pt) {
    Certificate c;
    std::tie(c.K_m1, c.K_m2) = compute_km(d, p);
    std::tie(c.eps1_star, c.eps2_star) = compute_eps_star(d, p);
    c.point = pt;
    c.lambdas = compute_lambdas(d, p, a, pt);
    c.margin = normalized_margin(c.lambdas, d, p, pt);
    c.negative_aero = a.alpha_w < 0 || a.beta_w < 0 || a.gamma_w < 0 || a.alpha_phi < 0 ||
                      a.beta_phi < 0 || a.gamma_phi < 0;

    const bool eps_ok = pt.eps1 > 0.0 && pt.eps1 < std::min(c.eps1_star, c.K_m1) &&
                        pt.eps2 > 0.0 && pt.eps2 < std::min(c.eps2_star, c.K_m2);
    c.feasible = pt.positive() && eps_ok && check_assumption(c.lambdas, p.l);
    if (!c.feasible) return c;

    c.alpha = compute_alpha(pt.eps1, pt.eps2, c.K_m1, c.K_m2);
    const Splits s = optimize_splits(c.lambdas, d, p.l);
    c.lambda3_split = s.lambda3_star;
    c.lambda6_split = s.lambda6_star;
    const DecayRate rate = compute_decay_rate(c.lambdas, d, p.l, c.alpha, s);
    c.mu_m = rate.mu_m;
    c.Lambda = rate.Lambda;
    const Envelopes env = compute_envelopes(c.alpha, d, p);
    c.K_E = env.K_E;
    c.K_w = env.K_w;
    c.K_wy = env.K_wy;
    c.K_phi = env.K_phi;
    return c;
}

namespace {

// Search coordinates: x[0], x[1] = log eps1, log eps2; x[2..9] = log r1..r8.
using Coords = std::array<double, 10>;

MultiplierPoint to_point(const Coords& x) {
    MultiplierPoint pt;
    pt.eps1 = std::exp(x[0]);
    pt.eps2 = std::exp(x[1]);
    for (int k = 0; k < 8; ++k) pt.r[k] = std::exp(x[2 + k]);
    return pt;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    if (n <= 1) {
        g.push_back(0.5 * (lo + hi));
        return g;
    }
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
    return g;
}

}  // namespace

Certificate search_feasible(const DerivedConstants& d, const WingParameters& p,
                            const AeroCoefficients& a, const SearchConfig& cfg) {
    const Scales sc = make_scales(d, p);
    auto terms = [&](const Coords& x, double steep) {
        const auto pt = to_point(x);
        return margin_terms(sc, compute_lambdas(d, p, a, pt), pt, steep);
    };
    auto objective = [&](const Coords& x) {
        const auto t = terms(x, inf);
        return *std::min_element(t.begin(), t.end());
    };

    // Admissible log-ranges.
    const double eps_hi1 = std::log(sc.eps1_bar * (1.0 - 1e-9));
    const double eps_hi2 = std::log(sc.eps2_bar * (1.0 - 1e-9));
    const bool fixed = cfg.fixed_eps.has_value();

    Coords lo{}, hi{};
    lo[0] = eps_hi1 + std::log(1e-8);
    hi[0] = eps_hi1;
    lo[1] = eps_hi2 + std::log(1e-8);
    hi[1] = eps_hi2;
    lo[2] = std::log(p.eta_w / 2.0);
    hi[2] = lo[2] + std::log(1e12);
    lo[3] = std::log(p.eta_phi / 2.0);
    hi[3] = lo[3] + std::log(1e12);
    for (int k = 4; k < 10; ++k) {
        lo[k] = std::log(1e-12);
        hi[k] = std::log(1e12);
    }

    // Phase 1: log grid over eps and r1, r2 with r3..r8 at unity.
    std::vector<double> g1, g2;
    if (fixed) {
        g1 = {std::log(cfg.fixed_eps->first)};
        g2 = {std::log(cfg.fixed_eps->second)};
    } else {
        g1 = log_grid(eps_hi1 + std::log(1e-5), eps_hi1 + std::log(0.9), cfg.eps_grid);
        g2 = log_grid(eps_hi2 + std::log(1e-5), eps_hi2 + std::log(0.9), cfg.eps_grid);
    }
    const auto gr1 = log_grid(lo[2] + std::log(1.05), lo[2] + std::log(1e6), cfg.r_grid);
    const auto gr2 = log_grid(lo[3] + std::log(1.05), lo[3] + std::log(1e6), cfg.r_grid);

    std::vector<std::pair<double, Coords>> grid;
    for (double e1 : g1) {
        for (double e2 : g2) {
            for (double r1 : gr1) {
                for (double r2 : gr2) {
                    Coords t{};
                    t[0] = e1;
                    t[1] = e2;
                    t[2] = r1;
                    t[3] = r2;
                    grid.emplace_back(objective(t), t);
                }
            }
        }
    }
    // Stable sort keeps grid order among ties.
    std::stable_sort(grid.begin(), grid.end(), [](const auto& u, const auto& v) { return u.first > v.first; });

    const int first = fixed ? 2 : 0;
    const int dim = 10 - first;
    // Fixed eps stay where the caller put them, admissible or not.
    auto clamp_box = [&](Coords& x) {
        for (int k = first; k < 10; ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
    };

    // Phase 2a: soft-min continuation, BFGS ascent with central-difference gradients.
    auto smooth_ascent = [&](Coords x) {
        for (double tau : {0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4}) {
            auto F = [&](const Coords& y) { return soft_min(terms(y, 1e3), tau); };
            auto grad = [&](const Coords& y) {
                Eigen::VectorXd gvec(dim);
                for (int k = 0; k < dim; ++k) {
                    Coords yp = y, ym = y;
                    const double h = 1e-6;
                    yp[first + k] += h;
                    ym[first + k] -= h;
                    gvec(k) = (F(yp) - F(ym)) / (2.0 * h);
                }
                return gvec;
            };
            double fx = F(x);
            if (!std::isfinite(fx)) break;
            Eigen::VectorXd gx = grad(x);
            Eigen::MatrixXd H = Eigen::MatrixXd::Identity(dim, dim);
            for (int it = 0; it < 200; ++it) {
                if (!gx.allFinite() || gx.norm() < 1e-12) break;
                Eigen::VectorXd dir = H * gx;
                if (dir.dot(gx) <= 0.0) {
                    H.setIdentity();
                    dir = gx;
                }
                // Cap the step at a factor e^2 change of any multiplier.
                const double cap = 2.0 / std::max(dir.cwiseAbs().maxCoeff(), 1e-300);
                double step = std::min(1.0, cap);
                Coords xn{};
                double fn = -inf;
                bool moved = false;
                for (int ls = 0; ls < 50; ++ls, step *= 0.5) {
                    xn = x;
                    for (int k = 0; k < dim; ++k) xn[first + k] += step * dir(k);
                    clamp_box(xn);
                    fn = F(xn);
                    if (std::isfinite(fn) && fn >= fx + 1e-4 * step * dir.dot(gx)) {
                        moved = true;
                        break;
                    }
                }
                if (!moved) break;
                const Eigen::VectorXd gn = grad(xn);
                Eigen::VectorXd sk(dim);
                for (int k = 0; k < dim; ++k) sk(k) = xn[first + k] - x[first + k];
                // Ascent on F is descent on -F, whose gradient change is -(gn - gx).
                const Eigen::VectorXd yk = gx - gn;
                const double sy = sk.dot(yk);
                if (sy > 1e-12 * sk.norm() * yk.norm()) {
                    const double rho_k = 1.0 / sy;
                    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
                    H = (I - rho_k * sk * yk.transpose()) * H * (I - rho_k * yk * sk.transpose()) +
                        rho_k * sk * sk.transpose();
                }
                const double gain = fn - fx;
                x = xn;
                fx = fn;
                gx = gn;
                if (gain <= 1e-14 * std::max(1.0, std::abs(fx))) break;
            }
        }
        return x;
    };

    // Phase 2b: coordinate-wise golden-section refinement with pattern moves on the exact margin.
    auto line_search = [&](Coords& cur, double& fcur, const Coords& dir, double tmin, double tmax) {
        auto f = [&](double t) {
            Coords y = cur;
            for (int k = 0; k < 10; ++k) y[k] += t * dir[k];
            return objective(y);
        };
        const double t = golden_max(f, tmin, tmax, cfg.line_tol);
        const double ft = f(t);
        if (ft > fcur) {
            for (int k = 0; k < 10; ++k) cur[k] += t * dir[k];
            fcur = ft;
            return true;
        }
        return false;
    };
    auto polish = [&](Coords& x, double& fx) {
        for (int sweep = 0; sweep < cfg.refine_sweeps; ++sweep) {
            const Coords start = x;
            const double f_start = fx;
            for (int k = first; k < 10; ++k) {
                Coords dir{};
                dir[k] = 1.0;
                line_search(x, fx, dir, lo[k] - x[k], hi[k] - x[k]);
            }
            Coords dir{};
            double norm = 0.0;
            for (int k = 0; k < 10; ++k) {
                dir[k] = x[k] - start[k];
                norm += dir[k] * dir[k];
            }
            if (norm > 0.0) {
                // Largest step along dir that stays inside the box.
                double tmax = 4.0;
                for (int k = 0; k < 10; ++k) {
                    if (dir[k] > 0) tmax = std::min(tmax, (hi[k] - x[k]) / dir[k]);
                    if (dir[k] < 0) tmax = std::min(tmax, (lo[k] - x[k]) / dir[k]);
                }
                if (tmax > 0) line_search(x, fx, dir, 0.0, tmax);
            }
            if (fx - f_start <= 1e-12 * std::max(1.0, std::abs(fx))) break;
        }
    };

    double best = grid.front().first;
    Coords best_x = grid.front().second;
    const int seeds = std::min<int>(cfg.seeds, static_cast<int>(grid.size()));
    for (int s = 0; s < seeds; ++s) {
        Coords x = smooth_ascent(grid[s].second);
        double fx = objective(x);
        if (grid[s].first > fx) {
            x = grid[s].second;
            fx = grid[s].first;
        }
        polish(x, fx);
        if (fx > best) {
            best = fx;
            best_x = x;
        }
    }

    MultiplierPoint pt = to_point(best_x);
    if (fixed) std::tie(pt.eps1, pt.eps2) = *cfg.fixed_eps;
    Certificate c = evaluate(d, p, a, pt);
    return c;
}

std::string to_text(const Certificate& c) {
    std::string out;
    auto put = [&](const char* key, double v) {
        out += key;
        out += " = ";
        out += format_fixed17(v);
        out += '\n';
    };
    out += "feasible = ";
    out += c.feasible ? "true" : "false";
    out += '\n';
    put("margin", c.margin);
    put("K_m1", c.K_m1);
    put("K_m2", c.K_m2);
    put("eps1_star", c.eps1_star);
    put("eps2_star", c.eps2_star);
    put("eps1", c.point.eps1);
    put("eps2", c.point.eps2);
    for (int k = 0; k < 8; ++k) {
        const std::string key = "r" + std::to_string(k + 1);
        put(key.c_str(), c.point.r[k]);
    }
    put("lambda1", c.lambdas.lambda1);
    put("lambda2", c.lambdas.lambda2);
    put("lambda3", c.lambdas.lambda3);
    put("lambda4", c.lambdas.lambda4);
    put("lambda5", c.lambdas.lambda5);
    put("lambda6", c.lambdas.lambda6);
    put("mu3", c.lambdas.mu3);
    put("mu6", c.lambdas.mu6);
    put("nu1", c.lambdas.nu1);
    put("nu2", c.lambdas.nu2);
    put("alpha", c.alpha);
    put("lambda3_split", c.lambda3_split);
    put("lambda6_split", c.lambda6_split);
    put("mu_m", c.mu_m);
    put("Lambda", c.Lambda);
    put("K_E", c.K_E);
    put("K_w", c.K_w);
    put("K_wy", c.K_wy);
    put("K_phi", c.K_phi);
    out += "negative_aero = ";
    out += c.negative_aero ? "true" : "false";
    out += '\n';
    return out;
}

}  // namespace flexwing::certify
