#include "flexwing/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace flexwing::analysis {

namespace {

struct LineFit {
    double slope = 0.0;
    double r_squared = 1.0;
    int n = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit out;
    out.n = static_cast<int>(x.size());
    if (out.n < 2) return out;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < out.n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= out.n;
    my /= out.n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < out.n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) return out;
    out.slope = sxy / sxx;
    if (syy > 0.0) {
        const double ss_res = std::max(0.0, syy - out.slope * sxy);
        out.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return out;
}

LineFit fit_log(const std::vector<double>& t, const std::vector<double>& E, double t0, double t1) {
    std::vector<double> x, y;
    const double floor = 1e-300 * E.front();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || t[i] > t1) continue;
        if (!(E[i] > floor) || !(E[i] > 0.0)) continue;
        x.push_back(t[i]);
        y.push_back(std::log(E[i]));
    }
    return least_squares(x, y);
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& E,
                   std::optional<std::pair<double, double>> window) {
    if (t.size() != E.size()) throw std::invalid_argument("time and energy series differ in length");
    if (t.size() < 2) throw std::invalid_argument("decay fit needs at least two samples");
    if (!(E.front() > 0.0)) throw std::invalid_argument("decay fit needs E(0) > 0");

    std::pair<double, double> w{t.front(), t.back()};
    if (window) {
        w = *window;
    } else {
        const LineFit coarse = fit_log(t, E, t.front(), t.back());
        const double lambda0 = -coarse.slope;
        if (lambda0 > 0.0) {
            w.first = t.front() + std::min(3.0 / lambda0, 0.5 * (t.back() - t.front()));
        }
    }
    const LineFit f = fit_log(t, E, w.first, w.second);
    DecayFit out;
    out.Lambda_hat = f.slope == 0.0 ? 0.0 : -f.slope;
    out.r_squared = f.r_squared;
    out.window = w;
    out.samples = f.n;
    return out;
}

SpectrumReport closed_loop_spectrum(const fem::DiscreteSystem& sys, const ControllerGains& g,
                                    bool control_enabled) {
    const sim::ClosedLoop cl = sim::close_loop(sys, g, control_enabled);
    const int n = sys.size();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(cl.M);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    A.topRightCorner(n, n).setIdentity();
    A.bottomLeftCorner(n, n) = -lu.solve(cl.K_hat);
    A.bottomRightCorner(n, n) = -lu.solve(cl.C_hat);

    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");

    SpectrumReport r;
    r.eigenvalues.assign(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    r.max_real_part = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front().real();
    return r;
}

SupNorms sup_norms(const fem::DiscreteSystem& sys, const Eigen::VectorXd& u, int samples_per_element) {
    SupNorms s;
    const double h = sys.mesh.h();
    for (int e = 0; e < sys.mesh.n_elem; ++e) {
        Eigen::Vector4d q;
        const int dofs[4] = {sys.dofs.w(e), sys.dofs.slope(e), sys.dofs.w(e + 1), sys.dofs.slope(e + 1)};
        for (int i = 0; i < 4; ++i) q(i) = dofs[i] < 0 ? 0.0 : u(dofs[i]);
        for (int k = 0; k <= samples_per_element; ++k) {
            const fem::HermiteValues hv = fem::hermite(static_cast<double>(k) / samples_per_element, h);
            s.w = std::max(s.w, std::abs(hv.N.dot(q)));
            s.w_y = std::max(s.w_y, std::abs(hv.dN.dot(q)));
        }
    }
    // Linear twist attains its extremes at the nodes.
    for (int i = 1; i <= sys.mesh.n_elem; ++i) s.phi = std::max(s.phi, std::abs(u(sys.dofs.phi(i))));
    return s;
}

EnvelopeReport supnorm_envelope_check(const fem::DiscreteSystem& sys, const sim::Trajectory& traj,
                                      const certify::Certificate& cert, double E0, double rel_tol,
                                      int samples_per_element) {
    EnvelopeReport r;
    const double root = std::sqrt(std::max(E0, 0.0));
    for (const auto& snap : traj.snapshots) {
        const SupNorms s = sup_norms(sys, snap.u, samples_per_element);
        const double decay = std::exp(-0.5 * cert.Lambda * snap.t);
        auto check = [&](double value, double K, int& count, double& worst) {
            const double env = K * root * decay;
            if (value == 0.0) return;
            const double ratio = env > 0.0 ? value / env : std::numeric_limits<double>::infinity();
            worst = std::max(worst, ratio);
            if (value > env * (1.0 + rel_tol)) ++count;
        };
        check(s.w, cert.K_w, r.violations_w, r.worst_ratio_w);
        check(s.w_y, cert.K_wy, r.violations_wy, r.worst_ratio_wy);
        check(s.phi, cert.K_phi, r.violations_phi, r.worst_ratio_phi);
    }
    return r;
}

BoundReport energy_bound_check(const sim::Trajectory& traj, const certify::Certificate& cert, double rel_tol) {
    BoundReport r;
    if (traj.E.empty()) return r;
    const double E0 = traj.E.front();
    for (std::size_t k = 0; k < traj.E.size(); ++k) {
        const double bound = cert.K_E * E0 * std::exp(-cert.Lambda * traj.snapshots[k].t);
        if (traj.E[k] == 0.0) continue;
        const double ratio = bound > 0.0 ? traj.E[k] / bound : std::numeric_limits<double>::infinity();
        r.worst_ratio = std::max(r.worst_ratio, ratio);
        if (traj.E[k] > bound * (1.0 + rel_tol)) ++r.violations;
    }
    return r;
}

BoundReport monotonicity_check(const std::vector<double>& E_aug, double rel_tol) {
    BoundReport r;
    for (std::size_t k = 1; k < E_aug.size(); ++k) {
        const double prev = E_aug[k - 1];
        if (prev <= 0.0) {
            if (E_aug[k] > 0.0) ++r.violations;
            continue;
        }
        r.worst_ratio = std::max(r.worst_ratio, E_aug[k] / prev);
        if (E_aug[k] > prev * (1.0 + rel_tol)) ++r.violations;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Closed-form inverse of A1

std::vector<double> cumulative_simpson(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) {
        if (n == 2) out[1] = 0.5 * h * (v[0] + v[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * v[0] + 8.0 * v[1] - v[2]);
    for (std::size_t i = 2; i < n; ++i) {
        if (i % 2 == 0) {
            out[i] = out[i - 2] + h / 3.0 * (v[i - 2] + 4.0 * v[i - 1] + v[i]);
        } else {
            out[i] = out[i - 3] + 3.0 * h / 8.0 * (v[i - 3] + 3.0 * v[i - 2] + 3.0 * v[i - 1] + v[i]);
        }
    }
    return out;
}

std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int order) {
    const int n = static_cast<int>(nodes.size());
    if (order < 0 || order >= n) throw std::invalid_argument("stencil too small for derivative order");
    // c[j][k]: weight of node j for derivative k.
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][order];
    return w;
}

namespace {

struct A1Fields {
    std::vector<double> y, f, h, q, s;  // q = f + eta_w f~, s = h + eta_phi h~
    std::vector<double> ghat, zhat;
    double zeta_w_hat = 0.0, zeta_phi_hat = 0.0;
    double ft_l = 0.0, ht_l = 0.0;
};

A1Fields a1_fields(const WingParameters& p, const ControllerGains& g, const A1Rhs& rhs, int n) {
    const DerivedConstants d = derive(p);
    const double l = p.l;
    const double dy = l / n;
    A1Fields out;
    out.y.resize(n + 1);
    std::vector<double> ft(n + 1), ht(n + 1);
    out.ghat.resize(n + 1);
    out.zhat.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double y = i == n ? l : i * dy;
        out.y[i] = y;
        ft[i] = rhs.f_t ? rhs.f_t(y) : 0.0;
        ht[i] = rhs.h_t ? rhs.h_t(y) : 0.0;
        const double gt = rhs.g_t ? rhs.g_t(y) : 0.0;
        const double zt = rhs.z_t ? rhs.z_t(y) : 0.0;
        out.ghat[i] = (d.M.a * gt + d.M.b * zt) / p.rho;
        out.zhat[i] = (d.M.b * gt + d.M.c * zt) / p.I_w;
    }
    out.zeta_w_hat = d.M_s.a * rhs.zeta_w + d.M_s.b * rhs.zeta_phi;
    out.zeta_phi_hat = d.M_s.b * rhs.zeta_w + d.M_s.c * rhs.zeta_phi;
    out.ft_l = ft[n];
    out.ht_l = ht[n];

    auto from_right = [](const std::vector<double>& c) {
        std::vector<double> r(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) r[i] = c.back() - c[i];
        return r;
    };
    // F(y) = int_0^y int_0^x1 int_x2^l int_x3^l g^, G(y) = int_0^y int_x1^l z^.
    const std::vector<double> F =
        cumulative_simpson(cumulative_simpson(from_right(cumulative_simpson(from_right(cumulative_simpson(out.ghat, dy)), dy)), dy), dy);
    const std::vector<double> G = cumulative_simpson(from_right(cumulative_simpson(out.zhat, dy)), dy);

    const double cw2 = d.c_w * d.c_w;
    const double cp2 = d.c_phi * d.c_phi;
    const double D1 = p.rho * cw2 + g.eps1 * g.k1 * l * l * l / 3.0;
    const double D2 = p.I_w * cp2 + g.eps2 * g.k2 * l;

    out.f.resize(n + 1);
    out.h.resize(n + 1);
    out.q.resize(n + 1);
    out.s.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double y = out.y[i];
        const double P = y * y * (y - 3.0 * l);
        out.f[i] = -p.eta_w * ft[i] + g.k1 / 6.0 * (1.0 - g.eps1 * p.eta_w) / D1 * P * out.ft_l +
                   P * out.zeta_w_hat / (6.0 * D1) - F[i] / cw2 - g.eps1 * g.k1 / (6.0 * cw2 * D1) * P * F[n];
        out.h[i] = -p.eta_phi * ht[i] - g.k2 * (1.0 - g.eps2 * p.eta_phi) / D2 * y * out.ht_l -
                   y * out.zeta_phi_hat / D2 - G[i] / cp2 + g.k2 * g.eps2 / (cp2 * D2) * y * G[n];
        out.q[i] = out.f[i] + p.eta_w * ft[i];
        out.s[i] = out.h[i] + p.eta_phi * ht[i];
    }
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Derivative of `order` at grid index `at` from `count` nodes stepping by `step` (may be negative).
double one_sided(const std::vector<double>& v, int at, int step, int count, int order, double dy) {
    std::vector<double> nodes(count);
    for (int k = 0; k < count; ++k) nodes[k] = k * step;
    const std::vector<double> w = fornberg_weights(0.0, nodes, order);
    double acc = 0.0;
    for (int k = 0; k < count; ++k) acc += w[k] * v[at + k * step];
    return acc / std::pow(dy, order);
}

// Max discrepancy between a grid and its half-resolution counterpart at shared nodes.
double refinement_gap(const A1Fields& fine, const A1Fields& coarse) {
    const double fs = std::max(max_abs(fine.f), std::numeric_limits<double>::min());
    const double hs = std::max(max_abs(fine.h), std::numeric_limits<double>::min());
    double gap = 0.0;
    for (std::size_t i = 0; i < coarse.f.size(); ++i) {
        gap = std::max(gap, std::abs(fine.f[2 * i] - coarse.f[i]) / fs);
        gap = std::max(gap, std::abs(fine.h[2 * i] - coarse.h[i]) / hs);
    }
    return gap;
}

}  // namespace

double A1Report::worst_residual() const {
    return std::max({interior_residual_w, interior_residual_phi, boundary_residual_w, boundary_residual_phi,
                     clamp_residual, curvature_residual});
}

A1Report a1_inverse_check(const WingParameters& p, const ControllerGains& g, const A1Rhs& rhs, int n_quad,
                          int fd_points) {
    if (n_quad < 100 || n_quad % 4 != 0) throw std::invalid_argument("n_quad must be >= 100 and a multiple of 4");
    if (fd_points < 16) throw std::invalid_argument("fd_points must be >= 16");
    const DerivedConstants d = derive(p);
    const A1Fields a = a1_fields(p, g, rhs, n_quad);

    A1Report r;
    r.n_quad = n_quad;
    r.y = a.y;
    r.f = a.f;
    r.h = a.h;

    const double l = p.l;
    const double dy = l / n_quad;
    const int stride = std::max(1, n_quad / fd_points);
    const double H = stride * dy;
    const double cw2 = d.c_w * d.c_w;
    const double cp2 = d.c_phi * d.c_phi;

    // Interior: centred 11-point stencils on the coarse sub-grid.
    constexpr int half = 5;
    std::vector<double> offs(2 * half + 1);
    for (int k = -half; k <= half; ++k) offs[k + half] = k;
    const std::vector<double> w4 = fornberg_weights(0.0, offs, 4);
    const std::vector<double> w2 = fornberg_weights(0.0, offs, 2);

    const double q_scale = std::max(max_abs(a.ghat), cw2 * max_abs(a.q) / std::pow(l, 4));
    const double s_scale = std::max(max_abs(a.zhat), cp2 * max_abs(a.s) / (l * l));
    double res_w = 0.0, res_phi = 0.0;
    for (int i = half * stride; i + half * stride <= n_quad; i += stride) {
        double d4 = 0.0, d2 = 0.0;
        for (int k = -half; k <= half; ++k) {
            d4 += w4[k + half] * a.q[i + k * stride];
            d2 += w2[k + half] * a.s[i + k * stride];
        }
        d4 /= std::pow(H, 4);
        d2 /= H * H;
        res_w = std::max(res_w, std::abs(-cw2 * d4 - a.ghat[i]));
        res_phi = std::max(res_phi, std::abs(cp2 * d2 - a.zhat[i]));
    }
    r.interior_residual_w = q_scale > 0.0 ? res_w / q_scale : res_w;
    r.interior_residual_phi = s_scale > 0.0 ? res_phi / s_scale : res_phi;

    // Tip balances with one-sided stencils reaching back from y = l.
    constexpr int nb = 10;
    const int n = n_quad;
    const double q3 = one_sided(a.q, n, -stride, nb, 3, dy);
    const double q2 = one_sided(a.q, n, -stride, nb, 2, dy);
    const double s1 = one_sided(a.s, n, -stride, nb, 1, dy);
    {
        const double t1 = p.rho * cw2 * q3;
        const double t2 = g.k1 * a.ft_l;
        const double t3 = g.k1 * g.eps1 * a.f[n];
        // the distributed load's resultant sets the shear scale along the span
        const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(a.zeta_w_hat) +
                             p.rho * l * max_abs(a.ghat);
        const double res = std::abs(t1 - t2 - t3 - a.zeta_w_hat);
        r.boundary_residual_w = scale > 0.0 ? res / scale : res;
    }
    {
        const double t1 = -p.I_w * cp2 * s1;
        const double t2 = g.k2 * a.ht_l;
        const double t3 = g.k2 * g.eps2 * a.h[n];
        const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(a.zeta_phi_hat) +
                             p.I_w * l * max_abs(a.zhat);
        const double res = std::abs(t1 - t2 - t3 - a.zeta_phi_hat);
        r.boundary_residual_phi = scale > 0.0 ? res / scale : res;
    }

    const double fs = max_abs(a.f);
    const double hs = max_abs(a.h);
    const double qs = max_abs(a.q);
    const double f1 = one_sided(a.f, 0, stride, nb, 1, dy);
    r.clamp_residual = std::max({fs > 0.0 ? std::abs(a.f[0]) / fs : std::abs(a.f[0]),
                                 fs > 0.0 ? std::abs(f1) * l / fs : std::abs(f1),
                                 hs > 0.0 ? std::abs(a.h[0]) / hs : std::abs(a.h[0])});
    r.curvature_residual = qs > 0.0 ? std::abs(q2) * l * l / qs : std::abs(q2);

    const A1Fields half_grid = a1_fields(p, g, rhs, n_quad / 2);
    const A1Fields quarter_grid = a1_fields(p, g, rhs, n_quad / 4);
    const double d1 = refinement_gap(a, half_grid);
    const double d2 = refinement_gap(half_grid, quarter_grid);
    r.refinement_residual = d1;
    if (d1 <= 1e-13) {
        r.observed_order = std::numeric_limits<double>::infinity();
    } else {
        r.observed_order = std::log2(d2 / d1);
    }
    r.under_resolved = d1 > 1e-6;
    return r;
}

}  // namespace flexwing::analysis
