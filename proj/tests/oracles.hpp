#pragma once

// Reference values written out a second time, straight from the formulas,
// without sharing any code with the library. Each function takes plain
// doubles so the tests can feed it random draws.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double PI = std::numbers::pi;
inline constexpr double INF = std::numeric_limits<double>::infinity();

struct Wing {
    double l, rho, Iw, EI, GJ, eta_w, eta_phi, xc, ms, Js;
};

struct Aero {
    double aw, bw, gw, ap, bp, gp;
};

struct Point {
    double e1, e2;
    double r[9];  // 1-based, r[0] unused
};

struct Mats {
    double cw, cp, Iws, Jss;
    double lm_M, lM_M, lm_Ms, lM_Ms;
};

// Smallest / largest eigenvalue of [[a, b], [b, c]].
inline void eig2(double a, double b, double c, double& lo, double& hi) {
    const double half_tr = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    hi = half_tr + rad;
    lo = (a * c - b * b) / hi;
}

inline Mats mats(const Wing& w) {
    Mats m{};
    m.cw = std::sqrt(w.EI / w.rho);
    m.cp = std::sqrt(w.GJ / w.Iw);
    m.Iws = w.Iw + w.rho * w.xc * w.xc;
    m.Jss = w.Js + w.ms * w.xc * w.xc;
    eig2(w.rho, w.rho * w.xc, m.Iws, m.lm_M, m.lM_M);
    eig2(w.ms, w.ms * w.xc, m.Jss, m.lm_Ms, m.lM_Ms);
    return m;
}

// t / |x_c| with +inf for a centred section
inline double div_xc(double t, double xc) { return xc == 0.0 ? INF : t / std::fabs(xc); }

inline double min5(double a, double b, double c, double d, double e) {
    return std::min(std::min(std::min(a, b), std::min(c, d)), e);
}

inline double Km1(const Wing& w) {
    const Mats m = mats(w);
    const double X = std::fabs(w.xc);
    const double t1 = std::pow(PI, 4) * w.rho * m.cw * m.cw /
                      (4 * std::pow(w.l, 3) * (1 + X) * (4 * w.l * w.rho * std::sqrt(w.rho) * m.cw + PI * PI * w.ms));
    const double t2 = m.cw * m.lm_M / (2 * std::sqrt(w.rho));
    const double t4 = m.lm_Ms / (2 * w.ms);
    return min5(t1, t2, div_xc(t2, w.xc), t4, div_xc(t4, w.xc));
}

inline double Km2(const Wing& w) {
    const Mats m = mats(w);
    const double X = std::fabs(w.xc);
    const double sI = std::sqrt(w.Iw);
    const double t1 = PI * PI * w.Iw * m.cp * m.cp /
                      (4 * w.l * w.l * (m.Iws + w.rho * X) * sI * m.cp + PI * PI * w.l * (m.Jss + w.ms * X));
    const double t2 = div_xc(sI * m.cp * m.lm_M / (2 * w.rho), w.xc);
    const double t3 = sI * m.cp * m.lm_M / (2 * m.Iws);
    const double t4 = div_xc(m.lm_Ms / (2 * w.ms), w.xc);
    const double t5 = m.lm_Ms / (2 * m.Jss);
    return min5(t1, t2, t3, t4, t5);
}

inline double eps1_star(const Wing& w) {
    const Mats m = mats(w);
    const double X = std::fabs(w.xc);
    const double A = w.eta_w * m.cw * m.cw;
    const double first = div_xc(PI * PI * w.Iw * w.eta_phi * m.cp * m.cp / (w.l * (4 * w.l * w.rho + PI * PI * w.ms)), w.xc);
    const double second = 2 * std::pow(PI, 4) * w.rho * A /
                          (32 * std::pow(w.l, 4) * (2 + X) * w.rho + 8 * PI * PI * std::pow(w.l, 3) * (2 + X) * w.ms +
                           std::pow(PI, 4) * w.rho * w.eta_w * A);
    return std::min(first, second);
}

inline double eps2_star(const Wing& w) {
    const Mats m = mats(w);
    const double X = std::fabs(w.xc);
    const double B = w.eta_phi * m.cp * m.cp;
    const double first =
        div_xc(std::pow(PI, 4) * w.rho * w.eta_w * m.cw * m.cw / (4 * std::pow(w.l, 3) * (4 * w.l * w.rho + PI * PI * w.ms)), w.xc);
    const double second = 2 * PI * PI * w.Iw * B /
                          (8 * w.l * w.l * (2 * m.Iws + X * w.rho) + 2 * PI * PI * w.l * (2 * m.Jss + X * w.ms) +
                           PI * PI * w.Iw * w.eta_phi * B);
    return std::min(first, second);
}

struct Lambdas {
    double l1, l2, l3, l4, l5, l6, mu3, mu6, nu1, nu2;
    // Sum of absolute term sizes behind each signed quantity, used to judge
    // rounding when the terms nearly cancel.
    double s1, s3, s4, s6, smu3, smu6;
};

inline Lambdas lambdas(const Wing& w, const Aero& a, const Point& p) {
    const Mats m = mats(w);
    const double X = std::fabs(w.xc);
    const double l = w.l;
    const double* r = p.r;
    Lambdas L{};

    const double c1 = 8 * std::pow(l, 4) / (std::pow(PI, 4) * w.rho * m.cw * m.cw);
    const double aero1 = a.aw / r[4] + a.bw / r[5] + a.gw / r[3];
    L.l1 = p.e1 * (1 - w.eta_w / (2 * r[1]) - c1 * aero1);
    L.s1 = p.e1 * (1 + w.eta_w / (2 * r[1]) + c1 * (std::fabs(a.aw / r[4]) + std::fabs(a.bw / r[5]) + std::fabs(a.gw / r[3])));

    L.l2 = a.gw + (a.aw + p.e2 * a.gp) / (2 * r[6]) + p.e1 * a.gw * r[3] / 2 + (a.bw + a.gp) / (2 * r[7]);

    const double n1_a = w.eta_w * m.cw * m.cw;
    const double n1_b = p.e2 * (2 * std::pow(l, 3) * X / (PI * PI)) * (4 * l / (PI * PI) + w.ms / w.rho);
    const double n1_c = p.e1 * (8 * std::pow(l, 4) * (2 + X) / std::pow(PI, 4) + n1_a * r[1] / 2 +
                                2 * std::pow(l, 3) * (2 + X) * w.ms / (PI * PI * w.rho));
    L.nu1 = n1_a - n1_b - n1_c;
    L.l3 = w.rho * (n1_a - n1_b - n1_c);
    L.s3 = w.rho * (n1_a + n1_b + n1_c);

    const double c4 = 4 * l * l / (PI * PI * w.Iw * m.cp * m.cp);
    const double br4 = (a.aw + p.e2 * a.gp) * r[6] / 2 + (a.ap + p.e2 * a.bp) / (2 * r[8]) + p.e1 * a.aw * r[4] / 2 +
                       p.e2 * a.ap;
    const double br4_abs = std::fabs((a.aw + p.e2 * a.gp) * r[6] / 2) + std::fabs((a.ap + p.e2 * a.bp) / (2 * r[8])) +
                           std::fabs(p.e1 * a.aw * r[4] / 2) + std::fabs(p.e2 * a.ap);
    L.l4 = p.e2 * (1 - w.eta_phi / (2 * r[2])) - c4 * br4;
    L.s4 = p.e2 * (1 + w.eta_phi / (2 * r[2])) + c4 * br4_abs;

    L.l5 = a.bp + (a.bw + a.gp) * r[7] / 2 + (a.ap + p.e2 * a.bp) * r[8] / 2 + p.e1 * a.bw * r[5] / 2;

    const double n2_a = w.eta_phi * m.cp * m.cp;
    const double n2_b = p.e1 * (l * X / w.Iw) * (2 * l * w.rho / (PI * PI) + w.ms / 2);
    const double n2_c = p.e2 * (2 * l * l * (2 * m.Iws + X * w.rho) / (PI * PI * w.Iw) + n2_a * r[2] / 2 +
                                l * (2 * m.Jss + X * w.ms) / (2 * w.Iw));
    L.nu2 = n2_a - n2_b - n2_c;
    L.l6 = w.Iw * (n2_a - n2_b - n2_c);
    L.s6 = w.Iw * (n2_a + n2_b + n2_c);

    const double f3 = std::pow(PI, 4) / (16 * std::pow(l, 4));
    const double f6 = PI * PI / (4 * l * l);
    L.mu3 = f3 * L.l3 - L.l2;
    L.mu6 = f6 * L.l6 - L.l5;
    const double abs2 = std::fabs(a.gw) + std::fabs((a.aw + p.e2 * a.gp) / (2 * r[6])) +
                        std::fabs(p.e1 * a.gw * r[3] / 2) + std::fabs((a.bw + a.gp) / (2 * r[7]));
    const double abs5 = std::fabs(a.bp) + std::fabs((a.bw + a.gp) * r[7] / 2) +
                        std::fabs((a.ap + p.e2 * a.bp) * r[8] / 2) + std::fabs(p.e1 * a.bw * r[5] / 2);
    L.smu3 = f3 * L.s3 + abs2;
    L.smu6 = f6 * L.s6 + abs5;
    return L;
}

// Six-term decay numerator for given splits lambda3*, lambda6*.
inline double mu_m(const Wing& w, const Lambdas& L, double l3s, double l6s) {
    const Mats m = mats(w);
    const double l = w.l;
    const double mu3s = std::pow(PI, 4) * l3s / (16 * std::pow(l, 4)) - L.l2;
    const double mu6s = PI * PI * l6s / (4 * l * l) - L.l5;
    const double d3 = L.l3 - l3s;
    const double d6 = L.l6 - l6s;
    const double terms[6] = {L.l1,
                             L.l4,
                             mu3s / m.lM_M,
                             mu6s / m.lM_M,
                             PI * PI * d3 / (4 * std::pow(l, 3) * m.lM_Ms),
                             d6 / (l * m.lM_Ms)};
    return 2 * *std::min_element(terms, terms + 6);
}

// Absolute term size behind the binding entry of mu_m, for the same rounding test.
inline double mu_m_scale(const Wing& w, const Lambdas& L, double l3s, double l6s) {
    const Mats m = mats(w);
    const double l = w.l;
    const double f3 = std::pow(PI, 4) / (16 * std::pow(l, 4));
    const double f6 = PI * PI / (4 * l * l);
    const double terms[6] = {L.l1,
                             L.l4,
                             (f3 * l3s - L.l2) / m.lM_M,
                             (f6 * l6s - L.l5) / m.lM_M,
                             PI * PI * (L.l3 - l3s) / (4 * std::pow(l, 3) * m.lM_Ms),
                             (L.l6 - l6s) / (l * m.lM_Ms)};
    const double sizes[6] = {L.s1,
                             L.s4,
                             (f3 * l3s + L.smu3) / m.lM_M,
                             (f6 * l6s + L.smu6) / m.lM_M,
                             PI * PI * (L.s3 + l3s) / (4 * std::pow(l, 3) * m.lM_Ms),
                             (L.s6 + l6s) / (l * m.lM_Ms)};
    return 2 * sizes[std::min_element(terms, terms + 6) - terms];
}

inline double alpha(double e1, double e2, double km1, double km2) { return std::max(e1 / km1, e2 / km2); }
inline double Lambda(double mu, double alpha) { return mu / (1 + alpha); }
inline double K_E(double alpha) { return (1 + alpha) / (1 - alpha); }
inline double K_phi(const Wing& w, double alpha) {
    const double cp = std::sqrt(w.GJ / w.Iw);
    return (2 / cp) * std::sqrt(2 * w.l / (PI * w.Iw) * K_E(alpha));
}

// Best splits by brute force: the objective is evaluated on a uniform grid of
// each admissible interval, the lambda6 split at the best lambda3 split.
inline std::pair<double, double> grid_splits(const Wing& w, const Lambdas& L, int n) {
    const double lo3 = L.l2 * 16 * std::pow(w.l, 4) / std::pow(PI, 4);
    const double lo6 = L.l5 * 4 * w.l * w.l / (PI * PI);
    const double a3 = std::max(lo3, 0.0), a6 = std::max(lo6, 0.0);
    double best = -INF, b3 = 0.5 * (a3 + L.l3), b6 = 0.5 * (a6 + L.l6);
    for (int i = 1; i < n; ++i) {
        const double s3 = a3 + (L.l3 - a3) * i / n;
        const double v = mu_m(w, L, s3, b6);
        if (v > best) best = v, b3 = s3;
    }
    best = -INF;
    for (int i = 1; i < n; ++i) {
        const double s6 = a6 + (L.l6 - a6) * i / n;
        const double v = mu_m(w, L, b3, s6);
        if (v > best) best = v, b6 = s6;
    }
    return {b3, b6};
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& wgt) {
    x.assign(n, 0.0);
    wgt.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        x[i] = z;
        wgt[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

// Hermite cubic shapes on [0, h] in physical coordinate s, with derivatives.
inline Eigen::Vector4d herm(double s, double h, int deriv) {
    const double x = s / h;
    switch (deriv) {
        case 0:
            return {1 - 3 * x * x + 2 * x * x * x, h * (x - 2 * x * x + x * x * x), 3 * x * x - 2 * x * x * x,
                    h * (x * x * x - x * x)};
        case 1:
            return {(-6 * x + 6 * x * x) / h, 1 - 4 * x + 3 * x * x, (6 * x - 6 * x * x) / h, 3 * x * x - 2 * x};
        default:
            return {(-6 + 12 * x) / (h * h), (-4 + 6 * x) / h, (6 - 12 * x) / (h * h), (6 * x - 2) / h};
    }
}

inline Eigen::Vector2d lin(double s, double h, int deriv) {
    if (deriv == 0) return {1 - s / h, s / h};
    return {-1 / h, 1 / h};
}

struct ElementOracle {
    Eigen::Matrix4d Kb, Mb;
    Eigen::Matrix2d Kt, Mt;
    Eigen::Matrix<double, 4, 2> Cpl;
};

// Element integrals by n-point Gauss quadrature (exact for polynomial degree 2n - 1).
inline ElementOracle element_integrals(double EI, double GJ, double h, int n = 6) {
    std::vector<double> x, wq;
    gauss_legendre(n, x, wq);
    ElementOracle e;
    e.Kb.setZero();
    e.Mb.setZero();
    e.Kt.setZero();
    e.Mt.setZero();
    e.Cpl.setZero();
    for (int q = 0; q < n; ++q) {
        const double s = 0.5 * h * (x[q] + 1);
        const double jw = 0.5 * h * wq[q];
        const Eigen::Vector4d N = herm(s, h, 0), B = herm(s, h, 2);
        const Eigen::Vector2d L = lin(s, h, 0), dL = lin(s, h, 1);
        e.Kb += jw * EI * B * B.transpose();
        e.Mb += jw * N * N.transpose();
        e.Kt += jw * GJ * dL * dL.transpose();
        e.Mt += jw * L * L.transpose();
        e.Cpl += jw * N * L.transpose();
    }
    return e;
}

}  // namespace oracle
