#include "flexwing/fem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace flexwing::fem {

Mesh Mesh::uniform(double l, int n_elem) {
    if (n_elem < 1) throw std::invalid_argument("mesh needs at least one element");
    if (!(l > 0.0)) throw std::invalid_argument("mesh length must be > 0");
    Mesh m;
    m.n_elem = n_elem;
    m.l = l;
    m.nodes.resize(n_elem + 1);
    for (int i = 0; i <= n_elem; ++i) m.nodes[i] = l * static_cast<double>(i) / n_elem;
    m.nodes[n_elem] = l;
    return m;
}

int Mesh::element_of(double y) const {
    const int e = static_cast<int>(std::floor(y / h()));
    return std::clamp(e, 0, n_elem - 1);
}

BendingElement element_bending(double EI, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("element length must be > 0");
    const double h2 = h * h;
    BendingElement e;
    e.stiffness << 12.0, 6.0 * h, -12.0, 6.0 * h,
                   6.0 * h, 4.0 * h2, -6.0 * h, 2.0 * h2,
                   -12.0, -6.0 * h, 12.0, -6.0 * h,
                   6.0 * h, 2.0 * h2, -6.0 * h, 4.0 * h2;
    e.stiffness *= EI / (h2 * h);
    e.mass << 156.0, 22.0 * h, 54.0, -13.0 * h,
              22.0 * h, 4.0 * h2, 13.0 * h, -3.0 * h2,
              54.0, 13.0 * h, 156.0, -22.0 * h,
              -13.0 * h, -3.0 * h2, -22.0 * h, 4.0 * h2;
    e.mass *= h / 420.0;
    return e;
}

TorsionElement element_torsion(double GJ, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("element length must be > 0");
    TorsionElement e;
    e.stiffness << 1.0, -1.0, -1.0, 1.0;
    e.stiffness *= GJ / h;
    e.mass << 2.0, 1.0, 1.0, 2.0;
    e.mass *= h / 6.0;
    return e;
}

Eigen::Matrix<double, 4, 2> element_coupling(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("element length must be > 0");
    Eigen::Matrix<double, 4, 2> c;
    c << 7.0 / 20.0, 3.0 / 20.0,
         h / 20.0, h / 30.0,
         3.0 / 20.0, 7.0 / 20.0,
         -h / 30.0, -h / 20.0;
    return c * h;
}

HermiteValues hermite(double xi, double h) {
    const double x2 = xi * xi;
    const double x3 = x2 * xi;
    HermiteValues v;
    v.N << 1.0 - 3.0 * x2 + 2.0 * x3, h * (xi - 2.0 * x2 + x3), 3.0 * x2 - 2.0 * x3, h * (x3 - x2);
    v.dN << (-6.0 * xi + 6.0 * x2) / h, 1.0 - 4.0 * xi + 3.0 * x2, (6.0 * xi - 6.0 * x2) / h,
        3.0 * x2 - 2.0 * xi;
    v.ddN << (-6.0 + 12.0 * xi) / (h * h), (-4.0 + 6.0 * xi) / h, (6.0 - 12.0 * xi) / (h * h),
        (6.0 * xi - 2.0) / h;
    return v;
}

namespace {

// Free indices of the element's bending DOFs (w_a, w'_a, w_b, w'_b) and twist DOFs.
std::array<int, 4> bending_dofs(const DofMap& d, int e) {
    return {d.w(e), d.slope(e), d.w(e + 1), d.slope(e + 1)};
}

std::array<int, 2> torsion_dofs(const DofMap& d, int e) { return {d.phi(e), d.phi(e + 1)}; }

template <int R, int C, class Mat>
void scatter(Eigen::MatrixXd& G, const std::array<int, R>& rows, const std::array<int, C>& cols,
             const Mat& local, double factor) {
    for (int i = 0; i < R; ++i) {
        if (rows[i] < 0) continue;
        for (int j = 0; j < C; ++j) {
            if (cols[j] < 0) continue;
            G(rows[i], cols[j]) += factor * local(i, j);
        }
    }
}

}  // namespace

DiscreteSystem assemble(const WingParameters& p, const AeroCoefficients& a, int n_elem) {
    if (n_elem < 2) throw std::invalid_argument("n_elem must be >= 2");
    if (auto r = validate(a); !r.ok()) throw InvalidParameters(r);

    DiscreteSystem s;
    s.params = p;
    s.aero = a;
    s.derived = derive(p, Damping::MayBeZero);
    s.mesh = Mesh::uniform(p.l, n_elem);
    s.dofs.n_elem = n_elem;

    const int n = s.dofs.size();
    const double h = s.mesh.h();
    const auto& d = s.derived;

    s.M = Eigen::MatrixXd::Zero(n, n);
    s.K = Eigen::MatrixXd::Zero(n, n);
    s.C = Eigen::MatrixXd::Zero(n, n);
    s.A_pos = Eigen::MatrixXd::Zero(n, n);
    s.A_vel = Eigen::MatrixXd::Zero(n, n);

    Eigen::MatrixXd K_bend = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd K_tors = Eigen::MatrixXd::Zero(n, n);

    const BendingElement be = element_bending(p.EI, h);
    const TorsionElement te = element_torsion(p.GJ, h);
    const Eigen::Matrix<double, 4, 2> cpl = element_coupling(h);
    const Eigen::Matrix<double, 2, 4> cpl_t = cpl.transpose();

    for (int e = 0; e < n_elem; ++e) {
        const auto bd = bending_dofs(s.dofs, e);
        const auto td = torsion_dofs(s.dofs, e);

        scatter<4, 4>(K_bend, bd, bd, be.stiffness, 1.0);
        scatter<2, 2>(K_tors, td, td, te.stiffness, 1.0);

        scatter<4, 4>(s.M, bd, bd, be.mass, p.rho);
        scatter<2, 2>(s.M, td, td, te.mass, d.I_w_star);
        if (p.x_c != 0.0) {
            scatter<4, 2>(s.M, bd, td, cpl, p.rho * p.x_c);
            scatter<2, 4>(s.M, td, bd, cpl_t, p.rho * p.x_c);
        }

        // Lift on bending test functions, moment on twist test functions.
        if (a.alpha_w != 0.0) scatter<4, 2>(s.A_pos, bd, td, cpl, a.alpha_w);
        if (a.alpha_phi != 0.0) scatter<2, 2>(s.A_pos, td, td, te.mass, a.alpha_phi);
        if (a.beta_w != 0.0) scatter<4, 2>(s.A_vel, bd, td, cpl, a.beta_w);
        if (a.gamma_w != 0.0) scatter<4, 4>(s.A_vel, bd, bd, be.mass, a.gamma_w);
        if (a.beta_phi != 0.0) scatter<2, 2>(s.A_vel, td, td, te.mass, a.beta_phi);
        if (a.gamma_phi != 0.0) scatter<2, 4>(s.A_vel, td, bd, cpl_t, a.gamma_phi);
    }

    s.K = K_bend + K_tors;
    s.C = p.eta_w * K_bend + p.eta_phi * K_tors;

    const int tw = s.dofs.tip_w();
    const int tp = s.dofs.tip_phi();
    s.M(tw, tw) += d.M_s.a;
    s.M(tw, tp) += d.M_s.b;
    s.M(tp, tw) += d.M_s.b;
    s.M(tp, tp) += d.M_s.c;

    s.B = Eigen::MatrixX2d::Zero(n, 2);
    s.B(tw, 0) = 1.0;
    s.B(tp, 1) = 1.0;
    return s;
}

Eigen::VectorXd static_solve(const DiscreteSystem& sys, double tip_force, double tip_moment) {
    const Eigen::Vector2d load(tip_force, tip_moment);
    Eigen::LLT<Eigen::MatrixXd> llt(sys.K);
    if (llt.info() != Eigen::Success) throw std::runtime_error("stiffness matrix is singular");
    return llt.solve(sys.B * load);
}

BendingSample bending_at(const DiscreteSystem& sys, const Eigen::VectorXd& u, double y) {
    const int e = sys.mesh.element_of(y);
    const double h = sys.mesh.h();
    const double xi = (y - sys.mesh.nodes[e]) / h;
    const auto dofs = bending_dofs(sys.dofs, e);
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q(i) = dofs[i] < 0 ? 0.0 : u(dofs[i]);
    const HermiteValues hv = hermite(xi, h);
    return {hv.N.dot(q), hv.dN.dot(q), hv.ddN.dot(q)};
}

double twist_at(const DiscreteSystem& sys, const Eigen::VectorXd& u, double y) {
    const int e = sys.mesh.element_of(y);
    const double xi = (y - sys.mesh.nodes[e]) / sys.mesh.h();
    const double a = e == 0 ? 0.0 : u(sys.dofs.phi(e));
    const double b = u(sys.dofs.phi(e + 1));
    return (1.0 - xi) * a + xi * b;
}

namespace {

template <class Index>
Eigen::VectorXd nodal(const DiscreteSystem& sys, const Eigen::VectorXd& u, Index idx) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sys.mesh.n_elem + 1);
    for (int i = 1; i <= sys.mesh.n_elem; ++i) out(i) = u(idx(i));
    return out;
}

}  // namespace

Eigen::VectorXd nodal_w(const DiscreteSystem& sys, const Eigen::VectorXd& u) {
    return nodal(sys, u, [&](int i) { return sys.dofs.w(i); });
}

Eigen::VectorXd nodal_slope(const DiscreteSystem& sys, const Eigen::VectorXd& u) {
    return nodal(sys, u, [&](int i) { return sys.dofs.slope(i); });
}

Eigen::VectorXd nodal_phi(const DiscreteSystem& sys, const Eigen::VectorXd& u) {
    return nodal(sys, u, [&](int i) { return sys.dofs.phi(i); });
}

}  // namespace flexwing::fem
