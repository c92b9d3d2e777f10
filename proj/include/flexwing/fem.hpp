#pragma once

#include <Eigen/Dense>
#include <vector>

#include "flexwing/model.hpp"

namespace flexwing::fem {

/// Uniform mesh of [0, l].
struct Mesh {
    int n_elem = 0;
    double l = 0.0;
    std::vector<double> nodes;

    static Mesh uniform(double l, int n_elem);
    [[nodiscard]] double h() const { return l / n_elem; }
    /// Element index containing y (the last element owns y = l).
    [[nodiscard]] int element_of(double y) const;
};

/// Free-DOF numbering after the clamped DOFs w(0), w'(0), phi(0) are removed.
///
/// Bending DOFs come first, interleaved per node (w_i, w'_i) for i = 1..n,
/// followed by the twist DOFs phi_i for i = 1..n.
struct DofMap {
    int n_elem = 0;

    [[nodiscard]] int n_bending() const { return 2 * n_elem; }
    [[nodiscard]] int n_torsion() const { return n_elem; }
    [[nodiscard]] int size() const { return 3 * n_elem; }

    /// Free index of w at node i, or -1 for the clamped node 0.
    [[nodiscard]] int w(int node) const { return node == 0 ? -1 : 2 * (node - 1); }
    [[nodiscard]] int slope(int node) const { return node == 0 ? -1 : 2 * (node - 1) + 1; }
    [[nodiscard]] int phi(int node) const { return node == 0 ? -1 : 2 * n_elem + node - 1; }

    [[nodiscard]] int tip_w() const { return w(n_elem); }
    [[nodiscard]] int tip_slope() const { return slope(n_elem); }
    [[nodiscard]] int tip_phi() const { return phi(n_elem); }
};

struct BendingElement {
    Eigen::Matrix4d stiffness;  ///< (EI/h^3) [...] for DOFs (w1, w1', w2, w2')
    Eigen::Matrix4d mass;       ///< consistent mass per unit rho
};

struct TorsionElement {
    Eigen::Matrix2d stiffness;  ///< (GJ/h) [[1,-1],[-1,1]]
    Eigen::Matrix2d mass;       ///< (h/6) [[2,1],[1,2]] per unit inertia
};

/// Throws std::invalid_argument for h <= 0.
[[nodiscard]] BendingElement element_bending(double EI, double h);
[[nodiscard]] TorsionElement element_torsion(double GJ, double h);
/// Integral over the element of Hermite shape i times linear shape j.
[[nodiscard]] Eigen::Matrix<double, 4, 2> element_coupling(double h);

/// Hermite cubic shape functions and derivatives at local coordinate xi in [0, 1].
struct HermiteValues {
    Eigen::Vector4d N, dN, ddN;
};
[[nodiscard]] HermiteValues hermite(double xi, double h);

/// Semi-discrete model
///   M u'' + C u' + K u = A_pos u + A_vel u' + B [L_tip, M_tip]^T.
struct DiscreteSystem {
    Eigen::MatrixXd M;       ///< structural + store mass
    Eigen::MatrixXd C;       ///< Kelvin-Voigt damping (eta_w K_bend + eta_phi K_tors)
    Eigen::MatrixXd K;       ///< structural stiffness
    Eigen::MatrixXd A_pos;   ///< distributed loads proportional to displacements
    Eigen::MatrixXd A_vel;   ///< distributed loads proportional to velocities
    Eigen::MatrixX2d B;      ///< column 0: tip force on w(l); column 1: tip moment on phi(l)
    DofMap dofs;
    Mesh mesh;
    WingParameters params;
    AeroCoefficients aero;
    DerivedConstants derived;

    [[nodiscard]] int size() const { return dofs.size(); }
};

/// Throws std::invalid_argument for n_elem < 2 and InvalidParameters for bad p.
[[nodiscard]] DiscreteSystem assemble(const WingParameters& p, const AeroCoefficients& a, int n_elem);

/// Solves K u = B [F, T]^T with the structural stiffness.
[[nodiscard]] Eigen::VectorXd static_solve(const DiscreteSystem& sys, double tip_force, double tip_moment);

/// Field values reconstructed from a free-DOF vector.
struct BendingSample {
    double w = 0.0;
    double w_y = 0.0;
    double w_yy = 0.0;
};
[[nodiscard]] BendingSample bending_at(const DiscreteSystem& sys, const Eigen::VectorXd& u, double y);
[[nodiscard]] double twist_at(const DiscreteSystem& sys, const Eigen::VectorXd& u, double y);

/// Nodal values including the clamped root (length n_elem + 1).
[[nodiscard]] Eigen::VectorXd nodal_w(const DiscreteSystem& sys, const Eigen::VectorXd& u);
[[nodiscard]] Eigen::VectorXd nodal_slope(const DiscreteSystem& sys, const Eigen::VectorXd& u);
[[nodiscard]] Eigen::VectorXd nodal_phi(const DiscreteSystem& sys, const Eigen::VectorXd& u);

/// Interpolates w0(y), phi0(y) into free DOFs: w and w' are sampled at the nodes.
template <class FieldW, class FieldWy, class FieldPhi>
[[nodiscard]] Eigen::VectorXd interpolate(const DiscreteSystem& sys, FieldW w, FieldWy w_y, FieldPhi phi) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.size());
    for (int i = 1; i <= sys.mesh.n_elem; ++i) {
        const double y = sys.mesh.nodes[i];
        u(sys.dofs.w(i)) = w(y);
        u(sys.dofs.slope(i)) = w_y(y);
        u(sys.dofs.phi(i)) = phi(y);
    }
    return u;
}

}  // namespace flexwing::fem
