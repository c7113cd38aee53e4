#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>

namespace rigidity {

/// A scalar function sampled on the nodes of a Geometry.
using Field = Eigen::VectorXd;

enum class Manifold { SphereAxisymmetric, TorusOneD };

std::string to_string(Manifold kind);
Manifold manifold_from_string(const std::string& name);

/// One-dimensional reduction of a compact model manifold.
///
/// Sphere: axisymmetric functions on the unit round S^n, sampled at
/// theta_i = i h, h = pi / N, i = 0..N (poles included). The measure is
/// proportional to sin^{n-1} theta and node i owns the exact measure of
/// [theta_i - h/2, theta_i + h/2] clipped to [0, pi]. Ricci curvature is (n-1) g.
///
/// Torus: functions of the first coordinate on the flat n-torus with period
/// 2 pi, sampled at x_i = i h, h = 2 pi / N, i = 0..N-1. Ricci vanishes.
///
/// Both carry total volume 1. Nodes own control volumes (`cell_measure`),
/// faces sit at midpoints (`face_measure`, N faces in both cases); every
/// flux-form operator built on these telescopes to zero total integral.
class Geometry {
public:
    static Geometry build(Manifold kind, int n, int N);

    Manifold kind() const { return kind_; }
    bool periodic() const { return kind_ == Manifold::TorusOneD; }
    int dim() const { return n_; }
    int intervals() const { return N_; }
    int size() const { return static_cast<int>(coords_.size()); }
    int faces() const { return N_; }
    double spacing() const { return h_; }
    double ricci_constant() const { return ricci_; }

    const Eigen::VectorXd& coords() const { return coords_; }
    /// Normalized measure density at the nodes (zero at sphere poles).
    const Eigen::VectorXd& weight() const { return weight_; }
    /// Quadrature weights; they sum to 1.
    const Eigen::VectorXd& cell_measure() const { return cell_; }
    /// Measure density at face midpoints, face k between nodes k and k+1.
    const Eigen::VectorXd& face_measure() const { return face_; }

    /// Node index on the far side of face k.
    int right_of(int face) const { return periodic() ? (face + 1) % size() : face + 1; }

    Field sample(const std::function<double(double)>& f) const;
    Field constant(double c) const { return Field::Constant(size(), c); }

private:
    Manifold kind_ = Manifold::SphereAxisymmetric;
    int n_ = 0;
    int N_ = 0;
    double h_ = 0.0;
    double ricci_ = 0.0;
    Eigen::VectorXd coords_, weight_, cell_, face_;
};

inline Geometry build_geometry(Manifold kind, int n, int N) { return Geometry::build(kind, n, N); }

/// Quadrature of f against the normalized measure.
double integrate(const Geometry& geom, const Field& f);

/// Throws ShapeMismatch unless f has one value per node.
void check_aligned(const Geometry& geom, const Field& f);

/// Forward differences (u_{k+1} - u_k) / h on the N faces.
Eigen::VectorXd face_gradient(const Geometry& geom, const Field& u);

/// Centered derivative u' at the nodes; zero at the sphere poles.
Field gradient(const Geometry& geom, const Field& u);

/// |u'| from the centered derivative.
Field gradient_magnitude(const Geometry& geom, const Field& u);

/// Node estimate of |u'|^2 as the mean of the two adjacent squared face
/// gradients. Second-order consistent, and strictly positive at isolated
/// critical points, where it is of size (h u'' / 2)^2.
Field gradient_energy(const Geometry& geom, const Field& u);

/// Eigencomponents of the Hessian of an axisymmetric function.
struct HessianComponents {
    /// u'' along the gradient direction.
    Field radial;
    /// cot(theta) u' on each of the n-1 orthogonal directions (sphere),
    /// 0 on the torus. At the poles the limit u'' is used.
    Field tangential;
};

/// Nested centered differences: radial = D0(D0 u).
HessianComponents hessian_components(const Geometry& geom, const Field& u);

/// Two-column CSV (coordinate, value).
void write_field_csv(std::ostream& os, const Geometry& geom, const Field& f,
                     const std::string& value_name = "value");

}  // namespace rigidity
