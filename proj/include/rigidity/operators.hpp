#pragma once

#include <iosfwd>

#include "rigidity/geometry.hpp"
#include "rigidity/params.hpp"

namespace rigidity {

/// Default gradient regularization: 1e-8 times the largest face gradient.
double default_eps(const Geometry& geom, const Field& u);

/// 1e-8 max(max |u'|, 1e-2): default_eps with a floor, so that constant
/// fields still get a positive regularization.
double regularization_eps(const Geometry& geom, const Field& u);

/// Face coefficients (|u'|^2 + eps^2)^{(p-2)/2} of the p-Laplacian flux.
Eigen::VectorXd p_coefficient(const Geometry& geom, double p, const Field& u, double eps);

/// div(|grad u|^{p-2} grad u) in flux form. Sums to zero against the
/// quadrature weights for every u.
Field p_laplacian(const Geometry& geom, double p, const Field& u, double eps);

/// div(c grad psi) for given face coefficients c.
Field flux_divergence(const Geometry& geom, const Eigen::VectorXd& face_coeff, const Field& psi);

/// Linearization of the p-Laplacian at u applied to psi:
/// div(|grad u|^{p-2} A grad psi). For axisymmetric psi the tensor A acts on
/// the gradient direction by the factor p-1, so the face coefficient is
/// (p-1)(|u'|^2 + eps^2)^{(p-2)/2}. Self-adjoint in the quadrature inner
/// product.
///
/// Throws DegenerateGradient when p < 2, eps == 0 and u has a flat face.
Field linearized_apply(const Geometry& geom, double p, const Field& u, const Field& psi, double eps);

/// Face coefficients of the linearized operator.
Eigen::VectorXd linearized_coefficient(const Geometry& geom, double p, const Field& u, double eps);

/// Pointwise axisymmetric frame of u.
///
/// In the orthonormal frame (e_1 = grad u / |grad u|, e_2..e_n) the Hessian
/// is diag(radial, tangential, ..., tangential) and the tensor
/// A = Id + (p-2) grad u (x) grad u / |grad u|^2 is diag(p-1, 1, ..., 1), its
/// inverse a is diag(1/(p-1), 1, ..., 1). Every A-weighted quantity reduces
/// to sums over two eigen-directions with multiplicities 1 and n-1:
///
///   ||T||_A^2 = (p-1)^2 T_r^2 + (n-1) T_t^2,
///   [T, S]_A  = (p-1)^2 T_r S_r + (n-1) T_t S_t.
///
/// Powers of |grad u| use the regularized magnitude
/// s = (gradient_energy + eps^2)^{1/2} and the convention
/// |grad u|^p := s^{p-2} u'^2, so that the algebraic identities among B, G
/// and J hold exactly at every node.
struct AxisymmetricFrame {
    int n = 0;
    double p = 2.0;
    double ricci = 0.0;
    Field grad;          // u'
    Field grad_pow_pm2;  // |grad u|^{p-2}
    Field grad_p;        // |grad u|^p
    Field hess_radial;
    Field hess_tangential;
    /// Delta_p u from the chain rule: |grad u|^{p-2} tr_A(Hess u).
    Field p_lap_pointwise;
    /// Bu = |grad u|^{p-2} Hess u - (a/n) Delta_p u.
    Field B_radial, B_tangential;
    /// Gu = |grad u|^{p-2} grad u (x) grad u / u - ((p-1)/n)(|grad u|^p / u) a.
    Field G_radial, G_tangential;
};

AxisymmetricFrame axisymmetric_frame(const Geometry& geom, double p, const Field& u, double eps);

/// ||T||_A^2 for T = diag(radial, tangential x (n-1)).
Field a_norm_sq(const AxisymmetricFrame& fr, const Field& radial, const Field& tangential);
/// [T, S]_A for two such diagonal tensors.
Field a_bracket(const AxisymmetricFrame& fr, const Field& tr, const Field& tt, const Field& sr,
                const Field& st);

/// Coefficient c in Q_a u = Bu - c Gu for the constants (beta, theta) of the
/// parameter set.
double q_a_coefficient(const ParamSet& params, const DerivedConstants& dc);

struct TensorDiagnostics {
    Field p_lap;           // flux form
    Field hess_A_norm_sq;  // ||Hess u||_A^2
    Field J;               // |grad u|^{2p-4} ||Hess u||_A^2 - (Delta_p u)^2 / n
    Field B_norm_sq;       // from the components of Bu
    Field G_norm_sq;
    Field BG_bracket;
    Field Q_a_norm_sq;
    Field ric_term;        // |grad u|^{2p-4} Ric(grad u, grad u)
};

/// Requires u > 0 (Gu divides by u). params.n must equal geom.dim().
TensorDiagnostics tensor_diagnostics(const Geometry& geom, const ParamSet& params, const Field& u,
                                     double eps);

/// One CSV column per diagnostic, coordinate first.
void write_diagnostics_csv(std::ostream& os, const Geometry& geom, const TensorDiagnostics& d);

/// Pointwise residual of the p-Bochner formula
///   (1/p) L(|grad u|^p) - |grad u|^{2p-4}(||Hess u||_A^2 + Ric(grad u, grad u))
///     - |grad u|^{p-2} <grad Delta_p u, grad u>.
Field bochner_residual(const Geometry& geom, double p, const Field& u, double eps);

void require_positive(const Field& u, const char* what);

}  // namespace rigidity
