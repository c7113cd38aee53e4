#include "rigidity/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rigidity/errors.hpp"

namespace rigidity {

void require_positive(const Field& u, const char* what) {
    if (!(u.minCoeff() > 0.0)) throw NonPositiveField(std::string(what) + " must be positive");
}

double default_eps(const Geometry& geom, const Field& u) {
    return 1e-8 * face_gradient(geom, u).cwiseAbs().maxCoeff();
}

double regularization_eps(const Geometry& geom, const Field& u) {
    return 1e-8 * std::max(face_gradient(geom, u).cwiseAbs().maxCoeff(), 1e-2);
}

Eigen::VectorXd p_coefficient(const Geometry& geom, double p, const Field& u, double eps) {
    const Eigen::VectorXd g = face_gradient(geom, u);
    Eigen::VectorXd c(g.size());
    if (p == 2.0) return c.setOnes();
    const double e2 = eps * eps;
    for (int k = 0; k < g.size(); ++k) c[k] = std::pow(g[k] * g[k] + e2, 0.5 * (p - 2.0));
    return c;
}

Field flux_divergence(const Geometry& geom, const Eigen::VectorXd& face_coeff, const Field& psi) {
    check_aligned(geom, psi);
    const Eigen::VectorXd g = face_gradient(geom, psi);
    const Eigen::VectorXd& S = geom.face_measure();
    const Eigen::VectorXd& Q = geom.cell_measure();
    Field out = Field::Zero(geom.size());
    for (int k = 0; k < geom.faces(); ++k) {
        // a flat face carries no flux even when the coefficient is infinite
        const double flux = g[k] == 0.0 ? 0.0 : S[k] * face_coeff[k] * g[k];
        out[k] += flux;
        out[geom.right_of(k)] -= flux;
    }
    return out.cwiseQuotient(Q);
}

Field p_laplacian(const Geometry& geom, double p, const Field& u, double eps) {
    return flux_divergence(geom, p_coefficient(geom, p, u, eps), u);
}

Eigen::VectorXd linearized_coefficient(const Geometry& geom, double p, const Field& u, double eps) {
    if (p < 2.0 && eps == 0.0 && (face_gradient(geom, u).array() == 0.0).any())
        throw DegenerateGradient("linearized operator is singular at a critical face (p < 2, eps = 0)");
    return (p - 1.0) * p_coefficient(geom, p, u, eps);
}

Field linearized_apply(const Geometry& geom, double p, const Field& u, const Field& psi, double eps) {
    return flux_divergence(geom, linearized_coefficient(geom, p, u, eps), psi);
}

AxisymmetricFrame axisymmetric_frame(const Geometry& geom, double p, const Field& u, double eps) {
    AxisymmetricFrame fr;
    fr.n = geom.dim();
    fr.p = p;
    fr.ricci = geom.ricci_constant();
    const double n = fr.n;
    fr.grad = gradient(geom, u);
    const HessianComponents hc = hessian_components(geom, u);
    fr.hess_radial = hc.radial;
    fr.hess_tangential = hc.tangential;

    const Eigen::ArrayXd s2 = gradient_energy(geom, u).array() + eps * eps;
    if (p == 2.0)
        fr.grad_pow_pm2 = Field::Ones(u.size());
    else
        fr.grad_pow_pm2 = s2.pow(0.5 * (p - 2.0)).matrix();
    const Eigen::ArrayXd sp = fr.grad_pow_pm2.array();
    fr.grad_p = (sp * fr.grad.array().square()).matrix();

    const Eigen::ArrayXd Hr = hc.radial.array();
    const Eigen::ArrayXd Ht = hc.tangential.array();
    const Eigen::ArrayXd lap = sp * ((p - 1.0) * Hr + (n - 1.0) * Ht);
    fr.p_lap_pointwise = lap.matrix();
    fr.B_radial = (sp * Hr - lap / (n * (p - 1.0))).matrix();
    fr.B_tangential = (sp * Ht - lap / n).matrix();

    const Eigen::ArrayXd x = fr.grad_p.array() / u.array();
    fr.G_radial = ((n - 1.0) / n * x).matrix();
    fr.G_tangential = (-(p - 1.0) / n * x).matrix();
    return fr;
}

Field a_norm_sq(const AxisymmetricFrame& fr, const Field& radial, const Field& tangential) {
    const double w = (fr.p - 1.0) * (fr.p - 1.0);
    return (w * radial.array().square() + (fr.n - 1.0) * tangential.array().square()).matrix();
}

Field a_bracket(const AxisymmetricFrame& fr, const Field& tr, const Field& tt, const Field& sr,
                const Field& st) {
    const double w = (fr.p - 1.0) * (fr.p - 1.0);
    return (w * tr.array() * sr.array() + (fr.n - 1.0) * tt.array() * st.array()).matrix();
}

double q_a_coefficient(const ParamSet& ps, const DerivedConstants& dc) {
    const double n = ps.n;
    const double p = ps.p;
    const double q = ps.q;
    const double denom = (n * (p - 1.0) + p) * (2.0 * p - 1.0 - q) + n * (q - 1.0);
    return p * (n - 1.0) * (q - 1.0) / (dc.theta * denom);
}

TensorDiagnostics tensor_diagnostics(const Geometry& geom, const ParamSet& ps, const Field& u,
                                     double eps) {
    if (ps.n != geom.dim()) throw RangeError("parameter dimension differs from the geometry");
    check_aligned(geom, u);
    require_positive(u, "field");
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const AxisymmetricFrame fr = axisymmetric_frame(geom, ps.p, u, eps);

    TensorDiagnostics d;
    d.p_lap = p_laplacian(geom, ps.p, u, eps);
    d.hess_A_norm_sq = a_norm_sq(fr, fr.hess_radial, fr.hess_tangential);
    const Eigen::ArrayXd sp = fr.grad_pow_pm2.array();
    d.J = (sp.square() * d.hess_A_norm_sq.array() - fr.p_lap_pointwise.array().square() / fr.n).matrix();
    d.B_norm_sq = a_norm_sq(fr, fr.B_radial, fr.B_tangential);
    d.G_norm_sq = a_norm_sq(fr, fr.G_radial, fr.G_tangential);
    d.BG_bracket = a_bracket(fr, fr.B_radial, fr.B_tangential, fr.G_radial, fr.G_tangential);
    const double c = q_a_coefficient(ps, dc);
    d.Q_a_norm_sq = a_norm_sq(fr, fr.B_radial - c * fr.G_radial, fr.B_tangential - c * fr.G_tangential);
    d.ric_term = (fr.ricci * sp * fr.grad_p.array()).matrix();
    return d;
}

void write_diagnostics_csv(std::ostream& os, const Geometry& geom, const TensorDiagnostics& d) {
    os << (geom.periodic() ? "x" : "theta")
       << ",p_lap,hess_A_norm_sq,J,B_norm_sq,G_norm_sq,BG_bracket,Q_a_norm_sq,ric_term\n";
    os.precision(17);
    for (int i = 0; i < geom.size(); ++i) {
        os << geom.coords()[i] << ',' << d.p_lap[i] << ',' << d.hess_A_norm_sq[i] << ',' << d.J[i]
           << ',' << d.B_norm_sq[i] << ',' << d.G_norm_sq[i] << ',' << d.BG_bracket[i] << ','
           << d.Q_a_norm_sq[i] << ',' << d.ric_term[i] << '\n';
    }
}

namespace {

// Centered derivative, switching to one-sided second-order stencils next to
// the poles so that pole values of f never enter.
Field node_derivative_away_from_poles(const Geometry& geom, const Field& f) {
    if (geom.periodic()) return gradient(geom, f);
    const int m = geom.size();
    const double h = geom.spacing();
    Field d = gradient(geom, f);
    d[1] = (-3.0 * f[1] + 4.0 * f[2] - f[3]) / (2.0 * h);
    d[m - 2] = (3.0 * f[m - 2] - 4.0 * f[m - 3] + f[m - 4]) / (2.0 * h);
    return d;
}

}  // namespace

Field bochner_residual(const Geometry& geom, double p, const Field& u, double eps) {
    const AxisymmetricFrame fr = axisymmetric_frame(geom, p, u, eps);
    const Field lap = p_laplacian(geom, p, u, eps);
    const Field lin = linearized_apply(geom, p, u, fr.grad_p, eps);
    const Field dlap = node_derivative_away_from_poles(geom, lap);
    const Eigen::ArrayXd sp = fr.grad_pow_pm2.array();
    const Eigen::ArrayXd hess = a_norm_sq(fr, fr.hess_radial, fr.hess_tangential).array();
    const Eigen::ArrayXd ric = fr.ricci * fr.grad.array().square();
    return (lin.array() / p - sp.square() * (hess + ric) - sp * dlap.array() * fr.grad.array()).matrix();
}

}  // namespace rigidity
