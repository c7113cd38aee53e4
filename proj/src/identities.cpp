#include "rigidity/identities.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rigidity/errors.hpp"
#include "rigidity/flow.hpp"
#include "rigidity/operators.hpp"
#include "rigidity/parallel.hpp"

namespace rigidity {

namespace {

double resolve_eps(const Geometry& geom, const Field& u, double eps) {
    return eps >= 0.0 ? eps : regularization_eps(geom, u);
}

// int |w'|^p over the faces.
double face_energy(const Geometry& geom, const Field& w, double p) {
    const Eigen::VectorXd g = face_gradient(geom, w);
    const Eigen::VectorXd& S = geom.face_measure();
    double sum = 0.0;
    for (int k = 0; k < geom.faces(); ++k) sum += S[k] * std::pow(std::abs(g[k]), p);
    return sum * geom.spacing();
}

double l2_norm(const Geometry& geom, const Eigen::ArrayXd& f) {
    return std::sqrt(integrate(geom, f.square().matrix()));
}

double slope_between(double coarse_gap, double fine_gap, int coarse_N, int fine_N) {
    return std::log2(coarse_gap / fine_gap) / std::log2(static_cast<double>(fine_N) / coarse_N);
}

}  // namespace

const std::vector<std::string>& unconditional_names() {
    static const std::vector<std::string> names{"bochner_traceless", "gradient_coupling", "g_decomposition",
                                                "integrated_bochner"};
    return names;
}

double unconditional_tolerance_constant(const std::string& name) {
    // calibrated on the identity corpora of both manifolds at p in {2, 3}
    static const std::map<std::string, double> table{
        {"bochner_traceless", 800.0},
        {"gradient_coupling", 1000.0},
        {"g_decomposition", 200.0},
        {"integrated_bochner", 800.0},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown identity: " + name);
    return it->second;
}

double onshell_tolerance_constant(const std::string& name) {
    // calibrated on sphere solutions of the second-mode branch at p = 2
    static const std::map<std::string, double> table{
        {"substituted_equation", 20.0},
        {"multiplier_gradient", 40.0},
        {"multiplier_laplacian", 200.0},
        {"lambda_balance", 1500.0},
        {"master_identity", 500.0},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown identity: " + name);
    return it->second;
}

std::vector<IdentityReport> verify_unconditional(const Geometry& geom, const ParamSet& ps, const Field& u,
                                                 double eps) {
    check_aligned(geom, u);
    require_positive(u, "identity field");
    eps = resolve_eps(geom, u, eps);
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const double n = ps.n, p = ps.p;
    const double m = n * (p - 1.0) + p;
    const int N = geom.intervals();
    const double h2 = 1.0 / (static_cast<double>(N) * N);

    // left sides: flux-form p-Laplacian
    const Eigen::ArrayXd L = p_laplacian(geom, p, u, eps).array();

    // right sides: pointwise frame
    const TensorDiagnostics d = tensor_diagnostics(geom, ps, u, eps);
    const AxisymmetricFrame fr = axisymmetric_frame(geom, p, u, eps);
    const Eigen::ArrayXd X = fr.grad_p.array() / u.array();
    const Eigen::ArrayXd sp = fr.grad_pow_pm2.array();

    std::vector<IdentityReport> out;
    auto add = [&](const std::string& name, double lhs, double rhs) {
        out.push_back(make_report(name, lhs, rhs, unconditional_tolerance_constant(name) * h2, N));
    };
    const double L2 = integrate(geom, L.square().matrix());
    add("bochner_traceless", L2, n / (n - 1.0) * integrate(geom, d.B_norm_sq + d.ric_term));
    add("gradient_coupling", integrate(geom, (L * X).matrix()),
        n * (p - 1.0) / m * integrate(geom, X.square().matrix()) -
            n * p / ((p - 1.0) * m) * integrate(geom, d.BG_bracket));
    add("g_decomposition", functional_G(geom, ps, u, dc.theta, eps),
        functional_G_decomposed(geom, ps, u, dc.theta, eps));
    add("integrated_bochner", L2,
        integrate(geom, (sp.square() * d.hess_A_norm_sq.array() + d.ric_term.array()).matrix()));
    return out;
}

RefinementStudy refinement_study(Manifold kind, const ParamSet& ps, const FieldFunction& f,
                                 const std::vector<int>& grids, size_t report_index) {
    if (grids.size() < 2 || report_index >= grids.size()) throw RangeError("refinement needs two or more grids");
    RefinementStudy st;
    st.field = f.name;
    st.grids = grids;
    std::vector<std::vector<IdentityReport>> per_grid;
    for (int N : grids) {
        const Geometry g = build_geometry(kind, ps.n, N);
        per_grid.push_back(verify_unconditional(g, ps, f.sample(g)));
    }
    const size_t count = per_grid.front().size();
    st.gaps.assign(count, std::vector<double>(grids.size()));
    for (size_t i = 0; i < count; ++i) {
        for (size_t k = 0; k < grids.size(); ++k) st.gaps[i][k] = per_grid[k][i].rel_gap;
        IdentityReport r = per_grid[report_index][i];
        r.refinement_slope = slope_between(st.gaps[i].front(), st.gaps[i].back(), grids.front(), grids.back());
        st.reports.push_back(r);
    }
    return st;
}

std::vector<RefinementStudy> corpus_study(Manifold kind, const ParamSet& ps, const std::vector<FieldFunction>& fields,
                                          const std::vector<int>& grids) {
    std::vector<RefinementStudy> out(fields.size());
    parallel_for(fields.size(), [&](size_t i) { out[i] = refinement_study(kind, ps, fields[i], grids); });
    return out;
}

std::vector<IdentityReport> verify_onshell(const Geometry& geom, const ParamSet& ps, const Field& v,
                                           double gamma, const OnShellOptions& opts) {
    check_aligned(geom, v);
    require_positive(v, "solution");
    const CdcCertificate cert = cdc_certificate(ps, gamma);
    const DerivedConstants dc = derive_constants(ps, Domain::Rigidity);
    const double p = ps.p, q = ps.q, beta = dc.beta, lambda = ps.lambda;
    const double den = coupling_denominator(p, q, beta);
    const double k = lambda / den;
    const double a = (p - 1.0) * (beta + 1.0);
    const double e = p - 1.0 + beta * (p - q);
    const double r = 2.0 * gamma / p;
    const int N = geom.intervals();
    const double h2 = 1.0 / (static_cast<double>(N) * N);
    auto tol = [&](const std::string& name) {
        return opts.condition * opts.residual_norm + onshell_tolerance_constant(name) * h2;
    };

    const Field u = v.array().pow(-1.0 / beta).matrix();
    const double eps = resolve_eps(geom, u, opts.eps);
    const Eigen::ArrayXd U = u.array();
    const Eigen::ArrayXd L = p_laplacian(geom, p, u, eps).array();
    const AxisymmetricFrame fr = axisymmetric_frame(geom, p, u, eps);
    const Eigen::ArrayXd gp = fr.grad_p.array();
    const Eigen::ArrayXd w = U.pow(r);

    std::vector<IdentityReport> out;

    const Eigen::ArrayXd rest = a * gp / U + k * (U.pow(e) - U);
    IdentityReport eq = make_report("substituted_equation", l2_norm(geom, L), l2_norm(geom, rest),
                                    tol("substituted_equation"), N);
    // measured against the size of the individual terms, which stays finite at constants
    const double scale = eq.lhs + l2_norm(geom, a * gp / U) + std::abs(k) * (l2_norm(geom, U.pow(e)) + l2_norm(geom, U));
    eq.abs_gap = l2_norm(geom, L - rest);
    eq.rel_gap = eq.abs_gap / std::max(scale, kRelGapFloor);
    eq.pass = eq.rel_gap < eq.tolerance;
    if (eq.rel_gap > 10.0 * eq.tolerance)
        throw NotOnShell("substituted equation residual " + std::to_string(eq.rel_gap) +
                         " exceeds ten times its tolerance " + std::to_string(eq.tolerance));
    out.push_back(eq);

    auto I = [&](const Eigen::ArrayXd& f) { return integrate(geom, f.matrix()); };
    const double I0 = I(w * gp);                         // int u^r |grad u|^p
    const double I1 = I(w / U * L * gp);                 // int u^{r-1} Delta_p u |grad u|^p
    const double I2 = I(w / U.square() * gp.square());   // int u^{r-2} |grad u|^{2p}
    const double I3 = I(w * U.pow(e - 1.0) * gp);        // int u^{r+e-1} |grad u|^p
    const double IL = I(w * L.square());                 // int u^r (Delta_p u)^2

    out.push_back(make_report("multiplier_gradient", I1, a * I2 + k * I3 - k * I0, tol("multiplier_gradient"), N));
    out.push_back(make_report("multiplier_laplacian", IL, a * I1 + (1.0 + r) * k * I0 - (e + r) * k * I3, tol("multiplier_laplacian"), N));
    out.push_back(make_report("lambda_balance", lambda * I0, (r - beta * (q - 1.0)) * I1 + IL - a * (e + r) * I2, tol("lambda_balance"), N));

    const Field psi = u.array().pow(1.0 + gamma / p).matrix();
    const Eigen::ArrayXd Lpsi = linearized_apply(geom, p, u, psi, eps).array();
    const TensorDiagnostics d = tensor_diagnostics(geom, ps, u, eps);
    const double sobolev = std::isfinite(dc.p_star) ? 1.0 - 1.0 / dc.p_star : 1.0;
    const double lhs = cert.alpha * I2 + cert.sigma * I(Lpsi.square());
    const double rhs = beta * p * (q - 1.0) / (2.0 * gamma) * I(w * (d.J.array() + d.ric_term.array())) +
                       sobolev * lambda * I0;
    out.push_back(make_report("master_identity", lhs, rhs, tol("master_identity"), N));
    return out;
}

IdentityReport interpolation_check(const Geometry& geom, const ParamSet& ps, const Field& v, double lambda_used) {
    check_aligned(geom, v);
    require_positive(v, "interpolation field");
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const double p = ps.p, q = ps.q, s = dc.s;
    if (std::abs(q - s) < 1e-12 * std::max(1.0, std::abs(q))) throw ExponentPole("q equals s");
    const double lhs = face_energy(geom, v, p);
    const double coef = p * std::pow(std::abs(dc.beta), p - 2.0) / s * lambda_used / (q - s);
    const double rhs = coef * (std::pow(integrate(geom, v.array().pow(q).matrix()), p / q) -
                               integrate(geom, v.array().pow(s).matrix()));
    IdentityReport r = make_report("interpolation", lhs, rhs, 0.0, geom.intervals());
    r.tolerance = 1e-12 * (1.0 + std::abs(lhs));
    r.pass = lhs >= rhs - r.tolerance;
    return r;
}

}  // namespace rigidity
