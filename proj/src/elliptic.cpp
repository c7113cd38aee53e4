#include "rigidity/elliptic.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rigidity/errors.hpp"
#include "rigidity/operators.hpp"
#include "rigidity/parallel.hpp"

namespace rigidity {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double discrete_l2(const Geometry& geom, const Field& r) {
    return std::sqrt(integrate(geom, r.cwiseAbs2()));
}

// d(flux)/dg for flux c(g) g with c = (g^2 + eps^2)^{(p-2)/2}
double flux_derivative(double p, double g, double eps, bool picard) {
    if (p == 2.0) return 1.0;
    const double r2 = g * g + eps * eps;
    if (picard) return std::pow(r2, 0.5 * (p - 2.0));
    return std::pow(r2, 0.5 * (p - 4.0)) * ((p - 1.0) * g * g + eps * eps);
}

SpMat jacobian(const Geometry& geom, const ParamSet& ps, const EquationCoefficients& ec, const Nonlinearity& f,
               const Field& v, double eps, bool picard, bool bordered) {
    const int m = geom.size();
    const Eigen::VectorXd g = face_gradient(geom, v);
    const Eigen::VectorXd& S = geom.face_measure();
    const Eigen::VectorXd& Q = geom.cell_measure();
    const double h = geom.spacing();
    std::vector<Triplet> t;
    t.reserve(4 * geom.faces() + m + 2 * m + 1);
    for (int k = 0; k < geom.faces(); ++k) {
        const int i = k, j = geom.right_of(k);
        const double d = S[k] * flux_derivative(ps.p, g[k], eps, picard) / h;
        // residual carries -Delta_p v: row i has -flux_k / Q_i, row j has +flux_k / Q_j
        t.emplace_back(i, i, d / Q[i]);
        t.emplace_back(i, j, -d / Q[i]);
        t.emplace_back(j, i, -d / Q[j]);
        t.emplace_back(j, j, d / Q[j]);
    }
    for (int i = 0; i < m; ++i)
        t.emplace_back(i, i, ec.coupling * (ec.exponent * std::pow(v[i], ec.exponent - 1.0) - f.deriv(v[i])));
    const int size = bordered ? m + 1 : m;
    if (bordered) {
        // the multiplier column is the constant mode; the row pins the mean
        for (int i = 0; i < m; ++i) {
            t.emplace_back(i, m, 1.0);
            t.emplace_back(m, i, Q[i]);
        }
    }
    SpMat J(size, size);
    J.setFromTriplets(t.begin(), t.end());
    return J;
}

double residual_tolerance(const SolveOptions& opts, const EquationCoefficients& ec, const ParamSet& ps,
                          const Field& v) {
    const double vmax = v.maxCoeff();
    const double power = std::max({ec.exponent, ps.q - 1.0, 1.0});
    return opts.res_tol * std::max(1.0, std::abs(ec.coupling)) * std::max(1.0, std::pow(vmax, power));
}

Classification classify(const Field& v, bool converged, double class_tol) {
    if (!converged) return Classification::Diverged;
    if ((v.array() - 1.0).abs().maxCoeff() < class_tol) return Classification::ConstantOne;
    if (v.maxCoeff() - v.minCoeff() > 10.0 * class_tol) return Classification::Nonconstant;
    return Classification::ConstantOther;
}

}  // namespace

Nonlinearity power_law(double q) {
    Nonlinearity f;
    f.eval = [q](double v) { return std::pow(v, q - 1.0); };
    f.deriv = [q](double v) { return (q - 1.0) * std::pow(v, q - 2.0); };
    f.kind = NonlinearityKind::PowerLaw;
    f.name = "power";
    return f;
}

Nonlinearity nonlinearity_from_name(const std::string& name, double q) {
    if (name == "power") return power_law(q);
    Nonlinearity f;
    f.kind = NonlinearityKind::Custom;
    f.name = name;
    if (name == "power-plus-linear") {
        f.eval = [q](double v) { return std::pow(v, q - 1.0) + v; };
        f.deriv = [q](double v) { return (q - 1.0) * std::pow(v, q - 2.0) + 1.0; };
    } else if (name == "arctan") {
        f.eval = [q](double v) { return std::atan(v) * std::pow(v, q - 2.0); };
        f.deriv = [q](double v) {
            return std::pow(v, q - 2.0) / (1.0 + v * v) + (q - 2.0) * std::atan(v) * std::pow(v, q - 3.0);
        };
    } else {
        throw ConfigError("unknown nonlinearity '" + name + "'");
    }
    return f;
}

EquationCoefficients equation_coefficients(const ParamSet& ps) {
    EquationCoefficients ec;
    ec.constants = derive_constants(ps, Domain::Rigidity);
    const double beta = ec.constants.beta;
    const double den = coupling_denominator(ps.p, ps.q, beta);
    if (std::abs(den) < 1e-12 * (1.0 + std::abs(beta * (ps.q - ps.p))))
        throw ExponentPole("2 - p + beta (q - p) vanishes");
    const double pm1 = ps.p - 1.0;
    if (beta < 0.0 && pm1 != std::round(pm1))
        throw RangeError("beta < 0 with non-integer p - 1: beta^{p-1} is not real");
    ec.coupling = std::pow(beta, pm1) * ps.lambda / den;
    ec.exponent = (ps.p - 2.0 + beta * pm1) / beta;
    return ec;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::ConstantOne: return "ConstantOne";
        case Classification::ConstantOther: return "ConstantOther";
        case Classification::Nonconstant: return "Nonconstant";
        case Classification::Diverged: return "Diverged";
    }
    return "Diverged";
}

Field stationary_residual(const Geometry& geom, const ParamSet& ps, const Nonlinearity& f, const Field& v,
                          double eps) {
    const EquationCoefficients ec = equation_coefficients(ps);
    Field r = -p_laplacian(geom, ps.p, v, eps);
    for (int i = 0; i < v.size(); ++i) r[i] += ec.coupling * (std::pow(v[i], ec.exponent) - f.eval(v[i]));
    return r;
}

SolveResult solve_stationary(const Geometry& geom, const ParamSet& ps, const Nonlinearity& f, const Field& v0,
                             const SolveOptions& opts) {
    check_aligned(geom, v0);
    require_positive(v0, "initial guess");
    const EquationCoefficients ec = equation_coefficients(ps);
    const bool bordered = ps.lambda == 0.0;

    SolveResult res;
    res.eps = opts.eps >= 0.0 ? opts.eps
                              : regularization_eps(geom, v0);
    Field v = v0;
    Field r = stationary_residual(geom, ps, f, v, res.eps);
    double rn = discrete_l2(geom, r);
    res.residual_history.push_back(rn);
    bool converged = false;
    // the residual alone is not enough: for p > 2 the flux vanishes to order
    // p - 1 at flat faces, so a small residual can hide a visible oscillation
    const double step_tol = 1e-3 * opts.class_tol;
    for (int it = 0; it < opts.max_iter; ++it) {
        const SpMat J = jacobian(geom, ps, ec, f, v, res.eps, opts.picard, bordered);
        Eigen::SparseLU<SpMat> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) break;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(J.rows());
        rhs.head(v.size()) = -r;
        const Eigen::VectorXd sol = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !sol.allFinite()) break;
        const Field step = sol.head(v.size());
        const bool small_residual = rn < residual_tolerance(opts, ec, ps, v);
        if (small_residual && step.cwiseAbs().maxCoeff() <= step_tol * std::max(1.0, v.cwiseAbs().maxCoeff())) {
            converged = true;
            break;
        }

        double alpha = 1.0;
        bool positive_seen = false, accepted = false;
        Field trial, rt;
        double rtn = 0.0;
        while (alpha >= 1e-10) {
            trial = v + alpha * step;
            if (trial.minCoeff() > 0.0) {
                positive_seen = true;
                rt = stationary_residual(geom, ps, f, trial, res.eps);
                rtn = discrete_l2(geom, rt);
                if (small_residual && !(rtn < 0.5 * rn)) {
                    // at the noise floor, or stepping along a symmetry direction
                    // (torus translations) that the residual cannot see
                    converged = true;
                    break;
                }
                if (std::isfinite(rtn) && (small_residual || rtn <= (1.0 - 1e-4 * alpha) * rn)) {
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (converged) break;
        if (!positive_seen) throw NegativeBranch("no damped Newton step keeps the iterate positive");
        if (!accepted) break;
        if (trial.minCoeff() < 1e-10 * std::max(1.0, v0.maxCoeff()))
            throw NegativeBranch("iterates collapse toward the trivial solution v = 0");
        v = trial;
        r = rt;
        rn = rtn;
        res.iterations = it + 1;
        res.residual_history.push_back(rn);
    }

    res.field = v;
    res.residual_norm = rn;
    res.classified = classify(v, converged, opts.class_tol);
    const auto& h = res.residual_history;
    res.contraction_order = std::numeric_limits<double>::quiet_NaN();
    if (h.size() >= 4) {
        const std::size_t k = h.size() - 1;
        res.contraction_order = std::log(h[k] / h[k - 1]) / std::log(h[k - 1] / h[k - 2]);
        res.flagged = !(res.contraction_order >= 1.5);
    }
    return res;
}

FConditionReport check_f_condition(const Nonlinearity& f, const ParamSet& ps, double lo, double hi,
                                   int samples) {
    if (!(lo > 0.0 && hi > lo) || samples < 2) throw RangeError("need 0 < lo < hi and at least 2 samples");
    const DerivedConstants dc = derive_constants(ps, Domain::Rigidity);
    const double factor = dc.beta / coupling_denominator(ps.p, ps.q, dc.beta);
    FConditionReport rep;
    rep.max_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double v = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
        const double val = factor * (f.deriv(v) - (ps.q - 1.0) * f.eval(v) / v);
        rep.v.push_back(v);
        rep.value.push_back(val);
        rep.max_value = std::max(rep.max_value, val);
    }
    // the power law satisfies the condition with equality; allow roundoff
    rep.pass = rep.max_value <= 1e-12 * std::abs(factor) * std::max(1.0, std::pow(hi, ps.q - 2.0));
    return rep;
}

std::vector<Perturbation> perturbation_library(const Geometry& geom) {
    std::vector<Perturbation> lib;
    for (double a : {0.1, 0.3})
        for (int k : {1, 2, 3}) {
            Perturbation pt;
            pt.amplitude = a;
            pt.mode = k;
            pt.id = "a" + std::string(a == 0.1 ? "0.1" : "0.3") + "_k" + std::to_string(k);
            pt.field = geom.sample([a, k](double x) { return 1.0 + a * std::cos(k * x); });
            lib.push_back(std::move(pt));
        }
    return lib;
}

double curvature_ratio(const Geometry& geom, const ParamSet& ps, const Field& v, double gamma) {
    if (gamma == 0.0 || gamma == -ps.p) throw DegenerateGamma("gamma must differ from 0 and -p");
    require_positive(v, "solution");
    const double K = geom.ricci_constant();
    if (K == 0.0) return 0.0;
    const DerivedConstants dc = derive_constants(ps, Domain::Rigidity);
    const Field u = v.array().pow(-1.0 / dc.beta).matrix();
    const Eigen::ArrayXd g2 = gradient(geom, u).array().square();
    const Eigen::ArrayXd w = u.array().pow(2.0 * gamma / ps.p);
    const double num = integrate(geom, (w * g2.pow(ps.p - 1.0)).matrix());
    const double den = integrate(geom, (w * g2.pow(0.5 * ps.p)).matrix());
    if (den == 0.0) return 0.0;
    return K * num / den;
}

ScanReport rigidity_scan(const Geometry& geom, const ParamSet& base, const std::vector<double>& lambda_grid,
                         const std::vector<Perturbation>& perturbations, const ScanOptions& opts) {
    if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
        throw RangeError("lambda grid must be sorted ascending");
    ScanReport rep;
    rep.base = base;
    rep.manifold = geom.kind();
    rep.lambdas = lambda_grid;
    rep.lambda_hat = opts.lambda_hat;
    rep.lambda1 = opts.lambda1;
    for (const auto& pt : perturbations) rep.perturbations.push_back(pt.id);
    const std::size_t np = perturbations.size();
    rep.cells.resize(lambda_grid.size() * np);

    double gamma = 0.0;
    if (opts.gamma) {
        gamma = *opts.gamma;
    } else {
        const DerivedConstants dc = derive_constants(base, Domain::Rigidity);
        gamma = dc.beta / certificate_root(base.n, base.p, base.q);
    }

    parallel_for(rep.cells.size(), [&](std::size_t idx) {
        const std::size_t i = idx / np, j = idx % np;
        ScanCell& cell = rep.cells[idx];
        cell.lambda = lambda_grid[i];
        cell.perturbation = perturbations[j].id;
        ParamSet ps = base;
        ps.lambda = lambda_grid[i];
        try {
            const SolveResult sr = solve_stationary(geom, ps, power_law(ps.q), perturbations[j].field, opts.solve);
            cell.classified = sr.classified;
            cell.residual_norm = sr.residual_norm;
            cell.iterations = sr.iterations;
            cell.oscillation = sr.field.maxCoeff() - sr.field.minCoeff();
            if (sr.classified == Classification::Nonconstant && opts.lambda1)
                cell.threshold = cdc_threshold(ps, *opts.lambda1, curvature_ratio(geom, ps, sr.field, gamma));
        } catch (const Error& e) {
            cell.classified = Classification::Diverged;
            cell.error = std::string(e.kind()) + ": " + e.what();
        }
    });

    for (const auto& cell : rep.cells) {
        if (cell.classified == Classification::Nonconstant) {
            rep.first_nonconstant_lambda = cell.lambda;
            break;
        }
    }
    if (opts.lambda_hat) {
        bool all = true;
        for (const auto& cell : rep.cells)
            if (cell.lambda > 0.0 && cell.lambda < *opts.lambda_hat && cell.classified != Classification::ConstantOne)
                all = false;
        rep.constant_below_lambda_hat = all;
    }
    return rep;
}

void write_scan_csv(std::ostream& os, const ScanReport& rep) {
    os << "lambda";
    for (const auto& id : rep.perturbations) os << ',' << id;
    os << '\n';
    const std::size_t np = rep.perturbations.size();
    for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
        os << rep.lambdas[i];
        for (std::size_t j = 0; j < np; ++j) os << ',' << to_string(rep.cells[i * np + j].classified);
        os << '\n';
    }
}

}  // namespace rigidity
