#include "rigidity/spectral.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

#include "rigidity/elliptic.hpp"
#include "rigidity/errors.hpp"
#include "rigidity/operators.hpp"
#include "rigidity/parallel.hpp"

namespace rigidity {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Weighted stiffness of -L: psi^T K psi = int |grad psi|_A^2 |grad u|^{p-2}.
SpMat stiffness(const Geometry& geom, const ParamSet& ps, const Field& u, double eps) {
    const Eigen::VectorXd c = linearized_coefficient(geom, ps.p, u, eps);
    const Eigen::VectorXd& S = geom.face_measure();
    const double h = geom.spacing();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(4 * geom.faces());
    for (int k = 0; k < geom.faces(); ++k) {
        const int i = k, j = geom.right_of(k);
        const double d = S[k] * c[k] / h;
        if (!std::isfinite(d)) throw SingularOperator("linearized coefficient is not finite");
        t.emplace_back(i, i, d);
        t.emplace_back(i, j, -d);
        t.emplace_back(j, i, -d);
        t.emplace_back(j, j, d);
    }
    SpMat K(geom.size(), geom.size());
    K.setFromTriplets(t.begin(), t.end());
    return K;
}

void remove_mean(const Eigen::VectorXd& Q, Field& x) {
    x.array() -= Q.dot(x) / Q.sum();
}

Field random_trig(const Geometry& geom, std::mt19937_64& rng, int modes) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> a(static_cast<size_t>(modes)), b(static_cast<size_t>(modes));
    for (int k = 0; k < modes; ++k) {
        a[static_cast<size_t>(k)] = normal(rng) / (k + 1);
        b[static_cast<size_t>(k)] = geom.periodic() ? normal(rng) / (k + 1) : 0.0;
    }
    return geom.sample([&](double x) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k)
            s += a[static_cast<size_t>(k)] * std::cos((k + 1) * x) + b[static_cast<size_t>(k)] * std::sin((k + 1) * x);
        return s;
    });
}

double field_eps(const Geometry& geom, const Field& u, double eps) {
    if (eps >= 0.0) return eps;
    return regularization_eps(geom, u);
}

}  // namespace

std::pair<double, double> poincare_sides(const Geometry& geom, const ParamSet& ps, const Field& u, double eps,
                                         double lambda1_value, const Field& psi) {
    check_aligned(geom, psi);
    const SpMat K = stiffness(geom, ps, u, eps);
    const Field Kpsi = K * psi;
    const double lhs = Kpsi.cwiseAbs2().cwiseQuotient(geom.cell_measure()).sum();
    return {lhs, lambda1_value * psi.dot(Kpsi)};
}

Lambda1Result lambda1(const Geometry& geom, const ParamSet& ps, const Field& u, double eps,
                      const Lambda1Options& opts) {
    check_aligned(geom, u);
    const SpMat K = stiffness(geom, ps, u, eps);
    const Eigen::VectorXd& Q = geom.cell_measure();
    double scale = 0.0;
    for (int i = 0; i < geom.size(); ++i) scale = std::max(scale, K.coeff(i, i) / Q[i]);
    if (!(scale > 0.0)) throw SingularOperator("linearized operator vanishes");

    const double shift = 1e-10 * scale;
    SpMat A = K;
    for (int i = 0; i < geom.size(); ++i) A.coeffRef(i, i) += shift * Q[i];
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SingularOperator("shifted operator is singular");

    Field x = geom.sample([](double t) { return std::cos(t) + 0.5 * std::sin(t) + 0.2 * std::cos(2.0 * t); });
    remove_mean(Q, x);
    x /= std::sqrt(x.dot(Q.cwiseProduct(x)));
    Lambda1Result res;
    double value = x.dot(K * x);
    for (res.iterations = 1; res.iterations <= opts.max_iter; ++res.iterations) {
        Field y = lu.solve(Q.cwiseProduct(x));
        remove_mean(Q, y);
        const double norm = std::sqrt(y.dot(Q.cwiseProduct(y)));
        if (!(norm > 0.0) || !std::isfinite(norm)) throw SingularOperator("inverse iteration collapsed");
        y /= norm;
        const double next = y.dot(K * y);
        const double change = std::abs(next - value);
        x = y;
        value = next;
        if (change <= opts.tol * std::abs(value)) break;
    }
    res.iterations = std::min(res.iterations, opts.max_iter);
    if (!(value > 1e-10 * scale)) throw SingularOperator("deflated operator has a kernel beyond the constants");
    res.value = value;
    res.field = x;

    auto ratio = [&](const Field& psi) {
        const auto [lhs, rhs] = poincare_sides(geom, ps, u, eps, value, psi);
        return lhs / rhs;
    };
    res.eigenfield_ratio = ratio(x);
    std::mt19937_64 rng(opts.seed);
    res.min_random_ratio = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opts.poincare_samples; ++s) res.min_random_ratio = std::min(res.min_random_ratio, ratio(random_trig(geom, rng, 6)));
    res.poincare_pass = std::abs(res.eigenfield_ratio - 1.0) < 1e-8 && res.min_random_ratio >= 1.0 - 1e-12;
    return res;
}

double lambda_star_quotient(const Geometry& geom, const ParamSet& ps, const Field& u, double eps) {
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const TensorDiagnostics d = tensor_diagnostics(geom, ps, u, eps);
    const AxisymmetricFrame fr = axisymmetric_frame(geom, ps.p, u, eps);
    const double n = ps.n, theta = dc.theta;
    const double num = (1.0 - theta) * integrate(geom, d.p_lap.cwiseAbs2()) +
                       theta * n / (n - 1.0) * integrate(geom, d.Q_a_norm_sq + d.ric_term);
    const double den = integrate(geom, (u.array().pow(2.0 * ps.p - 4.0) * fr.grad_p.array()).matrix());
    if (!(den > 0.0)) throw RangeError("quotient is undefined for a constant field");
    return num / den;
}

Field normalize_mass(const Geometry& geom, const ParamSet& ps, const Field& u) {
    require_positive(u, "candidate field");
    const double bq = derive_constants(ps, Domain::Algebraic).beta * ps.q;
    const double mass = integrate(geom, u.array().pow(bq).matrix());
    return u * std::pow(mass, -1.0 / bq);
}

LambdaStarReport lambda_star_estimate(const Geometry& geom, const ParamSet& ps, const LambdaStarOptions& opts) {
    if (opts.modes < 1) throw RangeError("lambda_star_estimate needs at least one mode");
    derive_constants(ps, Domain::Algebraic);

    std::vector<Field> basis;
    for (int k = 1; k <= opts.modes; ++k) {
        basis.push_back(geom.sample([k](double x) { return std::cos(k * x); }));
        if (geom.periodic()) basis.push_back(geom.sample([k](double x) { return std::sin(k * x); }));
    }
    const int dim = static_cast<int>(basis.size());
    using Coeffs = Eigen::VectorXd;

    auto build = [&](const Coeffs& a) {
        Field u = geom.constant(1.0);
        for (int k = 0; k < dim; ++k) u += a[k] * basis[static_cast<size_t>(k)];
        return u;
    };
    auto project = [&](Coeffs a) {
        const double norm = a.norm();
        if (norm < opts.amplitude_floor) {
            if (norm == 0.0) a[0] = opts.amplitude_floor;
            else a *= opts.amplitude_floor / norm;
        }
        return a;
    };
    std::atomic<int> evaluations{0};
    auto objective = [&](const Coeffs& a) {
        ++evaluations;
        const Field raw = build(a);
        if (!(raw.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
        const Field u = normalize_mass(geom, ps, raw);
        const double value = lambda_star_quotient(geom, ps, u, field_eps(geom, u, opts.eps));
        return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
    };

    std::vector<Coeffs> seeds;
    for (const Perturbation& pert : perturbation_library(geom)) {
        Coeffs a = Coeffs::Zero(dim);
        const int stride = geom.periodic() ? 2 : 1;
        if (pert.mode <= opts.modes) a[(pert.mode - 1) * stride] = pert.amplitude;
        seeds.push_back(a);
    }
    // the p = 2 infimum is approached at vanishing amplitude
    for (int k = 0; k < dim; ++k) {
        Coeffs a = Coeffs::Zero(dim);
        a[k] = 10.0 * opts.amplitude_floor;
        seeds.push_back(a);
    }
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int s = 0; s < opts.random_starts; ++s) {
        Coeffs a(dim);
        for (int k = 0; k < dim; ++k) a[k] = 0.2 * normal(rng) / (1 + k / (geom.periodic() ? 2 : 1));
        seeds.push_back(a);
    }

    struct Outcome {
        Coeffs a;
        double value = std::numeric_limits<double>::infinity();
        bool converged = true;
    };
    std::vector<Outcome> outcomes(seeds.size());
    parallel_for(seeds.size(), [&](size_t idx) {
        Coeffs a = project(seeds[idx]);
        double J = objective(a);
        Outcome out{a, J, true};
        double step = 0.05;
        if (!std::isfinite(J)) {
            outcomes[idx] = out;
            return;
        }
        out.converged = false;
        for (int it = 0; it < opts.max_iter; ++it) {
            Coeffs grad(dim);
            const double hd = 1e-6 * std::max(1.0, a.norm());
            for (int k = 0; k < dim; ++k) {
                Coeffs ap = a, am = a;
                ap[k] += hd;
                am[k] -= hd;
                grad[k] = (objective(ap) - objective(am)) / (2.0 * hd);
            }
            const double gnorm = grad.norm();
            if (!std::isfinite(gnorm) || gnorm < 1e-12 * std::max(1.0, std::abs(J))) {
                out.converged = true;
                break;
            }
            bool moved = false;
            for (step = std::min(2.0 * step, 0.5); step > 1e-9; step *= 0.5) {
                const Coeffs trial = project(a - step * grad / gnorm);
                const double Jt = objective(trial);
                if (Jt < J - 1e-4 * step * gnorm) {
                    const double gain = J - Jt;
                    a = trial;
                    J = Jt;
                    moved = true;
                    if (gain < 1e-12 * std::abs(J)) out.converged = true;
                    break;
                }
            }
            if (!moved || out.converged) {
                out.converged = true;
                break;
            }
        }
        out.a = a;
        out.value = J;
        outcomes[idx] = out;
    });

    LambdaStarReport rep;
    rep.normalization = "int u^{beta q} dV = 1";
    size_t best = 0;
    for (size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].value < outcomes[best].value) best = i;
        if (!outcomes[i].converged) rep.nonconvergence = true;
    }
    if (!std::isfinite(outcomes[best].value)) throw RangeError("no admissible candidate");
    rep.best_value = outcomes[best].value;
    rep.best_coefficients.assign(outcomes[best].a.data(), outcomes[best].a.data() + dim);
    rep.best_field = normalize_mass(geom, ps, build(outcomes[best].a));
    for (double c : {0.5, 1.0, 2.0}) {
        const Field v = c * rep.best_field;
        rep.scale_sensitivity.push_back(lambda_star_quotient(geom, ps, v, field_eps(geom, v, opts.eps)));
    }
    rep.candidates_evaluated = evaluations.load();
    return rep;
}

}  // namespace rigidity
