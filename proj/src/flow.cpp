#include "rigidity/flow.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "rigidity/errors.hpp"
#include "rigidity/operators.hpp"

namespace rigidity {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct FlowExponents {
    DerivedConstants dc;
    double prefactor = 0.0;  // p - p beta
    double mass_power = 0.0; // beta q
};

FlowExponents flow_exponents(const ParamSet& ps) {
    FlowExponents fe;
    fe.dc = derive_constants(ps, Domain::Algebraic);
    fe.prefactor = ps.p - ps.p * fe.dc.beta;
    fe.mass_power = fe.dc.beta * ps.q;
    return fe;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

// One implicit step of dw/dt = div(a(u) grad w) with a frozen at u.
Field implicit_step(const Geometry& geom, const ParamSet& ps, const FlowExponents& fe, const Field& u, double dt,
                    double eps) {
    const Eigen::VectorXd pc = p_coefficient(geom, ps.p, u, eps);
    const Eigen::VectorXd& S = geom.face_measure();
    const Eigen::VectorXd& Q = geom.cell_measure();
    const double h = geom.spacing();
    const Field pre = u.array().pow(fe.prefactor).matrix();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(4 * geom.faces() + geom.size());
    for (int i = 0; i < geom.size(); ++i) t.emplace_back(i, i, Q[i]);
    for (int k = 0; k < geom.faces(); ++k) {
        const int i = k, j = geom.right_of(k);
        double c = 0.5 * (pre[i] + pre[j]) * pc[k];
        // a flat face carries no flux even when |grad u|^{p-2} is infinite
        if (!std::isfinite(c)) c = 0.0;
        const double d = dt * S[k] * c / h;
        t.emplace_back(i, i, d);
        t.emplace_back(i, j, -d);
        t.emplace_back(j, i, -d);
        t.emplace_back(j, j, d);
    }
    SpMat A(geom.size(), geom.size());
    A.setFromTriplets(t.begin(), t.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SingularOperator("implicit flow matrix is singular");
    const Field w = u.array().pow(fe.mass_power).matrix();
    const Field w_new = lu.solve(Q.cwiseProduct(w));
    return w_new.array().pow(1.0 / fe.mass_power).matrix();
}

double flow_eps(const Geometry& geom, const Field& u0, const FlowOptions& opts) {
    if (opts.eps >= 0.0) return opts.eps;
    return regularization_eps(geom, u0);
}

struct SampleValues {
    double mass, F, rhs, G;
};

SampleValues evaluate(const Geometry& geom, const ParamSet& ps, const FlowExponents& fe, const Field& u,
                      double eps) {
    SampleValues s;
    s.mass = integrate(geom, u.array().pow(fe.mass_power).matrix());
    s.F = functional_F(geom, ps, u);
    s.rhs = dissipation_rhs(geom, ps, u, eps);
    s.G = functional_G(geom, ps, u, fe.dc.theta, eps);
    return s;
}

double three_point(double t0, double f0, double t1, double f1, double t2, double f2) {
    const double h1 = t1 - t0, h2 = t2 - t1;
    return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
}

}  // namespace

std::vector<double> geometric_times(double t_end, int count, double first_fraction) {
    if (!(t_end > 0.0) || count < 1 || !(first_fraction > 0.0 && first_fraction <= 1.0))
        throw RangeError("geometric_times needs t_end > 0, count >= 1 and 0 < first_fraction <= 1");
    std::vector<double> t(static_cast<size_t>(count));
    if (count == 1) return {t_end};
    const double ratio = std::pow(1.0 / first_fraction, 1.0 / (count - 1));
    double x = first_fraction * t_end;
    for (int i = 0; i < count; ++i, x *= ratio) t[static_cast<size_t>(i)] = x;
    t.back() = t_end;
    return t;
}

double functional_F(const Geometry& geom, const ParamSet& ps, const Field& u) {
    check_aligned(geom, u);
    require_positive(u, "flow field");
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const double beta = dc.beta, p = ps.p;
    const double e1 = p * beta + p - 2.0;
    const double e2 = coupling_denominator(p, ps.q, beta);
    if (std::abs(e1) < 1e-12 * std::max(1.0, std::abs(p * beta)))
        throw ExponentPole("p beta + p - 2 vanishes");
    if (std::abs(e2) < 1e-12 * std::max(1.0, std::abs(beta * (ps.q - p))))
        throw ExponentPole("2 - p + beta (q - p) vanishes");

    const Eigen::VectorXd g = face_gradient(geom, u.array().pow(beta).matrix());
    const Eigen::VectorXd& S = geom.face_measure();
    double grad_term = 0.0;
    for (int k = 0; k < geom.faces(); ++k) grad_term += S[k] * std::pow(std::abs(g[k]), p);
    grad_term *= geom.spacing();
    if (ps.lambda == 0.0) return grad_term;

    const double coef = p * std::pow(std::abs(beta), p) * ps.lambda / (e1 * e2);
    const double a = integrate(geom, u.array().pow(e1).matrix());
    const double b = integrate(geom, u.array().pow(beta * ps.q).matrix());
    return grad_term + coef * (a - std::pow(b, p / ps.q));
}

double functional_G(const Geometry& geom, const ParamSet& ps, const Field& u, double theta, double eps) {
    check_aligned(geom, u);
    require_positive(u, "flow field");
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const double p = ps.p;
    const double c1 = dc.kappa + (dc.beta - 1.0) * (p - 1.0);
    const double c2 = dc.kappa * (dc.beta - 1.0) * (p - 1.0);
    const Eigen::ArrayXd L = p_laplacian(geom, p, u, eps).array();
    const AxisymmetricFrame fr = axisymmetric_frame(geom, p, u, eps);
    const Eigen::ArrayXd X = fr.grad_p.array() / u.array();
    return integrate(geom, (theta * L.square() + c1 * L * X + c2 * X.square()).matrix());
}

double functional_G_decomposed(const Geometry& geom, const ParamSet& ps, const Field& u, double theta,
                               double eps) {
    check_aligned(geom, u);
    require_positive(u, "flow field");
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const double n = ps.n, p = ps.p;
    const double shifted = n * (p - 1.0) + p;
    const double c1 = dc.kappa + (dc.beta - 1.0) * (p - 1.0);
    const double c = p * (n - 1.0) * c1 / (2.0 * theta * (p - 1.0) * shifted);
    const double mu = mu_kappa_form(ps.n, p, dc.beta, theta, dc.kappa);
    const AxisymmetricFrame fr = axisymmetric_frame(geom, p, u, eps);
    const Field Q = a_norm_sq(fr, fr.B_radial - c * fr.G_radial, fr.B_tangential - c * fr.G_tangential);
    const Eigen::ArrayXd ric = fr.ricci * fr.grad_pow_pm2.array() * fr.grad_p.array();
    const Eigen::ArrayXd X = fr.grad_p.array() / u.array();
    return theta * n / (n - 1.0) * integrate(geom, (Q.array() + ric).matrix()) -
           mu * integrate(geom, X.square().matrix());
}

double dissipation_rhs(const Geometry& geom, const ParamSet& ps, const Field& u, double eps) {
    check_aligned(geom, u);
    require_positive(u, "flow field");
    const DerivedConstants dc = derive_constants(ps, Domain::Algebraic);
    const double p = ps.p;
    const double c1 = dc.kappa + (dc.beta - 1.0) * (p - 1.0);
    const double c2 = dc.kappa * (dc.beta - 1.0) * (p - 1.0);
    const Eigen::ArrayXd L = p_laplacian(geom, p, u, eps).array();
    const AxisymmetricFrame fr = axisymmetric_frame(geom, p, u, eps);
    const Eigen::ArrayXd gp = fr.grad_p.array();
    const Eigen::ArrayXd X = gp / u.array();
    const double loss = integrate(geom, (L.square() + c1 * L * X + c2 * X.square()).matrix());
    const double gain = ps.lambda * integrate(geom, (u.array().pow(2.0 * p - 4.0) * gp).matrix());
    return p * std::pow(std::abs(dc.beta), p) * (gain - loss);
}

FlowTrace run_flow(const Geometry& geom, const ParamSet& ps, const Field& u0, double t_end,
                   const FlowOptions& opts) {
    check_aligned(geom, u0);
    require_positive(u0, "initial field");
    if (!(t_end > 0.0)) throw RangeError("t_end must be positive");
    if (!(opts.dt0 > 0.0)) throw RangeError("dt0 must be positive");
    const FlowExponents fe = flow_exponents(ps);

    std::vector<double> targets =
        opts.sample_times.empty() ? geometric_times(t_end, std::max(opts.samples, 1)) : opts.sample_times;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::remove_if(targets.begin(), targets.end(), [&](double s) { return !(s > 0.0 && s <= t_end); }),
                  targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.empty() || targets.back() < t_end) targets.push_back(t_end);

    FlowTrace tr;
    tr.params = ps;
    tr.eps = flow_eps(geom, u0, opts);
    const double dt_max = opts.dt_max > 0.0 ? opts.dt_max : t_end / 50.0;

    auto record = [&](double t, const Field& u) {
        const SampleValues s = evaluate(geom, ps, fe, u, tr.eps);
        tr.times.push_back(t);
        if (opts.keep_fields) tr.fields.push_back(u);
        tr.mass.push_back(s.mass);
        tr.F_values.push_back(s.F);
        tr.dF_dt_rhs.push_back(s.rhs);
        tr.G_values.push_back(s.G);
        tr.dF_dt_fd.push_back(std::numeric_limits<double>::quiet_NaN());
        return s.F;
    };

    // Sample awaiting the F value one step later; `before` is F one step earlier.
    struct Pending {
        bool active = false;
        size_t index = 0;
        bool has_before = false;
        double t_before = 0.0, F_before = 0.0;
    };
    Field u = u0;
    double t = 0.0;
    double dt = std::min(opts.dt0, dt_max);
    Pending pending{true, 0, false, 0.0, 0.0};
    record(0.0, u);
    size_t next = 0;
    bool last_reject_positivity = false;

    auto resolve = [&](double t_new, const Field& u_new) {
        const double ts = tr.times[pending.index], Fs = tr.F_values[pending.index];
        const double Fn = functional_F(geom, ps, u_new);
        tr.dF_dt_fd[pending.index] = pending.has_before
                                         ? three_point(pending.t_before, pending.F_before, ts, Fs, t_new, Fn)
                                         : (Fn - Fs) / (t_new - ts);
        pending.active = false;
    };

    while (next < targets.size() || pending.active) {
        const bool finishing = next >= targets.size();
        const double target = finishing ? t + dt : targets[next];
        // landing absorbs remainders far below dt so no step degenerates
        const bool land = !finishing && t + dt >= target - 1e-6 * dt;
        const double step = land ? target - t : dt;
        const double F_before = land ? functional_F(geom, ps, u) : 0.0;

        const Field u_new = implicit_step(geom, ps, fe, u, step, tr.eps);
        const bool positive = u_new.allFinite() && u_new.minCoeff() > 0.0;
        const double change = positive ? ((u_new - u).array().abs() / u.array()).maxCoeff() : 0.0;
        if (!positive || (!opts.fixed_dt && change > opts.max_rel_change)) {
            ++tr.rejected;
            last_reject_positivity = !positive;
            dt = 0.5 * step;
            if (dt < 1e-12 * t_end) {
                if (last_reject_positivity) throw PositivityLoss("flow step lost positivity at every dt");
                throw StiffnessAbort("flow step size fell below 1e-12 t_end");
            }
            continue;
        }
        ++tr.steps;
        const double t_new = land ? target : t + step;
        if (pending.active) resolve(t_new, u_new);
        const double rate = (u_new - u).cwiseAbs().maxCoeff() / step;
        u = u_new;
        t = t_new;
        if (finishing) break;
        if (land) {
            record(t, u);
            pending = Pending{true, tr.times.size() - 1, true, t - step, F_before};
            ++next;
        }
        if (!opts.fixed_dt && change < 0.5 * opts.max_rel_change) dt = std::min(std::max(dt, step) * 1.5, dt_max);
        if (rate < opts.steady_tol) {
            tr.steady = true;
            if (pending.active) resolve(t + step, implicit_step(geom, ps, fe, u, step, tr.eps));
            for (; next < targets.size(); ++next) {
                record(targets[next], u);
                tr.dF_dt_fd.back() = 0.0;
            }
            break;
        }
    }

    for (double m : tr.mass) tr.mass_drift = std::max(tr.mass_drift, std::abs(m - tr.mass[0]) / tr.mass[0]);
    return tr;
}

std::vector<IdentityReport> dissipation_identity_check(const Geometry& geom, const FlowTrace& tr, double g_tol) {
    if (tr.times.size() < 3) throw RangeError("dissipation check needs at least three samples");
    double scale = 0.0;
    for (double r : tr.dF_dt_rhs) scale = std::max(scale, std::abs(r));
    std::vector<double> gaps;
    size_t best = 0;
    for (size_t i = 1; i < tr.times.size(); ++i) {
        if (!std::isfinite(tr.dF_dt_fd[i]) || std::abs(tr.dF_dt_rhs[i]) <= 1e-6 * scale) continue;
        gaps.push_back(relative_gap(tr.dF_dt_fd[i], tr.dF_dt_rhs[i]));
        if (best == 0) best = i;
    }
    const double med = median(gaps);
    IdentityReport rate = make_report("energy_dissipation", best ? tr.dF_dt_fd[best] : 0.0,
                                      best ? tr.dF_dt_rhs[best] : 0.0, 1e-2, geom.intervals());
    rate.rel_gap = gaps.empty() ? 0.0 : med;
    rate.pass = rate.rel_gap < 1e-2;

    const DerivedConstants dc = derive_constants(tr.params, Domain::Algebraic);
    IdentityReport g = make_report("g_decomposition", 0.0, 0.0, g_tol, geom.intervals());
    for (const Field& u : tr.fields) {
        const double lhs = functional_G(geom, tr.params, u, dc.theta, tr.eps);
        const double rhs = functional_G_decomposed(geom, tr.params, u, dc.theta, tr.eps);
        const IdentityReport r = make_report("g_decomposition", lhs, rhs, g_tol, geom.intervals());
        if (r.rel_gap >= g.rel_gap) g = r;
    }
    return {rate, g};
}

void write_flow_csv(std::ostream& os, const FlowTrace& tr) {
    os << "t,mass,F,dF_dt_fd,dF_dt_rhs\n";
    os.precision(17);
    for (size_t i = 0; i < tr.times.size(); ++i)
        os << tr.times[i] << ',' << tr.mass[i] << ',' << tr.F_values[i] << ',' << tr.dF_dt_fd[i] << ','
           << tr.dF_dt_rhs[i] << '\n';
}

void write_flow_snapshots(const std::string& dir, const Geometry& geom, const FlowTrace& tr) {
    std::filesystem::create_directories(dir);
    for (size_t i = 0; i < tr.fields.size(); ++i) {
        std::ofstream os(std::filesystem::path(dir) / ("snapshot_" + std::to_string(i) + ".csv"));
        if (!os) throw ConfigError("cannot write snapshot into " + dir);
        write_field_csv(os, geom, tr.fields[i], "u");
    }
}

}  // namespace rigidity
