#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigidity/errors.hpp"
#include "rigidity/fields.hpp"
#include "rigidity/flow.hpp"
#include "rigidity/operators.hpp"

using namespace rigidity;

namespace {

const ParamSet kBase{3, 2.0, 4.0, 0.0};

Field cos_field(const Geometry& g, double c, double a) {
    return g.sample([&](double x) { return c + a * std::cos(x); });
}

double max_increase(const std::vector<double>& F) {
    double worst = 0.0;
    for (size_t i = 1; i < F.size(); ++i) worst = std::max(worst, F[i] - F[i - 1]);
    return worst;
}

double auto_eps(const Geometry& g, const Field& u) {
    return 1e-8 * std::max(face_gradient(g, u).cwiseAbs().maxCoeff(), 1e-2);
}

}  // namespace

TEST_CASE("u = 1 is stationary with F = 0 and exact mass") {
    for (Manifold kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD}) {
        const Geometry g = build_geometry(kind, 3, 100);
        const FlowTrace tr = run_flow(g, ParamSet{3, 2.0, 4.0, 1.0}, g.constant(1.0), 1.0);
        CHECK(tr.steady);
        for (size_t i = 0; i < tr.times.size(); ++i) {
            CHECK((tr.fields[i].array() - 1.0).abs().maxCoeff() < 1e-14);
            CHECK(std::abs(tr.mass[i] - 1.0) < 1e-14);
            CHECK(std::abs(tr.F_values[i]) < 1e-14);
            CHECK(std::abs(tr.G_values[i]) < 1e-20);
        }
    }
}

TEST_CASE("mass is conserved and F decays on the sphere") {
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 400);
    const FlowTrace tr = run_flow(g, kBase, cos_field(g, 1.0, 0.2), 1.0);
    CHECK(tr.mass_drift < 1e-6);
    CHECK(tr.times.back() == 1.0);
    CHECK(std::is_sorted(tr.times.begin(), tr.times.end()));
    CHECK(max_increase(tr.F_values) < 1e-8 * std::abs(tr.F_values[0]));
    CHECK(tr.F_values.back() < 1e-2 * tr.F_values[0]);
}

TEST_CASE("F is nonincreasing below the threshold on both manifolds") {
    // lambda_hat is about 3 on the sphere and 1 on the torus for (3, 2, 4)
    for (auto [kind, lambda_hat] : {std::pair{Manifold::SphereAxisymmetric, 3.0}, std::pair{Manifold::TorusOneD, 1.0}}) {
        const Geometry g = build_geometry(kind, 3, 200);
        for (double frac : {0.0, 0.5, 0.9}) {
            ParamSet ps = kBase;
            ps.lambda = frac * lambda_hat;
            const FlowTrace tr = run_flow(g, ps, cos_field(g, 1.0, 0.2), 1.0);
            CAPTURE(frac);
            CHECK(max_increase(tr.F_values) < 1e-8 * std::abs(tr.F_values[0]));
        }
    }
}

TEST_CASE("F is quadratic in the amplitude") {
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 400);
    ParamSet ps = kBase;
    ps.lambda = 1.0;
    const double F2 = functional_F(g, ps, cos_field(g, 1.0, 1e-2));
    const double F3 = functional_F(g, ps, cos_field(g, 1.0, 1e-3));
    CHECK(F2 > 0.0);
    CHECK(F3 > 0.0);
    CHECK(F2 / F3 == doctest::Approx(100.0).epsilon(0.02));
    CHECK(std::abs(functional_F(g, ps, g.constant(1.0))) < 1e-14);
}

TEST_CASE("F at p = 2 agrees with the v = u^beta form") {
    // F = int |v'|^2 + lambda / (q - 2) (int v^2 - (int v^q)^{2/q}); v' exact
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 400);
    ParamSet ps = kBase;
    ps.lambda = 1.3;
    const double beta = 2.5, a = 0.2;
    const Field u = cos_field(g, 1.0, a);
    const Field v = u.array().pow(beta).matrix();
    const Field dv = g.sample([&](double x) { return -beta * a * std::sin(x) * std::pow(1.0 + a * std::cos(x), beta - 1.0); });
    const double oracle = integrate(g, dv.cwiseAbs2()) +
                          ps.lambda / (ps.q - 2.0) *
                              (integrate(g, v.cwiseAbs2()) - std::pow(integrate(g, v.array().pow(ps.q).matrix()), 2.0 / ps.q));
    CHECK(functional_F(g, ps, u) == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("G and its decomposition vanish at u = 1") {
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 100);
    const double theta = derive_constants(kBase).theta;
    CHECK(functional_G(g, kBase, g.constant(1.0), theta, 0.0) == 0.0);
    CHECK(functional_G_decomposed(g, kBase, g.constant(1.0), theta, 0.0) == 0.0);
}

TEST_CASE("G decomposition on 100 random fields") {
    // calibrated tolerance C N^{-2}: the gap is second-order discretization error
    const double C = 400.0;
    for (Manifold kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD}) {
        for (const ParamSet& ps : {kBase, ParamSet{4, 3.0, 5.0, 0.0}}) {
            const Geometry g = build_geometry(kind, ps.n, 400);
            const Geometry fine = build_geometry(kind, ps.n, 800);
            const double theta = derive_constants(ps).theta;
            std::mt19937_64 rng(20240611);
            int refined = 0;
            for (int i = 0; i < 100; ++i) {
                const FieldFunction f = random_positive_field(kind, rng);
                const Field u = f.sample(g);
                const double eps = auto_eps(g, u);
                const double lhs = functional_G(g, ps, u, theta, eps);
                const double rhs = functional_G_decomposed(g, ps, u, theta, eps);
                CHECK(relative_gap(lhs, rhs) < C / (400.0 * 400.0));
                if (kind == Manifold::SphereAxisymmetric) CHECK(rhs >= 0.0);

                const Field uf = f.sample(fine);
                const double ef = auto_eps(fine, uf);
                const double gap_f = relative_gap(functional_G(fine, ps, uf, theta, ef),
                                                  functional_G_decomposed(fine, ps, uf, theta, ef));
                if (relative_gap(lhs, rhs) / gap_f > 3.0) ++refined;
            }
            CHECK(refined >= 95);
        }
    }
}

TEST_CASE("dF/dt matches the dissipation law and the gap halves with dt") {
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 400);
    ParamSet ps = kBase;
    ps.lambda = 1.0;
    std::vector<double> gaps;
    for (double dt : {2e-3, 1e-3}) {
        FlowOptions o;
        o.fixed_dt = true;
        o.dt0 = dt;
        o.sample_times = {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0};
        const FlowTrace tr = run_flow(g, ps, cos_field(g, 1.0, 0.2), 1.0, o);
        const auto reports = dissipation_identity_check(g, tr);
        REQUIRE(reports.size() == 2);
        CHECK(reports[0].name == "energy_dissipation");
        CHECK(reports[0].pass);
        CHECK(reports[1].pass);
        gaps.push_back(reports[0].rel_gap);
    }
    CHECK(gaps[1] / gaps[0] < 0.6);
}

TEST_CASE("flow validation") {
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 50);
    Field bad = g.constant(1.0);
    bad[3] = 0.0;
    CHECK_THROWS_AS(run_flow(g, kBase, bad, 1.0), NonPositiveField);
    CHECK_THROWS_AS(run_flow(g, kBase, g.constant(1.0), 0.0), RangeError);
    CHECK_THROWS_AS(run_flow(g, kBase, Field::Ones(7), 1.0), ShapeMismatch);
    FlowOptions o;
    o.max_rel_change = 1e-300;
    CHECK_THROWS_AS(run_flow(g, kBase, cos_field(g, 1.0, 0.2), 1.0, o), StiffnessAbort);
}

TEST_CASE("F rejects a vanishing exponent") {
    // bisect q so that p beta + p - 2 = 0 at n = 3, p = 1.2 (root near q = 1.3)
    auto e1 = [](double q) {
        const DerivedConstants dc = derive_constants(ParamSet{3, 1.2, q, 0.0}, Domain::Algebraic);
        return 1.2 * dc.beta + 1.2 - 2.0;
    };
    double lo = 1.25, hi = 1.5;
    REQUIRE(e1(lo) * e1(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (e1(lo) * e1(mid) <= 0.0 ? hi : lo) = mid;
    }
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 50);
    CHECK_THROWS_AS(functional_F(g, ParamSet{3, 1.2, lo, 1.0}, cos_field(g, 1.0, 0.1)), ExponentPole);
}

TEST_CASE("geometric sample grid and CSV") {
    const auto t = geometric_times(5.0, 11, 1e-3);
    CHECK(t.size() == 11);
    CHECK(t.front() == doctest::Approx(5e-3));
    CHECK(t.back() == 5.0);
    for (size_t i = 2; i < t.size(); ++i) CHECK(t[i] / t[i - 1] == doctest::Approx(t[1] / t[0]));
    CHECK_THROWS_AS(geometric_times(0.0, 3), RangeError);

    const Geometry g = build_geometry(Manifold::TorusOneD, 2, 64);
    FlowOptions o;
    o.samples = 5;
    const FlowTrace tr = run_flow(g, ParamSet{2, 1.5, 1.8, 0.0}, cos_field(g, 2.0, 0.3), 0.5, o);
    std::ostringstream os;
    write_flow_csv(os, tr);
    const std::string csv = os.str();
    CHECK(csv.rfind("t,mass,F,dF_dt_fd,dF_dt_rhs\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(tr.times.size()) + 1);
    CHECK(tr.mass_drift < 1e-12);
}
