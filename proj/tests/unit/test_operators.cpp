#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rigidity/errors.hpp"
#include "rigidity/operators.hpp"

using namespace rigidity;

namespace {

// exp of a random low-mode trigonometric sum; even in theta on the sphere
Field random_smooth_positive(const Geometry& g, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 0.4);
    double a[4], b[4];
    for (int k = 0; k < 4; ++k) {
        a[k] = nd(rng) / (1 + k);
        b[k] = g.periodic() ? nd(rng) / (1 + k) : 0.0;
    }
    return g.sample([&](double x) {
        double s = 0;
        for (int k = 0; k < 4; ++k) s += a[k] * std::cos((k + 1) * x) + b[k] * std::sin((k + 1) * x);
        return std::exp(s);
    });
}

double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("p-Laplacian of a constant vanishes") {
    for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD})
        for (double p : {1.5, 2.0, 3.0}) {
            const Geometry g = build_geometry(kind, 3, 64);
            CHECK(max_abs(p_laplacian(g, p, g.constant(2.0), 1e-8)) == 0.0);
        }
}

TEST_CASE("Laplacian of cos theta is -n cos theta") {
    for (int n : {2, 3, 5}) {
        double prev = 0;
        for (int N : {100, 200, 400}) {
            const Geometry g = build_geometry(Manifold::SphereAxisymmetric, n, N);
            const Field u = g.sample([](double t) { return std::cos(t); });
            const double err = max_abs(p_laplacian(g, 2.0, u, 0.0) + n * u);
            CHECK(err < 5.0 * n * g.spacing() * g.spacing());
            if (prev > 0) CHECK(std::log2(prev / err) > 1.8);
            prev = err;
        }
    }
}

TEST_CASE("torus p = 3 Laplacian of sin x") {
    double prev = 0;
    for (int N : {128, 256, 512}) {
        const Geometry g = build_geometry(Manifold::TorusOneD, 2, N);
        const Field u = g.sample([](double x) { return std::sin(x); });
        const Field ref = g.sample([](double x) { return -2.0 * std::abs(std::cos(x)) * std::sin(x); });
        const Field lap = p_laplacian(g, 3.0, u, 0.0);
        double err = 0;
        for (int i = 0; i < g.size(); ++i)
            if (std::abs(std::cos(g.coords()[i])) > 0.2) err = std::max(err, std::abs(lap[i] - ref[i]));
        if (prev > 0) CHECK(std::log2(prev / err) > 1.8);
        prev = err;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("p-Laplacian is conservative") {
    std::mt19937_64 rng(3);
    for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD})
        for (double p : {1.3, 2.0, 2.7, 4.0}) {
            const Geometry g = build_geometry(kind, 4, 150);
            for (int r = 0; r < 10; ++r) {
                const Field u = random_smooth_positive(g, rng);
                const Field lap = p_laplacian(g, p, u, default_eps(g, u));
                CHECK(std::abs(integrate(g, lap)) < 1e-12 * (1.0 + max_abs(lap)));
            }
        }
}

TEST_CASE("linearized operator") {
    std::mt19937_64 rng(5);
    SUBCASE("reduces to the Laplacian at p = 2") {
        const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 100);
        const Field u = random_smooth_positive(g, rng);
        const Field psi = random_smooth_positive(g, rng);
        CHECK(max_abs(linearized_apply(g, 2.0, u, psi, 0.0) - p_laplacian(g, 2.0, psi, 0.0)) < 1e-10);
    }
    SUBCASE("annihilates constants and maps u to (p-1) Delta_p u") {
        for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD}) {
            const Geometry g = build_geometry(kind, 3, 100);
            const Field u = random_smooth_positive(g, rng);
            const double eps = default_eps(g, u);
            CHECK(max_abs(linearized_apply(g, 3.0, u, g.constant(1.0), eps)) == 0.0);
            const Field lu = linearized_apply(g, 3.0, u, u, eps);
            const Field pl = p_laplacian(g, 3.0, u, eps);
            CHECK(max_abs(lu - 2.0 * pl) < 1e-12 * (1.0 + max_abs(pl)));
        }
    }
    SUBCASE("is self-adjoint in the quadrature inner product") {
        for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD})
            for (double p : {1.5, 2.0, 3.5}) {
                const Geometry g = build_geometry(kind, 3, 120);
                for (int r = 0; r < 5; ++r) {
                    const Field u = random_smooth_positive(g, rng);
                    const Field psi = random_smooth_positive(g, rng);
                    const Field phi = random_smooth_positive(g, rng);
                    const double eps = default_eps(g, u);
                    const Field lpsi = linearized_apply(g, p, u, psi, eps);
                    const Field lphi = linearized_apply(g, p, u, phi, eps);
                    const double a = integrate(g, lpsi.cwiseProduct(phi));
                    const double b = integrate(g, psi.cwiseProduct(lphi));
                    const double scale = max_abs(lpsi) * max_abs(phi) + max_abs(psi) * max_abs(lphi);
                    CHECK(std::abs(a - b) < 1e-12 * scale);
                }
            }
    }
    SUBCASE("flags a degenerate gradient") {
        const Geometry g = build_geometry(Manifold::TorusOneD, 2, 64);
        const Field u = g.sample([](double x) { return 2.0 + (x < 1.0 ? 0.0 : std::sin(x - 1.0)); });
        CHECK_THROWS_AS(linearized_apply(g, 1.5, u, u, 0.0), DegenerateGradient);
        CHECK_NOTHROW(linearized_apply(g, 1.5, u, u, 1e-6));
        CHECK_NOTHROW(linearized_apply(g, 2.5, u, u, 0.0));
    }
}

TEST_CASE("diagnostics of a constant vanish") {
    for (double p : {2.0, 3.0}) {
        const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 4, 64);
        const TensorDiagnostics d = tensor_diagnostics(g, {4, p, 5.0, 0.0}, g.constant(1.5), 0.0);
        for (const Field* f : {&d.p_lap, &d.hess_A_norm_sq, &d.J, &d.B_norm_sq, &d.G_norm_sq, &d.BG_bracket,
                               &d.Q_a_norm_sq, &d.ric_term})
            CHECK(max_abs(*f) == 0.0);
    }
}

TEST_CASE("diagnostics validate inputs") {
    const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 64);
    CHECK_THROWS_AS(tensor_diagnostics(g, {3, 2.0, 4.0, 0.0}, g.constant(-1.0), 0.0), NonPositiveField);
    CHECK_THROWS_AS(tensor_diagnostics(g, {4, 2.0, 4.0, 0.0}, g.constant(1.0), 0.0), RangeError);
}

TEST_CASE("tensor algebra identities hold pointwise") {
    std::mt19937_64 rng(9);
    for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD})
        for (double p : {1.5, 2.0, 2.5, 3.5}) {
            const int n = 4;
            const Geometry g = build_geometry(kind, n, 160);
            const ParamSet ps{n, p, 0.5 * (p + p_star(n, p)), 0.0};
            for (int r = 0; r < 5; ++r) {
                const Field u = random_smooth_positive(g, rng);
                const double eps = default_eps(g, u);
                const TensorDiagnostics d = tensor_diagnostics(g, ps, u, eps);
                const AxisymmetricFrame fr = axisymmetric_frame(g, p, u, eps);
                const Eigen::ArrayXd sp = fr.grad_pow_pm2.array();
                // B from its definition against the trace identity
                const Eigen::ArrayXd b2 = sp.square() * d.hess_A_norm_sq.array() - fr.p_lap_pointwise.array().square() / n;
                const double bs = d.B_norm_sq.cwiseAbs().maxCoeff() + 1e-300;
                CHECK(((d.B_norm_sq.array() - b2).abs() / bs).maxCoeff() < 1e-10);
                // ||Gu||^2 = (n-1)(p-1)^2/n |grad u|^{2p} / u^2
                const Eigen::ArrayXd x2 = (fr.grad_p.array() / u.array()).square();
                for (int i = 0; i < g.size(); ++i) {
                    if (x2[i] < 1e-20) continue;
                    CHECK(d.G_norm_sq[i] / x2[i] == doctest::Approx((n - 1.0) * (p - 1) * (p - 1) / n).epsilon(1e-12));
                }
            }
        }
}

TEST_CASE("J is nonnegative for random smooth fields") {
    std::mt19937_64 rng(13);
    int count = 0;
    for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD})
        for (double p : {1.4, 2.0, 2.6, 3.2})
            for (int r = 0; r < 25; ++r) {
                const int n = 4;
                const Geometry g = build_geometry(kind, n, 100);
                const Field u = random_smooth_positive(g, rng);
                const TensorDiagnostics d =
                    tensor_diagnostics(g, {n, p, 0.5 * (p + p_star(n, p)), 0.0}, u, default_eps(g, u));
                CHECK(d.J.minCoeff() >= -1e-10);
                ++count;
            }
    CHECK(count == 200);
}

TEST_CASE("integrated Bochner identity converges at second order") {
    for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD})
        for (double p : {2.0, 3.0}) {
            const int n = kind == Manifold::TorusOneD ? 2 : 4;
            auto u_of = [&](double x) { return std::exp(0.5 * std::cos(x) + 0.2 * std::cos(2 * x)); };
            double gap[3];
            int k = 0;
            for (int N : {100, 200, 400}) {
                const Geometry g = build_geometry(kind, n, N);
                const Field u = g.sample(u_of);
                const ParamSet ps{n, p, 2.5, 0.0};
                const TensorDiagnostics d = tensor_diagnostics(g, ps, u, default_eps(g, u));
                const double lhs = integrate(g, d.p_lap.cwiseAbs2());
                const double rhs = n / (n - 1.0) * integrate(g, d.B_norm_sq + d.ric_term);
                gap[k++] = std::abs(lhs - rhs) / std::abs(lhs);
            }
            CHECK(std::log2(gap[0] / gap[1]) > 1.8);
            CHECK(std::log2(gap[1] / gap[2]) > 1.8);
        }
}

TEST_CASE("eps halving leaves integrated diagnostics unchanged") {
    for (auto kind : {Manifold::SphereAxisymmetric, Manifold::TorusOneD}) {
        const int n = 3;
        const Geometry g = build_geometry(kind, n, 200);
        const Field u = g.sample([](double x) { return 2.0 + std::cos(x) + 0.3 * std::cos(2 * x); });
        const ParamSet ps{n, 1.5, 2.5, 0.0};
        const double eps = default_eps(g, u);
        const TensorDiagnostics a = tensor_diagnostics(g, ps, u, eps);
        const TensorDiagnostics b = tensor_diagnostics(g, ps, u, 0.5 * eps);
        for (auto m : {&TensorDiagnostics::J, &TensorDiagnostics::B_norm_sq, &TensorDiagnostics::G_norm_sq,
                       &TensorDiagnostics::ric_term}) {
            const double ia = integrate(g, a.*m), ib = integrate(g, b.*m);
            CHECK(std::abs(ia - ib) <= 0.01 * std::abs(ia));
        }
        const double la = integrate(g, a.p_lap.cwiseAbs2()), lb = integrate(g, b.p_lap.cwiseAbs2());
        CHECK(std::abs(la - lb) <= 0.01 * la);
    }
}

TEST_CASE("Bochner residual") {
    SUBCASE("vanishes on constants") {
        const Geometry g = build_geometry(Manifold::SphereAxisymmetric, 3, 64);
        CHECK(max_abs(bochner_residual(g, 2.0, g.constant(3.0), 1e-8)) == 0.0);
    }
    SUBCASE("torus p = 2 converges at second order") {
        double prev = 0;
        for (int N : {128, 256, 512}) {
            const Geometry g = build_geometry(Manifold::TorusOneD, 2, N);
            const Field u = g.sample([](double x) { return std::sin(x); });
            const double r = max_abs(bochner_residual(g, 2.0, u, 0.0));
            if (prev > 0) CHECK(std::log2(prev / r) >= 1.8);
            prev = r;
        }
    }
    SUBCASE("sphere p = 2 carries the (n-1)|grad u|^2 curvature term") {
        const int n = 3;
        double prev = 0;
        for (int N : {100, 200, 400}) {
            const Geometry g = build_geometry(Manifold::SphereAxisymmetric, n, N);
            const Field u = g.sample([](double t) { return std::cos(t); });
            const TensorDiagnostics d = tensor_diagnostics(g, {n, 2.0, 4.0, 0.0}, u.array() + 2.0, 0.0);
            const AxisymmetricFrame fr = axisymmetric_frame(g, 2.0, u, 0.0);
            CHECK(max_abs(d.ric_term - (n - 1.0) * fr.grad_p) < 1e-12);
            const double r = max_abs(bochner_residual(g, 2.0, u, 0.0));
            CHECK(r < 10.0 * g.spacing() * g.spacing());
            if (prev > 0) CHECK(std::log2(prev / r) > 1.8);
            prev = r;
        }
    }
}

TEST_CASE("diagnostics CSV") {
    const Geometry g = build_geometry(Manifold::TorusOneD, 2, 16);
    const Field u = g.sample([](double x) { return 2.0 + std::sin(x); });
    std::ostringstream os;
    write_diagnostics_csv(os, g, tensor_diagnostics(g, {2, 2.0, 3.0, 0.0}, u, 1e-8));
    const std::string s = os.str();
    CHECK(s.substr(0, s.find('\n')) == "x,p_lap,hess_A_norm_sq,J,B_norm_sq,G_norm_sq,BG_bracket,Q_a_norm_sq,ric_term");
    CHECK(std::count(s.begin(), s.end(), '\n') == 17);
}
