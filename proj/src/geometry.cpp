#include "rigidity/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rigidity/errors.hpp"

namespace rigidity {
namespace {

// Integral of sin^{k} over [a, b] by 8-point Gauss-Legendre (b - a is at most one cell).
double sin_power_integral(int k, double a, double b) {
    static constexpr std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290,
                                                0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> w = {0.3626837833783620, 0.3137066458778873,
                                                0.2223810344533745, 0.1012285362903763};
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double sgn : {-1.0, 1.0}) {
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * sgn * x[i];
            sum += w[i] * std::pow(std::sin(t), k);
        }
    }
    return 0.5 * (b - a) * sum;
}

}  // namespace

std::string to_string(Manifold kind) {
    return kind == Manifold::SphereAxisymmetric ? "sphere" : "torus";
}

Manifold manifold_from_string(const std::string& name) {
    if (name == "sphere") return Manifold::SphereAxisymmetric;
    if (name == "torus") return Manifold::TorusOneD;
    throw ConfigError("unknown geometry '" + name + "' (expected sphere or torus)");
}

Geometry Geometry::build(Manifold kind, int n, int N) {
    if (n < 2) throw RangeError("geometry dimension must be >= 2");
    if (N < 16) throw RangeError("geometry needs N >= 16 intervals");

    Geometry g;
    g.kind_ = kind;
    g.n_ = n;
    g.N_ = N;
    if (kind == Manifold::SphereAxisymmetric) {
        const double pi = std::numbers::pi;
        g.h_ = pi / N;
        g.ricci_ = n - 1.0;
        g.coords_.resize(N + 1);
        g.weight_.resize(N + 1);
        g.cell_.resize(N + 1);
        g.face_.resize(N);
        for (int i = 0; i <= N; ++i) {
            g.coords_[i] = i * g.h_;
            g.weight_[i] = (i == 0 || i == N) ? 0.0 : std::pow(std::sin(g.coords_[i]), n - 1);
            const double lo = std::max(0.0, g.coords_[i] - 0.5 * g.h_);
            const double hi = std::min(pi, g.coords_[i] + 0.5 * g.h_);
            g.cell_[i] = sin_power_integral(n - 1, lo, hi);
        }
        for (int k = 0; k < N; ++k) g.face_[k] = std::pow(std::sin((k + 0.5) * g.h_), n - 1);
        const double c = 1.0 / g.cell_.sum();
        g.weight_ *= c;
        g.cell_ *= c;
        g.face_ *= c;
    } else {
        const double period = 2.0 * std::numbers::pi;
        g.h_ = period / N;
        g.ricci_ = 0.0;
        g.coords_ = Eigen::VectorXd::LinSpaced(N, 0.0, period - g.h_);
        g.weight_ = Eigen::VectorXd::Constant(N, 1.0 / period);
        g.cell_ = Eigen::VectorXd::Constant(N, 1.0 / N);
        g.face_ = Eigen::VectorXd::Constant(N, 1.0 / period);
    }
    return g;
}

Field Geometry::sample(const std::function<double(double)>& f) const {
    Field out(size());
    for (int i = 0; i < size(); ++i) out[i] = f(coords_[i]);
    return out;
}

void check_aligned(const Geometry& geom, const Field& f) {
    if (f.size() != geom.size())
        throw ShapeMismatch("field has " + std::to_string(f.size()) + " values, geometry has " +
                            std::to_string(geom.size()) + " nodes");
}

double integrate(const Geometry& geom, const Field& f) {
    check_aligned(geom, f);
    return geom.cell_measure().dot(f);
}

Eigen::VectorXd face_gradient(const Geometry& geom, const Field& u) {
    check_aligned(geom, u);
    Eigen::VectorXd g(geom.faces());
    const double inv_h = 1.0 / geom.spacing();
    for (int k = 0; k < geom.faces(); ++k) g[k] = (u[geom.right_of(k)] - u[k]) * inv_h;
    return g;
}

Field gradient(const Geometry& geom, const Field& u) {
    check_aligned(geom, u);
    const int m = geom.size();
    const double inv_2h = 0.5 / geom.spacing();
    Field g(m);
    if (geom.periodic()) {
        for (int i = 0; i < m; ++i) g[i] = (u[(i + 1) % m] - u[(i + m - 1) % m]) * inv_2h;
    } else {
        // even reflection across each pole
        g[0] = 0.0;
        g[m - 1] = 0.0;
        for (int i = 1; i < m - 1; ++i) g[i] = (u[i + 1] - u[i - 1]) * inv_2h;
    }
    return g;
}

Field gradient_magnitude(const Geometry& geom, const Field& u) { return gradient(geom, u).cwiseAbs(); }

Field gradient_energy(const Geometry& geom, const Field& u) {
    const Eigen::VectorXd gf = face_gradient(geom, u);
    const int m = geom.size();
    const int F = geom.faces();
    Field e(m);
    if (geom.periodic()) {
        for (int i = 0; i < m; ++i) {
            const double a = gf[(i + F - 1) % F];
            const double b = gf[i];
            e[i] = 0.5 * (a * a + b * b);
        }
    } else {
        // the reflected ghost face mirrors the first interior face
        e[0] = gf[0] * gf[0];
        e[m - 1] = gf[F - 1] * gf[F - 1];
        for (int i = 1; i < m - 1; ++i) e[i] = 0.5 * (gf[i - 1] * gf[i - 1] + gf[i] * gf[i]);
    }
    return e;
}

HessianComponents hessian_components(const Geometry& geom, const Field& u) {
    const Field g = gradient(geom, u);
    const int m = geom.size();
    const double inv_2h = 0.5 / geom.spacing();
    HessianComponents hc;
    hc.radial.resize(m);
    hc.tangential.setZero(m);
    if (geom.periodic()) {
        for (int i = 0; i < m; ++i) hc.radial[i] = (g[(i + 1) % m] - g[(i + m - 1) % m]) * inv_2h;
        return hc;
    }
    // u' is odd across the poles
    hc.radial[0] = 2.0 * g[1] * inv_2h;
    hc.radial[m - 1] = -2.0 * g[m - 2] * inv_2h;
    for (int i = 1; i < m - 1; ++i) hc.radial[i] = (g[i + 1] - g[i - 1]) * inv_2h;
    const Eigen::VectorXd& th = geom.coords();
    for (int i = 1; i < m - 1; ++i) hc.tangential[i] = g[i] / std::tan(th[i]);
    hc.tangential[0] = hc.radial[0];
    hc.tangential[m - 1] = hc.radial[m - 1];
    return hc;
}

void write_field_csv(std::ostream& os, const Geometry& geom, const Field& f,
                     const std::string& value_name) {
    check_aligned(geom, f);
    os << (geom.periodic() ? "x" : "theta") << "," << value_name << "\n";
    os.precision(17);
    for (int i = 0; i < geom.size(); ++i) os << geom.coords()[i] << "," << f[i] << "\n";
}

}  // namespace rigidity
