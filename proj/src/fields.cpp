#include "rigidity/fields.hpp"

#include <cmath>

#include "rigidity/errors.hpp"

namespace rigidity {

FieldFunction named_field(Manifold kind, const std::string& name) {
    using std::cos;
    if (name == "one") return {name, [](double) { return 1.0; }};
    if (name == "exp-cos") return {name, [](double x) { return std::exp(cos(x)); }};
    if (name == "low-mode") return {name, [](double x) { return 1.0 + 0.3 * cos(x) + 0.2 * cos(2.0 * x); }};
    if (name == "inverse-cos") return {name, [](double x) { return 1.0 / (2.0 + cos(x)); }};
    if (name == "two-mode") return {name, [](double x) { return std::exp(0.5 * cos(x) + 0.2 * cos(2.0 * x)); }};
    if (name == "bump") return {name, [](double x) { return 1.0 + 0.5 * std::exp(-2.0 * (1.0 - cos(x))); }};
    if (name == "high-mode") return {name, [](double x) { return 1.0 + 0.1 * cos(3.0 * x); }};
    if (name == "shifted-sin" && kind == Manifold::TorusOneD) return {name, [](double x) { return 2.0 + std::sin(x); }};
    throw ConfigError("unknown field '" + name + "' for the " + to_string(kind));
}

std::vector<std::string> named_field_names(Manifold kind) {
    std::vector<std::string> names{"one", "exp-cos", "low-mode", "inverse-cos", "two-mode", "bump", "high-mode"};
    if (kind == Manifold::TorusOneD) names.push_back("shifted-sin");
    return names;
}

FieldFunction random_positive_field(Manifold kind, std::mt19937_64& rng, int modes, double sigma) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> a(static_cast<size_t>(modes)), b(static_cast<size_t>(modes), 0.0);
    for (int k = 1; k <= modes; ++k) {
        a[static_cast<size_t>(k - 1)] = sigma / k * normal(rng);
        if (kind == Manifold::TorusOneD) b[static_cast<size_t>(k - 1)] = sigma / k * normal(rng);
    }
    return {"random", [a, b](double x) {
                double s = 0.0;
                for (size_t k = 0; k < a.size(); ++k) {
                    const double kx = static_cast<double>(k + 1) * x;
                    s += a[k] * std::cos(kx) + b[k] * std::sin(kx);
                }
                return std::exp(s);
            }};
}

std::vector<FieldFunction> identity_corpus(Manifold kind, std::uint64_t seed) {
    std::vector<FieldFunction> out;
    for (const char* name : {"exp-cos", "low-mode", "inverse-cos", "two-mode", "bump", "high-mode"})
        out.push_back(named_field(kind, name));
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 4; ++i) {
        FieldFunction f = random_positive_field(kind, rng);
        f.name = "random-" + std::to_string(i);
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace rigidity
