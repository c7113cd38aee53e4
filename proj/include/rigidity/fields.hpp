#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rigidity/geometry.hpp"

namespace rigidity {

/// A smooth positive function of the coordinate, independent of any grid.
struct FieldFunction {
    std::string name;
    std::function<double(double)> f;

    Field sample(const Geometry& geom) const { return geom.sample(f); }
};

/// Named test fields: "one", "exp-cos", "low-mode", "inverse-cos", "two-mode",
/// "bump", "high-mode" on both manifolds, and "shifted-sin" (2 + sin x) on the
/// torus only. Throws ConfigError for unknown names.
FieldFunction named_field(Manifold kind, const std::string& name);

std::vector<std::string> named_field_names(Manifold kind);

/// exp of a random trigonometric polynomial with `modes` terms whose
/// coefficients are normal with standard deviation sigma / k. Sphere fields
/// use cosines only, so they are smooth at the poles.
FieldFunction random_positive_field(Manifold kind, std::mt19937_64& rng, int modes = 4, double sigma = 0.4);

/// Ten fields: the six nonconstant named fields available on both manifolds
/// and four random ones from `seed`.
std::vector<FieldFunction> identity_corpus(Manifold kind, std::uint64_t seed);

}  // namespace rigidity
