#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rigidity/geometry.hpp"
#include "rigidity/params.hpp"

namespace rigidity {

struct Lambda1Options {
    int max_iter = 500;
    double tol = 1e-12;
    /// Random test functions for the Poincare check.
    int poincare_samples = 20;
    std::uint64_t seed = 20240611;
};

struct Lambda1Result {
    double value = 0.0;
    /// Eigenfield with zero mean and unit weighted L^2 norm.
    Field field;
    int iterations = 0;
    /// int (L psi)^2 / (lambda1 int |grad psi|_A^2 |grad u|^{p-2}) on the
    /// eigenfield; equals 1 up to the iteration tolerance.
    double eigenfield_ratio = 0.0;
    /// Smallest ratio over the random test functions; >= 1 when the
    /// inequality holds.
    double min_random_ratio = 0.0;
    bool poincare_pass = false;
};

/// Smallest positive eigenvalue of the discrete -L at u, where
/// L psi = div(|grad u|^{p-2} A grad psi), in the weighted inner product.
/// Shifted inverse iteration on the mean-zero subspace.
///
/// Throws SingularOperator when the operator has a kernel beyond the
/// constants (for example a face where the coefficient vanishes).
Lambda1Result lambda1(const Geometry& geom, const ParamSet& params, const Field& u, double eps,
                      const Lambda1Options& opts = {});

/// The two sides of int (L psi)^2 >= lambda1 int |grad psi|_A^2 |grad u|^{p-2}.
std::pair<double, double> poincare_sides(const Geometry& geom, const ParamSet& params, const Field& u, double eps,
                                         double lambda1_value, const Field& psi);

/// [(1 - theta) int (Delta_p u)^2 + (theta n / (n-1)) int (||Q u||_A^2 + ric_term)]
///   / int u^{2p-4} |grad u|^p.
/// Throws RangeError when the denominator vanishes (u constant).
double lambda_star_quotient(const Geometry& geom, const ParamSet& params, const Field& u, double eps);

struct LambdaStarOptions {
    /// Trigonometric modes in the candidate space (cosines on the sphere,
    /// cosines and sines on the torus).
    int modes = 4;
    /// Random starting points added to the low-mode perturbation library and
    /// the small single-mode seeds.
    int random_starts = 4;
    int max_iter = 60;
    /// Smallest allowed Euclidean norm of the mode coefficients.
    double amplitude_floor = 1e-3;
    /// Gradient regularization; negative selects 1e-8 max(max|u'|, 1e-2).
    double eps = -1.0;
    std::uint64_t seed = 20240611;
};

struct LambdaStarReport {
    double best_value = 0.0;
    Field best_field;
    /// Mode coefficients of best_field before normalization.
    std::vector<double> best_coefficients;
    int candidates_evaluated = 0;
    std::string normalization;
    /// Quotient at 0.5, 1 and 2 times best_field.
    std::vector<double> scale_sensitivity;
    /// Set when some descent stopped at max_iter.
    bool nonconvergence = false;
};

/// Projected gradient descent of the quotient over u = c (1 + sum a_k phi_k),
/// with c fixed by int u^{beta q} dV = 1, seeded from the low-mode
/// perturbation library and random coefficient vectors. The minimum found is
/// an upper bound on the infimum over axisymmetric fields.
LambdaStarReport lambda_star_estimate(const Geometry& geom, const ParamSet& params,
                                      const LambdaStarOptions& opts = {});

/// Scales u so that int u^{beta q} dV = 1.
Field normalize_mass(const Geometry& geom, const ParamSet& params, const Field& u);

}  // namespace rigidity
