#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rigidity/geometry.hpp"
#include "rigidity/params.hpp"

namespace rigidity {

enum class NonlinearityKind { PowerLaw, Custom };

/// The nonlinearity f in -Delta_p v + C (v^m - f(v)) = 0.
struct Nonlinearity {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    NonlinearityKind kind = NonlinearityKind::Custom;
    std::string name;
};

/// f(v) = v^{q-1}.
Nonlinearity power_law(double q);
/// Named nonlinearities: "power" (v^{q-1}), "power-plus-linear" (v^{q-1} + v),
/// "arctan" (arctan(v) v^{q-2}). Throws ConfigError for other names.
Nonlinearity nonlinearity_from_name(const std::string& name, double q);

/// Coupling C = beta^{p-1} lambda / (2 - p + beta (q - p)) and exponent
/// m = (p - 2 + beta (p - 1)) / beta of the target equation.
struct EquationCoefficients {
    double coupling = 0.0;
    double exponent = 0.0;
    DerivedConstants constants;
};

/// Throws ExponentPole when 2 - p + beta (q - p) vanishes and RangeError when
/// beta < 0 with non-integer p - 1 (beta^{p-1} is not real).
EquationCoefficients equation_coefficients(const ParamSet& params);

enum class Classification { ConstantOne, ConstantOther, Nonconstant, Diverged };
std::string to_string(Classification c);

struct SolveOptions {
    /// Gradient regularization; negative selects 1e-8 max(max|v0'|, 1e-2).
    double eps = -1.0;
    int max_iter = 200;
    double res_tol = 1e-9;
    double class_tol = 1e-6;
    /// Freeze |v'|^{p-2} instead of using the full derivative of the flux.
    bool picard = false;
};

struct SolveResult {
    Field field;
    /// Discrete L^2 norm of the equation residual.
    double residual_norm = 0.0;
    int iterations = 0;
    Classification classified = Classification::Diverged;
    /// Residual norm after each Newton step, starting with the initial guess.
    std::vector<double> residual_history;
    /// Estimated convergence order over the last three steps (NaN when fewer
    /// than three steps were taken).
    double contraction_order = 0.0;
    /// Set when three or more steps were taken and the order fell below 1.5.
    bool flagged = false;
    double eps = 0.0;
};

/// Pointwise residual -Delta_p v + C (v^m - f(v)).
Field stationary_residual(const Geometry& geom, const ParamSet& params, const Nonlinearity& f,
                          const Field& v, double eps);

/// Damped Newton for the target equation with nonlinearity f. For lambda = 0
/// the mean of v is held fixed by a bordered system, so the limit is the
/// constant with the mean of v0.
///
/// Throws NonPositiveField for v0 <= 0 and NegativeBranch when no damped step
/// keeps the iterate positive.
SolveResult solve_stationary(const Geometry& geom, const ParamSet& params, const Nonlinearity& f,
                             const Field& v0, const SolveOptions& opts = {});

struct FConditionReport {
    std::vector<double> v;
    /// beta / (2 - p + beta (q - p)) (f'(v) - (q-1) f(v) / v) at each sample.
    std::vector<double> value;
    double max_value = 0.0;
    bool pass = false;
};

/// Samples the sign condition on f over [lo, hi] (geometrically spaced).
FConditionReport check_f_condition(const Nonlinearity& f, const ParamSet& params, double lo, double hi,
                                   int samples);

struct Perturbation {
    std::string id;
    double amplitude = 0.0;
    int mode = 0;
    Field field;
};

/// {1 + a cos(k x) : a in {0.1, 0.3}, k in {1, 2, 3}}.
std::vector<Perturbation> perturbation_library(const Geometry& geom);

/// R = K int u^{2 gamma/p} |u'|^{2p-2} / int u^{2 gamma/p} |u'|^p with
/// u = v^{-1/beta}. Zero when K = 0 or u is constant.
double curvature_ratio(const Geometry& geom, const ParamSet& params, const Field& v, double gamma);

struct ScanOptions {
    SolveOptions solve;
    std::optional<double> lambda_hat;
    std::optional<double> lambda1;
    /// Certificate parameter for R; defaults to beta / X0.
    std::optional<double> gamma;
};

struct ScanCell {
    double lambda = 0.0;
    std::string perturbation;
    Classification classified = Classification::Diverged;
    double residual_norm = 0.0;
    int iterations = 0;
    double oscillation = 0.0;
    /// Set when the solver threw; the cell is then Diverged.
    std::string error;
    /// (1-theta) lambda1 + theta n R / (n-1) on the found solution, when
    /// lambda1 is known and the solution is nonconstant.
    std::optional<double> threshold;
};

struct ScanReport {
    ParamSet base;
    Manifold manifold = Manifold::SphereAxisymmetric;
    std::vector<double> lambdas;
    std::vector<std::string> perturbations;
    /// Row-major: cells[i * perturbations.size() + j].
    std::vector<ScanCell> cells;
    std::optional<double> first_nonconstant_lambda;
    std::optional<double> lambda_hat;
    std::optional<double> lambda1;
    /// True when every cell with lambda < lambda_hat is ConstantOne.
    std::optional<bool> constant_below_lambda_hat;
};

/// Runs solve_stationary for every (lambda, perturbation) pair in parallel.
/// Solver errors are recorded per cell.
ScanReport rigidity_scan(const Geometry& geom, const ParamSet& base, const std::vector<double>& lambda_grid,
                         const std::vector<Perturbation>& perturbations, const ScanOptions& opts = {});

/// Rows: lambda; columns: perturbation id; cells: classification.
void write_scan_csv(std::ostream& os, const ScanReport& report);

}  // namespace rigidity
