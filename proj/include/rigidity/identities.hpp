#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rigidity/fields.hpp"
#include "rigidity/geometry.hpp"
#include "rigidity/params.hpp"
#include "rigidity/report.hpp"

namespace rigidity {

/// Names of the unconditional identities, in report order:
///   "bochner_traceless"   int (Delta_p u)^2 = n/(n-1) int (||Bu||_A^2 + ric_term)
///   "gradient_coupling"   int Delta_p u X = n(p-1)/m int X^2 - np/((p-1) m) int [Bu, Gu]_A
///   "g_decomposition"     G[u] = (theta n/(n-1)) int (||Q u||_A^2 + ric_term) - mu int X^2
///   "integrated_bochner"  int (Delta_p u)^2 = int |grad u|^{2p-4} (||Hess u||_A^2 + Ric(grad u, grad u))
/// with X = |grad u|^p / u and m = n(p-1) + p.
const std::vector<std::string>& unconditional_names();

/// Calibrated constant C of the tolerance C N^{-2} for each identity.
double unconditional_tolerance_constant(const std::string& name);

/// Both sides of the four identities at u. Left sides use the flux-form
/// p-Laplacian, right sides the pointwise Hessian frame. A negative eps
/// selects regularization_eps(u).
///
/// Throws NonPositiveField unless u > 0.
std::vector<IdentityReport> verify_unconditional(const Geometry& geom, const ParamSet& params, const Field& u,
                                                 double eps = -1.0);

/// One field evaluated on several grids. For each identity the report on
/// grids[report_index] is returned, its refinement_slope set to the mean
/// log2 gap ratio per grid doubling (log2(gap_first / gap_last) divided by
/// log2(N_last / N_first)).
struct RefinementStudy {
    std::string field;
    std::vector<int> grids;
    /// gaps[i][g]: relative gap of identity i on grid g.
    std::vector<std::vector<double>> gaps;
    std::vector<IdentityReport> reports;
};

RefinementStudy refinement_study(Manifold kind, const ParamSet& params, const FieldFunction& f,
                                 const std::vector<int>& grids = {200, 400, 800}, size_t report_index = 1);

/// refinement_study over several fields in parallel.
std::vector<RefinementStudy> corpus_study(Manifold kind, const ParamSet& params,
                                          const std::vector<FieldFunction>& fields,
                                          const std::vector<int>& grids = {200, 400, 800});

/// Calibrated constant D of the discretization floor D N^{-2} for each
/// on-shell identity.
double onshell_tolerance_constant(const std::string& name);

struct OnShellOptions {
    /// Residual norm of the elliptic solve that produced v.
    double residual_norm = 0.0;
    /// Gradient regularization; negative selects regularization_eps(u).
    double eps = -1.0;
    /// Each tolerance is condition * residual_norm + D N^{-2}.
    double condition = 10.0;
};

/// Checks, for u = v^{-1/beta}:
///   "substituted_equation"  -Delta_p u + (p-1)(beta+1) X + lambda/den (u^{p-1+beta(p-q)} - u) = 0
///                           (lhs ||Delta_p u||, rhs ||remaining terms||, both discrete L^2;
///                           the gap is ||lhs - rhs|| over the sum of the term norms);
///   "multiplier_gradient"   the equation tested against u^{2g/p-1} |grad u|^p;
///   "multiplier_laplacian"  the equation tested against u^{2g/p} Delta_p u, integrated by parts;
///   "lambda_balance"        their combination solved for lambda int u^{2g/p} |grad u|^p;
///   "master_identity"       alpha int u^{2g/p-2} |grad u|^{2p} + sigma int (L u^{1+g/p})^2
///                           = beta p (q-1)/(2g) int u^{2g/p}(J + ric_term)
///                             + (1 - 1/p*) lambda int u^{2g/p} |grad u|^p,
/// with g = gamma, den = 2 - p + beta (q - p) and alpha, sigma from the
/// certificate.
///
/// Throws NotOnShell when the substituted-equation residual exceeds ten times
/// its tolerance.
std::vector<IdentityReport> verify_onshell(const Geometry& geom, const ParamSet& params, const Field& v_solution,
                                           double gamma, const OnShellOptions& opts = {});

/// lhs = int |grad v|^p (face sum), rhs = (p |beta|^{p-2} / s)(lambda / (q - s))
/// (||v||_q^p - ||v||_s^s). Passes when lhs >= rhs - 1e-12 (1 + |lhs|).
/// Throws ExponentPole when q = s.
IdentityReport interpolation_check(const Geometry& geom, const ParamSet& params, const Field& v,
                                   double lambda_used);

}  // namespace rigidity
