#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rigidity/geometry.hpp"
#include "rigidity/params.hpp"
#include "rigidity/report.hpp"

namespace rigidity {

struct FlowOptions {
    double dt0 = 1e-4;
    /// Upper bound on the adaptive step; non-positive selects t_end / 50.
    double dt_max = -1.0;
    /// Keep dt = dt0 (apart from landing on sample times) and never reject.
    bool fixed_dt = false;
    /// A step is rejected when some node changes by more than this fraction.
    double max_rel_change = 0.1;
    /// Gradient regularization; negative selects 1e-8 max(max|u0'|, 1e-2).
    double eps = -1.0;
    /// Geometric sample grid size (t = 0 is always sampled).
    int samples = 40;
    /// Explicit sample times in (0, t_end]; overrides `samples` when set.
    std::vector<double> sample_times;
    /// The run stops early once max|du/dt| falls below this value.
    double steady_tol = 1e-10;
    /// Keep the field at every sample.
    bool keep_fields = true;
    /// Accepted for configuration compatibility. The mass variable keeps
    /// positivity by itself, so no logarithmic stepping is performed.
    bool log_space = false;
};

struct FlowTrace {
    ParamSet params;
    double eps = 0.0;
    std::vector<double> times;
    std::vector<Field> fields;
    /// int u^{beta q} dV.
    std::vector<double> mass;
    std::vector<double> F_values;
    /// Three-point difference of F through the steps adjacent to each sample.
    std::vector<double> dF_dt_fd;
    /// p |beta|^p [-int (Delta_p u)^2 - c1 int Delta_p u X - c2 int X^2 + lambda int u^{2p-4} |grad u|^p].
    std::vector<double> dF_dt_rhs;
    std::vector<double> G_values;
    int steps = 0;
    int rejected = 0;
    bool steady = false;
    /// max |mass(t) - mass(0)| / mass(0).
    double mass_drift = 0.0;
};

/// Geometric grid of `count` times ending at t_end and starting at
/// first_fraction * t_end.
std::vector<double> geometric_times(double t_end, int count, double first_fraction = 1e-3);

/// Integrates du/dt = u^{p - p beta} (Delta_p u + kappa |grad u|^p / u).
///
/// The equation is advanced in the mass variable w = u^{beta q}, for which it
/// reads dw/dt = div(u^{p - p beta} |grad u|^{p-2} grad w). Each step freezes
/// the coefficient at the current state and solves the linear implicit
/// system (I - dt L) w_new = w, whose matrix is an M-matrix: w stays positive
/// and int w dV is conserved to roundoff.
///
/// Throws NonPositiveField for u0 <= 0, PositivityLoss when a positivity
/// rejection drives dt to underflow and StiffnessAbort when dt falls below
/// 1e-12 t_end.
FlowTrace run_flow(const Geometry& geom, const ParamSet& params, const Field& u0, double t_end,
                   const FlowOptions& opts = {});

/// F = int |grad(u^beta)|^p + p |beta|^p lambda / ((p beta + p - 2)(2 - p + beta (q - p)))
///       (int u^{p beta + p - 2} - (int u^{beta q})^{p/q}).
/// The gradient term is a face sum, so F needs no regularization.
/// Throws ExponentPole when p beta + p - 2 or 2 - p + beta (q - p) vanishes.
double functional_F(const Geometry& geom, const ParamSet& params, const Field& u);

/// G = int [theta (Delta_p u)^2 + c1 Delta_p u X + c2 X^2] with X = |grad u|^p / u,
/// c1 = kappa + (beta - 1)(p - 1), c2 = kappa (beta - 1)(p - 1).
double functional_G(const Geometry& geom, const ParamSet& params, const Field& u, double theta, double eps);

/// (theta n / (n-1)) int (||Q u||_A^2 + |grad u|^{2p-4} Ric(grad u, grad u)) - mu int X^2,
/// with Q u = Bu - c Gu, c = p (n-1) c1 / (2 theta (p-1)(n(p-1)+p)).
double functional_G_decomposed(const Geometry& geom, const ParamSet& params, const Field& u, double theta,
                               double eps);

/// Right side of the dissipation law at u.
double dissipation_rhs(const Geometry& geom, const ParamSet& params, const Field& u, double eps);

/// Reports (a) the median relative gap between dF_dt_fd and dF_dt_rhs over
/// samples with both neighbours and a non-negligible rate ("energy_dissipation"),
/// tolerance 1%; (b) G against its decomposition at every stored field, the
/// worst case reported ("g_decomposition"), tolerance `g_tol`.
std::vector<IdentityReport> dissipation_identity_check(const Geometry& geom, const FlowTrace& trace,
                                                       double g_tol = 1e-4);

/// Columns t,mass,F,dF_dt_fd,dF_dt_rhs.
void write_flow_csv(std::ostream& os, const FlowTrace& trace);

/// Writes one snapshot_<index>.csv per stored field into dir.
void write_flow_snapshots(const std::string& dir, const Geometry& geom, const FlowTrace& trace);

}  // namespace rigidity
