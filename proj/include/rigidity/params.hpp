#pragma once

#include <optional>
#include <utility>

namespace rigidity {

/// The tuple (n, p, q, lambda) that selects one equation of the family.
struct ParamSet {
    int n = 3;
    double p = 2.0;
    double q = 4.0;
    double lambda = 0.0;
};

/// How strictly derive_constants validates its input.
///
/// `Rigidity` enforces 1 < p < n and 1 < q < p*, the range of the rigidity
/// theorems. `Algebraic` only needs the formulas to be finite (n >= 2,
/// p > 1, q > 1, away from the beta pole); the unconditional integral
/// identities hold in that wider range.
enum class Domain { Rigidity, Algebraic };

struct DerivedConstants {
    double beta = 0.0;
    double theta = 0.0;
    double kappa = 0.0;
    double s = 0.0;
    /// +inf when p >= n.
    double p_star = 0.0;
    /// Only set when p == 2.
    std::optional<double> vartheta_p2;
};

DerivedConstants derive_constants(const ParamSet& params, Domain domain = Domain::Rigidity);

// Building blocks of the closed forms, exposed for property tests.
double p_star(int n, double p);
double beta_pole(int n, double p);
double vartheta(int n, double q);
/// 2 - p + beta (q - p); the denominator of the equation's coupling constant.
double coupling_denominator(double p, double q, double beta);
/// Lower end of the X interval allowed by sigma >= 0.
double sigma_lower_bound(int n, double p, double q);
/// Negative root X0 of alpha_tilde(eta0(X), X) = 0.
double certificate_root(int n, double p, double q);
/// Maximizer eta0 of alpha_tilde in eta, for a given X.
double eta_maximizer(int n, double p, double q, double X);
/// alpha_tilde written as a quadratic polynomial in (eta, X).
double alpha_tilde(int n, double p, double q, double eta, double X);

/// Carré du champ certificate for a free parameter gamma.
struct CdcCertificate {
    double gamma = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    double X = 0.0;
    double eta = 0.0;
    double eta0 = 0.0;
    /// np / ((n(p-1)+p) gamma^2) * alpha.
    double alpha_tilde = 0.0;
    double X0 = 0.0;
    /// alpha_tilde evaluated at (eta0(X0), X0); zero up to roundoff.
    double alpha_tilde_at_root = 0.0;
    std::pair<double, double> sigma_interval;
    /// (1 - theta, theta n / (n-1)): threshold = c0 lambda1 + c1 R.
    std::pair<double, double> threshold_coeffs;
    bool admissible = false;
};

CdcCertificate cdc_certificate(const ParamSet& params, double gamma);

/// Threshold (1-theta) lambda1 + theta n R / (n-1).
double cdc_threshold(const ParamSet& params, double lambda1, double R);

/// mu as a quadratic in beta: a beta^2 - b beta + (p-1)^2.
struct MuCoefficients {
    double a_coef = 0.0;
    double b_coef = 0.0;
    double mu = 0.0;
    /// b^2 - 4 a (p-1)^2.
    double discriminant = 0.0;
};

MuCoefficients mu_coefficient(const ParamSet& params, double beta_in, double theta_in);

/// mu_coefficient at the selected (beta, theta), with both closed forms
/// carried in quadruple precision instead of rounded to double first.
/// Validates like derive_constants.
MuCoefficients mu_at_selection(const ParamSet& params);

/// mu in its kappa form, for arbitrary (beta, theta, kappa).
double mu_kappa_form(int n, double p, double beta, double theta, double kappa);

}  // namespace rigidity
