#include "rigidity/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rigidity/errors.hpp"

namespace rigidity {
namespace {

// n(p-1) + p appears in nearly every constant.
double shifted_dim(int n, double p) { return n * (p - 1.0) + p; }

// Denominator of beta: (n(p-1)+p)(2p-1-q) + n(q-1).
double beta_denominator(int n, double p, double q) {
    return shifted_dim(n, p) * (2.0 * p - 1.0 - q) + n * (q - 1.0);
}

// Denominator of theta and X0: 4n(p-1)(n(p-1)+p) + (q-1)(np-2n+p)^2.
double theta_denominator(int n, double p, double q) {
    const double c = n * p - 2.0 * n + p;
    return 4.0 * n * (p - 1.0) * shifted_dim(n, p) + (q - 1.0) * c * c;
}

std::string describe(const ParamSet& ps) {
    std::ostringstream os;
    os << "(n=" << ps.n << ", p=" << ps.p << ", q=" << ps.q << ")";
    return os.str();
}

void check_finite(const ParamSet& ps) {
    if (!std::isfinite(ps.p) || !std::isfinite(ps.q) || !std::isfinite(ps.lambda))
        throw RangeError("non-finite parameter " + describe(ps));
}

}  // namespace

double p_star(int n, double p) {
    if (p >= n) return std::numeric_limits<double>::infinity();
    return n * p / (n - p);
}

double beta_pole(int n, double p) {
    const double m = shifted_dim(n, p);
    return (m * (2.0 * p - 1.0) - n) / (m - n);
}

double vartheta(int n, double q) {
    const double nm1 = n - 1.0;
    return nm1 * nm1 * (q - 1.0) / (n * (n + 2.0) + q - 1.0);
}

double coupling_denominator(double p, double q, double beta) { return 2.0 - p + beta * (q - p); }

double sigma_lower_bound(int n, double p, double q) {
    return -2.0 * shifted_dim(n, p) / (p * p * (n - 1.0) * (q - 1.0));
}

double certificate_root(int n, double p, double q) {
    return -2.0 * (n - 1.0) * shifted_dim(n, p) / theta_denominator(n, p, q);
}

double eta_maximizer(int n, double p, double q, double X) {
    const double m = shifted_dim(n, p);
    const double c = (q - 1.0) * (n * p - 2.0 * n + p) + 2.0 * (1.0 - p) * m;
    return c / (2.0 * m) * X;
}

double alpha_tilde(int n, double p, double q, double eta, double X) {
    const double m = shifted_dim(n, p);
    const double c = ((q - 1.0) * (n * p - 2.0 * n + p) + 2.0 * (1.0 - p) * m) / m;
    return -eta * eta + c * eta * X + (n - 1.0) * (q - 1.0) / (2.0 * m) * X +
           (p - 1.0) * (q - p) * X * X;
}

DerivedConstants derive_constants(const ParamSet& ps, Domain domain) {
    check_finite(ps);
    const int n = ps.n;
    const double p = ps.p;
    const double q = ps.q;
    if (n < 2) throw RangeError("dimension n must be >= 2 " + describe(ps));
    if (!(p > 1.0)) throw RangeError("p must exceed 1 " + describe(ps));
    if (!(q > 1.0)) throw RangeError("q must exceed 1 " + describe(ps));
    const double ps_val = p_star(n, p);
    if (domain == Domain::Rigidity) {
        if (!(p < n)) throw RangeError("p must lie in (1, n) " + describe(ps));
        if (!(q < ps_val)) throw RangeError("q must lie in (1, p*) " + describe(ps));
    }

    const double m = shifted_dim(n, p);
    const double numer = 2.0 * (p - 1.0) * m;
    const double denom = beta_denominator(n, p, q);
    if (std::abs(denom) < 1e-9 * std::abs(numer))
        throw PoleError("q is at the beta pole " + describe(ps));

    DerivedConstants dc;
    dc.beta = numer / denom;
    dc.theta = p * p * (n - 1.0) * (n - 1.0) * (q - 1.0) / theta_denominator(n, p, q);
    dc.kappa = p - 1.0 + dc.beta * (q - p);
    dc.s = (p - 2.0 + dc.beta * p) / dc.beta;
    dc.p_star = ps_val;
    if (p == 2.0) dc.vartheta_p2 = vartheta(n, q);
    return dc;
}

CdcCertificate cdc_certificate(const ParamSet& ps, double gamma) {
    if (gamma == 0.0 || gamma == -ps.p)
        throw DegenerateGamma("gamma must differ from 0 and -p");
    const DerivedConstants dc = derive_constants(ps);
    if (!(ps.q > ps.p))
        throw RangeError("the carre du champ certificate needs q in (p, p*)");

    const int n = ps.n;
    const double p = ps.p;
    const double q = ps.q;
    const double beta = dc.beta;
    const double m = shifted_dim(n, p);
    const double one_minus_inv_pstar = m / (n * p);

    CdcCertificate c;
    c.gamma = gamma;
    c.alpha = one_minus_inv_pstar *
                  ((beta + 1.0) * (p - 1.0) * (beta * (q - p) - (p - 1.0) - 2.0 * gamma / p) -
                   gamma * (p * beta * (1.0 - q) + 2.0 * gamma) / (2.0 * p * p)) +
              beta * (q - 1.0) * ((2.0 * p - 3.0) * gamma - 2.0 * p * (p - 1.0)) / (2.0 * p * p);
    const double gp = gamma + p;
    c.sigma = p / (n * (p - 1.0) * (p - 1.0) * gp * gp) *
              (m + p * p * beta * (q - 1.0) / (2.0 * gamma) * (n - 1.0));
    c.X = beta / gamma;
    c.eta = (p - 1.0) / gamma + 1.0 / p;
    c.alpha_tilde = n * p / (m * gamma * gamma) * c.alpha;
    c.X0 = certificate_root(n, p, q);
    c.eta0 = eta_maximizer(n, p, q, c.X0);
    c.alpha_tilde_at_root = alpha_tilde(n, p, q, c.eta0, c.X0);
    c.sigma_interval = {sigma_lower_bound(n, p, q), 0.0};
    c.threshold_coeffs = {1.0 - dc.theta, dc.theta * n / (n - 1.0)};
    c.admissible = c.alpha >= 0.0 && c.sigma >= 0.0 && c.X <= 0.0;
    return c;
}

double cdc_threshold(const ParamSet& ps, double lambda1, double R) {
    const DerivedConstants dc = derive_constants(ps);
    return (1.0 - dc.theta) * lambda1 + dc.theta * ps.n * R / (ps.n - 1.0);
}

namespace {

// mu and its discriminant in extended precision: near the beta pole and at
// large q the terms are up to 1e7 larger than their sum.
template <class Wide>
MuCoefficients mu_terms(int n, Wide p, Wide q, Wide beta, Wide theta) {
    const Wide one = 1, two = 2, four = 4;
    const Wide m = n * (p - one) + p;
    const Wide pm1 = p - one;
    const Wide lead = p * (n - one) * (q - one) / (two * m);
    const Wide a = lead * lead / theta - pm1 * (q - p);
    const Wide b = pm1 * (m * (two * p - one - q) + n * (q - one)) / m;
    MuCoefficients mc;
    mc.a_coef = static_cast<double>(a);
    mc.b_coef = static_cast<double>(b);
    mc.mu = static_cast<double>((a * beta - b) * beta + pm1 * pm1);
    mc.discriminant = static_cast<double>(b * b - four * a * pm1 * pm1);
    return mc;
}

}  // namespace

MuCoefficients mu_coefficient(const ParamSet& ps, double beta_in, double theta_in) {
    if (!(theta_in > 0.0 && theta_in <= 1.0)) throw RangeError("theta must lie in (0, 1]");
    using Wide = long double;
    return mu_terms<Wide>(ps.n, ps.p, ps.q, beta_in, theta_in);
}

MuCoefficients mu_at_selection(const ParamSet& ps) {
    derive_constants(ps);
    // quadruple precision: |beta| reaches 1e9 next to the pole
    using Wide = __float128;
    const Wide one = 1, two = 2, four = 4;
    const int n = ps.n;
    const Wide p = ps.p, q = ps.q;
    const Wide m = n * (p - one) + p;
    const Wide c = n * p - two * n + p;
    const Wide beta = two * (p - one) * m / (m * (two * p - one - q) + n * (q - one));
    const Wide theta = p * p * (n - one) * (n - one) * (q - one) / (four * n * (p - one) * m + (q - one) * c * c);
    return mu_terms<Wide>(n, p, q, beta, theta);
}

double mu_kappa_form(int n, double p, double beta, double theta, double kappa) {
    const double m = shifted_dim(n, p);
    const double c = kappa + (beta - 1.0) * (p - 1.0);
    const double lead = p * (n - 1.0) * c / (2.0 * m);
    return lead * lead / theta - kappa * (beta - 1.0) * (p - 1.0) - c * n * (p - 1.0) / m;
}

}  // namespace rigidity
