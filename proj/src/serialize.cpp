#include "rigidity/serialize.hpp"

#include <cmath>

namespace rigidity {

namespace {

Json numbers(const std::vector<double>& xs) {
    Json out = Json::array();
    for (double x : xs) out.push_back(number(x));
    return out;
}

template <class T>
Json optional_number(const std::optional<T>& x) {
    return x ? number(static_cast<double>(*x)) : Json(nullptr);
}

}  // namespace

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const ParamSet& ps) {
    return Json{{"n", ps.n}, {"p", ps.p}, {"q", ps.q}, {"lambda", ps.lambda}};
}

Json to_json(const DerivedConstants& dc) {
    Json j{{"beta", number(dc.beta)},
           {"theta", number(dc.theta)},
           {"kappa", number(dc.kappa)},
           {"s", number(dc.s)},
           {"p_star", number(dc.p_star)}};
    j["vartheta_p2"] = optional_number(dc.vartheta_p2);
    return j;
}

Json to_json(const CdcCertificate& c) {
    return Json{{"gamma", number(c.gamma)},
                {"alpha", number(c.alpha)},
                {"sigma", number(c.sigma)},
                {"X", number(c.X)},
                {"eta", number(c.eta)},
                {"eta0", number(c.eta0)},
                {"alpha_tilde", number(c.alpha_tilde)},
                {"X0", number(c.X0)},
                {"alpha_tilde_at_root", number(c.alpha_tilde_at_root)},
                {"sigma_interval", {number(c.sigma_interval.first), number(c.sigma_interval.second)}},
                {"threshold_coeffs", {number(c.threshold_coeffs.first), number(c.threshold_coeffs.second)}},
                {"admissible", c.admissible}};
}

Json to_json(const IdentityReport& r) {
    return Json{{"name", r.name},
                {"N", r.N},
                {"lhs", number(r.lhs)},
                {"rhs", number(r.rhs)},
                {"abs_gap", number(r.abs_gap)},
                {"rel_gap", number(r.rel_gap)},
                {"refinement_slope", number(r.refinement_slope)},
                {"tolerance", number(r.tolerance)},
                {"pass", r.pass}};
}

Json to_json(const std::vector<IdentityReport>& rs) {
    Json out = Json::array();
    for (const auto& r : rs) out.push_back(to_json(r));
    return out;
}

Json to_json(const RefinementStudy& st) {
    Json gaps = Json::array();
    for (const auto& g : st.gaps) gaps.push_back(numbers(g));
    return Json{{"field", st.field}, {"grids", st.grids}, {"gaps", gaps}, {"reports", to_json(st.reports)}};
}

Json to_json(const SolveResult& r) {
    return Json{{"classification", to_string(r.classified)},
                {"residual_norm", number(r.residual_norm)},
                {"iterations", r.iterations},
                {"contraction_order", number(r.contraction_order)},
                {"flagged", r.flagged},
                {"eps", number(r.eps)},
                {"residual_history", numbers(r.residual_history)},
                {"min", number(r.field.size() ? r.field.minCoeff() : NAN)},
                {"max", number(r.field.size() ? r.field.maxCoeff() : NAN)}};
}

Json to_json(const ScanReport& r) {
    Json cells = Json::array();
    for (const auto& c : r.cells) {
        Json j{{"lambda", c.lambda},
               {"perturbation", c.perturbation},
               {"classification", to_string(c.classified)},
               {"residual_norm", number(c.residual_norm)},
               {"iterations", c.iterations},
               {"oscillation", number(c.oscillation)}};
        if (!c.error.empty()) j["error"] = c.error;
        if (c.threshold) j["threshold"] = number(*c.threshold);
        cells.push_back(j);
    }
    Json j{{"params", to_json(r.base)},
           {"manifold", to_string(r.manifold)},
           {"lambdas", numbers(r.lambdas)},
           {"perturbations", r.perturbations},
           {"cells", cells}};
    j["first_nonconstant_lambda"] = optional_number(r.first_nonconstant_lambda);
    j["lambda_hat"] = optional_number(r.lambda_hat);
    j["lambda1"] = optional_number(r.lambda1);
    j["constant_below_lambda_hat"] =
        r.constant_below_lambda_hat ? Json(*r.constant_below_lambda_hat) : Json(nullptr);
    return j;
}

Json to_json(const Lambda1Result& r) {
    return Json{{"value", number(r.value)},
                {"iterations", r.iterations},
                {"eigenfield_ratio", number(r.eigenfield_ratio)},
                {"min_random_ratio", number(r.min_random_ratio)},
                {"poincare_pass", r.poincare_pass}};
}

Json to_json(const LambdaStarReport& r) {
    return Json{{"best_value", number(r.best_value)},
                {"best_coefficients", numbers(r.best_coefficients)},
                {"candidates_evaluated", r.candidates_evaluated},
                {"normalization", r.normalization},
                {"scale_sensitivity", numbers(r.scale_sensitivity)},
                {"nonconvergence", r.nonconvergence}};
}

Json to_json(const FlowTrace& tr) {
    return Json{{"params", to_json(tr.params)},
                {"eps", number(tr.eps)},
                {"steps", tr.steps},
                {"rejected", tr.rejected},
                {"steady", tr.steady},
                {"mass_drift", number(tr.mass_drift)},
                {"t", numbers(tr.times)},
                {"mass", numbers(tr.mass)},
                {"F", numbers(tr.F_values)},
                {"dF_dt_fd", numbers(tr.dF_dt_fd)},
                {"dF_dt_rhs", numbers(tr.dF_dt_rhs)},
                {"G", numbers(tr.G_values)}};
}

}  // namespace rigidity
