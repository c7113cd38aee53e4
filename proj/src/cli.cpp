#include "rigidity/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "rigidity/errors.hpp"
#include "rigidity/fields.hpp"
#include "rigidity/operators.hpp"
#include "rigidity/serialize.hpp"

namespace rigidity {

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& key, const std::string& s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key + ": not a number: '" + s + "'");
    return x;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& s) {
    Int x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key + ": not an integer: '" + s + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError(key + ": not a boolean: '" + s + "'");
}

struct Entry {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

#define RL_DOUBLE(name, member)                                                          \
    Entry{name, [](const RunConfig& c) { return format_double(c.member); },              \
          [](RunConfig& c, const std::string& s) { c.member = parse_double(name, s); }}
#define RL_INT(name, member, type)                                                       \
    Entry{name, [](const RunConfig& c) { return std::to_string(c.member); },             \
          [](RunConfig& c, const std::string& s) { c.member = parse_int<type>(name, s); }}
#define RL_BOOL(name, member)                                                            \
    Entry{name, [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); }, \
          [](RunConfig& c, const std::string& s) { c.member = parse_bool(name, s); }}
#define RL_STRING(name, member)                                                          \
    Entry{name, [](const RunConfig& c) { return c.member; },                             \
          [](RunConfig& c, const std::string& s) { c.member = s; }}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table{
        RL_STRING("geometry.kind", geometry.kind),
        RL_INT("geometry.n", geometry.n, int),
        RL_INT("geometry.N", geometry.N, int),
        RL_DOUBLE("params.p", params.p),
        RL_DOUBLE("params.q", params.q),
        RL_DOUBLE("params.lambda", params.lambda),
        RL_DOUBLE("solver.res_tol", solver.res_tol),
        RL_DOUBLE("solver.class_tol", solver.class_tol),
        RL_INT("solver.max_iter", solver.max_iter, int),
        RL_DOUBLE("solver.eps", solver.eps),
        RL_BOOL("solver.frozen_jacobian", solver.frozen_jacobian),
        RL_DOUBLE("flow.t_end", flow.t_end),
        RL_DOUBLE("flow.dt0", flow.dt0),
        RL_DOUBLE("flow.mass_tol", flow.mass_tol),
        RL_BOOL("flow.log_space", flow.log_space),
        RL_STRING("output.dir", output.dir),
        RL_STRING("output.formats", output.formats),
        RL_INT("seed", seed, std::uint64_t),
    };
    return table;
}

#undef RL_DOUBLE
#undef RL_INT
#undef RL_BOOL
#undef RL_STRING

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Json config_json(const RunConfig& c) {
    Json j = Json::object();
    for (const Entry& e : entries()) j[e.key] = e.get(c);
    return j;
}

// Command-line values; only the ones actually given override the config.
struct Flags {
    std::string config_path;
    bool dry_run = false;
    std::string geometry;
    int n = 0, N = 0, max_iter = 0;
    double p = 0, q = 0, lambda = 0, res_tol = 0, class_tol = 0, eps = 0, t_end = 0, dt0 = 0, mass_tol = 0;
    bool frozen_jacobian = false, log_space = false;
    std::string out, formats;
    std::uint64_t seed = 0;

    std::string field, nonlinearity = "power";
    double gamma = 0.0;
    bool onshell = false;
    double lambda_min = 0.0, lambda_max = 3.0, lambda_hat = 0.0, lambda_fraction = 0.9;
    int lambda_steps = 11, samples = 0, modes = 4, random_starts = 4;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "Flat key = value configuration file");
    sub->add_flag("--dry-run", f.dry_run, "Validate the configuration, print derived constants and exit");
    sub->add_option("--geometry", f.geometry, "sphere or torus");
    sub->add_option("--n", f.n, "Manifold dimension");
    sub->add_option("--N", f.N, "Grid intervals");
    sub->add_option("--p", f.p, "p-Laplacian exponent");
    sub->add_option("--q", f.q, "Nonlinearity exponent");
    sub->add_option("--lambda", f.lambda, "Coupling lambda");
    sub->add_option("--res-tol", f.res_tol, "Newton residual tolerance");
    sub->add_option("--class-tol", f.class_tol, "Constant classification tolerance");
    sub->add_option("--max-iter", f.max_iter, "Newton iteration cap");
    sub->add_option("--eps", f.eps, "Gradient regularization (negative: automatic)");
    sub->add_flag("--frozen-jacobian", f.frozen_jacobian, "Freeze |v'|^{p-2} in the Newton matrix");
    sub->add_option("--t-end", f.t_end, "Flow end time");
    sub->add_option("--dt0", f.dt0, "Initial flow step");
    sub->add_option("--mass-tol", f.mass_tol, "Allowed mass drift per unit time");
    sub->add_flag("--log-space", f.log_space, "Accepted for compatibility");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--formats", f.formats, "Comma-separated output formats (json, csv)");
    sub->add_option("--seed", f.seed, "Seed of every random choice");
}

RunConfig apply_flags(const CLI::App* sub, const Flags& f, RunConfig c) {
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--geometry")) c.geometry.kind = f.geometry;
    if (given("--n")) c.geometry.n = f.n;
    if (given("--N")) c.geometry.N = f.N;
    if (given("--p")) c.params.p = f.p;
    if (given("--q")) c.params.q = f.q;
    if (given("--lambda")) c.params.lambda = f.lambda;
    if (given("--res-tol")) c.solver.res_tol = f.res_tol;
    if (given("--class-tol")) c.solver.class_tol = f.class_tol;
    if (given("--max-iter")) c.solver.max_iter = f.max_iter;
    if (given("--eps")) c.solver.eps = f.eps;
    if (given("--frozen-jacobian")) c.solver.frozen_jacobian = f.frozen_jacobian;
    if (given("--t-end")) c.flow.t_end = f.t_end;
    if (given("--dt0")) c.flow.dt0 = f.dt0;
    if (given("--mass-tol")) c.flow.mass_tol = f.mass_tol;
    if (given("--log-space")) c.flow.log_space = f.log_space;
    if (given("--out")) c.output.dir = f.out;
    if (given("--formats")) c.output.formats = f.formats;
    if (given("--seed")) c.seed = f.seed;
    return c;
}

bool is_input_error(const Error& e) {
    const std::string k = e.kind();
    return k == "ConfigError" || k == "RangeError" || k == "PoleError" || k == "ExponentPole" ||
           k == "DegenerateGamma" || k == "ShapeMismatch";
}

// Collects the report and the files of one run; everything is written at the end.
struct Output {
    Json result = Json::object();
    std::vector<std::pair<std::string, std::string>> csv_files;
    bool pass = true;
};

struct Context {
    std::string command;
    RunConfig cfg;
    Flags flags;
    const CLI::App* sub = nullptr;

    Manifold kind() const { return manifold_from_string(cfg.geometry.kind); }
    ParamSet params() const { return ParamSet{cfg.geometry.n, cfg.params.p, cfg.params.q, cfg.params.lambda}; }
    Geometry geometry() const { return build_geometry(kind(), cfg.geometry.n, cfg.geometry.N); }
    bool given(const char* name) const { return sub->count(name) > 0; }
    std::string field_name(const char* fallback) const { return flags.field.empty() ? fallback : flags.field; }
    double gamma() const {
        if (given("--gamma")) return flags.gamma;
        const ParamSet ps = params();
        return derive_constants(ps).beta / certificate_root(ps.n, ps.p, ps.q);
    }
    SolveOptions solve_options() const {
        SolveOptions o;
        o.eps = cfg.solver.eps;
        o.max_iter = cfg.solver.max_iter;
        o.res_tol = cfg.solver.res_tol;
        o.class_tol = cfg.solver.class_tol;
        o.picard = cfg.solver.frozen_jacobian;
        return o;
    }
};

template <class Writer>
std::string to_csv(Writer&& w) {
    std::ostringstream os;
    os.precision(17);
    w(os);
    return os.str();
}

Domain validation_domain(const std::string& command) {
    return command == "constants" || command == "certificate" || command == "solve" || command == "scan"
               ? Domain::Rigidity
               : Domain::Algebraic;
}

void cmd_constants(const Context& ctx, Output& o) {
    const ParamSet ps = ctx.params();
    const DerivedConstants dc = derive_constants(ps, Domain::Rigidity);
    o.result = to_json(dc);
    o.result["X0"] = number(certificate_root(ps.n, ps.p, ps.q));
    o.result["coupling_denominator"] = number(coupling_denominator(ps.p, ps.q, dc.beta));
}

void cmd_certificate(const Context& ctx, Output& o) {
    const CdcCertificate cert = cdc_certificate(ctx.params(), ctx.gamma());
    o.result = to_json(cert);
}

void cmd_verify(const Context& ctx, Output& o) {
    const ParamSet ps = ctx.params();
    const FieldFunction f = named_field(ctx.kind(), ctx.field_name("exp-cos"));
    const int N = ctx.cfg.geometry.N;
    const RefinementStudy st = refinement_study(ctx.kind(), ps, f, {N / 2, N, 2 * N});
    o.result["field"] = f.name;
    o.result["unconditional"] = to_json(st.reports);
    o.result["refinement"] = to_json(st);
    o.pass = all_pass(st.reports);
    if (ctx.flags.onshell) {
        const Geometry g = ctx.geometry();
        const SolveResult sr = solve_stationary(g, ps, power_law(ps.q), f.sample(g), ctx.solve_options());
        o.result["solve"] = to_json(sr);
        OnShellOptions opts;
        opts.residual_norm = sr.residual_norm;
        opts.eps = ctx.cfg.solver.eps;
        const auto rs = verify_onshell(g, ps, sr.field, ctx.gamma(), opts);
        o.result["onshell"] = to_json(rs);
        o.pass = o.pass && all_pass(rs);
    }
    std::vector<IdentityReport> all = st.reports;
    o.csv_files.emplace_back("identities.csv", to_csv([&](std::ostream& os) { write_reports_csv(os, all); }));
}

void cmd_solve(const Context& ctx, Output& o) {
    const Geometry g = ctx.geometry();
    const ParamSet ps = ctx.params();
    const FieldFunction f = named_field(ctx.kind(), ctx.field_name("low-mode"));
    const SolveResult sr =
        solve_stationary(g, ps, nonlinearity_from_name(ctx.flags.nonlinearity, ps.q), f.sample(g), ctx.solve_options());
    o.result = to_json(sr);
    o.result["initial_field"] = f.name;
    o.pass = sr.classified != Classification::Diverged;
    o.csv_files.emplace_back("solution.csv", to_csv([&](std::ostream& os) { write_field_csv(os, g, sr.field, "v"); }));
}

void cmd_scan(const Context& ctx, Output& o) {
    const Geometry g = ctx.geometry();
    const ParamSet ps = ctx.params();
    const Flags& fl = ctx.flags;
    if (fl.lambda_steps < 1) throw ConfigError("--lambda-steps must be positive");
    std::vector<double> grid;
    for (int i = 0; i < fl.lambda_steps; ++i)
        grid.push_back(fl.lambda_steps == 1 ? fl.lambda_max
                                            : fl.lambda_min + (fl.lambda_max - fl.lambda_min) * i / (fl.lambda_steps - 1));
    ScanOptions so;
    so.solve = ctx.solve_options();
    if (ctx.given("--lambda-hat")) so.lambda_hat = fl.lambda_hat;
    if (ctx.given("--gamma")) so.gamma = fl.gamma;
    if (ps.p == 2.0) so.lambda1 = lambda1(g, ps, g.constant(1.0), 0.0).value;
    const ScanReport rep = rigidity_scan(g, ps, grid, perturbation_library(g), so);
    o.result = to_json(rep);
    if (rep.constant_below_lambda_hat) o.pass = *rep.constant_below_lambda_hat;
    o.csv_files.emplace_back("scan.csv", to_csv([&](std::ostream& os) { write_scan_csv(os, rep); }));
}

void cmd_flow(const Context& ctx, Output& o) {
    const Geometry g = ctx.geometry();
    const ParamSet ps = ctx.params();
    const FieldFunction f = named_field(ctx.kind(), ctx.field_name("low-mode"));
    FlowOptions fo;
    fo.dt0 = ctx.cfg.flow.dt0;
    fo.eps = ctx.cfg.solver.eps;
    fo.log_space = ctx.cfg.flow.log_space;
    if (ctx.flags.samples > 0) fo.samples = ctx.flags.samples;
    const double t_end = ctx.cfg.flow.t_end;
    const FlowTrace tr = run_flow(g, ps, f.sample(g), t_end, fo);
    const auto checks = dissipation_identity_check(g, tr);
    double worst_increase = 0.0;
    for (size_t i = 1; i < tr.F_values.size(); ++i) worst_increase = std::max(worst_increase, tr.F_values[i] - tr.F_values[i - 1]);
    const bool monotone = worst_increase <= 1e-8 * std::abs(tr.F_values.front());
    const bool conserved = tr.mass_drift / t_end <= ctx.cfg.flow.mass_tol;
    o.result = to_json(tr);
    o.result["initial_field"] = f.name;
    o.result["identities"] = to_json(checks);
    o.result["F_monotone"] = monotone;
    o.result["mass_conserved"] = conserved;
    o.pass = monotone && conserved && all_pass(checks);
    o.csv_files.emplace_back("flow.csv", to_csv([&](std::ostream& os) { write_flow_csv(os, tr); }));
    for (size_t i = 0; i < tr.fields.size(); ++i)
        o.csv_files.emplace_back("snapshots/snapshot_" + std::to_string(i) + ".csv",
                                 to_csv([&](std::ostream& os) { write_field_csv(os, g, tr.fields[i], "u"); }));
}

void cmd_lambda1(const Context& ctx, Output& o) {
    const Geometry g = ctx.geometry();
    const FieldFunction f = named_field(ctx.kind(), ctx.field_name("one"));
    const Field u = f.sample(g);
    const double eps = ctx.cfg.solver.eps >= 0.0 ? ctx.cfg.solver.eps : regularization_eps(g, u);
    Lambda1Options lo;
    lo.seed = ctx.cfg.seed;
    const Lambda1Result r = lambda1(g, ctx.params(), u, eps, lo);
    o.result = to_json(r);
    o.result["field"] = f.name;
    o.pass = r.poincare_pass;
    o.csv_files.emplace_back("eigenfield.csv", to_csv([&](std::ostream& os) { write_field_csv(os, g, r.field, "psi"); }));
}

LambdaStarOptions star_options(const Context& ctx) {
    LambdaStarOptions so;
    so.modes = ctx.flags.modes;
    so.random_starts = ctx.flags.random_starts;
    so.eps = ctx.cfg.solver.eps;
    so.seed = ctx.cfg.seed;
    return so;
}

void cmd_lambda_star(const Context& ctx, Output& o) {
    const Geometry g = ctx.geometry();
    const LambdaStarReport r = lambda_star_estimate(g, ctx.params(), star_options(ctx));
    o.result = to_json(r);
    o.csv_files.emplace_back("best_field.csv", to_csv([&](std::ostream& os) { write_field_csv(os, g, r.best_field, "u"); }));
}

void cmd_interp_check(const Context& ctx, Output& o) {
    const Geometry g = ctx.geometry();
    const ParamSet ps = ctx.params();
    double lambda_hat = ctx.flags.lambda_hat;
    double used = ps.lambda;
    if (used <= 0.0) {
        if (!ctx.given("--lambda-hat")) lambda_hat = lambda_star_estimate(g, ps, star_options(ctx)).best_value;
        used = ctx.flags.lambda_fraction * lambda_hat;
    }
    const int samples = ctx.flags.samples > 0 ? ctx.flags.samples : 500;
    std::mt19937_64 rng(ctx.cfg.seed);
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    std::vector<IdentityReport> reports;
    for (int i = 0; i < samples; ++i) {
        IdentityReport r = interpolation_check(g, ps, random_positive_field(ctx.kind(), rng).sample(g), used);
        r.name = "random-" + std::to_string(i);
        if (!r.pass) ++violations;
        worst = std::min(worst, (r.lhs - r.rhs) / (1.0 + std::abs(r.lhs)));
        reports.push_back(r);
    }
    o.result = Json{{"lambda_used", number(used)},
                    {"lambda_hat", ps.lambda > 0.0 ? Json(nullptr) : number(lambda_hat)},
                    {"samples", samples},
                    {"violations", violations},
                    {"worst_relative_margin", number(worst)}};
    o.pass = violations == 0;
    o.csv_files.emplace_back("interpolation.csv", to_csv([&](std::ostream& os) { write_reports_csv(os, reports); }));
}

void write_outputs(const RunConfig& cfg, const std::string& command, const Json& report, const Output& o) {
    if (cfg.output.dir.empty()) return;
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output.dir);
    fs::create_directories(dir);
    auto write = [](const fs::path& path, const std::string& text) {
        fs::create_directories(path.parent_path());
        std::ofstream os(path);
        if (!os) throw ConfigError("cannot write " + path.string());
        os << text;
    };
    if (cfg.output.formats.find("json") != std::string::npos) write(dir / (command + ".json"), report.dump(2) + "\n");
    if (cfg.output.formats.find("csv") != std::string::npos) {
        for (const auto& [name, text] : o.csv_files) write(dir / name, text);
    }
    write(dir / "config.txt", format_config(cfg));
}

}  // namespace

std::string format_config(const RunConfig& c) {
    std::string out;
    for (const Entry& e : entries()) out += e.key + " = " + e.get(c) + "\n";
    return out;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::istringstream is(text);
    std::string line;
    int number_of_line = 0;
    while (std::getline(is, line)) {
        ++number_of_line;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(number_of_line) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        bool found = false;
        for (const Entry& e : entries()) {
            if (e.key == key) {
                e.set(base, value);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("line " + std::to_string(number_of_line) + ": unknown key '" + key + "'");
    }
    return base;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for p-Laplacian rigidity on the sphere and the torus", "rigidity_lab"};
    app.require_subcommand(1, 1);
    Flags flags;
    using Handler = std::function<void(const Context&, Output&)>;
    const std::vector<std::tuple<std::string, std::string, Handler>> commands{
        {"constants", "Derived constants beta, theta, kappa, s, p*", cmd_constants},
        {"certificate", "Carre du champ certificate for gamma", cmd_certificate},
        {"verify", "Unconditional (and optionally on-shell) integral identities", cmd_verify},
        {"solve", "Damped Newton solve of the stationary equation", cmd_solve},
        {"scan", "Rigidity scan over lambda and the perturbation library", cmd_scan},
        {"flow", "Porous-medium-type flow with mass and F diagnostics", cmd_flow},
        {"lambda1", "First eigenvalue of the linearized operator", cmd_lambda1},
        {"lambda-star", "Upper estimate of the quotient infimum", cmd_lambda_star},
        {"interp-check", "Interpolation inequality over random fields", cmd_interp_check},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help, handler] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, flags);
        subs[name] = sub;
    }
    for (const char* name : {"verify", "solve", "flow", "lambda1"})
        subs[name]->add_option("--field", flags.field, "Named field: " + [] {
            std::string s;
            for (const auto& n : named_field_names(Manifold::TorusOneD)) s += (s.empty() ? "" : ", ") + n;
            return s;
        }());
    for (const char* name : {"certificate", "verify", "scan"})
        subs[name]->add_option("--gamma", flags.gamma, "Certificate parameter (default beta / X0)");
    subs["verify"]->add_flag("--onshell", flags.onshell, "Also solve from the field and check the on-shell identities");
    subs["solve"]->add_option("--nonlinearity", flags.nonlinearity, "power, power-plus-linear or arctan");
    subs["scan"]->add_option("--lambda-min", flags.lambda_min, "Smallest lambda of the grid");
    subs["scan"]->add_option("--lambda-max", flags.lambda_max, "Largest lambda of the grid");
    subs["scan"]->add_option("--lambda-steps", flags.lambda_steps, "Number of lambda values");
    for (const char* name : {"scan", "interp-check"})
        subs[name]->add_option("--lambda-hat", flags.lambda_hat, "Known threshold estimate");
    subs["interp-check"]->add_option("--lambda-fraction", flags.lambda_fraction, "lambda = fraction * lambda_hat");
    for (const char* name : {"interp-check", "flow"}) subs[name]->add_option("--samples", flags.samples, "Sample count");
    for (const char* name : {"lambda-star", "interp-check"}) {
        subs[name]->add_option("--modes", flags.modes, "Trigonometric modes per candidate");
        subs[name]->add_option("--random-starts", flags.random_starts, "Random descent starts");
    }

    std::vector<const char*> argv{"rigidity_lab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    Context ctx;
    ctx.flags = flags;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) {
            ctx.command = name;
            ctx.sub = sub;
        }

    try {
        if (!flags.config_path.empty()) {
            std::ifstream is(flags.config_path);
            if (!is) throw ConfigError("cannot read config file " + flags.config_path);
            std::stringstream ss;
            ss << is.rdbuf();
            ctx.cfg = parse_config(ss.str());
        }
        ctx.cfg = apply_flags(ctx.sub, flags, ctx.cfg);
        const Geometry g = ctx.geometry();
        const ParamSet ps = ctx.params();
        const DerivedConstants dc = derive_constants(ps, validation_domain(ctx.command));

        Json report{{"command", ctx.command}, {"seed", ctx.cfg.seed}, {"config", config_json(ctx.cfg)}};
        if (flags.dry_run) {
            report["dry_run"] = true;
            report["constants"] = to_json(dc);
            report["nodes"] = g.size();
            out << report.dump(2) << "\n";
            return 0;
        }
        Output o;
        for (const auto& [name, help, handler] : commands)
            if (name == ctx.command) handler(ctx, o);
        report["result"] = o.result;
        report["pass"] = o.pass;
        write_outputs(ctx.cfg, ctx.command, report, o);
        out << report.dump(2) << "\n";
        return o.pass ? 0 : 1;
    } catch (const Error& e) {
        err << e.kind() << ": " << e.what() << "\n";
        return is_input_error(e) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rigidity
