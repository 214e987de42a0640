#include "nlcross/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace nlcross {

namespace {

template <class E>
struct EnumName {
    E value;
    const char* name;
};

constexpr EnumName<SeedConvention> kSeedNames[] = {{SeedConvention::Adiabatic, "adiabatic"},
                                                    {SeedConvention::PaperWkb, "paper-wkb"}};
constexpr EnumName<StokesMethod> kMethodNames[] = {{StokesMethod::Numeric, "numeric"},
                                                   {StokesMethod::Series, "series"}};
constexpr EnumName<StokesVariant> kVariantNames[] = {{StokesVariant::Corrected, "corrected"},
                                                     {StokesVariant::Verbatim, "verbatim"}};
constexpr EnumName<PrefactorConvention> kPrefactorNames[] = {{PrefactorConvention::Corrected, "corrected"},
                                                             {PrefactorConvention::Paper, "paper"}};
constexpr EnumName<SweepParameter> kSweepNames[] = {
    {SweepParameter::Alpha, "alpha"}, {SweepParameter::Gamma, "gamma"}, {SweepParameter::Rabi, "rabi"}};

template <class E, std::size_t N>
const char* to_name(const EnumName<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

template <class E, std::size_t N>
E from_name(const EnumName<E> (&table)[N], const std::string& s, const char* what) {
    for (const auto& e : table)
        if (s == e.name) return e.value;
    std::string allowed;
    for (const auto& e : table) allowed += std::string(allowed.empty() ? "" : ", ") + e.name;
    throw Error(ErrorCode::ConfigError, std::string("unknown ") + what + " '" + s + "' (expected " + allowed + ")");
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& doc, const char* key) {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    return doc.at(key).get<double>();
}

std::string csv_opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

void set_sweep_value(ModelParams& p, SweepParameter which, double v) {
    switch (which) {
    case SweepParameter::Alpha: p.alpha = v; break;
    case SweepParameter::Gamma: p.gamma = v; break;
    case SweepParameter::Rabi: p.f_abs = v; break;
    }
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    const std::filesystem::path path = std::filesystem::path(config.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    return f;
}

void write_json_file(const RunConfig& config, const std::string& name, const json& doc) {
    std::ofstream f = open_output(config, name);
    f << doc.dump(2) << '\n';
}

int report(std::ostream& err, ErrorCode code, const std::string& message) {
    err << error_json(code, message).dump() << '\n';
    return exit_code_for(code);
}

// Runs body and maps thrown errors to the JSON error stream and an exit code.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        return report(err, e.code(), e.what());
    } catch (const json::exception& e) {
        return report(err, ErrorCode::ConfigError, e.what());
    } catch (const std::exception& e) {
        err << json{{"error", "InternalError"}, {"message", e.what()}, {"exit_code", 3}}.dump() << '\n';
        return 3;
    }
}

ReferenceOptions reference_options(const RunConfig& c) {
    ReferenceOptions r;
    r.t_max = c.t_max;
    r.grid_points = c.grid_points;
    r.rel_tol = c.rel_tol;
    r.abs_tol = c.abs_tol;
    r.seed = c.seed;
    return r;
}

StokesOptions stokes_options(const RunConfig& c) {
    StokesOptions o;
    o.N = c.terms;
    o.method = c.method;
    o.variant = c.variant;
    o.prefactor = c.prefactor;
    return o;
}

// `count` indices spread evenly over [0, n).
std::vector<std::size_t> spread(std::size_t n, int count) {
    std::vector<std::size_t> idx;
    if (n == 0 || count <= 0) return idx;
    if (n <= static_cast<std::size_t>(count)) {
        for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
        return idx;
    }
    for (int k = 0; k < count; ++k) idx.push_back(static_cast<std::size_t>(std::llround(double(k) * (n - 1) / (count - 1))));
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

json verdict_json(const BoundVerdict& v) {
    return {{"region1", {{"points", v.region1_points},
                         {"violations", v.region1_violations},
                         {"worst_ratio", v.region1_worst_ratio},
                         {"valid", v.region1_valid()}}},
            {"region2", {{"points", v.region2_points},
                         {"violations", v.region2_violations},
                         {"worst_ratio", v.region2_worst_ratio},
                         {"valid", v.region2_valid()}}}};
}

BoundVerdict verdict_from(const json& j) {
    BoundVerdict v;
    v.region1_points = j.at("region1").at("points").get<int>();
    v.region1_violations = j.at("region1").at("violations").get<int>();
    v.region1_worst_ratio = j.at("region1").at("worst_ratio").get<double>();
    v.region2_points = j.at("region2").at("points").get<int>();
    v.region2_violations = j.at("region2").at("violations").get<int>();
    v.region2_worst_ratio = j.at("region2").at("worst_ratio").get<double>();
    return v;
}

}  // namespace

const char* tool_version() { return NLCROSS_VERSION; }

void RunConfig::validate() const {
    params.validate();
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(ErrorCode::ConfigError, "t_max must be > 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw Error(ErrorCode::ConfigError, "tolerances must be > 0");
    if (grid_points < 3) throw Error(ErrorCode::ConfigError, "grid_points must be >= 3");
    if (terms < 1) throw Error(ErrorCode::ConfigError, "terms must be >= 1");
    if (grid < 2) throw Error(ErrorCode::ConfigError, "grid needs at least 2 x* candidates");
    if (jobs < 1) throw Error(ErrorCode::ConfigError, "jobs must be >= 1");
    if (!std::isfinite(x0_fit) || x0_fit > t_max * t_max)
        throw Error(ErrorCode::ConfigError, "x0_fit must lie inside (0, t_max^2]");
    if (!emit.any()) throw Error(ErrorCode::ConfigError, "at least one emit flag must be set");
    if (sweep_parameter && sweep_values.empty()) throw Error(ErrorCode::ConfigError, "sweep needs values");
    for (double v : sweep_values)
        if (!std::isfinite(v)) throw Error(ErrorCode::ConfigError, "sweep values must be finite");
}

RunConfig config_from_json(const json& doc, const RunConfig& base) {
    if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    RunConfig c = base;
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "schema") {
                if (v.get<std::string>() != kConfigSchema)
                    throw Error(ErrorCode::ConfigError, "unsupported config schema " + v.get<std::string>());
            } else if (key == "alpha") c.params.alpha = v.get<double>();
            else if (key == "gamma") c.params.gamma = v.get<double>();
            else if (key == "rabi") c.params.f_abs = v.get<double>();
            else if (key == "t_max") c.t_max = v.get<double>();
            else if (key == "rel_tol") c.rel_tol = v.get<double>();
            else if (key == "abs_tol") c.abs_tol = v.get<double>();
            else if (key == "grid_points") c.grid_points = v.get<int>();
            else if (key == "seed") c.seed = from_name(kSeedNames, v.get<std::string>(), "seed");
            else if (key == "terms") c.terms = v.get<int>();
            else if (key == "method") c.method = from_name(kMethodNames, v.get<std::string>(), "method");
            else if (key == "variant") c.variant = from_name(kVariantNames, v.get<std::string>(), "variant");
            else if (key == "prefactor")
                c.prefactor = from_name(kPrefactorNames, v.get<std::string>(), "prefactor");
            else if (key == "x0_fit") c.x0_fit = v.get<double>();
            else if (key == "grid") c.grid = v.get<int>();
            else if (key == "jobs") c.jobs = v.get<int>();
            else if (key == "out") c.out_dir = v.get<std::string>();
            else if (key == "emit") {
                for (const auto& [k, b] : v.items()) {
                    bool* slot = k == "trajectory" ? &c.emit.trajectory
                                 : k == "w1"       ? &c.emit.w1
                                 : k == "piecewise" ? &c.emit.piecewise
                                 : k == "stokes"   ? &c.emit.stokes
                                 : k == "bounds"   ? &c.emit.bounds
                                 : k == "summary"  ? &c.emit.summary
                                                   : nullptr;
                    if (!slot) throw Error(ErrorCode::ConfigError, "unknown emit flag '" + k + "'");
                    *slot = b.get<bool>();
                }
            } else if (key == "sweep") {
                if (v.is_null()) {
                    c.sweep_parameter.reset();
                    c.sweep_values.clear();
                } else {
                    c.sweep_parameter = from_name(kSweepNames, v.at("parameter").get<std::string>(), "sweep parameter");
                    c.sweep_values = v.at("values").get<std::vector<double>>();
                }
            } else {
                throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("config: ") + e.what());
    }
    return c;
}

json config_to_json(const RunConfig& c) {
    json doc = {{"schema", kConfigSchema},
                {"alpha", c.params.alpha},
                {"gamma", c.params.gamma},
                {"rabi", c.params.f_abs},
                {"t_max", c.t_max},
                {"rel_tol", c.rel_tol},
                {"abs_tol", c.abs_tol},
                {"grid_points", c.grid_points},
                {"seed", to_name(kSeedNames, c.seed)},
                {"terms", c.terms},
                {"method", to_name(kMethodNames, c.method)},
                {"variant", to_name(kVariantNames, c.variant)},
                {"prefactor", to_name(kPrefactorNames, c.prefactor)},
                {"x0_fit", c.x0_fit},
                {"grid", c.grid},
                {"jobs", c.jobs},
                {"out", c.out_dir},
                {"emit",
                 {{"trajectory", c.emit.trajectory},
                  {"w1", c.emit.w1},
                  {"piecewise", c.emit.piecewise},
                  {"stokes", c.emit.stokes},
                  {"bounds", c.emit.bounds},
                  {"summary", c.emit.summary}}}};
    if (c.sweep_parameter)
        doc["sweep"] = {{"parameter", to_name(kSweepNames, *c.sweep_parameter)}, {"values", c.sweep_values}};
    else
        doc["sweep"] = nullptr;
    return doc;
}

std::uint64_t config_hash(const RunConfig& c) {
    json doc = config_to_json(c);
    doc.erase("out");
    doc.erase("jobs");
    const std::string text = doc.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash_hex(const RunConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(c)));
    return buf;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ConfigError: return 2;
    case ErrorCode::SeriesDiverging: return 4;
    default: return 3;
    }
}

json error_json(ErrorCode code, const std::string& message) {
    return {{"error", std::string(error_code_name(code))}, {"message", message}, {"exit_code", exit_code_for(code)}};
}

SimulateResult run_simulate(const RunConfig& config) {
    config.validate();
    IntegratorConfig ic = symmetric_window(config.t_max, config.grid_points);
    ic.rel_tol = config.rel_tol;
    ic.abs_tol = config.abs_tol;
    ic.seed = config.seed;
    SimulateResult r;
    r.trajectory = integrate(config.params, ic);
    r.p_numeric = final_probability(r.trajectory);
    return r;
}

ApproximateResult run_approximate(const RunConfig& config) {
    config.validate();
    if (config.params.gamma == 0.0)
        throw Error(ErrorCode::DegenerateGamma, "piecewise approximation needs gamma != 0");
    const double x0 = config.effective_x0_fit();
    ApproximateResult r;
    r.reference = reference_trajectory(config.params, x0, reference_options(config));
    r.w1 = trajectory_in_w1(r.reference);
    PiecewiseOptions po;
    po.x0_fit = x0;
    po.search.points = config.grid;
    po.search.jobs = config.jobs;
    r.solution = build_piecewise(config.params, r.w1, po);
    r.p_numeric = final_probability(r.reference);
    r.p_piecewise = population_curve(r.solution, {config.t_max}).front().second;
    return r;
}

StokesRun run_stokes(const RunConfig& config) {
    config.validate();
    const DerivedCoefficients c = derive_coefficients(config.params);
    if (!c.has_gamma) throw Error(ErrorCode::DegenerateGamma, "Stokes route needs gamma != 0");
    StokesRun r;
    r.set = stokes_set(c, stokes_options(config));
    r.p_stokes = stokes_probability_from_set(r.set, config.params, config.prefactor);
    r.in_range = r.p_stokes >= -1e-6 && r.p_stokes <= 1.0 + 1e-6;
    return r;
}

json stokes_json(const StokesRun& run, const RunConfig& config) {
    json T = json::object(), U = json::object();
    for (int k = 0; k < 8; ++k) {
        T["T" + std::to_string(k + 1)] = {run.set.T[k].real(), run.set.T[k].imag()};
        U["U" + std::to_string(k + 1)] = {run.set.U[k].real(), run.set.U[k].imag()};
    }
    json doc = {{"schema", kStokesSchema},
                {"provenance", {{"tool_version", tool_version()}, {"config_hash", config_hash_hex(config)}}},
                {"params", {{"alpha", config.params.alpha}, {"gamma", config.params.gamma}, {"rabi", config.params.f_abs}}},
                {"method", to_name(kMethodNames, config.method)},
                {"variant", to_name(kVariantNames, config.variant)},
                {"prefactor", to_name(kPrefactorNames, config.prefactor)},
                {"T", T},
                {"U", U},
                {"rho", run.set.rho},
                {"eq23_residuals", run.set.eq23_residuals},
                {"p_stokes_raw", run.p_stokes},
                {"p_stokes", run.in_range ? json(run.p_stokes) : json(nullptr)},
                {"converged", run.set.converged},
                {"tail_estimate", run.set.tail_estimate},
                {"truncation_order", run.set.truncation_order},
                {"root_index", run.set.root_index}};
    return doc;
}

BoundVerdict check_bounds(const BoundModel& model, const std::vector<W1Sample>& w1, int points) {
    const PiecewiseSolution& sol = model.solution();
    std::vector<double> below, above;
    for (const W1Sample& s : w1) {
        if (!(s.x > 0.0)) continue;
        if (s.x < sol.x_star)
            below.push_back(s.x);
        else if (s.x > sol.x_star && s.x <= sol.x0_fit)
            above.push_back(s.x);
    }
    BoundVerdict v;
    for (std::size_t i : spread(below.size(), points)) {
        const BoundReport r = bound_report(below[i], model, w1);
        ++v.region2_points;
        if (!(r.observed_error <= r.bound_region2)) ++v.region2_violations;
        v.region2_worst_ratio = std::max(v.region2_worst_ratio, r.observed_error / r.bound_region2);
    }
    for (std::size_t i : spread(above.size(), points)) {
        const BoundReport r = bound_report(above[i], model, w1);
        ++v.region1_points;
        if (!(r.observed_error <= r.bound_region1)) ++v.region1_violations;
        v.region1_worst_ratio = std::max(v.region1_worst_ratio, r.observed_error / r.bound_region1);
    }
    return v;
}

json ResultSummary::to_json() const {
    json errors = json::object();
    for (const auto& [k, v] : route_errors) errors[k] = v;
    return {{"schema", kSummarySchema},
            {"provenance", {{"tool_version", tool_version}, {"config_hash", config_hash}}},
            {"params", {{"alpha", params.alpha}, {"gamma", params.gamma}, {"rabi", params.f_abs}}},
            {"p_numeric", opt_json(p_numeric)},
            {"p_piecewise", opt_json(p_piecewise)},
            {"p_stokes", opt_json(p_stokes)},
            {"x_bar_star", opt_json(x_bar_star)},
            {"x_star_bound", opt_json(x_star_bound)},
            {"E_min", opt_json(e_min)},
            {"norm_drift_max", opt_json(norm_drift_max)},
            {"stokes_converged", stokes_converged},
            {"discrepancies", discrepancies},
            {"bounds", bounds ? verdict_json(*bounds) : json(nullptr)},
            {"errors", errors}};
}

ResultSummary ResultSummary::from_json(const json& doc) {
    if (doc.value("schema", std::string()) != kSummarySchema)
        throw Error(ErrorCode::ConfigError, "not a summary document");
    ResultSummary s;
    try {
        s.tool_version = doc.at("provenance").at("tool_version").get<std::string>();
        s.config_hash = doc.at("provenance").at("config_hash").get<std::string>();
        s.params.alpha = doc.at("params").at("alpha").get<double>();
        s.params.gamma = doc.at("params").at("gamma").get<double>();
        s.params.f_abs = doc.at("params").at("rabi").get<double>();
        s.p_numeric = opt_from(doc, "p_numeric");
        s.p_piecewise = opt_from(doc, "p_piecewise");
        s.p_stokes = opt_from(doc, "p_stokes");
        s.x_bar_star = opt_from(doc, "x_bar_star");
        s.x_star_bound = opt_from(doc, "x_star_bound");
        s.e_min = opt_from(doc, "E_min");
        s.norm_drift_max = opt_from(doc, "norm_drift_max");
        s.stokes_converged = doc.at("stokes_converged").get<bool>();
        s.discrepancies = doc.at("discrepancies").get<std::map<std::string, double>>();
        if (!doc.at("bounds").is_null()) s.bounds = verdict_from(doc.at("bounds"));
        for (const auto& [k, v] : doc.at("errors").items()) s.route_errors[k] = v;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("summary: ") + e.what());
    }
    return s;
}

void fill_discrepancies(ResultSummary& s) {
    s.discrepancies.clear();
    const std::pair<const char*, const std::optional<double>*> routes[] = {
        {"numeric", &s.p_numeric}, {"piecewise", &s.p_piecewise}, {"stokes", &s.p_stokes}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (*routes[i].second && *routes[j].second)
                s.discrepancies[std::string(routes[i].first) + "_" + routes[j].first] =
                    std::abs(**routes[i].second - **routes[j].second);
}

ResultSummary run_compare(const RunConfig& config) {
    config.validate();
    const bool numeric = config.emit.trajectory, piecewise = config.emit.piecewise, stokes = config.emit.stokes;
    if (int(numeric) + int(piecewise) + int(stokes) < 2)
        throw Error(ErrorCode::ConfigError, "compare needs at least two of the trajectory, piecewise and stokes routes");

    ResultSummary s;
    s.params = config.params;
    s.tool_version = tool_version();
    s.config_hash = config_hash_hex(config);
    auto record = [&](const char* route, const Error& e) { s.route_errors[route] = error_json(e.code(), e.what()); };

    std::optional<ApproximateResult> approx;
    if (piecewise) {
        try {
            approx = run_approximate(config);
            s.p_piecewise = approx->p_piecewise;
            s.x_bar_star = approx->solution.x_star;
            s.e_min = approx->solution.max_error_at_star;
        } catch (const Error& e) {
            record("piecewise", e);
        }
    }
    if (numeric) {
        try {
            // The piecewise reference is the same integration on a grid with sqrt(x0) added.
            if (approx) {
                s.p_numeric = approx->p_numeric;
                s.norm_drift_max = approx->reference.norm_drift_max;
            } else {
                const SimulateResult sim = run_simulate(config);
                s.p_numeric = sim.p_numeric;
                s.norm_drift_max = sim.trajectory.norm_drift_max;
            }
        } catch (const Error& e) {
            record("numeric", e);
        }
    }
    if (stokes) {
        try {
            const StokesRun run = run_stokes(config);
            s.stokes_converged = run.set.converged;
            if (!run.in_range)
                throw Error(ErrorCode::OutOfRangeProbability,
                            "Stokes-route probability " + format_real(run.p_stokes) + " outside [0, 1]");
            s.p_stokes = run.p_stokes;
        } catch (const Error& e) {
            record("stokes", e);
        }
    }
    if (config.emit.bounds && approx) {
        try {
            const BoundModel model(approx->solution);
            s.bounds = check_bounds(model, approx->w1);
            const double x0 = approx->solution.x0_fit;
            s.x_star_bound = bound_crossing_point(model, 1e-3 * x0, 0.8 * x0);
        } catch (const Error& e) {
            record("bounds", e);
        }
    }
    fill_discrepancies(s);
    return s;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
    config.validate();
    if (!config.sweep_parameter) throw Error(ErrorCode::ConfigError, "sweep needs a parameter and values");
    std::vector<double> values = config.sweep_values;
    std::stable_sort(values.begin(), values.end());

    std::vector<SweepRow> rows(values.size());
    auto run_point = [&](std::size_t i) {
        RunConfig c = config;
        c.jobs = 1;
        c.sweep_parameter.reset();
        c.sweep_values.clear();
        set_sweep_value(c.params, *config.sweep_parameter, values[i]);
        rows[i].value = values[i];
        try {
            rows[i].summary = run_compare(c);
        } catch (const Error& e) {
            rows[i].summary = ResultSummary{};
            rows[i].summary.params = c.params;
            rows[i].summary.tool_version = tool_version();
            rows[i].summary.config_hash = config_hash_hex(c);
            rows[i].summary.route_errors["point"] = error_json(e.code(), e.what());
        }
    };
    const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(values.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < values.size(); ++i) run_point(i);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&, j] {
                for (std::size_t i = j; i < values.size(); i += jobs) run_point(i);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,re_c1,im_c1,re_c2,im_c2,p1,p2,norm_drift\n";
    for (const AmplitudeSample& s : tr.samples)
        os << format_real(s.t) << ',' << format_real(s.c1.real()) << ',' << format_real(s.c1.imag()) << ','
           << format_real(s.c2.real()) << ',' << format_real(s.c2.imag()) << ',' << format_real(std::norm(s.c1))
           << ',' << format_real(std::norm(s.c2)) << ',' << format_real(s.norm_drift()) << '\n';
}

void write_piecewise_csv(std::ostream& os, const ApproximateResult& r) {
    os << "x,w1_num_sq,w1_approx_sq,abs_err,region\n";
    for (const W1Sample& s : r.w1) {
        if (!(s.x > 0.0)) continue;
        const PiecewiseValue v = evaluate_piecewise(r.solution, s.x);
        const double num = std::norm(s.w1), app = std::norm(v.w1);
        os << format_real(s.x) << ',' << format_real(num) << ',' << format_real(app) << ','
           << format_real(std::abs(num - app)) << ',' << (v.region == Region::I ? "I" : "II") << '\n';
    }
}

void write_population_csv(std::ostream& os, const ApproximateResult& r) {
    os << "t,p1_num,p1_approx\n";
    for (const AmplitudeSample& s : r.reference.samples) {
        if (!(s.t > 0.0)) continue;
        const double pa = std::norm(evaluate_piecewise(r.solution, s.t * s.t).w1) / s.t;
        os << format_real(s.t) << ',' << format_real(std::norm(s.c1)) << ',' << format_real(pa) << '\n';
    }
}

namespace {

void write_w1_csv(std::ostream& os, const std::vector<W1Sample>& w1) {
    os << "x,re_w1,im_w1,re_dw1,im_dw1\n";
    for (const W1Sample& s : w1)
        os << format_real(s.x) << ',' << format_real(s.w1.real()) << ',' << format_real(s.w1.imag()) << ','
           << format_real(s.w1_prime.real()) << ',' << format_real(s.w1_prime.imag()) << '\n';
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, SweepParameter parameter) {
    os << to_name(kSweepNames, parameter)
       << ",alpha,gamma,rabi,p_numeric,p_piecewise,p_stokes,x_bar_star,E_min,x_star_bound,stokes_converged,"
          "bounds_region1_valid,bounds_region2_valid,errors\n";
    for (const SweepRow& r : rows) {
        const ResultSummary& s = r.summary;
        std::string errors;
        for (const auto& [route, e] : s.route_errors)
            errors += (errors.empty() ? "" : ";") + route + ":" + e.at("error").get<std::string>();
        os << format_real(r.value) << ',' << format_real(s.params.alpha) << ',' << format_real(s.params.gamma) << ','
           << format_real(s.params.f_abs) << ',' << csv_opt(s.p_numeric) << ',' << csv_opt(s.p_piecewise) << ','
           << csv_opt(s.p_stokes) << ',' << csv_opt(s.x_bar_star) << ',' << csv_opt(s.e_min) << ','
           << csv_opt(s.x_star_bound) << ',' << (s.stokes_converged ? "true" : "false") << ','
           << (s.bounds ? (s.bounds->region1_valid() ? "true" : "false") : "") << ','
           << (s.bounds ? (s.bounds->region2_valid() ? "true" : "false") : "") << ',' << errors << '\n';
    }
}

std::string summary_table(const ResultSummary& s) {
    std::ostringstream os;
    auto row = [&](const char* name, const std::optional<double>& v) {
        os << std::left << std::setw(24) << name << (v ? format_real(*v) : std::string("-")) << '\n';
    };
    os << "alpha=" << s.params.alpha << " gamma=" << s.params.gamma << " |f|=" << s.params.f_abs << '\n';
    row("p_numeric", s.p_numeric);
    row("p_piecewise", s.p_piecewise);
    row("p_stokes", s.p_stokes);
    row("x_bar_star", s.x_bar_star);
    row("x_star_bound", s.x_star_bound);
    row("E_min", s.e_min);
    for (const auto& [k, v] : s.discrepancies) row(("|d| " + k).c_str(), v);
    if (s.bounds) {
        os << std::left << std::setw(24) << "bounds I" << (s.bounds->region1_valid() ? "valid" : "violated") << " ("
           << s.bounds->region1_violations << '/' << s.bounds->region1_points << ")\n";
        os << std::left << std::setw(24) << "bounds II" << (s.bounds->region2_valid() ? "valid" : "violated") << " ("
           << s.bounds->region2_violations << '/' << s.bounds->region2_points << ")\n";
    }
    for (const auto& [route, e] : s.route_errors)
        os << std::left << std::setw(24) << ("error " + route) << e.at("error").get<std::string>() << ": "
           << e.at("message").get<std::string>() << '\n';
    return os.str();
}

int cmd_simulate(const RunConfig& config, std::ostream& err) {
    return guarded(err, [&] {
        const SimulateResult r = run_simulate(config);
        if (config.emit.trajectory) {
            std::ofstream f = open_output(config, "trajectory.csv");
            write_trajectory_csv(f, r.trajectory);
        }
        if (config.emit.summary) {
            ResultSummary s;
            s.params = config.params;
            s.tool_version = tool_version();
            s.config_hash = config_hash_hex(config);
            s.p_numeric = r.p_numeric;
            s.norm_drift_max = r.trajectory.norm_drift_max;
            write_json_file(config, "summary.json", s.to_json());
        }
        return 0;
    });
}

int cmd_approximate(const RunConfig& config, std::ostream& err) {
    return guarded(err, [&] {
        const ApproximateResult r = run_approximate(config);
        if (config.emit.piecewise) {
            std::ofstream f = open_output(config, "piecewise.csv");
            write_piecewise_csv(f, r);
            std::ofstream g = open_output(config, "population.csv");
            write_population_csv(g, r);
        }
        if (config.emit.w1) {
            std::ofstream f = open_output(config, "w1.csv");
            write_w1_csv(f, r.w1);
        }
        if (config.emit.summary) {
            ResultSummary s;
            s.params = config.params;
            s.tool_version = tool_version();
            s.config_hash = config_hash_hex(config);
            s.p_numeric = r.p_numeric;
            s.p_piecewise = r.p_piecewise;
            s.x_bar_star = r.solution.x_star;
            s.e_min = r.solution.max_error_at_star;
            s.norm_drift_max = r.reference.norm_drift_max;
            fill_discrepancies(s);
            write_json_file(config, "summary.json", s.to_json());
        }
        return 0;
    });
}

int cmd_stokes(const RunConfig& config, std::ostream& err) {
    return guarded(err, [&] {
        const StokesRun r = run_stokes(config);
        write_json_file(config, "stokes.json", stokes_json(r, config));
        if (config.method == StokesMethod::Series && !r.set.converged)
            return report(err, ErrorCode::SeriesDiverging,
                          "T1 series did not converge; optimal truncation at order " +
                              std::to_string(r.set.truncation_order) + ", tail estimate " +
                              format_real(r.set.tail_estimate));
        if (!r.in_range)
            return report(err, ErrorCode::OutOfRangeProbability,
                          "Stokes-route probability " + format_real(r.p_stokes) + " outside [0, 1]");
        return 0;
    });
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ResultSummary s = run_compare(config);
        if (config.emit.summary) write_json_file(config, "summary.json", s.to_json());
        out << summary_table(s);
        int code = 0;
        // A missing bound crossing is a diagnostic, not a failed route.
        for (const auto& [route, e] : s.route_errors) {
            err << e.dump() << '\n';
            if (route != "bounds") code = std::max(code, e.at("exit_code").get<int>());
        }
        return code;
    });
}

int cmd_sweep(const RunConfig& config, std::ostream& err) {
    return guarded(err, [&] {
        const std::vector<SweepRow> rows = run_sweep(config);
        std::ofstream f = open_output(config, "sweep.csv");
        write_sweep_csv(f, rows, *config.sweep_parameter);
        return 0;
    });
}

}  // namespace nlcross
