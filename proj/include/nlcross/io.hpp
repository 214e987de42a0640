#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlcross/bounds.hpp"
#include "nlcross/errors.hpp"
#include "nlcross/ode.hpp"
#include "nlcross/piecewise.hpp"
#include "nlcross/stokes.hpp"

namespace nlcross {

using json = nlohmann::json;

inline constexpr const char* kSummarySchema = "nlcross.summary/1";
inline constexpr const char* kStokesSchema = "nlcross.stokes/1";
inline constexpr const char* kConfigSchema = "nlcross.config/1";

const char* tool_version();

struct EmitFlags {
    bool trajectory = true;
    bool w1 = true;
    bool piecewise = true;
    bool stokes = true;
    bool bounds = true;
    bool summary = true;

    bool any() const { return trajectory || w1 || piecewise || stokes || bounds || summary; }
};

enum class SweepParameter { Alpha, Gamma, Rabi };

struct RunConfig {
    ModelParams params;

    double t_max = 20.0;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int grid_points = 8001;
    SeedConvention seed = SeedConvention::Adiabatic;

    int terms = 40;
    StokesMethod method = StokesMethod::Numeric;
    StokesVariant variant = StokesVariant::Corrected;
    PrefactorConvention prefactor = PrefactorConvention::Corrected;

    double x0_fit = 0.0;  // <= 0: 0.9 t_max^2
    int grid = 24;        // x* candidates

    int jobs = 1;
    std::string out_dir = ".";
    EmitFlags emit;

    std::optional<SweepParameter> sweep_parameter;
    std::vector<double> sweep_values;

    void validate() const;
    double effective_x0_fit() const { return x0_fit > 0.0 ? x0_fit : 0.9 * t_max * t_max; }
};

// Keys mirror the long CLI flags with '-' replaced by '_'. Unknown keys are a ConfigError.
RunConfig config_from_json(const json& doc, const RunConfig& base = {});
json config_to_json(const RunConfig& config);

// FNV-1a over the canonical JSON of every field that affects results (out_dir and jobs excluded).
std::uint64_t config_hash(const RunConfig& config);
std::string config_hash_hex(const RunConfig& config);

// 17 significant digits.
std::string format_real(double v);

int exit_code_for(ErrorCode code);
json error_json(ErrorCode code, const std::string& message);

// ---- computation (no file output) ----

struct SimulateResult {
    Trajectory trajectory;
    double p_numeric = 0.0;
};
SimulateResult run_simulate(const RunConfig& config);

struct ApproximateResult {
    Trajectory reference;
    std::vector<W1Sample> w1;
    PiecewiseSolution solution;
    double p_numeric = 0.0;
    double p_piecewise = 0.0;  // |W1_approx(t_max^2)|^2 / t_max
};
ApproximateResult run_approximate(const RunConfig& config);

struct StokesRun {
    StokesSet set;
    double p_stokes = 0.0;
    bool in_range = true;
};
StokesRun run_stokes(const RunConfig& config);
json stokes_json(const StokesRun& run, const RunConfig& config);

struct BoundVerdict {
    int region1_points = 0, region1_violations = 0;
    int region2_points = 0, region2_violations = 0;
    double region1_worst_ratio = 0.0;  // max observed / bound
    double region2_worst_ratio = 0.0;
    bool region1_valid() const { return region1_points > 0 && region1_violations == 0; }
    bool region2_valid() const { return region2_points > 0 && region2_violations == 0; }
};

// Samples up to `points` reference x on each side of x_star and reports observed vs bound.
BoundVerdict check_bounds(const BoundModel& model, const std::vector<W1Sample>& w1, int points = 20);

struct ResultSummary {
    ModelParams params;
    std::optional<double> p_numeric, p_piecewise, p_stokes;
    std::optional<double> x_bar_star, x_star_bound, e_min;
    std::optional<double> norm_drift_max;
    bool stokes_converged = false;
    std::map<std::string, double> discrepancies;
    std::optional<BoundVerdict> bounds;
    std::map<std::string, json> route_errors;  // route -> error JSON
    std::string tool_version;
    std::string config_hash;

    json to_json() const;
    static ResultSummary from_json(const json& doc);
};

// |p_i - p_j| for every pair of present probabilities.
void fill_discrepancies(ResultSummary& summary);

// Every route the emit flags enable; failures land in route_errors.
ResultSummary run_compare(const RunConfig& config);

struct SweepRow {
    double value = 0.0;
    ResultSummary summary;
};
std::vector<SweepRow> run_sweep(const RunConfig& config);

// ---- serialization ----

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);
void write_piecewise_csv(std::ostream& os, const ApproximateResult& result);
void write_population_csv(std::ostream& os, const ApproximateResult& result);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, SweepParameter parameter);
std::string summary_table(const ResultSummary& summary);

// ---- commands: write files under config.out_dir, return the process exit code ----

int cmd_simulate(const RunConfig& config, std::ostream& err);
int cmd_approximate(const RunConfig& config, std::ostream& err);
int cmd_stokes(const RunConfig& config, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& err);

}  // namespace nlcross
