#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlcross/io.hpp"

using namespace nlcross;

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Small but complete configuration so compare/sweep stay quick.
RunConfig small_config() {
    RunConfig c;
    c.t_max = 10.0;
    c.grid_points = 2001;
    c.grid = 12;
    c.emit.bounds = false;
    return c;
}

std::filesystem::path scratch_dir(const char* name) {
    const auto p = std::filesystem::temp_directory_path() / "nlcross_test_io" / name;
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config round trip through JSON") {
    RunConfig c;
    c.params = {0.5, -2.0, 0.7};
    c.t_max = 15.0;
    c.seed = SeedConvention::PaperWkb;
    c.method = StokesMethod::Series;
    c.variant = StokesVariant::Verbatim;
    c.prefactor = PrefactorConvention::Paper;
    c.terms = 12;
    c.x0_fit = 100.0;
    c.grid = 30;
    c.emit.w1 = false;
    c.sweep_parameter = SweepParameter::Rabi;
    c.sweep_values = {0.1, 0.2};
    const json doc = config_to_json(c);
    CHECK(doc.at("schema") == kConfigSchema);
    const RunConfig back = config_from_json(doc);
    CHECK(config_to_json(back) == doc);
    CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("config errors") {
    auto code_of = [](const json& doc) {
        try {
            config_from_json(doc);
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("expected an error");
        return ErrorCode::NoConvergence;
    };
    CHECK(code_of(json{{"alpah", 1.0}}) == ErrorCode::ConfigError);
    CHECK(code_of(json{{"method", "magic"}}) == ErrorCode::ConfigError);
    CHECK(code_of(json{{"alpha", "one"}}) == ErrorCode::ConfigError);
    CHECK(code_of(json{{"emit", {{"plots", true}}}}) == ErrorCode::ConfigError);
    CHECK(code_of(json{{"schema", "other/9"}}) == ErrorCode::ConfigError);
    CHECK(code_of(json::array()) == ErrorCode::ConfigError);

    RunConfig c;
    c.jobs = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.x0_fit = 1e6;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.emit = {false, false, false, false, false, false};
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("config hash ignores where and how fast results are produced") {
    RunConfig a, b;
    b.out_dir = "/elsewhere";
    b.jobs = 8;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash_hex(a).size() == 16);
    b.params.alpha = std::nextafter(1.0, 2.0);
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("reals are written with 17 significant digits") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_real(M_PI)) == M_PI);
    for (double v : {-2.5e-300, 1.0 / 3.0, 6.02214076e23}) CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("exit codes and error documents") {
    CHECK(exit_code_for(ErrorCode::ConfigError) == 2);
    CHECK(exit_code_for(ErrorCode::SeriesDiverging) == 4);
    CHECK(exit_code_for(ErrorCode::WindowTooShort) == 3);
    const json e = error_json(ErrorCode::SeedTooClose, "boom");
    CHECK(e.at("error") == "SeedTooClose");
    CHECK(e.at("message") == "boom");
    CHECK(e.at("exit_code") == 3);
}

TEST_CASE("summary round trip and discrepancies") {
    ResultSummary s;
    s.params = {1.0, 2.0, 0.5};
    s.p_numeric = 0.25;
    s.p_stokes = 0.2500001;
    s.x_bar_star = 0.9;
    s.e_min = 0.3;
    s.stokes_converged = true;
    s.bounds = BoundVerdict{20, 0, 20, 3, 0.5, 1.7};
    s.route_errors["piecewise"] = error_json(ErrorCode::IllConditionedFit, "x");
    s.tool_version = tool_version();
    s.config_hash = "00000000deadbeef";
    fill_discrepancies(s);
    REQUIRE(s.discrepancies.size() == 1);
    CHECK(s.discrepancies.at("numeric_stokes") == doctest::Approx(1e-7));

    const json doc = s.to_json();
    CHECK(doc.at("p_piecewise").is_null());
    const ResultSummary back = ResultSummary::from_json(doc);
    CHECK(back.to_json() == doc);
    CHECK(back.bounds->region1_valid());
    CHECK_FALSE(back.bounds->region2_valid());
    CHECK_THROWS_AS(ResultSummary::from_json(json{{"schema", "x"}}), Error);
}

TEST_CASE("trajectory CSV") {
    RunConfig c = small_config();
    c.grid_points = 11;
    const SimulateResult r = run_simulate(c);
    std::ostringstream os;
    write_trajectory_csv(os, r.trajectory);
    const std::string text = os.str();
    CHECK(first_line(text) == "t,re_c1,im_c1,re_c2,im_c2,p1,p2,norm_drift");
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
}

TEST_CASE("zero coupling leaves state 1 empty in every output") {
    RunConfig c = small_config();
    c.params.f_abs = 0.0;
    c.grid_points = 21;
    const SimulateResult r = run_simulate(c);
    CHECK(r.p_numeric == 0.0);
    for (const AmplitudeSample& s : r.trajectory.samples) CHECK(std::norm(s.c1) == 0.0);
}

TEST_CASE("approximate writes piecewise and population tables") {
    RunConfig c = small_config();
    c.out_dir = scratch_dir("approx").string();
    std::ostringstream err;
    REQUIRE(cmd_approximate(c, err) == 0);
    const auto dir = std::filesystem::path(c.out_dir);
    const std::string pw = read_file(dir / "piecewise.csv");
    CHECK(first_line(pw) == "x,w1_num_sq,w1_approx_sq,abs_err,region");
    CHECK(first_line(read_file(dir / "population.csv")) == "t,p1_num,p1_approx");
    CHECK(first_line(read_file(dir / "w1.csv")) == "x,re_w1,im_w1,re_dw1,im_dw1");
    // The region column switches exactly once.
    std::istringstream in(pw);
    std::string line, prev;
    int switches = 0;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const std::string reg = line.substr(line.rfind(',') + 1);
        if (!prev.empty() && reg != prev) ++switches;
        prev = reg;
    }
    CHECK(switches == 1);
    const ResultSummary s = ResultSummary::from_json(json::parse(read_file(dir / "summary.json")));
    CHECK(s.config_hash == config_hash_hex(c));
    CHECK(s.p_piecewise.has_value());
}

TEST_CASE("stokes command exit codes") {
    RunConfig c = small_config();
    c.out_dir = scratch_dir("stokes").string();
    std::ostringstream err;
    CHECK(cmd_stokes(c, err) == 0);
    const json doc = json::parse(read_file(std::filesystem::path(c.out_dir) / "stokes.json"));
    CHECK(doc.at("schema") == kStokesSchema);
    CHECK(doc.at("T").size() == 8);

    c.method = StokesMethod::Series;
    std::ostringstream err2;
    CHECK(cmd_stokes(c, err2) == 4);
    CHECK(json::parse(first_line(err2.str())).at("error") == "SeriesDiverging");

    c.params.gamma = 0.0;
    std::ostringstream err3;
    CHECK(cmd_stokes(c, err3) == 3);
}

TEST_CASE("compare reports every route and consistent discrepancies") {
    RunConfig c = small_config();
    const ResultSummary s = run_compare(c);
    REQUIRE(s.p_numeric);
    REQUIRE(s.p_piecewise);
    REQUIRE(s.p_stokes);
    CHECK(s.route_errors.empty());
    CHECK(s.discrepancies.size() == 3);
    CHECK(s.discrepancies.at("numeric_stokes") == std::abs(*s.p_numeric - *s.p_stokes));
    CHECK(s.discrepancies.at("numeric_piecewise") == std::abs(*s.p_numeric - *s.p_piecewise));

    c.emit.piecewise = c.emit.stokes = false;
    CHECK_THROWS_AS(run_compare(c), Error);
}

TEST_CASE("sweep is independent of the worker count") {
    RunConfig c = small_config();
    c.emit.piecewise = false;
    c.sweep_parameter = SweepParameter::Gamma;
    c.sweep_values = {2.0, 0.0, 1.0, 0.5};
    const std::vector<SweepRow> serial = run_sweep(c);
    c.jobs = 3;
    const std::vector<SweepRow> parallel = run_sweep(c);
    REQUIRE(serial.size() == 4);
    CHECK(serial.front().value == 0.0);
    CHECK(serial.front().summary.route_errors.count("stokes") == 1);
    std::ostringstream a, b;
    write_sweep_csv(a, serial, SweepParameter::Gamma);
    write_sweep_csv(b, parallel, SweepParameter::Gamma);
    CHECK(a.str() == b.str());
    CHECK(first_line(a.str()).rfind("gamma,alpha,gamma,rabi,p_numeric", 0) == 0);
}
