#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "baird/io.hpp"

using namespace baird;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("baird_io_test_" + name);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

TEST_CASE("format_real round-trips exactly") {
    Rng rng(123);
    for (int i = 0; i < 20000; ++i) {
        const double mant = 2.0 * uniform01(rng) - 1.0;
        const int exp = static_cast<int>(uniform_index(rng, 80)) - 40;
        const double x = std::ldexp(mant, exp);
        CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
    }
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(0.99975) == "0.99975");
    CHECK(std::strtod(format_real(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
          std::numeric_limits<double>::denorm_min());
}

TEST_CASE("config round-trips through JSON") {
    ExperimentConfig cfg;
    cfg.algo = Algorithm::impression_gtd;
    cfg.alpha = 0.1 + 0.2;
    cfg.beta = 1.0 / 3.0;
    cfg.theta0(2) = -7.25e-9;
    cfg.w0(7) = 1e300;
    cfg.seed = 18446744073709551615ULL;
    cfg.buffer_capacity = 500;
    const auto path = temp_path("cfg.json");
    write_config(cfg, path);
    CHECK(read_config(path) == cfg);

    cfg.buffer_capacity.reset();
    CHECK(config_from_json_text(config_to_json_text(cfg)) == cfg);
    std::filesystem::remove(path);
}

TEST_CASE("config parsing errors name the problem") {
    auto message = [](const std::string& text) -> std::string {
        try {
            config_from_json_text(text);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(message(R"({"algo": "tdc", "alpah": 0.1})").find("alpah") != std::string::npos);
    CHECK(message(R"({"alpha": "fast"})").find("alpha") != std::string::npos);
    CHECK(message(R"({"steps": -3})").find("steps") != std::string::npos);
    CHECK(message(R"({"theta0": [1, 2]})").find("theta0") != std::string::npos);
    CHECK(message(R"({"algo": "q_learning"})").find("algo") != std::string::npos);
    CHECK(message("{\n  \"alpha\": 0.1,\n  oops\n}").find("line 3") != std::string::npos);
    CHECK(message("[1, 2]").find("object") != std::string::npos);
    CHECK(message("{}").empty());

    CHECK_THROWS_AS(read_config(temp_path("does_not_exist.json")), IoError);
}

TEST_CASE("sweep spec parsing") {
    const SweepSpec spec = sweep_from_json_text(
        R"({"base": {"algo": "gtd", "steps": 50}, "alpha_grid": [0.005, 0.01], "beta_grid": [0.05]})");
    CHECK(spec.base.algo == Algorithm::gtd);
    CHECK(spec.base.steps == 50);
    CHECK(spec.alpha_grid == std::vector<double>{0.005, 0.01});
    CHECK(spec.beta_grid == std::vector<double>{0.05});
    CHECK_THROWS_AS(sweep_from_json_text(R"({"alpha_grid": [], "beta_grid": [1]})"), ConfigError);
    CHECK_THROWS_AS(sweep_from_json_text(R"({"alpha_grid": [1], "beta_grid": [1], "x": 1})"), ConfigError);
}

TEST_CASE("metrics CSV schema and contents") {
    std::string expected = "run_id,seed,step,rmsve,mspbe,neu,rmsre,ode_loss";
    for (int s = 1; s <= 7; ++s) expected += ",td_err_" + std::to_string(s);
    for (int s = 1; s <= 7; ++s) expected += ",v_" + std::to_string(s);
    expected += ",td_target";
    for (int i = 1; i <= 8; ++i) expected += ",theta_" + std::to_string(i);
    for (int i = 1; i <= 8; ++i) expected += ",w_" + std::to_string(i);
    expected += ",diverged";

    ExperimentConfig cfg;
    cfg.steps = 100;
    cfg.runs = 3;
    cfg.log_every = 10;
    const auto logs = run_experiment(cfg);
    const auto path = temp_path("metrics.csv");
    write_metrics_csv(logs, path);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == expected);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto cells = split(line);
        REQUIRE(cells.size() == metrics_csv_columns().size());
        const auto& log = logs[std::stoul(cells[0])];
        const auto& rec = log.records[rows % log.records.size()];
        CHECK(std::stoull(cells[1]) == log.seed);
        CHECK(std::stoul(cells[2]) == rec.step);
        CHECK(std::strtod(cells[3].c_str(), nullptr) == rec.rmsve);
        CHECK(std::strtod(cells[22].c_str(), nullptr) == rec.td_target);
        CHECK(std::strtod(cells[30].c_str(), nullptr) == rec.theta(7));
        CHECK(std::strtod(cells[38].c_str(), nullptr) == rec.w(7));
        CHECK(cells.back() == "0");
        ++rows;
    }
    CHECK(rows == cfg.runs * (cfg.steps / cfg.log_every + 1));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(write_metrics_csv(logs, std::filesystem::path("/nonexistent_dir/x.csv")), IoError);
}

TEST_CASE("curve CSV") {
    ExperimentConfig cfg;
    cfg.steps = 50;
    cfg.runs = 2;
    const AggregateCurve curve = aggregate(run_experiment(cfg));
    std::ostringstream out;
    write_curve_csv(curve, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("step,rmsve_mean,rmsve_stderr,mspbe_mean", 0) == 0);
    CHECK(split(header).size() == 1 + 2 * aggregate_metric_names().size());
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == curve.steps.size());
}

TEST_CASE("model JSON") {
    const std::string text = model_to_json_text(exact_model(0.9));
    CHECK(text.find("\"rank_A\": 7") != std::string::npos);
    CHECK(text.find("\"rank_C\": 7") != std::string::npos);
    CHECK(text.find("\"mu\"") != std::string::npos);
}
