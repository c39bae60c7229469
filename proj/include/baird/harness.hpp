#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "baird/algorithms.hpp"
#include "baird/diagnostics.hpp"

namespace baird {

// Raised for invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised for unreadable or unwritable files (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDivergenceGuard = 1e8;

Vec8 default_theta0();

struct ExperimentConfig {
    Algorithm algo = Algorithm::tdc;
    double alpha = 0.005;
    double beta = 0.05;
    double eta = 1.0;
    double reg = 1.0;
    double gamma = 0.9;
    Vec8 theta0 = default_theta0();
    Vec8 w0 = Vec8::Zero();
    std::size_t steps = 1000;
    std::size_t runs = 50;
    std::uint64_t seed = 0;
    std::size_t batch = 10;
    std::size_t warmup = 100;
    std::optional<std::size_t> buffer_capacity;  // nullopt: keep the whole history
    std::size_t log_every = 10;

    StepSizes step_sizes() const { return {alpha, beta, eta, reg}; }
    bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError describing the first violated constraint.
void validate(const ExperimentConfig& cfg);

// Stable 64-bit hash of every config field, rendered as 16 hex digits.
std::string fingerprint(const ExperimentConfig& cfg);

struct RunLog {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::string config_fingerprint;
    std::vector<MetricsRecord> records;
    bool diverged = false;
};

// One run with an explicit seed. Records are taken before the update of the
// logged step; step 0 holds the initial iterates.
RunLog run_single(const ExperimentConfig& cfg, std::size_t run_id, std::uint64_t seed);

// cfg.runs independent runs; run k uses child_seed(cfg.seed, k). Runs may
// execute concurrently; the result is ordered by run id.
std::vector<RunLog> run_experiment(const ExperimentConfig& cfg);

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> std_error;
};

struct AggregateCurve {
    std::vector<std::size_t> steps;
    std::map<std::string, SeriesStats> metrics;
    std::size_t runs = 0;          // all runs, including divergent ones
    std::size_t included = 0;      // runs that contributed to the means
    double divergence_fraction = 0.0;

    const SeriesStats& at(const std::string& metric) const;
};

// Names of the scalar columns that aggregate() summarizes, in CSV order.
const std::vector<std::string>& aggregate_metric_names();

// Scalar value of a named metric column of a record (e.g. "rmsve", "td_err_3", "theta_8").
double metric_value(const MetricsRecord& rec, const std::string& name);

// Pointwise mean and standard error over the non-divergent runs. Throws
// std::domain_error on empty input or when included runs disagree on steps.
AggregateCurve aggregate(const std::vector<RunLog>& logs);

struct SweepSpec {
    ExperimentConfig base;
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
};

struct SweepCell {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<RunLog> logs;
    std::optional<AggregateCurve> curve;
    std::optional<std::string> error;
};

// Cells in alpha-major order. A failing cell records its error and the others still run.
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

}  // namespace baird
