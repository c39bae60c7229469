#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "baird/harness.hpp"

namespace baird {

// Shortest decimal string that parses back to exactly `x`.
std::string format_real(double x);

// JSON object with the ExperimentConfig field names. Missing keys keep their
// defaults; unknown keys and wrongly typed values raise ConfigError naming the key.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& cfg);

// Throws IoError if the file cannot be opened, ConfigError if it does not parse.
ExperimentConfig read_config(const std::filesystem::path& path);
void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// {"base": {...config...}, "alpha_grid": [...], "beta_grid": [...]}
SweepSpec sweep_from_json_text(const std::string& text);
SweepSpec read_sweep_spec(const std::filesystem::path& path);

// The exact metrics header:
// run_id,seed,step,rmsve,mspbe,neu,rmsre,ode_loss,td_err_1..7,v_1..7,td_target,theta_1..8,w_1..8,diverged
const std::vector<std::string>& metrics_csv_columns();

void write_metrics_csv(const std::vector<RunLog>& logs, std::ostream& out);
void write_metrics_csv(const std::vector<RunLog>& logs, const std::filesystem::path& path);

// step, then <metric>_mean,<metric>_stderr for each aggregated metric.
void write_curve_csv(const AggregateCurve& curve, std::ostream& out);
void write_curve_csv(const AggregateCurve& curve, const std::filesystem::path& path);

// JSON document describing the closed-form model (A, b, C, ranks, mu, spectrum of C).
std::string model_to_json_text(const ExactModel& model);

}  // namespace baird
