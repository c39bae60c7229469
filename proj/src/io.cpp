#include "baird/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace baird {

using nlohmann::json;

std::string format_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys = {"algo",   "alpha", "beta",  "eta",   "reg",
                                               "gamma",  "theta0", "w0",   "steps", "runs",
                                               "seed",   "batch", "warmup", "buffer_capacity", "log_every"};
    return keys;
}

json vec_to_json(const Vec8& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vec8 vec_from_json(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(kNumFeatures)) {
        throw ConfigError("field '" + key + "': expected an array of 8 numbers");
    }
    Vec8 v;
    for (int i = 0; i < kNumFeatures; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number()) {
            throw ConfigError("field '" + key + "': element " + std::to_string(i + 1) + " is not a number");
        }
        v(i) = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

double real_field(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("field '" + key + "': expected a number");
    return j.get<double>();
}

std::uint64_t count_field(const json& j, const std::string& key) {
    if (!j.is_number_unsigned()) {
        throw ConfigError("field '" + key + "': expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!config_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    ExperimentConfig cfg;
    if (j.contains("algo")) {
        if (!j["algo"].is_string()) throw ConfigError("field 'algo': expected a string");
        try {
            cfg.algo = parse_algorithm(j["algo"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("field 'algo': ") + e.what());
        }
    }
    auto real = [&](const char* key, double& out) {
        if (j.contains(key)) out = real_field(j[key], key);
    };
    auto count = [&](const char* key, auto& out) {
        if (j.contains(key)) out = static_cast<std::remove_reference_t<decltype(out)>>(count_field(j[key], key));
    };
    real("alpha", cfg.alpha);
    real("beta", cfg.beta);
    real("eta", cfg.eta);
    real("reg", cfg.reg);
    real("gamma", cfg.gamma);
    if (j.contains("theta0")) cfg.theta0 = vec_from_json(j["theta0"], "theta0");
    if (j.contains("w0")) cfg.w0 = vec_from_json(j["w0"], "w0");
    count("steps", cfg.steps);
    count("runs", cfg.runs);
    count("seed", cfg.seed);
    count("batch", cfg.batch);
    count("warmup", cfg.warmup);
    count("log_every", cfg.log_every);
    if (j.contains("buffer_capacity")) {
        if (j["buffer_capacity"].is_null()) {
            cfg.buffer_capacity.reset();
        } else {
            cfg.buffer_capacity = count_field(j["buffer_capacity"], "buffer_capacity");
        }
    }
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["algo"] = std::string(to_string(cfg.algo));
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["eta"] = cfg.eta;
    j["reg"] = cfg.reg;
    j["gamma"] = cfg.gamma;
    j["theta0"] = vec_to_json(cfg.theta0);
    j["w0"] = vec_to_json(cfg.w0);
    j["steps"] = cfg.steps;
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    j["batch"] = cfg.batch;
    j["warmup"] = cfg.warmup;
    j["buffer_capacity"] = cfg.buffer_capacity ? json(*cfg.buffer_capacity) : json(nullptr);
    j["log_every"] = cfg.log_every;
    return j;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    return config_from_json(parse_json(text));
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2);
}

std::string fingerprint(const ExperimentConfig& cfg) {
    // FNV-1a over the compact JSON form.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : config_to_json(cfg).dump()) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
    const std::string text = slurp(path);
    try {
        return config_from_json_text(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << config_to_json_text(cfg) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

SweepSpec sweep_from_json_text(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ConfigError("sweep spec must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "base" && key != "alpha_grid" && key != "beta_grid") {
            throw ConfigError("unknown sweep key '" + key + "'");
        }
    }
    SweepSpec spec;
    spec.base = config_from_json(j.value("base", json::object()));
    auto grid = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
            throw ConfigError(std::string("field '") + key + "': expected a non-empty array of numbers");
        }
        std::vector<double> out;
        for (const auto& x : j[key]) out.push_back(real_field(x, key));
        return out;
    };
    spec.alpha_grid = grid("alpha_grid");
    spec.beta_grid = grid("beta_grid");
    return spec;
}

SweepSpec read_sweep_spec(const std::filesystem::path& path) {
    const std::string text = slurp(path);
    try {
        return sweep_from_json_text(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

const std::vector<std::string>& metrics_csv_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {"run_id", "seed", "step"};
        for (const auto& name : aggregate_metric_names()) c.push_back(name);
        c.push_back("diverged");
        return c;
    }();
    return cols;
}

void write_metrics_csv(const std::vector<RunLog>& logs, std::ostream& out) {
    const auto& cols = metrics_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    auto reals = [&](const auto& v) {
        for (int i = 0; i < v.size(); ++i) out << ',' << format_real(v(i));
    };
    for (const auto& log : logs) {
        for (const auto& rec : log.records) {
            out << log.run_id << ',' << log.seed << ',' << rec.step << ',' << format_real(rec.rmsve) << ','
                << format_real(rec.mspbe) << ',' << format_real(rec.neu) << ',' << format_real(rec.rmsre) << ','
                << format_real(rec.ode_loss);
            reals(rec.td_err);
            reals(rec.values);
            out << ',' << format_real(rec.td_target);
            reals(rec.theta);
            reals(rec.w);
            out << ',' << (log.diverged ? 1 : 0) << '\n';
        }
    }
}

void write_metrics_csv(const std::vector<RunLog>& logs, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_metrics_csv(logs, out);
    if (!out) throw IoError("failed writing " + path.string());
}

void write_curve_csv(const AggregateCurve& curve, std::ostream& out) {
    out << "step";
    for (const auto& name : aggregate_metric_names()) out << ',' << name << "_mean," << name << "_stderr";
    out << '\n';
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
        out << curve.steps[i];
        for (const auto& name : aggregate_metric_names()) {
            const auto& s = curve.at(name);
            out << ',' << format_real(s.mean[i]) << ',' << format_real(s.std_error[i]);
        }
        out << '\n';
    }
}

void write_curve_csv(const AggregateCurve& curve, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_curve_csv(curve, out);
    if (!out) throw IoError("failed writing " + path.string());
}

std::string model_to_json_text(const ExactModel& model) {
    auto mat = [](const Mat8& m) {
        json rows = json::array();
        for (int i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
            rows.push_back(row);
        }
        return rows;
    };
    json j;
    j["gamma"] = model.gamma;
    j["A"] = mat(model.A);
    j["b"] = vec_to_json(model.b);
    j["C"] = mat(model.C);
    j["rank_A"] = numerical_rank(model.A);
    j["rank_C"] = numerical_rank(model.C);
    json mu = json::array();
    for (int i = 0; i < model.mu.size(); ++i) mu.push_back(model.mu(i));
    j["mu"] = mu;
    Eigen::SelfAdjointEigenSolver<Mat8> eig(model.C);
    j["eigenvalues_C"] = vec_to_json(eig.eigenvalues());
    return j.dump(2);
}

}  // namespace baird
