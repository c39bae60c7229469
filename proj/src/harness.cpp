#include "baird/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace baird {

Vec8 default_theta0() {
    Vec8 theta = Vec8::Ones();
    theta(6) = 10.0;
    return theta;
}

void validate(const ExperimentConfig& cfg) {
    auto finite = [](double x) { return std::isfinite(x); };
    const std::pair<const char*, double> reals[] = {
        {"alpha", cfg.alpha}, {"beta", cfg.beta}, {"eta", cfg.eta}, {"reg", cfg.reg}, {"gamma", cfg.gamma}};
    for (const auto& [name, value] : reals) {
        if (!finite(value)) throw ConfigError(std::string(name) + " must be finite");
        if (value < 0.0) throw ConfigError(std::string(name) + " must be nonnegative");
    }
    if (!cfg.theta0.allFinite()) throw ConfigError("theta0 must be finite");
    if (!cfg.w0.allFinite()) throw ConfigError("w0 must be finite");
    if (cfg.gamma >= 1.0) throw ConfigError("gamma must lie in [0, 1)");
    if (cfg.steps < 1) throw ConfigError("steps must be >= 1");
    if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
    if (cfg.log_every < 1) throw ConfigError("log_every must be >= 1");
    if (cfg.algo == Algorithm::impression_gtd) {
        if (cfg.batch < 1) throw ConfigError("batch must be >= 1");
        if (cfg.buffer_capacity && *cfg.buffer_capacity < 2 * cfg.batch) {
            throw ConfigError("buffer_capacity must hold two batches");
        }
    }
}

namespace {

bool out_of_bounds(const LearnerState& st) {
    return !st.theta.allFinite() || st.theta.cwiseAbs().maxCoeff() > kDivergenceGuard;
}

// Separate stream for mini-batch draws so the environment trajectory of a
// seed does not depend on the algorithm.
constexpr std::uint64_t kLearnerStream = 0xA5A5'5A5A'C3C3'3C3CULL;

}  // namespace

RunLog run_single(const ExperimentConfig& cfg, std::size_t run_id, std::uint64_t seed) {
    validate(cfg);
    const ExactModel model = exact_model(cfg.gamma);
    const StepSizes sizes = cfg.step_sizes();

    RunLog log;
    log.run_id = run_id;
    log.seed = seed;
    log.records.reserve(cfg.steps / cfg.log_every + 2);

    Rng env_rng(seed);
    Rng learner_rng(mix64(seed ^ kLearnerStream));
    BairdChain chain(env_rng);
    ReplayBuffer buffer(cfg.buffer_capacity);
    const std::size_t ready = std::max(cfg.warmup, 2 * cfg.batch);

    LearnerState st{cfg.theta0, cfg.w0, 0};
    for (std::size_t t = 0;; ++t) {
        if (t % cfg.log_every == 0 || t == cfg.steps) {
            log.records.push_back(snapshot(st.theta, st.w, t, model));
        }
        if (t == cfg.steps) break;

        const Transition tr = chain.step();
        if (cfg.algo == Algorithm::impression_gtd) {
            buffer.push(tr);
            if (t + 1 >= ready) {
                if (auto next = impression_gtd_step(st, buffer, sizes, cfg.batch, cfg.gamma, learner_rng)) {
                    st = std::move(*next);
                }
            }
        } else {
            st = step(cfg.algo, st, tr, sizes, cfg.gamma);
        }

        if (out_of_bounds(st)) {
            log.diverged = true;
            log.records.push_back(snapshot(st.theta, st.w, t + 1, model));
            break;
        }
    }
    return log;
}

std::vector<RunLog> run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<RunLog> logs(cfg.runs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t k = next++; k < cfg.runs; k = next++) {
            try {
                logs[k] = run_single(cfg, k, child_seed(cfg.seed, k));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min(hw, cfg.runs);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const std::string fp = fingerprint(cfg);
    for (auto& log : logs) log.config_fingerprint = fp;
    return logs;
}

const std::vector<std::string>& aggregate_metric_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v = {"rmsve", "mspbe", "neu", "rmsre", "ode_loss"};
        for (int s = 1; s <= kNumStates; ++s) v.push_back("td_err_" + std::to_string(s));
        for (int s = 1; s <= kNumStates; ++s) v.push_back("v_" + std::to_string(s));
        v.push_back("td_target");
        for (int i = 1; i <= kNumFeatures; ++i) v.push_back("theta_" + std::to_string(i));
        for (int i = 1; i <= kNumFeatures; ++i) v.push_back("w_" + std::to_string(i));
        return v;
    }();
    return names;
}

double metric_value(const MetricsRecord& rec, const std::string& name) {
    if (name == "rmsve") return rec.rmsve;
    if (name == "mspbe") return rec.mspbe;
    if (name == "neu") return rec.neu;
    if (name == "rmsre") return rec.rmsre;
    if (name == "ode_loss") return rec.ode_loss;
    if (name == "td_target") return rec.td_target;
    auto indexed = [&](const std::string& prefix, int limit) -> int {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return 0;
        const std::string tail = name.substr(prefix.size());
        if (tail.size() != 1 || tail[0] < '1' || tail[0] > '0' + limit) return 0;
        return tail[0] - '0';
    };
    if (int i = indexed("td_err_", kNumStates)) return rec.td_err(i - 1);
    if (int i = indexed("v_", kNumStates)) return rec.values(i - 1);
    if (int i = indexed("theta_", kNumFeatures)) return rec.theta(i - 1);
    if (int i = indexed("w_", kNumFeatures)) return rec.w(i - 1);
    throw std::invalid_argument("unknown metric: " + name);
}

const SeriesStats& AggregateCurve::at(const std::string& metric) const {
    auto it = metrics.find(metric);
    if (it == metrics.end()) throw std::invalid_argument("metric not aggregated: " + metric);
    return it->second;
}

AggregateCurve aggregate(const std::vector<RunLog>& logs) {
    if (logs.empty()) throw std::domain_error("aggregate needs at least one run");
    AggregateCurve curve;
    curve.runs = logs.size();

    std::vector<const RunLog*> kept;
    for (const auto& log : logs) {
        if (!log.diverged) kept.push_back(&log);
    }
    curve.included = kept.size();
    curve.divergence_fraction =
        static_cast<double>(logs.size() - kept.size()) / static_cast<double>(logs.size());
    for (const auto& name : aggregate_metric_names()) curve.metrics[name] = {};
    if (kept.empty()) return curve;

    const auto& grid = kept.front()->records;
    for (const auto* log : kept) {
        if (log->records.size() != grid.size()) throw std::domain_error("runs do not share a step grid");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (log->records[i].step != grid[i].step) throw std::domain_error("runs do not share a step grid");
        }
    }
    for (const auto& rec : grid) curve.steps.push_back(rec.step);

    const double n = static_cast<double>(kept.size());
    for (const auto& name : aggregate_metric_names()) {
        SeriesStats& stats = curve.metrics[name];
        stats.mean.resize(grid.size());
        stats.std_error.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double sum = 0.0;
            for (const auto* log : kept) sum += metric_value(log->records[i], name);
            const double mean = sum / n;
            double ss = 0.0;
            for (const auto* log : kept) {
                const double d = metric_value(log->records[i], name) - mean;
                ss += d * d;
            }
            stats.mean[i] = mean;
            stats.std_error[i] = kept.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
        }
    }
    return curve;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
    if (spec.alpha_grid.empty() || spec.beta_grid.empty()) {
        throw ConfigError("sweep grids must be non-empty");
    }
    std::vector<SweepCell> cells;
    cells.reserve(spec.alpha_grid.size() * spec.beta_grid.size());
    for (double alpha : spec.alpha_grid) {
        for (double beta : spec.beta_grid) {
            SweepCell cell;
            cell.alpha = alpha;
            cell.beta = beta;
            ExperimentConfig cfg = spec.base;
            cfg.alpha = alpha;
            cfg.beta = beta;
            try {
                cell.logs = run_experiment(cfg);
                cell.curve = aggregate(cell.logs);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace baird
