// Command-line driver: run, sweep, model, selfcheck.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "baird/env.hpp"
#include "baird/harness.hpp"
#include "baird/io.hpp"
#include "baird/selfcheck.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct RunFlags {
    std::optional<std::string> config;
    std::optional<std::string> algo;
    std::optional<double> alpha, beta, eta, reg, gamma;
    std::optional<std::size_t> steps, runs, batch, warmup, log_every;
    std::optional<std::uint64_t> seed;
    std::string out = "metrics.csv";
    std::optional<std::string> curve;
};

baird::ExperimentConfig resolve(const RunFlags& f) {
    baird::ExperimentConfig cfg = f.config ? baird::read_config(*f.config) : baird::ExperimentConfig{};
    if (f.algo) {
        try {
            cfg.algo = baird::parse_algorithm(*f.algo);
        } catch (const std::invalid_argument& e) {
            throw baird::ConfigError(e.what());
        }
    }
    if (f.alpha) cfg.alpha = *f.alpha;
    if (f.beta) cfg.beta = *f.beta;
    if (f.eta) cfg.eta = *f.eta;
    if (f.reg) cfg.reg = *f.reg;
    if (f.gamma) cfg.gamma = *f.gamma;
    if (f.steps) cfg.steps = *f.steps;
    if (f.runs) cfg.runs = *f.runs;
    if (f.seed) cfg.seed = *f.seed;
    if (f.batch) cfg.batch = *f.batch;
    if (f.warmup) cfg.warmup = *f.warmup;
    if (f.log_every) cfg.log_every = *f.log_every;
    baird::validate(cfg);
    return cfg;
}

void print_summary(const baird::AggregateCurve& curve, std::ostream& os) {
    os << "runs: " << curve.runs << ", diverged: " << curve.runs - curve.included
       << " (fraction " << curve.divergence_fraction << ")\n";
    if (curve.steps.empty()) return;
    const std::size_t last = curve.steps.size() - 1;
    for (const char* m : {"rmsve", "mspbe", "neu", "rmsre", "ode_loss"}) {
        os << "final " << m << ": " << baird::format_real(curve.at(m).mean[last]) << " +- "
           << baird::format_real(curve.at(m).std_error[last]) << "  (step " << curve.steps[last] << ")\n";
    }
}

int cmd_run(const RunFlags& flags) {
    const baird::ExperimentConfig cfg = resolve(flags);
    const auto logs = baird::run_experiment(cfg);
    baird::write_metrics_csv(logs, std::filesystem::path(flags.out));
    const auto curve = baird::aggregate(logs);
    if (flags.curve) baird::write_curve_csv(curve, std::filesystem::path(*flags.curve));
    std::cout << "algo: " << baird::to_string(cfg.algo) << ", config " << baird::fingerprint(cfg) << "\n";
    print_summary(curve, std::cout);
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out_dir) {
    const baird::SweepSpec spec = baird::read_sweep_spec(config);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw baird::IoError("cannot create " + out_dir + ": " + ec.message());

    const auto cells = baird::run_sweep(spec);
    const std::filesystem::path dir(out_dir);
    std::ofstream summary(dir / "summary.csv");
    if (!summary) throw baird::IoError("cannot write " + (dir / "summary.csv").string());
    summary << "cell,alpha,beta,final_step,final_rmsve_mean,final_rmsve_stderr,divergence_fraction,error\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = cells[i];
        const std::string stem = "cell_" + std::to_string(i);
        summary << i << ',' << baird::format_real(cell.alpha) << ',' << baird::format_real(cell.beta) << ',';
        if (cell.curve && !cell.curve->steps.empty()) {
            const auto& rm = cell.curve->at("rmsve");
            summary << cell.curve->steps.back() << ',' << baird::format_real(rm.mean.back()) << ','
                    << baird::format_real(rm.std_error.back());
        } else {
            summary << ",,";
        }
        summary << ',' << (cell.curve ? baird::format_real(cell.curve->divergence_fraction) : "") << ','
                << (cell.error ? "\"" + *cell.error + "\"" : "") << '\n';
        if (!cell.logs.empty()) baird::write_metrics_csv(cell.logs, dir / (stem + "_metrics.csv"));
        if (cell.curve) baird::write_curve_csv(*cell.curve, dir / (stem + "_curve.csv"));
        std::cout << stem << " alpha=" << cell.alpha << " beta=" << cell.beta;
        if (cell.error) std::cout << " error: " << *cell.error;
        if (cell.curve && !cell.curve->steps.empty()) {
            std::cout << " final rmsve=" << cell.curve->at("rmsve").mean.back()
                      << " diverged=" << cell.curve->divergence_fraction;
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_model(double gamma) {
    std::cout << baird::model_to_json_text(baird::exact_model(gamma)) << '\n';
    return 0;
}

int cmd_selfcheck() {
    bool ok = true;
    for (const auto& r : baird::run_selfcheck()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
        std::cout << '\n';
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Off-policy TD laboratory on the Baird counterexample"};
    app.require_subcommand(1);

    RunFlags rf;
    auto* run = app.add_subcommand("run", "run one experiment configuration");
    run->add_option("--config", rf.config, "JSON config; flags override its fields");
    run->add_option("--algo", rf.algo, "td0|tdc|gtd|gtd2|tdrc|rg|impression_gtd");
    run->add_option("--alpha", rf.alpha);
    run->add_option("--beta", rf.beta);
    run->add_option("--eta", rf.eta);
    run->add_option("--reg", rf.reg);
    run->add_option("--gamma", rf.gamma);
    run->add_option("--steps", rf.steps);
    run->add_option("--runs", rf.runs);
    run->add_option("--seed", rf.seed);
    run->add_option("--batch", rf.batch);
    run->add_option("--warmup", rf.warmup);
    run->add_option("--log-every", rf.log_every);
    run->add_option("--out", rf.out, "metrics CSV path")->capture_default_str();
    run->add_option("--curve", rf.curve, "optional aggregated curve CSV path");

    std::string sweep_config, out_dir = "sweep_out";
    auto* sweep = app.add_subcommand("sweep", "grid sweep over alpha x beta");
    sweep->add_option("--config", sweep_config, "sweep spec JSON")->required();
    sweep->add_option("--out-dir", out_dir)->capture_default_str();

    double gamma = 0.9;
    auto* model = app.add_subcommand("model", "print the closed-form model as JSON");
    model->add_option("--gamma", gamma)->capture_default_str();

    auto* selfcheck = app.add_subcommand("selfcheck", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(rf);
        if (*sweep) return cmd_sweep(sweep_config, out_dir);
        if (*model) return cmd_model(gamma);
        if (*selfcheck) return cmd_selfcheck();
    } catch (const baird::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const baird::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
