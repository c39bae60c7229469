#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "baird/algorithms.hpp"
#include "baird/diagnostics.hpp"
#include "baird/env.hpp"
#include "baird/harness.hpp"
#include "baird/io.hpp"
#include "baird/selfcheck.hpp"

namespace py = pybind11;
using namespace baird;

namespace {

void bind_env(py::module_& m) {
    py::enum_<Action>(m, "Action").value("solid", Action::solid).value("dashed", Action::dashed);

    py::class_<Rng>(m, "Rng", "64-bit Mersenne Twister")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform01", [](Rng& r) { return uniform01(r); });

    py::class_<Transition>(m, "Transition")
        .def_readonly("s", &Transition::s)
        .def_readonly("action", &Transition::action)
        .def_readonly("s_next", &Transition::s_next)
        .def_readonly("r", &Transition::r)
        .def_readonly("phi", &Transition::phi)
        .def_readonly("phi_next", &Transition::phi_next)
        .def_readonly("rho", &Transition::rho)
        .def("__repr__", [](const Transition& t) {
            return "Transition(s=" + std::to_string(t.s) + ", action=" + std::string(to_string(t.action)) +
                   ", s_next=" + std::to_string(t.s_next) + ", rho=" + format_real(t.rho) + ")";
        });

    py::class_<ExactModel>(m, "ExactModel")
        .def_readonly("gamma", &ExactModel::gamma)
        .def_readonly("A", &ExactModel::A)
        .def_readonly("b", &ExactModel::b)
        .def_readonly("C", &ExactModel::C)
        .def_readonly("mu", &ExactModel::mu)
        .def_readonly("C_pinv", &ExactModel::C_pinv);

    m.def("feature_vector", &feature_vector, py::arg("s"));
    m.def("feature_matrix", [] { return FeatureMatrix(feature_matrix()); });
    m.def("importance_ratio", &importance_ratio, py::arg("action"));
    m.def("make_transition", &make_transition, py::arg("s"), py::arg("action"), py::arg("s_next"));
    m.def("sample_transition", [](int s, Rng& rng) { return sample_transition(s, rng); }, py::arg("s"),
          py::arg("rng"));
    m.def("stationary_distribution", &stationary_distribution);
    m.def("exact_model", &exact_model, py::arg("gamma") = 0.9);
    m.def("true_values", &true_values);
    m.def("numerical_rank", &numerical_rank, py::arg("m"), py::arg("rel_tol") = 1e-10);
}

void bind_algorithms(py::module_& m) {
    py::enum_<Algorithm> algo(m, "Algorithm");
    for (Algorithm a : all_algorithms()) algo.value(std::string(to_string(a)).c_str(), a);

    py::class_<LearnerState>(m, "LearnerState")
        .def(py::init([](const Vec8& theta, const Vec8& w, std::size_t t) { return LearnerState{theta, w, t}; }),
             py::arg("theta"), py::arg("w") = Vec8::Zero(), py::arg("t") = 0)
        .def_readwrite("theta", &LearnerState::theta)
        .def_readwrite("w", &LearnerState::w)
        .def_readwrite("t", &LearnerState::t);

    py::class_<StepSizes>(m, "StepSizes")
        .def(py::init([](double alpha, double beta, double eta, double reg) {
                 return StepSizes{alpha, beta, eta, reg};
             }),
             py::arg("alpha"), py::arg("beta") = 0.0, py::arg("eta") = 1.0, py::arg("reg") = 0.0)
        .def_readwrite("alpha", &StepSizes::alpha)
        .def_readwrite("beta", &StepSizes::beta)
        .def_readwrite("eta", &StepSizes::eta)
        .def_readwrite("reg", &StepSizes::reg);

    m.def("td_error", &td_error, py::arg("tr"), py::arg("theta"), py::arg("gamma"));
    const auto args = std::make_tuple(py::arg("state"), py::arg("tr"), py::arg("sizes"), py::arg("gamma") = 0.9);
    auto def_step = [&](const char* name, auto fn) {
        m.def(name, fn, std::get<0>(args), std::get<1>(args), std::get<2>(args), std::get<3>(args));
    };
    def_step("td0_step", &td0_step);
    def_step("tdc_step", &tdc_step);
    def_step("gtd_step", &gtd_step);
    def_step("gtd2_step", &gtd2_step);
    def_step("tdrc_step", &tdrc_step);
    def_step("rg_step", &rg_step);
    m.def("step", &step, py::arg("algo"), py::arg("state"), py::arg("tr"), py::arg("sizes"),
          py::arg("gamma") = 0.9);

    py::class_<ReplayBuffer>(m, "ReplayBuffer")
        .def(py::init<std::optional<std::size_t>>(), py::arg("capacity") = py::none())
        .def("push", &ReplayBuffer::push)
        .def("__len__", &ReplayBuffer::size)
        .def("__getitem__", [](const ReplayBuffer& b, std::size_t i) {
            if (i >= b.size()) throw py::index_error();
            return b[i];
        })
        .def("sample", &ReplayBuffer::sample, py::arg("n"), py::arg("rng"));

    m.def("impression_gtd_step", &impression_gtd_step, py::arg("state"), py::arg("buffer"), py::arg("sizes"),
          py::arg("batch"), py::arg("gamma"), py::arg("rng"));
}

void bind_diagnostics(py::module_& m) {
    m.def("rmsve", &rmsve, py::arg("theta"));
    m.def("mspbe", &mspbe, py::arg("theta"), py::arg("model"));
    m.def("neu", &neu, py::arg("theta"), py::arg("model"));
    m.def("rmsre", &rmsre, py::arg("w"), py::arg("theta"), py::arg("gamma") = 0.9);
    m.def("ode_loss", &ode_loss, py::arg("w"), py::arg("theta"), py::arg("model"));
    m.def("per_state_td_errors", &per_state_td_errors, py::arg("theta"), py::arg("gamma") = 0.9);
    m.def("state_values", &state_values, py::arg("theta"));
    m.def(
        "contraction_rate",
        [](double alpha, double gamma, const Vec8& phi7, double rho) {
            const ContractionRate r = contraction_rate(alpha, gamma, phi7, rho);
            return py::make_tuple(r.rate, r.contracting);
        },
        py::arg("alpha"), py::arg("gamma"), py::arg("phi7"), py::arg("rho") = 1.0,
        "Returns (rate, contracting).");

    py::class_<MetricsRecord>(m, "MetricsRecord")
        .def_readonly("step", &MetricsRecord::step)
        .def_readonly("rmsve", &MetricsRecord::rmsve)
        .def_readonly("mspbe", &MetricsRecord::mspbe)
        .def_readonly("neu", &MetricsRecord::neu)
        .def_readonly("rmsre", &MetricsRecord::rmsre)
        .def_readonly("ode_loss", &MetricsRecord::ode_loss)
        .def_readonly("td_err", &MetricsRecord::td_err)
        .def_readonly("values", &MetricsRecord::values)
        .def_readonly("td_target", &MetricsRecord::td_target)
        .def_readonly("theta", &MetricsRecord::theta)
        .def_readonly("w", &MetricsRecord::w);
    m.def("snapshot", &snapshot, py::arg("theta"), py::arg("w"), py::arg("step"), py::arg("model"));
}

void bind_harness(py::module_& m) {
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("algo", &ExperimentConfig::algo)
        .def_readwrite("alpha", &ExperimentConfig::alpha)
        .def_readwrite("beta", &ExperimentConfig::beta)
        .def_readwrite("eta", &ExperimentConfig::eta)
        .def_readwrite("reg", &ExperimentConfig::reg)
        .def_readwrite("gamma", &ExperimentConfig::gamma)
        .def_readwrite("theta0", &ExperimentConfig::theta0)
        .def_readwrite("w0", &ExperimentConfig::w0)
        .def_readwrite("steps", &ExperimentConfig::steps)
        .def_readwrite("runs", &ExperimentConfig::runs)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("batch", &ExperimentConfig::batch)
        .def_readwrite("warmup", &ExperimentConfig::warmup)
        .def_readwrite("buffer_capacity", &ExperimentConfig::buffer_capacity)
        .def_readwrite("log_every", &ExperimentConfig::log_every)
        .def("to_json", &config_to_json_text)
        .def_static("from_json", &config_from_json_text, py::arg("text"))
        .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });

    py::class_<RunLog>(m, "RunLog")
        .def_readonly("run_id", &RunLog::run_id)
        .def_readonly("seed", &RunLog::seed)
        .def_readonly("config_fingerprint", &RunLog::config_fingerprint)
        .def_readonly("records", &RunLog::records)
        .def_readonly("diverged", &RunLog::diverged)
        .def("series", [](const RunLog& log, const std::string& name) {
            std::vector<double> out;
            out.reserve(log.records.size());
            for (const auto& rec : log.records) out.push_back(metric_value(rec, name));
            return out;
        });

    py::class_<SeriesStats>(m, "SeriesStats")
        .def_readonly("mean", &SeriesStats::mean)
        .def_readonly("std_error", &SeriesStats::std_error);

    py::class_<AggregateCurve>(m, "AggregateCurve")
        .def_readonly("steps", &AggregateCurve::steps)
        .def_readonly("metrics", &AggregateCurve::metrics)
        .def_readonly("runs", &AggregateCurve::runs)
        .def_readonly("included", &AggregateCurve::included)
        .def_readonly("divergence_fraction", &AggregateCurve::divergence_fraction)
        .def("__getitem__", &AggregateCurve::at);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("alpha", &SweepCell::alpha)
        .def_readonly("beta", &SweepCell::beta)
        .def_readonly("logs", &SweepCell::logs)
        .def_readonly("curve", &SweepCell::curve)
        .def_readonly("error", &SweepCell::error);

    m.def("validate", &validate, py::arg("config"));
    m.def("fingerprint", &fingerprint, py::arg("config"));
    m.def("child_seed", &child_seed, py::arg("master"), py::arg("k"));
    m.def("run_experiment", &run_experiment, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("run_single", &run_single, py::arg("config"), py::arg("run_id"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("aggregate", &aggregate, py::arg("logs"));
    m.def(
        "run_sweep",
        [](const ExperimentConfig& base, std::vector<double> alphas, std::vector<double> betas) {
            py::gil_scoped_release release;
            return run_sweep(SweepSpec{base, std::move(alphas), std::move(betas)});
        },
        py::arg("base"), py::arg("alpha_grid"), py::arg("beta_grid"));
    m.def("read_config", &read_config, py::arg("path"));
    m.def("write_config", &write_config, py::arg("config"), py::arg("path"));
    m.def("write_metrics_csv",
          py::overload_cast<const std::vector<RunLog>&, const std::filesystem::path&>(&write_metrics_csv),
          py::arg("logs"), py::arg("path"));
    m.def("write_curve_csv",
          py::overload_cast<const AggregateCurve&, const std::filesystem::path&>(&write_curve_csv),
          py::arg("curve"), py::arg("path"));
    m.def("metrics_csv_columns", &metrics_csv_columns);
    m.def("model_json", [](double gamma) { return model_to_json_text(exact_model(gamma)); },
          py::arg("gamma") = 0.9);
    m.def("selfcheck", [] {
        py::list out;
        for (const auto& r : run_selfcheck()) out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
    });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Off-policy TD laboratory on the Baird counterexample";
    bind_env(m);
    bind_algorithms(m);
    bind_diagnostics(m);
    bind_harness(m);
}
