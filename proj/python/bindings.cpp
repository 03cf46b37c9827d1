#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "panicsim/analysis.hpp"
#include "panicsim/correlated_noise.hpp"
#include "panicsim/cross_section.hpp"
#include "panicsim/errors.hpp"
#include "panicsim/feedback_process.hpp"
#include "panicsim/order_parameter.hpp"
#include "panicsim/rolling_pca.hpp"
#include "panicsim/scenario_engine.hpp"

namespace py = pybind11;
using namespace panicsim;

namespace {

py::dict summary_dict(const CrossSectionSummary& s) {
    py::dict d;
    d["mean"] = s.mean;
    d["dispersion"] = s.dispersion;
    d["skew"] = s.skew;
    d["excess_kurtosis"] = s.excess_kurtosis;
    d["s"] = s.s;
    d["n_up"] = s.n_up;
    d["n_down"] = s.n_down;
    d["n_zero"] = s.n_zero;
    return d;
}

}  // namespace

PYBIND11_MODULE(_panicsim, m) {
    m.doc() = "Self-organizing market panic simulator: core bindings";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
    py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

    py::enum_<DriftForm>(m, "DriftForm").value("PLAIN", DriftForm::Plain).value("HALVED", DriftForm::Halved);
    py::enum_<ControlMode>(m, "ControlMode")
        .value("VOLATILITY", ControlMode::Volatility)
        .value("RETURN", ControlMode::Return);
    py::enum_<VolTransform>(m, "VolTransform")
        .value("RETURNS", VolTransform::Returns)
        .value("ABS_RETURNS", VolTransform::AbsReturns)
        .value("DIFF_ABS_RETURNS", VolTransform::DiffAbsReturns);

    py::class_<FeedbackParams>(m, "FeedbackParams")
        .def(py::init<>())
        .def_readwrite("sigma0", &FeedbackParams::sigma0)
        .def_readwrite("g", &FeedbackParams::g)
        .def_readwrite("gamma", &FeedbackParams::gamma)
        .def_readwrite("memory", &FeedbackParams::memory);

    m.def("check_stability", [](const FeedbackParams& p) {
        const StabilityReport r = check_stability(p);
        return py::make_tuple(r.stable, r.margin, r.reason);
    }, "Returns (stable, margin or None, reason).");

    m.def("feedback_path", [](const FeedbackParams& p, std::vector<double> draws) {
        p.validate();
        PathState state;
        std::vector<double> out;
        out.reserve(draws.size());
        for (double z : draws) out.push_back(advance(state, p, z));
        return out;
    }, py::arg("params"), py::arg("draws"), "Returns driven by the given standard-normal draws.");

    py::class_<OrderParamCoeffs>(m, "OrderParamCoeffs")
        .def(py::init<>())
        .def_readwrite("a", &OrderParamCoeffs::a)
        .def_readwrite("b", &OrderParamCoeffs::b)
        .def_readwrite("noise_sd", &OrderParamCoeffs::noise_sd)
        .def_readwrite("form", &OrderParamCoeffs::form);
    m.def("control_coefficient", &control_coefficient, py::arg("sigma0_now"), py::arg("sigma_c"));
    m.def("drift", &drift, py::arg("s_hat"), py::arg("coeffs"));
    m.def("potential", &potential, py::arg("m"), py::arg("coeffs"));

    py::class_<EquicorrFactor, std::shared_ptr<EquicorrFactor>>(m, "EquicorrFactor")
        .def(py::init<std::size_t, double>(), py::arg("n"), py::arg("rho"))
        .def_property_readonly("n", &EquicorrFactor::size)
        .def_property_readonly("rho", &EquicorrFactor::rho)
        .def("entry", &EquicorrFactor::entry)
        .def("sample", [](const EquicorrFactor& f, const std::vector<double>& z) { return f.sample(z); },
             "L @ z for a 1-D sequence of standard normals");

    py::class_<Shock>(m, "Shock")
        .def(py::init<std::size_t, std::size_t, double>(), py::arg("start"), py::arg("end"), py::arg("magnitude"))
        .def_readwrite("start", &Shock::start)
        .def_readwrite("end", &Shock::end)
        .def_readwrite("magnitude", &Shock::magnitude);
    py::class_<ShockSchedule>(m, "ShockSchedule")
        .def(py::init<>())
        .def(py::init([](double base, std::vector<Shock> shocks) { return ShockSchedule{base, std::move(shocks)}; }),
             py::arg("base"), py::arg("shocks"))
        .def_readwrite("base", &ShockSchedule::base)
        .def_readwrite("shocks", &ShockSchedule::shocks);
    m.def("sigma0_at", &sigma0_at, py::arg("schedule"), py::arg("t"));

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("n_assets", &ScenarioConfig::n_assets)
        .def_readwrite("n_steps", &ScenarioConfig::n_steps)
        .def_readwrite("feedback", &ScenarioConfig::feedback)
        .def_readwrite("order", &ScenarioConfig::order)
        .def_readwrite("s_hat0", &ScenarioConfig::s_hat0)
        .def_readwrite("sigma_c", &ScenarioConfig::sigma_c)
        .def_readwrite("schedule", &ScenarioConfig::schedule)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("control_mode", &ScenarioConfig::control_mode)
        .def_readwrite("r_c", &ScenarioConfig::r_c)
        .def_readwrite("allow_unstable", &ScenarioConfig::allow_unstable)
        .def_readwrite("burn_in", &ScenarioConfig::burn_in);

    m.def("run_scenario", [](const ScenarioConfig& c) {
        ScenarioOutput out;
        {
            py::gil_scoped_release release;
            out = run_scenario(c);
        }
        py::dict d;
        d["panel"] = out.panel.values;
        d["rho"] = out.rho_path;
        d["s_hat"] = out.s_hat_path;
        d["sigma0"] = out.sigma0_path;
        d["market"] = out.market;
        return d;
    });

    m.def("scenario_statistics", [](const ScenarioConfig& c) {
        const ScenarioOutput out = run_scenario(c);
        const PanelStatistics stats = analyze_panel(out.panel, default_windows(c), out.rho_path);
        return py::module_::import("json").attr("loads")(to_json(stats).dump());
    }, "Window statistics (medians, correlation, bimodality) for a scenario run.");

    m.def("volvol_experiment", [](const std::vector<double>& ratios, std::size_t n_assets, std::size_t n_trials,
                                  std::uint64_t seed) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : volvol_experiment(ratios, n_assets, n_trials, seed)) out.emplace_back(p.ratio, p.mean_excess_kurtosis);
        return out;
    }, py::arg("ratios"), py::arg("n_assets") = 1500, py::arg("n_trials") = 200, py::arg("seed") = 1);

    m.def("cross_moments", [](const std::vector<double>& row) { return summary_dict(cross_moments(row)); });
    m.def("sign_statistic", [](const std::vector<double>& row) {
        const SignCount s = sign_statistic(row);
        return py::make_tuple(s.s, s.n_up, s.n_down, s.n_zero);
    });
    m.def("bimodality_coefficient", [](const std::vector<double>& x) { return bimodality_coefficient(x); });
    m.def("series_correlation", [](const std::vector<double>& x, const std::vector<double>& y) {
        return series_correlation(x, y);
    });
    m.def("fit_student_t", [](const std::vector<double>& x) {
        const StudentTFit f = fit_student_t(x);
        return py::make_tuple(f.applicable, f.dof, f.scale);
    });

    m.def("rolling_first_pc_share", [](const Matrix& values, std::size_t window, VolTransform mode, bool correlation) {
        const PcaSeries s = rolling_first_pc_share(ReturnsPanel::with_step_labels(values), {window, mode, correlation});
        return py::make_tuple(s.times, s.share1);
    }, py::arg("values"), py::arg("window") = 100, py::arg("mode") = VolTransform::Returns, py::arg("correlation") = false);
}
