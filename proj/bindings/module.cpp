#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsde/basis.hpp"
#include "fsde/estimators.hpp"
#include "fsde/experiments.hpp"
#include "fsde/fbm.hpp"
#include "fsde/integrals.hpp"
#include "fsde/sde.hpp"

namespace py = pybind11;
using namespace fsde;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Drift estimation toolkit for SDEs driven by fractional Brownian motion (H > 1/2)";

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, std::size_t>(), py::arg("T"), py::arg("n"))
        .def_readonly("T", &TimeGrid::T)
        .def_readonly("n", &TimeGrid::n)
        .def("dt", &TimeGrid::dt)
        .def("time", &TimeGrid::time);

    py::class_<FbmPath>(m, "FbmPath")
        .def_readonly("grid", &FbmPath::grid)
        .def_readonly("H", &FbmPath::H)
        .def_readonly("values", &FbmPath::values)
        .def_readonly("seed", &FbmPath::seed);

    m.def("fbm_covariance", &fbm_covariance, py::arg("s"), py::arg("t"), py::arg("H"));
    m.def("sample_fbm", &sample_fbm, py::arg("grid"), py::arg("H"), py::arg("seed"),
          py::arg("count"));

    py::class_<DriftModel>(m, "DriftModel")
        .def_readonly("name", &DriftModel::name)
        .def_readonly("m_bound", &DriftModel::m_bound)
        .def_readonly("M_bound", &DriftModel::M_bound)
        .def_readonly("b_second_sup", &DriftModel::b_second_sup)
        .def("b", [](const DriftModel& d, double x) { return d.b(x); })
        .def("b_prime", [](const DriftModel& d, double x) { return d.b_prime(x); })
        .def("b_second", [](const DriftModel& d, double x) { return d.b_second(x); });

    m.def("make_drift", &make_drift, py::arg("name"), py::arg("params"));

    py::class_<SdeConfig>(m, "SdeConfig")
        .def(py::init([](const DriftModel& drift, double x0, double sigma, const TimeGrid& grid,
                         double H) { return SdeConfig{drift, x0, sigma, grid, H}; }),
             py::arg("drift"), py::arg("x0"), py::arg("sigma"), py::arg("grid"), py::arg("H"));

    py::class_<SdePath>(m, "SdePath")
        .def_readonly("grid", &SdePath::grid)
        .def_readonly("values", &SdePath::values);

    py::class_<CoupledPaths>(m, "CoupledPaths")
        .def_readonly("X_low", &CoupledPaths::X_low)
        .def_readonly("X_high", &CoupledPaths::X_high)
        .def_readonly("epsilon", &CoupledPaths::epsilon);

    m.def("euler_solve", &euler_solve, py::arg("config"), py::arg("noise"));
    m.def("coupled_solve", &coupled_solve, py::arg("config"), py::arg("epsilon"), py::arg("noise"));
    m.def("flow_derivative", &flow_derivative, py::arg("config"), py::arg("path"));
    m.def("ou_variance", &ou_variance, py::arg("mu"), py::arg("t"), py::arg("H"), py::arg("sigma"));

    py::class_<BasisSpec>(m, "BasisSpec")
        .def_static("trig", &BasisSpec::trig, py::arg("l"), py::arg("r"), py::arg("m"))
        .def_static("hermite", &BasisSpec::hermite, py::arg("m"))
        .def_static("parse", &BasisSpec::parse, py::arg("text"))
        .def_readonly("m", &BasisSpec::m)
        .def("__repr__", &BasisSpec::to_string);

    m.def("eval_basis", &eval_basis, py::arg("spec"), py::arg("x"));
    m.def("eval_basis_deriv", &eval_basis_deriv, py::arg("spec"), py::arg("x"));
    m.def(
        "stability_quantities",
        [](const BasisSpec& spec) {
            const auto q = stability_quantities(spec);
            return py::make_tuple(q.L, q.R);
        },
        py::arg("spec"));

    py::class_<KernelCache>(m, "KernelCache")
        .def(py::init<const TimeGrid&, double>(), py::arg("grid"), py::arg("H"))
        .def("cell", &KernelCache::cell, py::arg("k"), py::arg("j"))
        .def("row_sum_exact", &KernelCache::row_sum_exact, py::arg("k"));

    m.def("young_integral", &young_integral, py::arg("integrand"), py::arg("w"));
    m.def(
        "skorokhod_surrogate",
        [](const CoupledPaths& coupled, const std::function<double(double)>& phi,
           const std::function<double(double)>& phi_prime, double sigma,
           const KernelCache& cache) {
            return skorokhod_surrogate(coupled, phi, phi_prime, sigma, cache);
        },
        py::arg("coupled"), py::arg("phi"), py::arg("phi_prime"), py::arg("sigma"),
        py::arg("cache"));
    m.def("skorokhod_surrogate_shift", &skorokhod_surrogate_shift, py::arg("path"), py::arg("phi"),
          py::arg("phi_prime"), py::arg("sigma"), py::arg("cache"), py::arg("alpha"),
          py::arg("epsilon"));

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("coeffs", &FitResult::coeffs)
        .def_readonly("truncated", &FitResult::truncated)
        .def_readonly("opnorm_inv", &FitResult::opnorm_inv)
        .def_readonly("L_m", &FitResult::L_m)
        .def("evaluate", &FitResult::evaluate, py::arg("x"));

    m.def("fit_drift", &fit_drift, py::arg("coupled_set"), py::arg("basis"), py::arg("sigma"),
          py::arg("H"), py::arg("kappa"));
    m.def("fit_drift_derivative", &fit_drift_derivative, py::arg("coupled_set"), py::arg("basis"));
    m.def("truncation_constant", &truncation_constant, py::arg("kappa"), py::arg("T"));
    m.def("epsilon_rule", &epsilon_rule, py::arg("N"), py::arg("T"));
    m.def("m_opt", &m_opt, py::arg("kind"), py::arg("N"), py::arg("T"), py::arg("H"),
          py::arg("smoothness"), py::arg("kappa"));

    py::enum_<BasisKind>(m, "BasisKind")
        .value("trigonometric", BasisKind::trigonometric)
        .value("hermite", BasisKind::hermite);

    py::enum_<EstimationTarget>(m, "EstimationTarget")
        .value("drift", EstimationTarget::drift)
        .value("drift_derivative", EstimationTarget::drift_derivative);

    py::class_<TrialConfig>(m, "TrialConfig")
        .def(py::init<>())
        .def_readwrite("drift_name", &TrialConfig::drift_name)
        .def_readwrite("drift_params", &TrialConfig::drift_params)
        .def_readwrite("x0", &TrialConfig::x0)
        .def_readwrite("sigma", &TrialConfig::sigma)
        .def_readwrite("H", &TrialConfig::H)
        .def_readwrite("T", &TrialConfig::T)
        .def_readwrite("n", &TrialConfig::n)
        .def_readwrite("N_train", &TrialConfig::N_train)
        .def_readwrite("N_eval", &TrialConfig::N_eval)
        .def_readwrite("basis", &TrialConfig::basis)
        .def_readwrite("kappa", &TrialConfig::kappa)
        .def_readwrite("target", &TrialConfig::target)
        .def_readwrite("master_seed", &TrialConfig::master_seed);

    py::class_<RiskReport>(m, "RiskReport")
        .def_readonly("empirical_risk_train", &RiskReport::empirical_risk_train)
        .def_readonly("weighted_risk_holdout", &RiskReport::weighted_risk_holdout)
        .def_readonly("truncated", &RiskReport::truncated)
        .def_readonly("m_used", &RiskReport::m_used)
        .def_readonly("epsilon_used", &RiskReport::epsilon_used);

    m.def("run_trial", &run_trial, py::arg("config"), py::arg("replication_seed"));
    m.def("rate_sweep", &rate_sweep, py::arg("config"), py::arg("N_list"), py::arg("replications"),
          py::arg("jobs") = 1);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("N", &SweepRow::N)
        .def_readonly("mean_risk", &SweepRow::mean_risk)
        .def_readonly("se", &SweepRow::se)
        .def_readonly("truncation_rate", &SweepRow::truncation_rate)
        .def_readonly("m", &SweepRow::m)
        .def_readonly("epsilon", &SweepRow::epsilon);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("slope", &SweepResult::slope);
}
