#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idflow/emit.hpp"
#include "idflow/errors.hpp"
#include "idflow/fisher.hpp"
#include "idflow/numerics.hpp"
#include "idflow/qubit.hpp"
#include "idflow/runner.hpp"

namespace py = pybind11;
using namespace idflow;

namespace {

// Pipeline helpers working on plain matrices so numpy users never touch
// the wrapper types.

RealMatrix qfm_from_arrays(const ComplexMatrix& rho,
                           const std::vector<ComplexMatrix>& derivatives) {
    const DensityMatrix state = validate_density(rho);
    const SLDSet slds =
        sld_set(state, derivatives, numerics().sld_kernel_threshold);
    return qfm(state, slds).g;
}

double idqs_from_metric(const RealMatrix& g) {
    return idqs(FisherMetric{g, ParameterPoint()});
}

double ridf_pipeline(const ComplexMatrix& rho,
                     const std::vector<ComplexMatrix>& derivatives,
                     const ComplexMatrix& drho_dt,
                     const std::vector<ComplexMatrix>& ddrho_dt_dparam) {
    const DensityMatrix state = validate_density(rho);
    const SLDSet slds =
        sld_set(state, derivatives, numerics().sld_kernel_threshold);
    const FisherMetric metric = qfm(state, slds);
    return ridf(state, drho_dt, slds, ddrho_dt_dparam, metric);
}

std::vector<FlowRecord> dissipative_flow_records(
    double lambda, double W, const Eigen::Vector3d& n0,
    const std::vector<double>& t_grid) {
    const DissipativeModel model(lambda, W);
    std::vector<FlowRecord> records;
    records.reserve(t_grid.size());
    for (double t : t_grid) {
        FlowRecord rec;
        rec.t = t;
        try {
            rec.gamma.push_back(model.gamma(t));
            rec.idqs = model.idqs(n0, t);
            rec.ridf = model.ridf(n0, t);
            rec.idf = rec.ridf * rec.idqs;
            rec.sub_idf.push_back(rec.idf);
            rec.defined = true;
        } catch (const Error& e) {
            rec.defined = false;
            rec.reason = e.what();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<FlowRecord> flow_series_bloch(const std::string& config_text,
                                          const Eigen::Vector3d& n0,
                                          const std::vector<double>& t_grid) {
    const ExperimentConfig config = parse_config(config_text);
    ParameterPoint x0(3);
    x0 << n0[0], n0[1], n0[2];
    return flow_series(config.master_equation(), bloch_family(), x0, t_grid);
}

std::string run_from_python(const std::string& subcommand,
                            const std::string& config_text,
                            const std::string& out_dir,
                            const std::vector<std::string>& formats,
                            int threads) {
    const ExperimentConfig config = parse_config(config_text);
    RunOptions opts;
    opts.out_dir = out_dir;
    opts.formats = formats;
    opts.threads = threads;
    return run_to_json(run_subcommand(subcommand, config, opts));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum Fisher metric and information-flow kernels";

    py::register_exception<Error>(m, "IdflowError");

    m.def("validate_density",
          [](const ComplexMatrix& rho) { return validate_density(rho).matrix(); },
          py::arg("rho"),
          "Validate Hermiticity, unit trace, and positivity; returns the "
          "Hermitized matrix.");

    m.def("hermitian_eig",
          [](const ComplexMatrix& matrix) {
              const Spectrum spec = hermitian_eig(matrix);
              return py::make_tuple(spec.eigenvalues, spec.eigenvectors);
          },
          py::arg("matrix"),
          "Eigenvalues (ascending) and phase-fixed eigenvector columns.");

    m.def("commutator", &commutator, py::arg("a"), py::arg("b"));
    m.def("anticommutator", &anticommutator, py::arg("a"), py::arg("b"));

    m.def("sld",
          [](const ComplexMatrix& rho, const ComplexMatrix& drho,
             double kernel_threshold) {
              return sld(validate_density(rho), drho, kernel_threshold);
          },
          py::arg("rho"), py::arg("drho"), py::arg("kernel_threshold") = 1e-12,
          "Symmetric logarithmic derivative solving drho = {rho, L}/2.");

    m.def("qfm", &qfm_from_arrays, py::arg("rho"), py::arg("derivatives"),
          "Quantum Fisher metric from a state and its parameter derivatives.");

    m.def("idqs", &idqs_from_metric, py::arg("g"),
          "sqrt(det g): the intrinsic density of quantum states.");

    m.def("ridf_pipeline", &ridf_pipeline, py::arg("rho"),
          py::arg("derivatives"), py::arg("drho_dt"),
          py::arg("ddrho_dt_dparam"),
          "Relative intrinsic density flow 1/2 tr[g^-1 dg/dt].");

    m.def("bloch_state",
          [](const Eigen::Vector3d& n) { return bloch_state(n).matrix(); },
          py::arg("n"));
    m.def("bloch_idqs", &bloch_idqs, py::arg("n"));

    py::class_<FlowRecord>(m, "FlowRecord")
        .def_readonly("t", &FlowRecord::t)
        .def_readonly("idqs", &FlowRecord::idqs)
        .def_readonly("idf", &FlowRecord::idf)
        .def_readonly("ridf", &FlowRecord::ridf)
        .def_readonly("sub_idf", &FlowRecord::sub_idf)
        .def_readonly("gamma", &FlowRecord::gamma)
        .def_readonly("defined", &FlowRecord::defined)
        .def_readonly("reason", &FlowRecord::reason)
        .def("__repr__", [](const FlowRecord& rec) {
            std::ostringstream out;
            out << "FlowRecord(t=" << rec.t << ", idqs=" << rec.idqs
                << ", idf=" << rec.idf << ", defined=" << (rec.defined ? "True" : "False")
                << ")";
            return out.str();
        });

    py::class_<DissipativeModel>(m, "DissipativeModel")
        .def(py::init<double, double>(), py::arg("lambda_"), py::arg("W"))
        .def_property_readonly("weak", &DissipativeModel::weak)
        .def_property_readonly("d_param", &DissipativeModel::d_param)
        .def("h", &DissipativeModel::h, py::arg("t"))
        .def("h_dot", &DissipativeModel::h_dot, py::arg("t"))
        .def("gamma", &DissipativeModel::gamma, py::arg("t"))
        .def("h_zeros", &DissipativeModel::h_zeros, py::arg("t_max"))
        .def("motion", &DissipativeModel::motion, py::arg("n0"), py::arg("t"))
        .def("idqs", &DissipativeModel::idqs, py::arg("n0"), py::arg("t"))
        .def("idf", &DissipativeModel::idf, py::arg("n0"), py::arg("t"))
        .def("ridf", &DissipativeModel::ridf, py::arg("n0"), py::arg("t"))
        .def("state_space_split", &DissipativeModel::state_space_split,
             py::arg("n0"), py::arg("t"));

    m.def("dissipative_flow_records", &dissipative_flow_records,
          py::arg("lambda_"), py::arg("W"), py::arg("n0"), py::arg("t_grid"),
          "Closed-form flow records for the dissipative qubit model.");

    m.def("flow_series_bloch", &flow_series_bloch, py::arg("config"),
          py::arg("n0"), py::arg("t_grid"),
          "Numeric co-integration flow records for a configured model.");

    m.def("parse_config",
          [](const std::string& text) {
              return config_to_json(parse_config(text));
          },
          py::arg("text"), "Validate a config; returns the canonical echo.");

    m.def("run", &run_from_python, py::arg("subcommand"), py::arg("config"),
          py::arg("out_dir"), py::arg("formats") = std::vector<std::string>{},
          py::arg("threads") = 1,
          "Execute qfm | evolve | field | witness; returns the run JSON.");
}
