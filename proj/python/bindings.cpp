#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conatsim/mc_oracle.hpp"
#include "conatsim/protocols.hpp"
#include "conatsim/serialize.hpp"

namespace py = pybind11;
using namespace conatsim;

namespace {

QuadExpr expr_from_terms(const std::vector<std::tuple<std::size_t, Quad, double>>& terms) {
    QuadExpr expr;
    for (const auto& [mode, quad, coeff] : terms) {
        expr.push_back({mode, quad, coeff});
    }
    return expr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian continuous-variable simulator for coherent communication "
              "protocols built on conat channels";

    py::register_exception<PhysicsError>(m, "PhysicsError");

    py::enum_<Axis>(m, "Axis")
        .value("POSITION", Axis::Position)
        .value("MOMENTUM", Axis::Momentum);
    py::enum_<Quad>(m, "Quad").value("X", Quad::X).value("P", Quad::P);
    py::enum_<ConatKind>(m, "ConatKind").value("PQ", ConatKind::PQ).value("MQ", ConatKind::MQ);
    py::enum_<Orientation>(m, "Orientation")
        .value("POSITION_CORRELATED", Orientation::PositionCorrelated)
        .value("MOMENTUM_CORRELATED", Orientation::MomentumCorrelated)
        .value("NONE", Orientation::None);
    py::enum_<FidelityBound>(m, "FidelityBound")
        .value("COHERENT_TELEPORT", FidelityBound::CoherentTeleport)
        .value("ALTERNATE_TELEPORT", FidelityBound::AlternateTeleport)
        .value("COMPOSED_TELEPORT", FidelityBound::ComposedTeleport);

    py::class_<ModeRef>(m, "ModeRef")
        .def(py::init<std::size_t, std::string>(), py::arg("index"), py::arg("label") = "")
        .def_readonly("index", &ModeRef::index)
        .def_readonly("label", &ModeRef::label)
        .def("__repr__", [](const ModeRef& ref) {
            return "ModeRef(index=" + std::to_string(ref.index) + ", label='" + ref.label +
                   "')";
        });

    py::class_<GaussianState>(m, "GaussianState")
        .def(py::init<Eigen::VectorXd, Eigen::MatrixXd, std::vector<std::string>>(),
             py::arg("mean"), py::arg("cov"),
             py::arg("labels") = std::vector<std::string>{})
        .def_property_readonly("n_modes", &GaussianState::n_modes)
        .def_property_readonly("mean", &GaussianState::mean)
        .def_property_readonly("cov", &GaussianState::cov)
        .def_property_readonly("labels", &GaussianState::labels)
        .def("__repr__", [](const GaussianState& state) {
            return "GaussianState(n_modes=" + std::to_string(state.n_modes()) + ")";
        });

    py::class_<SymplecticOp>(m, "SymplecticOp")
        .def_readonly("matrix", &SymplecticOp::matrix)
        .def_readonly("displacement", &SymplecticOp::displacement)
        .def_property_readonly("n_modes", &SymplecticOp::n_modes)
        .def_static("identity", &SymplecticOp::identity, py::arg("n_modes"));

    // State factories and core operations.
    m.def("new_vacuum", &new_vacuum, py::arg("n_modes"));
    m.def("new_coherent", &new_coherent, py::arg("x0"), py::arg("p0"));
    m.def("new_squeezed", &new_squeezed, py::arg("r"), py::arg("axis"));
    m.def("squeezed_to_variance", &squeezed_to_variance, py::arg("var_x"));
    m.def("new_tmsv", &new_tmsv, py::arg("r"));
    m.def("new_tmsv_epsilon", &new_tmsv_epsilon, py::arg("epsilon"));
    m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
    m.def("apply", &apply, py::arg("state"), py::arg("op"));
    m.def("embed", &embed, py::arg("op"), py::arg("target_modes"), py::arg("total_modes"));
    m.def("drop_modes", &drop_modes, py::arg("state"), py::arg("modes"));
    m.def("permute_modes", &permute_modes, py::arg("state"), py::arg("order"));
    m.def("compose", &compose, py::arg("second"), py::arg("first"));
    m.def("is_symplectic", &is_symplectic, py::arg("matrix"), py::arg("tol") = 1e-10);
    m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("state"));
    m.def(
        "quad_stats",
        [](const GaussianState& state,
           const std::vector<std::tuple<std::size_t, Quad, double>>& terms) {
            const MeanVar stats = quad_stats(state, expr_from_terms(terms));
            return py::make_tuple(stats.mean, stats.variance);
        },
        py::arg("state"), py::arg("terms"),
        "Mean and variance of a linear combination [(mode, quad, coeff), ...]");
    m.def(
        "homodyne",
        [](const GaussianState& state, std::size_t mode, Quad quad, std::uint64_t seed) {
            const HomodyneResult result = homodyne(state, mode, quad, seed);
            return py::make_tuple(result.outcome, result.post_state);
        },
        py::arg("state"), py::arg("mode"), py::arg("quad"), py::arg("seed"));

    // Gates.
    m.def("reflection", &reflection);
    m.def("fourier", &fourier);
    m.def("fourier_inv", &fourier_inv);
    m.def("controlled_x", &controlled_x);
    m.def("controlled_x_inv", &controlled_x_inv);
    m.def("controlled_p", &controlled_p);
    m.def("beamsplitter_5050", &beamsplitter_5050);
    m.def("squeeze", &squeeze, py::arg("r"), py::arg("axis"));
    m.def("displacement", &displacement, py::arg("dx"), py::arg("dp"));

    // Conat channels.
    py::class_<ConatChannelSpec>(m, "ConatChannelSpec")
        .def_readonly("kind", &ConatChannelSpec::kind)
        .def_readonly("ancilla_squeezing", &ConatChannelSpec::ancilla_squeezing)
        .def_readonly("nominal_epsilon", &ConatChannelSpec::nominal_epsilon)
        .def_static("pq", &ConatChannelSpec::pq, py::arg("r_c"))
        .def_static("mq", &ConatChannelSpec::mq, py::arg("r_c"));

    py::class_<ConatChannel>(m, "ConatChannel")
        .def_readonly("kind", &ConatChannel::kind)
        .def_readonly("nominal_epsilon", &ConatChannel::nominal_epsilon)
        .def_static("canonical", &ConatChannel::canonical, py::arg("spec"))
        .def_static("with_ancilla", &ConatChannel::with_ancilla, py::arg("kind"),
                    py::arg("ancilla"))
        .def_static("saturating", &ConatChannel::saturating, py::arg("kind"),
                    py::arg("epsilon"));

    py::class_<ConatReport>(m, "ConatReport")
        .def_readonly("kind", &ConatReport::kind)
        .def_readonly("copies_exactly", &ConatReport::copies_exactly)
        .def_readonly("var_copy_noise", &ConatReport::var_copy_noise)
        .def_readonly("var_conjugate_combo", &ConatReport::var_conjugate_combo)
        .def_readonly("mean_copy_noise", &ConatReport::mean_copy_noise)
        .def_readonly("mean_conjugate_combo", &ConatReport::mean_conjugate_combo)
        .def_readonly("achieved_epsilon", &ConatReport::achieved_epsilon)
        .def_readonly("conforming", &ConatReport::conforming)
        .def("__repr__", [](const ConatReport& report) {
            return "ConatReport(kind=" + to_string(report.kind) +
                   ", achieved_epsilon=" + format_double(report.achieved_epsilon) +
                   ", conforming=" + (report.conforming ? "True" : "False") + ")";
        });

    py::class_<ConatApplication>(m, "ConatApplication")
        .def_readonly("state", &ConatApplication::state)
        .def_readonly("sender", &ConatApplication::sender)
        .def_readonly("receiver", &ConatApplication::receiver)
        .def_readonly("end_to_end_map", &ConatApplication::end_to_end_map)
        .def_readonly("input_with_ancilla", &ConatApplication::input_with_ancilla);

    m.def("apply_pq_conat", &apply_pq_conat, py::arg("state"), py::arg("mode"),
          py::arg("spec"));
    m.def("apply_mq_conat", &apply_mq_conat, py::arg("state"), py::arg("mode"),
          py::arg("spec"));
    m.def("apply_pq_conat_with_ancilla", &apply_pq_conat_with_ancilla, py::arg("state"),
          py::arg("mode"), py::arg("ancilla"));
    m.def("apply_mq_conat_with_ancilla", &apply_mq_conat_with_ancilla, py::arg("state"),
          py::arg("mode"), py::arg("ancilla"));
    m.def("verify_conat",
          py::overload_cast<const Eigen::MatrixXd&, const GaussianState&, ConatKind,
                            std::size_t, std::size_t>(&verify_conat),
          py::arg("end_to_end_map"), py::arg("input_moments"), py::arg("kind"),
          py::arg("sender_mode"), py::arg("receiver_mode"));

    // Analysis.
    py::class_<CorrelationReport>(m, "CorrelationReport")
        .def_readonly("mode_a", &CorrelationReport::mode_a)
        .def_readonly("mode_b", &CorrelationReport::mode_b)
        .def_readonly("var_x_minus", &CorrelationReport::var_x_minus)
        .def_readonly("var_x_plus", &CorrelationReport::var_x_plus)
        .def_readonly("var_p_minus", &CorrelationReport::var_p_minus)
        .def_readonly("var_p_plus", &CorrelationReport::var_p_plus)
        .def_readonly("orientation", &CorrelationReport::orientation)
        .def_readonly("epsilon", &CorrelationReport::epsilon)
        .def_readonly("entangled", &CorrelationReport::entangled);

    m.def("correlation_report",
          py::overload_cast<const GaussianState&, std::size_t, std::size_t>(
              &correlation_report),
          py::arg("state"), py::arg("a"), py::arg("b"));
    m.def("fidelity_from_error_vars", &fidelity_from_error_vars, py::arg("sx2"),
          py::arg("sp2"));
    m.def("fidelity_lower_bound", &fidelity_lower_bound, py::arg("bound"), py::arg("eps"));
    m.def("pure_state_overlap", &pure_state_overlap, py::arg("pure_reference"),
          py::arg("other"));

    py::class_<BeamsplitterConatReport>(m, "BeamsplitterConatReport")
        .def_readonly("raw_relative_position_sm",
                      &BeamsplitterConatReport::raw_relative_position_sm)
        .def_readonly("raw_total_momentum_sm",
                      &BeamsplitterConatReport::raw_total_momentum_sm)
        .def_readonly("diff_port_x_sm", &BeamsplitterConatReport::diff_port_x_sm)
        .def_readonly("sum_port_p_sm", &BeamsplitterConatReport::sum_port_p_sm)
        .def_readonly("position_pass", &BeamsplitterConatReport::position_pass)
        .def_readonly("momentum_pass", &BeamsplitterConatReport::momentum_pass)
        .def_readonly("pass_", &BeamsplitterConatReport::pass);
    m.def("beamsplitter_conat_test", &beamsplitter_conat_test, py::arg("state"),
          py::arg("sender"), py::arg("receiver"), py::arg("input_p_second_moment"),
          py::arg("epsilon"));

    // Protocols.
    py::class_<ResourceSpec>(m, "ResourceSpec")
        .def_readonly("r", &ResourceSpec::r)
        .def_readonly("implied_epsilon", &ResourceSpec::implied_epsilon)
        .def_static("tmsv", &ResourceSpec::tmsv, py::arg("r"))
        .def_static("epsilon", &ResourceSpec::epsilon, py::arg("eps"));

    py::class_<ProtocolOutcome>(m, "ProtocolOutcome")
        .def_readonly("final_state", &ProtocolOutcome::final_state)
        .def_readonly("role_map", &ProtocolOutcome::role_map)
        .def_readonly("noise_ledger", &ProtocolOutcome::noise_ledger)
        .def_readonly("fidelity", &ProtocolOutcome::fidelity)
        .def_readonly("conat_reports", &ProtocolOutcome::conat_reports)
        .def_readonly("correlation_reports", &ProtocolOutcome::correlation_reports)
        .def_readonly("initial_state", &ProtocolOutcome::initial_state)
        .def_readonly("end_to_end_map", &ProtocolOutcome::end_to_end_map);

    m.def("coherent_teleport",
          py::overload_cast<const GaussianState&, const ResourceSpec&,
                            const ConatChannelSpec&, const ConatChannelSpec&>(
              &coherent_teleport),
          py::arg("input"), py::arg("resource"), py::arg("mq"), py::arg("pq"));
    m.def("coherent_teleport",
          py::overload_cast<const GaussianState&, const ResourceSpec&, const ConatChannel&,
                            const ConatChannel&>(&coherent_teleport),
          py::arg("input"), py::arg("resource"), py::arg("mq"), py::arg("pq"));
    m.def("alternate_coherent_teleport",
          py::overload_cast<const GaussianState&, const ConatChannelSpec&,
                            const ConatChannelSpec&>(&alternate_coherent_teleport),
          py::arg("input"), py::arg("pq"), py::arg("mq"));
    m.def("alternate_coherent_teleport",
          py::overload_cast<const GaussianState&, const ConatChannel&, const ConatChannel&>(
              &alternate_coherent_teleport),
          py::arg("input"), py::arg("pq"), py::arg("mq"));
    m.def("coherent_superdense", &coherent_superdense, py::arg("inputs"),
          py::arg("resource"));
    m.def("compose_teleport_via_superdense", &compose_teleport_via_superdense,
          py::arg("input"), py::arg("resource1"), py::arg("resource2"));
    m.def("compose_superdense_via_teleport",
          py::overload_cast<const GaussianState&, const ResourceSpec&, double, double>(
              &compose_superdense_via_teleport),
          py::arg("inputs"), py::arg("resource"), py::arg("pq_epsilon"),
          py::arg("mq_epsilon"));
    m.def("standard_bk_teleport", &standard_bk_teleport, py::arg("input"),
          py::arg("resource"), py::arg("seed"));
    m.def("average_bk_fidelity", &average_bk_fidelity, py::arg("input"), py::arg("resource"),
          py::arg("trials"), py::arg("seed"));

    // Degradation study.
    py::class_<DegradationLevel>(m, "DegradationLevel")
        .def_readonly("level", &DegradationLevel::level)
        .def_readonly("eps1", &DegradationLevel::eps1)
        .def_readonly("eps2", &DegradationLevel::eps2)
        .def_readonly("eps3", &DegradationLevel::eps3)
        .def_readonly("sum_mq", &DegradationLevel::sum_mq)
        .def_readonly("sum_pq", &DegradationLevel::sum_pq)
        .def_readonly("fidelity_bound", &DegradationLevel::fidelity_bound)
        .def_readonly("conforming", &DegradationLevel::conforming);
    py::class_<DegradationTrace>(m, "DegradationTrace")
        .def_readonly("levels", &DegradationTrace::levels)
        .def_readonly("max_depth", &DegradationTrace::max_depth);
    py::class_<DegradationSummary>(m, "DegradationSummary")
        .def_readonly("max_depth", &DegradationSummary::max_depth)
        .def_readonly("first_entanglement_violation",
                      &DegradationSummary::first_entanglement_violation)
        .def_readonly("first_fidelity_violation",
                      &DegradationSummary::first_fidelity_violation)
        .def_readonly("slope", &DegradationSummary::slope);
    m.def("iterate_composition", &iterate_composition, py::arg("eps1"), py::arg("eps2"),
          py::arg("eps3"), py::arg("depth"));
    m.def("degradation_report", &degradation_report, py::arg("trace"));

    // Monte-Carlo oracle.
    py::class_<SampleBatch>(m, "SampleBatch")
        .def_readonly("points", &SampleBatch::points)
        .def_readonly("seed", &SampleBatch::seed)
        .def_readonly("rng_name", &SampleBatch::rng_name)
        .def_property_readonly("n_samples", &SampleBatch::n_samples);
    py::class_<MomentVerdict>(m, "MomentVerdict")
        .def_readonly("pass_", &MomentVerdict::pass)
        .def_readonly("max_abs_z", &MomentVerdict::max_abs_z)
        .def_readonly("worst_entry", &MomentVerdict::worst_entry);
    m.def("sample_state", &sample_state, py::arg("state"), py::arg("n"), py::arg("seed"));
    m.def("push", py::overload_cast<const SampleBatch&, const SymplecticOp&>(&push),
          py::arg("batch"), py::arg("op"));
    m.def("push", py::overload_cast<const SampleBatch&, const Eigen::MatrixXd&>(&push),
          py::arg("batch"), py::arg("row_map"));
    m.def("compare_moments", &compare_moments, py::arg("batch"), py::arg("state"),
          py::arg("tolerance_sigmas"));

    // Serialization.
    m.def("to_json", [](const GaussianState& v) { return to_json(v).dump(2); });
    m.def("to_json", [](const ConatReport& v) { return to_json(v).dump(2); });
    m.def("to_json", [](const CorrelationReport& v) { return to_json(v).dump(2); });
    m.def("to_json", [](const ProtocolOutcome& v) { return to_json(v).dump(2); });
    m.def("to_json", [](const DegradationTrace& v) { return to_json(v).dump(2); });
    m.def("degradation_csv", &degradation_csv, py::arg("trace"));

    m.attr("VACUUM_VARIANCE") = kVacuumVariance;
    m.attr("__version__") = "0.1.0";
}
