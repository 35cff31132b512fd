#include "conatsim/protocols.hpp"

#include <cmath>
#include <sstream>

#include "conatsim/rng.hpp"

namespace conatsim {

namespace {

/// Numerical stand-in for an ideal (infinitely squeezed) resource or channel
/// when a study asks for epsilon = 0; small enough to vanish against every
/// stated tolerance while keeping all states representable.
constexpr double kIdealEpsilonFloor = 1e-30;

void require_modes(const GaussianState& state, std::size_t n, const char* who) {
    if (state.n_modes() != n) {
        std::ostringstream msg;
        msg << who << ": expected a " << n << "-mode input state";
        throw std::invalid_argument(msg.str());
    }
}

std::size_t index_after_drop(std::size_t idx, const std::vector<std::size_t>& dropped) {
    std::size_t shift = 0;
    for (std::size_t d : dropped) {
        if (d < idx) {
            ++shift;
        }
    }
    return idx - shift;
}

std::vector<std::size_t> noise_modes(std::initializer_list<const ConatApplyResult*> results) {
    std::vector<std::size_t> modes;
    for (const auto* result : results) {
        if (result->noise_mode) {
            modes.push_back(*result->noise_mode);
        }
    }
    return modes;
}

void set_role(ProtocolOutcome& outcome, const std::string& role, std::size_t index) {
    outcome.role_map[role] = ModeRef{index, outcome.final_state.labels()[index]};
}

void fill_table_roles(ProtocolOutcome& outcome) {
    for (std::size_t k = 0; k < outcome.final_state.n_modes(); ++k) {
        std::ostringstream name;
        name << "mode" << (k + 1);
        set_role(outcome, name.str(), k);
    }
}

/// Teleportation error variances of `teleported` against input symbol 0,
/// evaluated on the recorded rows.
std::pair<double, double> teleport_error_vars(const CircuitRecorder& recorder,
                                              std::size_t teleported) {
    const Eigen::RowVectorXd ex = recorder.row(teleported, Quad::X) -
                                  recorder.symbol_row(0, Quad::X);
    const Eigen::RowVectorXd ep = recorder.row(teleported, Quad::P) -
                                  recorder.symbol_row(0, Quad::P);
    return {recorder.var_of(ex), recorder.var_of(ep)};
}

ProtocolOutcome make_outcome(const CircuitRecorder& recorder,
                             const Eigen::MatrixXd& start_rows) {
    return ProtocolOutcome{recorder.state(), {}, {}, std::nullopt, {}, {},
                           recorder.initial_state(), recorder.row_map(), {}, start_rows};
}

GaussianState relabel(GaussianState state, std::vector<std::string> labels) {
    state.set_labels(std::move(labels));
    return state;
}

}  // namespace

ResourceSpec ResourceSpec::tmsv(double r) {
    if (r < 0.0) {
        throw std::invalid_argument("ResourceSpec: squeezing must be >= 0");
    }
    return {r, std::exp(-2.0 * r)};
}

ResourceSpec ResourceSpec::epsilon(double eps) {
    if (eps < 0.0) {
        throw std::invalid_argument("ResourceSpec: epsilon must be >= 0");
    }
    if (eps == 0.0) {
        eps = kIdealEpsilonFloor;
    }
    return {-0.5 * std::log(eps), eps};
}

ProtocolOutcome coherent_teleport(const GaussianState& input, const ResourceSpec& resource,
                                  const ConatChannel& mq, const ConatChannel& pq) {
    require_modes(input, 1, "coherent_teleport");
    if (mq.kind != ConatKind::MQ || pq.kind != ConatKind::PQ) {
        throw std::invalid_argument("coherent_teleport: channel kinds must be (MQ, PQ)");
    }

    CircuitRecorder recorder(relabel(input, {"A1"}));
    const auto [mode_a, mode_b] = append_epr_pair(recorder, resource.implied_epsilon, "A", "B");
    const Eigen::MatrixXd start_rows = recorder.row_map();

    // Alice: reflection on her half of the resource, then the input controls
    // a position displacement on it (replaces the beamsplitter of the
    // measurement-based protocol).
    recorder.apply_on(reflection(), {mode_a});
    recorder.apply_on(controlled_x(), {0, mode_a});

    const ConatApplyResult mq_applied = apply_conat(recorder, 0, mq);
    const ConatApplyResult pq_applied = apply_conat(recorder, mode_a, pq);

    // Bob folds the received modes into his half: position correction first,
    // then momentum correction.
    recorder.apply_on(controlled_x(), {pq_applied.receiver_mode, mode_b});
    recorder.apply_on(controlled_p(), {mq_applied.receiver_mode, mode_b});

    const std::vector<std::size_t> dropped = noise_modes({&mq_applied, &pq_applied});
    if (!dropped.empty()) {
        recorder.drop(dropped);
    }
    const std::size_t recv_mq = index_after_drop(mq_applied.receiver_mode, dropped);
    const std::size_t recv_pq = index_after_drop(pq_applied.receiver_mode, dropped);
    recorder.permute({0, mode_a, recv_mq, recv_pq, mode_b});

    ProtocolOutcome outcome = make_outcome(recorder, start_rows);
    outcome.channel_rows = {mq_applied.rows, pq_applied.rows};
    fill_table_roles(outcome);
    set_role(outcome, "teleported", 4);

    const auto [sx2, sp2] = teleport_error_vars(recorder, 4);
    outcome.fidelity = fidelity_from_error_vars(sx2, sp2);
    outcome.noise_ledger = {{"eps1", resource.implied_epsilon},
                            {"eps2", mq.nominal_epsilon},
                            {"eps3", pq.nominal_epsilon},
                            {"sigma_x2", sx2},
                            {"sigma_p2", sp2}};
    outcome.conat_reports = {report_from_rows(recorder, mq_applied.rows),
                             report_from_rows(recorder, pq_applied.rows)};
    outcome.correlation_reports = {correlation_report(recorder, 0, 2),
                                   correlation_report(recorder, 1, 3)};
    return outcome;
}

ProtocolOutcome coherent_teleport(const GaussianState& input, const ResourceSpec& resource,
                                  const ConatChannelSpec& mq, const ConatChannelSpec& pq) {
    if (mq.kind != ConatKind::MQ || pq.kind != ConatKind::PQ) {
        throw std::invalid_argument("coherent_teleport: channel kinds must be (MQ, PQ)");
    }
    return coherent_teleport(input, resource, ConatChannel::canonical(mq),
                             ConatChannel::canonical(pq));
}

ProtocolOutcome alternate_coherent_teleport(const GaussianState& input, const ConatChannel& pq,
                                            const ConatChannel& mq) {
    require_modes(input, 1, "alternate_coherent_teleport");
    if (pq.kind != ConatKind::PQ || mq.kind != ConatKind::MQ) {
        throw std::invalid_argument(
            "alternate_coherent_teleport: channel kinds must be (PQ, MQ)");
    }

    CircuitRecorder recorder(relabel(input, {"A"}));
    const Eigen::MatrixXd start_rows = recorder.row_map();
    const ConatApplyResult pq_applied = apply_conat(recorder, 0, pq);
    const ConatApplyResult mq_applied = apply_conat(recorder, 0, mq);
    recorder.apply_on(controlled_x_inv(),
                      {pq_applied.receiver_mode, mq_applied.receiver_mode});

    const std::vector<std::size_t> dropped = noise_modes({&pq_applied, &mq_applied});
    if (!dropped.empty()) {
        recorder.drop(dropped);
    }
    const std::size_t recv_pq = index_after_drop(pq_applied.receiver_mode, dropped);
    const std::size_t recv_mq = index_after_drop(mq_applied.receiver_mode, dropped);
    recorder.permute({0, recv_pq, recv_mq});

    ProtocolOutcome outcome = make_outcome(recorder, start_rows);
    outcome.channel_rows = {pq_applied.rows, mq_applied.rows};
    fill_table_roles(outcome);
    set_role(outcome, "teleported", 1);

    const auto [sx2, sp2] = teleport_error_vars(recorder, 1);
    outcome.fidelity = fidelity_from_error_vars(sx2, sp2);
    outcome.noise_ledger = {{"eps1", pq.nominal_epsilon},
                            {"eps2", mq.nominal_epsilon},
                            {"sigma_x2", sx2},
                            {"sigma_p2", sp2}};
    outcome.conat_reports = {report_from_rows(recorder, pq_applied.rows),
                             report_from_rows(recorder, mq_applied.rows)};
    outcome.correlation_reports = {correlation_report(recorder, 0, 2)};
    return outcome;
}

ProtocolOutcome alternate_coherent_teleport(const GaussianState& input,
                                            const ConatChannelSpec& pq,
                                            const ConatChannelSpec& mq) {
    if (pq.kind != ConatKind::PQ || mq.kind != ConatKind::MQ) {
        throw std::invalid_argument(
            "alternate_coherent_teleport: channel kinds must be (PQ, MQ)");
    }
    return alternate_coherent_teleport(input, ConatChannel::canonical(pq),
                                       ConatChannel::canonical(mq));
}

ProtocolOutcome coherent_superdense(const GaussianState& inputs, const ResourceSpec& resource) {
    require_modes(inputs, 2, "coherent_superdense");

    CircuitRecorder recorder(relabel(inputs, {"A1", "A2"}));
    const auto [mode_a, mode_b] =
        append_epr_pair(recorder, resource.implied_epsilon, "A", "B");
    const Eigen::MatrixXd start_rows = recorder.row_map();

    // Alice encodes both of her modes onto her half of the resource.
    recorder.apply_on(controlled_x(), {1, mode_a});
    recorder.apply_on(controlled_p(), {0, mode_a});
    // Mode three travels to Bob over the qunat channel; Bob inverts the
    // preparation stage of coherent teleportation.
    recorder.apply_on(controlled_x_inv(), {mode_a, mode_b});
    recorder.apply_on(reflection(), {mode_b});

    ProtocolOutcome outcome = make_outcome(recorder, start_rows);
    fill_table_roles(outcome);

    outcome.noise_ledger = {{"eps", resource.implied_epsilon}};
    outcome.conat_reports = {
        verify_conat(recorder.row_map(), recorder.initial_state(), ConatKind::MQ, 0, 2),
        verify_conat(recorder.row_map(), recorder.initial_state(), ConatKind::PQ, 1, 3)};
    return outcome;
}

ProtocolOutcome compose_teleport_via_superdense(const GaussianState& input,
                                                const ResourceSpec& resource1,
                                                const ResourceSpec& resource2) {
    require_modes(input, 1, "compose_teleport_via_superdense");

    CircuitRecorder recorder(relabel(input, {"A1"}));
    const auto [mode_a, mode_b] =
        append_epr_pair(recorder, resource1.implied_epsilon, "A", "B");
    const auto [mode_abar, mode_bbar] =
        append_epr_pair(recorder, resource2.implied_epsilon, "Abar", "Bbar");
    const Eigen::MatrixXd start_rows = recorder.row_map();

    // Alice's teleportation stage.
    recorder.apply_on(reflection(), {mode_a});
    recorder.apply_on(controlled_x(), {0, mode_a});

    // Both conat channels come from one superdense coding on the second
    // resource: MQ on mode 0 (receiver Abar), PQ on mode 1 (receiver Bbar).
    const Eigen::RowVectorXd entry_x0 = recorder.row(0, Quad::X);
    const Eigen::RowVectorXd entry_p0 = recorder.row(0, Quad::P);
    const Eigen::RowVectorXd entry_x1 = recorder.row(mode_a, Quad::X);
    const Eigen::RowVectorXd entry_p1 = recorder.row(mode_a, Quad::P);
    recorder.apply_on(controlled_x(), {mode_a, mode_abar});
    recorder.apply_on(controlled_p(), {0, mode_abar});
    recorder.apply_on(controlled_x_inv(), {mode_abar, mode_bbar});
    recorder.apply_on(reflection(), {mode_bbar});

    ConatNoiseRows mq_rows;
    mq_rows.kind = ConatKind::MQ;
    mq_rows.copy_noise = recorder.row(mode_abar, Quad::P) - entry_p0;
    mq_rows.sender_disturbance = recorder.row(0, Quad::X) - entry_x0;
    mq_rows.receiver_conjugate = recorder.row(mode_abar, Quad::X);
    mq_rows.entry_copy_row = entry_p0;
    mq_rows.sender_copy_after = recorder.row(0, Quad::P);

    ConatNoiseRows pq_rows;
    pq_rows.kind = ConatKind::PQ;
    pq_rows.copy_noise = recorder.row(mode_bbar, Quad::X) - entry_x1;
    pq_rows.sender_disturbance = recorder.row(mode_a, Quad::P) - entry_p1;
    pq_rows.receiver_conjugate = recorder.row(mode_bbar, Quad::P);
    pq_rows.entry_copy_row = entry_x1;
    pq_rows.sender_copy_after = recorder.row(mode_a, Quad::X);

    // Bob's teleportation stage with the superdense receivers.
    recorder.apply_on(controlled_x(), {mode_bbar, mode_b});
    recorder.apply_on(controlled_p(), {mode_abar, mode_b});

    recorder.permute({0, mode_a, mode_abar, mode_bbar, mode_b});

    ProtocolOutcome outcome = make_outcome(recorder, start_rows);
    outcome.channel_rows = {mq_rows, pq_rows};
    fill_table_roles(outcome);
    set_role(outcome, "teleported", 4);

    const auto [sx2, sp2] = teleport_error_vars(recorder, 4);
    outcome.fidelity = fidelity_from_error_vars(sx2, sp2);
    outcome.noise_ledger = {
        {"eps1", resource1.implied_epsilon},
        {"eps2", resource2.implied_epsilon},
        {"sigma_x2", sx2},
        {"sigma_p2", sp2},
        {"fidelity_bound",
         fidelity_lower_bound(FidelityBound::ComposedTeleport,
                              {resource1.implied_epsilon, resource2.implied_epsilon})}};
    outcome.conat_reports = {report_from_rows(recorder, mq_rows),
                             report_from_rows(recorder, pq_rows)};
    outcome.correlation_reports = {correlation_report(recorder, 0, 2),
                                   correlation_report(recorder, 1, 3)};
    return outcome;
}

ProtocolOutcome compose_superdense_via_teleport(const GaussianState& inputs,
                                                const ResourceSpec& resource, double pq_epsilon,
                                                double mq_epsilon) {
    require_modes(inputs, 2, "compose_superdense_via_teleport");
    if (pq_epsilon < 0.0 || mq_epsilon < 0.0) {
        throw std::invalid_argument("compose_superdense_via_teleport: negative epsilon");
    }
    if (pq_epsilon == 0.0) {
        pq_epsilon = kIdealEpsilonFloor;
    }
    if (mq_epsilon == 0.0) {
        mq_epsilon = kIdealEpsilonFloor;
    }

    CircuitRecorder recorder(relabel(inputs, {"A1", "A2"}));
    const auto [mode_a, mode_b] =
        append_epr_pair(recorder, resource.implied_epsilon, "A", "B");
    const Eigen::MatrixXd start_rows = recorder.row_map();

    // Alice's superdense encoding.
    recorder.apply_on(controlled_x(), {1, mode_a});
    recorder.apply_on(controlled_p(), {0, mode_a});

    // The qunat channel is replaced by alternate coherent teleportation of
    // mode three over the two conat channels, in the saturating realization
    // so the composed epsilons accumulate additively.
    const ConatApplyResult pq_applied =
        apply_conat(recorder, mode_a, ConatChannel::saturating(ConatKind::PQ, pq_epsilon));
    const ConatApplyResult mq_applied =
        apply_conat(recorder, mode_a, ConatChannel::saturating(ConatKind::MQ, mq_epsilon));
    recorder.apply_on(controlled_x_inv(),
                      {pq_applied.receiver_mode, mq_applied.receiver_mode});

    // Bob's decoding acts on the teleported mode and his half of the resource.
    recorder.apply_on(controlled_x_inv(), {pq_applied.receiver_mode, mode_b});
    recorder.apply_on(reflection(), {mode_b});

    const std::vector<std::size_t> dropped = noise_modes({&pq_applied, &mq_applied});
    if (!dropped.empty()) {
        recorder.drop(dropped);
    }
    const std::size_t teleported = index_after_drop(pq_applied.receiver_mode, dropped);
    const std::size_t recv_mq = index_after_drop(mq_applied.receiver_mode, dropped);
    recorder.permute({0, 1, mode_a, teleported, recv_mq, mode_b});

    ProtocolOutcome outcome = make_outcome(recorder, start_rows);
    outcome.channel_rows = {pq_applied.rows, mq_applied.rows};
    fill_table_roles(outcome);

    outcome.conat_reports = {
        verify_conat(recorder.row_map(), recorder.initial_state(), ConatKind::MQ, 0, 3),
        verify_conat(recorder.row_map(), recorder.initial_state(), ConatKind::PQ, 1, 5)};
    outcome.correlation_reports = {correlation_report(recorder, 2, 4)};
    outcome.noise_ledger = {{"eps1", resource.implied_epsilon},
                            {"eps2", pq_epsilon},
                            {"eps3", mq_epsilon},
                            {"sum_mq", outcome.conat_reports[0].achieved_epsilon},
                            {"sum_pq", outcome.conat_reports[1].achieved_epsilon}};
    return outcome;
}

ProtocolOutcome compose_superdense_via_teleport(const GaussianState& inputs,
                                                const ResourceSpec& resource,
                                                const ConatChannelSpec& pq,
                                                const ConatChannelSpec& mq) {
    if (pq.kind != ConatKind::PQ || mq.kind != ConatKind::MQ) {
        throw std::invalid_argument(
            "compose_superdense_via_teleport: channel kinds must be (PQ, MQ)");
    }
    return compose_superdense_via_teleport(inputs, resource, pq.nominal_epsilon,
                                           mq.nominal_epsilon);
}

ProtocolOutcome standard_bk_teleport(const GaussianState& input, const ResourceSpec& resource,
                                     std::uint64_t seed) {
    require_modes(input, 1, "standard_bk_teleport");

    CircuitRecorder prep(relabel(input, {"A1"}));
    append_epr_pair(prep, resource.implied_epsilon, "A", "B");
    GaussianState state = prep.state();

    // Alice's coupling matches the coherent circuit's preparation stage.
    state = apply(state, embed(reflection(), {1}, 3));
    state = apply(state, embed(controlled_x(), {0, 1}, 3));

    // Position homodyne on Alice's resource mode, momentum homodyne on the
    // input mode; feed both outcomes forward to Bob.
    const HomodyneResult x_meas = homodyne(state, 1, Quad::X, 2 * seed);
    const HomodyneResult p_meas = homodyne(x_meas.post_state, 0, Quad::P, 2 * seed + 1);
    GaussianState bob = apply(p_meas.post_state,
                              displacement(x_meas.outcome, p_meas.outcome));
    bob.set_labels({"teleported"});

    ProtocolOutcome outcome{bob,
                            {},
                            {},
                            std::nullopt,
                            {},
                            {},
                            prep.initial_state(),
                            Eigen::MatrixXd(),
                            {},
                            Eigen::MatrixXd()};
    set_role(outcome, "teleported", 0);
    outcome.fidelity = pure_state_overlap(input, bob);
    outcome.noise_ledger = {{"eps1", resource.implied_epsilon},
                            {"outcome_x", x_meas.outcome},
                            {"outcome_p", p_meas.outcome}};
    return outcome;
}

double average_bk_fidelity(const GaussianState& input, const ResourceSpec& resource,
                           std::size_t trials, std::uint64_t seed) {
    if (trials == 0) {
        throw std::invalid_argument("average_bk_fidelity: need at least one trial");
    }
    double total = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        total += *standard_bk_teleport(input, resource, seed + t).fidelity;
    }
    return total / static_cast<double>(trials);
}

DegradationTrace iterate_composition(double eps1, double eps2, double eps3, int depth) {
    if (depth < 1) {
        throw std::invalid_argument("iterate_composition: depth must be >= 1");
    }
    const GaussianState inputs = tensor(new_coherent(3.0, -2.0), new_coherent(-1.0, 1.0));

    DegradationTrace trace;
    double carried_mq = eps3;
    bool still_conforming = true;
    for (int level = 1; level <= depth; ++level) {
        const ProtocolOutcome outcome = compose_superdense_via_teleport(
            inputs, ResourceSpec::epsilon(eps1), eps2, carried_mq);
        DegradationLevel record;
        record.level = level;
        record.eps1 = eps1;
        record.eps2 = eps2;
        record.eps3 = carried_mq;
        record.sum_mq = outcome.noise_ledger.at("sum_mq");
        record.sum_pq = outcome.noise_ledger.at("sum_pq");
        record.fidelity_bound = fidelity_lower_bound(FidelityBound::AlternateTeleport,
                                                     {record.sum_pq, record.sum_mq});
        record.conforming = outcome.conat_reports[0].conforming &&
                            outcome.conat_reports[1].conforming;
        trace.levels.push_back(record);
        if (still_conforming && record.conforming) {
            trace.max_depth = level;
        } else {
            still_conforming = false;
        }
        carried_mq = record.sum_mq;
    }
    return trace;
}

}  // namespace conatsim
