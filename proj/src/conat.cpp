#include "conatsim/conat.hpp"

#include <cmath>

namespace conatsim {

namespace {

constexpr double kExactRowTol = 1e-12;
constexpr double kMeanTol = 1e-9;

ConatReport make_report(ConatKind kind, double var_copy, double mean_copy, double var_combo,
                        double mean_combo, bool copies_exactly) {
    ConatReport report;
    report.kind = kind;
    report.copies_exactly = copies_exactly;
    report.var_copy_noise = var_copy;
    report.var_conjugate_combo = var_combo;
    report.mean_copy_noise = mean_copy;
    report.mean_conjugate_combo = mean_combo;
    report.achieved_epsilon = std::max(var_copy, var_combo);
    report.conforming = copies_exactly && report.achieved_epsilon < 1.0 &&
                        std::abs(mean_copy) <= kMeanTol && std::abs(mean_combo) <= kMeanTol;
    return report;
}

void require_zero_mean_single_mode(const GaussianState& ancilla) {
    if (ancilla.n_modes() != 1) {
        throw std::invalid_argument("conat ancilla must be a single mode");
    }
    if (ancilla.mean().cwiseAbs().maxCoeff() > kExactRowTol) {
        throw std::invalid_argument("conat ancilla must have zero mean");
    }
}

}  // namespace

ConatChannelSpec ConatChannelSpec::pq(double r_c) {
    if (r_c < 0.0) {
        throw std::invalid_argument("ConatChannelSpec: ancilla squeezing must be >= 0");
    }
    return {ConatKind::PQ, r_c, std::exp(-2.0 * r_c) / 2.0};
}

ConatChannelSpec ConatChannelSpec::mq(double r_c) {
    ConatChannelSpec spec = pq(r_c);
    spec.kind = ConatKind::MQ;
    return spec;
}

ConatChannel ConatChannel::canonical(const ConatChannelSpec& spec) {
    return {spec.kind, new_squeezed(spec.ancilla_squeezing, Axis::Position), std::nullopt,
            spec.nominal_epsilon};
}

ConatChannel ConatChannel::with_ancilla(ConatKind kind, const GaussianState& ancilla) {
    require_zero_mean_single_mode(ancilla);
    return {kind, ancilla, std::nullopt, ancilla.cov()(0, 0)};
}

ConatChannel ConatChannel::saturating(ConatKind kind, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("ConatChannel::saturating: epsilon must be positive");
    }
    // Copy ancilla carries Var = epsilon copy noise; the second ancilla
    // injects an independent Var = epsilon term into the receiver's
    // conjugate quadrature, so both channel bounds hold with equality.
    return {kind, squeezed_to_variance(epsilon), squeezed_to_variance(0.25 / epsilon),
            epsilon};
}

ConatApplyResult apply_conat(CircuitRecorder& recorder, std::size_t mode,
                             const ConatChannel& channel) {
    if (mode >= recorder.n_modes()) {
        throw std::invalid_argument("apply_conat: mode out of range");
    }
    require_zero_mean_single_mode(channel.copy_ancilla);

    ConatApplyResult result;
    result.sender_mode = mode;
    result.receiver_mode = recorder.append_mode(
        channel.copy_ancilla, channel.kind == ConatKind::PQ ? "B'" : "B''");
    if (channel.conjugate_noise_ancilla) {
        result.noise_mode = recorder.append_mode(*channel.conjugate_noise_ancilla, "noise");
    }

    const Eigen::RowVectorXd entry_x = recorder.row(mode, Quad::X);
    const Eigen::RowVectorXd entry_p = recorder.row(mode, Quad::P);
    const std::size_t receiver = result.receiver_mode;

    if (channel.kind == ConatKind::MQ) {
        recorder.apply_on(fourier(), {mode});
    }
    recorder.apply_on(controlled_x(), {mode, receiver});
    if (result.noise_mode) {
        recorder.apply_on(controlled_p(), {*result.noise_mode, receiver});
    }
    if (channel.kind == ConatKind::MQ) {
        recorder.apply_on(fourier_inv(), {mode});
        recorder.apply_on(fourier_inv(), {receiver});
    }

    ConatNoiseRows& rows = result.rows;
    rows.kind = channel.kind;
    if (channel.kind == ConatKind::PQ) {
        rows.copy_noise = recorder.row(receiver, Quad::X) - entry_x;
        rows.sender_disturbance = recorder.row(mode, Quad::P) - entry_p;
        rows.receiver_conjugate = recorder.row(receiver, Quad::P);
        rows.entry_copy_row = entry_x;
        rows.sender_copy_after = recorder.row(mode, Quad::X);
    } else {
        rows.copy_noise = recorder.row(receiver, Quad::P) - entry_p;
        rows.sender_disturbance = recorder.row(mode, Quad::X) - entry_x;
        rows.receiver_conjugate = recorder.row(receiver, Quad::X);
        rows.entry_copy_row = entry_p;
        rows.sender_copy_after = recorder.row(mode, Quad::P);
    }
    return result;
}

ConatReport report_from_rows(const CircuitRecorder& recorder, const ConatNoiseRows& rows) {
    const Eigen::RowVectorXd combo = rows.sender_disturbance + rows.receiver_conjugate;
    const bool copies_exactly =
        (rows.sender_copy_after - rows.entry_copy_row).cwiseAbs().maxCoeff() <= kExactRowTol;
    return make_report(rows.kind, recorder.var_of(rows.copy_noise),
                       recorder.mean_of(rows.copy_noise), recorder.var_of(combo),
                       recorder.mean_of(combo), copies_exactly);
}

namespace {

ConatApplication apply_state_level(const GaussianState& state, std::size_t mode,
                                   const ConatChannel& channel) {
    CircuitRecorder recorder(state);
    const ConatApplyResult applied = apply_conat(recorder, mode, channel);
    ConatApplication out{recorder.state(),
                         ModeRef{applied.sender_mode, recorder.labels()[applied.sender_mode]},
                         ModeRef{applied.receiver_mode, recorder.labels()[applied.receiver_mode]},
                         recorder.row_map(), recorder.initial_state()};
    return out;
}

}  // namespace

ConatApplication apply_pq_conat(const GaussianState& state, std::size_t mode,
                                const ConatChannelSpec& spec) {
    if (spec.kind != ConatKind::PQ) {
        throw std::invalid_argument("apply_pq_conat: spec kind must be PQ");
    }
    return apply_state_level(state, mode, ConatChannel::canonical(spec));
}

ConatApplication apply_mq_conat(const GaussianState& state, std::size_t mode,
                                const ConatChannelSpec& spec) {
    if (spec.kind != ConatKind::MQ) {
        throw std::invalid_argument("apply_mq_conat: spec kind must be MQ");
    }
    return apply_state_level(state, mode, ConatChannel::canonical(spec));
}

ConatApplication apply_pq_conat_with_ancilla(const GaussianState& state, std::size_t mode,
                                             const GaussianState& ancilla) {
    return apply_state_level(state, mode, ConatChannel::with_ancilla(ConatKind::PQ, ancilla));
}

ConatApplication apply_mq_conat_with_ancilla(const GaussianState& state, std::size_t mode,
                                             const GaussianState& ancilla) {
    return apply_state_level(state, mode, ConatChannel::with_ancilla(ConatKind::MQ, ancilla));
}

ConatReport verify_conat(const Eigen::MatrixXd& end_to_end_map,
                         const GaussianState& input_moments, ConatKind kind,
                         std::size_t sender_mode, std::size_t receiver_mode) {
    if (sender_mode == receiver_mode) {
        throw std::invalid_argument("verify_conat: sender and receiver modes collide");
    }
    if (end_to_end_map.cols() != input_moments.mean().size()) {
        throw std::invalid_argument("verify_conat: map columns do not match input moments");
    }
    const auto out_modes = static_cast<std::size_t>(end_to_end_map.rows()) / 2;
    if (sender_mode >= out_modes || receiver_mode >= out_modes) {
        throw std::invalid_argument("verify_conat: output mode out of range");
    }
    if (2 * sender_mode + 1 >= static_cast<std::size_t>(end_to_end_map.cols())) {
        throw std::invalid_argument("verify_conat: no input mode at the sender index");
    }

    const auto unit = [&](std::size_t idx) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(end_to_end_map.cols());
        row(static_cast<Eigen::Index>(idx)) = 1.0;
        return row;
    };
    const Eigen::Index sx = static_cast<Eigen::Index>(2 * sender_mode);
    const Eigen::Index sp = sx + 1;
    const Eigen::Index rx = static_cast<Eigen::Index>(2 * receiver_mode);
    const Eigen::Index rp = rx + 1;

    Eigen::RowVectorXd copy_noise, combo, copy_after, entry;
    if (kind == ConatKind::PQ) {
        entry = unit(2 * sender_mode);
        copy_after = end_to_end_map.row(sx);
        copy_noise = end_to_end_map.row(rx) - entry;
        combo = (end_to_end_map.row(sp) - unit(2 * sender_mode + 1)) + end_to_end_map.row(rp);
    } else {
        entry = unit(2 * sender_mode + 1);
        copy_after = end_to_end_map.row(sp);
        copy_noise = end_to_end_map.row(rp) - entry;
        combo = (end_to_end_map.row(sx) - unit(2 * sender_mode)) + end_to_end_map.row(rx);
    }

    const auto mean_of = [&](const Eigen::RowVectorXd& row) {
        return row.dot(input_moments.mean());
    };
    const auto var_of = [&](const Eigen::RowVectorXd& row) {
        return row.dot(input_moments.cov() * row.transpose());
    };
    const bool copies_exactly = (copy_after - entry).cwiseAbs().maxCoeff() <= kExactRowTol;
    return make_report(kind, var_of(copy_noise), mean_of(copy_noise), var_of(combo),
                       mean_of(combo), copies_exactly);
}

ConatReport verify_conat(const SymplecticOp& end_to_end_map, const GaussianState& input_moments,
                         ConatKind kind, std::size_t sender_mode, std::size_t receiver_mode) {
    return verify_conat(end_to_end_map.matrix, input_moments, kind, sender_mode, receiver_mode);
}

}  // namespace conatsim
