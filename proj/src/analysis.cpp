#include "conatsim/analysis.hpp"

#include <cmath>

namespace conatsim {

namespace {

CorrelationReport correlation_from_moments(std::size_t a, std::size_t b, double sm_x_minus,
                                           double sm_x_plus, double sm_p_minus,
                                           double sm_p_plus) {
    CorrelationReport report;
    report.mode_a = a;
    report.mode_b = b;
    report.var_x_minus = sm_x_minus;
    report.var_x_plus = sm_x_plus;
    report.var_p_minus = sm_p_minus;
    report.var_p_plus = sm_p_plus;
    const double position_eps = std::max(sm_x_minus, sm_p_plus);
    const double momentum_eps = std::max(sm_x_plus, sm_p_minus);
    // Tie goes to position-correlated so the output is deterministic.
    if (position_eps <= momentum_eps) {
        report.orientation = Orientation::PositionCorrelated;
        report.epsilon = position_eps;
    } else {
        report.orientation = Orientation::MomentumCorrelated;
        report.epsilon = momentum_eps;
    }
    report.entangled = report.epsilon < 1.0;
    return report;
}

double second_moment(const GaussianState& state, const QuadExpr& expr) {
    const MeanVar stats = quad_stats(state, expr);
    return stats.variance + stats.mean * stats.mean;
}

}  // namespace

CorrelationReport correlation_report(const GaussianState& state, std::size_t a, std::size_t b) {
    if (a == b) {
        throw std::invalid_argument("correlation_report: need two distinct modes");
    }
    const auto sm = [&](Quad quad, double sign) {
        return second_moment(state, {{a, quad, 1.0}, {b, quad, sign}});
    };
    return correlation_from_moments(a, b, sm(Quad::X, -1.0), sm(Quad::X, 1.0),
                                    sm(Quad::P, -1.0), sm(Quad::P, 1.0));
}

CorrelationReport correlation_report(const CircuitRecorder& recorder, std::size_t a,
                                     std::size_t b) {
    if (a == b) {
        throw std::invalid_argument("correlation_report: need two distinct modes");
    }
    const auto sm = [&](Quad quad, double sign) {
        const Eigen::RowVectorXd row = recorder.row(a, quad) + sign * recorder.row(b, quad);
        return recorder.second_moment_of(row);
    };
    return correlation_from_moments(a, b, sm(Quad::X, -1.0), sm(Quad::X, 1.0),
                                    sm(Quad::P, -1.0), sm(Quad::P, 1.0));
}

double fidelity_from_error_vars(double sx2, double sp2) {
    if (sx2 < 0.0 || sp2 < 0.0) {
        throw std::invalid_argument("fidelity_from_error_vars: negative variance");
    }
    return 2.0 / std::sqrt((2.0 + sx2) * (2.0 + sp2));
}

double fidelity_lower_bound(FidelityBound bound, const std::vector<double>& eps) {
    switch (bound) {
        case FidelityBound::CoherentTeleport:
            if (eps.size() != 3) {
                throw std::invalid_argument("fidelity_lower_bound: expected (eps1, eps2, eps3)");
            }
            return 2.0 / std::sqrt((2.0 + eps[0] + eps[1]) * (2.0 + eps[0] + eps[2]));
        case FidelityBound::AlternateTeleport:
        case FidelityBound::ComposedTeleport:
            if (eps.size() != 2) {
                throw std::invalid_argument("fidelity_lower_bound: expected (eps1, eps2)");
            }
            return 2.0 / (2.0 + eps[0] + eps[1]);
    }
    throw std::invalid_argument("fidelity_lower_bound: unknown bound kind");
}

BeamsplitterConatReport beamsplitter_conat_test(const GaussianState& state, std::size_t sender,
                                                std::size_t receiver,
                                                double input_p_second_moment, double epsilon) {
    if (sender == receiver) {
        throw std::invalid_argument("beamsplitter_conat_test: need two distinct modes");
    }
    BeamsplitterConatReport report;
    report.raw_relative_position_sm =
        second_moment(state, {{receiver, Quad::X, 1.0}, {sender, Quad::X, -1.0}});
    report.raw_total_momentum_sm =
        second_moment(state, {{sender, Quad::P, 1.0}, {receiver, Quad::P, 1.0}});

    const GaussianState split =
        apply(state, embed(beamsplitter_5050(), {sender, receiver}, state.n_modes()));
    // Port 1 carries (q_s + q_r)/sqrt(2), port 2 carries (q_s - q_r)/sqrt(2).
    report.diff_port_x_sm = second_moment(split, {{receiver, Quad::X, 1.0}});
    report.sum_port_p_sm = second_moment(split, {{sender, Quad::P, 1.0}});

    report.position_pass = report.raw_relative_position_sm <= epsilon + kPhysicalTol;
    report.momentum_pass =
        report.raw_total_momentum_sm <= input_p_second_moment + epsilon + kPhysicalTol;
    report.pass = report.position_pass && report.momentum_pass;
    return report;
}

DegradationSummary degradation_report(const DegradationTrace& trace) {
    if (trace.levels.empty()) {
        throw std::invalid_argument("degradation_report: empty trace");
    }
    DegradationSummary summary;
    summary.max_depth = trace.max_depth;
    for (const auto& level : trace.levels) {
        if (!summary.first_entanglement_violation &&
            (level.sum_mq >= 1.0 || level.sum_pq >= 1.0)) {
            summary.first_entanglement_violation = level.level;
        }
        if (!summary.first_fidelity_violation && level.fidelity_bound <= 0.5) {
            summary.first_fidelity_violation = level.level;
        }
    }
    // Least-squares slope of sum_mq against level index.
    const auto n = static_cast<double>(trace.levels.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& level : trace.levels) {
        mean_x += level.level;
        mean_y += level.sum_mq;
    }
    mean_x /= n;
    mean_y /= n;
    double num = 0.0, den = 0.0;
    for (const auto& level : trace.levels) {
        num += (level.level - mean_x) * (level.sum_mq - mean_y);
        den += (level.level - mean_x) * (level.level - mean_x);
    }
    summary.slope = den > 0.0 ? num / den : 0.0;
    return summary;
}

double pure_state_overlap(const GaussianState& pure_reference, const GaussianState& other) {
    if (pure_reference.mean().size() != other.mean().size()) {
        throw std::invalid_argument("pure_state_overlap: dimension mismatch");
    }
    const Eigen::MatrixXd total = pure_reference.cov() + other.cov();
    const Eigen::VectorXd delta = pure_reference.mean() - other.mean();
    Eigen::LLT<Eigen::MatrixXd> llt(total);
    if (llt.info() != Eigen::Success) {
        throw PhysicsError("pure_state_overlap: covariance sum is not positive definite");
    }
    const Eigen::VectorXd solved = llt.solve(delta);
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < total.rows(); ++k) {
        log_det += 2.0 * std::log(llt.matrixL()(k, k));
    }
    return std::exp(-0.5 * delta.dot(solved) - 0.5 * log_det);
}

}  // namespace conatsim
