#include "conatsim/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace conatsim {

std::string to_string(ConatKind kind) { return kind == ConatKind::PQ ? "PQ" : "MQ"; }

std::string to_string(Orientation orientation) {
    switch (orientation) {
        case Orientation::PositionCorrelated:
            return "position-correlated";
        case Orientation::MomentumCorrelated:
            return "momentum-correlated";
        case Orientation::None:
            return "none";
    }
    return "none";
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

nlohmann::json to_json(const GaussianState& state) {
    nlohmann::json cov = nlohmann::json::array();
    for (Eigen::Index i = 0; i < state.cov().rows(); ++i) {
        for (Eigen::Index j = 0; j < state.cov().cols(); ++j) {
            cov.push_back(state.cov()(i, j));
        }
    }
    return {{"n_modes", state.n_modes()},
            {"mean", std::vector<double>(state.mean().data(),
                                         state.mean().data() + state.mean().size())},
            {"cov", cov},
            {"labels", state.labels()}};
}

nlohmann::json to_json(const ConatReport& report) {
    return {{"kind", to_string(report.kind)},
            {"copies_exactly", report.copies_exactly},
            {"var_copy_noise", report.var_copy_noise},
            {"var_conjugate_combo", report.var_conjugate_combo},
            {"mean_copy_noise", report.mean_copy_noise},
            {"mean_conjugate_combo", report.mean_conjugate_combo},
            {"achieved_epsilon", report.achieved_epsilon},
            {"conforming", report.conforming}};
}

nlohmann::json to_json(const CorrelationReport& report) {
    return {{"mode_a", report.mode_a},
            {"mode_b", report.mode_b},
            {"var_x_minus", report.var_x_minus},
            {"var_x_plus", report.var_x_plus},
            {"var_p_minus", report.var_p_minus},
            {"var_p_plus", report.var_p_plus},
            {"orientation", to_string(report.orientation)},
            {"epsilon", report.epsilon},
            {"entangled", report.entangled}};
}

nlohmann::json to_json(const BeamsplitterConatReport& report) {
    return {{"raw_relative_position_sm", report.raw_relative_position_sm},
            {"raw_total_momentum_sm", report.raw_total_momentum_sm},
            {"diff_port_x_sm", report.diff_port_x_sm},
            {"sum_port_p_sm", report.sum_port_p_sm},
            {"position_pass", report.position_pass},
            {"momentum_pass", report.momentum_pass},
            {"pass", report.pass}};
}

nlohmann::json to_json(const MomentVerdict& verdict) {
    return {{"pass", verdict.pass},
            {"max_abs_z", verdict.max_abs_z},
            {"worst_entry", verdict.worst_entry}};
}

nlohmann::json to_json(const ProtocolOutcome& outcome) {
    nlohmann::json roles;
    for (const auto& [name, mode] : outcome.role_map) {
        roles[name] = {{"index", mode.index}, {"label", mode.label}};
    }
    nlohmann::json conat = nlohmann::json::array();
    for (const auto& report : outcome.conat_reports) {
        conat.push_back(to_json(report));
    }
    nlohmann::json correlations = nlohmann::json::array();
    for (const auto& report : outcome.correlation_reports) {
        correlations.push_back(to_json(report));
    }
    nlohmann::json out{{"final_state", to_json(outcome.final_state)},
                       {"role_map", roles},
                       {"noise_ledger", outcome.noise_ledger},
                       {"conat_reports", conat},
                       {"correlation_reports", correlations}};
    if (outcome.fidelity) {
        out["fidelity"] = *outcome.fidelity;
    } else {
        out["fidelity"] = nullptr;
    }
    return out;
}

nlohmann::json to_json(const DegradationTrace& trace) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& level : trace.levels) {
        levels.push_back({{"level", level.level},
                          {"eps1", level.eps1},
                          {"eps2", level.eps2},
                          {"eps3", level.eps3},
                          {"sum_mq", level.sum_mq},
                          {"sum_pq", level.sum_pq},
                          {"fidelity_bound", level.fidelity_bound},
                          {"conforming", level.conforming}});
    }
    return {{"levels", levels}, {"max_depth", trace.max_depth}};
}

std::string degradation_csv(const DegradationTrace& trace) {
    std::ostringstream out;
    out << "# conatsim degradation-trace v1\n";
    out << "level,eps1,eps2,eps3,sum_mq,sum_pq,fidelity_bound,conforming\n";
    for (const auto& level : trace.levels) {
        out << level.level << ',' << format_double(level.eps1) << ','
            << format_double(level.eps2) << ',' << format_double(level.eps3) << ','
            << format_double(level.sum_mq) << ',' << format_double(level.sum_pq) << ','
            << format_double(level.fidelity_bound) << ',' << (level.conforming ? 1 : 0)
            << '\n';
    }
    return out.str();
}

}  // namespace conatsim
