#pragma once

#include <optional>
#include <vector>

#include "conatsim/gaussian.hpp"
#include "conatsim/trace.hpp"

namespace conatsim {

enum class Orientation { PositionCorrelated, MomentumCorrelated, None };

/// EPR second moments of a mode pair. A pair is epsilon-position-correlated
/// when <(x_a - x_b)^2> and <(p_a + p_b)^2> are both <= epsilon, and
/// epsilon-momentum-correlated with the other signs; epsilon < 1 certifies
/// entanglement (Duan bound in these units).
struct CorrelationReport {
    std::size_t mode_a = 0;
    std::size_t mode_b = 0;
    double var_x_minus = 0.0;
    double var_x_plus = 0.0;
    double var_p_minus = 0.0;
    double var_p_plus = 0.0;
    Orientation orientation = Orientation::None;
    double epsilon = 0.0;
    bool entangled = false;
};

CorrelationReport correlation_report(const GaussianState& state, std::size_t a, std::size_t b);
/// Same metrics evaluated through recorded circuit rows (exact for strongly
/// squeezed registers where the assembled covariance would cancel).
CorrelationReport correlation_report(const CircuitRecorder& recorder, std::size_t a,
                                     std::size_t b);

/// Coherent-state-averaged teleportation fidelity from the error-operator
/// variances sx2 = Var(x_tel - x_in), sp2 = Var(p_tel - p_in):
/// F = 2 / sqrt((2 + sx2)(2 + sp2)). F = 1 for perfect teleportation and
/// 1/2 at two units of vacuum noise (the classical limit).
double fidelity_from_error_vars(double sx2, double sp2);

enum class FidelityBound {
    CoherentTeleport,    // 2 / sqrt((2+e1+e2)(2+e1+e3))
    AlternateTeleport,   // 2 / (2+e1+e2)
    ComposedTeleport,    // 2 / (2+e1+e2)
};

double fidelity_lower_bound(FidelityBound bound, const std::vector<double>& eps);

/// Channel performance probe: send sender/receiver through a 50:50
/// beamsplitter and read the relative-position and total-momentum second
/// moments. Pass criteria use the raw EPR combinations (the beamsplitter
/// ports carry the same information scaled by 1/2):
/// <(x_r - x_s)^2> <= epsilon and <(p_s + p_r)^2> <= input_p_sm + epsilon.
struct BeamsplitterConatReport {
    double raw_relative_position_sm = 0.0;
    double raw_total_momentum_sm = 0.0;
    double diff_port_x_sm = 0.0;
    double sum_port_p_sm = 0.0;
    bool position_pass = false;
    bool momentum_pass = false;
    bool pass = false;
};

BeamsplitterConatReport beamsplitter_conat_test(const GaussianState& state, std::size_t sender,
                                                std::size_t receiver,
                                                double input_p_second_moment, double epsilon);

/// Per-level record of the composition-degradation study.
struct DegradationLevel {
    int level = 0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps3 = 0.0;
    double sum_mq = 0.0;   // measured MQ channel epsilon (eps1+eps2+eps3)
    double sum_pq = 0.0;   // measured PQ channel epsilon (eps1+eps2)
    double fidelity_bound = 0.0;
    bool conforming = false;
};

struct DegradationTrace {
    std::vector<DegradationLevel> levels;
    int max_depth = 0;
};

struct DegradationSummary {
    int max_depth = 0;
    std::optional<int> first_entanglement_violation;  // first level with a sum >= 1
    std::optional<int> first_fidelity_violation;      // first level with bound <= 1/2
    double slope = 0.0;                               // least-squares slope of sum_mq
};

DegradationSummary degradation_report(const DegradationTrace& trace);

/// Uhlmann fidelity between a pure Gaussian reference and another Gaussian
/// state (exact whenever one argument is pure).
double pure_state_overlap(const GaussianState& pure_reference, const GaussianState& other);

}  // namespace conatsim
