#include <doctest.h>

#include <cmath>

#include "conatsim/analysis.hpp"
#include "conatsim/conat.hpp"
#include "test_util.hpp"

using namespace conatsim;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("correlation report on the two-mode squeezed vacuum") {
    const CorrelationReport report = correlation_report(new_tmsv(1.0), 0, 1);
    CHECK(report.orientation == Orientation::PositionCorrelated);
    CHECK(std::abs(report.epsilon - std::exp(-2.0)) < 1e-12);
    CHECK(report.entangled);

    for (double r : {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}) {
        const CorrelationReport at_r = correlation_report(new_tmsv(r), 0, 1);
        CHECK(std::abs(at_r.epsilon - std::exp(-2.0 * r)) < 1e-12);
        CHECK(at_r.entangled == (r > 0.0));
    }
}

TEST_CASE("two vacua sit exactly at the separability boundary") {
    const CorrelationReport report = correlation_report(new_vacuum(2), 0, 1);
    CHECK(report.epsilon == 1.0);
    CHECK_FALSE(report.entangled);
    // Orientation tie resolves to position-correlated.
    CHECK(report.orientation == Orientation::PositionCorrelated);
}

TEST_CASE("reflecting one half swaps the correlation orientation") {
    const GaussianState reflected = apply(new_tmsv(1.0), embed(reflection(), {1}, 2));
    const CorrelationReport report = correlation_report(reflected, 0, 1);
    CHECK(report.orientation == Orientation::MomentumCorrelated);
    CHECK(std::abs(report.epsilon - std::exp(-2.0)) < 1e-12);
    CHECK(report.entangled);

    CHECK_THROWS_AS(correlation_report(reflected, 1, 1), std::invalid_argument);
}

TEST_CASE("second moments catch nonzero means") {
    GaussianState displaced = apply(new_tmsv(1.0), embed(displacement(2.0, 0.0), {0}, 2));
    const CorrelationReport report = correlation_report(displaced, 0, 1);
    // <(x_A - x_B)^2> picks up the squared mean offset.
    CHECK(report.var_x_minus > 4.0 - 1e-9);
}

TEST_CASE("fidelity from error variances") {
    CHECK(fidelity_from_error_vars(0.0, 0.0) == 1.0);
    CHECK(std::abs(fidelity_from_error_vars(2.0, 2.0) - 0.5) < 1e-15);

    const double eps = std::exp(-2.0) + std::exp(-2.0) / 2.0;
    CHECK(std::abs(fidelity_from_error_vars(eps, eps) - 2.0 / (2.0 + eps)) < 1e-15);
    CHECK(fidelity_from_error_vars(eps, eps) == doctest::Approx(0.9078).epsilon(1e-3));

    for (double a : {0.1, 0.7, 1.9}) {
        for (double b : {0.2, 1.1}) {
            CHECK(fidelity_from_error_vars(a, b) == fidelity_from_error_vars(b, a));
            CHECK(fidelity_from_error_vars(a + 0.1, b) < fidelity_from_error_vars(a, b));
            CHECK(fidelity_from_error_vars(a, b + 0.1) < fidelity_from_error_vars(a, b));
        }
    }
    CHECK_THROWS_AS(fidelity_from_error_vars(-0.1, 0.0), std::invalid_argument);
}

TEST_CASE("fidelity lower bounds") {
    CHECK(fidelity_lower_bound(FidelityBound::CoherentTeleport, {0.0, 0.0, 0.0}) == 1.0);
    CHECK(std::abs(fidelity_lower_bound(FidelityBound::CoherentTeleport, {1.0, 1.0, 1.0}) -
                   0.5) < 1e-15);
    const double eps = std::exp(-2.0) / 2.0;
    CHECK(std::abs(fidelity_lower_bound(FidelityBound::AlternateTeleport, {eps, eps}) -
                   2.0 / (2.0 + std::exp(-2.0))) < 1e-15);
    CHECK(fidelity_lower_bound(FidelityBound::AlternateTeleport, {eps, eps}) ==
          doctest::Approx(0.9367).epsilon(1e-3));

    CHECK_THROWS_AS(fidelity_lower_bound(FidelityBound::CoherentTeleport, {0.1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fidelity_lower_bound(FidelityBound::AlternateTeleport, {0.1, 0.1, 0.1}),
                    std::invalid_argument);
}

TEST_CASE("beamsplitter channel probe") {
    SUBCASE("canonical PQ output passes") {
        const double r_c = 1.0;
        const double eps = std::exp(-2.0 * r_c) / 2.0;
        const ConatApplication applied =
            apply_pq_conat(new_vacuum(1), 0, ConatChannelSpec::pq(r_c));
        const BeamsplitterConatReport report =
            beamsplitter_conat_test(applied.state, 0, 1, 0.5, eps);
        CHECK(std::abs(report.raw_relative_position_sm - eps) < 1e-12);
        // Total output momentum equals the input momentum exactly.
        CHECK(std::abs(report.raw_total_momentum_sm - 0.5) < 1e-12);
        CHECK(report.pass);
        // Beamsplitter ports carry the raw combinations scaled by 1/2.
        CHECK(std::abs(report.diff_port_x_sm - report.raw_relative_position_sm / 2.0) <
              1e-12);
        CHECK(std::abs(report.sum_port_p_sm - report.raw_total_momentum_sm / 2.0) < 1e-12);
    }

    SUBCASE("momentum-squeezed ancilla fails the position bound") {
        const ConatApplication applied =
            apply_pq_conat_with_ancilla(new_vacuum(1), 0, new_squeezed(2.0, Axis::Momentum));
        const BeamsplitterConatReport report =
            beamsplitter_conat_test(applied.state, 0, 1, 0.5, 0.5);
        CHECK_FALSE(report.position_pass);
        CHECK_FALSE(report.pass);
    }

    SUBCASE("mode validation") {
        CHECK_THROWS_AS(beamsplitter_conat_test(new_vacuum(2), 1, 1, 0.5, 0.1),
                        std::invalid_argument);
    }
}

TEST_CASE("degradation summaries") {
    SUBCASE("all-zero trace never violates") {
        DegradationTrace trace;
        for (int level = 1; level <= 5; ++level) {
            trace.levels.push_back({level, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, true});
        }
        trace.max_depth = 5;
        const DegradationSummary summary = degradation_report(trace);
        CHECK(summary.max_depth == 5);
        CHECK_FALSE(summary.first_entanglement_violation.has_value());
        CHECK_FALSE(summary.first_fidelity_violation.has_value());
        CHECK(summary.slope == 0.0);
    }

    SUBCASE("constant increments give the increment as slope") {
        DegradationTrace trace;
        const double increment = 0.2;
        for (int level = 1; level <= 8; ++level) {
            const double sum = 0.1 + increment * level;
            trace.levels.push_back(
                {level, 0.1, 0.1, 0.0, sum, 0.2, 2.0 / (2.0 + 0.2 + sum), sum < 1.0});
        }
        const DegradationSummary summary = degradation_report(trace);
        CHECK(std::abs(summary.slope - increment) < 1e-12);
        // First level with sum >= 1: 0.1 + 0.2 k >= 1 at k = 5.
        REQUIRE(summary.first_entanglement_violation.has_value());
        CHECK(*summary.first_entanglement_violation == 5);
    }

    SUBCASE("empty trace is an error") {
        CHECK_THROWS_AS(degradation_report(DegradationTrace{}), std::invalid_argument);
    }
}

TEST_CASE("pure-state overlap") {
    CHECK(std::abs(pure_state_overlap(new_vacuum(1), new_vacuum(1)) - 1.0) < 1e-12);

    // Two coherent states: F = exp(-(dx^2 + dp^2)/2).
    const double dx = 0.7, dp = -1.1;
    const double expected = std::exp(-(dx * dx + dp * dp) / 2.0);
    CHECK(std::abs(pure_state_overlap(new_coherent(0.0, 0.0), new_coherent(dx, dp)) -
                   expected) < 1e-12);

    // Vacuum against an added-noise thermal state: F = 1/(1 + s).
    const double s = 0.8;
    const GaussianState noisy(Eigen::VectorXd::Zero(2),
                              (0.5 + s) * Eigen::MatrixXd::Identity(2, 2));
    CHECK(std::abs(pure_state_overlap(new_vacuum(1), noisy) - 1.0 / (1.0 + s)) < 1e-12);
}

TEST_SUITE_END();
