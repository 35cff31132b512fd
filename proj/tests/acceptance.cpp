// Acceptance suite: one criterion per numbered check, each printed as a
// single PASS/FAIL line. Run every criterion (no arguments) or a single one
// with --criterion N. The process exit code is the number of failed criteria.

#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "conatsim/mc_oracle.hpp"
#include "conatsim/protocols.hpp"
#include "conatsim/serialize.hpp"
#include "table_checks.hpp"
#include "test_util.hpp"

using namespace conatsim;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::ostream&)> run;
};

bool within(std::ostream& log, const std::string& what, double actual, double expected,
            double tol) {
    if (std::abs(actual - expected) <= tol) {
        return true;
    }
    log << "\n      " << what << ": got " << format_double(actual) << ", expected "
        << format_double(expected) << " (tol " << format_double(tol) << ")";
    return false;
}

bool holds(std::ostream& log, const std::string& what, bool condition) {
    if (!condition) {
        log << "\n      " << what << ": violated";
    }
    return condition;
}

// 1. Conat conformance across the ancilla-squeezing grid.
bool criterion_conat_conformance(std::ostream& log) {
    bool ok = true;
    for (double r_c : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        const double expected = std::exp(-2.0 * r_c) / 2.0;
        {
            const ConatApplication applied =
                apply_pq_conat(new_coherent(3.0, -2.0), 0, ConatChannelSpec::pq(r_c));
            const ConatReport report =
                verify_conat(applied.end_to_end_map, applied.input_with_ancilla,
                             ConatKind::PQ, 0, 1);
            ok &= within(log, "PQ achieved epsilon at r_c=" + format_double(r_c),
                         report.achieved_epsilon, expected, 1e-12);
            ok &= within(log, "PQ conjugate combination at r_c=" + format_double(r_c),
                         report.var_conjugate_combo, 0.0, 1e-12);
            ok &= holds(log, "PQ exact copy row", report.copies_exactly);
        }
        {
            const ConatApplication applied =
                apply_mq_conat(new_coherent(3.0, -2.0), 0, ConatChannelSpec::mq(r_c));
            const ConatReport report =
                verify_conat(applied.end_to_end_map, applied.input_with_ancilla,
                             ConatKind::MQ, 0, 1);
            ok &= within(log, "MQ achieved epsilon at r_c=" + format_double(r_c),
                         report.achieved_epsilon, expected, 1e-12);
            ok &= within(log, "MQ conjugate combination at r_c=" + format_double(r_c),
                         report.var_conjugate_combo, 0.0, 1e-12);
            ok &= holds(log, "MQ exact copy row", report.copies_exactly);
        }
    }
    return ok;
}

// 2. Coherent-teleportation fidelity across the (r, r_c) grid.
bool criterion_teleport_fidelity(std::ostream& log) {
    bool ok = true;
    const GaussianState input = new_coherent(3.0, -2.0);
    for (double r : {0.0, 0.5, 1.0, 2.0}) {
        for (double r_c : {0.0, 0.5, 1.0, 2.0}) {
            const double eps1 = std::exp(-2.0 * r);
            const double eps_c = std::exp(-2.0 * r_c) / 2.0;
            const ProtocolOutcome outcome =
                coherent_teleport(input, ResourceSpec::tmsv(r), ConatChannelSpec::mq(r_c),
                                  ConatChannelSpec::pq(r_c));
            const double expected =
                2.0 / std::sqrt((2.0 + eps1 + eps_c) * (2.0 + eps1 + eps_c));
            std::ostringstream what;
            what << "fidelity at (r=" << r << ", r_c=" << r_c << ")";
            ok &= within(log, what.str(), *outcome.fidelity, expected, 1e-9);
            if (eps1 < 1.0) {  // all epsilons below one: above the classical limit
                ok &= holds(log, what.str() + " > 1/2", *outcome.fidelity > 0.5);
            }
        }
    }
    // Boundary: every epsilon at one lands exactly on the classical 1/2.
    const GaussianState unit_ancilla = squeezed_to_variance(1.0);
    const ProtocolOutcome boundary = coherent_teleport(
        input, ResourceSpec::tmsv(0.0),
        ConatChannel::with_ancilla(ConatKind::MQ, unit_ancilla),
        ConatChannel::with_ancilla(ConatKind::PQ, unit_ancilla));
    ok &= within(log, "fidelity at eps1=eps2=eps3=1", *boundary.fidelity, 0.5, 1e-9);
    return ok;
}

// 3. Alternate-teleportation fidelity equals 2/(2 + eps1 + eps2).
bool criterion_alternate_fidelity(std::ostream& log) {
    bool ok = true;
    const GaussianState input = new_coherent(3.0, -2.0);
    for (double rc1 : {0.0, 0.5, 1.0, 2.0}) {
        for (double rc2 : {0.0, 0.5, 1.0, 2.0}) {
            const double eps1 = std::exp(-2.0 * rc1) / 2.0;
            const double eps2 = std::exp(-2.0 * rc2) / 2.0;
            const ProtocolOutcome outcome = alternate_coherent_teleport(
                input, ConatChannelSpec::pq(rc1), ConatChannelSpec::mq(rc2));
            const double expected = 2.0 / (2.0 + eps1 + eps2);
            std::ostringstream what;
            what << "fidelity at (rc1=" << rc1 << ", rc2=" << rc2 << ")";
            ok &= within(log, what.str(), *outcome.fidelity, expected, 1e-9);
        }
    }
    return ok;
}

// 4. Observable tables as exact end-to-end coefficients.
bool criterion_observable_tables(std::ostream& log) {
    bool ok = true;
    const GaussianState one = new_coherent(3.0, -2.0);
    const GaussianState two = tensor(new_coherent(3.0, -2.0), new_coherent(-1.0, 1.0));

    const ProtocolOutcome teleport = coherent_teleport(
        one, ResourceSpec::tmsv(0.8), ConatChannelSpec::mq(1.2), ConatChannelSpec::pq(0.5));
    ok &= within(log, "five-mode table deviation",
                 test::teleport_table_deviation(teleport), 0.0, 1e-12);

    const ProtocolOutcome alternate = alternate_coherent_teleport(
        one, ConatChannelSpec::pq(0.7), ConatChannelSpec::mq(1.4));
    ok &= within(log, "three-mode table deviation",
                 test::alternate_table_deviation(alternate), 0.0, 1e-12);

    const ProtocolOutcome superdense = coherent_superdense(two, ResourceSpec::tmsv(1.0));
    ok &= within(log, "four-mode table deviation",
                 test::superdense_table_deviation(superdense), 0.0, 1e-12);

    const ProtocolOutcome composed =
        compose_superdense_via_teleport(two, ResourceSpec::epsilon(0.2), 0.15, 0.25);
    ok &= within(log, "six-mode table deviation",
                 test::composed_superdense_table_deviation(composed), 0.0, 1e-12);

    const ProtocolOutcome composed_teleport =
        compose_teleport_via_superdense(one, ResourceSpec::tmsv(0.9), ResourceSpec::tmsv(1.3));
    ok &= within(log, "five-mode table deviation (composed channels)",
                 test::teleport_table_deviation(composed_teleport), 0.0, 1e-12);
    return ok;
}

// 5. Superdense coding certifies an MQ channel on (1,3) and a PQ on (2,4).
bool criterion_superdense_certification(std::ostream& log) {
    bool ok = true;
    const GaussianState two = tensor(new_coherent(3.0, -2.0), new_coherent(-1.0, 1.0));
    for (double r : {0.25, 0.5, 1.0, 2.0}) {
        const ProtocolOutcome outcome = coherent_superdense(two, ResourceSpec::tmsv(r));
        const double expected = std::exp(-2.0 * r);
        ok &= within(log, "MQ epsilon on modes (1,3) at r=" + format_double(r),
                     outcome.conat_reports[0].achieved_epsilon, expected, 1e-12);
        ok &= within(log, "PQ epsilon on modes (2,4) at r=" + format_double(r),
                     outcome.conat_reports[1].achieved_epsilon, expected, 1e-12);
        ok &= holds(log, "both channels conforming", outcome.conat_reports[0].conforming &&
                                                         outcome.conat_reports[1].conforming);
    }
    const ProtocolOutcome boundary = coherent_superdense(two, ResourceSpec::tmsv(0.0));
    ok &= holds(log, "separable resource is non-conforming",
                !boundary.conat_reports[0].conforming &&
                    !boundary.conat_reports[1].conforming);
    const ProtocolOutcome ideal = coherent_superdense(two, ResourceSpec::tmsv(20.0));
    ok &= holds(log, "near-ideal channels at r=20",
                ideal.conat_reports[0].achieved_epsilon < 1e-15 &&
                    ideal.conat_reports[1].achieved_epsilon < 1e-15);
    return ok;
}

// 6. Composition sums: MQ = eps1+eps2+eps3, PQ = eps1+eps2, flip at one.
bool criterion_composition_sums(std::ostream& log) {
    bool ok = true;
    const GaussianState two = tensor(new_coherent(3.0, -2.0), new_coherent(-1.0, 1.0));
    const auto run = [&](double e1, double e2, double e3) {
        return compose_superdense_via_teleport(two, ResourceSpec::epsilon(e1), e2, e3);
    };

    const ProtocolOutcome small = run(0.1, 0.1, 0.1);
    ok &= within(log, "MQ sum at (0.1,0.1,0.1)",
                 small.conat_reports[0].achieved_epsilon, 0.3, 1e-9);
    ok &= within(log, "PQ sum at (0.1,0.1,0.1)",
                 small.conat_reports[1].achieved_epsilon, 0.2, 1e-9);
    ok &= holds(log, "both conforming at (0.1,0.1,0.1)",
                small.conat_reports[0].conforming && small.conat_reports[1].conforming);

    const ProtocolOutcome mixed = run(0.5, 0.4, 0.2);
    ok &= within(log, "MQ sum at (0.5,0.4,0.2)",
                 mixed.conat_reports[0].achieved_epsilon, 1.1, 1e-9);
    ok &= holds(log, "MQ non-conforming at sum 1.1", !mixed.conat_reports[0].conforming);
    ok &= within(log, "PQ sum at (0.5,0.4,0.2)",
                 mixed.conat_reports[1].achieved_epsilon, 0.9, 1e-9);
    ok &= holds(log, "PQ conforming at sum 0.9", mixed.conat_reports[1].conforming);

    const ProtocolOutcome below = run(0.4, 0.3, 0.2999);
    ok &= holds(log, "MQ conforming just below one", below.conat_reports[0].conforming);
    const ProtocolOutcome above = run(0.4, 0.3, 0.3001);
    ok &= holds(log, "MQ non-conforming just above one",
                !above.conat_reports[0].conforming);
    return ok;
}

// 7. Degradation accumulates additively and matches the recursion oracle.
bool criterion_degradation(std::ostream& log) {
    bool ok = true;
    const int depth = 8;
    const DegradationTrace trace = iterate_composition(0.1, 0.1, 0.1, depth);

    // Independent arithmetic recursion: carried MQ epsilon grows by
    // eps1 + eps2 per level; the PQ channel stays at eps1 + eps2.
    double oracle_mq = 0.1;
    int oracle_depth = 0;
    bool oracle_alive = true;
    for (int level = 1; level <= depth; ++level) {
        oracle_mq = 0.1 + 0.1 + oracle_mq;
        const bool conforming = oracle_mq < 1.0 && 0.2 < 1.0;
        if (oracle_alive && conforming) {
            oracle_depth = level;
        } else {
            oracle_alive = false;
        }
        const DegradationLevel& at = trace.levels[level - 1];
        ok &= within(log, "sum_mq at level " + std::to_string(level), at.sum_mq, oracle_mq,
                     1e-12);
        ok &= within(log, "sum_pq at level " + std::to_string(level), at.sum_pq, 0.2, 1e-12);
        if (level > 1) {
            ok &= holds(log, "strictly increasing MQ sums",
                        at.sum_mq > trace.levels[level - 2].sum_mq);
        }
    }
    ok &= holds(log, "finite max depth", trace.max_depth == oracle_depth);
    ok &= within(log, "max depth value", trace.max_depth, 4.0, 0.0);

    const DegradationTrace ideal = iterate_composition(0.0, 0.0, 0.0, 5);
    ok &= holds(log, "no degradation for ideal components", ideal.max_depth == 5);
    for (const auto& level : ideal.levels) {
        ok &= holds(log, "ideal sums stay at zero", level.sum_mq < 1e-12);
    }
    return ok;
}

// 8. Correlation metrics: TMSV epsilons and post-teleportation bounds.
bool criterion_correlation_metrics(std::ostream& log) {
    bool ok = true;
    for (double r : {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}) {
        const CorrelationReport report = correlation_report(new_tmsv(r), 0, 1);
        ok &= within(log, "TMSV epsilon at r=" + format_double(r), report.epsilon,
                     std::exp(-2.0 * r), 1e-12);
        ok &= holds(log, "entangled verdict iff r > 0", report.entangled == (r > 0.0));
    }
    for (double r : {0.5, 1.0}) {
        for (double r_c : {0.5, 1.0}) {
            const double eps1 = std::exp(-2.0 * r);
            const double eps_c = std::exp(-2.0 * r_c) / 2.0;
            const ProtocolOutcome outcome =
                coherent_teleport(new_coherent(3.0, -2.0), ResourceSpec::tmsv(r),
                                  ConatChannelSpec::mq(r_c), ConatChannelSpec::pq(r_c));
            ok &= holds(log, "modes (1,3) within eps1+eps2+eps3",
                        outcome.correlation_reports[0].epsilon <=
                            eps1 + 2.0 * eps_c + 1e-9);
            ok &= holds(log, "modes (2,4) within eps1+eps3",
                        outcome.correlation_reports[1].epsilon <= eps1 + eps_c + 1e-9);
        }
    }
    return ok;
}

// 9. Measurement-based baseline at the classical limit and strong squeezing.
bool criterion_baseline(std::ostream& log) {
    bool ok = true;
    const GaussianState input = new_coherent(3.0, -2.0);
    const std::size_t trials = 100000;
    const double classical = average_bk_fidelity(input, ResourceSpec::tmsv(0.0), trials, 2024);
    ok &= within(log, "classical-limit average fidelity", classical, 0.5, 0.01);
    const double squeezed = average_bk_fidelity(input, ResourceSpec::tmsv(2.0), trials, 2025);
    ok &= holds(log, "average fidelity at r=2 is at least 0.96", squeezed >= 0.96);
    return ok;
}

// 10. Monte-Carlo oracle equivalence for every protocol at (r, r_c) = (1, 1).
bool criterion_oracle_equivalence(std::ostream& log) {
    bool ok = true;
    const GaussianState one = new_coherent(3.0, -2.0);
    const GaussianState two = tensor(new_coherent(3.0, -2.0), new_coherent(-1.0, 1.0));
    const double eps = std::exp(-2.0) / 2.0;

    std::vector<std::pair<std::string, ProtocolOutcome>> runs;
    runs.emplace_back("coherent teleportation",
                      coherent_teleport(one, ResourceSpec::tmsv(1.0), ConatChannelSpec::mq(1.0),
                                        ConatChannelSpec::pq(1.0)));
    runs.emplace_back("alternate teleportation",
                      alternate_coherent_teleport(one, ConatChannelSpec::pq(1.0),
                                                  ConatChannelSpec::mq(1.0)));
    runs.emplace_back("superdense coding", coherent_superdense(two, ResourceSpec::tmsv(1.0)));
    runs.emplace_back("teleportation via superdense",
                      compose_teleport_via_superdense(one, ResourceSpec::tmsv(1.0),
                                                      ResourceSpec::tmsv(1.0)));
    runs.emplace_back("superdense via teleportation",
                      compose_superdense_via_teleport(two, ResourceSpec::tmsv(1.0), eps, eps));

    std::uint64_t seed = 46290;
    for (const auto& [name, outcome] : runs) {
        const SampleBatch initial = sample_state(outcome.initial_state, 100000, seed++);
        const SampleBatch pushed = push(initial, outcome.end_to_end_map);
        const MomentVerdict verdict = compare_moments(pushed, outcome.final_state, 5.0);
        ok &= holds(log, name + " moments within 5 sigma (worst " + verdict.worst_entry +
                             ", |z| = " + format_double(verdict.max_abs_z) + ")",
                    verdict.pass);
    }
    return ok;
}

// 11. Structural suite: symplectic gates, physical outcomes, homodyne.
bool criterion_structural(std::ostream& log) {
    bool ok = true;
    ok &= holds(log, "reflection symplectic", is_symplectic(reflection().matrix, 1e-10));
    ok &= holds(log, "fourier symplectic", is_symplectic(fourier().matrix, 1e-10));
    ok &= holds(log, "inverse fourier symplectic",
                is_symplectic(fourier_inv().matrix, 1e-10));
    ok &= holds(log, "controlled-position symplectic",
                is_symplectic(controlled_x().matrix, 1e-10));
    ok &= holds(log, "inverse controlled-position symplectic",
                is_symplectic(controlled_x_inv().matrix, 1e-10));
    ok &= holds(log, "controlled-momentum symplectic",
                is_symplectic(controlled_p().matrix, 1e-10));
    ok &= holds(log, "beamsplitter symplectic",
                is_symplectic(beamsplitter_5050().matrix, 1e-10));
    for (double r : {0.3, 1.0, 2.5}) {
        ok &= holds(log, "squeezer symplectic",
                    is_symplectic(squeeze(r, Axis::Position).matrix, 1e-10));
    }
    ok &= holds(log, "embedded gate symplectic",
                is_symplectic(embed(controlled_p(), {3, 1}, 4).matrix, 1e-10));

    const GaussianState one = new_coherent(3.0, -2.0);
    const GaussianState two = tensor(new_coherent(3.0, -2.0), new_coherent(-1.0, 1.0));
    for (double r : {0.5, 1.0, 2.0}) {
        for (double r_c : {0.5, 1.0, 2.0}) {
            const double eps = std::exp(-2.0 * r_c) / 2.0;
            std::vector<ProtocolOutcome> outcomes;
            outcomes.push_back(coherent_teleport(one, ResourceSpec::tmsv(r),
                                                 ConatChannelSpec::mq(r_c),
                                                 ConatChannelSpec::pq(r_c)));
            outcomes.push_back(alternate_coherent_teleport(one, ConatChannelSpec::pq(r_c),
                                                           ConatChannelSpec::mq(r_c)));
            outcomes.push_back(coherent_superdense(two, ResourceSpec::tmsv(r)));
            outcomes.push_back(compose_teleport_via_superdense(one, ResourceSpec::tmsv(r),
                                                               ResourceSpec::tmsv(r)));
            outcomes.push_back(
                compose_superdense_via_teleport(two, ResourceSpec::tmsv(r), eps, eps));
            for (const auto& outcome : outcomes) {
                for (double nu : symplectic_eigenvalues(outcome.final_state)) {
                    ok &= holds(log, "symplectic eigenvalue >= 1/2", nu >= 0.5 - 1e-9);
                }
            }
        }
    }

    for (std::uint32_t seed = 900; seed < 910; ++seed) {
        const GaussianState state = conatsim::test::random_state(3, seed);
        const HomodyneResult result = homodyne(state, 0, seed % 2 ? Quad::X : Quad::P, seed);
        const GaussianState marginal = drop_modes(state, {0});
        for (Eigen::Index k = 0; k < marginal.cov().rows(); ++k) {
            ok &= holds(log, "homodyne never increases a conditional variance",
                        result.post_state.cov()(k, k) <= marginal.cov()(k, k) + 1e-12);
        }
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    int selected = 0;
    for (int k = 1; k < argc; ++k) {
        if (std::strcmp(argv[k], "--criterion") == 0 && k + 1 < argc) {
            selected = std::atoi(argv[k + 1]);
        }
    }

    const std::vector<Criterion> criteria = {
        {1, "conat conformance across the ancilla grid", criterion_conat_conformance},
        {2, "coherent-teleportation fidelity grid", criterion_teleport_fidelity},
        {3, "alternate-teleportation fidelity grid", criterion_alternate_fidelity},
        {4, "observable tables as exact coefficients", criterion_observable_tables},
        {5, "superdense channel certification", criterion_superdense_certification},
        {6, "composition epsilon sums", criterion_composition_sums},
        {7, "degradation recursion", criterion_degradation},
        {8, "correlation metrics", criterion_correlation_metrics},
        {9, "measurement-based baseline", criterion_baseline},
        {10, "Monte-Carlo oracle equivalence", criterion_oracle_equivalence},
        {11, "structural suite", criterion_structural},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (selected != 0 && criterion.number != selected) {
            continue;
        }
        std::ostringstream log;
        const bool pass = criterion.run(log);
        std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number
                  << ": " << criterion.title << log.str() << '\n';
        failures += pass ? 0 : 1;
    }
    return failures;
}
