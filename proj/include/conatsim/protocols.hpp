#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conatsim/analysis.hpp"
#include "conatsim/conat.hpp"
#include "conatsim/gaussian.hpp"
#include "conatsim/trace.hpp"

namespace conatsim {

/// Entangled resource consumed by the protocols: a two-mode squeezed vacuum,
/// which is e^{-2r}-position-correlated with mean-zero relative position and
/// total momentum.
struct ResourceSpec {
    double r = 0.0;
    double implied_epsilon = 1.0;

    static ResourceSpec tmsv(double r);
    /// Resource pinned by its EPR variance directly.
    static ResourceSpec epsilon(double eps);
};

/// Everything a protocol run produces: the final register, who plays which
/// role, the noise-variance ledger, fidelity where defined, channel and
/// correlation verdicts, plus the end-to-end Heisenberg map for independent
/// verification (observable tables, Monte-Carlo pushes).
struct ProtocolOutcome {
    GaussianState final_state;
    std::map<std::string, ModeRef> role_map;
    std::map<std::string, double> noise_ledger;
    std::optional<double> fidelity;
    std::vector<ConatReport> conat_reports;
    std::vector<CorrelationReport> correlation_reports;

    GaussianState initial_state;
    Eigen::MatrixXd end_to_end_map;
    std::vector<ConatNoiseRows> channel_rows;
    /// Register rows right after resource preparation: the quadratures the
    /// observable tables are written in (inputs and resource modes).
    Eigen::MatrixXd start_rows;
};

/// Coherent teleportation: Alice reflects her half of the resource, couples
/// the input with a controlled-position displacement, then sends her first
/// mode through the MQ conat channel and her second through the PQ channel;
/// Bob folds both received modes into his half with controlled displacements.
/// Output modes are ordered (1..5) with mode 5 the teleported one.
ProtocolOutcome coherent_teleport(const GaussianState& input, const ResourceSpec& resource,
                                  const ConatChannel& mq, const ConatChannel& pq);
ProtocolOutcome coherent_teleport(const GaussianState& input, const ResourceSpec& resource,
                                  const ConatChannelSpec& mq, const ConatChannelSpec& pq);

/// Alternate coherent teleportation: PQ conat on the input, MQ conat on the
/// sender mode, then Bob's inverse controlled-position displacement. Output
/// modes ordered (1..3) with mode 2 the teleported one.
ProtocolOutcome alternate_coherent_teleport(const GaussianState& input, const ConatChannel& pq,
                                            const ConatChannel& mq);
ProtocolOutcome alternate_coherent_teleport(const GaussianState& input,
                                            const ConatChannelSpec& pq,
                                            const ConatChannelSpec& mq);

/// Coherent superdense coding on a two-mode input: realizes an MQ conat
/// channel between modes (1,3) and a PQ conat channel between modes (2,4),
/// each with epsilon equal to the resource's EPR variance.
ProtocolOutcome coherent_superdense(const GaussianState& inputs, const ResourceSpec& resource);

/// Composition: teleportation whose two conat channels are implemented by a
/// coherent superdense coding on a second resource.
ProtocolOutcome compose_teleport_via_superdense(const GaussianState& input,
                                                const ResourceSpec& resource1,
                                                const ResourceSpec& resource2);

/// Composition: superdense coding whose qunat channel is implemented by
/// alternate coherent teleportation over the given conat channels. The
/// channels run in their saturating realization so the composed channel
/// epsilons accumulate additively (eps1+eps2+eps3 for MQ, eps1+eps2 for PQ).
ProtocolOutcome compose_superdense_via_teleport(const GaussianState& inputs,
                                                const ResourceSpec& resource, double pq_epsilon,
                                                double mq_epsilon);
ProtocolOutcome compose_superdense_via_teleport(const GaussianState& inputs,
                                                const ResourceSpec& resource,
                                                const ConatChannelSpec& pq,
                                                const ConatChannelSpec& mq);

/// Measurement-based baseline: Alice couples the input to her half of the
/// resource exactly as in the coherent protocol, homodynes both of her modes
/// and feeds the outcomes forward; Bob displaces his mode. One seeded run;
/// the outcome fidelity is the overlap of the teleported mode with the input.
ProtocolOutcome standard_bk_teleport(const GaussianState& input, const ResourceSpec& resource,
                                     std::uint64_t seed);

/// Mean baseline fidelity over `trials` seeded runs.
double average_bk_fidelity(const GaussianState& input, const ResourceSpec& resource,
                           std::size_t trials, std::uint64_t seed);

/// Degradation study: at every level superdense coding is implemented through
/// alternate teleportation with a fresh resource (eps1), a fresh PQ channel
/// (eps2) and the MQ channel generated by the previous level (eps3). The
/// measured channel epsilons accumulate additively; max_depth is the last
/// level at which both generated channels are still conforming (< 1).
DegradationTrace iterate_composition(double eps1, double eps2, double eps3, int depth);

}  // namespace conatsim
