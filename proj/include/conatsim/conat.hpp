#pragma once

#include <optional>

#include "conatsim/gaussian.hpp"
#include "conatsim/trace.hpp"

namespace conatsim {

enum class ConatKind { PQ, MQ };

/// Parameters of a finitely-squeezed conat channel: a position-squeezed
/// ancilla with squeezing r_c coupled through a QND controlled displacement,
/// giving epsilon = e^{-2 r_c}/2. Approximate-conat status requires
/// 0 < epsilon < 1; larger values are representable but non-conforming.
struct ConatChannelSpec {
    ConatKind kind = ConatKind::PQ;
    double ancilla_squeezing = 0.0;
    double nominal_epsilon = 0.5;

    static ConatChannelSpec pq(double r_c);
    static ConatChannelSpec mq(double r_c);
};

/// A concrete realization of a conat channel: the ancilla that carries the
/// copy noise and, optionally, a second ancilla that injects independent
/// noise into the receiver's conjugate quadrature.
///
/// canonical()  - minimal realization: copy noise epsilon, conjugate
///                combination exactly zero.
/// saturating() - meets both channel conditions with equality (variance
///                epsilon in the copy noise and in the conjugate
///                combination), the worst conforming channel.
struct ConatChannel {
    ConatKind kind = ConatKind::PQ;
    GaussianState copy_ancilla;
    std::optional<GaussianState> conjugate_noise_ancilla;
    double nominal_epsilon = 0.5;

    static ConatChannel canonical(const ConatChannelSpec& spec);
    static ConatChannel with_ancilla(ConatKind kind, const GaussianState& ancilla);
    static ConatChannel saturating(ConatKind kind, double epsilon);
};

/// Verdict of the conat-condition checker for one channel use.
struct ConatReport {
    ConatKind kind = ConatKind::PQ;
    bool copies_exactly = false;
    double var_copy_noise = 0.0;
    double var_conjugate_combo = 0.0;
    double mean_copy_noise = 0.0;
    double mean_conjugate_combo = 0.0;
    double achieved_epsilon = 0.0;
    bool conforming = false;
};

/// Noise operators of one channel application, as rows over the recorder's
/// initial symbols. For a PQ channel: copy_noise = x_{B'} - x_in,
/// sender_disturbance = p_{A'} - p_in, receiver_conjugate = p_{B'};
/// for an MQ channel the roles of x and p swap.
struct ConatNoiseRows {
    ConatKind kind = ConatKind::PQ;
    Eigen::RowVectorXd copy_noise;
    Eigen::RowVectorXd sender_disturbance;
    Eigen::RowVectorXd receiver_conjugate;
    Eigen::RowVectorXd entry_copy_row;      // sender copy quadrature at entry
    Eigen::RowVectorXd sender_copy_after;   // same quadrature after the channel
};

struct ConatApplyResult {
    std::size_t sender_mode = 0;
    std::size_t receiver_mode = 0;
    std::optional<std::size_t> noise_mode;  // saturating realizations only
    ConatNoiseRows rows;
};

/// Run the channel on `mode` of the recorded register. Appends the ancilla
/// mode(s) and returns where the sender/receiver ended up plus the noise rows.
ConatApplyResult apply_conat(CircuitRecorder& recorder, std::size_t mode,
                             const ConatChannel& channel);

/// Channel conditions evaluated from recorded noise rows. `copies_exactly`
/// compares the sender's copy quadrature against its value at channel entry.
ConatReport report_from_rows(const CircuitRecorder& recorder, const ConatNoiseRows& rows);

// ---- state-level operations -------------------------------------------------

struct ConatApplication {
    GaussianState state;
    ModeRef sender;
    ModeRef receiver;
    /// Heisenberg map from (input modes + ancilla) to the output modes.
    Eigen::MatrixXd end_to_end_map;
    /// The input register extended with the prepared ancilla.
    GaussianState input_with_ancilla;
};

ConatApplication apply_pq_conat(const GaussianState& state, std::size_t mode,
                                const ConatChannelSpec& spec);
ConatApplication apply_mq_conat(const GaussianState& state, std::size_t mode,
                                const ConatChannelSpec& spec);
ConatApplication apply_pq_conat_with_ancilla(const GaussianState& state, std::size_t mode,
                                             const GaussianState& ancilla);
ConatApplication apply_mq_conat_with_ancilla(const GaussianState& state, std::size_t mode,
                                             const GaussianState& ancilla);

/// Check the conat conditions of an end-to-end Heisenberg map against input
/// moments. The channel input is the initial mode at the sender's index;
/// sender/receiver index the output side of the map.
ConatReport verify_conat(const Eigen::MatrixXd& end_to_end_map,
                         const GaussianState& input_moments, ConatKind kind,
                         std::size_t sender_mode, std::size_t receiver_mode);
ConatReport verify_conat(const SymplecticOp& end_to_end_map,
                         const GaussianState& input_moments, ConatKind kind,
                         std::size_t sender_mode, std::size_t receiver_mode);

}  // namespace conatsim
