#pragma once

#include <cstdint>
#include <string>

#include "conatsim/gaussian.hpp"

namespace conatsim {

/// Classical phase-space samples drawn from a Gaussian Wigner distribution.
/// Valid as an independent oracle here because every state and operation in
/// scope is Gaussian and every reported quantity is a first or second moment.
struct SampleBatch {
    Eigen::MatrixXd points;  // n_samples x 2 n_modes
    std::uint64_t seed = 0;
    std::string rng_name;

    std::size_t n_samples() const { return static_cast<std::size_t>(points.rows()); }
};

/// Draw n samples from the state's phase-space distribution. Sampling is
/// blocked; block k is seeded independently by (seed, k), so results do not
/// depend on how blocks are scheduled.
SampleBatch sample_state(const GaussianState& state, std::size_t n, std::uint64_t seed);

SampleBatch push(const SampleBatch& batch, const SymplecticOp& op);
/// Push through a recorded row map (initial symbols to output quadratures).
SampleBatch push(const SampleBatch& batch, const Eigen::MatrixXd& row_map);

struct MomentVerdict {
    bool pass = false;
    double max_abs_z = 0.0;
    std::string worst_entry;
};

/// Entry-wise z-scores of the batch's empirical mean and covariance against
/// the analytic state; passes when every |z| <= tolerance_sigmas. Requires
/// at least 1000 samples.
MomentVerdict compare_moments(const SampleBatch& batch, const GaussianState& state,
                              double tolerance_sigmas);

}  // namespace conatsim
