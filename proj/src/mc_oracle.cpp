#include "conatsim/mc_oracle.hpp"

#include <cmath>
#include <sstream>

#include "conatsim/rng.hpp"

namespace conatsim {

SampleBatch sample_state(const GaussianState& state, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_state: need at least one sample");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(state.cov());
    if (llt.info() != Eigen::Success) {
        const auto dim = state.cov().rows();
        llt.compute(state.cov() + 1e-12 * Eigen::MatrixXd::Identity(dim, dim));
        if (llt.info() != Eigen::Success) {
            throw PhysicsError("sample_state: covariance is indefinite");
        }
    }
    const Eigen::MatrixXd root = llt.matrixL();
    const auto dim = state.mean().size();

    SampleBatch batch;
    batch.seed = seed;
    batch.rng_name = rng::kAlgorithmName;
    batch.points.resize(static_cast<Eigen::Index>(n), dim);
    const std::size_t n_blocks = (n + rng::kBlockSize - 1) / rng::kBlockSize;
    for (std::size_t block = 0; block < n_blocks; ++block) {
        rng::NormalStream normals(seed, block);
        const std::size_t begin = block * rng::kBlockSize;
        const std::size_t end = std::min(n, begin + rng::kBlockSize);
        Eigen::VectorXd z(dim);
        for (std::size_t row = begin; row < end; ++row) {
            for (Eigen::Index k = 0; k < dim; ++k) {
                z(k) = normals.next();
            }
            batch.points.row(static_cast<Eigen::Index>(row)) =
                (state.mean() + root * z).transpose();
        }
    }
    return batch;
}

SampleBatch push(const SampleBatch& batch, const SymplecticOp& op) {
    if (op.matrix.cols() != batch.points.cols()) {
        throw std::invalid_argument("push: operator and batch dimensions differ");
    }
    SampleBatch out = batch;
    out.points = (batch.points * op.matrix.transpose()).rowwise() +
                 op.displacement.transpose();
    return out;
}

SampleBatch push(const SampleBatch& batch, const Eigen::MatrixXd& row_map) {
    if (row_map.cols() != batch.points.cols()) {
        throw std::invalid_argument("push: row map and batch dimensions differ");
    }
    SampleBatch out = batch;
    out.points = batch.points * row_map.transpose();
    return out;
}

MomentVerdict compare_moments(const SampleBatch& batch, const GaussianState& state,
                              double tolerance_sigmas) {
    if (batch.points.cols() != state.mean().size()) {
        throw std::invalid_argument("compare_moments: dimension mismatch");
    }
    if (batch.n_samples() < 1000) {
        throw std::invalid_argument("compare_moments: need >= 1000 samples");
    }
    const double n = static_cast<double>(batch.n_samples());
    const Eigen::VectorXd emp_mean = batch.points.colwise().mean();
    const Eigen::MatrixXd centered = batch.points.rowwise() - emp_mean.transpose();
    const Eigen::MatrixXd emp_cov = centered.transpose() * centered / (n - 1.0);

    MomentVerdict verdict;
    verdict.pass = true;
    const auto dim = state.mean().size();
    const auto consider = [&](double z, const std::string& what) {
        if (std::abs(z) > verdict.max_abs_z) {
            verdict.max_abs_z = std::abs(z);
            verdict.worst_entry = what;
        }
    };
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double se = std::sqrt(state.cov()(i, i) / n);
        if (se > 0.0) {
            std::ostringstream what;
            what << "mean[" << i << "]";
            consider((emp_mean(i) - state.mean()(i)) / se, what.str());
        }
        for (Eigen::Index j = i; j < dim; ++j) {
            // Gaussian fourth-moment formula for the sample-covariance SE.
            const double var_c = (state.cov()(i, i) * state.cov()(j, j) +
                                  state.cov()(i, j) * state.cov()(i, j)) /
                                 (n - 1.0);
            if (var_c > 0.0) {
                std::ostringstream what;
                what << "cov[" << i << "," << j << "]";
                consider((emp_cov(i, j) - state.cov()(i, j)) / std::sqrt(var_c), what.str());
            }
        }
    }
    verdict.pass = verdict.max_abs_z <= tolerance_sigmas;
    return verdict;
}

}  // namespace conatsim
