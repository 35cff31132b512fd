#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conatsim/gaussian.hpp"

namespace conatsim {

/// Records a Gaussian circuit as a row map: every current quadrature is a
/// linear combination of the quadratures the register started with (inputs
/// plus each ancilla at its preparation moment). Variances of noise
/// combinations are then sums over the block-diagonal initial covariance,
/// which keeps strongly squeezed terms exact instead of cancelling inside
/// an assembled covariance matrix.
class CircuitRecorder {
  public:
    explicit CircuitRecorder(GaussianState initial);

    /// Tensor a fresh mode onto the register; returns its mode index.
    std::size_t append_mode(const GaussianState& one_mode, const std::string& label);

    /// Tensor a multi-mode state onto the register; returns the index of its
    /// first mode.
    std::size_t append_state(const GaussianState& state,
                             const std::vector<std::string>& labels);

    /// Apply `gate` to the listed modes (embedding it into the full width).
    void apply_on(const SymplecticOp& gate, const std::vector<std::size_t>& modes);

    void drop(const std::vector<std::size_t>& modes);
    void permute(const std::vector<std::size_t>& order);

    std::size_t n_modes() const { return labels_.size(); }
    std::size_t n_symbol_modes() const { return initial_.n_modes(); }

    /// Current quadrature of a mode as a row over the initial symbols.
    Eigen::RowVectorXd row(std::size_t mode, Quad quad) const;
    /// Unit row selecting one initial symbol.
    Eigen::RowVectorXd symbol_row(std::size_t symbol_mode, Quad quad) const;

    double mean_of(const Eigen::RowVectorXd& row) const;
    double var_of(const Eigen::RowVectorXd& row) const;
    double second_moment_of(const Eigen::RowVectorXd& row) const;

    /// Assembled moments of the current register.
    GaussianState state() const;
    const GaussianState& initial_state() const { return initial_; }
    const Eigen::MatrixXd& row_map() const { return rows_; }
    const std::vector<std::string>& labels() const { return labels_; }

  private:
    GaussianState initial_;
    Eigen::MatrixXd rows_;
    std::vector<std::string> labels_;
};

/// Append a two-mode squeezed vacuum built from two single-mode squeezers and
/// a 50:50 beamsplitter, so that Var(x_A - x_B) = Var(p_A + p_B) evaluates
/// exactly to the prepared squeezed variances. Returns the two mode indices.
std::pair<std::size_t, std::size_t> append_tmsv(CircuitRecorder& recorder, double r,
                                                const std::string& label_a,
                                                const std::string& label_b);

/// Same construction with the EPR variance given directly:
/// Var(x_A - x_B) = Var(p_A + p_B) = epsilon.
std::pair<std::size_t, std::size_t> append_epr_pair(CircuitRecorder& recorder, double epsilon,
                                                    const std::string& label_a,
                                                    const std::string& label_b);

}  // namespace conatsim
