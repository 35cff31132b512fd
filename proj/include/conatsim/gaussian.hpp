#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "conatsim/errors.hpp"

namespace conatsim {

/// Quadrature units: [x, p] = i, vacuum variance 1/2 per quadrature.
/// Two independent vacua therefore give Var(x_A - x_B) = 1, so the
/// epsilon = 1 correlation threshold coincides with the Duan separable
/// bound. Vectors are ordered (x1, p1, x2, p2, ...).
inline constexpr double kVacuumVariance = 0.5;

/// Structural tolerance (symplectic condition, matrix symmetry).
inline constexpr double kStructuralTol = 1e-10;
/// Physical tolerance (uncertainty principle, variance identities).
inline constexpr double kPhysicalTol = 1e-9;

enum class Axis { Position, Momentum };
enum class Quad { X, P };

/// Reference to a mode inside some state: position plus a free-text role tag.
struct ModeRef {
    std::size_t index = 0;
    std::string label;
};

/// Second-moment description of an n-mode Gaussian state.
///
/// Invariants enforced on construction:
///  - cov symmetric (to 1e-12, then symmetrized exactly),
///  - cov + (i/2) Omega positive semidefinite up to a scale-aware
///    tolerance (uncertainty principle).
class GaussianState {
  public:
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                  std::vector<std::string> labels = {});

    std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size()) / 2; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cov() const { return cov_; }
    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);

  private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
    std::vector<std::string> labels_;
};

/// Linear phase-space map r -> S r + d. Heisenberg action of a Gaussian
/// unitary; S must satisfy S Omega S^T = Omega.
struct SymplecticOp {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd displacement;

    std::size_t n_modes() const { return static_cast<std::size_t>(matrix.rows()) / 2; }
    static SymplecticOp identity(std::size_t n_modes);
};

/// second `apply`d after first, as one op: (S2 S1, S2 d1 + d2).
SymplecticOp compose(const SymplecticOp& second, const SymplecticOp& first);

/// Block-diagonal symplectic form with 2x2 blocks [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(std::size_t n_modes);
bool is_symplectic(const Eigen::MatrixXd& s, double tol = kStructuralTol);

/// Williamson spectrum of the state's covariance; every value is >= 1/2
/// for a physical state, and exactly 1/2 for each pure degree of freedom.
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

// ---- state factories ------------------------------------------------------

GaussianState new_vacuum(std::size_t n_modes);
GaussianState new_coherent(double x0, double p0);

/// Minimum-uncertainty squeezed vacuum. Position axis:
/// Var(x) = e^{-2r}/2, Var(p) = e^{+2r}/2; momentum axis reversed.
GaussianState new_squeezed(double r, Axis axis);

/// Minimum-uncertainty single mode with Var(x) = var_x, Var(p) = 1/(4 var_x).
/// Same family as new_squeezed but parameterized by the target variance,
/// which keeps the stored entry exact for variance-level assertions.
GaussianState squeezed_to_variance(double var_x);

/// Two-mode squeezed vacuum: per-mode covariance (cosh 2r)/2 I, cross block
/// (sinh 2r)/2 diag(1,-1), so Var(x_A - x_B) = Var(p_A + p_B) = e^{-2r}.
GaussianState new_tmsv(double r);

/// Same state pinned by its EPR variance epsilon = e^{-2r} directly. The
/// stored entries are arranged so the EPR combinations evaluate to epsilon
/// with a single rounding even under strong squeezing.
GaussianState new_tmsv_epsilon(double epsilon);

GaussianState tensor(const GaussianState& a, const GaussianState& b);
GaussianState apply(const GaussianState& state, const SymplecticOp& op);

/// Expand `op` so it acts on `target_modes` of a `total_modes`-wide register
/// and as the identity elsewhere.
SymplecticOp embed(const SymplecticOp& op, const std::vector<std::size_t>& target_modes,
                   std::size_t total_modes);

/// Gaussian partial trace: remove the listed modes.
GaussianState drop_modes(const GaussianState& state, std::vector<std::size_t> modes);

/// Reorder modes so that new mode k is old mode order[k].
GaussianState permute_modes(const GaussianState& state, const std::vector<std::size_t>& order);

// ---- quadrature expressions ----------------------------------------------

struct QuadTerm {
    std::size_t mode = 0;
    Quad quad = Quad::X;
    double coeff = 1.0;
};
using QuadExpr = std::vector<QuadTerm>;

Eigen::VectorXd expr_vector(const QuadExpr& expr, std::size_t n_modes);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance of a linear combination of quadratures.
MeanVar quad_stats(const GaussianState& state, const QuadExpr& expr);

// ---- homodyne measurement --------------------------------------------------

struct HomodyneResult {
    double outcome = 0.0;
    GaussianState post_state;
};

/// Measure one quadrature of `mode`: sample the Gaussian marginal with the
/// seeded generator, condition the remaining modes (Schur complement on the
/// measured quadrature) and remove the measured mode.
HomodyneResult homodyne(const GaussianState& state, std::size_t mode, Quad quad,
                        std::uint64_t seed);

// ---- gate constructors ------------------------------------------------------

/// x -> -x, p -> -p on one mode.
SymplecticOp reflection();
/// x -> -p, p -> x. Four applications give the identity.
SymplecticOp fourier();
SymplecticOp fourier_inv();
/// Controlled-position displacement (QND sum gate), mode 1 controls mode 2:
/// x1 -> x1, p1 -> p1 - p2, x2 -> x2 + x1, p2 -> p2.
SymplecticOp controlled_x();
SymplecticOp controlled_x_inv();
/// Controlled-momentum displacement:
/// x1 -> x1 - x2, p1 -> p1, x2 -> x2, p2 -> p2 + p1.
SymplecticOp controlled_p();
/// 50:50 beamsplitter: x1,2 -> (x1 +- x2)/sqrt(2), same for p.
SymplecticOp beamsplitter_5050();
SymplecticOp squeeze(double r, Axis axis);
/// Phase-space displacement of a single mode by (dx, dp).
SymplecticOp displacement(double dx, double dp);

}  // namespace conatsim
