#include "conatsim/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "conatsim/rng.hpp"

namespace conatsim {

namespace {

double inf_norm(const Eigen::MatrixXd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_mode_index(std::size_t mode, std::size_t n_modes, const char* what) {
    if (mode >= n_modes) {
        std::ostringstream msg;
        msg << what << ": mode " << mode << " out of range for " << n_modes << " modes";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                             std::vector<std::string> labels)
    : mean_(std::move(mean)), cov_(std::move(cov)), labels_(std::move(labels)) {
    const auto dim = mean_.size();
    if (dim == 0 || dim % 2 != 0) {
        throw std::invalid_argument("GaussianState: mean must have even nonzero length");
    }
    if (cov_.rows() != dim || cov_.cols() != dim) {
        throw std::invalid_argument("GaussianState: covariance dimension mismatch");
    }
    const double scale = std::max(1.0, inf_norm(cov_));
    if (inf_norm(cov_ - cov_.transpose()) > 1e-12 * scale) {
        throw PhysicsError("GaussianState: covariance is not symmetric");
    }
    cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();

    // Uncertainty principle: cov + (i/2) Omega must be positive semidefinite.
    const auto n = static_cast<std::size_t>(dim) / 2;
    Eigen::MatrixXcd herm = cov_.cast<std::complex<double>>();
    herm += std::complex<double>(0.0, 0.5) * symplectic_form(n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kPhysicalTol * scale) {
        throw PhysicsError("GaussianState: uncertainty principle violated");
    }

    if (labels_.empty()) {
        labels_.resize(n);
    } else if (labels_.size() != n) {
        throw std::invalid_argument("GaussianState: one label per mode expected");
    }
}

void GaussianState::set_labels(std::vector<std::string> labels) {
    if (labels.size() != n_modes()) {
        throw std::invalid_argument("set_labels: one label per mode expected");
    }
    labels_ = std::move(labels);
}

SymplecticOp SymplecticOp::identity(std::size_t n_modes) {
    return {Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
            Eigen::VectorXd::Zero(2 * n_modes)};
}

SymplecticOp compose(const SymplecticOp& second, const SymplecticOp& first) {
    if (second.matrix.rows() != first.matrix.rows()) {
        throw std::invalid_argument("compose: operand dimensions differ");
    }
    return {second.matrix * first.matrix,
            second.matrix * first.displacement + second.displacement};
}

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

bool is_symplectic(const Eigen::MatrixXd& s, double tol) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0) {
        return false;
    }
    const auto n = static_cast<std::size_t>(s.rows()) / 2;
    const Eigen::MatrixXd omega = symplectic_form(n);
    return inf_norm(s * omega * s.transpose() - omega) <= tol;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
    const std::size_t n = state.n_modes();
    // Symplectic spectrum through the Hermitian matrix C^{1/2} (i Omega) C^{1/2},
    // whose eigenvalues are +-nu_k. Stable for semidefinite covariances too.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cov_solver(state.cov());
    Eigen::VectorXd vals = cov_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd root = cov_solver.eigenvectors() * vals.asDiagonal() *
                           cov_solver.eigenvectors().transpose();
    Eigen::MatrixXcd m = root.cast<std::complex<double>>() *
                         (std::complex<double>(0.0, 1.0) *
                          symplectic_form(n).cast<std::complex<double>>()) *
                         root.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    std::vector<double> nus;
    nus.reserve(n);
    for (Eigen::Index k = static_cast<Eigen::Index>(n); k < solver.eigenvalues().size(); ++k) {
        nus.push_back(solver.eigenvalues()(k));
    }
    std::sort(nus.begin(), nus.end());
    return nus;
}

GaussianState new_vacuum(std::size_t n_modes) {
    if (n_modes == 0) {
        throw std::invalid_argument("new_vacuum: need at least one mode");
    }
    return {Eigen::VectorXd::Zero(2 * n_modes),
            kVacuumVariance * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState new_coherent(double x0, double p0) {
    Eigen::VectorXd mean(2);
    mean << x0, p0;
    return {mean, kVacuumVariance * Eigen::MatrixXd::Identity(2, 2)};
}

GaussianState new_squeezed(double r, Axis axis) {
    if (r < 0.0) {
        throw std::invalid_argument("new_squeezed: squeezing parameter must be >= 0");
    }
    const double low = std::exp(-2.0 * r) / 2.0;
    const double high = std::exp(2.0 * r) / 2.0;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    if (axis == Axis::Position) {
        cov(0, 0) = low;
        cov(1, 1) = high;
    } else {
        cov(0, 0) = high;
        cov(1, 1) = low;
    }
    return {Eigen::VectorXd::Zero(2), cov};
}

GaussianState squeezed_to_variance(double var_x) {
    if (!(var_x > 0.0)) {
        throw std::invalid_argument("squeezed_to_variance: variance must be positive");
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = var_x;
    cov(1, 1) = 0.25 / var_x;
    return {Eigen::VectorXd::Zero(2), cov};
}

GaussianState new_tmsv(double r) {
    if (r < 0.0) {
        throw std::invalid_argument("new_tmsv: squeezing parameter must be >= 0");
    }
    return new_tmsv_epsilon(std::exp(-2.0 * r));
}

GaussianState new_tmsv_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw std::invalid_argument("new_tmsv_epsilon: EPR variance must be in (0, 1]");
    }
    // d = cosh(2r)/2, o = sinh(2r)/2 with e^{-2r} = epsilon, arranged so the
    // EPR combinations evaluate to epsilon with a single rounding: o is
    // stored as d - epsilon/2.
    const double v = epsilon;
    const double d = (1.0 / epsilon + v) / 4.0;
    const double o = d - v / 2.0;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
    cov(0, 0) = cov(1, 1) = cov(2, 2) = cov(3, 3) = d;
    cov(0, 2) = cov(2, 0) = o;
    cov(1, 3) = cov(3, 1) = -o;
    return {Eigen::VectorXd::Zero(4), cov};
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto da = a.mean().size();
    const auto db = b.mean().size();
    Eigen::VectorXd mean(da + db);
    mean << a.mean(), b.mean();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(da + db, da + db);
    cov.topLeftCorner(da, da) = a.cov();
    cov.bottomRightCorner(db, db) = b.cov();
    std::vector<std::string> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return {std::move(mean), std::move(cov), std::move(labels)};
}

GaussianState apply(const GaussianState& state, const SymplecticOp& op) {
    if (op.matrix.rows() != state.mean().size()) {
        throw std::invalid_argument("apply: operator and state dimensions differ");
    }
    Eigen::VectorXd mean = op.matrix * state.mean() + op.displacement;
    Eigen::MatrixXd cov = op.matrix * state.cov() * op.matrix.transpose();
    return {std::move(mean), std::move(cov), state.labels()};
}

SymplecticOp embed(const SymplecticOp& op, const std::vector<std::size_t>& target_modes,
                   std::size_t total_modes) {
    if (target_modes.size() != op.n_modes()) {
        throw std::invalid_argument("embed: operator arity does not match target list");
    }
    std::set<std::size_t> seen;
    for (std::size_t mode : target_modes) {
        check_mode_index(mode, total_modes, "embed");
        if (!seen.insert(mode).second) {
            throw std::invalid_argument("embed: duplicate target mode");
        }
    }
    SymplecticOp out = SymplecticOp::identity(total_modes);
    for (std::size_t a = 0; a < target_modes.size(); ++a) {
        out.displacement.segment<2>(2 * target_modes[a]) = op.displacement.segment<2>(2 * a);
        for (std::size_t b = 0; b < target_modes.size(); ++b) {
            out.matrix.block<2, 2>(2 * target_modes[a], 2 * target_modes[b]) =
                op.matrix.block<2, 2>(2 * a, 2 * b);
        }
    }
    return out;
}

GaussianState drop_modes(const GaussianState& state, std::vector<std::size_t> modes) {
    const std::size_t n = state.n_modes();
    std::sort(modes.begin(), modes.end());
    if (std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
        throw std::invalid_argument("drop_modes: duplicate mode");
    }
    for (std::size_t mode : modes) {
        check_mode_index(mode, n, "drop_modes");
    }
    if (modes.size() == n) {
        throw std::invalid_argument("drop_modes: cannot drop every mode");
    }
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::binary_search(modes.begin(), modes.end(), k)) {
            kept.push_back(k);
        }
    }
    const auto m = static_cast<Eigen::Index>(kept.size());
    Eigen::VectorXd mean(2 * m);
    Eigen::MatrixXd cov(2 * m, 2 * m);
    std::vector<std::string> labels;
    for (Eigen::Index a = 0; a < m; ++a) {
        labels.push_back(state.labels()[kept[a]]);
        mean.segment<2>(2 * a) = state.mean().segment<2>(2 * kept[a]);
        for (Eigen::Index b = 0; b < m; ++b) {
            cov.block<2, 2>(2 * a, 2 * b) =
                state.cov().block<2, 2>(2 * kept[a], 2 * kept[b]);
        }
    }
    return {std::move(mean), std::move(cov), std::move(labels)};
}

GaussianState permute_modes(const GaussianState& state, const std::vector<std::size_t>& order) {
    const std::size_t n = state.n_modes();
    if (order.size() != n) {
        throw std::invalid_argument("permute_modes: order must list every mode once");
    }
    std::set<std::size_t> seen(order.begin(), order.end());
    if (seen.size() != n || *seen.rbegin() != n - 1) {
        throw std::invalid_argument("permute_modes: order is not a permutation");
    }
    Eigen::VectorXd mean(2 * n);
    Eigen::MatrixXd cov(2 * n, 2 * n);
    std::vector<std::string> labels(n);
    for (std::size_t a = 0; a < n; ++a) {
        labels[a] = state.labels()[order[a]];
        mean.segment<2>(2 * a) = state.mean().segment<2>(2 * order[a]);
        for (std::size_t b = 0; b < n; ++b) {
            cov.block<2, 2>(2 * a, 2 * b) =
                state.cov().block<2, 2>(2 * order[a], 2 * order[b]);
        }
    }
    return {std::move(mean), std::move(cov), std::move(labels)};
}

Eigen::VectorXd expr_vector(const QuadExpr& expr, std::size_t n_modes) {
    if (expr.empty()) {
        throw std::invalid_argument("expr_vector: empty quadrature expression");
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n_modes);
    for (const auto& term : expr) {
        check_mode_index(term.mode, n_modes, "quadrature expression");
        c(2 * term.mode + (term.quad == Quad::X ? 0 : 1)) += term.coeff;
    }
    return c;
}

MeanVar quad_stats(const GaussianState& state, const QuadExpr& expr) {
    const Eigen::VectorXd c = expr_vector(expr, state.n_modes());
    return {c.dot(state.mean()), c.dot(state.cov() * c)};
}

HomodyneResult homodyne(const GaussianState& state, std::size_t mode, Quad quad,
                        std::uint64_t seed) {
    check_mode_index(mode, state.n_modes(), "homodyne");
    if (state.n_modes() < 2) {
        throw std::invalid_argument("homodyne: measuring the only mode leaves no state");
    }
    const Eigen::Index q = 2 * static_cast<Eigen::Index>(mode) + (quad == Quad::X ? 0 : 1);
    const double marginal_var = state.cov()(q, q);
    if (marginal_var < 1e-14) {
        throw PhysicsError("homodyne: marginal variance is numerically singular");
    }
    rng::NormalStream normals(seed, 0);
    const double outcome = state.mean()(q) + std::sqrt(marginal_var) * normals.next();

    const Eigen::VectorXd column = state.cov().col(q);
    const Eigen::VectorXd mean =
        state.mean() + column * ((outcome - state.mean()(q)) / marginal_var);
    const Eigen::MatrixXd cov = state.cov() - (column * column.transpose()) / marginal_var;

    // The measured mode is consumed; slice it out before rebuilding the state.
    const std::size_t n = state.n_modes();
    Eigen::VectorXd kept_mean(2 * (n - 1));
    Eigen::MatrixXd kept_cov(2 * (n - 1), 2 * (n - 1));
    std::vector<std::string> labels;
    std::vector<Eigen::Index> kept;
    for (std::size_t m = 0; m < n; ++m) {
        if (m != mode) {
            kept.push_back(static_cast<Eigen::Index>(m));
            labels.push_back(state.labels()[m]);
        }
    }
    for (std::size_t a = 0; a < kept.size(); ++a) {
        kept_mean.segment<2>(2 * a) = mean.segment<2>(2 * kept[a]);
        for (std::size_t b = 0; b < kept.size(); ++b) {
            kept_cov.block<2, 2>(2 * a, 2 * b) = cov.block<2, 2>(2 * kept[a], 2 * kept[b]);
        }
    }
    return {outcome, GaussianState(std::move(kept_mean),
                                   ((kept_cov + kept_cov.transpose()) / 2.0).eval(),
                                   std::move(labels))};
}

namespace {

SymplecticOp one_mode_op(double a, double b, double c, double d) {
    Eigen::MatrixXd s(2, 2);
    s << a, b, c, d;
    return {s, Eigen::VectorXd::Zero(2)};
}

}  // namespace

SymplecticOp reflection() { return one_mode_op(-1.0, 0.0, 0.0, -1.0); }

SymplecticOp fourier() { return one_mode_op(0.0, -1.0, 1.0, 0.0); }

SymplecticOp fourier_inv() { return one_mode_op(0.0, 1.0, -1.0, 0.0); }

SymplecticOp controlled_x() {
    Eigen::MatrixXd s(4, 4);
    s << 1, 0, 0, 0,
         0, 1, 0, -1,
         1, 0, 1, 0,
         0, 0, 0, 1;
    return {s, Eigen::VectorXd::Zero(4)};
}

SymplecticOp controlled_x_inv() {
    Eigen::MatrixXd s(4, 4);
    s << 1, 0, 0, 0,
         0, 1, 0, 1,
         -1, 0, 1, 0,
         0, 0, 0, 1;
    return {s, Eigen::VectorXd::Zero(4)};
}

SymplecticOp controlled_p() {
    Eigen::MatrixXd s(4, 4);
    s << 1, 0, -1, 0,
         0, 1, 0, 0,
         0, 0, 1, 0,
         0, 1, 0, 1;
    return {s, Eigen::VectorXd::Zero(4)};
}

SymplecticOp beamsplitter_5050() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd s(4, 4);
    s << inv_sqrt2, 0, inv_sqrt2, 0,
         0, inv_sqrt2, 0, inv_sqrt2,
         inv_sqrt2, 0, -inv_sqrt2, 0,
         0, inv_sqrt2, 0, -inv_sqrt2;
    return {s, Eigen::VectorXd::Zero(4)};
}

SymplecticOp squeeze(double r, Axis axis) {
    if (r < 0.0) {
        throw std::invalid_argument("squeeze: squeezing parameter must be >= 0");
    }
    const double contract = std::exp(-r);
    const double expand = std::exp(r);
    return axis == Axis::Position ? one_mode_op(contract, 0.0, 0.0, expand)
                                  : one_mode_op(expand, 0.0, 0.0, contract);
}

SymplecticOp displacement(double dx, double dp) {
    SymplecticOp op = SymplecticOp::identity(1);
    op.displacement << dx, dp;
    return op;
}

}  // namespace conatsim
