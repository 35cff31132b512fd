#include "conatsim/trace.hpp"

#include <stdexcept>

namespace conatsim {

CircuitRecorder::CircuitRecorder(GaussianState initial)
    : initial_(std::move(initial)),
      rows_(Eigen::MatrixXd::Identity(initial_.mean().size(), initial_.mean().size())),
      labels_(initial_.labels()) {}

std::size_t CircuitRecorder::append_mode(const GaussianState& one_mode,
                                         const std::string& label) {
    if (one_mode.n_modes() != 1) {
        throw std::invalid_argument("append_mode: expected a single-mode state");
    }
    return append_state(one_mode, {label});
}

std::size_t CircuitRecorder::append_state(const GaussianState& state,
                                          const std::vector<std::string>& labels) {
    if (labels.size() != state.n_modes()) {
        throw std::invalid_argument("append_state: one label per appended mode expected");
    }
    GaussianState appended = tensor(initial_, state);
    const auto old_cols = rows_.cols();
    const auto old_rows = rows_.rows();
    const auto extra = state.mean().size();
    Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(old_rows + extra, old_cols + extra);
    grown.topLeftCorner(old_rows, old_cols) = rows_;
    grown.bottomRightCorner(extra, extra) = Eigen::MatrixXd::Identity(extra, extra);
    rows_ = std::move(grown);
    initial_ = std::move(appended);
    const std::size_t first = labels_.size();
    labels_.insert(labels_.end(), labels.begin(), labels.end());
    return first;
}

void CircuitRecorder::apply_on(const SymplecticOp& gate,
                               const std::vector<std::size_t>& modes) {
    const SymplecticOp wide = embed(gate, modes, n_modes());
    if (wide.displacement.cwiseAbs().maxCoeff() > 0.0) {
        throw std::invalid_argument("CircuitRecorder: displacements are not traceable rows");
    }
    rows_ = wide.matrix * rows_;
}

void CircuitRecorder::drop(const std::vector<std::size_t>& modes) {
    std::vector<std::size_t> sorted(modes);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("CircuitRecorder::drop: duplicate mode");
    }
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < n_modes(); ++k) {
        if (!std::binary_search(sorted.begin(), sorted.end(), k)) {
            kept.push_back(k);
        }
    }
    if (kept.empty()) {
        throw std::invalid_argument("CircuitRecorder::drop: cannot drop every mode");
    }
    for (std::size_t mode : sorted) {
        if (mode >= n_modes()) {
            throw std::invalid_argument("CircuitRecorder::drop: mode out of range");
        }
    }
    Eigen::MatrixXd next(2 * kept.size(), rows_.cols());
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < kept.size(); ++a) {
        next.row(2 * a) = rows_.row(2 * kept[a]);
        next.row(2 * a + 1) = rows_.row(2 * kept[a] + 1);
        labels.push_back(labels_[kept[a]]);
    }
    rows_ = std::move(next);
    labels_ = std::move(labels);
}

void CircuitRecorder::permute(const std::vector<std::size_t>& order) {
    if (order.size() != n_modes()) {
        throw std::invalid_argument("CircuitRecorder::permute: order must list every mode");
    }
    Eigen::MatrixXd next(rows_.rows(), rows_.cols());
    std::vector<std::string> labels(order.size());
    for (std::size_t a = 0; a < order.size(); ++a) {
        if (order[a] >= n_modes()) {
            throw std::invalid_argument("CircuitRecorder::permute: mode out of range");
        }
        next.row(2 * a) = rows_.row(2 * order[a]);
        next.row(2 * a + 1) = rows_.row(2 * order[a] + 1);
        labels[a] = labels_[order[a]];
    }
    rows_ = std::move(next);
    labels_ = std::move(labels);
}

Eigen::RowVectorXd CircuitRecorder::row(std::size_t mode, Quad quad) const {
    if (mode >= n_modes()) {
        throw std::invalid_argument("CircuitRecorder::row: mode out of range");
    }
    return rows_.row(2 * mode + (quad == Quad::X ? 0 : 1));
}

Eigen::RowVectorXd CircuitRecorder::symbol_row(std::size_t symbol_mode, Quad quad) const {
    if (symbol_mode >= n_symbol_modes()) {
        throw std::invalid_argument("CircuitRecorder::symbol_row: symbol out of range");
    }
    Eigen::RowVectorXd unit = Eigen::RowVectorXd::Zero(rows_.cols());
    unit(2 * symbol_mode + (quad == Quad::X ? 0 : 1)) = 1.0;
    return unit;
}

namespace {

// Rows recorded before later ancillas widened the register carry zero
// coefficients on the newer symbols.
Eigen::RowVectorXd pad_to(const Eigen::RowVectorXd& row, Eigen::Index cols) {
    if (row.cols() == cols) {
        return row;
    }
    if (row.cols() > cols) {
        throw std::invalid_argument("CircuitRecorder: row wider than the symbol register");
    }
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(cols);
    out.head(row.cols()) = row;
    return out;
}

}  // namespace

double CircuitRecorder::mean_of(const Eigen::RowVectorXd& row) const {
    return pad_to(row, initial_.mean().size()).dot(initial_.mean());
}

double CircuitRecorder::var_of(const Eigen::RowVectorXd& row) const {
    const Eigen::RowVectorXd padded = pad_to(row, initial_.mean().size());
    return padded.dot(initial_.cov() * padded.transpose());
}

double CircuitRecorder::second_moment_of(const Eigen::RowVectorXd& row) const {
    const double mean = mean_of(row);
    return var_of(row) + mean * mean;
}

GaussianState CircuitRecorder::state() const {
    Eigen::VectorXd mean = rows_ * initial_.mean();
    Eigen::MatrixXd cov = rows_ * initial_.cov() * rows_.transpose();
    return {std::move(mean), ((cov + cov.transpose()) / 2.0).eval(), labels_};
}

std::pair<std::size_t, std::size_t> append_tmsv(CircuitRecorder& recorder, double r,
                                                const std::string& label_a,
                                                const std::string& label_b) {
    if (r < 0.0) {
        throw std::invalid_argument("append_tmsv: squeezing parameter must be >= 0");
    }
    return append_epr_pair(recorder, std::exp(-2.0 * r), label_a, label_b);
}

std::pair<std::size_t, std::size_t> append_epr_pair(CircuitRecorder& recorder, double epsilon,
                                                    const std::string& label_a,
                                                    const std::string& label_b) {
    const std::size_t a =
        recorder.append_state(new_tmsv_epsilon(epsilon), {label_a, label_b});
    return {a, a + 1};
}

}  // namespace conatsim
