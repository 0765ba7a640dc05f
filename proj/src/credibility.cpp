#include "scalespace/credibility.hpp"

#include "scalespace/errors.hpp"

#include <algorithm>
#include <numeric>

namespace scalespace {

namespace {

// Columns of draw values, length M each; shared by row- and map-mode selection.
struct CellColumns {
    std::vector<const double*> cols;
    Eigen::Index m = 0;
};

SignSelection select_cells(const CellColumns& cells, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw Error(ErrorCategory::Input, "LevelOutOfRange", "level must lie in (0, 1)");
    const auto n_cells = static_cast<Eigen::Index>(cells.cols.size());
    const Eigen::Index m_draws = cells.m;
    if (m_draws < 1)
        throw Error(ErrorCategory::Input, "DimensionMismatch", "need at least one draw");

    std::vector<double> q(n_cells);
    std::vector<int> sign(n_cells);
    for (Eigen::Index c = 0; c < n_cells; ++c) {
        Eigen::Index pos = 0, neg = 0;
        const double* col = cells.cols[c];
        for (Eigen::Index m = 0; m < m_draws; ++m) {
            if (col[m] > 0.0) ++pos;
            else if (col[m] < 0.0) ++neg;
        }
        // ties resolve toward +
        sign[c] = pos >= neg ? +1 : -1;
        q[c] = static_cast<double>(std::max(pos, neg)) / static_cast<double>(m_draws);
    }

    std::vector<int> order(n_cells);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (q[a] != q[b]) return q[a] > q[b];
        return a < b;
    });

    // Rank (1-based) of the first cell each draw violates; J(A_k) is then the
    // fraction of draws whose first violation lies beyond rank k.
    std::vector<Eigen::Index> first_violation(m_draws, n_cells + 1);
    for (Eigen::Index m = 0; m < m_draws; ++m) {
        for (Eigen::Index r = 0; r < n_cells; ++r) {
            const int c = order[r];
            const double v = cells.cols[c][m];
            const bool ok = sign[c] > 0 ? v > 0.0 : v < 0.0;
            if (!ok) {
                first_violation[m] = r + 1;
                break;
            }
        }
    }

    std::vector<Eigen::Index> hist(n_cells + 2, 0);
    for (Eigen::Index fv : first_violation) ++hist[fv];
    std::vector<Eigen::Index> survivors(n_cells + 1, 0);  // survivors[k] = #{m : fv > k}
    survivors[n_cells] = hist[n_cells + 1];
    for (Eigen::Index k = n_cells - 1; k >= 0; --k) survivors[k] = survivors[k + 1] + hist[k + 1];

    Eigen::Index k_star = 0;
    for (Eigen::Index k = n_cells; k >= 0; --k) {
        if (static_cast<double>(survivors[k]) / static_cast<double>(m_draws) >= level) {
            k_star = k;
            break;
        }
    }

    SignSelection result;
    result.joint_prob = static_cast<double>(survivors[k_star]) / static_cast<double>(m_draws);
    result.selected.reserve(k_star);
    result.signs.reserve(k_star);
    for (Eigen::Index r = 0; r < k_star; ++r) {
        result.selected.push_back(order[r]);
        result.signs.push_back(sign[order[r]]);
    }
    return result;
}

CellColumns columns_of(const Eigen::MatrixXd& draws) {
    CellColumns cells;
    cells.m = draws.rows();
    cells.cols.resize(draws.cols());
    for (Eigen::Index c = 0; c < draws.cols(); ++c) cells.cols[c] = draws.col(c).data();
    return cells;
}

} // namespace

SignProbs pointwise_sign_probs(const Eigen::MatrixXd& draws) {
    const Eigen::Index m_draws = draws.rows();
    if (m_draws < 1)
        throw Error(ErrorCategory::Input, "DimensionMismatch", "need at least one draw");
    SignProbs probs;
    probs.p_pos = (draws.array() > 0.0).cast<double>().colwise().mean();
    probs.p_neg = (draws.array() < 0.0).cast<double>().colwise().mean();
    return probs;
}

SignSelection joint_sign_selection(const Eigen::MatrixXd& draws, double level) {
    return select_cells(columns_of(draws), level);
}

CredibilityMap build_map(const DerivativeField& field, double level, JointMode joint_mode) {
    const auto K = static_cast<Eigen::Index>(field.scale_count());
    const auto n = static_cast<Eigen::Index>(field.times.size());
    if (K < 1 || n < 1)
        throw Error(ErrorCategory::Input, "DimensionMismatch", "empty derivative field");

    CredibilityMap map;
    map.bandwidths = field.grid.bandwidths;
    map.times = field.times;
    map.level = level;
    map.joint_mode = joint_mode;
    map.labels.assign(K, std::vector<CellLabel>(n, CellLabel::NoCredibleChange));
    map.p_pos.resize(K, n);
    map.p_neg.resize(K, n);
    map.selected_count.assign(K, 0);
    map.joint_prob.assign(K, 1.0);

    for (Eigen::Index k = 0; k < K; ++k) {
        SignProbs probs = pointwise_sign_probs(field.deriv_draws[k]);
        map.p_pos.row(k) = probs.p_pos.transpose();
        map.p_neg.row(k) = probs.p_neg.transpose();
    }

    auto apply = [&](Eigen::Index k, Eigen::Index i, int sign) {
        map.labels[k][i] = sign > 0 ? CellLabel::Increase : CellLabel::Decrease;
        ++map.selected_count[k];
    };

    if (joint_mode == JointMode::Row) {
        for (Eigen::Index k = 0; k < K; ++k) {
            SignSelection sel = joint_sign_selection(field.deriv_draws[k], level);
            map.joint_prob[k] = sel.joint_prob;
            for (std::size_t s = 0; s < sel.selected.size(); ++s)
                apply(k, sel.selected[s], sel.signs[s]);
        }
    } else {
        // one nested family over all K*n cells; cell index = k*n + i
        CellColumns cells;
        cells.m = field.deriv_draws[0].rows();
        cells.cols.reserve(K * n);
        for (Eigen::Index k = 0; k < K; ++k) {
            if (field.deriv_draws[k].rows() != cells.m)
                throw Error(ErrorCategory::Input, "DimensionMismatch",
                            "scales carry different draw counts");
            for (Eigen::Index i = 0; i < n; ++i)
                cells.cols.push_back(field.deriv_draws[k].col(i).data());
        }
        SignSelection sel = select_cells(cells, level);
        for (Eigen::Index k = 0; k < K; ++k) map.joint_prob[k] = sel.joint_prob;
        for (std::size_t s = 0; s < sel.selected.size(); ++s)
            apply(sel.selected[s] / n, sel.selected[s] % n, sel.signs[s]);
    }
    return map;
}

} // namespace scalespace
