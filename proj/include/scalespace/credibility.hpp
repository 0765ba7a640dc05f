#pragma once

#include "scalespace/smoother.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace scalespace {

enum class CellLabel { NoCredibleChange, Increase, Decrease };

inline const char* to_string(CellLabel label) {
    switch (label) {
    case CellLabel::Increase: return "inc";
    case CellLabel::Decrease: return "dec";
    case CellLabel::NoCredibleChange: return "none";
    }
    return "none";
}

enum class JointMode { Row, Map };

inline const char* to_string(JointMode mode) { return mode == JointMode::Row ? "row" : "map"; }

/// Pointwise posterior sign probabilities: fraction of draws strictly
/// positive / strictly negative per column; exact zeros count in neither.
struct SignProbs {
    Eigen::VectorXd p_pos;
    Eigen::VectorXd p_neg;
};

SignProbs pointwise_sign_probs(const Eigen::MatrixXd& draws);

/// Result of the nested highest-pointwise-probability selection.
struct SignSelection {
    std::vector<int> selected;  ///< cell indices, in rank order
    std::vector<int> signs;     ///< +1 / -1 per selected cell
    double joint_prob = 1.0;    ///< empirical joint probability of the set
};

/// Simultaneous sign statement over columns of `draws`: rank cells by their
/// pointwise sign probability, grow the nested family A_1 c A_2 c ..., and
/// keep the largest prefix whose empirical joint probability
///     J(A_k) = #{draws matching every candidate sign in A_k} / M
/// still reaches `level`. J is non-increasing along the nested family, which
/// is what makes the largest-prefix search well defined.
SignSelection joint_sign_selection(const Eigen::MatrixXd& draws, double level);

/// The scale-space credibility map: one row per bandwidth, one column per
/// observation time.
struct CredibilityMap {
    std::vector<double> bandwidths;              ///< K
    std::vector<double> times;                   ///< n
    std::vector<std::vector<CellLabel>> labels;  ///< K x n
    Eigen::MatrixXd p_pos;                       ///< K x n
    Eigen::MatrixXd p_neg;                       ///< K x n
    double level = 0.95;
    JointMode joint_mode = JointMode::Row;
    std::vector<int> selected_count;             ///< per row
    std::vector<double> joint_prob;              ///< per row; map mode stores the global value

    std::size_t scale_count() const { return bandwidths.size(); }
    std::size_t time_count() const { return times.size(); }
};

/// Row mode runs the joint selection independently per scale row; map mode
/// runs one selection over all K*n cells at once.
CredibilityMap build_map(const DerivativeField& field, double level, JointMode joint_mode);

} // namespace scalespace
