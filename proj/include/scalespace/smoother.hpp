#pragma once

#include "scalespace/model.hpp"
#include "scalespace/series.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace scalespace {

/// The family of smoothing levels, geometrically spaced, plus up to three
/// distinguished display bandwidths (always snapped onto grid members).
struct ScaleGrid {
    std::vector<double> bandwidths;      ///< strictly increasing, > 0
    std::vector<double> display_scales;  ///< ascending subset of bandwidths

    std::size_t size() const { return bandwidths.size(); }
};

/// Per-level linear operators: S maps a signal to its smooth at the
/// observation times (rows sum to 1), D_h to its smoothed derivative
/// (rows sum to 0, exact on linear functions).
struct SmootherPair {
    double h = 0.0;
    Eigen::MatrixXd smooth;  ///< S, n x n
    Eigen::MatrixXd deriv;   ///< D_h, n x n, units 1/year
};

/// Smoothed-derivative draws and posterior-mean summaries for each scale.
struct DerivativeField {
    ScaleGrid grid;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> deriv_draws;  ///< per scale: M x n
    Eigen::MatrixXd smooth_means;              ///< K x n, S_h * postmean(mu)
    Eigen::MatrixXd deriv_means;               ///< K x n, D_h * postmean(mu)

    std::size_t scale_count() const { return deriv_draws.size(); }
};

/// K bandwidths geometrically spaced on [h_min, h_max]; defaults are
/// h_min = 2 * median spacing and h_max = half the time span. Display scales
/// default to the grid members nearest h_max, sqrt(h_min*h_max) and h_min.
ScaleGrid make_scale_grid(const TimeSeries& series, int K,
                          std::optional<double> h_min = std::nullopt,
                          std::optional<double> h_max = std::nullopt,
                          const std::vector<double>& display = {});

/// Local-linear fit with Gaussian kernel weights exp(-(t_j-t_i)^2 / (2h^2))
/// at every observation time. Row i of `smooth` is the fitted value at t_i
/// as a linear functional of the signal, row i of `deriv` the fitted slope.
/// The 2x2 normal-equation matrix gets ridge*h^2 added to its slope diagonal
/// entry only when its condition number exceeds 1e12.
SmootherPair local_linear_smoother(const std::vector<double>& times, double h, double ridge);

/// Push posterior draws through each scale's derivative operator:
/// Z_k = mu_draws * D_k^T, and record posterior-mean smooths per scale.
DerivativeField push_draws(const PosteriorDraws& draws, const ScaleGrid& grid, double ridge);

} // namespace scalespace
