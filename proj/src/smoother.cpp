#include "scalespace/smoother.hpp"

#include "scalespace/errors.hpp"

#include <algorithm>
#include <cmath>

namespace scalespace {

namespace {

double median_spacing(const std::vector<double>& times) {
    std::vector<double> gaps(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) gaps[i] = times[i + 1] - times[i];
    std::sort(gaps.begin(), gaps.end());
    const std::size_t m = gaps.size();
    return m % 2 == 1 ? gaps[m / 2] : 0.5 * (gaps[m / 2 - 1] + gaps[m / 2]);
}

std::size_t nearest_index(const std::vector<double>& grid, double target) {
    std::size_t best = 0;
    double best_dist = std::abs(grid[0] - target);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        double d = std::abs(grid[k] - target);
        if (d < best_dist) {
            best = k;
            best_dist = d;
        }
    }
    return best;
}

} // namespace

ScaleGrid make_scale_grid(const TimeSeries& series, int K, std::optional<double> h_min,
                          std::optional<double> h_max, const std::vector<double>& display) {
    validate_series(series);
    if (K < 1) throw Error(ErrorCategory::Input, "InvalidRange", "scale count K must be >= 1");

    const double lo = h_min.value_or(2.0 * median_spacing(series.times));
    const double hi = h_max.value_or(0.5 * (series.times.back() - series.times.front()));
    if (!(lo > 0.0) || (K > 1 && !(lo < hi)))
        throw Error(ErrorCategory::Input, "InvalidRange",
                    "need 0 < h_min < h_max for a multi-scale grid");

    ScaleGrid grid;
    grid.bandwidths.resize(K);
    if (K == 1) {
        grid.bandwidths[0] = lo;
    } else {
        const double log_lo = std::log(lo);
        const double log_step = (std::log(hi) - log_lo) / (K - 1);
        for (int k = 0; k < K; ++k) grid.bandwidths[k] = std::exp(log_lo + log_step * k);
        grid.bandwidths.front() = lo;
        grid.bandwidths.back() = hi;
    }

    std::vector<double> wanted = display;
    if (wanted.empty()) wanted = {hi, std::sqrt(lo * hi), lo};
    std::vector<std::size_t> picked;
    for (double target : wanted) {
        std::size_t idx = nearest_index(grid.bandwidths, target);
        if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
    }
    std::sort(picked.begin(), picked.end());
    for (std::size_t idx : picked) grid.display_scales.push_back(grid.bandwidths[idx]);
    return grid;
}

SmootherPair local_linear_smoother(const std::vector<double>& times, double h, double ridge) {
    if (!(h > 0.0)) throw Error(ErrorCategory::Input, "InvalidRange", "bandwidth must be > 0");
    const auto n = static_cast<Eigen::Index>(times.size());

    SmootherPair pair;
    pair.h = h;
    pair.smooth.resize(n, n);
    pair.deriv.resize(n, n);

    Eigen::VectorXd weight(n), offset(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double center = times[i];
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double x = times[j] - center;
            const double w = std::exp(-x * x / (2.0 * h * h));
            weight[j] = w;
            offset[j] = x;
            s0 += w;
            s1 += w * x;
            s2 += w * x * x;
        }
        if (!(s0 > 0.0))
            throw Error(ErrorCategory::Numerical, "DegenerateWindow",
                        "all kernel weights vanished at target " + std::to_string(i + 1));

        // condition of [[s0, s1], [s1, s2]] from its eigenvalues
        const double half_trace = 0.5 * (s0 + s2);
        const double disc = std::sqrt(0.25 * (s0 - s2) * (s0 - s2) + s1 * s1);
        const double eig_min = half_trace - disc;
        if (!(eig_min > 0.0) || (half_trace + disc) / eig_min > 1e12) s2 += ridge * h * h;

        const double det = s0 * s2 - s1 * s1;
        for (Eigen::Index j = 0; j < n; ++j) {
            pair.smooth(i, j) = weight[j] * (s2 - s1 * offset[j]) / det;
            pair.deriv(i, j) = weight[j] * (s0 * offset[j] - s1) / det;
        }
    }
    return pair;
}

DerivativeField push_draws(const PosteriorDraws& draws, const ScaleGrid& grid, double ridge) {
    const auto n = static_cast<Eigen::Index>(draws.times.size());
    if (draws.mu_draws.cols() != n)
        throw Error(ErrorCategory::Input, "DimensionMismatch",
                    "draw matrix width differs from the time grid");
    if (grid.bandwidths.empty())
        throw Error(ErrorCategory::Input, "DimensionMismatch", "empty scale grid");

    DerivativeField field;
    field.grid = grid;
    field.times = draws.times;
    const auto K = static_cast<Eigen::Index>(grid.size());
    field.deriv_draws.reserve(grid.size());
    field.smooth_means.resize(K, n);
    field.deriv_means.resize(K, n);

    const Eigen::VectorXd post_mean = draws.posterior_mean();
    for (Eigen::Index k = 0; k < K; ++k) {
        SmootherPair pair = local_linear_smoother(draws.times, grid.bandwidths[k], ridge);
        field.deriv_draws.push_back(draws.mu_draws * pair.deriv.transpose());
        field.smooth_means.row(k) = (pair.smooth * post_mean).transpose();
        field.deriv_means.row(k) = (pair.deriv * post_mean).transpose();
    }
    return field;
}

} // namespace scalespace
