#include "scalespace/model.hpp"

#include "scalespace/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace scalespace {

void validate_config(const ModelConfig& config) {
    if (!(config.a0 > 0.0 && config.b0 > 0.0 && config.a_lam > 0.0 && config.b_lam > 0.0))
        throw Error(ErrorCategory::Input, "InvalidConfig", "hyperprior shapes/rates must be > 0");
    if (!(std::abs(config.rho) < 1.0))
        throw Error(ErrorCategory::Input, "RhoOutOfRange", "rho must lie in (-1, 1)");
    if (config.burn_in < 0 || config.n_draws < 1 || config.thin < 1)
        throw Error(ErrorCategory::Input, "InvalidConfig",
                    "need burn_in >= 0, n_draws >= 1, thin >= 1");
    if (config.ridge < 0.0)
        throw Error(ErrorCategory::Input, "InvalidConfig", "ridge must be >= 0");
}

Eigen::MatrixXd second_difference_operator(const std::vector<double>& times) {
    const auto n = static_cast<Eigen::Index>(times.size());
    if (n < 3)
        throw Error(ErrorCategory::Input, "TooFewPoints",
                    "second differences need at least 3 points");
    Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(n - 2, n);
    for (Eigen::Index i = 0; i + 2 < n; ++i) {
        const double d01 = times[i + 1] - times[i];
        const double d12 = times[i + 2] - times[i + 1];
        const double d02 = times[i + 2] - times[i];
        if (!(d01 > 0.0) || !(d12 > 0.0))
            throw Error(ErrorCategory::Input, "DegenerateSpacing",
                        "duplicate or decreasing times at index " + std::to_string(i + 1));
        diff(i, i) = 2.0 / (d01 * d02);
        diff(i, i + 1) = -2.0 / (d01 * d12);
        diff(i, i + 2) = 2.0 / (d12 * d02);
    }
    return diff;
}

ErrorCovariance error_covariance(const TimeSeries& series, double rho) {
    if (!(std::abs(rho) < 1.0))
        throw Error(ErrorCategory::Input, "RhoOutOfRange", "rho must lie in (-1, 1)");
    const auto n = static_cast<Eigen::Index>(series.size());
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
    if (series.stderrs)
        for (Eigen::Index i = 0; i < n; ++i) scale[i] = (*series.stderrs)[i];

    ErrorCovariance cov;
    cov.sigma.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            cov.sigma(i, j) = scale[i] * scale[j] * std::pow(rho, std::abs(double(i - j)));

    Eigen::LLT<Eigen::MatrixXd> llt(cov.sigma);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCategory::Numerical, "CholeskyFailure",
                    "error covariance is not positive definite");
    cov.chol = llt.matrixL();
    return cov;
}

GibbsChain::GibbsChain(const TimeSeries& series, const ModelConfig& config)
    : config_(config),
      y_(Eigen::Map<const Eigen::VectorXd>(series.values.data(),
                                           static_cast<Eigen::Index>(series.values.size()))),
      diff_(second_difference_operator(series.times)),
      cov_(error_covariance(series, config.rho)),
      rng_(config.seed) {
    validate_config(config);
    penalty_ = diff_.transpose() * diff_;
    const auto n = y_.size();
    sigma_inv_ = cov_.chol.transpose().triangularView<Eigen::Upper>().solve(
        cov_.chol.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n)));
    // keep it exactly symmetric; Q below is built from it
    sigma_inv_ = ((sigma_inv_ + sigma_inv_.transpose()) / 2.0).eval();
    sigma_inv_y_ = sigma_inv_ * y_;
    mu_ = y_;
}

void GibbsChain::set_observations(const Eigen::VectorXd& y) {
    if (y.size() != y_.size())
        throw Error(ErrorCategory::Input, "DimensionMismatch",
                    "replacement observations differ in length");
    y_ = y;
    sigma_inv_y_ = sigma_inv_ * y_;
}

void GibbsChain::update_mu() {
    const auto n = y_.size();
    Eigen::MatrixXd precision = sigma_inv_ / sigma2_ + lambda_ * penalty_;
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCategory::Numerical, "CholeskyFailure",
                    "conditional precision of mu is not positive definite");
    Eigen::VectorXd mean = llt.solve(sigma_inv_y_ / sigma2_);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng_.gaussian();
    mu_ = mean + llt.matrixU().solve(z);
    if (!mu_.allFinite())
        throw Error(ErrorCategory::Numerical, "NonFiniteDraw", "non-finite draw of mu");
}

void GibbsChain::update_sigma2() {
    Eigen::VectorXd resid = y_ - mu_;
    Eigen::VectorXd white = cov_.chol.triangularView<Eigen::Lower>().solve(resid);
    const double shape = config_.a0 + 0.5 * static_cast<double>(y_.size());
    const double rate = config_.b0 + 0.5 * white.squaredNorm();
    sigma2_ = rng_.inverse_gamma(shape, rate);
    if (!std::isfinite(sigma2_) || sigma2_ <= 0.0)
        throw Error(ErrorCategory::Numerical, "NonFiniteDraw", "non-finite draw of sigma2");
}

void GibbsChain::update_lambda() {
    const double rough = (diff_ * mu_).squaredNorm();
    const double shape = config_.a_lam + 0.5 * static_cast<double>(diff_.rows());
    const double rate = config_.b_lam + 0.5 * rough;
    lambda_ = rng_.gamma(shape, rate);
    if (!std::isfinite(lambda_) || lambda_ <= 0.0)
        throw Error(ErrorCategory::Numerical, "NonFiniteDraw", "non-finite draw of lambda");
}

void GibbsChain::sweep() {
    update_mu();
    update_sigma2();
    update_lambda();
}

PosteriorDraws gibbs_sample(const TimeSeries& series, const ModelConfig& config) {
    validate_series(series);
    validate_config(config);
    GibbsChain chain(series, config);

    for (int s = 0; s < config.burn_in; ++s) chain.sweep();

    PosteriorDraws draws;
    draws.config_echo = config;
    draws.times = series.times;
    const auto n = static_cast<Eigen::Index>(series.size());
    draws.mu_draws.resize(config.n_draws, n);
    draws.sigma2_draws.resize(config.n_draws);
    draws.lambda_draws.resize(config.n_draws);
    for (int m = 0; m < config.n_draws; ++m) {
        for (int t = 0; t < config.thin; ++t) chain.sweep();
        draws.mu_draws.row(m) = chain.mu().transpose();
        draws.sigma2_draws[m] = chain.sigma2();
        draws.lambda_draws[m] = chain.lambda();
    }
    return draws;
}

} // namespace scalespace
