#pragma once

#include "scalespace/rng.hpp"
#include "scalespace/series.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace scalespace {

/// Hyperpriors, error correlation and sampler settings. Gamma and InvGamma
/// are shape/rate throughout: Gamma(a, b) has mean a/b, InvGamma(a, b) has
/// density proportional to x^(-a-1) exp(-b/x) and mean b/(a-1).
struct ModelConfig {
    double a0 = 0.01;     ///< shape of InvGamma prior on the error variance
    double b0 = 0.01;     ///< rate of InvGamma prior on the error variance
    double a_lam = 0.01;  ///< shape of Gamma prior on the roughness precision
    double b_lam = 0.01;  ///< rate of Gamma prior on the roughness precision
    double rho = 0.0;     ///< AR(1) error correlation, fixed, |rho| < 1
    int burn_in = 1000;   ///< sweeps discarded
    int n_draws = 4000;   ///< retained draws M
    int thin = 1;         ///< keep every thin-th post-burn-in sweep
    std::uint64_t seed = 42;
    double ridge = 1e-8;  ///< conditional regularizer for the local-linear smoother
};

/// Throws Error(Input, "InvalidConfig") on violated invariants.
void validate_config(const ModelConfig& config);

/// Retained Gibbs draws. Rows of mu_draws are draws of the latent signal at
/// the observation times.
struct PosteriorDraws {
    Eigen::MatrixXd mu_draws;        ///< M x n
    Eigen::VectorXd sigma2_draws;    ///< M, all > 0
    Eigen::VectorXd lambda_draws;    ///< M, all > 0
    ModelConfig config_echo;
    std::vector<double> times;

    int draw_count() const { return static_cast<int>(mu_draws.rows()); }
    Eigen::VectorXd posterior_mean() const { return mu_draws.colwise().mean(); }
};

/// Second divided-difference operator: (n-2) x n, row i holding the
/// coefficients of 2 * mu[t_i, t_{i+1}, t_{i+2}]. Annihilates every linear
/// function of t. Throws on duplicate times.
Eigen::MatrixXd second_difference_operator(const std::vector<double>& times);

/// Unit-variance error covariance diag(s) * C * diag(s) with C_ij = rho^|i-j|
/// and s from the series' stderrs (ones when absent), plus its lower
/// Cholesky factor.
struct ErrorCovariance {
    Eigen::MatrixXd sigma;  ///< n x n SPD
    Eigen::MatrixXd chol;   ///< lower triangular L, sigma = L L^T
};

ErrorCovariance error_covariance(const TimeSeries& series, double rho);

/// One Gibbs chain over (mu, sigma2, lambda) for the additive-error model
///     y = mu + eps,  eps ~ N(0, sigma2 * Sigma_e),
///     p(mu | lambda) propto lambda^((n-2)/2) exp(-lambda/2 |D mu|^2),
///     sigma2 ~ InvGamma(a0, b0),  lambda ~ Gamma(a_lam, b_lam).
/// The per-conditional updates are public so tests can drive them directly
/// (fixed-lambda limits, conjugate-moment oracles, successive-conditional
/// simulation with externally resampled observations).
class GibbsChain {
public:
    GibbsChain(const TimeSeries& series, const ModelConfig& config);

    /// mu | sigma2, lambda, y ~ N(Q^-1 Sigma^-1 y / sigma2, Q^-1) with
    /// Q = Sigma^-1 / sigma2 + lambda D^T D, sampled via Cholesky of Q.
    void update_mu();
    /// sigma2 | mu, y ~ InvGamma(a0 + n/2, b0 + (y-mu)^T Sigma^-1 (y-mu) / 2).
    void update_sigma2();
    /// lambda | mu ~ Gamma(a_lam + (n-2)/2, b_lam + |D mu|^2 / 2).
    void update_lambda();

    void sweep();

    /// Swap in new observations of the same length (successive-conditional
    /// simulation); state (mu, sigma2, lambda) is kept.
    void set_observations(const Eigen::VectorXd& y);

    const Eigen::VectorXd& mu() const { return mu_; }
    double sigma2() const { return sigma2_; }
    double lambda() const { return lambda_; }
    void set_mu(const Eigen::VectorXd& mu) { mu_ = mu; }
    void set_sigma2(double v) { sigma2_ = v; }
    void set_lambda(double v) { lambda_ = v; }

    const Eigen::MatrixXd& difference_operator() const { return diff_; }
    const ErrorCovariance& error_cov() const { return cov_; }
    const Eigen::VectorXd& observations() const { return y_; }
    Rng& rng() { return rng_; }

private:
    ModelConfig config_;
    Eigen::VectorXd y_;
    Eigen::MatrixXd diff_;       // D, (n-2) x n
    Eigen::MatrixXd penalty_;    // D^T D
    ErrorCovariance cov_;
    Eigen::MatrixXd sigma_inv_;  // Sigma_e^-1
    Eigen::VectorXd sigma_inv_y_;
    Rng rng_;

    Eigen::VectorXd mu_;
    double sigma2_ = 1.0;
    double lambda_ = 1.0;
};

/// Run burn_in + n_draws * thin sweeps and retain every thin-th post-burn-in
/// state. Deterministic given config.seed.
PosteriorDraws gibbs_sample(const TimeSeries& series, const ModelConfig& config);

} // namespace scalespace
