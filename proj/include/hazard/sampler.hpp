#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hazard/flowdata.hpp"
#include "hazard/rng.hpp"
#include "hazard/tps.hpp"

namespace hazard {

// Current point of the chain. beta is the cached grid of logits
// B_rho * delta + L * phi; loglik caches the likelihood at beta. Both are
// rebuilt from (delta, phi) on every accepted move, so they stay consistent
// to machine precision.
struct ModelState {
    int rho_index = 0;
    double lambda = 1.0;
    Eigen::VectorXd delta;
    Eigen::VectorXd phi;   // intercept, time slope, age slope
    Eigen::VectorXd beta;  // p*r logits
    double loglik = 0.0;
};

struct SamplerConfig {
    long iterations = 20000;
    long burn_in = 4000;
    long thin = 1;
    std::uint64_t seed = 1;
    Eigen::MatrixXd jump_matrix;          // tridiagonal, doubly stochastic
    double phi_prior_precision = 1e-6;
    double trace_fraction = 0.95;
};

// Default anisotropy jump proposal: 0.1 to each tridiagonal neighbour,
// remainder on the diagonal (0.9 at the ends, 0.8 inside).
Eigen::MatrixXd default_jump_matrix(int k);

struct Draw {
    long iteration = 0;
    int rho_index = 0;
    double lambda = 0.0;
    double loglik = 0.0;
    Eigen::VectorXd beta;
    Eigen::VectorXd delta;
    Eigen::VectorXd phi;
};

struct AcceptStats {
    long delta_proposed = 0, delta_accepted = 0;
    long phi_proposed = 0, phi_accepted = 0;
    long rho_proposed = 0, rho_accepted = 0;
    long rho_scale_rejects = 0;  // lambda map under/overflowed

    double delta_rate() const { return delta_proposed ? double(delta_accepted) / delta_proposed : 0.0; }
    double phi_rate() const { return phi_proposed ? double(phi_accepted) / phi_proposed : 0.0; }
    double rho_rate() const { return rho_proposed ? double(rho_accepted) / rho_proposed : 0.0; }
};

struct ChainOutput {
    std::vector<Draw> draws;              // thinned, post burn-in
    AcceptStats acceptance;
    std::vector<long> rho_visit_counts;   // over recorded draws
};

// Binomial log likelihood sum_ij [beta_ij x_ij - n_ij ln(1+e^beta_ij)];
// overflow-safe, n=0 cells contribute zero.
double log_likelihood(const Eigen::VectorXd& beta, const AggregatedPanel& panel);

// Gaussian proposal N(mean, precision^-1) with its Cholesky factor kept for
// sampling and for evaluating the fully normalized reverse density.
struct GaussianProposal {
    Eigen::VectorXd mean;
    Eigen::MatrixXd precision;
    Eigen::MatrixXd chol_lower;      // precision = LL'
    double log_det_precision = 0.0;

    Eigen::VectorXd sample(Rng& rng) const;
    double logpdf(const Eigen::VectorXd& v) const;
};

// One weighted-least-squares step of the logistic model, linearized at the
// current linear predictor smooth + offset: weights W = diag(n p q), working
// response yhat = smooth + (x - n p)/(n p q) on cells with n > 0, precision
// prior_precision*I + D'WD, mean its weighted LS solution. `smooth` is the
// current value of the D-part of the predictor (it need not lie in D's
// column span, which is what a cross-basis jump requires).
GaussianProposal gaussian_irls(const Eigen::MatrixXd& design, double prior_precision,
                               const Eigen::VectorXd& smooth, const Eigen::VectorXd& offset,
                               const AggregatedPanel& panel);

// The delta-update proposal at the current state (design B_rho, ridge
// lambda*I, offset L*phi), plus one sample from it.
struct IrlsProposal {
    Eigen::VectorXd delta;
    Eigen::VectorXd mean;
    Eigen::MatrixXd precision;
};
IrlsProposal irls_proposal(const ModelState& state, const SplineBasis& basis,
                           const AggregatedPanel& panel, Rng& rng);

// Log MH acceptance ratio for moving delta -> delta_tilde under the proposal
// `forward` built at the current state; recomputes the reverse proposal at
// the proposed state. Exposed so the ratio's fixed points are testable.
double delta_log_accept(const ModelState& state, const Eigen::VectorXd& delta_tilde,
                        const SplineBasis& basis, const AggregatedPanel& panel,
                        const GaussianProposal& forward);
double phi_log_accept(const ModelState& state, const Eigen::VectorXd& phi_tilde,
                      const SplineBasis& basis, const AggregatedPanel& panel,
                      double phi_prior_precision, const GaussianProposal& forward);

ModelState mh_update_delta(const ModelState& state, const SplineBasis& basis,
                           const AggregatedPanel& panel, const SmoothnessPrior& prior,
                           Rng& rng, AcceptStats* stats = nullptr);

ModelState mh_update_phi(const ModelState& state, const SplineBasis& basis,
                         const AggregatedPanel& panel, const SamplerConfig& config,
                         Rng& rng, AcceptStats* stats = nullptr);

// Conjugate draw lambda ~ Gamma(sh + q/2, rate 1/sc_rho + delta'delta/2).
ModelState gibbs_lambda(const ModelState& state, const SmoothnessPrior& prior, Rng& rng);

// Reversible jump across the anisotropy grid: rho_tilde from the jump row,
// phi unchanged, lambda mapped deterministically by sc_rho/sc_rho_tilde
// (Jacobian in the ratio), delta_tilde proposed by gaussian_irls against the
// target basis; accepted with the fully normalized prior x likelihood x
// proposal x jump-probability ratio.
ModelState rho_jump(const ModelState& state, const std::vector<SplineBasis>& bases,
                    const AggregatedPanel& panel, const SmoothnessPrior& prior,
                    const SamplerConfig& config, Rng& rng, AcceptStats* stats = nullptr);

// Full sweep loop: delta, phi, lambda, rho per iteration, in that order;
// initial state drawn from the prior (rho, lambda) with delta = 0, phi = 0.
// Deterministic given config.seed.
ChainOutput run_chain(const SamplerConfig& config, const AggregatedPanel& panel,
                      const SmoothnessPrior& prior, const std::vector<SplineBasis>& bases);

} // namespace hazard
