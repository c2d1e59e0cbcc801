#include "hazard/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hazard/special.hpp"

namespace hazard {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Fully normalized N(0, precision^-1 * I) log density in dim(v).
double iso_normal_logpdf(const Eigen::VectorXd& v, double precision) {
    const double q = static_cast<double>(v.size());
    return 0.5 * q * (std::log(precision) - kLog2Pi) - 0.5 * precision * v.squaredNorm();
}

// Weights below this are treated as zero so 1/w stays finite.
constexpr double kWeightFloor = 1e-290;

} // namespace

Eigen::MatrixXd default_jump_matrix(int k) {
    if (k <= 0) throw std::invalid_argument("default_jump_matrix: empty grid");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k, k);
    if (k == 1) {
        j(0, 0) = 1.0;
        return j;
    }
    for (int i = 0; i < k; ++i) {
        if (i > 0) j(i, i - 1) = 0.1;
        if (i + 1 < k) j(i, i + 1) = 0.1;
        j(i, i) = 1.0 - (i > 0 ? 0.1 : 0.0) - (i + 1 < k ? 0.1 : 0.0);
    }
    return j;
}

double log_likelihood(const Eigen::VectorXd& beta, const AggregatedPanel& panel) {
    const size_t cells = panel.n.size();
    if (static_cast<size_t>(beta.size()) != cells)
        throw std::invalid_argument("log_likelihood: beta length does not match the panel");
    double ll = 0.0;
    for (size_t c = 0; c < cells; ++c) {
        if (panel.n[c] == 0.0) continue;
        ll += beta[c] * panel.x[c] - panel.n[c] * log1pexp(beta[c]);
    }
    return ll;
}

Eigen::VectorXd GaussianProposal::sample(Rng& rng) const {
    const auto q = mean.size();
    if (q == 0) return Eigen::VectorXd();
    Eigen::VectorXd z(q);
    for (Eigen::Index i = 0; i < q; ++i) z[i] = rng.normal();
    // x = mean + L^-T z has covariance (LL')^-1.
    chol_lower.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
    return mean + z;
}

double GaussianProposal::logpdf(const Eigen::VectorXd& v) const {
    const auto q = mean.size();
    if (q == 0) return 0.0;
    const Eigen::VectorXd w = chol_lower.transpose() * (v - mean);
    return 0.5 * log_det_precision - 0.5 * static_cast<double>(q) * kLog2Pi -
           0.5 * w.squaredNorm();
}

GaussianProposal gaussian_irls(const Eigen::MatrixXd& design, double prior_precision,
                               const Eigen::VectorXd& smooth, const Eigen::VectorXd& offset,
                               const AggregatedPanel& panel) {
    if (!(prior_precision > 0.0))
        throw std::invalid_argument("gaussian_irls: prior precision must be positive");
    const Eigen::Index n = design.rows(), q = design.cols();
    if (smooth.size() != n || offset.size() != n ||
        static_cast<size_t>(n) != panel.n.size())
        throw std::invalid_argument("gaussian_irls: shape mismatch");

    GaussianProposal prop;
    if (q == 0) {
        prop.mean = Eigen::VectorXd();
        prop.precision = Eigen::MatrixXd(0, 0);
        prop.chol_lower = Eigen::MatrixXd(0, 0);
        prop.log_det_precision = 0.0;
        return prop;
    }

    // Rows with positive binomial weight, pre-scaled by sqrt(w).
    Eigen::MatrixXd dw(n, q);
    Eigen::VectorXd zw(n);
    Eigen::Index na = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ni = panel.n[static_cast<size_t>(i)];
        if (ni == 0.0) continue;
        const double p = logistic(smooth[i] + offset[i]);
        const double w = ni * p * (1.0 - p);
        if (w < kWeightFloor) continue;
        const double sw = std::sqrt(w);
        const double yhat = smooth[i] + (panel.x[static_cast<size_t>(i)] - ni * p) / w;
        dw.row(na) = sw * design.row(i);
        zw[na] = sw * yhat;
        ++na;
    }

    prop.precision = prior_precision * Eigen::MatrixXd::Identity(q, q);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q);
    if (na > 0) {
        const auto da = dw.topRows(na);
        prop.precision.noalias() += da.transpose() * da;
        rhs.noalias() = da.transpose() * zw.head(na);
    }

    Eigen::LLT<Eigen::MatrixXd> llt(prop.precision);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("gaussian_irls: proposal precision is not positive definite");
    prop.mean = llt.solve(rhs);
    prop.chol_lower = llt.matrixL();
    prop.log_det_precision = 2.0 * prop.chol_lower.diagonal().array().log().sum();
    return prop;
}

IrlsProposal irls_proposal(const ModelState& state, const SplineBasis& basis,
                           const AggregatedPanel& panel, Rng& rng) {
    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    const Eigen::VectorXd smooth = basis.B * state.delta;
    const Eigen::VectorXd offset = L * state.phi;
    GaussianProposal prop = gaussian_irls(basis.B, state.lambda, smooth, offset, panel);
    IrlsProposal out;
    out.delta = prop.sample(rng);
    out.mean = std::move(prop.mean);
    out.precision = std::move(prop.precision);
    return out;
}

namespace {

struct MoveEval {
    double log_accept = 0.0;
    Eigen::VectorXd beta_tilde;
    double loglik_tilde = 0.0;
};

// Shared MH arithmetic for a coefficient block c -> c_tilde with design D,
// isotropic prior precision tau, and the complementary predictor part fixed.
MoveEval eval_coef_move(const ModelState& state, const Eigen::MatrixXd& design,
                        const Eigen::VectorXd& current, const Eigen::VectorXd& proposed,
                        const Eigen::VectorXd& offset, double tau,
                        const AggregatedPanel& panel, const GaussianProposal& forward) {
    MoveEval ev;
    ev.beta_tilde = offset + design * proposed;
    ev.loglik_tilde = log_likelihood(ev.beta_tilde, panel);
    const GaussianProposal reverse =
        gaussian_irls(design, tau, design * proposed, offset, panel);
    ev.log_accept = (ev.loglik_tilde - state.loglik) +
                    iso_normal_logpdf(proposed, tau) - iso_normal_logpdf(current, tau) +
                    reverse.logpdf(current) - forward.logpdf(proposed);
    return ev;
}

} // namespace

double delta_log_accept(const ModelState& state, const Eigen::VectorXd& delta_tilde,
                        const SplineBasis& basis, const AggregatedPanel& panel,
                        const GaussianProposal& forward) {
    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    return eval_coef_move(state, basis.B, state.delta, delta_tilde, L * state.phi,
                          state.lambda, panel, forward)
        .log_accept;
}

double phi_log_accept(const ModelState& state, const Eigen::VectorXd& phi_tilde,
                      const SplineBasis& basis, const AggregatedPanel& panel,
                      double phi_prior_precision, const GaussianProposal& forward) {
    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    return eval_coef_move(state, L, state.phi, phi_tilde, basis.B * state.delta,
                          phi_prior_precision, panel, forward)
        .log_accept;
}

ModelState mh_update_delta(const ModelState& state, const SplineBasis& basis,
                           const AggregatedPanel& panel, const SmoothnessPrior&,
                           Rng& rng, AcceptStats* stats) {
    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    const Eigen::VectorXd offset = L * state.phi;
    const GaussianProposal forward =
        gaussian_irls(basis.B, state.lambda, basis.B * state.delta, offset, panel);
    const Eigen::VectorXd delta_tilde = forward.sample(rng);
    const MoveEval ev = eval_coef_move(state, basis.B, state.delta, delta_tilde, offset,
                                       state.lambda, panel, forward);
    if (stats) ++stats->delta_proposed;
    if (std::log(rng.uniform_pos()) < ev.log_accept) {
        if (stats) ++stats->delta_accepted;
        ModelState next = state;
        next.delta = delta_tilde;
        next.beta = ev.beta_tilde;
        next.loglik = ev.loglik_tilde;
        return next;
    }
    return state;
}

ModelState mh_update_phi(const ModelState& state, const SplineBasis& basis,
                         const AggregatedPanel& panel, const SamplerConfig& config,
                         Rng& rng, AcceptStats* stats) {
    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    const Eigen::VectorXd offset = basis.B * state.delta;
    const GaussianProposal forward =
        gaussian_irls(L, config.phi_prior_precision, L * state.phi, offset, panel);
    const Eigen::VectorXd phi_tilde = forward.sample(rng);
    const MoveEval ev = eval_coef_move(state, L, state.phi, phi_tilde, offset,
                                       config.phi_prior_precision, panel, forward);
    if (stats) ++stats->phi_proposed;
    if (std::log(rng.uniform_pos()) < ev.log_accept) {
        if (stats) ++stats->phi_accepted;
        ModelState next = state;
        next.phi = phi_tilde;
        next.beta = ev.beta_tilde;
        next.loglik = ev.loglik_tilde;
        return next;
    }
    return state;
}

ModelState gibbs_lambda(const ModelState& state, const SmoothnessPrior& prior, Rng& rng) {
    const double q = static_cast<double>(state.delta.size());
    const double shape = prior.sh + 0.5 * q;
    const double rate = prior.rate(state.rho_index) + 0.5 * state.delta.squaredNorm();
    ModelState next = state;
    next.lambda = rng.gamma(shape, rate);
    return next;
}

ModelState rho_jump(const ModelState& state, const std::vector<SplineBasis>& bases,
                    const AggregatedPanel& panel, const SmoothnessPrior& prior,
                    const SamplerConfig& config, Rng& rng, AcceptStats* stats) {
    const int k = state.rho_index;
    const int nrho = static_cast<int>(prior.rho_grid.size());

    // Draw the target grid point from the jump row; if rounding leaves the
    // cumulative sum a hair under u, fall back to the last positive entry.
    int kt = -1;
    {
        double u = rng.uniform(), acc = 0.0;
        int last_pos = k;
        for (int j = 0; j < nrho; ++j) {
            const double pj = config.jump_matrix(k, j);
            if (pj > 0.0) last_pos = j;
            acc += pj;
            if (u < acc) {
                kt = j;
                break;
            }
        }
        if (kt < 0) kt = last_pos;
    }
    if (stats) ++stats->rho_proposed;

    const double sc_cur = prior.sc[static_cast<size_t>(k)];
    const double sc_new = prior.sc[static_cast<size_t>(kt)];
    const double lambda_tilde = state.lambda * sc_cur / sc_new;
    if (!std::isfinite(lambda_tilde) || lambda_tilde <= 0.0) {
        if (stats) ++stats->rho_scale_rejects;
        return state;
    }

    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    const Eigen::VectorXd offset = L * state.phi;
    const Eigen::VectorXd smooth_cur = bases[static_cast<size_t>(k)].B * state.delta;

    const GaussianProposal forward =
        gaussian_irls(bases[static_cast<size_t>(kt)].B, lambda_tilde, smooth_cur, offset, panel);
    const Eigen::VectorXd delta_tilde = forward.sample(rng);
    const Eigen::VectorXd beta_tilde =
        offset + bases[static_cast<size_t>(kt)].B * delta_tilde;
    const double loglik_tilde = log_likelihood(beta_tilde, panel);

    const GaussianProposal reverse =
        gaussian_irls(bases[static_cast<size_t>(k)].B, state.lambda,
                      bases[static_cast<size_t>(kt)].B * delta_tilde, offset, panel);

    const double log_accept =
        std::log(prior.rho_probs[static_cast<size_t>(kt)]) -
        std::log(prior.rho_probs[static_cast<size_t>(k)]) +
        gamma_logpdf(lambda_tilde, prior.sh, 1.0 / sc_new) -
        gamma_logpdf(state.lambda, prior.sh, 1.0 / sc_cur) +
        iso_normal_logpdf(delta_tilde, lambda_tilde) -
        iso_normal_logpdf(state.delta, state.lambda) +
        (loglik_tilde - state.loglik) +
        std::log(config.jump_matrix(kt, k)) - std::log(config.jump_matrix(k, kt)) +
        reverse.logpdf(state.delta) - forward.logpdf(delta_tilde) +
        std::log(sc_cur / sc_new);  // Jacobian of the lambda map

    if (std::log(rng.uniform_pos()) < log_accept) {
        if (stats) ++stats->rho_accepted;
        ModelState next;
        next.rho_index = kt;
        next.lambda = lambda_tilde;
        next.delta = delta_tilde;
        next.phi = state.phi;
        next.beta = beta_tilde;
        next.loglik = loglik_tilde;
        return next;
    }
    return state;
}

namespace {

void validate_run(const SamplerConfig& config, const AggregatedPanel& panel,
                  const SmoothnessPrior& prior, const std::vector<SplineBasis>& bases) {
    const size_t nrho = prior.rho_grid.size();
    if (nrho == 0) throw std::invalid_argument("run_chain: empty rho grid");
    if (prior.rho_probs.size() != nrho || prior.sc.size() != nrho || bases.size() != nrho)
        throw std::invalid_argument("run_chain: rho grid, probabilities, scales and bases "
                                    "must have equal lengths");
    double psum = 0.0;
    for (double p : prior.rho_probs) {
        if (p <= 0.0) throw std::invalid_argument("run_chain: rho prior probabilities must be positive");
        psum += p;
    }
    if (std::fabs(psum - 1.0) > 1e-8)
        throw std::invalid_argument("run_chain: rho prior probabilities do not sum to 1");
    for (double s : prior.sc)
        if (!(s > 0.0)) throw std::invalid_argument("run_chain: prior scales must be positive");

    const auto& j = config.jump_matrix;
    if (j.rows() != static_cast<Eigen::Index>(nrho) || j.cols() != static_cast<Eigen::Index>(nrho))
        throw std::invalid_argument("run_chain: jump matrix shape does not match the rho grid");
    for (Eigen::Index a = 0; a < j.rows(); ++a)
        for (Eigen::Index b = 0; b < j.cols(); ++b) {
            if (j(a, b) < 0.0) throw std::invalid_argument("run_chain: negative jump probability");
            if (std::abs(a - b) > 1 && j(a, b) != 0.0)
                throw std::invalid_argument("run_chain: jump matrix is not tridiagonal");
        }
    for (Eigen::Index a = 0; a < j.rows(); ++a) {
        if (std::fabs(j.row(a).sum() - 1.0) > 1e-12)
            throw std::invalid_argument("run_chain: jump matrix row " + std::to_string(a) +
                                        " does not sum to 1");
        if (std::fabs(j.col(a).sum() - 1.0) > 1e-12)
            throw std::invalid_argument("run_chain: jump matrix column " + std::to_string(a) +
                                        " does not sum to 1");
    }

    if (config.iterations < 0 || config.burn_in < 0 || config.thin < 1)
        throw std::invalid_argument("run_chain: bad iteration/burn-in/thin settings");
    if (config.burn_in > config.iterations)
        throw std::invalid_argument("run_chain: burn-in exceeds the iteration count");

    const auto cells = static_cast<Eigen::Index>(panel.n.size());
    for (const SplineBasis& b : bases)
        if (b.B.rows() != cells)
            throw std::invalid_argument("run_chain: basis rows do not match the panel");
}

} // namespace

ChainOutput run_chain(const SamplerConfig& config, const AggregatedPanel& panel,
                      const SmoothnessPrior& prior, const std::vector<SplineBasis>& bases) {
    validate_run(config, panel, prior, bases);
    Rng rng(config.seed);

    ModelState state;
    {
        // rho and lambda from their prior; coefficient blocks start at zero.
        double u = rng.uniform(), acc = 0.0;
        state.rho_index = static_cast<int>(prior.rho_grid.size()) - 1;
        for (size_t j = 0; j < prior.rho_probs.size(); ++j) {
            acc += prior.rho_probs[j];
            if (u < acc) {
                state.rho_index = static_cast<int>(j);
                break;
            }
        }
        state.lambda = rng.gamma(prior.sh, prior.rate(state.rho_index));
        state.delta = Eigen::VectorXd::Zero(bases[static_cast<size_t>(state.rho_index)].q);
        state.phi = Eigen::VectorXd::Zero(3);
        state.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(panel.n.size()));
        state.loglik = log_likelihood(state.beta, panel);
    }

    ChainOutput out;
    out.rho_visit_counts.assign(prior.rho_grid.size(), 0);
    const long recorded = config.iterations > config.burn_in
                              ? (config.iterations - config.burn_in) / config.thin
                              : 0;
    out.draws.reserve(static_cast<size_t>(recorded));

    for (long s = 0; s < config.iterations; ++s) {
        try {
            const SplineBasis& basis = bases[static_cast<size_t>(state.rho_index)];
            state = mh_update_delta(state, basis, panel, prior, rng, &out.acceptance);
            state = mh_update_phi(state, basis, panel, config, rng, &out.acceptance);
            state = gibbs_lambda(state, prior, rng);
            state = rho_jump(state, bases, panel, prior, config, rng, &out.acceptance);
        } catch (const std::exception& e) {
            throw std::runtime_error("iteration " + std::to_string(s) + ": " + e.what());
        }
        if (s >= config.burn_in && (s - config.burn_in) % config.thin == config.thin - 1) {
            Draw d;
            d.iteration = s;
            d.rho_index = state.rho_index;
            d.lambda = state.lambda;
            d.loglik = state.loglik;
            d.beta = state.beta;
            d.delta = state.delta;
            d.phi = state.phi;
            out.draws.push_back(std::move(d));
            ++out.rho_visit_counts[static_cast<size_t>(state.rho_index)];
        }
    }
    return out;
}

} // namespace hazard
