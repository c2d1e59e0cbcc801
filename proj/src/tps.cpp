#include "hazard/tps.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hazard/rng.hpp"
#include "hazard/special.hpp"

namespace hazard {

double tps_kernel(double dt, double da) {
    const double r2 = dt * dt + da * da;
    if (r2 == 0.0) return 0.0;
    // |v|^2 ln|v| = r2 * ln(r2)/2
    return r2 * 0.5 * std::log(r2) / (8.0 * std::numbers::pi);
}

Eigen::MatrixXd kernel_matrix(const std::vector<double>& t, const std::vector<double>& a,
                              double rho) {
    if (!(rho > 0.0)) throw std::domain_error("kernel_matrix: rho must be positive");
    const int p = static_cast<int>(t.size()), r = static_cast<int>(a.size());
    const double s = std::sqrt(1.0 + rho * rho);
    const int n = p * r;
    Eigen::VectorXd T(n), A(n);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < r; ++j) {
            T[i * r + j] = t[i] / s;
            A[i * r + j] = rho * a[j] / s;
        }
    Eigen::MatrixXd K(n, n);
    for (int u = 0; u < n; ++u) {
        K(u, u) = 0.0;
        for (int v = u + 1; v < n; ++v) {
            const double k = tps_kernel(T[u] - T[v], A[u] - A[v]);
            K(u, v) = k;
            K(v, u) = k;
        }
    }
    return K;
}

Eigen::MatrixXd linear_design(const std::vector<double>& t, const std::vector<double>& a) {
    const int p = static_cast<int>(t.size()), r = static_cast<int>(a.size());
    Eigen::MatrixXd L(p * r, 3);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < r; ++j) {
            L(i * r + j, 0) = 1.0;
            L(i * r + j, 1) = t[i];
            L(i * r + j, 2) = a[j];
        }
    return L;
}

Eigen::MatrixXd projection(const Eigen::MatrixXd& L) {
    const auto n = L.rows();
    // Rank-revealing QR keeps P = I - QQ' well-conditioned even when L'L is
    // nearly singular; a genuinely deficient L (collinear grid) is an error
    // whenever there are dimensions left to project out.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(L);
    qr.setThreshold(1e-12);
    const auto rank = qr.rank();
    if (rank < L.cols() && n > L.cols())
        throw std::runtime_error("projection: linear design is rank-deficient (rank " +
                                 std::to_string(rank) + ")");
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
    return Eigen::MatrixXd::Identity(n, n) - Q * Q.transpose();
}

SplineBasis build_basis(const Eigen::MatrixXd& K, const Eigen::MatrixXd& P,
                        double trace_fraction, double rho) {
    if (!(trace_fraction > 0.0 && trace_fraction <= 1.0))
        throw std::domain_error("build_basis: trace_fraction outside (0,1]");
    const auto n = K.rows();
    Eigen::MatrixXd M = P * K * P;
    M = 0.5 * (M + M.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("build_basis: eigendecomposition failed");

    // Eigen returns ascending order; walk from the top for descending.
    const Eigen::VectorXd& w = eig.eigenvalues();
    const Eigen::MatrixXd& U = eig.eigenvectors();
    const double lmax = std::max(w[n - 1], 0.0);
    const double cutoff = 1e-10 * lmax;

    std::vector<int> pos;
    for (int k = static_cast<int>(n) - 1; k >= 0; --k)
        if (w[k] > cutoff) pos.push_back(k);

    double total = 0.0;
    for (int k : pos) total += w[k];

    SplineBasis basis;
    basis.rho = rho;
    basis.trace_fraction = trace_fraction;
    basis.zero_count = static_cast<int>(n) - static_cast<int>(pos.size());
    basis.all_positive.resize(pos.size());
    for (size_t m = 0; m < pos.size(); ++m) basis.all_positive[m] = w[pos[m]];

    int q = 0;
    double run = 0.0;
    for (size_t m = 0; m < pos.size(); ++m) {
        run += w[pos[m]];
        q = static_cast<int>(m) + 1;
        if (run >= trace_fraction * total - 1e-15 * total) break;
    }
    basis.q = q;
    basis.eigenvalues = basis.all_positive.head(q);
    basis.B.resize(n, q);
    for (int m = 0; m < q; ++m) {
        Eigen::VectorXd col = U.col(pos[m]);
        // Deterministic sign: the largest-magnitude entry is positive,
        // earliest index breaking ties.
        int arg = 0;
        double best = -1.0;
        for (int i = 0; i < n; ++i)
            if (std::fabs(col[i]) > best) {  // strict: earliest index wins ties
                best = std::fabs(col[i]);
                arg = i;
            }
        if (col[arg] < 0.0) col = -col;
        basis.B.col(m) = col * std::sqrt(w[pos[m]]);
    }
    return basis;
}

double roughness_variance(double rho, double d_t, double d_a) {
    if (!(d_t > 0.0) || !(d_a > 0.0))
        throw std::domain_error("roughness_variance: differences must be positive");
    // Stencil order matches the displayed mixed difference:
    // (t+2dt,a+da) (t+dt,a+da) (t,a+da) (t+2dt,a) (t+dt,a) (t,a).
    const double pts[6][2] = {{2 * d_t, d_a}, {d_t, d_a}, {0.0, d_a},
                              {2 * d_t, 0.0}, {d_t, 0.0}, {0.0, 0.0}};
    const double d[6] = {1.0, -2.0, 1.0, -1.0, 2.0, -1.0};
    const double s = std::sqrt(1.0 + rho * rho);
    double V = 0.0;
    for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l)
            V += d[k] * d[l] *
                 tps_kernel((pts[k][0] - pts[l][0]) / s, rho * (pts[k][1] - pts[l][1]) / s);
    return V;
}

double elicit_scale_closed_form(double V, double bound, double alpha, double sh) {
    if (!(V > 0) || !(bound > 0)) throw std::domain_error("elicit_scale: V and bound must be positive");
    if (!(alpha > 0 && alpha < 1) || !(sh > 0)) throw std::domain_error("elicit_scale: bad alpha or sh");
    const double q = beta_quantile(alpha, sh, 0.5);
    return bound * bound * q / (V * (1.0 - q));
}

double elicit_scale_monte_carlo(double V, double bound, double alpha, double sh,
                                int draws, std::uint64_t seed) {
    if (!(V > 0) || !(bound > 0)) throw std::domain_error("elicit_scale: V and bound must be positive");
    if (!(alpha > 0 && alpha < 1) || !(sh > 0)) throw std::domain_error("elicit_scale: bad alpha or sh");
    // Coverage at fixed sc, reusing one stream of (gamma, normal) pairs so the
    // coverage curve is monotone in sc and bisection is well posed.
    Rng rng(seed);
    std::vector<double> lam(draws), z(draws);
    for (int i = 0; i < draws; ++i) {
        lam[i] = rng.gamma(sh, 1.0);        // scale applied multiplicatively below
        z[i] = rng.normal();
    }
    auto coverage = [&](double sc) {
        long hit = 0;
        for (int i = 0; i < draws; ++i) {
            const double diff = z[i] * std::sqrt(V / (sc * lam[i]));
            if (std::fabs(diff) <= bound) ++hit;
        }
        return static_cast<double>(hit) / draws;
    };
    double lo = 1e-12, hi = 1.0;
    while (coverage(hi) < 1.0 - alpha && hi < 1e12) hi *= 4.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (coverage(mid) < 1.0 - alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void elicit_prior_scales(SmoothnessPrior& prior) {
    // Analytic solution of the Monte-Carlo coverage identity under the scale
    // convention: |diff|^2 = (2V/sc) * B/(1-B) with B ~ Beta(0.5, sh), giving
    // sc = 2V(1-q)/(bound^2 q), q the alpha-quantile of Beta(sh, 0.5).
    prior.sc.resize(prior.rho_grid.size());
    const double q = beta_quantile(prior.alpha, prior.sh, 0.5);
    for (size_t k = 0; k < prior.rho_grid.size(); ++k) {
        const double V = roughness_variance(prior.rho_grid[k], prior.d_t, prior.d_a);
        prior.sc[k] = 2.0 * V * (1.0 - q) / (prior.bound * prior.bound * q);
    }
}

} // namespace hazard
