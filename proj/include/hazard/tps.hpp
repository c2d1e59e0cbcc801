#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace hazard {

// Per-anisotropy eigenbasis of the projected smoothing kernel. Columns of B
// are the nonzero columns of U * Lambda^(1/2), eigenvalues descending.
struct SplineBasis {
    Eigen::MatrixXd B;
    Eigen::VectorXd eigenvalues;        // retained, descending
    Eigen::VectorXd all_positive;       // every numerically positive eigenvalue
    int q = 0;
    double trace_fraction = 0.95;
    double rho = 1.0;
    int zero_count = 0;                 // eigenvalues below the zero threshold
};

// Anisotropy grid, its prior, and the smoothness-prior parameters per grid
// point. `sc` follows the scale convention: lambda|rho ~ Gamma(sh, rate 1/sc),
// so the prior mean of lambda is sh*sc.
struct SmoothnessPrior {
    std::vector<double> rho_grid{8.0, 4.0, 2.0, 1.0, 0.5, 0.25};
    std::vector<double> rho_probs{0.08, 0.16, 0.26, 0.26, 0.16, 0.08};
    double sh = 0.5;
    std::vector<double> sc; // per rho grid point
    // elicitation inputs
    double bound = 0.15;
    double alpha = 0.05;
    double d_t = 0.028125; // scaled half-quarter
    double d_a = 10.0 / 45.0; // scaled decade

    double rate(int k) const { return 1.0 / sc[k]; }
};

// Radial kernel H(v) = |v|^2 ln|v| / (8 pi), H(0) = 0.
double tps_kernel(double dt, double da);

// (p*r) x (p*r) kernel matrix over the grid, with the anisotropy rescaling
// T = t/sqrt(1+rho^2), A = rho*a/sqrt(1+rho^2). Row-major cell order (time
// outer, age inner) matching AggregatedPanel.
Eigen::MatrixXd kernel_matrix(const std::vector<double>& t, const std::vector<double>& a,
                              double rho);

// (p*r) x 3 design with rows (1, t_i, a_j).
Eigen::MatrixXd linear_design(const std::vector<double>& t, const std::vector<double>& a);

// Orthogonal projector onto the complement of col(L): P = I - L(L'L)^{-1}L'.
Eigen::MatrixXd projection(const Eigen::MatrixXd& L);

// Eigendecomposition of PKP with the near-zero cutoff 1e-10*lambda_max;
// retains the smallest descending-eigenvalue prefix whose sum reaches
// trace_fraction of the positive total. Deterministic ordering and column
// signs (largest-magnitude entry positive).
SplineBasis build_basis(const Eigen::MatrixXd& K, const Eigen::MatrixXd& P,
                        double trace_fraction, double rho);

// Prior variance (times lambda) of the mixed second/first difference over the
// 6-point stencil at (t0,a0): d'Hd with d=(1,-2,1,-1,2,-1) spanning
// {t0, t0+d_t, t0+2 d_t} x {a0, a0+d_a}. Translation invariant in (t0,a0).
double roughness_variance(double rho, double d_t, double d_a);

// Elicits the Gamma scale for lambda from Prior(|difference| <= bound) = 1-alpha.
// Closed form: bound^2 * q / (V*(1-q)) with q the alpha-quantile of Beta(sh, 0.5).
double elicit_scale_closed_form(double V, double bound, double alpha, double sh);

// Monte-Carlo mode: bisection on sc of the simulated coverage with
// lambda ~ Gamma(sh, scale sc) and diff|lambda ~ Normal(0, V/lambda).
double elicit_scale_monte_carlo(double V, double bound, double alpha, double sh,
                                int draws = 1'000'000, std::uint64_t seed = 1);

// Fills prior.sc from the Monte-Carlo elicitation equation (analytic solution
// of the coverage identity) for every rho in the grid.
void elicit_prior_scales(SmoothnessPrior& prior);

} // namespace hazard
