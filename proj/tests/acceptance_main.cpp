// Acceptance gate. Each invocation checks one named criterion end to end,
// prints its diagnostics, then exactly one verdict line:
//
//   [PASS] <criterion> -- <summary>     exit 0
//   [FAIL] <criterion> -- <summary>     exit 1
//   [SKIP] <criterion> -- <summary>     exit 77
//
// Criteria (run `acceptance <name>`):
//   roughness_variance_table  stencil variance vs the published calibration column
//   fisher_exact_value        frozen hypergeometric tail probability
//   rho_table_arithmetic      visit-frequency table arithmetic at N=19000
//   basis_correctness         eigenbasis invariants on a 10x5 grid
//   prior_recovery            sampler reproduces its prior under a flat likelihood
//   gibbs_conjugacy           lambda full conditional vs grid integration
//   surface_recovery          posterior recovers a known synthetic surface
//   determinism               byte-identical artifacts across repeated runs
//   casew_headline            headline queries on the original flow dataset

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hazard/baselines.hpp"
#include "hazard/config.hpp"
#include "hazard/pipeline.hpp"
#include "hazard/posterior.hpp"
#include "hazard/sampler.hpp"
#include "hazard/special.hpp"
#include "hazard/tps.hpp"

using namespace hazard;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int verdict(bool ok, const char* name, const std::string& detail) {
    std::printf("[%s] %s -- %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    return ok ? 0 : 1;
}

int skip(const char* name, const std::string& detail) {
    std::printf("[SKIP] %s -- %s\n", name, detail.c_str());
    return 77;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

double pearson(const std::vector<double>& u, const std::vector<double>& v) {
    const size_t n = u.size();
    double mu = 0, mv = 0;
    for (size_t i = 0; i < n; ++i) { mu += u[i]; mv += v[i]; }
    mu /= double(n); mv /= double(n);
    double suu = 0, svv = 0, suv = 0;
    for (size_t i = 0; i < n; ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        svv += (v[i] - mv) * (v[i] - mv);
        suv += (u[i] - mu) * (v[i] - mv);
    }
    return suv / std::sqrt(suu * svv);
}

// Bare unit-square grid panel (no calendar semantics) for sampler checks.
AggregatedPanel unit_panel(int p, int r) {
    AggregatedPanel panel;
    panel.p = p;
    panel.r = r;
    panel.n.assign(size_t(p) * r, 0.0);
    panel.x.assign(size_t(p) * r, 0.0);
    for (int i = 0; i < p; ++i) panel.t.push_back((i + 0.5) / p);
    for (int j = 0; j < r; ++j) {
        panel.a.push_back((j + 0.5) / r);
        panel.age_years.push_back((j + 0.5) / r);
        panel.age_upper.push_back(double(j + 1) / r);
    }
    return panel;
}

std::vector<SplineBasis> bases_for(const AggregatedPanel& panel, const SmoothnessPrior& prior) {
    return compute_bases(panel, prior, 0.95);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------- criteria

// Published calibration column for the six-point difference-stencil variance
// at d_t=0.028125, d_a=10/45, and its tolerance of two units in the third
// significant figure.
int check_roughness_variance_table() {
    const double d_t = 0.028125, d_a = 10.0 / 45.0;
    const double rhos[6] = {8, 4, 2, 1, 0.5, 0.25};
    const double ref[6] = {0.000383, 0.000453, 0.000492, 0.000449, 0.000332, 0.000195};
    bool ok = true;
    std::printf("%8s %16s %12s %10s %12s\n", "rho", "computed", "reference", "ratio", "tolerance");
    for (int k = 0; k < 6; ++k) {
        const double v = roughness_variance(rhos[k], d_t, d_a);
        const double tol = 2.0 * std::pow(10.0, std::floor(std::log10(ref[k])) - 2.0);
        const bool row_ok = std::abs(v - ref[k]) <= tol;
        ok = ok && row_ok;
        std::printf("%8.2f %16.9e %12.6f %10.4f %12.1e  %s\n", rhos[k], v, ref[k], ref[k] / v,
                    tol, row_ok ? "ok" : "MISMATCH");
    }
    if (!ok)
        std::printf("note: reference/computed ratios span %.1f..%.2f, so no constant-factor\n"
                    "convention explains the residual; the full 6x6 quadratic-form evidence is\n"
                    "committed at tests/data/roughness_quadratic_form_oracle.txt\n",
                    0.000383 / roughness_variance(8, d_t, d_a),
                    0.000195 / roughness_variance(0.25, d_t, d_a));
    return verdict(ok, "roughness_variance_table",
                   ok ? "all six variances within 2 units in the 3rd significant figure"
                      : "stencil variances do not reproduce the published column (see note)");
}

int check_fisher_exact_value() {
    const double p = fisher_exact_one_sided({3, 8, 15, 136});
    const bool ok = std::abs(p - 0.0530) <= 0.0001;
    std::printf("one-sided tail P[X >= 3] for 3-of-8 older vs 15-of-136 younger dismissals:\n"
                "computed %.12g\n", p);
    if (!ok) {
        const double p14 = fisher_exact_one_sided({3, 8, 14, 136});
        std::printf("note: the 0.0530 target is reproduced by the neighbouring table with 14\n"
                    "younger dismissals (3,8 | 14,136): %.12g; with all 15 of the reported\n"
                    "younger dismissals the tail probability is %.6g\n",
                    p14, p);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "fisher(3,8 | 15,136) = %.6f vs 0.0530 +/- 0.0001", p);
    return verdict(ok, "fisher_exact_value", buf);
}

// Frequencies fixed at the published visit shares (exact at N=19000); the
// marginal-likelihood ratios must match within +/-0.01 and the Wald interval
// endpoints must agree with the printed 2-decimal bounds up to one final-digit
// rounding step.
int check_rho_table_arithmetic() {
    const std::vector<long> counts = {2318, 4389, 5434, 4123, 1919, 817};
    const long total = 19000;
    const double freq_ref[6] = {0.122, 0.231, 0.286, 0.217, 0.101, 0.043};
    const double ml_ref[6] = {1.53, 1.44, 1.10, 0.83, 0.63, 0.54};
    const double lo_ref[6] = {0.12, 0.22, 0.28, 0.21, 0.10, 0.04};
    const double hi_ref[6] = {0.13, 0.24, 0.30, 0.23, 0.11, 0.05};

    SmoothnessPrior prior;  // default six-point grid and prior
    const RhoPosterior table = rho_posterior_from_counts(counts, total, prior);
    bool ok = table.rows.size() == 6;
    std::printf("%8s %8s %22s %22s %22s\n", "rho", "freq", "ml (computed/printed)",
                "p025 (comp->2dp/printed)", "p975 (comp->2dp/printed)");
    for (size_t k = 0; k < table.rows.size() && k < 6; ++k) {
        const RhoRow& row = table.rows[k];
        const bool freq_ok = std::abs(row.freq - freq_ref[k]) <= 1e-12;
        const bool ml_ok = std::abs(row.ml_ratio - ml_ref[k]) <= 0.01 + 1e-12;
        const bool lo_ok = std::abs(round2(row.freq_lo) - lo_ref[k]) <= 0.01 + 1e-9;
        const bool hi_ok = std::abs(round2(row.freq_hi) - hi_ref[k]) <= 0.01 + 1e-9;
        ok = ok && freq_ok && ml_ok && lo_ok && hi_ok;
        std::printf("%8.2f %8.3f %11.6f/%-6.2f %13.6f->%.2f/%-5.2f %10.6f->%.2f/%-5.2f %s\n",
                    row.rho, row.freq, row.ml_ratio, ml_ref[k], row.freq_lo, round2(row.freq_lo),
                    lo_ref[k], row.freq_hi, round2(row.freq_hi), hi_ref[k],
                    (freq_ok && ml_ok && lo_ok && hi_ok) ? "ok" : "MISMATCH");
    }
    return verdict(ok, "rho_table_arithmetic",
                   ok ? "marginal-likelihood column within 0.01; interval endpoints consistent "
                        "with the printed 2-decimal bounds"
                      : "frequency-table arithmetic deviates from the published row(s)");
}

int check_basis_correctness() {
    const auto t0 = Clock::now();
    const AggregatedPanel panel = unit_panel(10, 5);
    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    const Eigen::MatrixXd P = projection(L);
    const double pl_max = (P * L).cwiseAbs().maxCoeff();
    bool ok = pl_max <= 1e-10;
    std::printf("max |(P L)_ij| = %.3e (<= 1e-10)\n", pl_max);

    const double rhos[6] = {8, 4, 2, 1, 0.5, 0.25};
    for (double rho : rhos) {
        const Eigen::MatrixXd K = kernel_matrix(panel.t, panel.a, rho);
        Eigen::MatrixXd M = P * K * P;
        M = 0.5 * (M + M.transpose()).eval();

        // Independent spectrum recount.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
        int zeros = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()[i]) <= 1e-8 * lmax) ++zeros;

        const SplineBasis full = build_basis(K, P, 1.0, rho);
        const double recon =
            (M - full.B * full.B.transpose()).norm() / M.norm();

        const SplineBasis b95 = build_basis(K, P, 0.95, rho);
        const double total = b95.all_positive.sum();
        const double kept = b95.all_positive.head(b95.q).sum();
        const bool reaches = kept >= 0.95 * total - 1e-12 * total;
        const bool minimal = b95.q == 0 || b95.all_positive.head(b95.q - 1).sum() < 0.95 * total;

        const bool row_ok = zeros == 3 && recon <= 1e-8 && reaches && minimal;
        ok = ok && row_ok;
        std::printf("rho %5.2f: zero eigenvalues %d/3, recon %.2e, q=%d keeps %.4f%% "
                    "(minimal %s)  %s\n",
                    rho, zeros, recon, b95.q, 100.0 * kept / total, minimal ? "yes" : "no",
                    row_ok ? "ok" : "MISMATCH");
    }
    const double dt = elapsed_s(t0);
    ok = ok && dt < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "projector, spectrum, reconstruction and minimal 95%% truncation on the "
                  "10x5 grid in %.2fs",
                  dt);
    return verdict(ok, "basis_correctness", buf);
}

// With every cell at n=0 the likelihood is constant, so the chain must give
// back its own prior: rho visit shares, lambda means per rho, and unit
// normalized delta variance.
int check_prior_recovery() {
    const auto t0 = Clock::now();
    const AggregatedPanel panel = unit_panel(10, 5);
    SmoothnessPrior prior;
    elicit_prior_scales(prior);
    const std::vector<SplineBasis> bases = bases_for(panel, prior);

    const int nchains = 32;
    SamplerConfig base;
    base.iterations = 100000;
    base.burn_in = 500;
    base.thin = 100;
    base.jump_matrix = default_jump_matrix(6);
    const std::uint64_t run_seed = 915;

    std::vector<ChainOutput> outs(nchains);
    std::vector<std::thread> workers;
    for (int c = 0; c < nchains; ++c)
        workers.emplace_back([&, c] {
            SamplerConfig cfg = base;
            cfg.seed = Rng::stream_seed(run_seed, std::uint64_t(c));
            outs[size_t(c)] = run_chain(cfg, panel, prior, bases);
        });
    for (auto& w : workers) w.join();
    const ChainOutput merged = merge_chains(outs, prior.rho_grid.size());
    const double ndraw = double(merged.draws.size());
    std::printf("%d chains x %ld iterations -> %.0f recorded draws in %.1fs\n", nchains,
                base.iterations, ndraw, elapsed_s(t0));

    bool ok = true;
    // rho frequencies vs the prior, 3 binomial SEs.
    std::printf("%8s %10s %10s %12s\n", "rho", "freq", "prior", "3*SE");
    for (size_t k = 0; k < prior.rho_grid.size(); ++k) {
        const double freq = double(merged.rho_visit_counts[k]) / ndraw;
        const double p = prior.rho_probs[k];
        const double se3 = 3.0 * std::sqrt(p * (1 - p) / ndraw);
        const bool row_ok = std::abs(freq - p) <= se3;
        ok = ok && row_ok;
        std::printf("%8.2f %10.4f %10.2f %12.4f  %s\n", prior.rho_grid[k], freq, p, se3,
                    row_ok ? "ok" : "OUTSIDE");
    }
    // lambda mean per rho vs its prior mean sh*sc, within 5%.
    std::printf("%8s %12s %12s\n", "rho", "mean lambda", "prior mean");
    std::vector<double> lsum(prior.rho_grid.size(), 0.0);
    std::vector<long> lcnt(prior.rho_grid.size(), 0);
    double delta_var_sum = 0.0;
    long delta_var_cnt = 0;
    for (const Draw& d : merged.draws) {
        lsum[size_t(d.rho_index)] += d.lambda;
        ++lcnt[size_t(d.rho_index)];
        if (d.delta.size() > 0) {
            delta_var_sum += d.lambda * d.delta.squaredNorm() / double(d.delta.size());
            ++delta_var_cnt;
        }
    }
    for (size_t k = 0; k < prior.rho_grid.size(); ++k) {
        const double mean = lsum[k] / double(lcnt[k]);
        const double want = prior.sh * prior.sc[k];
        const bool row_ok = std::abs(mean / want - 1.0) <= 0.05;
        ok = ok && row_ok;
        std::printf("%8.2f %12.5f %12.5f  %s (n=%ld)\n", prior.rho_grid[k], mean, want,
                    row_ok ? "ok" : "OUTSIDE", lcnt[k]);
    }
    // normalized delta variance: mean of lambda*|delta|^2/q should be 1.
    const double dvar = delta_var_sum / double(delta_var_cnt);
    const bool dvar_ok = std::abs(dvar - 1.0) <= 0.05;
    ok = ok && dvar_ok;
    std::printf("mean lambda*|delta|^2/q = %.4f (within 5%% of 1: %s)\n", dvar,
                dvar_ok ? "yes" : "NO");

    const double dt = elapsed_s(t0);
    ok = ok && dt < 120.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "flat-likelihood chain returns its prior (rho, lambda, delta) in %.1fs", dt);
    return verdict(ok, "prior_recovery", buf);
}

// Empirical distribution of the lambda Gibbs step against the numerically
// integrated full conditional on a fixed state.
int check_gibbs_conjugacy() {
    const auto t0 = Clock::now();
    SmoothnessPrior prior;
    prior.rho_grid = {1.0};
    prior.rho_probs = {1.0};
    prior.sh = 0.5;
    prior.sc = {2.0};

    ModelState state;
    state.rho_index = 0;
    state.delta = Eigen::Vector3d(0.3, -0.2, 0.5);
    state.phi = Eigen::Vector3d::Zero();

    // Unnormalized conditional: lambda^(sh+q/2-1) exp(-lambda (1/sc + |d|^2/2));
    // here shape 2, rate 0.69. Integrated on a fine grid for the reference CDF.
    const double shape = prior.sh + 0.5 * double(state.delta.size());
    const double rate = 1.0 / prior.sc[0] + 0.5 * state.delta.squaredNorm();
    std::printf("conditional: shape %.3f rate %.5f\n", shape, rate);
    const double hi = 80.0 / rate;
    const int ngrid = 200001;
    std::vector<double> cdf(size_t(ngrid), 0.0);
    const double h = hi / (ngrid - 1);
    double prev = 0.0;  // density at 0 for shape 2
    for (int i = 1; i < ngrid; ++i) {
        const double xx = i * h;
        const double f = std::pow(xx, shape - 1.0) * std::exp(-rate * xx);
        cdf[size_t(i)] = cdf[size_t(i) - 1] + 0.5 * h * (prev + f);
        prev = f;
    }
    for (double& v : cdf) v /= cdf.back();

    const long ndraws = 1000000;
    Rng rng(20260815);
    std::vector<double> draws;
    draws.reserve(size_t(ndraws));
    for (long i = 0; i < ndraws; ++i)
        draws.push_back(gibbs_lambda(state, prior, rng).lambda);
    std::sort(draws.begin(), draws.end());

    double ks = 0.0;
    for (long i = 0; i < ndraws; ++i) {
        const double xx = draws[size_t(i)];
        double c;
        if (xx >= hi) {
            c = 1.0;
        } else {
            const double g = xx / h;
            const long i0 = long(g);
            const double w = g - double(i0);
            c = (1.0 - w) * cdf[size_t(i0)] + w * cdf[size_t(i0) + 1];
        }
        ks = std::max(ks, std::abs(c - double(i) / double(ndraws)));
        ks = std::max(ks, std::abs(c - double(i + 1) / double(ndraws)));
    }
    const double dt = elapsed_s(t0);
    const bool ok = ks < 0.01 && dt < 30.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "KS distance %.5f (< 0.01) over 1e6 draws vs grid-integrated conditional, "
                  "%.1fs",
                  ks, dt);
    return verdict(ok, "gibbs_conjugacy", buf);
}

// Simulates terminations from a known log-odds surface on a 30x10 grid with a
// 500-employee roster, fits the model, and checks the posterior recovers the
// surface's log-odds ratios.
int check_surface_recovery() {
    const auto t0 = Clock::now();
    const int p = 30, r = 10;
    AggregatedPanel panel = unit_panel(p, r);

    std::vector<double> beta_true(size_t(p) * r);
    const auto bump = [](double tt) {
        return 2.0 * std::exp(-(tt - 0.5) * (tt - 0.5) / (2.0 * 0.15 * 0.15));
    };
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < r; ++j)
            beta_true[size_t(i) * r + j] =
                -2.0 + 1.5 * std::max(0.0, panel.a[size_t(j)] - 0.4) * bump(panel.t[size_t(i)]);

    // Roster simulation: 500 employees aging across the window, involuntary
    // exits drawn cell-wise from the true surface, young replacement hires.
    const double drift = 0.0974;
    Rng sim(20260815);
    std::vector<double> ages(500);
    for (double& v : ages) v = 0.03 + sim.uniform() * (0.95 - drift - 0.03);
    long events = 0;
    for (int i = 0; i < p; ++i) {
        std::vector<double> next;
        next.reserve(ages.size());
        for (double a0 : ages) {
            const double aj = a0 + drift * panel.t[size_t(i)];
            const int j = std::min(int(aj * r), r - 1);
            panel.nref(i, j) += 1.0;
            if (sim.uniform() < logistic(beta_true[size_t(i) * r + j])) {
                panel.xref(i, j) += 1.0;
                ++events;
            } else {
                next.push_back(a0);
            }
        }
        while (next.size() < 500) next.push_back(0.03 + sim.uniform() * 0.32);
        ages = std::move(next);
    }
    double ntot = 0;
    for (double v : panel.n) ntot += v;
    std::printf("simulated %ld involuntary exits over %.0f person-periods\n", events, ntot);

    SmoothnessPrior prior;
    elicit_prior_scales(prior);
    const std::vector<SplineBasis> bases = bases_for(panel, prior);
    SamplerConfig cfg;
    cfg.iterations = 20000;
    cfg.burn_in = 4000;
    cfg.thin = 8;
    cfg.seed = 1729;
    cfg.jump_matrix = default_jump_matrix(6);
    const ChainOutput chain = run_chain(cfg, panel, prior, bases);
    std::printf("draws %zu, acceptance delta %.2f phi %.2f rho %.2f\n", chain.draws.size(),
                chain.acceptance.delta_rate(), chain.acceptance.phi_rate(),
                chain.acceptance.rho_rate());

    // Log-odds ratios against the under-0.4 reference band (bins 0..3), both
    // for the posterior draws and for the true surface with the same weights.
    const double cutoff = 0.4;
    const SurfaceSummary s = summarize(chain, panel, cutoff);
    const Eigen::VectorXd bt = Eigen::Map<const Eigen::VectorXd>(beta_true.data(),
                                                                 long(beta_true.size()));
    const std::vector<double> true_lor = lor_vs_under40(bt, panel, cutoff);

    std::vector<double> med_v, true_v;
    int hi_cells = 0, hi_detected = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < r; ++j) {
            const double m = s.median_at(i, j);
            const double tv = true_lor[size_t(i) * r + j];
            if (std::isnan(m) || std::isnan(tv)) continue;
            med_v.push_back(m);
            true_v.push_back(tv);
            if (tv >= 1.0) {
                ++hi_cells;
                if (s.prob_at(i, j) >= 0.7) ++hi_detected;
            }
        }
    const double corr = pearson(med_v, true_v);
    const double frac = hi_cells ? double(hi_detected) / double(hi_cells) : 0.0;
    const double dt = elapsed_s(t0);
    std::printf("Pearson(median LOR, true LOR) = %.3f over %zu cells\n", corr, med_v.size());
    std::printf("cells with true LOR >= 1: %d, of which P(OR>1) >= 0.7: %d (%.2f)\n", hi_cells,
                hi_detected, frac);

    const bool ok = corr >= 0.5 && hi_cells > 0 && frac >= 0.5 && dt < 600.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "correlation %.3f (>= 0.5), elevated-cell detection %.2f (>= 0.5), %.0fs", corr,
                  frac, dt);
    return verdict(ok, "surface_recovery", buf);
}

int check_determinism() {
    const fs::path dir_a = fs::temp_directory_path() / "hazard_accept_det_a";
    const fs::path dir_b = fs::temp_directory_path() / "hazard_accept_det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    RunConfig cfg = parse_config(slurp(fs::path(TEST_DATA_DIR) / "tiny_config.json"));
    cfg.flow_file = (fs::path(TEST_DATA_DIR) / "tiny_flow.txt").string();

    cfg.output_dir = dir_a.string();
    const int rc_a = cmd_analyze(cfg);
    cfg.output_dir = dir_b.string();
    const int rc_b = cmd_analyze(cfg);

    const std::string sa = slurp(dir_a / "surface.csv"), sb = slurp(dir_b / "surface.csv");
    const std::string ra = slurp(dir_a / "rho_table.csv"), rb = slurp(dir_b / "rho_table.csv");
    const bool ok = rc_a == 0 && rc_b == 0 && !sa.empty() && sa == sb && !ra.empty() && ra == rb;
    std::printf("surface.csv: %zu bytes vs %zu bytes, %s\n", sa.size(), sb.size(),
                sa == sb ? "identical" : "DIFFER");
    std::printf("rho_table.csv: %zu bytes vs %zu bytes, %s\n", ra.size(), rb.size(),
                ra == rb ? "identical" : "DIFFER");
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    return verdict(ok, "determinism",
                   ok ? "two identically seeded runs wrote byte-identical surface and "
                        "frequency-table CSVs"
                      : "repeated runs differ");
}

// Headline queries on the original involuntary-termination flow dataset. The
// file is not redistributable with this repository; the check is skipped
// unless it has been placed at data/casew_flow.txt (or $CASEW_FLOW).
int check_casew_headline() {
    std::vector<std::string> candidates;
    if (const char* env = std::getenv("CASEW_FLOW")) candidates.push_back(env);
    candidates.push_back("data/casew_flow.txt");
    candidates.push_back((fs::path(TEST_DATA_DIR) / "casew_flow.txt").string());
    std::string found;
    for (const std::string& c : candidates)
        if (!c.empty() && fs::exists(c)) { found = c; break; }
    if (found.empty())
        return skip("casew_headline",
                    "original flow dataset not present (searched $CASEW_FLOW, "
                    "data/casew_flow.txt, tests/data/casew_flow.txt)");

    const auto t0 = Clock::now();
    RunConfig cfg = default_config();
    cfg.flow_file = found;
    const AggregatedPanel panel = load_panel(cfg);
    double events = 0;
    for (double v : panel.x) events += v;
    std::printf("dataset %s: %d x %d panel, %.0f involuntary terminations\n", found.c_str(),
                panel.p, panel.r, events);

    const std::vector<SplineBasis> bases =
        compute_bases(panel, cfg.prior, cfg.sampler.trace_fraction);
    const std::vector<ChainOutput> chains = run_chains(cfg, panel, bases);
    const ChainOutput merged = merge_chains(chains, cfg.prior.rho_grid.size());
    const SurfaceSummary s = summarize(merged, panel, cfg.reference_cutoff_years);
    const RhoPosterior table = rho_posterior(merged, cfg.prior);

    bool ok = true;
    const auto q1121 = point_query(s, cfg.window.start_date + 1121, 56.5);
    std::printf("(day 1121, ages 56-57): median LOR %.4f (target 0.297 +/- 0.05), "
                "P(OR>1) %.4f (target 0.79 +/- 0.05)\n",
                q1121.first, q1121.second);
    ok = ok && std::abs(q1121.first - 0.297) <= 0.05 && std::abs(q1121.second - 0.79) <= 0.05;

    const auto q733_60 = point_query(s, cfg.window.start_date + 733, 60.0);
    const auto q733_50 = point_query(s, cfg.window.start_date + 733, 50.0);
    std::printf("(day 733, age 60): P %.4f (target 0.65 +/- 0.07); (day 733, age 50): P %.4f "
                "(target 0.37 +/- 0.07)\n",
                q733_60.second, q733_50.second);
    ok = ok && std::abs(q733_60.second - 0.65) <= 0.07 && std::abs(q733_50.second - 0.37) <= 0.07;

    const double freq_ref[6] = {0.122, 0.231, 0.286, 0.217, 0.101, 0.043};
    for (size_t k = 0; k < table.rows.size() && k < 6; ++k) {
        std::printf("rho %.2f: visit share %.4f (target %.3f +/- 0.02)\n", table.rows[k].rho,
                    table.rows[k].freq, freq_ref[k]);
        ok = ok && std::abs(table.rows[k].freq - freq_ref[k]) <= 0.02;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "headline queries on the original dataset, %.0fs",
                  elapsed_s(t0));
    return verdict(ok, "casew_headline", buf);
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr,
                     "usage: acceptance <criterion>\n"
                     "criteria: roughness_variance_table fisher_exact_value "
                     "rho_table_arithmetic basis_correctness prior_recovery gibbs_conjugacy "
                     "surface_recovery determinism casew_headline\n");
        return 2;
    }
    const std::string name = argv[1];
    try {
        if (name == "roughness_variance_table") return check_roughness_variance_table();
        if (name == "fisher_exact_value") return check_fisher_exact_value();
        if (name == "rho_table_arithmetic") return check_rho_table_arithmetic();
        if (name == "basis_correctness") return check_basis_correctness();
        if (name == "prior_recovery") return check_prior_recovery();
        if (name == "gibbs_conjugacy") return check_gibbs_conjugacy();
        if (name == "surface_recovery") return check_surface_recovery();
        if (name == "determinism") return check_determinism();
        if (name == "casew_headline") return check_casew_headline();
    } catch (const std::exception& e) {
        std::printf("[FAIL] %s -- unhandled exception: %s\n", name.c_str(), e.what());
        return 1;
    }
    std::fprintf(stderr, "unknown criterion '%s'\n", name.c_str());
    return 2;
}
