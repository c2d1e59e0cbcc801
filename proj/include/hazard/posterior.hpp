#pragma once
#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "hazard/dates.hpp"
#include "hazard/flowdata.hpp"
#include "hazard/sampler.hpp"
#include "hazard/tps.hpp"

namespace hazard {

// Cell-wise posterior summary of the log-odds-ratio surface. Cells in time
// bins with no under-cutoff reference population hold NaN (exported as NA).
struct SurfaceSummary {
    int p = 0, r = 0;
    std::vector<double> median_lor;    // p*r, row-major (time outer)
    std::vector<double> prob_or_gt_1;  // p*r
    std::vector<double> t, a, age_years;  // echoed panel coordinates
    ObservationWindow window;             // echoed for date/age lookups
    GridSpec grid;

    double median_at(int i, int j) const { return median_lor[static_cast<size_t>(i) * r + j]; }
    double prob_at(int i, int j) const { return prob_or_gt_1[static_cast<size_t>(i) * r + j]; }
};

struct RhoRow {
    double rho = 0.0;
    double prior_prob = 0.0;
    double freq = 0.0;           // visit frequency over recorded draws
    double freq_lo = 0.0, freq_hi = 0.0;    // Wald 95% bounds, clipped to [0,1]
    double ml_ratio = 0.0;       // freq / prior
    double ml_lo = 0.0, ml_hi = 0.0;
};

struct RhoPosterior {
    std::vector<RhoRow> rows;
    long total_draws = 0;
};

// Log-odds ratio of every cell against the same-time reference class: age
// bins whose upper edge is at or below cutoff_years. Reference termination
// probability is the n-weighted mean of logistic(beta) over those bins; time
// bins with zero reference population give NaN across the row.
std::vector<double> lor_vs_under40(const Eigen::VectorXd& beta, const AggregatedPanel& panel,
                                   double cutoff_years = 40.0);

// Draw-wise LOR reduced to per-cell medians (midpoint of the two middle
// values for even draw counts) and exceedance probabilities P(LOR > 0),
// draws exactly at zero counting as not exceeding.
SurfaceSummary summarize(const ChainOutput& chain, const AggregatedPanel& panel,
                         double cutoff_years = 40.0);

// Visit-frequency table with binomial Wald intervals and the
// frequency/prior marginal-likelihood ratios.
RhoPosterior rho_posterior_from_counts(const std::vector<long>& counts, long total,
                                       const SmoothnessPrior& prior);
RhoPosterior rho_posterior(const ChainOutput& chain, const SmoothnessPrior& prior);

// Cell lookup by calendar date and age in years; no interpolation. Throws
// std::out_of_range naming the valid ranges for points off the grid.
std::pair<double, double> point_query(const SurfaceSummary& summary, Date date,
                                      double age_years);

} // namespace hazard
