#include "hazard/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hazard/special.hpp"

namespace hazard {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> lor_vs_under40(const Eigen::VectorXd& beta, const AggregatedPanel& panel,
                                   double cutoff_years) {
    const size_t cells = panel.n.size();
    if (static_cast<size_t>(beta.size()) != cells)
        throw std::invalid_argument("lor_vs_under40: beta length does not match the panel");
    if (panel.age_upper.size() != static_cast<size_t>(panel.r))
        throw std::invalid_argument("lor_vs_under40: panel is missing age bin edges");

    std::vector<int> ref;
    for (int j = 0; j < panel.r; ++j)
        if (panel.age_upper[static_cast<size_t>(j)] <= cutoff_years + 1e-9) ref.push_back(j);

    std::vector<double> lor(cells, kNaN);
    for (int i = 0; i < panel.p; ++i) {
        double wsum = 0.0, psum = 0.0;
        for (int j : ref) {
            const double nij = panel.nat(i, j);
            wsum += nij;
            psum += nij * logistic(beta[static_cast<Eigen::Index>(i) * panel.r + j]);
        }
        if (wsum == 0.0) continue;  // no reference population: NaN row
        const double ref_logit = logit(psum / wsum);
        for (int j = 0; j < panel.r; ++j) {
            const size_t c = static_cast<size_t>(i) * panel.r + j;
            lor[c] = beta[static_cast<Eigen::Index>(c)] - ref_logit;
        }
    }
    return lor;
}

SurfaceSummary summarize(const ChainOutput& chain, const AggregatedPanel& panel,
                         double cutoff_years) {
    const size_t ndraws = chain.draws.size();
    if (ndraws == 0) throw std::invalid_argument("summarize: chain holds no draws");
    const size_t cells = panel.n.size();

    // Draw-major LOR table; the NaN pattern is per-row constant because it
    // only depends on the fixed reference counts.
    std::vector<std::vector<double>> lors;
    lors.reserve(ndraws);
    for (const Draw& d : chain.draws) lors.push_back(lor_vs_under40(d.beta, panel, cutoff_years));

    SurfaceSummary s;
    s.p = panel.p;
    s.r = panel.r;
    s.t = panel.t;
    s.a = panel.a;
    s.age_years = panel.age_years;
    s.window = panel.window;
    s.grid = panel.grid;
    s.median_lor.assign(cells, kNaN);
    s.prob_or_gt_1.assign(cells, kNaN);

    std::vector<double> col(ndraws);
    for (size_t c = 0; c < cells; ++c) {
        if (std::isnan(lors[0][c])) continue;
        long exceed = 0;
        for (size_t d = 0; d < ndraws; ++d) {
            col[d] = lors[d][c];
            if (col[d] > 0.0) ++exceed;
        }
        std::sort(col.begin(), col.end());
        const size_t m = ndraws / 2;
        s.median_lor[c] = (ndraws % 2 == 1) ? col[m] : 0.5 * (col[m - 1] + col[m]);
        s.prob_or_gt_1[c] = static_cast<double>(exceed) / static_cast<double>(ndraws);
    }
    return s;
}

RhoPosterior rho_posterior_from_counts(const std::vector<long>& counts, long total,
                                       const SmoothnessPrior& prior) {
    if (counts.size() != prior.rho_grid.size())
        throw std::invalid_argument("rho_posterior: counts do not match the rho grid");
    if (total <= 0) throw std::invalid_argument("rho_posterior: no draws");

    RhoPosterior out;
    out.total_draws = total;
    out.rows.reserve(counts.size());
    for (size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < 0) throw std::invalid_argument("rho_posterior: negative count");
        RhoRow row;
        row.rho = prior.rho_grid[k];
        row.prior_prob = prior.rho_probs[k];
        row.freq = static_cast<double>(counts[k]) / static_cast<double>(total);
        const double se = std::sqrt(row.freq * (1.0 - row.freq) / static_cast<double>(total));
        row.freq_lo = std::max(0.0, row.freq - 1.96 * se);
        row.freq_hi = std::min(1.0, row.freq + 1.96 * se);
        if (row.prior_prob <= 0.0) {
            if (counts[k] > 0)
                throw std::invalid_argument("rho_posterior: sampler visited a rho with zero "
                                            "prior probability");
            row.ml_ratio = row.ml_lo = row.ml_hi = kNaN;
        } else {
            row.ml_ratio = row.freq / row.prior_prob;
            row.ml_lo = row.freq_lo / row.prior_prob;
            row.ml_hi = row.freq_hi / row.prior_prob;
        }
        out.rows.push_back(row);
    }
    return out;
}

RhoPosterior rho_posterior(const ChainOutput& chain, const SmoothnessPrior& prior) {
    if (chain.draws.empty()) throw std::invalid_argument("rho_posterior: chain holds no draws");
    return rho_posterior_from_counts(chain.rho_visit_counts,
                                     static_cast<long>(chain.draws.size()), prior);
}

std::pair<double, double> point_query(const SurfaceSummary& summary, Date date,
                                      double age_years) {
    const auto& w = summary.window;
    if (date < w.start_date || date >= w.end_date)
        throw std::out_of_range("point_query: date " + format_date_mdy(date) +
                                " outside the observation window [" +
                                format_date_mdy(w.start_date) + ", " +
                                format_date_mdy(w.end_date) + ")");
    const int i = (date - w.start_date) / summary.grid.time_bin_days;

    const auto& g = summary.grid;
    const double jreal = (age_years - g.age_min_years) / static_cast<double>(g.age_bin_years);
    const int j = static_cast<int>(std::floor(jreal));
    if (age_years < g.age_min_years || j >= summary.r)
        throw std::out_of_range("point_query: age " + std::to_string(age_years) +
                                " outside the grid [" + std::to_string(g.age_min_years) + ", " +
                                std::to_string(g.age_min_years + summary.r * g.age_bin_years) +
                                ")");
    return {summary.median_at(i, j), summary.prob_at(i, j)};
}

} // namespace hazard
