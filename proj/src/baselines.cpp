#include "hazard/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "hazard/special.hpp"

namespace hazard {

namespace {

double lfact(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

double fisher_exact_one_sided(const TwoByTwo& t) {
    if (t.x1 < 0 || t.x2 < 0 || t.x1 > t.n1 || t.x2 > t.n2)
        throw std::invalid_argument("fisher_exact_one_sided: counts outside [0, n]");
    const long N = t.n1 + t.n2, K = t.x1 + t.x2;
    if (N == 0) return 1.0;
    const long lo = std::max(0L, K - t.n2);
    const long hi = std::min(t.n1, K);
    if (t.x1 <= lo) return 1.0;
    const double lden = lfact(N) - lfact(t.n1) - lfact(N - t.n1);
    double p = 0.0;
    for (long x = t.x1; x <= hi; ++x) {
        const double lnum = lfact(K) - lfact(x) - lfact(K - x) + lfact(N - K) -
                            lfact(t.n1 - x) - lfact(N - K - t.n1 + x);
        p += std::exp(lnum - lden);
    }
    return std::min(p, 1.0);
}

std::vector<PersonPeriod> person_periods(const std::vector<FlowRecord>& records,
                                         const ObservationWindow& window,
                                         const GridSpec& grid) {
    if (window.span_days() <= 0) throw std::invalid_argument("person_periods: empty window");
    const int p = grid.time_bins(window);
    std::vector<PersonPeriod> out;
    for (const FlowRecord& rec : records) {
        for (int i = 0; i < p; ++i) {
            const Date bin_start = window.start_date + i * grid.time_bin_days;
            if (rec.entry_date > bin_start) continue;
            if (rec.separation_date && *rec.separation_date < bin_start) break;
            PersonPeriod pp;
            pp.age_years = (bin_start - rec.birth_date) / 365.25;
            pp.event = 0;
            if (rec.reason == Reason::Involuntary && rec.separation_date &&
                *rec.separation_date >= window.start_date &&
                *rec.separation_date < window.end_date &&
                (*rec.separation_date - window.start_date) / grid.time_bin_days == i)
                pp.event = 1;
            out.push_back(pp);
        }
    }
    return out;
}

HingeFit hinge_age_fit(const std::vector<PersonPeriod>& data, double knot_years) {
    long events = 0;
    double hmin = 0.0, hmax = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
        events += data[i].event;
        const double h = std::max(0.0, data[i].age_years - knot_years);
        if (i == 0) hmin = hmax = h;
        hmin = std::min(hmin, h);
        hmax = std::max(hmax, h);
    }
    if (data.empty() || events == 0)
        throw std::invalid_argument("hinge_age_fit: no events in the data");
    if (hmax - hmin < 1e-12)
        throw std::invalid_argument("hinge_age_fit: hinge covariate is constant");

    const double n = static_cast<double>(data.size());
    Eigen::Vector2d b(logit(std::min(0.999, std::max(1e-3, events / n))), 0.0);
    HingeFit fit;

    for (int it = 1; it <= 100; ++it) {
        fit.iterations = it;
        Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
        Eigen::Vector2d grad = Eigen::Vector2d::Zero();
        for (const PersonPeriod& pp : data) {
            const double h = std::max(0.0, pp.age_years - knot_years);
            const double eta = b[0] + b[1] * h;
            const double p = logistic(eta);
            const double w = p * (1.0 - p);
            const double resid = pp.event - p;
            grad[0] += resid;
            grad[1] += resid * h;
            info(0, 0) += w;
            info(0, 1) += w * h;
            info(1, 1) += w * h * h;
        }
        info(1, 0) = info(0, 1);

        const double det = info.determinant();
        if (!(det > 1e-12) || !std::isfinite(det)) break;  // flat or broken curvature

        if (grad.norm() < 1e-8) {
            Eigen::Matrix2d cov = info.inverse();
            fit.intercept = b[0];
            fit.coef = b[1];
            fit.se = std::sqrt(cov(1, 1));
            fit.z = fit.coef / fit.se;
            fit.p_one_sided = 1.0 - std_normal_cdf(fit.z);
            return fit;
        }

        b += info.inverse() * grad;
        if (std::fabs(b[1]) > 30.0 || !b.allFinite()) break;  // runaway slope
    }

    // Separation (or failure to converge from it): report the last iterate.
    fit.separated = true;
    fit.intercept = b.allFinite() ? b[0] : 0.0;
    fit.coef = b.allFinite() ? b[1] : 0.0;
    fit.se = std::numeric_limits<double>::infinity();
    fit.z = 0.0;
    fit.p_one_sided = 1.0;
    return fit;
}

namespace {

struct QuarterKey {
    int year, quarter, decade;
    bool operator<(const QuarterKey& o) const {
        if (year != o.year) return year < o.year;
        if (quarter != o.quarter) return quarter < o.quarter;
        return decade < o.decade;
    }
};

int quarter_of(Date d) {
    int y, m, day;
    d.to_ymd(y, m, day);
    return (m - 1) / 3 + 1;
}

int year_of(Date d) {
    int y, m, day;
    d.to_ymd(y, m, day);
    return y;
}

Date quarter_start(Date d) {
    int y, m, day;
    d.to_ymd(y, m, day);
    return Date::from_ymd(y, 3 * ((m - 1) / 3) + 1, 1);
}

Date next_quarter_start(Date d) {
    int y, m, day;
    d.to_ymd(y, m, day);
    const int q = (m - 1) / 3 + 1;
    return q == 4 ? Date::from_ymd(y + 1, 1, 1) : Date::from_ymd(y, 3 * q + 1, 1);
}

int decade_of(Date d, Date birth) {
    const double age = (d - birth) / 365.25;
    return 10 * static_cast<int>(std::floor(age / 10.0));
}

// First day on or after d where the age decade changes.
Date next_decade_crossing(Date d, Date birth) {
    const int next = decade_of(d, birth) + 10;
    return birth + static_cast<int>(std::ceil(next * 365.25));
}

} // namespace

std::vector<QuarterCell> quarterly_rates(const std::vector<FlowRecord>& records,
                                         const ObservationWindow& window) {
    if (window.span_days() <= 0) throw std::invalid_argument("quarterly_rates: empty window");
    std::map<QuarterKey, QuarterCell> cells;

    auto cell = [&](Date day, int decade) -> QuarterCell& {
        const QuarterKey key{year_of(day), quarter_of(day), decade};
        QuarterCell& c = cells[key];
        c.year = key.year;
        c.quarter = key.quarter;
        c.decade = decade;
        return c;
    };

    const Date last_window_day = window.end_date + (-1);

    for (const FlowRecord& rec : records) {
        // Employed through the separation day itself, matching the risk-set
        // convention of the grid aggregation.
        Date from = std::max(rec.entry_date, window.start_date);
        Date to = rec.separation_date ? std::min(*rec.separation_date, last_window_day)
                                      : last_window_day;
        for (Date d = from; d <= to;) {
            const Date q_end = next_quarter_start(d) + (-1);
            const Date a_end = next_decade_crossing(d, rec.birth_date) + (-1);
            const Date seg_end = std::min({to, q_end, a_end});
            const int dec = decade_of(d, rec.birth_date);
            if (dec >= 20 && dec <= 60) {
                const double qdays = next_quarter_start(d) - quarter_start(d);
                cell(d, dec).person_quarters += (seg_end - d + 1) / qdays;
            }
            d = seg_end + 1;
        }
        if (rec.reason == Reason::Involuntary && rec.separation_date &&
            *rec.separation_date >= window.start_date &&
            *rec.separation_date < window.end_date) {
            const int dec = decade_of(*rec.separation_date, rec.birth_date);
            if (dec >= 20 && dec <= 60) cell(*rec.separation_date, dec).terminations += 1.0;
        }
    }

    std::vector<QuarterCell> out;
    out.reserve(cells.size());
    for (auto& [key, c] : cells) {
        c.rate = c.person_quarters > 0.0 ? c.terminations / c.person_quarters
                                         : std::numeric_limits<double>::quiet_NaN();
        out.push_back(c);
    }
    return out;
}

} // namespace hazard
