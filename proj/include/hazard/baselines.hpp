#pragma once
#include <vector>

#include "hazard/flowdata.hpp"

namespace hazard {

struct TwoByTwo {
    long x1 = 0, n1 = 0;  // events / at-risk in the focal group
    long x2 = 0, n2 = 0;  // events / at-risk in the comparison group
};

// Upper-tail probability P(X >= x1) under Hypergeometric(N = n1+n2,
// K = x1+x2, draws = n1), accumulated on the log-factorial scale.
double fisher_exact_one_sided(const TwoByTwo& t);

// One row per worker x time bin at risk, with the exact age at the bin
// start; the discrete-hazard expansion the regression baselines fit on.
struct PersonPeriod {
    double age_years = 0.0;
    int event = 0;
};
std::vector<PersonPeriod> person_periods(const std::vector<FlowRecord>& records,
                                         const ObservationWindow& window,
                                         const GridSpec& grid);

struct HingeFit {
    double intercept = 0.0;
    double coef = 0.0;  // slope on (age - knot)+
    double se = 0.0;
    double z = 0.0;
    double p_one_sided = 1.0;  // Wald test of coef > 0
    bool separated = false;
    int iterations = 0;
};

// Logistic regression of event on intercept + (age - knot_years)+, IRLS to
// gradient norm < 1e-8. A diverging coefficient (separation) is flagged in
// the result instead of thrown.
HingeFit hinge_age_fit(const std::vector<PersonPeriod>& data, double knot_years = 40.0);

struct QuarterCell {
    int year = 0;
    int quarter = 0;  // 1..4
    int decade = 0;   // age decade lower bound (20, 30, 40, 50, 60)
    double terminations = 0.0;
    double person_quarters = 0.0;
    double rate = 0.0;
};

// Involuntary-termination rate by calendar quarter x age decade over the
// window. Person-quarters are day-weighted: days at risk in the quarter and
// decade divided by the quarter's calendar length, with spells split where a
// worker's age crosses a decade boundary.
std::vector<QuarterCell> quarterly_rates(const std::vector<FlowRecord>& records,
                                         const ObservationWindow& window);

} // namespace hazard
