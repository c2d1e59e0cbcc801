#pragma once
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hazard/dates.hpp"

namespace hazard {

enum class Reason { Involuntary, Voluntary, Censored };

// One employment spell: entry, optional separation, and why it ended.
// Voluntary covers quits, deaths and retirements; Censored means the spell
// was still open when the data were collected (no separation date).
struct FlowRecord {
    Date birth_date;
    Date entry_date;
    std::optional<Date> separation_date;
    Reason reason = Reason::Censored;
};

struct ObservationWindow {
    Date start_date;
    Date end_date; // exclusive
    int span_days() const { return end_date - start_date; }
};

struct GridSpec {
    int time_bin_days = 7;
    int age_bin_years = 2;
    int age_min_years = 20;
    int age_max_years = 66;

    int time_bins(const ObservationWindow& w) const {
        return (w.span_days() + time_bin_days - 1) / time_bin_days;
    }
    int age_bins() const {
        if ((age_max_years - age_min_years) % age_bin_years != 0)
            throw std::invalid_argument("grid: age span not a multiple of the bin width");
        return (age_max_years - age_min_years) / age_bin_years;
    }
};

// Grid counts plus the scaled bin coordinates the smoothing model works in.
// t, a are bin centers rescaled to (0,1); age_years holds the bin lower edges.
struct AggregatedPanel {
    int p = 0, r = 0;
    std::vector<double> n; // p*r, row-major (time outer, age inner)
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> a;
    std::vector<double> age_years;
    std::vector<double> age_upper; // bin upper edges, for reference-class membership
    ObservationWindow window; // echoed so summaries can be queried by date
    GridSpec grid;

    double& nref(int i, int j) { return n[static_cast<size_t>(i) * r + j]; }
    double& xref(int i, int j) { return x[static_cast<size_t>(i) * r + j]; }
    double nat(int i, int j) const { return n[static_cast<size_t>(i) * r + j]; }
    double xat(int i, int j) const { return x[static_cast<size_t>(i) * r + j]; }
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Reads whitespace- or comma-delimited rows: birth entry separation reason,
// dates M/D/YYYY, separation/reason "n/a" for open spells. Reason strings
// ("Invol", "Vol", case-insensitive) per the flow-data format.
std::vector<FlowRecord> parse_flow_file(std::istream& in);

// Bins person-periods onto the time x age grid. An employee is at risk in
// bin i when entered on or before the bin start and not yet separated; the
// age bin is taken at the bin-start date. Involuntary separations inside the
// window contribute the event count for the bin containing the separation.
AggregatedPanel discretize(const std::vector<FlowRecord>& records,
                           const ObservationWindow& window, const GridSpec& grid);

} // namespace hazard
