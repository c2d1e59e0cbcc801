#include "hazard/flowdata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace hazard {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

std::vector<FlowRecord> parse_flow_file(std::istream& in) {
    std::vector<FlowRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (tok.size() != 4) throw ParseError(lineno, "expected 4 fields, got " + std::to_string(tok.size()));

        FlowRecord rec;
        auto birth = parse_date_mdy(tok[0]);
        if (!birth) throw ParseError(lineno, "malformed birth date '" + tok[0] + "'");
        auto entry = parse_date_mdy(tok[1]);
        if (!entry) throw ParseError(lineno, "malformed entry date '" + tok[1] + "'");
        rec.birth_date = *birth;
        rec.entry_date = *entry;

        const std::string sep_s = lower(tok[2]), reason_s = lower(tok[3]);
        if (sep_s == "n/a") {
            if (reason_s != "n/a")
                throw ParseError(lineno, "reason given without a separation date");
            rec.reason = Reason::Censored;
        } else {
            auto sep = parse_date_mdy(tok[2]);
            if (!sep) throw ParseError(lineno, "malformed separation date '" + tok[2] + "'");
            rec.separation_date = *sep;
            if (reason_s == "invol") rec.reason = Reason::Involuntary;
            else if (reason_s == "vol") rec.reason = Reason::Voluntary;
            else if (reason_s == "n/a") throw ParseError(lineno, "separation date without a reason");
            else throw ParseError(lineno, "unknown reason '" + tok[3] + "'");
        }

        if (rec.birth_date >= rec.entry_date)
            throw ParseError(lineno, "birth date is not before entry date");
        if (rec.separation_date && *rec.separation_date < rec.entry_date)
            throw ParseError(lineno, "separation before entry");
        records.push_back(rec);
    }
    return records;
}

AggregatedPanel discretize(const std::vector<FlowRecord>& records,
                           const ObservationWindow& window, const GridSpec& grid) {
    if (window.span_days() <= 0) throw std::invalid_argument("discretize: empty window");
    AggregatedPanel panel;
    panel.p = grid.time_bins(window);
    panel.r = grid.age_bins();
    panel.window = window;
    panel.grid = grid;
    panel.n.assign(static_cast<size_t>(panel.p) * panel.r, 0.0);
    panel.x.assign(static_cast<size_t>(panel.p) * panel.r, 0.0);
    panel.t.resize(panel.p);
    panel.a.resize(panel.r);
    panel.age_years.resize(panel.r);
    panel.age_upper.resize(panel.r);
    for (int i = 0; i < panel.p; ++i) panel.t[i] = (i + 0.5) / panel.p;
    for (int j = 0; j < panel.r; ++j) {
        panel.a[j] = (j + 0.5) / panel.r;
        panel.age_years[j] = grid.age_min_years + j * grid.age_bin_years;
        panel.age_upper[j] = grid.age_min_years + (j + 1.0) * grid.age_bin_years;
    }

    for (size_t w = 0; w < records.size(); ++w) {
        const FlowRecord& rec = records[w];
        for (int i = 0; i < panel.p; ++i) {
            const Date bin_start = window.start_date + i * grid.time_bin_days;
            if (rec.entry_date > bin_start) continue;
            if (rec.separation_date && *rec.separation_date < bin_start) break;
            const double age = (bin_start - rec.birth_date) / 365.25;
            const int j = static_cast<int>(std::floor((age - grid.age_min_years) /
                                                      static_cast<double>(grid.age_bin_years)));
            if (j < 0 || j >= panel.r)
                throw std::invalid_argument(
                    "discretize: record " + std::to_string(w + 1) + " (entry " +
                    format_date_mdy(rec.entry_date) + ") has age " + std::to_string(age) +
                    " outside the grid at " + format_date_mdy(bin_start));
            panel.nref(i, j) += 1.0;
            // Event lands in the bin whose half-open day range contains the
            // separation; it coincides with the last at-risk bin, so x<=n holds.
            if (rec.reason == Reason::Involuntary && rec.separation_date &&
                *rec.separation_date >= window.start_date &&
                *rec.separation_date < window.end_date) {
                const int ev_bin = (*rec.separation_date - window.start_date) / grid.time_bin_days;
                if (ev_bin == i) panel.xref(i, j) += 1.0;
            }
        }
    }
    return panel;
}

} // namespace hazard
