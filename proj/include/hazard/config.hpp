#pragma once
#include <string>

#include "hazard/flowdata.hpp"
#include "hazard/sampler.hpp"
#include "hazard/tps.hpp"

namespace hazard {

// Settings for the classical 2x2 snapshot comparison: the workforce on a
// given day (offset into the window), split at an age cutoff, with events
// counted from that day to the end of the window.
struct BaselineConfig {
    int snapshot_day = 733;
    double age_cutoff_years = 60.0;
};

struct RunConfig {
    std::string flow_file;
    std::string output_dir = "out";
    ObservationWindow window;
    GridSpec grid;
    SmoothnessPrior prior;
    SamplerConfig sampler;
    int chains = 1;
    double reference_cutoff_years = 40.0;
    BaselineConfig baseline;
    bool write_beta_draws = false;
    bool explicit_sc = false;  // prior.sc supplied verbatim instead of elicited
};

// Defaults: weekly x 2-year bins on ages 20-66 over the 6/7/1989-11/21/1993
// window, the six-point anisotropy grid with prior (.08,.16,.26,.26,.16,.08),
// sh = 0.5 with elicited scales, tridiagonal 0.1-neighbour jumps, and one
// 20000-iteration chain keeping 19000 draws.
RunConfig default_config();

// Parse a JSON document (all fields optional, defaults above), validate
// every invariant, and resolve prior.sc (explicit list or elicited).
RunConfig parse_config(const std::string& json_text);

// parse_config on a file's contents; also requires flow_file, if set, to
// exist on disk.
RunConfig load_config(const std::string& path);

// Full echo of a resolved config, suitable for the run metadata record.
std::string config_to_json(const RunConfig& cfg);

} // namespace hazard
