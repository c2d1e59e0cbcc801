#pragma once
#include <string>
#include <vector>

#include "hazard/config.hpp"
#include "hazard/posterior.hpp"

namespace hazard {

inline constexpr const char* kVersion = "hazard 1.0.0";

// "%.6g" with NaN rendered as NA; every numeric CSV/console field goes
// through this.
std::string fmt6(double v);

// Parse + bin the configured flow file.
AggregatedPanel load_panel(const RunConfig& cfg, std::vector<FlowRecord>* records_out = nullptr);

// Per-rho bases for a panel, in rho-grid order.
std::vector<SplineBasis> compute_bases(const AggregatedPanel& panel, const SmoothnessPrior& prior,
                                       double trace_fraction);

// Configured multi-chain run: per-chain seeds derived from the run seed,
// chains executed concurrently, outputs merged in chain order.
std::vector<ChainOutput> run_chains(const RunConfig& cfg, const AggregatedPanel& panel,
                                    const std::vector<SplineBasis>& bases);
ChainOutput merge_chains(const std::vector<ChainOutput>& chains, size_t nrho);

// Artifact writers (deterministic byte-for-byte given equal inputs).
void write_panel_csv(const std::string& path, const AggregatedPanel& panel);
void write_surface_csv(const std::string& path, const SurfaceSummary& s);
void write_rho_csv(const std::string& path, const RhoPosterior& rp);
void write_trace_csv(const std::string& path, const ChainOutput& chain,
                     const SmoothnessPrior& prior);
void write_beta_bin(const std::string& path, const ChainOutput& chain);
void write_metadata(const std::string& path, const RunConfig& cfg,
                    const std::vector<SplineBasis>& bases, const ChainOutput& merged);

// Subcommand bodies; return a process exit code.
int cmd_ingest(const RunConfig& cfg);
int cmd_analyze(const RunConfig& cfg);
int cmd_baseline(const RunConfig& cfg);

} // namespace hazard
