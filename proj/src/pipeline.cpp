#include "hazard/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hazard/baselines.hpp"
#include "hazard/special.hpp"

namespace hazard {

namespace fs = std::filesystem;

std::string fmt6(double v) {
    if (std::isnan(v)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

AggregatedPanel load_panel(const RunConfig& cfg, std::vector<FlowRecord>* records_out) {
    if (cfg.flow_file.empty())
        throw std::invalid_argument("no flow file configured");
    std::ifstream in(cfg.flow_file);
    if (!in) throw std::invalid_argument("cannot open flow file '" + cfg.flow_file + "'");
    std::vector<FlowRecord> records = parse_flow_file(in);
    AggregatedPanel panel = discretize(records, cfg.window, cfg.grid);
    if (records_out) *records_out = std::move(records);
    return panel;
}

std::vector<SplineBasis> compute_bases(const AggregatedPanel& panel, const SmoothnessPrior& prior,
                                       double trace_fraction) {
    const Eigen::MatrixXd L = linear_design(panel.t, panel.a);
    const Eigen::MatrixXd P = projection(L);
    std::vector<SplineBasis> bases;
    bases.reserve(prior.rho_grid.size());
    for (double rho : prior.rho_grid) {
        const Eigen::MatrixXd K = kernel_matrix(panel.t, panel.a, rho);
        bases.push_back(build_basis(K, P, trace_fraction, rho));
    }
    return bases;
}

std::vector<ChainOutput> run_chains(const RunConfig& cfg, const AggregatedPanel& panel,
                                    const std::vector<SplineBasis>& bases) {
    std::vector<ChainOutput> outputs(static_cast<size_t>(cfg.chains));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(cfg.chains));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(cfg.chains));
    for (int k = 0; k < cfg.chains; ++k) {
        workers.emplace_back([&, k] {
            try {
                SamplerConfig sc = cfg.sampler;
                sc.seed = Rng::stream_seed(cfg.sampler.seed, static_cast<std::uint64_t>(k));
                outputs[static_cast<size_t>(k)] = run_chain(sc, panel, cfg.prior, bases);
            } catch (...) {
                errors[static_cast<size_t>(k)] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (int k = 0; k < cfg.chains; ++k) {
        if (!errors[static_cast<size_t>(k)]) continue;
        try {
            std::rethrow_exception(errors[static_cast<size_t>(k)]);
        } catch (const std::exception& e) {
            throw std::runtime_error("chain " + std::to_string(k) + ": " + e.what());
        }
    }
    return outputs;
}

ChainOutput merge_chains(const std::vector<ChainOutput>& chains, size_t nrho) {
    ChainOutput merged;
    merged.rho_visit_counts.assign(nrho, 0);
    for (const ChainOutput& c : chains) {
        merged.draws.insert(merged.draws.end(), c.draws.begin(), c.draws.end());
        for (size_t k = 0; k < nrho; ++k) merged.rho_visit_counts[k] += c.rho_visit_counts[k];
        merged.acceptance.delta_proposed += c.acceptance.delta_proposed;
        merged.acceptance.delta_accepted += c.acceptance.delta_accepted;
        merged.acceptance.phi_proposed += c.acceptance.phi_proposed;
        merged.acceptance.phi_accepted += c.acceptance.phi_accepted;
        merged.acceptance.rho_proposed += c.acceptance.rho_proposed;
        merged.acceptance.rho_accepted += c.acceptance.rho_accepted;
        merged.acceptance.rho_scale_rejects += c.acceptance.rho_scale_rejects;
    }
    return merged;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

} // namespace

void write_panel_csv(const std::string& path, const AggregatedPanel& panel) {
    auto out = open_out(path);
    out << "time_bin,age_bin,t,a,age_years,n,x\n";
    for (int i = 0; i < panel.p; ++i)
        for (int j = 0; j < panel.r; ++j)
            out << i << ',' << j << ',' << fmt6(panel.t[static_cast<size_t>(i)]) << ','
                << fmt6(panel.a[static_cast<size_t>(j)]) << ','
                << fmt6(panel.age_years[static_cast<size_t>(j)]) << ',' << fmt6(panel.nat(i, j))
                << ',' << fmt6(panel.xat(i, j)) << '\n';
}

void write_surface_csv(const std::string& path, const SurfaceSummary& s) {
    auto out = open_out(path);
    out << "time_bin,age_bin,t,a,age_years,median_lor,prob_or_gt_1\n";
    for (int i = 0; i < s.p; ++i)
        for (int j = 0; j < s.r; ++j)
            out << i << ',' << j << ',' << fmt6(s.t[static_cast<size_t>(i)]) << ','
                << fmt6(s.a[static_cast<size_t>(j)]) << ','
                << fmt6(s.age_years[static_cast<size_t>(j)]) << ',' << fmt6(s.median_at(i, j))
                << ',' << fmt6(s.prob_at(i, j)) << '\n';
}

void write_rho_csv(const std::string& path, const RhoPosterior& rp) {
    auto out = open_out(path);
    out << "rho,prior,posterior,p025,p975,ml_ratio,ml_p025,ml_p975\n";
    for (const RhoRow& r : rp.rows)
        out << fmt6(r.rho) << ',' << fmt6(r.prior_prob) << ',' << fmt6(r.freq) << ','
            << fmt6(r.freq_lo) << ',' << fmt6(r.freq_hi) << ',' << fmt6(r.ml_ratio) << ','
            << fmt6(r.ml_lo) << ',' << fmt6(r.ml_hi) << '\n';
}

void write_trace_csv(const std::string& path, const ChainOutput& chain,
                     const SmoothnessPrior& prior) {
    auto out = open_out(path);
    out << "iter,rho,lambda,loglik\n";
    for (const Draw& d : chain.draws)
        out << d.iteration << ',' << fmt6(prior.rho_grid[static_cast<size_t>(d.rho_index)]) << ','
            << fmt6(d.lambda) << ',' << fmt6(d.loglik) << '\n';
}

void write_beta_bin(const std::string& path, const ChainOutput& chain) {
    auto out = open_out(path);
    for (const Draw& d : chain.draws)
        out.write(reinterpret_cast<const char*>(d.beta.data()),
                  static_cast<std::streamsize>(sizeof(double)) * d.beta.size());
}

void write_metadata(const std::string& path, const RunConfig& cfg,
                    const std::vector<SplineBasis>& bases, const ChainOutput& merged) {
    nlohmann::json doc;
    doc["version"] = kVersion;
    doc["seed"] = cfg.sampler.seed;
    doc["chains"] = cfg.chains;
    doc["draws"] = merged.draws.size();
    doc["parametrization"] = {
        {"lambda_prior", "Gamma(sh, rate 1/sc): sc is the scale, prior mean sh*sc"},
        {"lambda_jump_map", "lambda_new = lambda * sc_current / sc_target"},
        {"working_response", "count-level binomial: yhat = eta + (x - n p)/(n p (1-p))"},
        {"sweep_order", "delta, phi, lambda, rho"}};
    doc["sc_source"] = cfg.explicit_sc ? "explicit" : "elicited";
    doc["sc"] = cfg.prior.sc;
    std::vector<int> q, zeros;
    for (const SplineBasis& b : bases) {
        q.push_back(b.q);
        zeros.push_back(b.zero_count);
    }
    doc["basis_rank_q"] = q;
    doc["basis_zero_eigenvalues"] = zeros;
    doc["acceptance"] = {{"delta", merged.acceptance.delta_rate()},
                         {"phi", merged.acceptance.phi_rate()},
                         {"rho", merged.acceptance.rho_rate()},
                         {"rho_scale_rejects", merged.acceptance.rho_scale_rejects}};
    doc["config"] = nlohmann::json::parse(config_to_json(cfg));
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

int cmd_ingest(const RunConfig& cfg) {
    std::vector<FlowRecord> records;
    AggregatedPanel panel;
    try {
        panel = load_panel(cfg, &records);
    } catch (const ParseError& e) {
        std::cerr << "ingest: " << cfg.flow_file << ": " << e.what() << "\n";
        return 1;
    }
    fs::create_directories(cfg.output_dir);
    const std::string path = cfg.output_dir + "/panel.csv";
    write_panel_csv(path, panel);

    double events = 0.0, exposure = 0.0;
    for (size_t c = 0; c < panel.x.size(); ++c) {
        events += panel.x[c];
        exposure += panel.n[c];
    }
    std::cout << "employees: " << records.size() << "\n"
              << "involuntary terminations in window: " << fmt6(events) << "\n"
              << "person-periods at risk: " << fmt6(exposure) << "\n"
              << "window: " << format_date_mdy(cfg.window.start_date) << " to "
              << format_date_mdy(cfg.window.end_date) << " (" << cfg.window.span_days()
              << " days)\n"
              << "grid: " << panel.p << " time bins x " << panel.r << " age bins\n"
              << "panel: " << path << "\n";
    return 0;
}

int cmd_analyze(const RunConfig& cfg) {
    AggregatedPanel panel = load_panel(cfg);
    fs::create_directories(cfg.output_dir);

    std::vector<SplineBasis> bases =
        compute_bases(panel, cfg.prior, cfg.sampler.trace_fraction);
    std::cout << "bases ready; q per rho:";
    for (const SplineBasis& b : bases) std::cout << ' ' << b.q;
    std::cout << "\n";

    std::vector<ChainOutput> chains = run_chains(cfg, panel, bases);
    ChainOutput merged = merge_chains(chains, cfg.prior.rho_grid.size());
    if (merged.draws.empty())
        throw std::runtime_error("analyze: no post-burn-in draws were recorded");

    for (size_t k = 0; k < chains.size(); ++k) {
        write_trace_csv(cfg.output_dir + "/trace_chain" + std::to_string(k) + ".csv",
                        chains[k], cfg.prior);
        if (cfg.write_beta_draws)
            write_beta_bin(cfg.output_dir + "/beta_chain" + std::to_string(k) + ".bin",
                           chains[k]);
    }

    const SurfaceSummary surface = summarize(merged, panel, cfg.reference_cutoff_years);
    const RhoPosterior rho_table = rho_posterior(merged, cfg.prior);
    write_surface_csv(cfg.output_dir + "/surface.csv", surface);
    write_rho_csv(cfg.output_dir + "/rho_table.csv", rho_table);
    write_metadata(cfg.output_dir + "/runmeta.json", cfg, bases, merged);

    std::cout << "chains: " << cfg.chains << ", draws: " << merged.draws.size() << "\n"
              << "acceptance: delta " << fmt6(merged.acceptance.delta_rate()) << ", phi "
              << fmt6(merged.acceptance.phi_rate()) << ", rho "
              << fmt6(merged.acceptance.rho_rate()) << "\n";
    std::cout << "rho posterior:";
    for (const RhoRow& r : rho_table.rows)
        std::cout << "  " << fmt6(r.rho) << ":" << fmt6(r.freq);
    std::cout << "\nartifacts in " << cfg.output_dir << "\n";
    return 0;
}

int cmd_baseline(const RunConfig& cfg) {
    std::vector<FlowRecord> records;
    try {
        load_panel(cfg, &records);
    } catch (const ParseError& e) {
        std::cerr << "baseline: " << cfg.flow_file << ": " << e.what() << "\n";
        return 1;
    }
    fs::create_directories(cfg.output_dir);

    auto report = open_out(cfg.output_dir + "/baseline_report.csv");
    report << "test,statistic,p_value,groups\n";

    // 2x2 snapshot at the configured day, split at the age cutoff, counting
    // involuntary separations from that day to the end of the window.
    const Date day = cfg.window.start_date + cfg.baseline.snapshot_day;
    TwoByTwo tab;
    for (const FlowRecord& rec : records) {
        if (rec.entry_date > day) continue;
        if (rec.separation_date && *rec.separation_date < day) continue;
        const bool focal = (day - rec.birth_date) / 365.25 >= cfg.baseline.age_cutoff_years;
        const bool event = rec.reason == Reason::Involuntary && rec.separation_date &&
                           *rec.separation_date >= day &&
                           *rec.separation_date < cfg.window.end_date;
        (focal ? tab.n1 : tab.n2) += 1;
        if (event) (focal ? tab.x1 : tab.x2) += 1;
    }
    if (tab.n1 + tab.n2 > 0) {
        const double p = fisher_exact_one_sided(tab);
        const std::string groups = std::to_string(tab.x1) + " of " + std::to_string(tab.n1) +
                                   " aged >= " + fmt6(cfg.baseline.age_cutoff_years) + " vs " +
                                   std::to_string(tab.x2) + " of " + std::to_string(tab.n2) +
                                   " younger; day " + std::to_string(cfg.baseline.snapshot_day);
        report << "fisher_exact_one_sided," << tab.x1 << ',' << fmt6(p) << ",\"" << groups
               << "\"\n";
        std::cout << "fisher one-sided p = " << fmt6(p) << " (" << groups << ")\n";
    }

    const auto periods = person_periods(records, cfg.window, cfg.grid);
    try {
        const HingeFit fit = hinge_age_fit(periods, cfg.reference_cutoff_years);
        const std::string note = fit.separated ? "separated fit" : "Wald one-sided";
        report << "hinge_age_logistic," << fmt6(fit.coef) << ',' << fmt6(fit.p_one_sided)
               << ",\"slope on (age-" << fmt6(cfg.reference_cutoff_years)
               << ")+ per person-period; " << note << "\"\n";
        std::cout << "hinge slope = " << fmt6(fit.coef) << " (se " << fmt6(fit.se)
                  << "), one-sided p = " << fmt6(fit.p_one_sided)
                  << (fit.separated ? " [separated]" : "") << "\n";
    } catch (const std::invalid_argument& e) {
        std::cout << "hinge fit skipped: " << e.what() << "\n";
    }

    const auto quarters = quarterly_rates(records, cfg.window);
    auto qcsv = open_out(cfg.output_dir + "/quarterly_rates.csv");
    qcsv << "year,quarter,decade,terminations,person_quarters,rate\n";
    for (const QuarterCell& c : quarters)
        qcsv << c.year << ',' << c.quarter << ',' << c.decade << ',' << fmt6(c.terminations)
             << ',' << fmt6(c.person_quarters) << ',' << fmt6(c.rate) << '\n';

    std::cout << "report in " << cfg.output_dir << "\n";
    return 0;
}

} // namespace hazard
