#include "hazard/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hazard {

using nlohmann::json;

namespace {

Date parse_date_field(const json& j, const char* what) {
    if (!j.is_string())
        throw std::invalid_argument(std::string("config: ") + what + " must be an M/D/YYYY string");
    const auto s = j.get<std::string>();
    const auto d = parse_date_mdy(s);
    if (!d) throw std::invalid_argument(std::string("config: bad date '") + s + "' for " + what);
    return *d;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("config: " + msg);
}

} // namespace

RunConfig default_config() {
    RunConfig cfg;
    cfg.window.start_date = *parse_date_mdy("6/7/1989");
    cfg.window.end_date = *parse_date_mdy("11/21/1993");
    cfg.sampler.iterations = 20000;
    cfg.sampler.burn_in = 1000;
    cfg.sampler.thin = 1;
    cfg.sampler.seed = 1729;
    cfg.sampler.jump_matrix = default_jump_matrix(static_cast<int>(cfg.prior.rho_grid.size()));
    elicit_prior_scales(cfg.prior);
    return cfg;
}

namespace {

RunConfig parse_config_checked(const std::string& json_text) {
    RunConfig cfg = default_config();
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    require(doc.is_object(), "top level must be an object");

    bool sc_given = false;
    bool jump_given = false;
    if (doc.contains("flow_file")) cfg.flow_file = doc["flow_file"].get<std::string>();
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("chains")) cfg.chains = doc["chains"].get<int>();
    if (doc.contains("reference_cutoff_years"))
        cfg.reference_cutoff_years = doc["reference_cutoff_years"].get<double>();
    if (doc.contains("write_beta_draws")) cfg.write_beta_draws = doc["write_beta_draws"].get<bool>();

    if (doc.contains("window")) {
        const json& w = doc["window"];
        if (w.contains("start")) cfg.window.start_date = parse_date_field(w["start"], "window.start");
        if (w.contains("end")) cfg.window.end_date = parse_date_field(w["end"], "window.end");
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        if (g.contains("time_bin_days")) cfg.grid.time_bin_days = g["time_bin_days"].get<int>();
        if (g.contains("age_bin_years")) cfg.grid.age_bin_years = g["age_bin_years"].get<int>();
        if (g.contains("age_min_years")) cfg.grid.age_min_years = g["age_min_years"].get<int>();
        if (g.contains("age_max_years")) cfg.grid.age_max_years = g["age_max_years"].get<int>();
    }

    if (doc.contains("prior")) {
        const json& p = doc["prior"];
        if (p.contains("rho_grid")) cfg.prior.rho_grid = p["rho_grid"].get<std::vector<double>>();
        if (p.contains("rho_probs")) cfg.prior.rho_probs = p["rho_probs"].get<std::vector<double>>();
        if (p.contains("sh")) cfg.prior.sh = p["sh"].get<double>();
        if (p.contains("bound")) cfg.prior.bound = p["bound"].get<double>();
        if (p.contains("alpha")) cfg.prior.alpha = p["alpha"].get<double>();
        if (p.contains("d_t")) cfg.prior.d_t = p["d_t"].get<double>();
        if (p.contains("d_a")) cfg.prior.d_a = p["d_a"].get<double>();
        if (p.contains("sc") && !p["sc"].is_null()) {
            cfg.prior.sc = p["sc"].get<std::vector<double>>();
            sc_given = true;
        }
    }

    if (doc.contains("sampler")) {
        const json& s = doc["sampler"];
        if (s.contains("iterations")) cfg.sampler.iterations = s["iterations"].get<long>();
        if (s.contains("burn_in")) cfg.sampler.burn_in = s["burn_in"].get<long>();
        if (s.contains("thin")) cfg.sampler.thin = s["thin"].get<long>();
        if (s.contains("seed")) cfg.sampler.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("phi_prior_precision"))
            cfg.sampler.phi_prior_precision = s["phi_prior_precision"].get<double>();
        if (s.contains("trace_fraction"))
            cfg.sampler.trace_fraction = s["trace_fraction"].get<double>();
        if (s.contains("jump_matrix") && !s["jump_matrix"].is_null()) {
            const auto rows = s["jump_matrix"].get<std::vector<std::vector<double>>>();
            const auto k = rows.size();
            Eigen::MatrixXd jm(k, k);
            for (size_t i = 0; i < k; ++i) {
                require(rows[i].size() == k, "jump_matrix must be square");
                for (size_t j = 0; j < k; ++j) jm(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j)) = rows[i][j];
            }
            cfg.sampler.jump_matrix = jm;
            jump_given = true;
        }
    }
    if (doc.contains("baseline")) {
        const json& b = doc["baseline"];
        if (b.contains("snapshot_day")) cfg.baseline.snapshot_day = b["snapshot_day"].get<int>();
        if (b.contains("age_cutoff_years"))
            cfg.baseline.age_cutoff_years = b["age_cutoff_years"].get<double>();
    }

    // --- validation -----------------------------------------------------
    require(cfg.window.start_date < cfg.window.end_date, "window start must precede its end");
    require(cfg.grid.time_bin_days >= 1, "time_bin_days must be at least 1");
    require(cfg.grid.age_bin_years >= 1, "age_bin_years must be at least 1");
    require(cfg.grid.age_max_years > cfg.grid.age_min_years, "empty age range");
    cfg.grid.age_bins();  // throws when the span is not a multiple of the width

    const size_t nrho = cfg.prior.rho_grid.size();
    require(nrho > 0, "rho_grid is empty");
    require(cfg.prior.rho_probs.size() == nrho, "rho_probs length differs from rho_grid");
    for (double r : cfg.prior.rho_grid) require(r > 0.0, "rho values must be positive");
    double psum = 0.0;
    for (double p : cfg.prior.rho_probs) {
        require(p > 0.0, "rho_probs must be positive");
        psum += p;
    }
    require(std::fabs(psum - 1.0) <= 1e-8, "rho_probs must sum to 1");
    require(cfg.prior.sh > 0.0, "sh must be positive");
    require(cfg.prior.bound > 0.0, "elicitation bound must be positive");
    require(cfg.prior.alpha > 0.0 && cfg.prior.alpha < 1.0, "alpha must lie in (0,1)");
    require(cfg.prior.d_t > 0.0 && cfg.prior.d_a > 0.0, "elicitation spacings must be positive");

    if (sc_given) {
        require(cfg.prior.sc.size() == nrho, "sc length differs from rho_grid");
        for (double s : cfg.prior.sc) require(s > 0.0, "sc values must be positive");
        cfg.explicit_sc = true;
    } else {
        elicit_prior_scales(cfg.prior);
    }

    if (!jump_given)
        cfg.sampler.jump_matrix = default_jump_matrix(static_cast<int>(nrho));
    const auto& jm = cfg.sampler.jump_matrix;
    require(jm.rows() == static_cast<Eigen::Index>(nrho) &&
                jm.cols() == static_cast<Eigen::Index>(nrho),
            "jump_matrix size differs from rho_grid");
    for (Eigen::Index i = 0; i < jm.rows(); ++i) {
        require(std::fabs(jm.row(i).sum() - 1.0) <= 1e-12,
                "jump_matrix row " + std::to_string(i) + " does not sum to 1");
        require(std::fabs(jm.col(i).sum() - 1.0) <= 1e-12,
                "jump_matrix column " + std::to_string(i) + " does not sum to 1");
        for (Eigen::Index j = 0; j < jm.cols(); ++j) {
            require(jm(i, j) >= 0.0, "jump_matrix entries must be non-negative");
            require(std::abs(i - j) <= 1 || jm(i, j) == 0.0, "jump_matrix must be tridiagonal");
        }
    }

    require(cfg.sampler.iterations > 0, "iterations must be positive");
    require(cfg.sampler.burn_in >= 0, "burn_in must be non-negative");
    require(cfg.sampler.burn_in <= cfg.sampler.iterations, "burn_in exceeds iterations");
    require(cfg.sampler.thin >= 1, "thin must be at least 1");
    require(cfg.sampler.phi_prior_precision > 0.0, "phi_prior_precision must be positive");
    require(cfg.sampler.trace_fraction > 0.0 && cfg.sampler.trace_fraction <= 1.0,
            "trace_fraction must lie in (0,1]");
    require(cfg.chains >= 1, "chains must be at least 1");
    require(cfg.baseline.snapshot_day >= 0 &&
                cfg.baseline.snapshot_day < cfg.window.span_days(),
            "baseline snapshot_day outside the window");
    return cfg;
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    try {
        return parse_config_checked(json_text);
    } catch (const json::exception& e) {
        // Wrong JSON types for known fields surface as configuration errors.
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg = parse_config(buf.str());
    if (!cfg.flow_file.empty() && !std::filesystem::exists(cfg.flow_file))
        throw std::invalid_argument("config: flow_file '" + cfg.flow_file + "' does not exist");
    return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
    json doc;
    doc["flow_file"] = cfg.flow_file;
    doc["output_dir"] = cfg.output_dir;
    doc["window"] = {{"start", format_date_mdy(cfg.window.start_date)},
                     {"end", format_date_mdy(cfg.window.end_date)}};
    doc["grid"] = {{"time_bin_days", cfg.grid.time_bin_days},
                   {"age_bin_years", cfg.grid.age_bin_years},
                   {"age_min_years", cfg.grid.age_min_years},
                   {"age_max_years", cfg.grid.age_max_years}};
    doc["prior"] = {{"rho_grid", cfg.prior.rho_grid},
                    {"rho_probs", cfg.prior.rho_probs},
                    {"sh", cfg.prior.sh},
                    {"bound", cfg.prior.bound},
                    {"alpha", cfg.prior.alpha},
                    {"d_t", cfg.prior.d_t},
                    {"d_a", cfg.prior.d_a},
                    {"sc", cfg.prior.sc}};
    std::vector<std::vector<double>> jm(static_cast<size_t>(cfg.sampler.jump_matrix.rows()));
    for (Eigen::Index i = 0; i < cfg.sampler.jump_matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < cfg.sampler.jump_matrix.cols(); ++j)
            jm[static_cast<size_t>(i)].push_back(cfg.sampler.jump_matrix(i, j));
    doc["sampler"] = {{"iterations", cfg.sampler.iterations},
                      {"burn_in", cfg.sampler.burn_in},
                      {"thin", cfg.sampler.thin},
                      {"seed", cfg.sampler.seed},
                      {"phi_prior_precision", cfg.sampler.phi_prior_precision},
                      {"trace_fraction", cfg.sampler.trace_fraction},
                      {"jump_matrix", jm}};
    doc["chains"] = cfg.chains;
    doc["reference_cutoff_years"] = cfg.reference_cutoff_years;
    doc["baseline"] = {{"snapshot_day", cfg.baseline.snapshot_day},
                       {"age_cutoff_years", cfg.baseline.age_cutoff_years}};
    doc["write_beta_draws"] = cfg.write_beta_draws;
    return doc.dump(2);
}

} // namespace hazard
