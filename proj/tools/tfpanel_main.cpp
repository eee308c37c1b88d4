// Command-line front end: ingest, describe, unitroot, causality, estimate,
// replicate, fetch. Exit codes: 0 ok, 1 validation error, 2 estimation
// error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfpanel/causality.hpp"
#include "tfpanel/diagnostics.hpp"
#include "tfpanel/errors.hpp"
#include "tfpanel/ingest.hpp"
#include "tfpanel/pipeline.hpp"
#include "tfpanel/report.hpp"
#include "tfpanel/unit_root.hpp"

namespace fs = std::filesystem;
using namespace tfpanel;

namespace {

PanelDataset load_input(const std::string& input, bool skeleton, std::uint64_t seed,
                        LogPolicy policy, bool do_classify) {
    PanelDataset panel = skeleton ? replication_skeleton(seed) : load_csv(input);
    if (do_classify) panel = classify(panel, replication_classification());
    return build_model_variables(panel, replication_variables(), policy);
}

void write_table_files(const fs::path& out_dir, const std::string& stem,
                       const RenderedTable& table) {
    fs::create_directories(out_dir);
    std::ofstream txt(out_dir / (stem + ".txt"), std::ios::binary);
    txt << to_text(table);
    std::ofstream csv(out_dir / (stem + ".csv"), std::ios::binary);
    csv << to_csv(table);
    std::cout << "wrote " << (out_dir / (stem + ".txt")).string() << " and .csv\n";
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic panel GMM toolkit for trade-facilitation models"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string config_path;
    std::string out_dir = "out";
    bool offline = false;
    std::uint64_t seed = 42;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--offline", offline, "never touch the network");
    app.add_option("--seed", seed, "seed for synthetic data generation");

    // ingest
    auto* cmd_ingest = app.add_subcommand("ingest", "load, classify, and write a canonical CSV");
    std::string in_csv;
    bool make_skeleton = false;
    std::string policy_name = "strict";
    cmd_ingest->add_option("--input", in_csv, "wide CSV input");
    cmd_ingest->add_flag("--skeleton", make_skeleton, "use the bundled synthetic skeleton");
    cmd_ingest->add_option("--policy", policy_name, "log policy: strict | signed-log");

    // describe
    auto* cmd_describe = app.add_subcommand("describe", "descriptive statistics table");
    std::string d_input;
    bool d_skeleton = false;
    bool d_by_group = false;
    cmd_describe->add_option("--input", d_input, "wide CSV input");
    cmd_describe->add_flag("--skeleton", d_skeleton, "use the bundled synthetic skeleton");
    cmd_describe->add_flag("--by-group", d_by_group, "add per-income-class rows");

    // unitroot
    auto* cmd_ur = app.add_subcommand("unitroot", "LLC / IPS panel unit-root tests");
    std::string u_input, u_vars, u_det = "intercept", u_tests = "llc,ips,cd";
    bool u_skeleton = false;
    int u_lags = 1;
    cmd_ur->add_option("--input", u_input, "wide CSV input");
    cmd_ur->add_flag("--skeleton", u_skeleton, "use the bundled synthetic skeleton");
    cmd_ur->add_option("--vars", u_vars, "comma-separated variable list")->required();
    cmd_ur->add_option("--lags", u_lags, "ADF lag order");
    cmd_ur->add_option("--det", u_det, "deterministics: none | intercept | trend");
    cmd_ur->add_option("--tests", u_tests, "comma-separated subset of llc,ips,cd");

    // causality
    auto* cmd_ca = app.add_subcommand("causality", "panel Granger non-causality tests");
    std::string c_input, c_pairs;
    bool c_skeleton = false;
    int c_lags = 1;
    cmd_ca->add_option("--input", c_input, "wide CSV input");
    cmd_ca->add_flag("--skeleton", c_skeleton, "use the bundled synthetic skeleton");
    cmd_ca->add_option("--pairs", c_pairs, "semicolon-separated cause:effect pairs")->required();
    cmd_ca->add_option("--lags", c_lags, "lag order K");

    // estimate
    auto* cmd_est = app.add_subcommand("estimate", "run the model blocks from --config");

    // replicate
    auto* cmd_rep = app.add_subcommand("replicate", "full replication pipeline");
    std::string r_input;
    cmd_rep->add_option("--input", r_input, "wide CSV input (default: bundled skeleton)");

    // fetch
    auto* cmd_fetch = app.add_subcommand("fetch", "cache-through indicator fetch");
    std::string f_indicator, f_countries, f_years = "2010:2020", f_cache, f_host =
        "api.worldbank.org";
    int f_port = 80;
    cmd_fetch->add_option("--indicator", f_indicator, "indicator code")->required();
    cmd_fetch->add_option("--countries", f_countries, "comma-separated ISO alpha-3 codes")
        ->required();
    cmd_fetch->add_option("--years", f_years, "year range as begin:end");
    cmd_fetch->add_option("--cache", f_cache, "cache directory");
    cmd_fetch->add_option("--host", f_host, "API host");
    cmd_fetch->add_option("--port", f_port, "API port");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_ingest->parsed()) {
            LogPolicy policy;
            if (policy_name == "strict")
                policy = LogPolicy::Strict;
            else if (policy_name == "signed-log")
                policy = LogPolicy::SignedLog;
            else
                throw ValidationError("--policy: unknown value '" + policy_name + "'");
            if (in_csv.empty() && !make_skeleton)
                throw ValidationError("ingest: provide --input or --skeleton");
            PanelDataset panel = load_input(in_csv, make_skeleton, seed, policy, true);
            fs::create_directories(out_dir);
            write_csv(panel, fs::path(out_dir) / "canonical.csv");
            int lower = 0, upper = 0;
            for (const auto& t : panel.group_tags())
                (t == kLowerMiddleLabel ? lower : upper)++;
            std::cout << "panel: " << panel.n_units() << " units x " << panel.n_periods()
                      << " periods (" << lower << " lower-middle, " << upper
                      << " upper-middle)\n"
                      << "wrote " << (fs::path(out_dir) / "canonical.csv").string() << "\n";
        } else if (cmd_describe->parsed()) {
            if (d_input.empty() && !d_skeleton)
                throw ValidationError("describe: provide --input or --skeleton");
            PanelDataset panel =
                load_input(d_input, d_skeleton, seed, LogPolicy::SignedLog, d_by_group);
            std::vector<std::string> vars;
            for (const auto& v : replication_variables()) vars.push_back(v.label);
            std::vector<DescriptiveRow> rows = describe(panel, false, vars);
            if (d_by_group) {
                auto grouped = describe(panel, true, vars);
                rows.insert(rows.end(), grouped.begin(), grouped.end());
            }
            write_table_files(out_dir, "descriptives",
                              render_descriptive_table(rows, "Descriptive statistics"));
        } else if (cmd_ur->parsed()) {
            if (u_input.empty() && !u_skeleton)
                throw ValidationError("unitroot: provide --input or --skeleton");
            PanelDataset panel =
                load_input(u_input, u_skeleton, seed, LogPolicy::SignedLog, false);
            Deterministic det = u_det == "none" ? Deterministic::None
                                : u_det == "trend" ? Deterministic::InterceptTrend
                                                   : Deterministic::Intercept;
            AdfSpec spec{u_lags, det};
            auto tests = split_list(u_tests, ',');
            std::vector<std::pair<std::string, UnitRootResult>> rows;
            std::vector<std::pair<std::string, TestResult>> cd_rows;
            for (const auto& v : split_list(u_vars, ',')) {
                for (const auto& t : tests) {
                    if (t == "llc") rows.emplace_back(v, llc_test(panel, v, spec));
                    else if (t == "ips") rows.emplace_back(v, ips_test(panel, v, spec));
                    else if (t == "cd") cd_rows.emplace_back(v, pesaran_cd(panel, v));
                    else throw ValidationError("--tests: unknown test '" + t + "'");
                }
            }
            write_table_files(out_dir, "unit_roots", render_unit_root_table(rows, cd_rows));
        } else if (cmd_ca->parsed()) {
            if (c_input.empty() && !c_skeleton)
                throw ValidationError("causality: provide --input or --skeleton");
            PanelDataset panel =
                load_input(c_input, c_skeleton, seed, LogPolicy::SignedLog, false);
            std::vector<DhResult> rows;
            for (const auto& pair_text : split_list(c_pairs, ';')) {
                auto parts = split_list(pair_text, ':');
                if (parts.size() != 2)
                    throw ValidationError("--pairs: expected cause:effect, got '" + pair_text +
                                          "'");
                rows.push_back(dh_test(panel, parts[0], parts[1], c_lags));
            }
            write_table_files(out_dir, "causality", render_causality_table(rows));
        } else if (cmd_est->parsed()) {
            if (config_path.empty())
                throw ValidationError("estimate: --config is required");
            RunConfig cfg = load_run_config(config_path);
            PipelineOutcome outcome = run_pipeline(cfg, out_dir, seed);
            std::cout << "wrote " << outcome.artifacts.size() << " artifact(s) under "
                      << out_dir << " (" << outcome.warning_count << " warning(s))\n";
        } else if (cmd_rep->parsed()) {
            RunConfig cfg =
                config_path.empty() ? default_replication_config() : load_run_config(config_path);
            if (!r_input.empty()) {
                cfg.input_csv = r_input;
                cfg.use_skeleton = false;
            }
            PipelineOutcome outcome = run_pipeline(cfg, out_dir, seed);
            std::cout << "replication complete: " << outcome.artifacts.size()
                      << " artifact(s) under " << out_dir << " (" << outcome.warning_count
                      << " warning(s))\n";
        } else if (cmd_fetch->parsed()) {
            auto years = split_list(f_years, ':');
            if (years.size() != 2) throw ValidationError("--years: expected begin:end");
            FetchRequest req;
            req.indicator = f_indicator;
            req.countries = split_list(f_countries, ',');
            req.year_begin = std::stoi(years[0]);
            req.year_end = std::stoi(years[1]);
            req.cache_dir = f_cache;
            FetchOptions opts;
            opts.offline = offline;
            opts.host = f_host;
            opts.port = f_port;
            auto records = fetch_indicators(req, opts);
            long observed = 0;
            for (const auto& r : records)
                if (r.value) ++observed;
            std::cout << "fetched " << records.size() << " record(s), " << observed
                      << " observed\n";
        }
    } catch (const EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
