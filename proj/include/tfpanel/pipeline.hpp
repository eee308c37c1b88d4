#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tfpanel/gmm.hpp"
#include "tfpanel/ingest.hpp"
#include "tfpanel/unit_root.hpp"

namespace tfpanel {

/// Declarative description of one full run: input, transforms, test
/// selections, and model blocks. Parsed from the JSON config file; the
/// bundled replication configuration is available programmatically.
struct RunConfig {
    std::string input_csv;     // empty with use_skeleton -> bundled synthetic panel
    bool use_skeleton = false;
    LogPolicy log_policy = LogPolicy::Strict;
    bool classify_units = true;
    bool describe_enabled = true;
    bool describe_by_group = true;

    struct UnitRootBlock {
        std::vector<std::string> variables;
        int lags = 1;
        Deterministic det = Deterministic::Intercept;
        bool llc = true;
        bool ips = true;
        bool cd = true;
        bool include_differences = true; // re-test first differences
    };
    std::optional<UnitRootBlock> unit_root;

    struct CausalityBlock {
        std::vector<std::pair<std::string, std::string>> pairs; // cause -> effect
        int lags = 1;
    };
    std::optional<CausalityBlock> causality;

    struct ModelBlock {
        std::string name;
        std::string dependent;
        int lag_depth = 1;
        std::vector<std::pair<std::string, RegressorRole>> regressors;
        bool time_dummies = true;
        Scheme scheme = Scheme::System;
        Step step = Step::Two;
        bool windmeijer = true;
        std::optional<InstrumentPlan> plan; // absent -> default_plan(spec)
        std::vector<std::string> wald_subset;
        std::string group; // restrict to one income class when set
    };
    std::vector<ModelBlock> models;

    void validate() const; // structural checks with field-path messages
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config_json(const std::string& json_text);

/// The bundled replication run: synthetic skeleton input, signed-log policy,
/// grouped descriptives, unit-root and non-causality batteries, and the full
/// set of export / import / income model columns.
RunConfig default_replication_config();

struct PipelineOutcome {
    std::vector<std::string> artifacts; // file names written under out_dir
    int warning_count = 0;
};

/// Executes the configured run and writes tables (text + CSV), a
/// machine-readable results.json, and run.log under out_dir. Throws
/// ValidationError / EstimationError / IoError; the CLI maps these to exit
/// codes 1 / 2 / 3.
PipelineOutcome run_pipeline(const RunConfig& cfg, const std::filesystem::path& out_dir,
                             std::uint64_t seed);

} // namespace tfpanel
