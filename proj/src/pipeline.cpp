#include "tfpanel/pipeline.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tfpanel/causality.hpp"
#include "tfpanel/diagnostics.hpp"
#include "tfpanel/errors.hpp"
#include "tfpanel/report.hpp"
#include "tfpanel/stats.hpp"

namespace tfpanel {

using ordered_json = nlohmann::ordered_json;

namespace {

RegressorRole role_from(const std::string& text, const std::string& field) {
    if (text == "exogenous") return RegressorRole::Exogenous;
    if (text == "predetermined") return RegressorRole::Predetermined;
    if (text == "endogenous") return RegressorRole::Endogenous;
    throw ValidationError(field + ": unknown role '" + text + "'");
}

const char* role_name(RegressorRole role) {
    switch (role) {
    case RegressorRole::Exogenous: return "exogenous";
    case RegressorRole::Predetermined: return "predetermined";
    case RegressorRole::Endogenous: return "endogenous";
    }
    return "?";
}

Deterministic det_from(const std::string& text, const std::string& field) {
    if (text == "none") return Deterministic::None;
    if (text == "intercept") return Deterministic::Intercept;
    if (text == "trend" || text == "intercept+trend") return Deterministic::InterceptTrend;
    throw ValidationError(field + ": unknown deterministic '" + text + "'");
}

template <typename T>
T get_or(const ordered_json& j, const char* key, T fallback, const std::string& field) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(field + "." + key + ": wrong type");
    }
}

} // namespace

void RunConfig::validate() const {
    if (input_csv.empty() && !use_skeleton)
        throw ValidationError("config: either input or skeleton must be set");
    if (!describe_enabled && models.empty() && !unit_root && !causality)
        throw ValidationError("config: nothing to do (no describe, tests, or models)");
    std::set<std::string> names;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& m = models[i];
        const std::string field = "models[" + std::to_string(i) + "]";
        if (m.name.empty()) throw ValidationError(field + ".name: empty");
        if (!names.insert(m.name).second)
            throw ValidationError(field + ".name: duplicate '" + m.name + "'");
        if (m.dependent.empty()) throw ValidationError(field + ".dependent: empty");
        if (m.lag_depth < 1) throw ValidationError(field + ".lag_depth: must be >= 1");
    }
    if (unit_root && unit_root->variables.empty())
        throw ValidationError("unit_root.variables: empty");
    if (causality && causality->pairs.empty())
        throw ValidationError("causality.pairs: empty");
}

RunConfig parse_run_config_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }

    RunConfig cfg;
    cfg.input_csv = get_or<std::string>(j, "input", "", "config");
    cfg.use_skeleton = get_or<bool>(j, "skeleton", false, "config");
    const std::string policy = get_or<std::string>(j, "log_policy", "strict", "config");
    if (policy == "strict")
        cfg.log_policy = LogPolicy::Strict;
    else if (policy == "signed-log")
        cfg.log_policy = LogPolicy::SignedLog;
    else
        throw ValidationError("config.log_policy: unknown value '" + policy + "'");
    cfg.classify_units = get_or<bool>(j, "classify", true, "config");

    if (j.contains("describe")) {
        const auto& d = j.at("describe");
        cfg.describe_enabled = get_or<bool>(d, "enabled", true, "describe");
        cfg.describe_by_group = get_or<bool>(d, "by_group", true, "describe");
    }

    if (j.contains("unit_root")) {
        const auto& u = j.at("unit_root");
        RunConfig::UnitRootBlock block;
        if (!u.contains("variables"))
            throw ValidationError("unit_root.variables: required");
        block.variables = u.at("variables").get<std::vector<std::string>>();
        block.lags = get_or<int>(u, "lags", 1, "unit_root");
        block.det = det_from(get_or<std::string>(u, "deterministic", "intercept", "unit_root"),
                             "unit_root.deterministic");
        block.llc = get_or<bool>(u, "llc", true, "unit_root");
        block.ips = get_or<bool>(u, "ips", true, "unit_root");
        block.cd = get_or<bool>(u, "cd", true, "unit_root");
        block.include_differences = get_or<bool>(u, "differences", true, "unit_root");
        cfg.unit_root = std::move(block);
    }

    if (j.contains("causality")) {
        const auto& c = j.at("causality");
        RunConfig::CausalityBlock block;
        block.lags = get_or<int>(c, "lags", 1, "causality");
        if (!c.contains("pairs")) throw ValidationError("causality.pairs: required");
        for (std::size_t i = 0; i < c.at("pairs").size(); ++i) {
            const auto& p = c.at("pairs")[i];
            if (!p.is_array() || p.size() != 2)
                throw ValidationError("causality.pairs[" + std::to_string(i) +
                                      "]: expected [cause, effect]");
            block.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
        cfg.causality = std::move(block);
    }

    if (j.contains("models")) {
        for (std::size_t i = 0; i < j.at("models").size(); ++i) {
            const auto& m = j.at("models")[i];
            const std::string field = "models[" + std::to_string(i) + "]";
            RunConfig::ModelBlock block;
            block.name = get_or<std::string>(m, "name", "model" + std::to_string(i), field);
            if (!m.contains("dependent"))
                throw ValidationError(field + ".dependent: required");
            block.dependent = m.at("dependent").get<std::string>();
            block.lag_depth = get_or<int>(m, "lag_depth", 1, field);
            if (m.contains("regressors")) {
                for (std::size_t r = 0; r < m.at("regressors").size(); ++r) {
                    const auto& reg = m.at("regressors")[r];
                    const std::string rfield =
                        field + ".regressors[" + std::to_string(r) + "]";
                    if (reg.is_string()) {
                        block.regressors.emplace_back(reg.get<std::string>(),
                                                      RegressorRole::Predetermined);
                    } else {
                        if (!reg.contains("name"))
                            throw ValidationError(rfield + ".name: required");
                        block.regressors.emplace_back(
                            reg.at("name").get<std::string>(),
                            role_from(get_or<std::string>(reg, "role", "predetermined", rfield),
                                      rfield + ".role"));
                    }
                }
            }
            block.time_dummies = get_or<bool>(m, "time_dummies", true, field);
            const std::string scheme = get_or<std::string>(m, "scheme", "system", field);
            if (scheme == "difference")
                block.scheme = Scheme::Difference;
            else if (scheme == "system")
                block.scheme = Scheme::System;
            else
                throw ValidationError(field + ".scheme: unknown value '" + scheme + "'");
            const int step = get_or<int>(m, "step", 2, field);
            if (step == 1)
                block.step = Step::One;
            else if (step == 2)
                block.step = Step::Two;
            else
                throw ValidationError(field + ".step: must be 1 or 2");
            block.windmeijer = get_or<bool>(m, "windmeijer", true, field);
            block.group = get_or<std::string>(m, "group", "", field);
            if (m.contains("wald_subset"))
                block.wald_subset = m.at("wald_subset").get<std::vector<std::string>>();
            if (m.contains("plan")) {
                const auto& pj = m.at("plan");
                InstrumentPlan plan;
                if (pj.contains("gmm")) {
                    for (const auto& g : pj.at("gmm")) {
                        GmmStyleInstrument ins;
                        ins.variable = g.at("variable").get<std::string>();
                        ins.min_lag = get_or<int>(g, "min_lag", 2, field + ".plan.gmm");
                        ins.max_lag = get_or<int>(g, "max_lag", -1, field + ".plan.gmm");
                        ins.collapse = get_or<bool>(g, "collapse", true, field + ".plan.gmm");
                        plan.gmm_style.push_back(std::move(ins));
                    }
                }
                if (pj.contains("iv"))
                    plan.iv_style = pj.at("iv").get<std::vector<std::string>>();
                plan.level_lag_depth = get_or<int>(pj, "level_lag_depth", 1, field + ".plan");
                plan.level_collapse = get_or<bool>(pj, "level_collapse", true, field + ".plan");
                plan.level_constant = get_or<bool>(pj, "level_constant", true, field + ".plan");
                plan.level_time_dummies =
                    get_or<bool>(pj, "level_time_dummies", true, field + ".plan");
                block.plan = std::move(plan);
            }
            cfg.models.push_back(std::move(block));
        }
    }

    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_run_config_json(os.str());
}

namespace {

std::vector<std::pair<std::string, RegressorRole>>
replication_regressors(const std::string& dependent, bool overall_lpi) {
    std::vector<std::string> names = {"ATCE", "lnPCT", "AFT", "QPI"};
    if (overall_lpi) {
        names.push_back("LPI");
    } else {
        for (const char* lpi : {"LPIAC", "LPICQ", "LPIEA", "LPIEC", "LPIFS", "LPIQTT"})
            names.push_back(lpi);
    }
    names.push_back("TRF");
    if (dependent == "lnGNI") {
        names.push_back("lnEXPG");
        names.push_back("lnIMPG");
    }
    names.push_back("lnFDI");
    names.push_back("lnGFCF");

    std::vector<std::pair<std::string, RegressorRole>> out;
    for (const auto& n : names) out.emplace_back(n, RegressorRole::Predetermined);
    return out;
}

std::vector<std::string> trade_facilitation_subset(bool overall_lpi) {
    std::vector<std::string> subset = {"ATCE", "lnPCT", "AFT", "QPI"};
    if (overall_lpi) {
        subset.push_back("LPI");
    } else {
        for (const char* lpi : {"LPIAC", "LPICQ", "LPIEA", "LPIEC", "LPIFS", "LPIQTT"})
            subset.push_back(lpi);
    }
    subset.push_back("TRF");
    return subset;
}

} // namespace

RunConfig default_replication_config() {
    RunConfig cfg;
    cfg.use_skeleton = true;
    cfg.log_policy = LogPolicy::SignedLog;
    cfg.classify_units = true;
    cfg.describe_enabled = true;
    cfg.describe_by_group = true;

    RunConfig::UnitRootBlock ur;
    ur.variables = {"lnGNI", "lnEXPG", "lnIMPG", "ATCE", "lnPCT", "AFT", "QPI", "LPI", "TRF"};
    ur.lags = 1;
    cfg.unit_root = std::move(ur);

    RunConfig::CausalityBlock ca;
    ca.lags = 1;
    const char* gni_targets[] = {"ATCE", "AFT", "QPI", "LPIAC", "LPICQ",
                                 "LPIEA", "LPIFS", "LPI", "LPIQTT", "TRF"};
    ca.pairs.emplace_back("lnEXPG", "lnGNI");
    ca.pairs.emplace_back("lnGNI", "lnEXPG");
    ca.pairs.emplace_back("lnIMPG", "lnGNI");
    ca.pairs.emplace_back("lnGNI", "lnIMPG");
    ca.pairs.emplace_back("lnPCT", "lnGNI");
    for (const char* t : gni_targets) ca.pairs.emplace_back("lnGNI", t);
    ca.pairs.emplace_back("lnIMPG", "lnEXPG");
    ca.pairs.emplace_back("lnEXPG", "lnIMPG");
    ca.pairs.emplace_back("lnPCT", "lnEXPG");
    for (const char* t : {"ATCE", "AFT", "QPI", "LPIAC", "LPICQ", "LPIEA", "LPIEC", "LPIFS",
                          "LPI", "LPIQTT", "TRF"})
        ca.pairs.emplace_back("lnEXPG", t);
    ca.pairs.emplace_back("lnPCT", "lnIMPG");
    for (const char* t : {"ATCE", "AFT", "QPI", "LPIAC", "LPICQ", "LPIEA", "LPIEC", "LPIFS",
                          "LPI", "LPIQTT", "TRF"})
        ca.pairs.emplace_back("lnIMPG", t);
    cfg.causality = std::move(ca);

    // Full-sample model columns, Tables 4-6 layout: for each dependent, the
    // logistics-index set then the overall-index set, each as one-step and
    // two-step difference and system GMM.
    for (const char* dep : {"lnEXPG", "lnIMPG", "lnGNI"}) {
        for (bool overall : {false, true}) {
            for (const auto& [scheme, scheme_tag] :
                 {std::pair{Scheme::Difference, "diff"}, std::pair{Scheme::System, "sys"}}) {
                for (const auto& [step, step_tag] :
                     {std::pair{Step::One, "1"}, std::pair{Step::Two, "2"}}) {
                    RunConfig::ModelBlock m;
                    m.name = std::string(dep) + (overall ? "_overall_" : "_indices_") +
                             scheme_tag + step_tag;
                    m.dependent = dep;
                    m.regressors = replication_regressors(dep, overall);
                    m.scheme = scheme;
                    m.step = step;
                    m.wald_subset = trade_facilitation_subset(overall);
                    cfg.models.push_back(std::move(m));
                }
            }
        }
    }
    // Income-class columns: two-step system GMM per class and index set.
    for (const char* group : {kLowerMiddleLabel, kUpperMiddleLabel}) {
        for (const char* dep : {"lnEXPG", "lnIMPG", "lnGNI"}) {
            for (bool overall : {false, true}) {
                RunConfig::ModelBlock m;
                const std::string gtag =
                    group == std::string(kLowerMiddleLabel) ? "lower" : "upper";
                m.name = std::string(dep) + (overall ? "_overall_" : "_indices_") + gtag;
                m.dependent = dep;
                m.regressors = replication_regressors(dep, overall);
                m.scheme = Scheme::System;
                m.step = Step::Two;
                m.group = group;
                m.wald_subset = trade_facilitation_subset(overall);
                cfg.models.push_back(std::move(m));
            }
        }
    }
    return cfg;
}

namespace {

struct RunLog {
    std::vector<std::string> lines;
    int warnings = 0;

    void info(const std::string& msg) { lines.push_back("info: " + msg); }
    void warn(const std::string& msg) {
        lines.push_back("warning: " + msg);
        ++warnings;
    }
};

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::string>& artifacts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    artifacts.push_back(path.filename().string());
}

void write_table(const std::filesystem::path& dir, const std::string& stem,
                 const RenderedTable& table, std::vector<std::string>& artifacts) {
    write_file(dir / (stem + ".txt"), to_text(table), artifacts);
    write_file(dir / (stem + ".csv"), to_csv(table), artifacts);
}

std::string check_variables(const PanelDataset& panel, const std::vector<std::string>& vars,
                            const std::string& field) {
    for (const auto& v : vars)
        if (!panel.has_variable(v))
            return field + ": unknown variable '" + v + "'";
    return "";
}

} // namespace

PipelineOutcome run_pipeline(const RunConfig& cfg, const std::filesystem::path& out_dir,
                             std::uint64_t seed) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    RunLog log;
    std::vector<std::string> artifacts;
    ordered_json results;

    // --- input ---
    PanelDataset panel;
    if (!cfg.input_csv.empty()) {
        panel = load_csv(cfg.input_csv);
        log.info("loaded '" + cfg.input_csv + "'");
    } else {
        panel = replication_skeleton(seed);
        log.info("generated replication skeleton (seed " + std::to_string(seed) + ")");
    }
    log.info("panel: " + std::to_string(panel.n_units()) + " units x " +
             std::to_string(panel.n_periods()) + " periods");

    if (cfg.classify_units) {
        panel = classify(panel, replication_classification());
        std::map<std::string, int> counts;
        for (const auto& t : panel.group_tags()) ++counts[t];
        std::string summary = "classified units:";
        for (const auto& [label, n] : counts)
            summary += " " + label + "=" + std::to_string(n);
        log.info(summary);
    }

    panel = build_model_variables(panel, replication_variables(), cfg.log_policy);

    results["input"] = ordered_json{{"units", panel.n_units()},
                                    {"periods", panel.n_periods()},
                                    {"seed", seed},
                                    {"source", cfg.input_csv.empty() ? "skeleton"
                                                                     : cfg.input_csv}};

    // --- descriptives ---
    if (cfg.describe_enabled) {
        std::vector<std::string> base_vars;
        for (const auto& v : replication_variables()) base_vars.push_back(v.label);
        std::vector<DescriptiveRow> rows = describe(panel, false, base_vars);
        if (cfg.describe_by_group && panel.has_group_tags()) {
            auto grouped = describe(panel, true, base_vars);
            rows.insert(rows.end(), grouped.begin(), grouped.end());
        }
        write_table(out_dir, "descriptives",
                    render_descriptive_table(rows, "Descriptive statistics"), artifacts);
        ordered_json jrows = ordered_json::array();
        for (const auto& r : rows)
            jrows.push_back(ordered_json{{"variable", r.variable},
                                         {"group", r.group},
                                         {"obs", r.obs},
                                         {"mean", r.mean},
                                         {"std", r.stddev},
                                         {"min", r.min},
                                         {"max", r.max}});
        results["descriptives"] = std::move(jrows);
        log.info("descriptive table written (" + std::to_string(rows.size()) + " rows)");
    }

    // --- unit root ---
    if (cfg.unit_root) {
        const auto& block = *cfg.unit_root;
        if (auto err = check_variables(panel, block.variables, "unit_root.variables");
            !err.empty())
            throw ValidationError(err);

        PanelDataset working = panel;
        std::vector<std::string> tested = block.variables;
        if (block.include_differences) {
            for (const auto& v : block.variables) {
                const std::string dname = "d." + v;
                working = apply_transform(working, SeriesTransform::first_difference(v, dname));
                tested.push_back(dname);
            }
        }

        AdfSpec spec{block.lags, block.det};
        std::vector<std::pair<std::string, UnitRootResult>> ur_rows;
        std::vector<std::pair<std::string, TestResult>> cd_rows;
        ordered_json jur = ordered_json::array();
        for (const auto& v : tested) {
            for (const char* which : {"llc", "ips"}) {
                if ((which == std::string("llc") && !block.llc) ||
                    (which == std::string("ips") && !block.ips))
                    continue;
                UnitRootResult r = which == std::string("llc")
                                       ? llc_test(working, v, spec)
                                       : ips_test(working, v, spec);
                if (!r.units_dropped.empty())
                    log.warn(r.test + " on " + v + ": dropped " +
                             std::to_string(r.units_dropped.size()) + " unit(s)");
                jur.push_back(ordered_json{{"variable", v},
                                           {"test", r.test},
                                           {"statistic", r.statistic},
                                           {"p_value", r.p_value},
                                           {"n_units", r.n_units},
                                           {"avg_t", r.n_periods},
                                           {"dropped", r.units_dropped}});
                ur_rows.emplace_back(v, std::move(r));
            }
            if (block.cd) {
                TestResult cd = pesaran_cd(working, v);
                for (const auto& note : cd.notes) log.warn("cd on " + v + ": " + note);
                jur.push_back(ordered_json{{"variable", v},
                                           {"test", "cd"},
                                           {"statistic", cd.statistic},
                                           {"p_value", cd.p_value}});
                cd_rows.emplace_back(v, std::move(cd));
            }
        }
        write_table(out_dir, "unit_roots", render_unit_root_table(ur_rows, cd_rows), artifacts);
        results["unit_root"] = std::move(jur);
        log.info("unit-root table written");
    }

    // --- causality ---
    if (cfg.causality) {
        const auto& block = *cfg.causality;
        std::vector<DhResult> dh_rows;
        ordered_json jdh = ordered_json::array();
        for (std::size_t i = 0; i < block.pairs.size(); ++i) {
            const auto& [cause, effect] = block.pairs[i];
            const std::string field = "causality.pairs[" + std::to_string(i) + "]";
            if (auto err = check_variables(panel, {cause, effect}, field); !err.empty())
                throw ValidationError(err);
            DhResult r = dh_test(panel, cause, effect, block.lags);
            if (!r.flagged_units.empty())
                log.warn("dh " + cause + "->" + effect + ": " +
                         std::to_string(r.flagged_units.size()) +
                         " unit Wald(s) above the degeneracy threshold");
            if (!r.dropped_units.empty())
                log.warn("dh " + cause + "->" + effect + ": dropped " +
                         std::to_string(r.dropped_units.size()) + " unit(s)");
            jdh.push_back(ordered_json{{"cause", r.cause},
                                       {"effect", r.effect},
                                       {"w_bar", r.w_bar},
                                       {"z_bar", r.z_bar},
                                       {"p_z_bar", r.p_z_bar},
                                       {"z_bar_tilde", r.z_bar_tilde},
                                       {"p_z_bar_tilde", r.p_z_bar_tilde},
                                       {"lags", r.config.lags},
                                       {"effective_t", r.config.effective_t},
                                       {"n_units", r.config.n_units},
                                       {"flagged", r.flagged_units},
                                       {"dropped", r.dropped_units}});
            dh_rows.push_back(std::move(r));
        }
        write_table(out_dir, "causality", render_causality_table(dh_rows), artifacts);
        results["causality"] = std::move(jdh);
        log.info("causality table written (" + std::to_string(dh_rows.size()) + " rows)");
    }

    // --- models ---
    if (!cfg.models.empty()) {
        ordered_json jmodels = ordered_json::array();
        // Tables group model columns by (dependent, group) in config order.
        std::vector<std::pair<std::string, std::string>> table_keys;
        std::map<std::pair<std::string, std::string>,
                 std::pair<std::vector<GmmEstimate>, std::vector<std::vector<TestResult>>>>
            tables;

        for (std::size_t i = 0; i < cfg.models.size(); ++i) {
            const auto& m = cfg.models[i];
            const std::string field = "models[" + std::to_string(i) + "]";
            if (!panel.has_variable(m.dependent))
                throw ValidationError(field + ".dependent: unknown variable '" + m.dependent +
                                      "'");
            for (const auto& [name, role] : m.regressors) {
                (void)role;
                if (!panel.has_variable(name))
                    throw ValidationError(field + ".regressors: unknown variable '" + name +
                                          "'");
            }

            PanelDataset sample = panel;
            if (!m.group.empty()) {
                if (!panel.has_group_tags())
                    throw ValidationError(field + ".group: panel has no classification");
                sample = subset_by_group(panel, m.group);
            }

            ModelSpec spec;
            spec.dependent = m.dependent;
            spec.lag_depth = m.lag_depth;
            spec.regressors = m.regressors;
            spec.time_dummies = m.time_dummies;
            InstrumentPlan plan = m.plan ? *m.plan : default_plan(spec);

            EstimateOptions opts;
            opts.windmeijer = m.windmeijer;
            GmmEstimate est = estimate(sample, spec, plan, m.scheme, m.step, opts);
            for (const auto& note : est.warnings.notes) log.warn(m.name + ": " + note);
            if (est.instrument_count >= est.group_count)
                log.warn(m.name + ": instrument count " +
                         std::to_string(est.instrument_count) + " >= group count " +
                         std::to_string(est.group_count));

            std::vector<TestResult> mtests;
            mtests.push_back(sargan(est));
            mtests.push_back(hansen_j(est));
            mtests.push_back(ar_test(est, 1));
            try {
                mtests.push_back(ar_test(est, 2));
            } catch (const EstimationError& e) {
                log.warn(m.name + ": AR(2) unavailable: " + e.what());
            }
            if (!m.wald_subset.empty()) {
                if (auto err = check_variables(panel, m.wald_subset, field + ".wald_subset");
                    !err.empty())
                    throw ValidationError(err);
                TestResult w = wald_joint(est, m.wald_subset);
                w.name = "Wald chi2 (trade facilitation)";
                mtests.push_back(std::move(w));
            }
            for (const auto& t : mtests)
                if (t.clamped) log.warn(m.name + ": " + t.name + " clamped at zero");

            ordered_json jcoef = ordered_json::array();
            for (std::size_t c = 0; c < est.coef_names.size(); ++c)
                jcoef.push_back(ordered_json{{"name", est.coef_names[c]},
                                             {"value", est.coef(c)},
                                             {"se", est.se(c)},
                                             {"z", est.z_stat(c)},
                                             {"p", est.p_value(c)}});
            ordered_json jtests = ordered_json::array();
            for (const auto& t : mtests) {
                ordered_json jt{{"name", t.name},
                                {"statistic", t.statistic},
                                {"p_value", t.p_value}};
                if (t.df) jt["df"] = *t.df;
                if (t.clamped) jt["clamped"] = true;
                jtests.push_back(std::move(jt));
            }
            jmodels.push_back(ordered_json{
                {"name", m.name},
                {"dependent", m.dependent},
                {"group", m.group},
                {"scheme", m.scheme == Scheme::Difference ? "difference" : "system"},
                {"step", m.step == Step::One ? 1 : 2},
                {"windmeijer", est.windmeijer_applied},
                {"n_obs", est.n_obs},
                {"groups", est.group_count},
                {"instruments", est.instrument_count},
                {"roles",
                 [&] {
                     ordered_json r = ordered_json::object();
                     for (const auto& [name, role] : m.regressors) r[name] = role_name(role);
                     return r;
                 }()},
                {"coefficients", std::move(jcoef)},
                {"tests", std::move(jtests)}});

            const auto key = std::make_pair(m.dependent, m.group);
            if (!tables.count(key)) table_keys.push_back(key);
            tables[key].first.push_back(std::move(est));
            tables[key].second.push_back(std::move(mtests));
        }

        for (const auto& key : table_keys) {
            const auto& [dep, group] = key;
            std::string stem = "regressions_" + dep;
            std::string title = "Dynamic panel GMM estimates: " + dep;
            if (!group.empty()) {
                stem += "_" + group;
                title += " (" + group + ")";
            }
            write_table(out_dir, stem,
                        render_regression_table(tables[key].first, tables[key].second, title),
                        artifacts);
        }
        results["models"] = std::move(jmodels);
        log.info("regression tables written (" + std::to_string(table_keys.size()) + ")");
    }

    // --- machine-readable results + log ---
    write_file(out_dir / "results.json", results.dump(2) + "\n", artifacts);

    std::ostringstream logtext;
    for (const auto& line : log.lines) logtext << line << '\n';
    logtext << "warnings: " << log.warnings << '\n';
    logtext << "errors: 0\n";
    write_file(out_dir / "run.log", logtext.str(), artifacts);

    PipelineOutcome outcome;
    outcome.artifacts = std::move(artifacts);
    outcome.warning_count = log.warnings;
    return outcome;
}

} // namespace tfpanel
