#include "tfpanel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tfpanel/errors.hpp"

namespace tfpanel {

std::string format_coefficient(double value) {
    if (value == 0.0) return "0.000";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", value);
    return buf;
}

std::string format_prob(double p) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.4f", p);
    return buf;
}

std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

namespace {

std::string format_stat(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string to_text(const RenderedTable& table) {
    std::vector<std::size_t> widths(table.headers.size(), 0);
    for (std::size_t c = 0; c < table.headers.size(); ++c)
        widths[c] = table.headers[c].size();
    for (const auto& row : table.cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    std::ostringstream os;
    if (!table.title.empty()) os << table.title << '\n';
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << row[c];
            if (c + 1 < row.size())
                os << std::string(widths[c] - row[c].size() + 2, ' ');
        }
        os << '\n';
    };
    emit_row(table.headers);
    std::size_t total = 0;
    for (std::size_t w : widths) total += w + 2;
    os << std::string(total > 2 ? total - 2 : total, '-') << '\n';
    for (const auto& row : table.cells) emit_row(row);
    if (!table.footnote.empty()) os << table.footnote << '\n';
    return os.str();
}

std::string to_csv(const RenderedTable& table) {
    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << csv_escape(row[c]);
        }
        os << '\n';
    };
    emit(table.headers);
    for (const auto& row : table.cells) emit(row);
    return os.str();
}

namespace {

std::string column_header(const GmmEstimate& est) {
    std::string h = est.step == Step::One ? "One-step " : "Two-step ";
    h += est.scheme == Scheme::Difference ? "Difference GMM" : "System GMM";
    h += " " + est.dependent;
    return h;
}

} // namespace

RenderedTable render_regression_table(const std::vector<GmmEstimate>& estimates,
                                      const std::vector<std::vector<TestResult>>& tests,
                                      const std::string& title) {
    if (estimates.empty())
        throw ValidationError("render_regression_table: no estimates");
    if (!tests.empty() && tests.size() != estimates.size())
        throw ValidationError("render_regression_table: tests/estimates size mismatch");
    for (const auto& est : estimates)
        if (est.dependent != estimates.front().dependent)
            throw ValidationError("render_regression_table: mixed dependent variables");

    // Row order: union of coefficient names in first-appearance order.
    std::vector<std::string> row_names;
    for (const auto& est : estimates)
        for (const auto& name : est.coef_names)
            if (std::find(row_names.begin(), row_names.end(), name) == row_names.end())
                row_names.push_back(name);

    RenderedTable table;
    table.title = title;
    table.headers.push_back("VARIABLE");
    for (const auto& est : estimates) table.headers.push_back(column_header(est));

    for (const auto& name : row_names) {
        std::vector<std::string> value_row{name};
        std::vector<std::string> se_row{""};
        for (const auto& est : estimates) {
            auto idx = est.coef_index(name);
            if (!idx) {
                value_row.push_back("");
                se_row.push_back("");
                continue;
            }
            const double coef = est.coef(*idx);
            const double se = est.se(*idx);
            std::string cell = format_coefficient(coef);
            if (se > 0) cell += significance_stars(est.p_value(*idx));
            value_row.push_back(cell);
            se_row.push_back("(" + format_coefficient(se) + ")");
        }
        table.cells.push_back(std::move(value_row));
        table.cells.push_back(std::move(se_row));
    }

    auto footer = [&](const std::string& label, auto value_of) {
        std::vector<std::string> row{label};
        for (const auto& est : estimates) row.push_back(value_of(est));
        table.cells.push_back(std::move(row));
    };
    footer("Observations", [](const GmmEstimate& e) { return std::to_string(e.n_obs); });
    footer("Number of country",
           [](const GmmEstimate& e) { return std::to_string(e.group_count); });
    footer("No of Instruments",
           [](const GmmEstimate& e) { return std::to_string(e.instrument_count); });

    if (!tests.empty()) {
        std::vector<std::string> test_names;
        for (const auto& column : tests)
            for (const auto& t : column)
                if (std::find(test_names.begin(), test_names.end(), t.name) == test_names.end())
                    test_names.push_back(t.name);
        for (const auto& name : test_names) {
            std::vector<std::string> stat_row{name};
            std::vector<std::string> p_row{name + " p-value"};
            for (std::size_t e = 0; e < estimates.size(); ++e) {
                const TestResult* found = nullptr;
                for (const auto& t : tests[e])
                    if (t.name == name) found = &t;
                stat_row.push_back(found ? format_stat(found->statistic) : "");
                p_row.push_back(found ? format_prob(found->p_value) : "");
            }
            table.cells.push_back(std::move(stat_row));
            table.cells.push_back(std::move(p_row));
        }
    }

    table.footnote = "Standard errors in parentheses; *** p<0.01, ** p<0.05, * p<0.1";
    return table;
}

RenderedTable render_causality_table(const std::vector<DhResult>& results) {
    if (results.empty()) throw ValidationError("render_causality_table: no results");

    RenderedTable table;
    table.title = "Panel non-causality tests";
    table.headers = {"Null Hypothesis", "W-bar", "Z-bar", "Prob", "Z-bar tilde", "Prob",
                     "Decision"};
    for (const auto& r : results) {
        std::vector<std::string> row;
        row.push_back(r.cause + " does not Granger-cause " + r.effect);
        row.push_back(format_stat(r.w_bar));
        row.push_back(format_stat(r.z_bar));
        row.push_back(format_prob(r.p_z_bar));
        row.push_back(format_stat(r.z_bar_tilde));
        row.push_back(format_prob(r.p_z_bar_tilde));
        row.push_back(r.p_z_bar_tilde < 0.05 ? "Reject Ho" : "Fail to reject");
        table.cells.push_back(std::move(row));
    }
    table.footnote = "Decision at the 5% level on the fixed-T standardized statistic";
    return table;
}

RenderedTable render_descriptive_table(const std::vector<DescriptiveRow>& rows,
                                       const std::string& title) {
    RenderedTable table;
    table.title = title;
    table.headers = {"Variable", "Group", "Obs", "Mean", "Std", "Min", "Max"};
    for (const auto& r : rows) {
        table.cells.push_back({r.variable, r.group, std::to_string(r.obs),
                               format_coefficient(r.mean), format_coefficient(r.stddev),
                               format_coefficient(r.min), format_coefficient(r.max)});
    }
    return table;
}

RenderedTable render_unit_root_table(
    const std::vector<std::pair<std::string, UnitRootResult>>& results,
    const std::vector<std::pair<std::string, TestResult>>& cd_results) {
    RenderedTable table;
    table.title = "Panel unit-root tests";
    table.headers = {"Variable", "Test", "Statistic", "p-value", "Units", "Avg T", "Dropped"};
    for (const auto& [var, r] : results) {
        table.cells.push_back({var, r.test, format_stat(r.statistic), format_prob(r.p_value),
                               std::to_string(r.n_units), std::to_string(r.n_periods),
                               std::to_string(r.units_dropped.size())});
    }
    for (const auto& [var, cd] : cd_results) {
        table.cells.push_back({var, "Pesaran CD", format_stat(cd.statistic),
                               format_prob(cd.p_value), "", "", ""});
    }
    return table;
}

} // namespace tfpanel
