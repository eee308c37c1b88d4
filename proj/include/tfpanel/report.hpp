#pragma once

#include <string>
#include <vector>

#include "tfpanel/causality.hpp"
#include "tfpanel/diagnostics.hpp"
#include "tfpanel/gmm.hpp"
#include "tfpanel/panel.hpp"
#include "tfpanel/unit_root.hpp"

namespace tfpanel {

/// A fully formatted table: rectangular string grid ready for text or CSV
/// serialization. Rendering is a pure function of the inputs.
struct RenderedTable {
    std::string title;
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> cells; // rectangular, headers.size() wide
    std::string footnote;
};

// Formatting helpers shared by the tables.
std::string format_coefficient(double value); // 3-4 significant digits, 0 -> "0.000"
std::string format_prob(double p);            // fixed 4 decimals
std::string significance_stars(double p);     // *** / ** / * / ""

std::string to_text(const RenderedTable& table);
std::string to_csv(const RenderedTable& table);

/// One regression table column per estimate ("One-step Difference GMM" style
/// headers), coefficient cells starred with the standard error beneath in
/// parentheses, footer rows for observations / groups / instruments and any
/// attached test results.
RenderedTable render_regression_table(const std::vector<GmmEstimate>& estimates,
                                      const std::vector<std::vector<TestResult>>& tests,
                                      const std::string& title);

/// W-bar / Z-bar / Prob / Z-bar-tilde / Prob rows with a Reject / Fail
/// decision at the 5% level on the fixed-T statistic.
RenderedTable render_causality_table(const std::vector<DhResult>& results);

RenderedTable render_descriptive_table(const std::vector<DescriptiveRow>& rows,
                                       const std::string& title);

RenderedTable render_unit_root_table(
    const std::vector<std::pair<std::string, UnitRootResult>>& results,
    const std::vector<std::pair<std::string, TestResult>>& cd_results);

} // namespace tfpanel
