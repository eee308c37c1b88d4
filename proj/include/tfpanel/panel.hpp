#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tfpanel {

/// Immutable rectangular panel: units x contiguous integer periods x named
/// real variables. Missing cells are stored as NaN; is_observed() is the mask.
/// All operations return new datasets and never mutate their input.
class PanelDataset {
public:
    PanelDataset() = default;

    // Empty panel over the given axes. Units must be unique, periods unique,
    // ascending and contiguous.
    static PanelDataset create(std::vector<std::string> units, std::vector<int> periods);

    std::size_t n_units() const { return units_.size(); }
    std::size_t n_periods() const { return periods_.size(); }
    std::size_t cell_count() const { return units_.size() * periods_.size(); }

    const std::vector<std::string>& units() const { return units_; }
    const std::vector<int>& periods() const { return periods_; }
    const std::vector<std::string>& variable_names() const { return var_names_; }

    bool has_variable(const std::string& name) const;
    std::optional<std::size_t> unit_index(const std::string& unit) const;
    std::optional<std::size_t> period_index(int period) const;

    // Cell accessors; missing cells return NaN.
    double value(std::size_t unit, std::size_t period, const std::string& var) const;
    bool is_observed(std::size_t unit, std::size_t period, const std::string& var) const;

    // Full column, unit-major (index = unit * n_periods + period), NaN = missing.
    const std::vector<double>& column(const std::string& var) const;

    // One unit's series over the period axis, NaN = missing.
    std::vector<double> unit_series(const std::string& var, std::size_t unit) const;

    std::size_t observed_count(const std::string& var) const;

    // Copy with one column appended (or replaced if replace_existing).
    PanelDataset with_column(const std::string& name, std::vector<double> cells,
                             bool replace_existing = false) const;

    // Copy with per-unit group tags attached (size must equal n_units).
    PanelDataset with_group_tags(std::vector<std::string> tags) const;

    bool has_group_tags() const { return !group_tags_.empty(); }
    const std::vector<std::string>& group_tags() const { return group_tags_; }
    // Distinct labels in first-appearance order.
    std::vector<std::string> group_labels() const;

private:
    std::vector<std::string> units_;
    std::vector<int> periods_;
    std::vector<std::string> var_names_;
    std::unordered_map<std::string, std::size_t> var_lookup_;
    std::vector<std::vector<double>> columns_;
    std::vector<std::string> group_tags_;
};

/// A single column derivation. NaturalLog errors on non-positive input
/// (strict policy); SignedLog is the configurable alternative mapping
/// x -> sign(x) * ln(1 + |x|).
struct SeriesTransform {
    enum class Kind { NaturalLog, SignedLog, Lag, FirstDifference };

    Kind kind = Kind::NaturalLog;
    std::string source;
    std::string output;
    int lag = 1; // Lag only, must be >= 1

    static SeriesTransform natural_log(std::string source, std::string output);
    static SeriesTransform signed_log(std::string source, std::string output);
    static SeriesTransform lag_of(std::string source, std::string output, int k);
    static SeriesTransform first_difference(std::string source, std::string output);
};

/// One row of a descriptive-statistics table. std uses the sample (n-1)
/// denominator; all moments are over observed cells only.
struct DescriptiveRow {
    std::string variable;
    std::string group; // "all" when not grouped
    long obs = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

PanelDataset apply_transform(const PanelDataset& panel, const SeriesTransform& t);

std::vector<DescriptiveRow> describe(const PanelDataset& panel, bool by_group);
std::vector<DescriptiveRow> describe(const PanelDataset& panel, bool by_group,
                                     const std::vector<std::string>& variables);

PanelDataset subset_by_group(const PanelDataset& panel, const std::string& label);

} // namespace tfpanel
