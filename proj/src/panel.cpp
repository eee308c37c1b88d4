#include "tfpanel/panel.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "tfpanel/errors.hpp"

namespace tfpanel {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

PanelDataset PanelDataset::create(std::vector<std::string> units, std::vector<int> periods) {
    if (units.empty()) throw ValidationError("panel: unit list is empty");
    if (periods.empty()) throw ValidationError("panel: period list is empty");

    std::set<std::string> useen(units.begin(), units.end());
    if (useen.size() != units.size())
        throw ValidationError("panel: duplicate unit identifiers");

    for (std::size_t i = 1; i < periods.size(); ++i) {
        if (periods[i] != periods[i - 1] + 1) {
            std::ostringstream os;
            os << "panel: periods must be contiguous ascending integers, got "
               << periods[i - 1] << " followed by " << periods[i];
            throw ValidationError(os.str());
        }
    }

    PanelDataset p;
    p.units_ = std::move(units);
    p.periods_ = std::move(periods);
    return p;
}

bool PanelDataset::has_variable(const std::string& name) const {
    return var_lookup_.count(name) > 0;
}

std::optional<std::size_t> PanelDataset::unit_index(const std::string& unit) const {
    auto it = std::find(units_.begin(), units_.end(), unit);
    if (it == units_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - units_.begin());
}

std::optional<std::size_t> PanelDataset::period_index(int period) const {
    if (periods_.empty() || period < periods_.front() || period > periods_.back())
        return std::nullopt;
    return static_cast<std::size_t>(period - periods_.front());
}

double PanelDataset::value(std::size_t unit, std::size_t period, const std::string& var) const {
    return column(var)[unit * periods_.size() + period];
}

bool PanelDataset::is_observed(std::size_t unit, std::size_t period, const std::string& var) const {
    return !std::isnan(value(unit, period, var));
}

const std::vector<double>& PanelDataset::column(const std::string& var) const {
    auto it = var_lookup_.find(var);
    if (it == var_lookup_.end())
        throw ValidationError("panel: unknown variable '" + var + "'");
    return columns_[it->second];
}

std::vector<double> PanelDataset::unit_series(const std::string& var, std::size_t unit) const {
    const auto& col = column(var);
    const std::size_t np = periods_.size();
    return std::vector<double>(col.begin() + unit * np, col.begin() + (unit + 1) * np);
}

std::size_t PanelDataset::observed_count(const std::string& var) const {
    const auto& col = column(var);
    std::size_t n = 0;
    for (double v : col)
        if (!std::isnan(v)) ++n;
    return n;
}

PanelDataset PanelDataset::with_column(const std::string& name, std::vector<double> cells,
                                       bool replace_existing) const {
    if (cells.size() != cell_count())
        throw ValidationError("panel: column '" + name + "' has wrong cell count");
    PanelDataset out = *this;
    auto it = out.var_lookup_.find(name);
    if (it != out.var_lookup_.end()) {
        if (!replace_existing)
            throw ValidationError("panel: variable '" + name + "' already exists");
        out.columns_[it->second] = std::move(cells);
        return out;
    }
    out.var_lookup_[name] = out.columns_.size();
    out.var_names_.push_back(name);
    out.columns_.push_back(std::move(cells));
    return out;
}

PanelDataset PanelDataset::with_group_tags(std::vector<std::string> tags) const {
    if (tags.size() != units_.size())
        throw ValidationError("panel: group tag list must cover every unit");
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i].empty())
            throw ValidationError("panel: empty group tag for unit '" + units_[i] + "'");
    PanelDataset out = *this;
    out.group_tags_ = std::move(tags);
    return out;
}

std::vector<std::string> PanelDataset::group_labels() const {
    std::vector<std::string> labels;
    for (const auto& t : group_tags_)
        if (std::find(labels.begin(), labels.end(), t) == labels.end())
            labels.push_back(t);
    return labels;
}

SeriesTransform SeriesTransform::natural_log(std::string source, std::string output) {
    return {Kind::NaturalLog, std::move(source), std::move(output), 1};
}
SeriesTransform SeriesTransform::signed_log(std::string source, std::string output) {
    return {Kind::SignedLog, std::move(source), std::move(output), 1};
}
SeriesTransform SeriesTransform::lag_of(std::string source, std::string output, int k) {
    return {Kind::Lag, std::move(source), std::move(output), k};
}
SeriesTransform SeriesTransform::first_difference(std::string source, std::string output) {
    return {Kind::FirstDifference, std::move(source), std::move(output), 1};
}

PanelDataset apply_transform(const PanelDataset& panel, const SeriesTransform& t) {
    if (t.output == t.source)
        throw ValidationError("transform: output name must differ from source '" + t.source + "'");
    if (!panel.has_variable(t.source))
        throw ValidationError("transform: unknown source variable '" + t.source + "'");
    if (t.kind == SeriesTransform::Kind::Lag && t.lag < 1)
        throw ValidationError("transform: lag order must be >= 1");

    const auto& src = panel.column(t.source);
    const std::size_t np = panel.n_periods();
    std::vector<double> out(src.size(), kNaN);

    switch (t.kind) {
    case SeriesTransform::Kind::NaturalLog:
        for (std::size_t u = 0; u < panel.n_units(); ++u) {
            for (std::size_t p = 0; p < np; ++p) {
                double v = src[u * np + p];
                if (std::isnan(v)) continue;
                if (v <= 0.0) {
                    std::ostringstream os;
                    os << "transform: natural log of non-positive value " << v
                       << " for unit '" << panel.units()[u] << "' period "
                       << panel.periods()[p] << " (source '" << t.source << "')";
                    throw TransformError(os.str());
                }
                out[u * np + p] = std::log(v);
            }
        }
        break;
    case SeriesTransform::Kind::SignedLog:
        for (std::size_t i = 0; i < src.size(); ++i) {
            double v = src[i];
            if (std::isnan(v)) continue;
            out[i] = v >= 0.0 ? std::log1p(v) : -std::log1p(-v);
        }
        break;
    case SeriesTransform::Kind::Lag: {
        const std::size_t k = static_cast<std::size_t>(t.lag);
        for (std::size_t u = 0; u < panel.n_units(); ++u)
            for (std::size_t p = k; p < np; ++p)
                out[u * np + p] = src[u * np + p - k];
        break;
    }
    case SeriesTransform::Kind::FirstDifference:
        for (std::size_t u = 0; u < panel.n_units(); ++u) {
            for (std::size_t p = 1; p < np; ++p) {
                double a = src[u * np + p];
                double b = src[u * np + p - 1];
                if (std::isnan(a) || std::isnan(b)) continue;
                out[u * np + p] = a - b;
            }
        }
        break;
    }

    return panel.with_column(t.output, std::move(out));
}

namespace {

DescriptiveRow summarize(const PanelDataset& panel, const std::string& var,
                         const std::string& group,
                         const std::vector<std::size_t>& unit_ids) {
    const auto& col = panel.column(var);
    const std::size_t np = panel.n_periods();

    DescriptiveRow row;
    row.variable = var;
    row.group = group;
    double sum = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t u : unit_ids) {
        for (std::size_t p = 0; p < np; ++p) {
            double v = col[u * np + p];
            if (std::isnan(v)) continue;
            ++row.obs;
            sum += v;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
    }
    if (row.obs == 0)
        throw ValidationError("describe: variable '" + var + "' has no observed cells in group '" +
                              group + "'");
    row.mean = sum / static_cast<double>(row.obs);
    double ss = 0.0;
    for (std::size_t u : unit_ids) {
        for (std::size_t p = 0; p < np; ++p) {
            double v = col[u * np + p];
            if (std::isnan(v)) continue;
            double d = v - row.mean;
            ss += d * d;
        }
    }
    row.stddev = row.obs > 1 ? std::sqrt(ss / static_cast<double>(row.obs - 1)) : 0.0;
    row.min = mn;
    row.max = mx;
    return row;
}

} // namespace

std::vector<DescriptiveRow> describe(const PanelDataset& panel, bool by_group) {
    return describe(panel, by_group, panel.variable_names());
}

std::vector<DescriptiveRow> describe(const PanelDataset& panel, bool by_group,
                                     const std::vector<std::string>& variables) {
    if (by_group && !panel.has_group_tags())
        throw ValidationError("describe: panel has no group tags");

    std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
    if (by_group) {
        for (const auto& label : panel.group_labels()) {
            std::vector<std::size_t> ids;
            for (std::size_t u = 0; u < panel.n_units(); ++u)
                if (panel.group_tags()[u] == label) ids.push_back(u);
            groups.emplace_back(label, std::move(ids));
        }
    } else {
        std::vector<std::size_t> all(panel.n_units());
        for (std::size_t u = 0; u < all.size(); ++u) all[u] = u;
        groups.emplace_back("all", std::move(all));
    }

    std::vector<DescriptiveRow> rows;
    for (const auto& var : variables)
        for (const auto& [label, ids] : groups)
            rows.push_back(summarize(panel, var, label, ids));
    return rows;
}

PanelDataset subset_by_group(const PanelDataset& panel, const std::string& label) {
    if (!panel.has_group_tags())
        throw ValidationError("subset_by_group: panel has no group tags");

    std::vector<std::size_t> keep;
    for (std::size_t u = 0; u < panel.n_units(); ++u)
        if (panel.group_tags()[u] == label) keep.push_back(u);
    if (keep.empty())
        throw ValidationError("subset_by_group: unknown group label '" + label + "'");

    std::vector<std::string> units;
    std::vector<std::string> tags;
    units.reserve(keep.size());
    for (std::size_t u : keep) {
        units.push_back(panel.units()[u]);
        tags.push_back(panel.group_tags()[u]);
    }

    PanelDataset out = PanelDataset::create(std::move(units), panel.periods());
    const std::size_t np = panel.n_periods();
    for (const auto& var : panel.variable_names()) {
        const auto& col = panel.column(var);
        std::vector<double> cells;
        cells.reserve(keep.size() * np);
        for (std::size_t u : keep)
            cells.insert(cells.end(), col.begin() + u * np, col.begin() + (u + 1) * np);
        out = out.with_column(var, std::move(cells));
    }
    return out.with_group_tags(std::move(tags));
}

} // namespace tfpanel
