#include "tfpanel/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "tfpanel/errors.hpp"

namespace tfpanel {

namespace {

const VariableSpec kVariables[] = {
    {"GNI", "Gross national income per capita, PPP", "current international $", true},
    {"EXPG", "Goods exports", "current US$", true},
    {"IMPG", "Goods imports", "current US$", true},
    {"ATCE", "Average time to clear exports through customs", "days", false},
    {"PCT", "Port container traffic", "TEU", true},
    {"AFT", "Air freight transport", "million ton-km", false},
    {"QPI", "Quality of port infrastructure", "index 1-7", false},
    {"LPIAC", "Ability to track and trace consignments", "index 1-5", false},
    {"LPICQ", "Competence and quality of logistics services", "index 1-5", false},
    {"LPIEA", "Ease of arranging competitively priced shipments", "index 1-5", false},
    {"LPIEC", "Efficiency of customs clearance process", "index 1-5", false},
    {"LPIFS", "Shipments reaching consignee within schedule", "index 1-5", false},
    {"LPI", "Logistics performance index, overall", "index 1-5", false},
    {"LPIQTT", "Quality of trade and transport infrastructure", "index 1-5", false},
    {"TRF", "Tariff rate, applied, weighted mean", "percent", false},
    {"FDI", "Foreign direct investment, net", "current US$", true},
    {"GFCF", "Gross fixed capital formation", "current US$", true},
};

// The 94 replication countries. upper_middle = false marks the lower-middle
// list.
const CountryEntry kCountries[] = {
    {"Algeria", "DZA", false},
    {"Angola", "AGO", false},
    {"Bangladesh", "BGD", false},
    {"Benin", "BEN", false},
    {"Bhutan", "BTN", false},
    {"Bolivia", "BOL", false},
    {"Cabo Verde", "CPV", false},
    {"Cambodia", "KHM", false},
    {"Cameroon", "CMR", false},
    {"Comoros", "COM", false},
    {"Congo Republic", "COG", false},
    {"Cote d'Ivoire", "CIV", false},
    {"Djibouti", "DJI", false},
    {"Egypt Arab Republic", "EGY", false},
    {"El Salvador", "SLV", false},
    {"Ghana", "GHA", false},
    {"Haiti", "HTI", false},
    {"Honduras", "HND", false},
    {"India", "IND", false},
    {"Indonesia", "IDN", false},
    {"Iran Islamic Republic", "IRN", false},
    {"Kenya", "KEN", false},
    {"Kyrgyz Republic", "KGZ", false},
    {"Lao PDR", "LAO", false},
    {"Lesotho", "LSO", false},
    {"Mauritania", "MRT", false},
    {"Mongolia", "MNG", false},
    {"Morocco", "MAR", false},
    {"Myanmar", "MMR", false},
    {"Nepal", "NPL", false},
    {"Nicaragua", "NIC", false},
    {"Nigeria", "NGA", false},
    {"Pakistan", "PAK", false},
    {"Papua New Guinea", "PNG", false},
    {"Philippines", "PHL", false},
    {"Sao Tome and Principe", "STP", false},
    {"Senegal", "SEN", false},
    {"Solomon Islands", "SLB", false},
    {"Sri Lanka", "LKA", false},
    {"Tajikistan", "TJK", false},
    {"Tanzania", "TZA", false},
    {"Timor-Leste", "TLS", false},
    {"Tunisia", "TUN", false},
    {"Ukraine", "UKR", false},
    {"Uzbekistan", "UZB", false},
    {"Vietnam", "VNM", false},
    {"Zambia", "ZMB", false},
    {"Zimbabwe", "ZWE", false},
    {"Albania", "ALB", true},
    {"Argentina", "ARG", true},
    {"Armenia", "ARM", true},
    {"Azerbaijan", "AZE", true},
    {"Belarus", "BLR", true},
    {"Bosnia and Herzegovina", "BIH", true},
    {"Botswana", "BWA", true},
    {"Brazil", "BRA", true},
    {"Bulgaria", "BGR", true},
    {"China", "CHN", true},
    {"Colombia", "COL", true},
    {"Costa Rica", "CRI", true},
    {"Cuba", "CUB", true},
    {"Dominican Republic", "DOM", true},
    {"Ecuador", "ECU", true},
    {"Equatorial Guinea", "GNQ", true},
    {"Fiji", "FJI", true},
    {"Gabon", "GAB", true},
    {"Georgia", "GEO", true},
    {"Guatemala", "GTM", true},
    {"Guyana", "GUY", true},
    {"Iraq", "IRQ", true},
    {"Jamaica", "JAM", true},
    {"Jordan", "JOR", true},
    {"Kazakhstan", "KAZ", true},
    {"Lebanon", "LBN", true},
    {"Libya", "LBY", true},
    {"Malaysia", "MYS", true},
    {"Maldives", "MDV", true},
    {"Mauritius", "MUS", true},
    {"Mexico", "MEX", true},
    {"Moldova", "MDA", true},
    {"Montenegro", "MNE", true},
    {"Namibia", "NAM", true},
    {"North Macedonia", "MKD", true},
    {"Panama", "PAN", true},
    {"Paraguay", "PRY", true},
    {"Peru", "PER", true},
    {"Romania", "ROU", true},
    {"Russian Federation", "RUS", true},
    {"Serbia", "SRB", true},
    {"South Africa", "ZAF", true},
    {"Suriname", "SUR", true},
    {"Thailand", "THA", true},
    {"Turkey", "TUR", true},
    {"Turkmenistan", "TKM", true},
};

} // namespace

std::span<const VariableSpec> replication_variables() { return kVariables; }

std::span<const CountryEntry> country_table() { return kCountries; }

std::optional<std::string> country_code_for(const std::string& name) {
    for (const auto& c : kCountries)
        if (c.name == name) return c.code;
    return std::nullopt;
}

void ClassificationList::validate() const {
    std::set<std::string> seen;
    for (const auto& c : lower_middle)
        if (!seen.insert(c).second)
            throw ValidationError("classification: '" + c + "' listed twice");
    for (const auto& c : upper_middle)
        if (!seen.insert(c).second)
            throw ValidationError("classification: '" + c + "' listed twice");
}

const ClassificationList& replication_classification() {
    static const ClassificationList list = [] {
        ClassificationList l;
        for (const auto& c : kCountries)
            (c.upper_middle ? l.upper_middle : l.lower_middle).push_back(c.code);
        l.validate();
        return l;
    }();
    return list;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string expected_header() {
    std::string h = "country,year";
    for (const auto& v : kVariables) {
        h += ',';
        h += v.label;
    }
    return h;
}

double parse_cell(const std::string& text, long line_no, const std::string& column) {
    double out = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        std::ostringstream os;
        os << "csv row " << line_no << ": non-numeric value '" << text << "' in column "
           << column;
        throw ValidationError(os.str());
    }
    return out;
}

} // namespace

PanelDataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header())
        throw ValidationError("csv: malformed header; expected '" + expected_header() + "'");

    const std::size_t n_vars = std::size(kVariables);
    struct Row {
        std::string country;
        int year;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    std::set<std::pair<std::string, int>> keys;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != n_vars + 2) {
            std::ostringstream os;
            os << "csv row " << line_no << ": expected " << n_vars + 2 << " fields, got "
               << fields.size();
            throw ValidationError(os.str());
        }
        Row row;
        row.country = fields[0];
        if (row.country.empty()) {
            std::ostringstream os;
            os << "csv row " << line_no << ": empty country field";
            throw ValidationError(os.str());
        }
        row.year = static_cast<int>(parse_cell(fields[1], line_no, "year"));
        if (!keys.insert({row.country, row.year}).second) {
            std::ostringstream os;
            os << "csv row " << line_no << ": duplicate (" << row.country << ", " << row.year
               << ")";
            throw ValidationError(os.str());
        }
        row.values.resize(n_vars, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t v = 0; v < n_vars; ++v) {
            const std::string& cell = fields[v + 2];
            if (cell.empty()) continue;
            row.values[v] = parse_cell(cell, line_no, kVariables[v].label);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError("csv: no data rows");

    std::set<std::string> unit_set;
    int ymin = rows.front().year, ymax = rows.front().year;
    for (const auto& r : rows) {
        unit_set.insert(r.country);
        ymin = std::min(ymin, r.year);
        ymax = std::max(ymax, r.year);
    }
    std::vector<std::string> units(unit_set.begin(), unit_set.end());
    std::vector<int> periods;
    for (int y = ymin; y <= ymax; ++y) periods.push_back(y);

    PanelDataset panel = PanelDataset::create(units, periods);
    const std::size_t np = periods.size();
    std::vector<std::vector<double>> cols(
        n_vars, std::vector<double>(units.size() * np, std::numeric_limits<double>::quiet_NaN()));
    for (const auto& r : rows) {
        const auto u = panel.unit_index(r.country);
        const std::size_t p = static_cast<std::size_t>(r.year - ymin);
        for (std::size_t v = 0; v < n_vars; ++v) cols[v][*u * np + p] = r.values[v];
    }
    for (std::size_t v = 0; v < n_vars; ++v)
        panel = panel.with_column(kVariables[v].label, std::move(cols[v]));
    return panel;
}

void write_csv(const PanelDataset& panel, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << expected_header() << '\n';
    out.precision(17);
    for (std::size_t u = 0; u < panel.n_units(); ++u) {
        for (std::size_t p = 0; p < panel.n_periods(); ++p) {
            out << panel.units()[u] << ',' << panel.periods()[p];
            for (const auto& v : kVariables) {
                out << ',';
                if (panel.has_variable(v.label) && panel.is_observed(u, p, v.label))
                    out << panel.value(u, p, v.label);
            }
            out << '\n';
        }
    }
}

PanelDataset classify(const PanelDataset& panel, const ClassificationList& list) {
    list.validate();
    std::set<std::string> lower(list.lower_middle.begin(), list.lower_middle.end());
    std::set<std::string> upper(list.upper_middle.begin(), list.upper_middle.end());

    std::vector<std::string> tags;
    tags.reserve(panel.n_units());
    for (const auto& unit : panel.units()) {
        const bool in_lower = lower.count(unit) > 0;
        const bool in_upper = upper.count(unit) > 0;
        if (in_lower && in_upper)
            throw ValidationError("classify: unit '" + unit + "' appears in both lists");
        if (!in_lower && !in_upper)
            throw ValidationError("classify: unit '" + unit + "' is in neither list");
        tags.push_back(in_lower ? kLowerMiddleLabel : kUpperMiddleLabel);
    }
    return panel.with_group_tags(std::move(tags));
}

PanelDataset build_model_variables(const PanelDataset& panel,
                                   std::span<const VariableSpec> specs, LogPolicy policy) {
    PanelDataset out = panel;
    for (const auto& spec : specs) {
        if (!panel.has_variable(spec.label))
            throw ValidationError("build_model_variables: missing source column '" +
                                  spec.label + "'");
        if (!spec.log_transformed) continue;
        const std::string target = "ln" + spec.label;
        try {
            SeriesTransform t = policy == LogPolicy::Strict
                                    ? SeriesTransform::natural_log(spec.label, target)
                                    : SeriesTransform::signed_log(spec.label, target);
            out = apply_transform(out, t);
        } catch (const TransformError& e) {
            throw TransformError("build_model_variables: variable " + spec.label + ": " +
                                 e.what());
        }
    }
    return out;
}

} // namespace tfpanel
