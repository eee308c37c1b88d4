#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfpanel/panel.hpp"

namespace tfpanel {

/// One model variable: CSV column label, units, and whether the model uses
/// its natural log (producing an "ln"-prefixed column).
struct VariableSpec {
    std::string label;
    std::string description;
    std::string units;
    bool log_transformed = false;
};

/// The 17 indicator columns of the replication dataset, in CSV order.
std::span<const VariableSpec> replication_variables();

/// Income-class country lists (ISO-3166 alpha-3 codes).
struct ClassificationList {
    std::vector<std::string> lower_middle;
    std::vector<std::string> upper_middle;

    void validate() const; // disjoint, jointly unique
};

/// The bundled 48 + 46 replication classification.
const ClassificationList& replication_classification();

struct CountryEntry {
    std::string name;
    std::string code;
    bool upper_middle = false;
};

/// Bundled name -> ISO alpha-3 table for the 94 replication countries.
std::span<const CountryEntry> country_table();
std::optional<std::string> country_code_for(const std::string& name);

/// Group labels used by classify().
inline constexpr const char* kLowerMiddleLabel = "lower-middle";
inline constexpr const char* kUpperMiddleLabel = "upper-middle";

enum class LogPolicy { Strict, SignedLog };

/// Wide CSV loader. Header must be exactly
///   country,year,GNI,...,GFCF (see replication_variables order);
/// blank cells are missing; duplicate (country, year) rows and non-numeric
/// cells are errors carrying the row number.
PanelDataset load_csv(const std::filesystem::path& path);

/// Inverse of load_csv up to cell ordering.
void write_csv(const PanelDataset& panel, const std::filesystem::path& path);

/// Tags every unit with its income class; errors if a unit is in neither or
/// both lists.
PanelDataset classify(const PanelDataset& panel, const ClassificationList& list);

/// Adds the ln-columns required by the models (lnGNI, lnEXPG, lnIMPG, lnPCT,
/// lnFDI, lnGFCF under the replication variable set). Transform errors are
/// annotated with the variable label.
PanelDataset build_model_variables(const PanelDataset& panel,
                                   std::span<const VariableSpec> specs, LogPolicy policy);

// --- indicator fetch + cache ---

struct FetchRequest {
    std::string indicator;
    std::vector<std::string> countries; // ISO alpha-3 codes
    int year_begin = 0;
    int year_end = 0;
    std::filesystem::path cache_dir; // empty: env TFPANEL_CACHE_DIR or ./.tfpanel_cache
};

struct FetchOptions {
    bool offline = false;
    std::string host = "api.worldbank.org";
    int port = 80;
    std::string base_path = "/v2";
};

struct IndicatorRecord {
    std::string indicator;
    std::string country;
    int year = 0;
    std::optional<double> value;
    std::string raw; // value as served; cached verbatim for bit-exact replay
};

/// Cache-through fetch of one indicator over a country/year window. Records
/// persist one per line keyed (indicator, country, year); later calls are
/// served from the cache and never touch the network when covered. Offline
/// mode reads the cache only.
std::vector<IndicatorRecord> fetch_indicators(const FetchRequest& req,
                                              const FetchOptions& opts = {});

/// Deterministic synthetic 94-country panel (2010-2020) for exercising the
/// full pipeline: per income group, every indicator column reproduces fixed
/// target summary moments (mean, sample std, min, max) exactly.
PanelDataset replication_skeleton(std::uint64_t seed = 0x5eedda7aULL);

} // namespace tfpanel
