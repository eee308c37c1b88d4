#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "tfpanel/errors.hpp"
#include "tfpanel/ingest.hpp"

namespace tfpanel {

namespace {

using CacheKey = std::pair<std::string, int>; // (country, year)

std::filesystem::path resolve_cache_dir(const FetchRequest& req) {
    if (!req.cache_dir.empty()) return req.cache_dir;
    if (const char* env = std::getenv("TFPANEL_CACHE_DIR"); env && *env) return env;
    return ".tfpanel_cache";
}

std::filesystem::path cache_file(const std::filesystem::path& dir, const std::string& indicator) {
    std::string name = indicator;
    for (char& c : name)
        if (c == '/' || c == '\\') c = '_';
    return dir / (name + ".cache");
}

// One record per line: indicator \t country \t year \t raw-value (empty =
// missing). The raw string is preserved verbatim so rewriting the cache is
// bit-exact.
std::map<CacheKey, std::string> read_cache(const std::filesystem::path& file,
                                           const std::string& indicator) {
    std::map<CacheKey, std::string> cache;
    std::ifstream in(file);
    if (!in) return cache;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        for (char ch : line) {
            if (ch == '\t') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        f.push_back(cur);
        if (f.size() != 4 || f[0] != indicator) {
            std::ostringstream os;
            os << "cache " << file.string() << " line " << line_no << ": malformed entry";
            throw ValidationError(os.str());
        }
        int year = 0;
        auto [p1, e1] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), year);
        if (e1 != std::errc() || p1 != f[2].data() + f[2].size())
            throw ValidationError("cache " + file.string() + ": bad year '" + f[2] + "'");
        if (!f[3].empty()) {
            double v = 0;
            auto [p2, e2] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), v);
            if (e2 != std::errc() || p2 != f[3].data() + f[3].size() || !std::isfinite(v)) {
                std::ostringstream os;
                os << "cache entry " << indicator << "/" << f[1] << "/" << f[2]
                   << ": non-numeric value '" << f[3] << "'";
                throw ValidationError(os.str());
            }
        }
        cache[{f[1], year}] = f[3];
    }
    return cache;
}

void write_cache(const std::filesystem::path& file,
                 const std::map<CacheKey, std::string>& cache, const std::string& indicator) {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw IoError("cannot write cache file '" + file.string() + "'");
    for (const auto& [key, raw] : cache)
        out << indicator << '\t' << key.first << '\t' << key.second << '\t' << raw << '\n';
}

std::optional<double> parse_value(const std::string& raw) {
    if (raw.empty()) return std::nullopt;
    double v = 0;
    std::from_chars(raw.data(), raw.data() + raw.size(), v);
    return v;
}

} // namespace

std::vector<IndicatorRecord> fetch_indicators(const FetchRequest& req, const FetchOptions& opts) {
    if (req.indicator.empty()) throw ValidationError("fetch: indicator code is empty");
    if (req.year_begin > req.year_end || req.year_begin == 0)
        throw ValidationError("fetch: empty year range");
    if (req.countries.empty()) return {};

    const std::filesystem::path dir = resolve_cache_dir(req);
    const std::filesystem::path file = cache_file(dir, req.indicator);
    std::map<CacheKey, std::string> cache = read_cache(file, req.indicator);

    std::vector<CacheKey> wanted;
    for (const auto& c : req.countries)
        for (int y = req.year_begin; y <= req.year_end; ++y) wanted.push_back({c, y});

    std::vector<CacheKey> missing;
    for (const auto& key : wanted)
        if (!cache.count(key)) missing.push_back(key);

    if (!missing.empty()) {
        if (opts.offline) {
            if (cache.empty())
                throw IoError("fetch: offline with no cache for indicator '" + req.indicator +
                              "'");
            // Serve whatever overlap exists; absent keys stay absent.
        } else {
            std::set<std::string> countries;
            for (const auto& key : missing) countries.insert(key.first);
            std::string country_path;
            for (const auto& c : countries) {
                if (!country_path.empty()) country_path += ';';
                country_path += c;
            }
            std::ostringstream url;
            url << opts.base_path << "/country/" << country_path << "/indicator/"
                << req.indicator << "?format=json&per_page=20000&date=" << req.year_begin
                << ':' << req.year_end;

            httplib::Client client(opts.host, opts.port);
            client.set_read_timeout(30, 0);
            auto res = client.Get(url.str());
            if (!res || res->status != 200)
                throw IoError("fetch: transport failure for indicator '" + req.indicator +
                              "' (" + (res ? "status " + std::to_string(res->status)
                                           : "no response") +
                              ") and no cached copy");

            nlohmann::json payload;
            try {
                payload = nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw ValidationError("fetch: malformed payload for indicator '" +
                                      req.indicator + "': " + e.what());
            }
            if (!payload.is_array() || payload.size() < 2 || !payload[1].is_array())
                throw ValidationError("fetch: malformed payload for indicator '" +
                                      req.indicator + "': expected [meta, rows]");
            for (const auto& row : payload[1]) {
                try {
                    const std::string country = row.at("countryiso3code").get<std::string>();
                    const int year = std::stoi(row.at("date").get<std::string>());
                    std::string raw;
                    if (!row.at("value").is_null()) {
                        std::ostringstream vs;
                        vs.precision(17);
                        vs << row.at("value").get<double>();
                        raw = vs.str();
                    }
                    cache[{country, year}] = raw;
                } catch (const std::exception& e) {
                    throw ValidationError("fetch: malformed payload row for indicator '" +
                                          req.indicator + "': " + e.what());
                }
            }
            // Every requested key must now resolve, observed or missing.
            for (const auto& key : missing)
                if (!cache.count(key)) cache[{key.first, key.second}] = "";
            write_cache(file, cache, req.indicator);
        }
    }

    std::vector<IndicatorRecord> out;
    for (const auto& key : wanted) {
        auto it = cache.find(key);
        if (it == cache.end()) continue;
        IndicatorRecord rec;
        rec.indicator = req.indicator;
        rec.country = key.first;
        rec.year = key.second;
        rec.raw = it->second;
        rec.value = parse_value(it->second);
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace tfpanel
