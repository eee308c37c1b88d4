#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "tfpanel/errors.hpp"
#include "tfpanel/ingest.hpp"

using namespace tfpanel;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("tfpanel_test_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_text(const fs::path& dir, const char* name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

std::string csv_header() {
    std::string h = "country,year";
    for (const auto& v : replication_variables()) h += "," + v.label;
    return h;
}

// Two countries x three years; GNI and EXPG populated, one GNI cell blank,
// every other indicator column empty.
std::string small_csv() {
    std::string text = csv_header() + "\n";
    const char* rows[] = {
        "AAA,2010,100,5", "AAA,2011,110,6", "AAA,2012,121,7",
        "BBB,2010,200,8", "BBB,2011,,9",    "BBB,2012,242,10",
    };
    for (const char* r : rows) {
        std::string line = r;
        // country,year,GNI,EXPG then 15 empty columns
        text += line + std::string(15, ',') + "\n";
    }
    return text;
}

} // namespace

TEST_SUITE("ingest") {

TEST_CASE("small csv loads with one masked cell") {
    TempDir dir("csv_small");
    fs::path p = write_text(dir.path, "small.csv", small_csv());
    PanelDataset panel = load_csv(p);
    CHECK(panel.n_units() == 2);
    CHECK(panel.n_periods() == 3);
    CHECK(panel.observed_count("GNI") == 5); // one blank
    CHECK(panel.observed_count("EXPG") == 6);
    CHECK(panel.value(0, 0, "GNI") == doctest::Approx(100.0));
    CHECK_FALSE(panel.is_observed(1, 1, "GNI"));
}

TEST_CASE("csv validation errors carry the row number") {
    TempDir dir("csv_bad");

    fs::path bad_header = write_text(dir.path, "h.csv", "country,GNI\nAAA,1\n");
    CHECK_THROWS_AS(load_csv(bad_header), ValidationError);

    std::string dup = csv_header() + "\n";
    dup += "NGA,2015,1" + std::string(16, ',') + "\n";
    dup += "NGA,2015,2" + std::string(16, ',') + "\n";
    fs::path dup_path = write_text(dir.path, "dup.csv", dup);
    try {
        load_csv(dup_path);
        FAIL("expected duplicate-key error");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("NGA") != std::string::npos);
        CHECK(msg.find("2015") != std::string::npos);
    }

    std::string nonnum = csv_header() + "\n";
    nonnum += "NGA,2015,abc" + std::string(16, ',') + "\n";
    fs::path nn_path = write_text(dir.path, "nn.csv", nonnum);
    try {
        load_csv(nn_path);
        FAIL("expected non-numeric error");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("GNI") != std::string::npos);
    }

    CHECK_THROWS_AS(load_csv(dir.path / "missing.csv"), IoError);
}

TEST_CASE("write_csv then load_csv is the identity up to cell order") {
    PanelDataset p = replication_skeleton(7);
    TempDir dir("roundtrip");
    write_csv(p, dir.path / "skel.csv");
    PanelDataset q = load_csv(dir.path / "skel.csv");
    REQUIRE(q.n_units() == p.n_units());
    REQUIRE(q.n_periods() == p.n_periods());
    for (const auto& v : replication_variables()) {
        const auto& a = p.column(v.label);
        const auto& b = q.column(v.label);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::isnan(a[i]))
                CHECK(std::isnan(b[i]));
            else
                CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("replication skeleton has 94 countries x 11 years") {
    PanelDataset p = replication_skeleton(42);
    CHECK(p.n_units() == 94);
    CHECK(p.n_periods() == 11);
    CHECK(p.cell_count() == 1034);
    for (const auto& v : replication_variables())
        CHECK(p.observed_count(v.label) == 1034);
}

TEST_CASE("classification splits 48 lower and 46 upper") {
    const auto& list = replication_classification();
    CHECK(list.lower_middle.size() == 48);
    CHECK(list.upper_middle.size() == 46);

    PanelDataset p = classify(replication_skeleton(42), list);
    int lower = 0, upper = 0;
    for (const auto& t : p.group_tags()) {
        if (t == kLowerMiddleLabel) ++lower;
        if (t == kUpperMiddleLabel) ++upper;
    }
    CHECK(lower == 48);
    CHECK(upper == 46);

    PanelDataset low = subset_by_group(p, kLowerMiddleLabel);
    CHECK(low.n_units() == 48);
    PanelDataset up = subset_by_group(p, kUpperMiddleLabel);
    CHECK(up.n_units() == 46);
    CHECK(up.cell_count() == 506);
}

TEST_CASE("name lookup places countries in the expected class") {
    auto nigeria = country_code_for("Nigeria");
    REQUIRE(nigeria.has_value());
    CHECK(*nigeria == "NGA");
    auto brazil = country_code_for("Brazil");
    REQUIRE(brazil.has_value());
    CHECK(*brazil == "BRA");

    const auto& list = replication_classification();
    CHECK(std::count(list.lower_middle.begin(), list.lower_middle.end(), "NGA") == 1);
    CHECK(std::count(list.upper_middle.begin(), list.upper_middle.end(), "BRA") == 1);
    CHECK_FALSE(country_code_for("Germany").has_value());
}

TEST_CASE("classify rejects unknown and doubly listed units") {
    PanelDataset p = PanelDataset::create({"DEU"}, {2010});
    p = p.with_column("GNI", {1.0});
    CHECK_THROWS_AS(classify(p, replication_classification()), ValidationError);

    ClassificationList both;
    both.lower_middle = {"AAA"};
    both.upper_middle = {"AAA"};
    PanelDataset q = PanelDataset::create({"AAA"}, {2010});
    CHECK_THROWS_AS(classify(q, both), ValidationError);
}

TEST_CASE("build_model_variables log handling") {
    PanelDataset positive = PanelDataset::create({"AAA"}, {2010});
    for (const auto& v : replication_variables())
        positive = positive.with_column(
            v.label, {v.label == std::string("GNI") ? std::exp(10.0) : 1.0});

    PanelDataset strict =
        build_model_variables(positive, replication_variables(), LogPolicy::Strict);
    CHECK(strict.value(0, 0, "lnGNI") == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(strict.has_variable("lnEXPG"));
    CHECK(strict.has_variable("lnPCT"));
    CHECK(strict.has_variable("lnFDI"));
    CHECK(strict.has_variable("lnGFCF"));
    CHECK_FALSE(strict.has_variable("lnTRF"));
    CHECK(strict.variable_names().size() == positive.variable_names().size() + 6);

    // Negative FDI: the strict policy errors naming the variable, signed-log
    // proceeds and leaves the raw column untouched.
    PanelDataset with_negative = PanelDataset::create({"AAA"}, {2010});
    for (const auto& v : replication_variables())
        with_negative = with_negative.with_column(
            v.label, {v.label == std::string("FDI") ? -4.07e9 : 1.0});
    try {
        build_model_variables(with_negative, replication_variables(), LogPolicy::Strict);
        FAIL("expected strict-policy error");
    } catch (const TransformError& e) {
        CHECK(std::string(e.what()).find("FDI") != std::string::npos);
    }
    PanelDataset signed_log =
        build_model_variables(with_negative, replication_variables(), LogPolicy::SignedLog);
    CHECK(signed_log.value(0, 0, "lnFDI") == doctest::Approx(-std::log1p(4.07e9)));
    CHECK(signed_log.value(0, 0, "FDI") == doctest::Approx(-4.07e9));
}

TEST_CASE("signed log of zero is zero in model building") {
    PanelDataset p = PanelDataset::create({"AAA"}, {2010});
    for (const auto& v : replication_variables())
        p = p.with_column(v.label, {v.label == std::string("FDI") ? 0.0 : 1.0});
    PanelDataset out = build_model_variables(p, replication_variables(), LogPolicy::SignedLog);
    CHECK(out.value(0, 0, "lnFDI") == doctest::Approx(0.0));
}

TEST_CASE("skeleton reproduces the group summary targets") {
    PanelDataset p = classify(replication_skeleton(42), replication_classification());
    auto grouped = describe(p, true, {"GNI", "TRF", "FDI"});
    auto find = [&](const std::string& var, const std::string& group) {
        for (const auto& r : grouped)
            if (r.variable == var && r.group == group) return r;
        throw std::runtime_error("row not found");
    };
    // Group targets hit exactly (to numerical precision).
    auto gni_up = find("GNI", kUpperMiddleLabel);
    CHECK(gni_up.obs == 506);
    CHECK(gni_up.mean == doctest::Approx(14855.94).epsilon(1e-9));
    CHECK(gni_up.stddev == doctest::Approx(5208.089).epsilon(1e-9));
    CHECK(gni_up.min == doctest::Approx(4500.667));
    CHECK(gni_up.max == doctest::Approx(31840.0));
    auto fdi_low = find("FDI", kLowerMiddleLabel);
    CHECK(fdi_low.obs == 528);
    CHECK(fdi_low.mean == doctest::Approx(-2.38e9).epsilon(1e-9));
    CHECK(fdi_low.min < 0.0);

    // Whole-panel values implied by the group targets.
    auto total = describe(p, false, {"GNI", "TRF"});
    CHECK(total[0].obs == 1034);
    CHECK(total[0].mean == doctest::Approx(10179.27).epsilon(2e-6));
    CHECK(total[0].stddev == doctest::Approx(6256.525).epsilon(1e-4));
    CHECK(total[0].min == doctest::Approx(1610.0));
    CHECK(total[0].max == doctest::Approx(31840.0));
    CHECK(total[1].mean == doctest::Approx(6.278156).epsilon(1e-4));
}

TEST_CASE("skeleton is seed-deterministic") {
    PanelDataset a = replication_skeleton(42);
    PanelDataset b = replication_skeleton(42);
    PanelDataset c = replication_skeleton(43);
    CHECK(a.column("GNI") == b.column("GNI"));
    CHECK(a.column("GNI") != c.column("GNI"));
}

TEST_CASE("fetch caches records and replays without network") {
    std::atomic<int> hits{0};
    httplib::Server server;
    server.Get(R"(/v2/country/(.+)/indicator/(.+))",
               [&](const httplib::Request&, httplib::Response& res) {
                   ++hits;
                   res.set_content(
                       R"([{"page":1},[)"
                       R"({"countryiso3code":"NGA","date":"2015","value":12.5},)"
                       R"({"countryiso3code":"NGA","date":"2016","value":null},)"
                       R"({"countryiso3code":"BRA","date":"2015","value":3.25},)"
                       R"({"countryiso3code":"BRA","date":"2016","value":4.5}]])",
                       "application/json");
               });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    TempDir dir("fetch");
    FetchRequest req;
    req.indicator = "NY.TEST";
    req.countries = {"NGA", "BRA"};
    req.year_begin = 2015;
    req.year_end = 2016;
    req.cache_dir = dir.path;
    FetchOptions opts;
    opts.host = "127.0.0.1";
    opts.port = port;

    auto first = fetch_indicators(req, opts);
    CHECK(hits.load() == 1);
    REQUIRE(first.size() == 4);
    CHECK(first[0].country == "NGA");
    CHECK(first[0].year == 2015);
    REQUIRE(first[0].value.has_value());
    CHECK(*first[0].value == doctest::Approx(12.5));
    CHECK_FALSE(first[1].value.has_value()); // null stays missing

    auto second = fetch_indicators(req, opts);
    CHECK(hits.load() == 1); // cache-served, zero network operations
    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(second[i].raw == first[i].raw);
        CHECK(second[i].country == first[i].country);
    }

    // Offline mode keeps working from the cache.
    FetchOptions offline = opts;
    offline.offline = true;
    auto third = fetch_indicators(req, offline);
    CHECK(hits.load() == 1);
    CHECK(third.size() == first.size());

    server.stop();
    runner.join();
}

TEST_CASE("fetch edge cases") {
    TempDir dir("fetch_edge");

    FetchRequest empty;
    empty.indicator = "NY.TEST";
    empty.year_begin = 2015;
    empty.year_end = 2016;
    empty.cache_dir = dir.path;
    CHECK(fetch_indicators(empty, {}).empty()); // vacuous query, no error

    FetchRequest req;
    req.indicator = "NY.TEST";
    req.countries = {"NGA"};
    req.year_begin = 2015;
    req.year_end = 2015;
    req.cache_dir = dir.path;

    FetchOptions offline;
    offline.offline = true;
    CHECK_THROWS_AS(fetch_indicators(req, offline), IoError); // no cache at all

    // Poisoned cache entry names the record.
    write_text(dir.path, "NY.TEST.cache", "NY.TEST\tNGA\t2015\tnot-a-number\n");
    try {
        fetch_indicators(req, offline);
        FAIL("expected poisoned-cache error");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("NY.TEST") != std::string::npos);
        CHECK(msg.find("NGA") != std::string::npos);
        CHECK(msg.find("2015") != std::string::npos);
    }
}

} // TEST_SUITE
