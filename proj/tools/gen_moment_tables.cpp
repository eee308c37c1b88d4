// Regenerates src/unit_root_tables.cpp: seeded Monte Carlo calibration of the
// LLC mean/std adjustments and the IPS ADF t moments across the T grid used
// by the library. Usage: gen_moment_tables > ../src/unit_root_tables.cpp

#include <cstdio>
#include <vector>

#include "tfpanel/unit_root.hpp"

using namespace tfpanel;

namespace {

constexpr int kReps = 100000;
constexpr std::uint64_t kSeed = 0x7a31c9d201551b6dULL;

std::vector<int> llc_grid() {
    std::vector<int> g;
    for (int t = 6; t <= 60; ++t) g.push_back(t);
    for (int t = 65; t <= 100; t += 5) g.push_back(t);
    for (int t : {110, 120, 150, 200, 250}) g.push_back(t);
    return g;
}

std::vector<int> ips_grid() {
    std::vector<int> g;
    for (int t = 5; t <= 60; ++t) g.push_back(t);
    for (int t = 65; t <= 100; t += 5) g.push_back(t);
    for (int t : {110, 120, 150, 200, 250}) g.push_back(t);
    return g;
}

const char* det_name(Deterministic d) {
    switch (d) {
    case Deterministic::None: return "None";
    case Deterministic::Intercept: return "Intercept";
    case Deterministic::InterceptTrend: return "InterceptTrend";
    }
    return "?";
}

void emit_llc(const char* array_name, Deterministic det) {
    std::printf("constexpr LlcTableRow %s[] = {\n", array_name);
    for (int t : llc_grid()) {
        LlcAdjustment a = simulate_llc_adjustment(t, det, kReps, kSeed);
        std::printf("    {%d, %.6f, %.6f},\n", t, a.mu_star, a.sigma_star);
        std::fflush(stdout);
    }
    std::printf("};\n\n");
    std::fprintf(stderr, "llc %s done\n", det_name(det));
}

void emit_ips(const char* array_name, Deterministic det) {
    std::printf("constexpr IpsTableRow %s[] = {\n", array_name);
    for (int lags = 0; lags <= 1; ++lags) {
        for (int t : ips_grid()) {
            const int min_k = 2 + lags + (det == Deterministic::InterceptTrend ? 1 : 0);
            if (t < lags + 3 || t < min_k) continue;
            IpsMoments m = simulate_ips_moments(t, lags, det, kReps, kSeed);
            std::printf("    {%d, %d, %.6f, %.6f},\n", t, lags, m.mean_t, m.var_t);
            std::fflush(stdout);
        }
        std::fprintf(stderr, "ips %s lags=%d done\n", det_name(det), lags);
    }
    std::printf("};\n\n");
}

} // namespace

int main() {
    std::printf(
        "// Frozen Monte Carlo moments for the panel unit-root tests.\n"
        "// Generated by tools/gen_moment_tables.cpp (%d replications per entry,\n"
        "// seed 0x%llx). Regenerate with: build/tools/gen_moment_tables > "
        "src/unit_root_tables.cpp\n\n"
        "#include \"unit_root_tables.hpp\"\n\n"
        "namespace tfpanel::detail {\n\n"
        "namespace {\n",
        kReps, static_cast<unsigned long long>(kSeed));

    emit_llc("kLlcNone", Deterministic::None);
    emit_llc("kLlcIntercept", Deterministic::Intercept);
    emit_llc("kLlcTrend", Deterministic::InterceptTrend);
    emit_ips("kIpsIntercept", Deterministic::Intercept);
    emit_ips("kIpsTrend", Deterministic::InterceptTrend);

    std::printf(
        "} // namespace\n\n"
        "std::span<const LlcTableRow> llc_table(Deterministic det) {\n"
        "    switch (det) {\n"
        "    case Deterministic::None: return kLlcNone;\n"
        "    case Deterministic::Intercept: return kLlcIntercept;\n"
        "    case Deterministic::InterceptTrend: return kLlcTrend;\n"
        "    }\n"
        "    return {};\n"
        "}\n\n"
        "std::span<const IpsTableRow> ips_table(Deterministic det) {\n"
        "    switch (det) {\n"
        "    case Deterministic::Intercept: return kIpsIntercept;\n"
        "    case Deterministic::InterceptTrend: return kIpsTrend;\n"
        "    default: return {};\n"
        "    }\n"
        "}\n\n"
        "} // namespace tfpanel::detail\n");
    return 0;
}
