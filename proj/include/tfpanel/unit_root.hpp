#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tfpanel/panel.hpp"

namespace tfpanel {

enum class Deterministic { None, Intercept, InterceptTrend };

/// Augmented Dickey-Fuller regression layout shared by both panel tests:
///   dy_t = rho * y_{t-1} + sum_{j=1..lags} phi_j * dy_{t-j} + deterministics + e_t
struct AdfSpec {
    int lags = 1;
    Deterministic det = Deterministic::Intercept;
};

struct UnitRootResult {
    std::string test;        // "llc" or "ips"
    double statistic = 0.0;  // adjusted t* (LLC) or W_t-bar (IPS)
    double p_value = 1.0;    // one-sided lower tail
    std::vector<double> unit_stats; // per-unit ADF t (IPS only)
    AdfSpec spec;
    int n_units = 0;   // units actually used
    int n_periods = 0; // average usable observations per unit regression
    std::vector<std::string> units_used;
    std::vector<std::string> units_dropped;
};

struct UnitRootOptions {
    // Monte Carlo fallback for (T, lags, deterministic) combinations not in
    // the embedded moment tables. Seeded, so results stay deterministic.
    bool simulate_if_missing = true;
    int simulation_reps = 50000;
    std::uint64_t simulation_seed = 0x51c5d85a11aa90b3ULL;
    // Per-unit lag choice by BIC over 0..spec.lags instead of fixed spec.lags.
    bool bic_lag_selection = false;
};

/// t statistic of the level coefficient in the ADF regression, least squares.
/// The series must be a contiguous run of observed values.
double adf_stat(std::span<const double> series, const AdfSpec& spec);

/// Levin-Lin-Chu pooled test: per-unit orthogonalized and normalized
/// residuals, pooled rho, and the mean/std adjusted t*.
UnitRootResult llc_test(const PanelDataset& panel, const std::string& variable,
                        const AdfSpec& spec, const UnitRootOptions& opts = {});

/// Im-Pesaran-Shin heterogeneous test: W_t-bar standardization of the
/// cross-unit mean ADF t.
UnitRootResult ips_test(const PanelDataset& panel, const std::string& variable,
                        const AdfSpec& spec, const UnitRootOptions& opts = {});

// --- moment machinery (exposed for the table generator and tests) ---

struct LlcAdjustment {
    double mu_star = 0.0;
    double sigma_star = 1.0;
};

struct IpsMoments {
    double mean_t = 0.0;
    double var_t = 1.0;
};

/// Embedded-table lookup (linear interpolation across the T grid), falling
/// back to seeded simulation per opts. t_tilde is the average usable
/// observation count per unit regression.
LlcAdjustment llc_adjustment(double t_tilde, Deterministic det,
                             const UnitRootOptions& opts = {});

/// Exact-key lookup for (n_obs, lags, det); seeded simulation per opts when
/// the table has no entry.
IpsMoments ips_moments(int n_obs, int lags, Deterministic det,
                       const UnitRootOptions& opts = {});

/// Monte Carlo calibration of the LLC mean/std adjustment at a given T.
LlcAdjustment simulate_llc_adjustment(int t_tilde, Deterministic det, int reps,
                                      std::uint64_t seed);

/// Monte Carlo moments of the ADF t statistic under the random-walk null.
IpsMoments simulate_ips_moments(int n_obs, int lags, Deterministic det, int reps,
                                std::uint64_t seed);

} // namespace tfpanel
