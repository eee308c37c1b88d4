#pragma once

#include <span>
#include <string>
#include <vector>

#include "tfpanel/panel.hpp"

namespace tfpanel {

/// Shape of one panel non-causality run: K lags, common usable length T per
/// unit regression, N units. The variance of the individual Wald statistic
/// exists only when T > 2K + 5.
struct DhConfig {
    int lags = 1;      // K
    int effective_t = 0; // usable observations per unit regression
    int n_units = 0;   // N

    void validate() const;
};

struct DhStandardized {
    double z_bar = 0.0;
    double z_bar_tilde = 0.0;
    double p_z_bar = 1.0;       // two-sided normal
    double p_z_bar_tilde = 1.0; // two-sided normal
};

struct DhResult {
    std::string cause;
    std::string effect;
    double w_bar = 0.0;
    double z_bar = 0.0;
    double z_bar_tilde = 0.0;
    double p_z_bar = 1.0;
    double p_z_bar_tilde = 1.0;
    std::vector<double> unit_walds;
    DhConfig config;
    std::vector<std::string> flagged_units;  // Wald above the degeneracy threshold
    std::vector<std::string> dropped_units;  // unusable or exactly degenerate fits
};

struct DhOptions {
    // Per-unit Walds above this are flagged as near-degenerate fits.
    double flag_threshold = 1e4;
    // Average per-unit moments at heterogeneous usable lengths instead of
    // truncating every unit to the shortest common window.
    bool per_unit_t_policy = false;
};

/// Wald statistic that all K x-lag coefficients are zero in
///   y_t = a + sum_k g_k y_{t-k} + sum_k b_k x_{t-k} + e_t,
/// computed as (RSS_r - RSS_u) / (RSS_u / (n - 2K - 1)).
/// x and y must be contiguous observed series of equal length.
double unit_wald(std::span<const double> x, std::span<const double> y, int lags);

/// Z-bar = sqrt(N/(2K)) (W-bar - K) and the fixed-T standardization
/// Z-bar-tilde = sqrt(N) (W-bar - E[W]) / sqrt(Var[W]) with
///   E[W]   = K (T-2K-1) / (T-2K-3)
///   Var[W] = 2K (T-2K-1)^2 (T-K-3) / ((T-2K-3)^2 (T-2K-5)).
DhStandardized standardize_dh(double w_bar, const DhConfig& cfg);

/// Dumitrescu-Hurlin test of "cause does not Granger-cause effect".
DhResult dh_test(const PanelDataset& panel, const std::string& cause,
                 const std::string& effect, int lags, const DhOptions& opts = {});

} // namespace tfpanel
