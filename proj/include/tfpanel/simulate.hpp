#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tfpanel/panel.hpp"

namespace tfpanel {

/// Seeded data-generating process for a dynamic panel
///   y_it = ar_coef * y_{i,t-1} + x_it' beta + u_i + lambda * f_t + eta_it
/// with a 50-period burn-in. Identical seed gives an identical panel
/// regardless of evaluation order (counter-based draws).
struct DgpConfig {
    int n_units = 0;
    int n_periods = 0;
    double ar_coef = 0.0;               // |ar_coef| < 1 stationary, == 1 unit root
    std::vector<double> beta;           // one regressor x1..xk per entry
    double fixed_effect_sd = 0.0;       // sd of u_i
    double idiosyncratic_sd = 1.0;      // sd of eta_it
    double common_factor_loading = 0.0; // lambda on the shared factor f_t
    double instrument_invalidity_corr = 0.0; // corr(z_invalid, eta)
    std::uint64_t seed = 0;
    int burn_in = 50;
    int first_period = 1; // period axis is first_period .. first_period+n_periods-1

    void validate() const;
};

/// Columns: "y", "x1".."xk", and "z_invalid" when
/// instrument_invalidity_corr != 0.
PanelDataset gen_dynamic_panel(const DgpConfig& cfg);

/// Independent just-identified IV solve (Z'X)^{-1} Z'y using hand-rolled
/// Gaussian elimination with partial pivoting. Shares no code with the GMM
/// estimator; exists purely as a cross-check oracle.
Eigen::VectorXd oracle_iv(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          const Eigen::MatrixXd& Z);

} // namespace tfpanel
