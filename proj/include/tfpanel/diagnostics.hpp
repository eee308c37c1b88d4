#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfpanel/gmm.hpp"
#include "tfpanel/panel.hpp"

namespace tfpanel {

/// Generic statistic/df/p-value container for the specification tests.
struct TestResult {
    std::string name;
    double statistic = 0.0;
    std::optional<int> df; // absent for normal-referenced tests
    double p_value = 1.0;
    std::string subset;  // difference-in-Hansen only
    bool clamped = false; // negative difference-in-Hansen clamped to zero
    std::vector<std::string> notes;
};

/// Sargan over-identification test: one-step moment quadratic form scaled by
/// the one-step residual variance, chi-square(L - k).
TestResult sargan(const GmmEstimate& est);

/// Hansen J: the same quadratic form under the robust two-step weighting.
/// For one-step estimates the weighting is built on demand from the one-step
/// residuals.
TestResult hansen_j(const GmmEstimate& est);

/// J_full - J_reduced for a proper nonempty subset of instrument columns
/// (named as in InstrumentBlocks::column_names). Negative statistics are
/// clamped to zero and flagged.
TestResult difference_in_hansen(const GmmEstimate& est,
                                const std::vector<std::string>& subset_columns);

/// Arellano-Bond test for m-th order serial correlation in the differenced
/// residuals, standard-normal reference.
TestResult ar_test(const GmmEstimate& est, int order);

/// Pesaran CD statistic from average pairwise correlations across units.
/// Matrix layout: one row per unit, one column per period, NaN = missing.
/// Pairs with fewer than 3 overlapping observations are dropped and counted.
TestResult pesaran_cd(const Eigen::MatrixXd& series_by_unit);
TestResult pesaran_cd(const PanelDataset& panel, const std::string& variable);

/// Differenced residuals of an estimate arranged unit x period (NaN where no
/// usable difference equation); input for the CD test on residuals.
Eigen::MatrixXd residual_matrix(const GmmEstimate& est, std::size_t n_units,
                                std::size_t n_periods);

/// Wald test that every coefficient in the subset is zero,
/// chi-square(|subset|).
TestResult wald_joint(const GmmEstimate& est, const std::vector<std::string>& coefficients);

} // namespace tfpanel
