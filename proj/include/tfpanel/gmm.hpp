#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfpanel/panel.hpp"

namespace tfpanel {

enum class RegressorRole { Exogenous, Predetermined, Endogenous };
enum class Scheme { Difference, System };
enum class Step { One, Two };

/// One dynamic panel regression: dependent, lagged dependent (lag_depth
/// copies), regressors with instrumenting roles, optional time dummies.
/// Error components: unit effect + idiosyncratic term, removed by first
/// differencing (Difference) or instrumented in levels (System).
///
/// Time dummies are generated from the period axis as yr1..yrT; the first two
/// periods' dummies are dropped (the differenced dummy set and, for System,
/// the intercept are otherwise exactly collinear). System models carry an
/// intercept in the level equations; Difference models have none.
struct ModelSpec {
    std::string dependent;
    bool include_lagged_dependent = true;
    int lag_depth = 1;
    std::vector<std::pair<std::string, RegressorRole>> regressors;
    bool time_dummies = false;

    void validate() const;
};

/// GMM-style entry: lags min_lag..max_lag of the variable's level instrument
/// the differenced equations (collapse sums the per-period columns into one
/// column per lag distance). max_lag < 0 means unbounded.
struct GmmStyleInstrument {
    std::string variable;
    int min_lag = 2;
    int max_lag = -1;
    bool collapse = true;
};

struct InstrumentPlan {
    std::vector<GmmStyleInstrument> gmm_style;
    std::vector<std::string> iv_style; // enter differenced in difference equations
    // System GMM level-equation instruments: lagged first differences of each
    // gmm_style variable, lag distances 1..level_lag_depth.
    int level_lag_depth = 1;
    bool level_collapse = true;
    // Constant column instrumenting the level equations.
    bool level_constant = true;
    // Untransformed time dummies in the level instrument block.
    bool level_time_dummies = true;

    void validate(const ModelSpec& spec) const;
};

/// Default replication-style plan: collapsed lags 2.. of the lagged
/// dependent, every other regressor iv-style, level depth 1.
InstrumentPlan default_plan(const ModelSpec& spec);

/// Per-unit instrument blocks plus the metadata shared across the stack.
struct InstrumentBlocks {
    std::vector<Eigen::MatrixXd> z;          // one matrix per unit (rows x L)
    std::vector<Eigen::MatrixXd> h;          // one-step kernel per unit
    std::vector<std::vector<int>> row_periods; // period index per row, per unit
    std::vector<int> level_start;            // first level row per unit (rows if pure diff)
    std::vector<std::string> column_names;
    int n_columns = 0;
};

struct GmmWarnings {
    bool weight_pseudo_inverse = false; // W needed a pseudo-inverse
    bool instruments_ge_groups = false; // L >= N
    std::vector<std::string> notes;
};

class GmmData; // internal assembled design, shared with diagnostics

struct GmmEstimate {
    std::string dependent;
    std::vector<std::string> coef_names;
    Eigen::VectorXd coef;
    Eigen::MatrixXd cov;
    Eigen::VectorXd se;
    Step step = Step::One;
    Scheme scheme = Scheme::Difference;
    int instrument_count = 0;
    int group_count = 0;
    long n_obs = 0; // difference rows (Difference) or level rows (System)
    bool windmeijer_applied = false;
    GmmWarnings warnings;

    // z statistic and two-sided normal p-value for one coefficient.
    double z_stat(std::size_t i) const { return coef(i) / se(i); }
    double p_value(std::size_t i) const;
    std::optional<std::size_t> coef_index(const std::string& name) const;

    // Residuals of the estimating equations, one vector per group: the
    // differenced-equation rows first, then (System only) the level rows.
    std::vector<Eigen::VectorXd> residuals() const;

    std::shared_ptr<const GmmData> data; // retained for diagnostics
    // One-step pieces retained for Sargan / Windmeijer / two-step-on-demand.
    Eigen::VectorXd coef_one_step;
    Eigen::MatrixXd w1; // (sum Z' H Z)^-1
    Eigen::MatrixXd w2; // (sum Z' e1 e1' Z)^-1, two-step estimates only
};

InstrumentBlocks build_difference_instruments(const PanelDataset& panel, const ModelSpec& spec,
                                              const InstrumentPlan& plan);
InstrumentBlocks build_system_instruments(const PanelDataset& panel, const ModelSpec& spec,
                                          const InstrumentPlan& plan);

struct EstimateOptions {
    bool windmeijer = true; // finite-sample correction of two-step covariance
};

GmmEstimate estimate(const PanelDataset& panel, const ModelSpec& spec,
                     const InstrumentPlan& plan, Scheme scheme, Step step,
                     const EstimateOptions& opts = {});

/// Replaces the two-step covariance with the finite-sample-corrected one.
/// Coefficients are untouched. Rejects one-step estimates and double
/// application.
GmmEstimate windmeijer_correct(const GmmEstimate& est);

} // namespace tfpanel
