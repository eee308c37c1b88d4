#pragma once

// Internal assembled GMM design shared between the estimator and the
// diagnostics (difference-in-Hansen re-runs on reduced instrument sets).

#include <vector>

#include <Eigen/Dense>

#include "tfpanel/gmm.hpp"

namespace tfpanel {

struct GmmUnit {
    Eigen::MatrixXd x; // rows x k
    Eigen::VectorXd y;
    Eigen::MatrixXd z; // rows x L
    Eigen::MatrixXd h; // one-step kernel: tridiagonal(2,-1) on diff rows, I on levels
    std::vector<int> row_periods;
    int level_start = 0; // rows [0, level_start) are difference rows
    std::size_t panel_unit = 0;
};

class GmmData {
public:
    std::vector<GmmUnit> units;
    std::vector<std::string> coef_names;
    std::vector<std::string> instrument_names;
    std::vector<std::string> unit_names; // per entry of units
    Scheme scheme = Scheme::Difference;
    int k = 0;
    int n_instruments = 0;
    long n_obs_reported = 0;
    long n_diff_rows = 0;
    long n_level_rows = 0;
    int n_groups = 0;
};

namespace detail_gmm {

struct Solution {
    Eigen::VectorXd beta;      // final-step coefficients
    Eigen::MatrixXd cov;       // final-step covariance (Windmeijer if applied)
    Eigen::VectorXd beta_one;  // one-step coefficients
    Eigen::MatrixXd w1;        // (sum Z'HZ)^-1
    Eigen::MatrixXd w2;        // (sum Z'e1 e1'Z)^-1 (two-step only)
    Eigen::MatrixXd cov_plain; // uncorrected final covariance
    bool weight_pseudo_inverse = false;
    bool windmeijer_applied = false;
};

// active: instrument column indices to keep (empty = all).
Solution solve_gmm(const GmmData& data, Step step, bool windmeijer,
                   const std::vector<int>& active = {});

GmmData assemble(const PanelDataset& panel, const ModelSpec& spec, const InstrumentPlan& plan,
                 Scheme scheme);

// Residuals y_i - X_i beta for every unit.
std::vector<Eigen::VectorXd> residuals(const GmmData& data, const Eigen::VectorXd& beta);

// Hansen J quadratic form g' W g with g = sum Z_i' e_i.
double j_statistic(const GmmData& data, const std::vector<Eigen::VectorXd>& resid,
                   const Eigen::MatrixXd& w, const std::vector<int>& active = {});

} // namespace detail_gmm

} // namespace tfpanel
