#pragma once

// Internal least-squares helper shared by the ADF / Wald regression kernels.

#include <Eigen/Dense>

#include "tfpanel/errors.hpp"

namespace tfpanel::detail {

struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    int df = 0; // n - k
    Eigen::MatrixXd xtx_inverse;
};

inline OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const char* context) {
    const int n = static_cast<int>(X.rows());
    const int k = static_cast<int>(X.cols());
    if (n <= k)
        throw EstimationError(std::string(context) + ": insufficient observations (" +
                              std::to_string(n) + " rows for " + std::to_string(k) +
                              " regressors)");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k)
        throw EstimationError(std::string(context) + ": perfectly collinear regressors");

    OlsFit fit;
    fit.coef = qr.solve(y);
    fit.residuals = y - X * fit.coef;
    fit.rss = fit.residuals.squaredNorm();
    fit.df = n - k;
    Eigen::MatrixXd xtx = X.transpose() * X;
    fit.xtx_inverse = xtx.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    return fit;
}

} // namespace tfpanel::detail
