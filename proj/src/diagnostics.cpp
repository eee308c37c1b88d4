#include "tfpanel/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tfpanel/errors.hpp"
#include "tfpanel/stats.hpp"
#include "gmm_internal.hpp"

namespace tfpanel {

namespace {

const GmmData& data_of(const GmmEstimate& est, const char* context) {
    if (!est.data)
        throw ValidationError(std::string(context) + ": estimate lacks retained design data");
    return *est.data;
}

Eigen::VectorXd moment_vector(const GmmData& data, const std::vector<Eigen::VectorXd>& resid) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(data.n_instruments);
    for (std::size_t i = 0; i < data.units.size(); ++i)
        g.noalias() += data.units[i].z.transpose() * resid[i];
    return g;
}

Eigen::MatrixXd moment_outer(const GmmData& data, const std::vector<Eigen::VectorXd>& resid) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(data.n_instruments, data.n_instruments);
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        Eigen::VectorXd gi = data.units[i].z.transpose() * resid[i];
        s.noalias() += gi * gi.transpose();
    }
    return s;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& vals = es.eigenvalues();
    const double tol = 1e-12 * std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv_vals(vals.size());
    for (int i = 0; i < vals.size(); ++i) inv_vals(i) = vals(i) > tol ? 1.0 / vals(i) : 0.0;
    return es.eigenvectors() * inv_vals.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

TestResult sargan(const GmmEstimate& est) {
    const GmmData& data = data_of(est, "sargan");
    const auto resid = detail_gmm::residuals(data, est.coef_one_step);

    double rss = 0.0;
    for (const auto& e : resid) rss += e.squaredNorm();
    // Difference residuals carry twice the idiosyncratic variance.
    const double denom = 2.0 * data.n_diff_rows + data.n_level_rows;
    const double sigma2 = rss / denom;
    if (sigma2 <= 0) throw EstimationError("sargan: zero residual variance");

    const Eigen::VectorXd g = moment_vector(data, resid);
    TestResult out;
    out.name = "Sargan";
    out.statistic = g.dot(est.w1 * g) / sigma2;
    out.df = data.n_instruments - data.k;
    out.p_value = stats::chi2_upper_p(out.statistic, *out.df);
    return out;
}

TestResult hansen_j(const GmmEstimate& est) {
    const GmmData& data = data_of(est, "hansen");

    TestResult out;
    out.name = "Hansen J";
    out.df = data.n_instruments - data.k;
    if (est.step == Step::Two) {
        const auto resid = detail_gmm::residuals(data, est.coef);
        out.statistic = detail_gmm::j_statistic(data, resid, est.w2);
    } else {
        const auto resid = detail_gmm::residuals(data, est.coef);
        const Eigen::MatrixXd w2 = pseudo_inverse(moment_outer(data, resid));
        out.statistic = detail_gmm::j_statistic(data, resid, w2);
    }
    out.p_value = stats::chi2_upper_p(out.statistic, *out.df);
    return out;
}

TestResult difference_in_hansen(const GmmEstimate& est,
                                const std::vector<std::string>& subset_columns) {
    const GmmData& data = data_of(est, "difference-in-hansen");
    if (subset_columns.empty())
        throw ValidationError("difference-in-hansen: subset must be nonempty");

    std::vector<int> subset;
    for (const auto& name : subset_columns) {
        auto it = std::find(data.instrument_names.begin(), data.instrument_names.end(), name);
        if (it == data.instrument_names.end())
            throw ValidationError("difference-in-hansen: unknown instrument column '" + name +
                                  "'");
        subset.push_back(static_cast<int>(it - data.instrument_names.begin()));
    }
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    if (static_cast<int>(subset.size()) == data.n_instruments)
        throw ValidationError("difference-in-hansen: subset must be proper");

    std::vector<int> keep;
    for (int c = 0; c < data.n_instruments; ++c)
        if (!std::binary_search(subset.begin(), subset.end(), c)) keep.push_back(c);
    if (static_cast<int>(keep.size()) < data.k)
        throw ValidationError(
            "difference-in-hansen: removing the subset under-identifies the model");

    // Full-model J at the two-step optimum.
    double j_full;
    if (est.step == Step::Two) {
        const auto resid = detail_gmm::residuals(data, est.coef);
        j_full = detail_gmm::j_statistic(data, resid, est.w2);
    } else {
        detail_gmm::Solution full = detail_gmm::solve_gmm(data, Step::Two, false);
        const auto resid = detail_gmm::residuals(data, full.beta);
        j_full = detail_gmm::j_statistic(data, resid, full.w2);
    }

    detail_gmm::Solution reduced = detail_gmm::solve_gmm(data, Step::Two, false, keep);
    const auto resid_r = detail_gmm::residuals(data, reduced.beta);
    const double j_reduced = detail_gmm::j_statistic(data, resid_r, reduced.w2, keep);

    TestResult out;
    out.name = "Difference-in-Hansen";
    out.statistic = j_full - j_reduced;
    out.df = static_cast<int>(subset.size());
    std::ostringstream os;
    for (std::size_t i = 0; i < subset_columns.size(); ++i)
        os << (i ? ", " : "") << subset_columns[i];
    out.subset = os.str();
    if (out.statistic < 0) {
        out.statistic = 0.0;
        out.clamped = true;
        out.notes.push_back("negative statistic clamped to zero");
    }
    out.p_value = stats::chi2_upper_p(out.statistic, *out.df);
    return out;
}

TestResult ar_test(const GmmEstimate& est, int order) {
    if (order < 1) throw ValidationError("ar: order must be >= 1");
    const GmmData& data = data_of(est, "ar");

    const auto resid = detail_gmm::residuals(data, est.coef);
    double rss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        rss += resid[i].squaredNorm();
        yy += data.units[i].y.squaredNorm();
    }
    if (rss <= 1e-20 * std::max(yy, 1e-300))
        throw EstimationError("ar: degenerate (residuals are numerically zero)");

    // Lagged differenced residuals aligned on each unit's difference rows.
    std::vector<Eigen::VectorXd> w(data.units.size());
    long overlaps = 0;
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        const auto& unit = data.units[i];
        w[i] = Eigen::VectorXd::Zero(unit.y.size());
        for (int r = 0; r < unit.level_start; ++r) {
            const int target = unit.row_periods[r] - order;
            for (int r2 = 0; r2 < unit.level_start; ++r2) {
                if (unit.row_periods[r2] == target) {
                    w[i](r) = resid[i](r2);
                    ++overlaps;
                    break;
                }
            }
        }
    }
    if (overlaps == 0)
        throw EstimationError("ar: too few periods for order-" + std::to_string(order) +
                              " overlap");

    double b0 = 0.0, term1 = 0.0;
    Eigen::VectorXd wx = Eigen::VectorXd::Zero(data.k);          // X' w
    Eigen::VectorXd zvw = Eigen::VectorXd::Zero(data.n_instruments); // sum Z'v (v'w)
    Eigen::MatrixXd zx = Eigen::MatrixXd::Zero(data.n_instruments, data.k);
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        const auto& unit = data.units[i];
        const double wv = w[i].dot(resid[i]);
        b0 += wv;
        term1 += wv * wv;
        wx.noalias() += unit.x.transpose() * w[i];
        zvw.noalias() += (unit.z.transpose() * resid[i]) * wv;
        zx.noalias() += unit.z.transpose() * unit.x;
    }

    const Eigen::MatrixXd& wmat = est.step == Step::Two ? est.w2 : est.w1;
    const Eigen::MatrixXd xzw = zx.transpose() * wmat; // k x L
    const Eigen::MatrixXd a = xzw * zx;
    const Eigen::MatrixXd a_inv = pseudo_inverse(a);

    const double term2 = -2.0 * wx.dot(a_inv * (xzw * zvw));
    const double term3 = wx.dot(est.cov * wx);
    const double variance = term1 + term2 + term3;
    if (!(variance > 0))
        throw EstimationError("ar: degenerate variance in the serial-correlation statistic");

    TestResult out;
    out.name = "AR(" + std::to_string(order) + ")";
    out.statistic = b0 / std::sqrt(variance);
    out.p_value = stats::norm_two_sided_p(out.statistic);
    return out;
}

TestResult pesaran_cd(const Eigen::MatrixXd& series_by_unit) {
    const int n = static_cast<int>(series_by_unit.rows());
    const int np = static_cast<int>(series_by_unit.cols());
    if (n < 2) throw ValidationError("cd: need at least 2 units");

    double acc = 0.0;
    long used_pairs = 0, dropped_pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double sx = 0, sy = 0;
            int t_ij = 0;
            for (int t = 0; t < np; ++t) {
                const double a = series_by_unit(i, t), b = series_by_unit(j, t);
                if (std::isnan(a) || std::isnan(b)) continue;
                sx += a;
                sy += b;
                ++t_ij;
            }
            if (t_ij < 3) {
                ++dropped_pairs;
                continue;
            }
            const double mx = sx / t_ij, my = sy / t_ij;
            double sxy = 0, sxx = 0, syy = 0;
            for (int t = 0; t < np; ++t) {
                const double a = series_by_unit(i, t), b = series_by_unit(j, t);
                if (std::isnan(a) || std::isnan(b)) continue;
                sxy += (a - mx) * (b - my);
                sxx += (a - mx) * (a - mx);
                syy += (b - my) * (b - my);
            }
            if (sxx <= 0 || syy <= 0) {
                ++dropped_pairs;
                continue;
            }
            acc += std::sqrt(static_cast<double>(t_ij)) * (sxy / std::sqrt(sxx * syy));
            ++used_pairs;
        }
    }
    if (used_pairs == 0) throw EstimationError("cd: no unit pairs with enough overlap");

    TestResult out;
    out.name = "Pesaran CD";
    out.statistic = std::sqrt(2.0 / (static_cast<double>(n) * (n - 1))) * acc;
    out.p_value = stats::norm_two_sided_p(out.statistic);
    if (dropped_pairs > 0)
        out.notes.push_back(std::to_string(dropped_pairs) +
                            " unit pair(s) dropped (overlap below 3)");
    return out;
}

TestResult pesaran_cd(const PanelDataset& panel, const std::string& variable) {
    const auto& col = panel.column(variable);
    const std::size_t np = panel.n_periods();
    Eigen::MatrixXd m(panel.n_units(), np);
    for (std::size_t u = 0; u < panel.n_units(); ++u)
        for (std::size_t p = 0; p < np; ++p) m(u, p) = col[u * np + p];
    return pesaran_cd(m);
}

Eigen::MatrixXd residual_matrix(const GmmEstimate& est, std::size_t n_units,
                                std::size_t n_periods) {
    const GmmData& data = data_of(est, "residual_matrix");
    Eigen::MatrixXd m =
        Eigen::MatrixXd::Constant(n_units, n_periods, std::numeric_limits<double>::quiet_NaN());
    const auto resid = detail_gmm::residuals(data, est.coef);
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        const auto& unit = data.units[i];
        for (int r = 0; r < unit.level_start; ++r)
            m(unit.panel_unit, unit.row_periods[r]) = resid[i](r);
    }
    return m;
}

TestResult wald_joint(const GmmEstimate& est, const std::vector<std::string>& coefficients) {
    if (coefficients.empty()) throw ValidationError("wald: subset must be nonempty");

    std::vector<std::size_t> idx;
    for (const auto& name : coefficients) {
        auto i = est.coef_index(name);
        if (!i) throw ValidationError("wald: unknown coefficient '" + name + "'");
        idx.push_back(*i);
    }

    const int m = static_cast<int>(idx.size());
    Eigen::VectorXd b(m);
    Eigen::MatrixXd v(m, m);
    for (int i = 0; i < m; ++i) {
        b(i) = est.coef(idx[i]);
        for (int j = 0; j < m; ++j) v(i, j) = est.cov(idx[i], idx[j]);
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(v);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw EstimationError("wald: singular covariance block");
    const Eigen::VectorXd sol = ldlt.solve(b);
    if ((v * sol - b).norm() > 1e-6 * std::max(1.0, b.norm()))
        throw EstimationError("wald: singular covariance block");

    TestResult out;
    out.name = "Wald chi2";
    out.statistic = b.dot(sol);
    out.df = m;
    out.p_value = stats::chi2_upper_p(out.statistic, m);
    return out;
}

} // namespace tfpanel
