#include "tfpanel/causality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "tfpanel/errors.hpp"
#include "tfpanel/stats.hpp"
#include "ols_util.hpp"

namespace tfpanel {

void DhConfig::validate() const {
    if (lags < 1) throw ValidationError("dh: lag order K must be >= 1");
    if (n_units < 1) throw ValidationError("dh: unit count must be >= 1");
    if (effective_t - 2 * lags - 5 <= 0) {
        std::ostringstream os;
        os << "dh: effective T = " << effective_t << " too small for K = " << lags
           << " (need T - 2K - 5 > 0 so that Var[W] exists)";
        throw ValidationError(os.str());
    }
}

double unit_wald(std::span<const double> x, std::span<const double> y, int lags) {
    if (lags < 1) throw ValidationError("unit_wald: K must be >= 1");
    if (x.size() != y.size()) throw ValidationError("unit_wald: series length mismatch");
    const int K = lags;
    const int n_raw = static_cast<int>(y.size());
    const int n = n_raw - K;
    const int k_u = 2 * K + 1; // intercept + K y-lags + K x-lags
    if (n < 2 * K + 2)
        throw EstimationError("unit_wald: insufficient observations (" +
                              std::to_string(n) + " usable rows for K = " +
                              std::to_string(K) + ")");

    Eigen::VectorXd dep(n);
    Eigen::MatrixXd Xu(n, k_u);
    Eigen::MatrixXd Xr(n, K + 1);
    for (int r = 0; r < n; ++r) {
        const int t = r + K;
        dep(r) = y[t];
        Xu(r, 0) = 1.0;
        Xr(r, 0) = 1.0;
        for (int j = 1; j <= K; ++j) {
            Xu(r, j) = y[t - j];
            Xr(r, j) = y[t - j];
            Xu(r, K + j) = x[t - j];
        }
    }

    detail::OlsFit unrestricted = detail::ols_fit(Xu, dep, "unit_wald");
    detail::OlsFit restricted = detail::ols_fit(Xr, dep, "unit_wald");

    const double scale = std::max(1.0, dep.squaredNorm());
    if (unrestricted.rss <= 1e-14 * scale)
        throw EstimationError("unit_wald: degenerate fit (unrestricted residuals are zero)");

    const double s2 = unrestricted.rss / (n - k_u);
    const double w = (restricted.rss - unrestricted.rss) / s2;
    return std::max(w, 0.0);
}

DhStandardized standardize_dh(double w_bar, const DhConfig& cfg) {
    cfg.validate();
    const double K = cfg.lags;
    const double T = cfg.effective_t;
    const double N = cfg.n_units;

    const double mean_w = K * (T - 2 * K - 1) / (T - 2 * K - 3);
    const double var_w = 2 * K * (T - 2 * K - 1) * (T - 2 * K - 1) * (T - K - 3) /
                         ((T - 2 * K - 3) * (T - 2 * K - 3) * (T - 2 * K - 5));
    if (var_w <= 0) throw ValidationError("dh: nonpositive Var[W]; T bound violated");

    DhStandardized out;
    out.z_bar = std::sqrt(N / (2 * K)) * (w_bar - K);
    out.z_bar_tilde = std::sqrt(N) * (w_bar - mean_w) / std::sqrt(var_w);
    out.p_z_bar = stats::norm_two_sided_p(out.z_bar);
    out.p_z_bar_tilde = stats::norm_two_sided_p(out.z_bar_tilde);
    return out;
}

namespace {

// Contiguous tail of jointly observed (x, y) pairs for one unit.
std::pair<std::vector<double>, std::vector<double>>
joint_tail(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::size_t len = 0;
    std::size_t best_len = 0, best_end = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isnan(x[i]) && !std::isnan(y[i]))
            ++len;
        else
            len = 0;
        if (len > best_len) {
            best_len = len;
            best_end = i + 1;
        }
    }
    const std::size_t start = best_end - best_len;
    return {{x.begin() + start, x.begin() + best_end},
            {y.begin() + start, y.begin() + best_end}};
}

} // namespace

DhResult dh_test(const PanelDataset& panel, const std::string& cause,
                 const std::string& effect, int lags, const DhOptions& opts) {
    if (lags < 1) throw ValidationError("dh_test: K must be >= 1");

    struct Usable {
        std::size_t index;
        std::vector<double> x, y;
    };
    std::vector<Usable> usable;
    std::vector<std::string> dropped;
    const int min_len = 3 * lags + 2; // usable rows >= 2K+2 after K lags

    for (std::size_t u = 0; u < panel.n_units(); ++u) {
        auto [x, y] = joint_tail(panel.unit_series(cause, u), panel.unit_series(effect, u));
        if (static_cast<int>(y.size()) < min_len) {
            dropped.push_back(panel.units()[u]);
            continue;
        }
        usable.push_back({u, std::move(x), std::move(y)});
    }
    if (usable.size() < 2)
        throw EstimationError("dh_test: fewer than 2 usable units for " + cause + " -> " +
                              effect);

    // Harmonize heterogeneous lengths: truncate every unit to the shortest
    // common window (keeping the most recent observations) unless the
    // per-unit-T averaging policy is on.
    std::size_t min_raw = usable.front().y.size();
    for (const auto& uu : usable) min_raw = std::min(min_raw, uu.y.size());
    if (!opts.per_unit_t_policy) {
        for (auto& uu : usable) {
            if (uu.y.size() > min_raw) {
                uu.x.erase(uu.x.begin(), uu.x.end() - min_raw);
                uu.y.erase(uu.y.begin(), uu.y.end() - min_raw);
            }
        }
    }

    DhResult res;
    res.cause = cause;
    res.effect = effect;

    double sum_w = 0.0;
    double sum_mean = 0.0, sum_var = 0.0;
    for (auto& uu : usable) {
        double w;
        try {
            w = unit_wald(uu.x, uu.y, lags);
        } catch (const EstimationError&) {
            dropped.push_back(panel.units()[uu.index]);
            continue;
        }
        if (w > opts.flag_threshold) res.flagged_units.push_back(panel.units()[uu.index]);
        res.unit_walds.push_back(w);
        sum_w += w;
        const int t_i = static_cast<int>(uu.y.size()) - lags;
        DhConfig cfg_i{lags, t_i, 1};
        cfg_i.validate();
        const double K = lags, T = t_i;
        sum_mean += K * (T - 2 * K - 1) / (T - 2 * K - 3);
        sum_var += 2 * K * (T - 2 * K - 1) * (T - 2 * K - 1) * (T - K - 3) /
                   ((T - 2 * K - 3) * (T - 2 * K - 3) * (T - 2 * K - 5));
    }
    const int n_used = static_cast<int>(res.unit_walds.size());
    if (n_used < 2)
        throw EstimationError("dh_test: fewer than 2 usable units for " + cause + " -> " +
                              effect);

    res.w_bar = sum_w / n_used;
    res.config = DhConfig{lags, static_cast<int>(min_raw) - lags, n_used};

    if (opts.per_unit_t_policy) {
        const double mean_w = sum_mean / n_used;
        const double var_w = sum_var / n_used;
        res.z_bar = std::sqrt(static_cast<double>(n_used) / (2.0 * lags)) * (res.w_bar - lags);
        res.z_bar_tilde = std::sqrt(static_cast<double>(n_used)) * (res.w_bar - mean_w) /
                          std::sqrt(var_w);
        res.p_z_bar = stats::norm_two_sided_p(res.z_bar);
        res.p_z_bar_tilde = stats::norm_two_sided_p(res.z_bar_tilde);
    } else {
        const DhStandardized std_out = standardize_dh(res.w_bar, res.config);
        res.z_bar = std_out.z_bar;
        res.z_bar_tilde = std_out.z_bar_tilde;
        res.p_z_bar = std_out.p_z_bar;
        res.p_z_bar_tilde = std_out.p_z_bar_tilde;
    }
    res.dropped_units = std::move(dropped);
    return res;
}

} // namespace tfpanel
