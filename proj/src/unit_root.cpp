#include "tfpanel/unit_root.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "tfpanel/errors.hpp"
#include "tfpanel/rng.hpp"
#include "tfpanel/stats.hpp"
#include "ols_util.hpp"
#include "unit_root_tables.hpp"

namespace tfpanel {

namespace {

int det_terms(Deterministic det) {
    switch (det) {
    case Deterministic::None: return 0;
    case Deterministic::Intercept: return 1;
    case Deterministic::InterceptTrend: return 2;
    }
    return 0;
}

struct AdfDesign {
    Eigen::MatrixXd X;  // [y_{t-1}, dy_{t-1..p}, 1, trend]
    Eigen::VectorXd dy; // dependent
    int n_obs = 0;
};

AdfDesign build_adf_design(std::span<const double> y, const AdfSpec& spec) {
    const int n = static_cast<int>(y.size());
    const int p = spec.lags;
    if (p < 0) throw ValidationError("adf: negative lag order");
    const int n_obs = n - 1 - p;
    const int k = 1 + p + det_terms(spec.det);
    if (n_obs < p + 3 || n_obs < k + 1) {
        std::ostringstream os;
        os << "adf: insufficient observations (series length " << n << ", lags " << p << ")";
        throw EstimationError(os.str());
    }

    AdfDesign d;
    d.n_obs = n_obs;
    d.dy.resize(n_obs);
    d.X.resize(n_obs, k);
    for (int r = 0; r < n_obs; ++r) {
        const int t = r + p + 1;
        d.dy(r) = y[t] - y[t - 1];
        d.X(r, 0) = y[t - 1];
        for (int j = 1; j <= p; ++j) d.X(r, j) = y[t - j] - y[t - j - 1];
        int c = 1 + p;
        if (spec.det != Deterministic::None) d.X(r, c++) = 1.0;
        if (spec.det == Deterministic::InterceptTrend) d.X(r, c) = static_cast<double>(t);
    }
    return d;
}

detail::OlsFit fit_adf(const AdfDesign& d) {
    detail::OlsFit fit = detail::ols_fit(d.X, d.dy, "adf");
    if (fit.rss <= 1e-14 * std::max(1.0, d.dy.squaredNorm()))
        throw EstimationError("adf: degenerate regression (zero residual variance)");
    return fit;
}

// Longest contiguous observed run of a unit's series.
std::vector<double> longest_run(const std::vector<double>& series) {
    std::size_t best_start = 0, best_len = 0, start = 0, len = 0;
    for (std::size_t i = 0; i <= series.size(); ++i) {
        if (i < series.size() && !std::isnan(series[i])) {
            if (len == 0) start = i;
            ++len;
        } else {
            if (len > best_len) {
                best_len = len;
                best_start = start;
            }
            len = 0;
        }
    }
    return {series.begin() + best_start, series.begin() + best_start + best_len};
}

// Per-unit BIC lag choice over 0..max_lags, scored on the common sample.
int choose_lag(std::span<const double> y, const AdfSpec& spec) {
    const int n = static_cast<int>(y.size());
    int best_p = spec.lags;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= spec.lags; ++p) {
        const int n_obs = n - 1 - spec.lags; // common sample across candidates
        const int k = 1 + p + det_terms(spec.det);
        if (n_obs < k + 1 || n_obs < p + 3) continue;
        Eigen::MatrixXd X(n_obs, k);
        Eigen::VectorXd dy(n_obs);
        for (int r = 0; r < n_obs; ++r) {
            const int t = r + spec.lags + 1;
            dy(r) = y[t] - y[t - 1];
            X(r, 0) = y[t - 1];
            for (int j = 1; j <= p; ++j) X(r, j) = y[t - j] - y[t - j - 1];
            int c = 1 + p;
            if (spec.det != Deterministic::None) X(r, c++) = 1.0;
            if (spec.det == Deterministic::InterceptTrend) X(r, c) = static_cast<double>(t);
        }
        try {
            detail::OlsFit fit = detail::ols_fit(X, dy, "adf");
            if (fit.rss <= 0) continue;
            double bic = n_obs * std::log(fit.rss / n_obs) + k * std::log(static_cast<double>(n_obs));
            if (bic < best_bic) {
                best_bic = bic;
                best_p = p;
            }
        } catch (const EstimationError&) {
            continue;
        }
    }
    return best_p;
}

// Residuals of y on the ADF auxiliary regressors (lagged differences plus
// deterministics); identity when there are none.
Eigen::VectorXd orthogonalize(const Eigen::VectorXd& target, const Eigen::MatrixXd& aux) {
    if (aux.cols() == 0) return target;
    detail::OlsFit fit = detail::ols_fit(aux, target, "llc");
    return fit.residuals;
}

struct LlcUnit {
    Eigen::VectorXd e_tilde; // normalized dy residuals
    Eigen::VectorXd v_tilde; // normalized y_{t-1} residuals
    double ratio = 1.0;      // long-run sd over innovation sd
    int n_obs = 0;
};

// Bartlett-kernel long-run variance of dy, demeaned unless det == None.
double long_run_variance(const Eigen::VectorXd& dy, Deterministic det) {
    const int n = static_cast<int>(dy.size());
    Eigen::VectorXd d = dy;
    if (det != Deterministic::None) d.array() -= d.mean();
    double s2 = d.squaredNorm() / n;
    int K = static_cast<int>(std::floor(3.21 * std::cbrt(static_cast<double>(n))));
    K = std::min(K, n - 1);
    for (int L = 1; L <= K; ++L) {
        double g = 0.0;
        for (int t = L; t < n; ++t) g += d(t) * d(t - L);
        g /= n;
        s2 += 2.0 * (1.0 - static_cast<double>(L) / (K + 1)) * g;
    }
    return s2;
}

LlcUnit llc_unit(std::span<const double> y, const AdfSpec& spec) {
    const int n = static_cast<int>(y.size());
    const int p = spec.lags;
    const int n_obs = n - 1 - p;
    const int k_aux = p + det_terms(spec.det);
    if (n_obs < p + 3 || n_obs < k_aux + 2)
        throw EstimationError("llc: insufficient observations");

    Eigen::VectorXd dy(n_obs), ylag(n_obs);
    Eigen::MatrixXd aux(n_obs, k_aux);
    for (int r = 0; r < n_obs; ++r) {
        const int t = r + p + 1;
        dy(r) = y[t] - y[t - 1];
        ylag(r) = y[t - 1];
        int c = 0;
        for (int j = 1; j <= p; ++j) aux(r, c++) = y[t - j] - y[t - j - 1];
        if (spec.det != Deterministic::None) aux(r, c++) = 1.0;
        if (spec.det == Deterministic::InterceptTrend) aux(r, c) = static_cast<double>(t);
    }

    LlcUnit u;
    u.n_obs = n_obs;
    Eigen::VectorXd e = orthogonalize(dy, aux);
    Eigen::VectorXd v = orthogonalize(ylag, aux);

    const double vv = v.squaredNorm();
    if (vv <= 1e-14 * std::max(1.0, ylag.squaredNorm()))
        throw EstimationError("llc: degenerate unit (level regressor has no variation)");
    const double delta_i = v.dot(e) / vv;
    const double s2 = (e - delta_i * v).squaredNorm() / n_obs;
    if (s2 <= 1e-14 * std::max(1.0, dy.squaredNorm() / n_obs))
        throw EstimationError("llc: degenerate unit (zero innovation variance)");
    const double s = std::sqrt(s2);
    u.e_tilde = e / s;
    u.v_tilde = v / s;

    // Long-run variance over the unit's full differenced run.
    Eigen::VectorXd dy_full(n - 1);
    for (int t = 1; t < n; ++t) dy_full(t - 1) = y[t] - y[t - 1];
    const double lrv = long_run_variance(dy_full, spec.det);
    if (lrv <= 0)
        throw EstimationError("llc: nonpositive long-run variance");
    u.ratio = std::sqrt(lrv) / s;
    return u;
}

std::uint64_t moment_stream_id(int t, int lags, Deterministic det, std::uint64_t salt) {
    return salt ^ (static_cast<std::uint64_t>(t) << 20) ^
           (static_cast<std::uint64_t>(lags) << 12) ^
           (static_cast<std::uint64_t>(det_terms(det)) << 8);
}

} // namespace

double adf_stat(std::span<const double> series, const AdfSpec& spec) {
    AdfDesign d = build_adf_design(series, spec);
    detail::OlsFit fit = fit_adf(d);
    const double s2 = fit.rss / fit.df;
    const double se = std::sqrt(s2 * fit.xtx_inverse(0, 0));
    return fit.coef(0) / se;
}

LlcAdjustment simulate_llc_adjustment(int t_tilde, Deterministic det, int reps,
                                      std::uint64_t seed) {
    if (t_tilde < 4) throw ValidationError("llc adjustment: t_tilde too small");
    const int n = t_tilde + 1;
    AdfSpec spec{0, det};
    RngStream rng(seed, moment_stream_id(t_tilde, 0, det, 0x11cu));

    std::vector<double> S, Q, E2, ratio;
    S.reserve(reps);
    std::vector<double> y(n);
    for (int r = 0; r < reps; ++r) {
        double acc = 0.0;
        for (int t = 0; t < n; ++t) {
            acc += rng.normal();
            y[t] = acc;
        }
        try {
            LlcUnit u = llc_unit(y, spec);
            S.push_back(u.v_tilde.dot(u.e_tilde));
            Q.push_back(u.v_tilde.squaredNorm());
            E2.push_back(u.e_tilde.squaredNorm());
            ratio.push_back(u.ratio);
        } catch (const EstimationError&) {
            continue;
        }
    }
    if (S.size() < 100)
        throw EstimationError("llc adjustment: simulation produced too few usable draws");

    const double n_ok = static_cast<double>(S.size());
    double mS = 0, mQ = 0, mE2 = 0, mR = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        mS += S[i];
        mQ += Q[i];
        mE2 += E2[i];
        mR += ratio[i];
    }
    mS /= n_ok;
    mQ /= n_ok;
    mE2 /= n_ok;
    mR /= n_ok;

    LlcAdjustment adj;
    adj.mu_star = mS / (t_tilde * mR);
    double var_num = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double c = S[i] - t_tilde * adj.mu_star * ratio[i];
        var_num += c * c;
    }
    var_num /= (n_ok - 1);
    adj.sigma_star = std::sqrt(var_num / (mQ * mE2 / t_tilde));
    return adj;
}

IpsMoments simulate_ips_moments(int n_obs, int lags, Deterministic det, int reps,
                                std::uint64_t seed) {
    const int n = n_obs + 1 + lags;
    AdfSpec spec{lags, det};
    RngStream rng(seed, moment_stream_id(n_obs, lags, det, 0x195u));

    double sum = 0.0, sumsq = 0.0;
    long used = 0;
    std::vector<double> y(n);
    for (int r = 0; r < reps; ++r) {
        double acc = 0.0;
        for (int t = 0; t < n; ++t) {
            acc += rng.normal();
            y[t] = acc;
        }
        try {
            const double t_stat = adf_stat(y, spec);
            sum += t_stat;
            sumsq += t_stat * t_stat;
            ++used;
        } catch (const EstimationError&) {
            continue;
        }
    }
    if (used < 100)
        throw EstimationError("ips moments: simulation produced too few usable draws");

    IpsMoments m;
    m.mean_t = sum / used;
    m.var_t = (sumsq - used * m.mean_t * m.mean_t) / (used - 1);
    return m;
}

LlcAdjustment llc_adjustment(double t_tilde, Deterministic det, const UnitRootOptions& opts) {
    const auto table = detail::llc_table(det);
    if (!table.empty() && t_tilde >= table.front().t_tilde) {
        if (t_tilde >= table.back().t_tilde)
            return {table.back().mu_star, table.back().sigma_star};
        for (std::size_t i = 1; i < table.size(); ++i) {
            if (t_tilde <= table[i].t_tilde) {
                const auto& lo = table[i - 1];
                const auto& hi = table[i];
                const double w = (t_tilde - lo.t_tilde) / (hi.t_tilde - lo.t_tilde);
                return {lo.mu_star + w * (hi.mu_star - lo.mu_star),
                        lo.sigma_star + w * (hi.sigma_star - lo.sigma_star)};
            }
        }
    }
    if (!opts.simulate_if_missing)
        throw EstimationError("llc: no adjustment table entry for T = " +
                              std::to_string(t_tilde) + " and simulation disabled");

    static std::mutex mu;
    static std::map<std::tuple<int, int>, LlcAdjustment> cache;
    const int key_t = static_cast<int>(std::lround(t_tilde));
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({key_t, det_terms(det)});
    if (it != cache.end()) return it->second;
    LlcAdjustment adj =
        simulate_llc_adjustment(key_t, det, opts.simulation_reps, opts.simulation_seed);
    cache[{key_t, det_terms(det)}] = adj;
    return adj;
}

IpsMoments ips_moments(int n_obs, int lags, Deterministic det, const UnitRootOptions& opts) {
    for (const auto& row : detail::ips_table(det))
        if (row.n_obs == n_obs && row.lags == lags) return {row.mean_t, row.var_t};

    if (!opts.simulate_if_missing)
        throw EstimationError("ips: no moment table entry for (T=" + std::to_string(n_obs) +
                              ", lags=" + std::to_string(lags) + ") and simulation disabled");

    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, IpsMoments> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n_obs, lags, det_terms(det)});
    if (it != cache.end()) return it->second;
    IpsMoments m = simulate_ips_moments(n_obs, lags, det, opts.simulation_reps,
                                        opts.simulation_seed);
    cache[{n_obs, lags, det_terms(det)}] = m;
    return m;
}

namespace {

struct UsableUnit {
    std::size_t index;
    std::vector<double> run;
    int lags;
};

std::pair<std::vector<UsableUnit>, std::vector<std::string>>
collect_units(const PanelDataset& panel, const std::string& variable, const AdfSpec& spec,
              const UnitRootOptions& opts) {
    std::vector<UsableUnit> usable;
    std::vector<std::string> dropped;
    for (std::size_t u = 0; u < panel.n_units(); ++u) {
        std::vector<double> run = longest_run(panel.unit_series(variable, u));
        const int lags = opts.bic_lag_selection && static_cast<int>(run.size()) > spec.lags + 4
                             ? choose_lag(run, spec)
                             : spec.lags;
        const int n_obs = static_cast<int>(run.size()) - 1 - lags;
        const int k = 1 + lags + det_terms(spec.det);
        if (n_obs < lags + 3 || n_obs < k + 1) {
            dropped.push_back(panel.units()[u]);
            continue;
        }
        usable.push_back({u, std::move(run), lags});
    }
    return {std::move(usable), std::move(dropped)};
}

} // namespace

UnitRootResult llc_test(const PanelDataset& panel, const std::string& variable,
                        const AdfSpec& spec, const UnitRootOptions& opts) {
    auto [usable, dropped] = collect_units(panel, variable, spec, opts);
    if (panel.n_units() == 1)
        throw EstimationError("llc: single-unit panel; use adf_stat on the series instead");
    if (usable.size() < 2)
        throw EstimationError("llc: fewer than 2 units with sufficient observations for '" +
                              variable + "'");

    double sum_ve = 0.0, sum_vv = 0.0, sum_ratio = 0.0;
    long total_obs = 0;
    std::vector<LlcUnit> units;
    units.reserve(usable.size());
    std::vector<std::string> used_names;
    for (auto& uu : usable) {
        LlcUnit unit;
        try {
            unit = llc_unit(uu.run, AdfSpec{uu.lags, spec.det});
        } catch (const EstimationError&) {
            dropped.push_back(panel.units()[uu.index]);
            continue;
        }
        sum_ve += unit.v_tilde.dot(unit.e_tilde);
        sum_vv += unit.v_tilde.squaredNorm();
        sum_ratio += unit.ratio;
        total_obs += unit.n_obs;
        units.push_back(std::move(unit));
        used_names.push_back(panel.units()[uu.index]);
    }
    if (units.size() < 2)
        throw EstimationError("llc: fewer than 2 usable units for '" + variable + "'");

    const double n_units = static_cast<double>(units.size());
    const double t_tilde = static_cast<double>(total_obs) / n_units;
    const double delta = sum_ve / sum_vv;
    double rss = 0.0;
    for (const auto& unit : units)
        rss += (unit.e_tilde - delta * unit.v_tilde).squaredNorm();
    const double sigma2 = rss / static_cast<double>(total_obs);
    if (sigma2 <= 0) throw EstimationError("llc: degenerate pooled regression");
    const double se_delta = std::sqrt(sigma2 / sum_vv);
    const double t_delta = delta / se_delta;
    const double s_bar = sum_ratio / n_units;

    const LlcAdjustment adj = llc_adjustment(t_tilde, spec.det, opts);
    const double t_star =
        (t_delta - n_units * t_tilde * s_bar * se_delta * adj.mu_star / sigma2) /
        adj.sigma_star;

    UnitRootResult res;
    res.test = "llc";
    res.statistic = t_star;
    res.p_value = stats::norm_lower_p(t_star);
    res.spec = spec;
    res.n_units = static_cast<int>(units.size());
    res.n_periods = static_cast<int>(std::lround(t_tilde));
    res.units_used = std::move(used_names);
    res.units_dropped = std::move(dropped);
    return res;
}

UnitRootResult ips_test(const PanelDataset& panel, const std::string& variable,
                        const AdfSpec& spec, const UnitRootOptions& opts) {
    auto [usable, dropped] = collect_units(panel, variable, spec, opts);
    if (usable.size() < 2)
        throw EstimationError("ips: fewer than 2 units with sufficient observations for '" +
                              variable + "'");

    double sum_t = 0.0, sum_mean = 0.0, sum_var = 0.0;
    long total_obs = 0;
    std::vector<double> unit_stats;
    std::vector<std::string> used_names;
    for (const auto& uu : usable) {
        double t_i;
        try {
            t_i = adf_stat(uu.run, AdfSpec{uu.lags, spec.det});
        } catch (const EstimationError&) {
            dropped.push_back(panel.units()[uu.index]);
            continue;
        }
        const int n_obs = static_cast<int>(uu.run.size()) - 1 - uu.lags;
        const IpsMoments m = ips_moments(n_obs, uu.lags, spec.det, opts);
        sum_t += t_i;
        sum_mean += m.mean_t;
        sum_var += m.var_t;
        total_obs += n_obs;
        unit_stats.push_back(t_i);
        used_names.push_back(panel.units()[uu.index]);
    }

    if (unit_stats.size() < 2)
        throw EstimationError("ips: fewer than 2 usable units for '" + variable + "'");
    const double n_units = static_cast<double>(unit_stats.size());
    const double t_bar = sum_t / n_units;
    const double e_bar = sum_mean / n_units;
    const double v_bar = sum_var / n_units;
    const double w_stat = std::sqrt(n_units) * (t_bar - e_bar) / std::sqrt(v_bar);

    UnitRootResult res;
    res.test = "ips";
    res.statistic = w_stat;
    res.p_value = stats::norm_lower_p(w_stat);
    res.unit_stats = std::move(unit_stats);
    res.spec = spec;
    res.n_units = static_cast<int>(n_units);
    res.n_periods = static_cast<int>(std::lround(static_cast<double>(total_obs) / n_units));
    res.units_used = std::move(used_names);
    res.units_dropped = std::move(dropped);
    return res;
}

} // namespace tfpanel
