#include "tfpanel/simulate.hpp"

#include <cmath>
#include <string>

#include "tfpanel/errors.hpp"
#include "tfpanel/rng.hpp"

namespace tfpanel {

namespace {
// Draw streams; unit 0 is reserved for the common factor so per-unit streams
// start at 1.
enum Stream : std::uint64_t {
    kEta = 1,
    kFixedEffect = 2,
    kRegressor = 3, // + 8 * regressor index
    kFactor = 4,
    kInvalid = 5,
};
} // namespace

void DgpConfig::validate() const {
    if (n_units < 1 || n_periods < 1)
        throw ValidationError("dgp: n_units and n_periods must be positive");
    if (fixed_effect_sd < 0 || idiosyncratic_sd < 0)
        throw ValidationError("dgp: variances must be nonnegative");
    if (std::fabs(ar_coef) > 1.0)
        throw ValidationError("dgp: |ar_coef| must be <= 1");
    if (std::fabs(instrument_invalidity_corr) > 1.0)
        throw ValidationError("dgp: |instrument_invalidity_corr| must be <= 1");
    if (burn_in < 0) throw ValidationError("dgp: burn_in must be nonnegative");
}

PanelDataset gen_dynamic_panel(const DgpConfig& cfg) {
    cfg.validate();
    CounterRng rng(cfg.seed);

    const int k = static_cast<int>(cfg.beta.size());
    const int total = cfg.burn_in + cfg.n_periods;

    std::vector<std::string> units;
    units.reserve(cfg.n_units);
    for (int i = 0; i < cfg.n_units; ++i) units.push_back("u" + std::to_string(i + 1));
    std::vector<int> periods;
    periods.reserve(cfg.n_periods);
    for (int t = 0; t < cfg.n_periods; ++t) periods.push_back(cfg.first_period + t);

    const std::size_t np = static_cast<std::size_t>(cfg.n_periods);
    std::vector<double> ycol(static_cast<std::size_t>(cfg.n_units) * np);
    std::vector<std::vector<double>> xcols(k, std::vector<double>(ycol.size()));
    std::vector<double> zcol(cfg.instrument_invalidity_corr != 0.0 ? ycol.size() : 0);

    for (int i = 0; i < cfg.n_units; ++i) {
        const std::uint64_t ukey = static_cast<std::uint64_t>(i) + 1;
        const double u_i = cfg.fixed_effect_sd * rng.normal(ukey, 0, kFixedEffect);

        // Regressors: stationary AR(0.5) per unit, run through the burn-in.
        std::vector<double> x(k, 0.0);
        double y = 0.0;
        for (int t = 0; t < total; ++t) {
            const std::uint64_t tkey = static_cast<std::uint64_t>(t);
            for (int j = 0; j < k; ++j)
                x[j] = 0.5 * x[j] + rng.normal(ukey, tkey, kRegressor + 8 * j);

            const double f_t = cfg.common_factor_loading != 0.0
                                   ? rng.normal(0, tkey, kFactor)
                                   : 0.0;
            const double eta = rng.normal(ukey, tkey, kEta);
            double xb = 0.0;
            for (int j = 0; j < k; ++j) xb += cfg.beta[j] * x[j];
            y = cfg.ar_coef * y + xb + u_i + cfg.common_factor_loading * f_t +
                cfg.idiosyncratic_sd * eta;

            if (t >= cfg.burn_in) {
                const std::size_t cell = static_cast<std::size_t>(i) * np +
                                         static_cast<std::size_t>(t - cfg.burn_in);
                ycol[cell] = y;
                for (int j = 0; j < k; ++j) xcols[j][cell] = x[j];
                if (!zcol.empty()) {
                    const double rho = cfg.instrument_invalidity_corr;
                    const double nu = rng.normal(ukey, tkey, kInvalid);
                    zcol[cell] = rho * eta + std::sqrt(1.0 - rho * rho) * nu;
                }
            }
        }
    }

    PanelDataset panel = PanelDataset::create(std::move(units), std::move(periods));
    panel = panel.with_column("y", std::move(ycol));
    for (int j = 0; j < k; ++j)
        panel = panel.with_column("x" + std::to_string(j + 1), std::move(xcols[j]));
    if (!zcol.empty()) panel = panel.with_column("z_invalid", std::move(zcol));
    return panel;
}

Eigen::VectorXd oracle_iv(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          const Eigen::MatrixXd& Z) {
    if (Z.cols() != X.cols())
        throw ValidationError("oracle_iv: Z must have exactly as many columns as X");
    if (Z.rows() != X.rows() || y.size() != X.rows())
        throw ValidationError("oracle_iv: row mismatch");

    const int k = static_cast<int>(X.cols());
    // Normal equations assembled with plain loops.
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            double s = 0.0;
            for (int i = 0; i < Z.rows(); ++i) s += Z(i, r) * X(i, c);
            a[r][c] = s;
        }
        double s = 0.0;
        for (int i = 0; i < Z.rows(); ++i) s += Z(i, r) * y(i);
        a[r][k] = s;
    }

    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-13)
            throw EstimationError("oracle_iv: Z'X is singular");
        std::swap(a[piv], a[col]);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }

    Eigen::VectorXd beta(k);
    for (int r = 0; r < k; ++r) beta(r) = a[r][k] / a[r][r];
    return beta;
}

} // namespace tfpanel
