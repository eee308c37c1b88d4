#include <doctest.h>

#include <cmath>
#include <vector>

#include "tfpanel/diagnostics.hpp"
#include "tfpanel/errors.hpp"
#include "tfpanel/gmm.hpp"
#include "tfpanel/rng.hpp"
#include "tfpanel/simulate.hpp"

using namespace tfpanel;

namespace {

PanelDataset fixture(std::uint64_t seed = 860, int n_units = 30, int n_periods = 6) {
    DgpConfig cfg;
    cfg.n_units = n_units;
    cfg.n_periods = n_periods;
    cfg.ar_coef = 0.4;
    cfg.beta = {0.5};
    cfg.fixed_effect_sd = 1.0;
    cfg.idiosyncratic_sd = 1.0;
    cfg.seed = seed;
    return gen_dynamic_panel(cfg);
}

ModelSpec model() {
    ModelSpec spec;
    spec.dependent = "y";
    spec.regressors = {{"x1", RegressorRole::Predetermined}};
    return spec;
}

PanelDataset exactly_identified_panel(std::uint64_t seed = 2718) {
    DgpConfig cfg;
    cfg.n_units = 6;
    cfg.n_periods = 5;
    cfg.ar_coef = 0.4;
    cfg.beta = {0.7};
    cfg.fixed_effect_sd = 1.0;
    cfg.idiosyncratic_sd = 1.0;
    cfg.seed = seed;
    PanelDataset p = gen_dynamic_panel(cfg);
    return apply_transform(p, SeriesTransform::lag_of("y", "y_lag1", 1));
}

GmmEstimate exactly_identified_estimate(Step step = Step::One) {
    PanelDataset p = exactly_identified_panel();
    ModelSpec spec = model();
    InstrumentPlan plan;
    plan.iv_style = {"x1", "y_lag1"};
    return estimate(p, spec, plan, Scheme::Difference, step);
}

// Stacked differenced design reproduced by hand for the dense oracles.
struct DenseStack {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

DenseStack stack_difference(const PanelDataset& p) {
    std::vector<double> ys, xl, xr;
    for (std::size_t u = 0; u < p.n_units(); ++u) {
        for (std::size_t t = 2; t < p.n_periods(); ++t) {
            ys.push_back(p.value(u, t, "y") - p.value(u, t - 1, "y"));
            xl.push_back(p.value(u, t - 1, "y") - p.value(u, t - 2, "y"));
            xr.push_back(p.value(u, t, "x1") - p.value(u, t - 1, "x1"));
        }
    }
    DenseStack s;
    const int n = static_cast<int>(ys.size());
    s.y.resize(n);
    s.x.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        s.y(i) = ys[i];
        s.x(i, 0) = xl[i];
        s.x(i, 1) = xr[i];
    }
    return s;
}

} // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("sargan is zero with df zero when exactly identified") {
    GmmEstimate est = exactly_identified_estimate();
    TestResult s = sargan(est);
    CHECK(std::fabs(s.statistic) < 1e-8);
    REQUIRE(s.df.has_value());
    CHECK(*s.df == 0);
    CHECK(s.p_value == doctest::Approx(1.0));
}

TEST_CASE("hansen j is zero when exactly identified") {
    TestResult j1 = hansen_j(exactly_identified_estimate(Step::One));
    CHECK(std::fabs(j1.statistic) < 1e-8);
    TestResult j2 = hansen_j(exactly_identified_estimate(Step::Two));
    CHECK(std::fabs(j2.statistic) < 1e-8);
}

TEST_CASE("sargan and hansen match dense quadratic-form oracles") {
    PanelDataset p = fixture(61803, 6, 5);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);

    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);
    InstrumentBlocks blocks = build_difference_instruments(p, spec, plan);
    DenseStack stack = stack_difference(p);

    // Residuals from the reported one-step coefficients.
    Eigen::VectorXd resid = stack.y - stack.x * est.coef_one_step;

    const int L = blocks.n_columns;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(L);
    Eigen::MatrixXd zhz = Eigen::MatrixXd::Zero(L, L);
    Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(L, L);
    long row0 = 0;
    double rss = 0.0;
    long n_rows = 0;
    for (std::size_t i = 0; i < blocks.z.size(); ++i) {
        const auto& z = blocks.z[i];
        const long rows = z.rows();
        Eigen::VectorXd e = resid.segment(row0, rows);
        g += z.transpose() * e;
        zhz += z.transpose() * blocks.h[i] * z;
        Eigen::VectorXd gi = z.transpose() * e;
        s1 += gi * gi.transpose();
        rss += e.squaredNorm();
        n_rows += rows;
        row0 += rows;
    }
    const double sigma2 = rss / (2.0 * n_rows);
    const Eigen::MatrixXd w1 = zhz.ldlt().solve(Eigen::MatrixXd::Identity(L, L));
    const double sargan_oracle = g.dot(w1 * g) / sigma2;

    TestResult s = sargan(est);
    CHECK(s.statistic == doctest::Approx(sargan_oracle).epsilon(1e-10));
    CHECK(*s.df == est.instrument_count - 2);

    // Hansen on the one-step estimate: robust weighting from its residuals.
    Eigen::VectorXd resid_final = stack.y - stack.x * est.coef;
    Eigen::VectorXd g2 = Eigen::VectorXd::Zero(L);
    Eigen::MatrixXd s2m = Eigen::MatrixXd::Zero(L, L);
    row0 = 0;
    for (std::size_t i = 0; i < blocks.z.size(); ++i) {
        const auto& z = blocks.z[i];
        Eigen::VectorXd e = resid_final.segment(row0, z.rows());
        Eigen::VectorXd gi = z.transpose() * e;
        g2 += gi;
        s2m += gi * gi.transpose();
        row0 += z.rows();
    }
    const Eigen::MatrixXd w2 = s2m.ldlt().solve(Eigen::MatrixXd::Identity(L, L));
    const double hansen_oracle = g2.dot(w2 * g2);
    TestResult j = hansen_j(est);
    CHECK(j.statistic == doctest::Approx(hansen_oracle).epsilon(1e-8));
}

TEST_CASE("df bookkeeping: sargan df plus k equals instrument count") {
    PanelDataset p = fixture(112);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);
    TestResult s = sargan(est);
    CHECK(*s.df + 2 == est.instrument_count);
}

TEST_CASE("hansen j is invariant to regressor rescaling") {
    PanelDataset p = fixture(221);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est0 = estimate(p, spec, plan, Scheme::Difference, Step::Two);

    auto xcol = p.column("x1");
    for (double& v : xcol) v *= 10.0;
    PanelDataset scaled = PanelDataset::create(p.units(), p.periods());
    scaled = scaled.with_column("y", p.column("y"));
    scaled = scaled.with_column("x1", xcol);
    GmmEstimate est1 = estimate(scaled, spec, plan, Scheme::Difference, Step::Two);

    CHECK(hansen_j(est1).statistic ==
          doctest::Approx(hansen_j(est0).statistic).epsilon(1e-8));
    CHECK(sargan(est1).statistic == doctest::Approx(sargan(est0).statistic).epsilon(1e-8));
}

TEST_CASE("hansen rejects an instrument correlated with the error") {
    // Power check: corr(z_invalid, eta) = 0.5, N = 500.
    const int reps = 60;
    int rejected = 0;
    for (int r = 0; r < reps; ++r) {
        DgpConfig cfg;
        cfg.n_units = 500;
        cfg.n_periods = 6;
        cfg.ar_coef = 0.4;
        cfg.fixed_effect_sd = 1.0;
        cfg.idiosyncratic_sd = 1.0;
        cfg.instrument_invalidity_corr = 0.5;
        cfg.seed = 7200 + r;
        PanelDataset p = gen_dynamic_panel(cfg);

        ModelSpec spec;
        spec.dependent = "y";
        InstrumentPlan plan;
        plan.gmm_style = {{"y", 2, -1, true}};
        plan.iv_style = {"z_invalid"};
        GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::Two);
        if (hansen_j(est).p_value < 0.05) ++rejected;
    }
    CHECK(static_cast<double>(rejected) / reps > 0.8);
}

TEST_CASE("difference-in-hansen preconditions and the full-subset identity") {
    PanelDataset p = fixture(331);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::Two);

    CHECK_THROWS_AS(difference_in_hansen(est, {}), ValidationError);
    CHECK_THROWS_AS(difference_in_hansen(est, {"no-such-column"}), ValidationError);

    // Removing everything except k columns leaves an exactly identified
    // reduced model, so the statistic equals the full J.
    InstrumentBlocks blocks = build_difference_instruments(p, spec, plan);
    std::vector<std::string> subset;
    for (int c = 0; c < blocks.n_columns - 2; ++c) subset.push_back(blocks.column_names[c]);
    TestResult d = difference_in_hansen(est, subset);
    TestResult j = hansen_j(est);
    CHECK(d.statistic == doctest::Approx(j.statistic).epsilon(1e-8));
    CHECK(*d.df == static_cast<int>(subset.size()));

    // Dropping too much under-identifies.
    CHECK_THROWS_AS(difference_in_hansen(est, blocks.column_names), ValidationError);
}

TEST_CASE("ar test matches the dense variance oracle") {
    PanelDataset p = fixture(441, 25, 7);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);

    // Oracle: rebuild every piece densely for order 1.
    InstrumentBlocks blocks = build_difference_instruments(p, spec, plan);
    const int L = blocks.n_columns;
    const int k = 2;

    std::vector<Eigen::VectorXd> resid, xw;
    std::vector<Eigen::MatrixXd> zs, xs;
    for (std::size_t u = 0; u < blocks.z.size(); ++u) {
        const auto& rows = blocks.row_periods[u];
        const int n = static_cast<int>(rows.size());
        Eigen::MatrixXd x(n, k);
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r) {
            const int t = rows[r];
            y(r) = p.value(u, t, "y") - p.value(u, t - 1, "y");
            x(r, 0) = p.value(u, t - 1, "y") - p.value(u, t - 2, "y");
            x(r, 1) = p.value(u, t, "x1") - p.value(u, t - 1, "x1");
        }
        resid.push_back(y - x * est.coef);
        xs.push_back(x);
        zs.push_back(blocks.z[u]);
    }
    double b0 = 0, term1 = 0;
    Eigen::VectorXd wx = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd zvw = Eigen::VectorXd::Zero(L);
    Eigen::MatrixXd zx = Eigen::MatrixXd::Zero(L, k);
    for (std::size_t u = 0; u < zs.size(); ++u) {
        const auto& rows = blocks.row_periods[u];
        Eigen::VectorXd w = Eigen::VectorXd::Zero(resid[u].size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t r2 = 0; r2 < rows.size(); ++r2)
                if (rows[r2] == rows[r] - 1) w(r) = resid[u](r2);
        const double wv = w.dot(resid[u]);
        b0 += wv;
        term1 += wv * wv;
        wx += xs[u].transpose() * w;
        zvw += (zs[u].transpose() * resid[u]) * wv;
        zx += zs[u].transpose() * xs[u];
    }
    const Eigen::MatrixXd xzw = zx.transpose() * est.w1;
    const Eigen::MatrixXd a = xzw * zx;
    const Eigen::MatrixXd a_inv = a.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    const double term2 = -2.0 * wx.dot(a_inv * (xzw * zvw));
    const double term3 = wx.dot(est.cov * wx);
    const double z_oracle = b0 / std::sqrt(term1 + term2 + term3);

    TestResult ar1 = ar_test(est, 1);
    CHECK(ar1.statistic == doctest::Approx(z_oracle).epsilon(1e-8));
}

TEST_CASE("ar test degenerates on zero residuals") {
    // Exact AR(1) with no noise: y_{i,t} = c_i * 0.5^t.
    PanelDataset p = PanelDataset::create({"a", "b", "c"}, {1, 2, 3, 4, 5, 6});
    std::vector<double> cells;
    for (double c : {1.0, -2.0, 3.5})
        for (int t = 0; t < 6; ++t) cells.push_back(c * std::pow(0.5, t));
    p = p.with_column("y", cells);

    ModelSpec spec;
    spec.dependent = "y";
    InstrumentPlan plan;
    plan.gmm_style = {{"y", 2, -1, true}};
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);
    CHECK(est.coef(0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK_THROWS_AS(ar_test(est, 1), EstimationError);
}

TEST_CASE("ar test needs enough periods for the overlap") {
    PanelDataset p = fixture(551, 20, 4); // difference rows at positions 2,3 only
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);
    CHECK_NOTHROW(ar_test(est, 1));
    CHECK_THROWS_AS(ar_test(est, 3), EstimationError);
}

TEST_CASE("cd equals sqrt(T) for two identical units") {
    const int T = 16;
    Eigen::MatrixXd m(2, T);
    RngStream rng(661, 1);
    for (int t = 0; t < T; ++t) {
        m(0, t) = rng.normal();
        m(1, t) = m(0, t);
    }
    TestResult cd = pesaran_cd(m);
    CHECK(cd.statistic == doctest::Approx(std::sqrt(static_cast<double>(T))).epsilon(1e-10));
}

TEST_CASE("cd null distribution is approximately standard normal") {
    CounterRng rng(771);
    const int reps = 300;
    double sum = 0, sumsq = 0;
    for (int r = 0; r < reps; ++r) {
        Eigen::MatrixXd m(30, 30);
        for (int i = 0; i < 30; ++i)
            for (int t = 0; t < 30; ++t) m(i, t) = rng.normal(r, i * 64 + t, 3);
        const double cd = pesaran_cd(m).statistic;
        sum += cd;
        sumsq += cd * cd;
    }
    const double mean = sum / reps;
    const double var = (sumsq - reps * mean * mean) / (reps - 1);
    CHECK(std::fabs(mean) < 0.15);
    CHECK(var > 0.7);
    CHECK(var < 1.3);
}

TEST_CASE("cd detects a strong common factor") {
    CounterRng rng(881);
    Eigen::MatrixXd m(30, 30);
    for (int t = 0; t < 30; ++t) {
        const double f = rng.normal(0, t, 1);
        for (int i = 0; i < 30; ++i) m(i, t) = f + 0.5 * rng.normal(i + 1, t, 2);
    }
    CHECK(pesaran_cd(m).statistic > 10.0);
}

TEST_CASE("cd drops short-overlap pairs and errors with none usable") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(2, 5, std::numeric_limits<double>::quiet_NaN());
    m(0, 0) = 1.0;
    m(1, 1) = 2.0;
    CHECK_THROWS_AS(pesaran_cd(m), EstimationError);

    RngStream rng(991, 2);
    Eigen::MatrixXd ok(3, 10);
    for (int i = 0; i < 3; ++i)
        for (int t = 0; t < 10; ++t) ok(i, t) = rng.normal();
    for (int t = 2; t < 10; ++t) ok(2, t) = std::numeric_limits<double>::quiet_NaN();
    TestResult cd = pesaran_cd(ok);
    REQUIRE(cd.notes.size() == 1);
    CHECK(cd.notes[0].find("2 unit pair(s) dropped") != std::string::npos);
}

TEST_CASE("wald of a single coefficient equals its squared z statistic") {
    PanelDataset p = fixture(101);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::Two);
    TestResult w = wald_joint(est, {"x1"});
    const double z = est.z_stat(*est.coef_index("x1"));
    CHECK(w.statistic == doctest::Approx(z * z).epsilon(1e-10));
    CHECK(*w.df == 1);
}

TEST_CASE("wald is invariant under invertible reparameterization of the subset") {
    PanelDataset p = fixture(202);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::System, Step::Two);

    TestResult w = wald_joint(est, {"L.y", "x1"});

    // Oracle with a fixed invertible transform R: (Rb)'(RVR')^-1(Rb).
    Eigen::Matrix2d r;
    r << 1.3, -0.7, 0.4, 2.1;
    Eigen::Vector2d b(est.coef(*est.coef_index("L.y")), est.coef(*est.coef_index("x1")));
    Eigen::Matrix2d v;
    const std::size_t i0 = *est.coef_index("L.y"), i1 = *est.coef_index("x1");
    v << est.cov(i0, i0), est.cov(i0, i1), est.cov(i1, i0), est.cov(i1, i1);
    const Eigen::Vector2d rb = r * b;
    const Eigen::Matrix2d rvr = r * v * r.transpose();
    const double w_oracle = rb.dot(rvr.ldlt().solve(rb));
    CHECK(w.statistic == doctest::Approx(w_oracle).epsilon(1e-10));

    CHECK_THROWS_AS(wald_joint(est, {}), ValidationError);
    CHECK_THROWS_AS(wald_joint(est, {"nope"}), ValidationError);
}

TEST_CASE("statistics are invariant to unit reordering") {
    PanelDataset p = fixture(303, 12, 6);
    // Rebuild with units in reverse order.
    std::vector<std::string> runits(p.units().rbegin(), p.units().rend());
    PanelDataset q = PanelDataset::create(runits, p.periods());
    for (const auto& var : p.variable_names()) {
        std::vector<double> cells;
        for (std::size_t u = p.n_units(); u-- > 0;) {
            auto s = p.unit_series(var, u);
            cells.insert(cells.end(), s.begin(), s.end());
        }
        q = q.with_column(var, cells);
    }

    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate ep = estimate(p, spec, plan, Scheme::Difference, Step::Two);
    GmmEstimate eq = estimate(q, spec, plan, Scheme::Difference, Step::Two);
    CHECK(sargan(ep).statistic == doctest::Approx(sargan(eq).statistic).epsilon(1e-9));
    CHECK(hansen_j(ep).statistic == doctest::Approx(hansen_j(eq).statistic).epsilon(1e-9));
    CHECK(ar_test(ep, 1).statistic == doctest::Approx(ar_test(eq, 1).statistic).epsilon(1e-9));
    CHECK(pesaran_cd(p, "y").statistic ==
          doctest::Approx(pesaran_cd(q, "y").statistic).epsilon(1e-9));
}

TEST_CASE("residual matrix covers exactly the difference rows") {
    PanelDataset p = fixture(404, 8, 6);
    ModelSpec spec = model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);
    Eigen::MatrixXd m = residual_matrix(est, p.n_units(), p.n_periods());
    for (int u = 0; u < 8; ++u) {
        CHECK(std::isnan(m(u, 0)));
        CHECK(std::isnan(m(u, 1)));
        for (int t = 2; t < 6; ++t) CHECK_FALSE(std::isnan(m(u, t)));
    }
    CHECK_NOTHROW(pesaran_cd(m));
}

} // TEST_SUITE
