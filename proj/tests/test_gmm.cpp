#include <doctest.h>

#include <cmath>
#include <vector>

#include "tfpanel/diagnostics.hpp"
#include "tfpanel/errors.hpp"
#include "tfpanel/gmm.hpp"
#include "tfpanel/panel.hpp"
#include "tfpanel/rng.hpp"
#include "tfpanel/simulate.hpp"

using namespace tfpanel;

namespace {

// Small dynamic panel with one exogenous regressor and its lag column, used
// by the exactly identified and fixed-effect fixtures.
PanelDataset iv_fixture(std::uint64_t seed = 2718, int n_units = 6, int n_periods = 5) {
    DgpConfig cfg;
    cfg.n_units = n_units;
    cfg.n_periods = n_periods;
    cfg.ar_coef = 0.4;
    cfg.beta = {0.7};
    cfg.fixed_effect_sd = 1.0;
    cfg.idiosyncratic_sd = 1.0;
    cfg.seed = seed;
    PanelDataset p = gen_dynamic_panel(cfg);
    return apply_transform(p, SeriesTransform::lag_of("y", "y_lag1", 1));
}

ModelSpec iv_model() {
    ModelSpec spec;
    spec.dependent = "y";
    spec.regressors = {{"x1", RegressorRole::Exogenous}};
    return spec;
}

InstrumentPlan iv_only_plan() {
    InstrumentPlan plan;
    plan.iv_style = {"x1", "y_lag1"};
    plan.level_lag_depth = 0;
    plan.level_constant = false;
    plan.level_time_dummies = false;
    return plan;
}

// Richer over-identified fixture for the diagnostics-style properties.
PanelDataset gmm_fixture(std::uint64_t seed = 99, int n_units = 40, int n_periods = 7) {
    DgpConfig cfg;
    cfg.n_units = n_units;
    cfg.n_periods = n_periods;
    cfg.ar_coef = 0.5;
    cfg.beta = {0.6};
    cfg.fixed_effect_sd = 1.0;
    cfg.idiosyncratic_sd = 1.0;
    cfg.seed = seed;
    return gen_dynamic_panel(cfg);
}

ModelSpec gmm_model(bool dummies = false) {
    ModelSpec spec;
    spec.dependent = "y";
    spec.regressors = {{"x1", RegressorRole::Predetermined}};
    spec.time_dummies = dummies;
    return spec;
}

} // namespace

TEST_SUITE("dpd_gmm") {

TEST_CASE("difference instrument column count, uncollapsed vs collapsed") {
    // 4 periods, lagged dependent model, one gmm variable with lags 2..inf.
    PanelDataset p = iv_fixture(7, 3, 4);
    ModelSpec spec = iv_model();
    InstrumentPlan plan;
    plan.gmm_style = {{"y", 2, -1, false}};
    plan.iv_style = {};

    InstrumentBlocks blocks = build_difference_instruments(p, spec, plan);
    // Independent enumeration oracle over (period, lag) pairs: usable
    // difference periods are positions 2..3; lags s run 2..p.
    int expected = 0;
    for (int t = 2; t <= 3; ++t)
        for (int s = 2; s <= t; ++s) ++expected;
    CHECK(expected == 3);
    CHECK(blocks.n_columns == expected);

    plan.gmm_style[0].collapse = true;
    InstrumentBlocks collapsed = build_difference_instruments(p, spec, plan);
    CHECK(collapsed.n_columns == 2); // lag distances 2 and 3
}

TEST_CASE("iv-only plan reproduces the differenced regressor matrix") {
    PanelDataset p = iv_fixture(11, 4, 5);
    ModelSpec spec;
    spec.dependent = "y";
    spec.include_lagged_dependent = false;
    spec.regressors = {{"x1", RegressorRole::Exogenous}};
    InstrumentPlan plan;
    plan.iv_style = {"x1"};

    InstrumentBlocks blocks = build_difference_instruments(p, spec, plan);
    REQUIRE(blocks.n_columns == 1);
    for (std::size_t i = 0; i < blocks.z.size(); ++i) {
        const auto& rows = blocks.row_periods[i];
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double dx = p.value(i, rows[r], "x1") - p.value(i, rows[r] - 1, "x1");
            CHECK(blocks.z[i](r, 0) == doctest::Approx(dx).epsilon(1e-14));
        }
    }
}

TEST_CASE("system column count equals difference plus level counts") {
    PanelDataset p = iv_fixture(13, 2, 5);
    ModelSpec spec = iv_model();
    InstrumentPlan plan;
    plan.gmm_style = {{"y", 2, -1, false}};
    plan.iv_style = {"x1"};
    plan.level_lag_depth = 1;
    plan.level_collapse = true;

    InstrumentBlocks diff = build_difference_instruments(p, spec, plan);
    InstrumentBlocks sys = build_system_instruments(p, spec, plan);
    // Independent enumeration: level block adds one collapsed lagged
    // difference plus the constant.
    CHECK(sys.n_columns == diff.n_columns + 2);

    int level_cols = 0;
    for (const auto& name : sys.column_names)
        if (name.rfind("gmmlev", 0) == 0 || name == "iv(Constant)") ++level_cols;
    CHECK(sys.n_columns == diff.n_columns + level_cols);
}

TEST_CASE("level depth 1 collapsed gives one level gmm column matching hand construction") {
    PanelDataset p = iv_fixture(17, 2, 4);
    ModelSpec spec = iv_model();
    InstrumentPlan plan;
    plan.gmm_style = {{"y", 2, -1, true}};
    plan.level_lag_depth = 1;
    plan.level_collapse = true;

    InstrumentBlocks sys = build_system_instruments(p, spec, plan);
    int level_gmm = 0;
    int level_gmm_idx = -1;
    for (std::size_t c = 0; c < sys.column_names.size(); ++c)
        if (sys.column_names[c].rfind("gmmlev", 0) == 0) {
            ++level_gmm;
            level_gmm_idx = static_cast<int>(c);
        }
    REQUIRE(level_gmm == 1);

    // Hand construction: level rows are periods 1..3; the instrument is
    // D.y_{t-1} = y_{t-1} - y_{t-2}, zero where that lag does not exist.
    for (std::size_t i = 0; i < sys.z.size(); ++i) {
        for (int r = sys.level_start[i]; r < sys.z[i].rows(); ++r) {
            const int t = sys.row_periods[i][r];
            const double expected =
                t - 2 >= 0 ? p.value(i, t - 1, "y") - p.value(i, t - 2, "y") : 0.0;
            CHECK(sys.z[i](r, level_gmm_idx) == doctest::Approx(expected).epsilon(1e-14));
        }
        // and zero on the difference rows
        for (int r = 0; r < sys.level_start[i]; ++r)
            CHECK(sys.z[i](r, level_gmm_idx) == 0.0);
    }
}

TEST_CASE("empty level plan degenerates to the difference blocks exactly") {
    PanelDataset p = iv_fixture(19, 3, 5);
    ModelSpec spec = iv_model();
    InstrumentPlan plan;
    plan.gmm_style = {{"y", 2, -1, true}};
    plan.iv_style = {"x1"};
    plan.level_lag_depth = 0;
    plan.level_constant = false;
    plan.level_time_dummies = false;

    InstrumentBlocks diff = build_difference_instruments(p, spec, plan);
    InstrumentBlocks sys = build_system_instruments(p, spec, plan);
    CHECK(sys.n_columns == diff.n_columns);
    for (std::size_t i = 0; i < diff.z.size(); ++i) {
        // The system stack has extra level rows whose instrument entries must
        // all be zero; the difference-row block must match exactly.
        const int nd = diff.level_start[i];
        CHECK((sys.z[i].topRows(nd) - diff.z[i]).cwiseAbs().maxCoeff() == 0.0);
        CHECK(sys.z[i].bottomRows(sys.z[i].rows() - nd).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("one-step kernel is tridiagonal(2,-1) on difference rows, identity on levels") {
    PanelDataset p = iv_fixture(23, 2, 6);
    ModelSpec spec = iv_model();
    InstrumentPlan plan = default_plan(spec);

    InstrumentBlocks sys = build_system_instruments(p, spec, plan);
    for (std::size_t i = 0; i < sys.h.size(); ++i) {
        const auto& h = sys.h[i];
        const int nd = sys.level_start[i];
        for (int a = 0; a < h.rows(); ++a) {
            for (int b = 0; b < h.cols(); ++b) {
                double expected = 0.0;
                if (a < nd && b < nd)
                    expected = a == b ? 2.0 : (std::abs(a - b) == 1 ? -1.0 : 0.0);
                else if (a == b)
                    expected = 1.0;
                CHECK(h(a, b) == expected);
            }
        }
    }
}

TEST_CASE("gaps in the period axis break the kernel adjacency") {
    PanelDataset p = iv_fixture(29, 2, 7);
    // Punch a hole at period position 3 for unit 0.
    auto col = p.column("y");
    col[0 * 7 + 3] = std::numeric_limits<double>::quiet_NaN();
    PanelDataset q = PanelDataset::create(p.units(), p.periods());
    q = q.with_column("y", col);
    q = q.with_column("x1", p.column("x1"));
    q = apply_transform(q, SeriesTransform::lag_of("y", "y_lag1", 1));

    ModelSpec spec = iv_model();
    InstrumentPlan plan = default_plan(spec);
    InstrumentBlocks diff = build_difference_instruments(q, spec, plan);
    // Unit 0 keeps difference rows at positions 2 and 6 only (3,4,5 need the
    // missing cell); they are not adjacient so H is diagonal there.
    const auto& rows = diff.row_periods[0];
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == 2);
    CHECK(rows[1] == 6);
    CHECK(diff.h[0](0, 1) == 0.0);
    CHECK(diff.h[0](0, 0) == 2.0);
}

TEST_CASE("exactly identified difference GMM equals the dense IV oracle to 1e-10") {
    PanelDataset p = iv_fixture();
    ModelSpec spec = iv_model();
    InstrumentPlan plan = iv_only_plan();

    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);
    REQUIRE(est.instrument_count == 2);
    REQUIRE(est.coef_names.size() == 2);

    // Stack differenced data by hand and solve (Z'X)^-1 Z'y independently.
    std::vector<double> ys, x_lag, x_reg, z1, z2;
    for (std::size_t u = 0; u < p.n_units(); ++u) {
        for (std::size_t t = 2; t < p.n_periods(); ++t) {
            ys.push_back(p.value(u, t, "y") - p.value(u, t - 1, "y"));
            x_lag.push_back(p.value(u, t - 1, "y") - p.value(u, t - 2, "y"));
            x_reg.push_back(p.value(u, t, "x1") - p.value(u, t - 1, "x1"));
            z1.push_back(p.value(u, t, "x1") - p.value(u, t - 1, "x1"));
            z2.push_back(p.value(u, t - 1, "y") - p.value(u, t - 2, "y"));
        }
    }
    const int n = static_cast<int>(ys.size());
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, 2), Z(n, 2);
    for (int i = 0; i < n; ++i) {
        y(i) = ys[i];
        X(i, 0) = x_lag[i];
        X(i, 1) = x_reg[i];
        Z(i, 0) = z1[i];
        Z(i, 1) = z2[i];
    }
    Eigen::VectorXd oracle = oracle_iv(y, X, Z);
    CHECK(std::fabs(est.coef(0) - oracle(0)) < 1e-10);
    CHECK(std::fabs(est.coef(1) - oracle(1)) < 1e-10);
}

TEST_CASE("per-unit constants added to y leave difference GMM unchanged") {
    PanelDataset base = iv_fixture(31415);
    ModelSpec spec = iv_model();
    InstrumentPlan plan = iv_only_plan();
    GmmEstimate est0 = estimate(base, spec, plan, Scheme::Difference, Step::One);

    // Rebuild the panel with unit-specific constants added to y (and the lag
    // column recomputed from the shifted series).
    auto ycol = base.column("y");
    const std::size_t np = base.n_periods();
    for (std::size_t u = 0; u < base.n_units(); ++u) {
        const double c = 3.0 * static_cast<double>(u + 1) - 7.5;
        for (std::size_t t = 0; t < np; ++t) ycol[u * np + t] += c;
    }
    PanelDataset shifted = PanelDataset::create(base.units(), base.periods());
    shifted = shifted.with_column("y", ycol);
    shifted = shifted.with_column("x1", base.column("x1"));
    shifted = apply_transform(shifted, SeriesTransform::lag_of("y", "y_lag1", 1));

    GmmEstimate est1 = estimate(shifted, spec, plan, Scheme::Difference, Step::One);
    CHECK((est0.coef - est1.coef).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("scale equivariance of coefficients, t statistics, and overidentification") {
    PanelDataset p = gmm_fixture();
    ModelSpec spec = gmm_model();
    InstrumentPlan plan = default_plan(spec);

    GmmEstimate est0 = estimate(p, spec, plan, Scheme::Difference, Step::Two);

    auto xcol = p.column("x1");
    for (double& v : xcol) v *= 10.0;
    PanelDataset scaled = PanelDataset::create(p.units(), p.periods());
    scaled = scaled.with_column("y", p.column("y"));
    scaled = scaled.with_column("x1", xcol);
    GmmEstimate est1 = estimate(scaled, spec, plan, Scheme::Difference, Step::Two);

    const std::size_t ix = *est0.coef_index("x1");
    const std::size_t il = *est0.coef_index("L.y");
    CHECK(est1.coef(ix) == doctest::Approx(est0.coef(ix) / 10.0).epsilon(1e-8));
    CHECK(est1.coef(il) == doctest::Approx(est0.coef(il)).epsilon(1e-8));
    CHECK(est1.z_stat(ix) == doctest::Approx(est0.z_stat(ix)).epsilon(1e-8));
}

TEST_CASE("per-period shocks to y move only the time-dummy coefficients") {
    PanelDataset p = gmm_fixture(4242, 30, 8);
    ModelSpec spec = gmm_model(true);
    InstrumentPlan plan = default_plan(spec);

    GmmEstimate est0 = estimate(p, spec, plan, Scheme::Difference, Step::One);

    auto ycol = p.column("y");
    const std::size_t np = p.n_periods();
    const std::vector<double> shock = {0.0, 1.3, -0.4, 2.2, 0.7, -1.9, 0.25, 3.0};
    for (std::size_t u = 0; u < p.n_units(); ++u)
        for (std::size_t t = 0; t < np; ++t) ycol[u * np + t] += shock[t];
    PanelDataset shocked = PanelDataset::create(p.units(), p.periods());
    shocked = shocked.with_column("y", ycol);
    shocked = shocked.with_column("x1", p.column("x1"));

    GmmEstimate est1 = estimate(shocked, spec, plan, Scheme::Difference, Step::One);
    for (std::size_t i = 0; i < est0.coef_names.size(); ++i) {
        if (est0.coef_names[i].rfind("yr", 0) == 0) continue;
        CHECK(est1.coef(i) == doctest::Approx(est0.coef(i)).epsilon(1e-8));
    }
}

TEST_CASE("reported instrument count equals built column count and warns on L >= N") {
    PanelDataset p = gmm_fixture(5150, 6, 8);
    ModelSpec spec = gmm_model();
    InstrumentPlan plan;
    plan.gmm_style = {{"y", 2, -1, false}}; // uncollapsed blows up the count
    plan.iv_style = {"x1"};

    InstrumentBlocks blocks = build_difference_instruments(p, spec, plan);
    GmmEstimate est = estimate(p, spec, plan, Scheme::Difference, Step::One);
    CHECK(est.instrument_count == blocks.n_columns);
    CHECK(est.group_count == 6);
    CHECK(est.warnings.instruments_ge_groups);
}

TEST_CASE("under-identification and rank errors") {
    PanelDataset p = gmm_fixture(66, 10, 6);
    ModelSpec spec = gmm_model();
    InstrumentPlan empty;
    CHECK_THROWS_AS(estimate(p, spec, empty, Scheme::Difference, Step::One),
                    EstimationError);

    // Duplicate regressor values produce a named collinearity error.
    PanelDataset dup = p.with_column("x2", p.column("x1"));
    ModelSpec spec2 = gmm_model();
    spec2.regressors.push_back({"x2", RegressorRole::Predetermined});
    InstrumentPlan plan = default_plan(spec2);
    try {
        estimate(dup, spec2, plan, Scheme::Difference, Step::One);
        FAIL("expected collinearity error");
    } catch (const EstimationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("collinear") != std::string::npos);
        CHECK((msg.find("x1") != std::string::npos || msg.find("x2") != std::string::npos));
    }
}

TEST_CASE("plan validation") {
    ModelSpec spec = gmm_model();
    InstrumentPlan plan;
    plan.gmm_style = {{"y", 1, -1, true}}; // endogenous with min_lag 1
    CHECK_THROWS_AS(plan.validate(spec), ValidationError);
    plan.gmm_style = {{"y", 3, 2, true}}; // empty range
    CHECK_THROWS_AS(plan.validate(spec), ValidationError);
    plan.gmm_style = {{"nope", 2, -1, true}};
    PanelDataset p = gmm_fixture(67, 5, 6);
    CHECK_THROWS_AS(build_difference_instruments(p, spec, plan), ValidationError);
}

TEST_CASE("model validation") {
    ModelSpec spec;
    spec.dependent = "y";
    spec.regressors = {{"y", RegressorRole::Exogenous}};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.regressors = {{"x1", RegressorRole::Exogenous}, {"x1", RegressorRole::Endogenous}};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("windmeijer guards and coefficient stability") {
    PanelDataset p = gmm_fixture(77, 30, 7);
    ModelSpec spec = gmm_model();
    InstrumentPlan plan = default_plan(spec);

    EstimateOptions opts;
    opts.windmeijer = false;
    GmmEstimate one = estimate(p, spec, plan, Scheme::Difference, Step::One, opts);
    CHECK_THROWS_AS(windmeijer_correct(one), ValidationError);

    GmmEstimate two = estimate(p, spec, plan, Scheme::Difference, Step::Two, opts);
    CHECK_FALSE(two.windmeijer_applied);
    GmmEstimate corrected = windmeijer_correct(two);
    CHECK(corrected.windmeijer_applied);
    CHECK_THROWS_AS(windmeijer_correct(corrected), ValidationError);
    CHECK((corrected.coef - two.coef).cwiseAbs().maxCoeff() == 0.0);

    // Exactly identified: the correction only touches the covariance, and
    // the coefficients coincide with the one-step solution.
    PanelDataset iv = iv_fixture(88);
    GmmEstimate exact2 = estimate(iv, iv_model(), iv_only_plan(), Scheme::Difference,
                                  Step::Two);
    GmmEstimate exact1 = estimate(iv, iv_model(), iv_only_plan(), Scheme::Difference,
                                  Step::One);
    CHECK(exact2.windmeijer_applied);
    CHECK((exact2.coef - exact1.coef).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("estimates are deterministic") {
    PanelDataset p = gmm_fixture(123, 25, 7);
    ModelSpec spec = gmm_model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate a = estimate(p, spec, plan, Scheme::System, Step::Two);
    GmmEstimate b = estimate(p, spec, plan, Scheme::System, Step::Two);
    CHECK((a.coef - b.coef).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("system reporting conventions match the level-equation count") {
    PanelDataset p = gmm_fixture(321, 20, 8);
    ModelSpec spec = gmm_model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate diff = estimate(p, spec, plan, Scheme::Difference, Step::One);
    GmmEstimate sys = estimate(p, spec, plan, Scheme::System, Step::One);
    // 20 units, 8 periods, one lag: difference rows 2..7 (6), levels 1..7 (7).
    CHECK(diff.n_obs == 20 * 6);
    CHECK(sys.n_obs == 20 * 7);
    CHECK(sys.coef_names.back() == "Constant");
}

} // TEST_SUITE

TEST_SUITE("dpd_gmm") {

TEST_CASE("estimate exposes per-group residuals for both equation blocks") {
    PanelDataset p = gmm_fixture(246, 10, 6);
    ModelSpec spec = gmm_model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate est = estimate(p, spec, plan, Scheme::System, Step::One);
    auto resid = est.residuals();
    REQUIRE(resid.size() == 10);
    long total = 0;
    for (const auto& e : resid) total += e.size();
    // 4 difference rows + 5 level rows per unit.
    CHECK(total == 10 * 9);
    // Residual identity on the first unit's first difference row.
    const double dy = p.value(0, 2, "y") - p.value(0, 1, "y");
    const double dl = p.value(0, 1, "y") - p.value(0, 0, "y");
    const double dx = p.value(0, 2, "x1") - p.value(0, 1, "x1");
    double fit = est.coef(*est.coef_index("L.y")) * dl + est.coef(*est.coef_index("x1")) * dx;
    CHECK(resid[0](0) == doctest::Approx(dy - fit).epsilon(1e-12));
}

} // TEST_SUITE

TEST_SUITE("dpd_gmm") {

TEST_CASE("estimation tolerates scattered missing cells") {
    PanelDataset base = gmm_fixture(1357, 30, 8);
    auto ycol = base.column("y");
    auto xcol = base.column("x1");
    const std::size_t np = base.n_periods();
    // Punch holes in a few units.
    ycol[3 * np + 4] = std::numeric_limits<double>::quiet_NaN();
    xcol[7 * np + 2] = std::numeric_limits<double>::quiet_NaN();
    ycol[12 * np + 0] = std::numeric_limits<double>::quiet_NaN();
    PanelDataset p = PanelDataset::create(base.units(), base.periods());
    p = p.with_column("y", ycol).with_column("x1", xcol);

    ModelSpec spec = gmm_model();
    InstrumentPlan plan = default_plan(spec);
    for (Scheme scheme : {Scheme::Difference, Scheme::System}) {
        GmmEstimate est = estimate(p, spec, plan, scheme, Step::Two);
        InstrumentBlocks blocks = scheme == Scheme::Difference
                                      ? build_difference_instruments(p, spec, plan)
                                      : build_system_instruments(p, spec, plan);
        CHECK(est.instrument_count == blocks.n_columns);
        CHECK(est.group_count == 30);
        // Fewer usable rows than the balanced panel would have.
        const long balanced = scheme == Scheme::Difference ? 30 * 6 : 30 * 7;
        CHECK(est.n_obs < balanced);
        CHECK(std::isfinite(est.coef(0)));
    }
}

TEST_CASE("difference-in-hansen of the level-instrument subset on system GMM") {
    PanelDataset p = gmm_fixture(2468, 60, 7);
    ModelSpec spec = gmm_model();
    InstrumentPlan plan = default_plan(spec);
    GmmEstimate sys = estimate(p, spec, plan, Scheme::System, Step::Two);
    InstrumentBlocks blocks = build_system_instruments(p, spec, plan);

    // The level block: collapsed lagged difference. Removing it leaves the
    // difference instruments plus the constant, still identified.
    std::vector<std::string> level_subset;
    for (const auto& name : blocks.column_names)
        if (name.rfind("gmmlev", 0) == 0) level_subset.push_back(name);
    REQUIRE_FALSE(level_subset.empty());
    TestResult d = difference_in_hansen(sys, level_subset);
    CHECK(*d.df == static_cast<int>(level_subset.size()));
    CHECK(d.statistic >= 0.0);
    CHECK(d.p_value >= 0.0);
    CHECK(d.p_value <= 1.0);
    CHECK(d.subset.find("gmmlev") != std::string::npos);
}

} // TEST_SUITE
