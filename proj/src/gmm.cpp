#include "tfpanel/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "tfpanel/errors.hpp"
#include "tfpanel/stats.hpp"
#include "gmm_internal.hpp"

namespace tfpanel {

void ModelSpec::validate() const {
    if (dependent.empty()) throw ValidationError("model: dependent variable not set");
    if (include_lagged_dependent && lag_depth < 1)
        throw ValidationError("model: lag depth must be >= 1");
    std::set<std::string> seen;
    for (const auto& [name, role] : regressors) {
        (void)role;
        if (name == dependent)
            throw ValidationError("model: dependent '" + dependent +
                                  "' cannot appear among the regressors");
        if (!seen.insert(name).second)
            throw ValidationError("model: duplicate regressor '" + name + "'");
    }
}

namespace {

RegressorRole role_of(const ModelSpec& spec, const std::string& var) {
    if (var == spec.dependent) return RegressorRole::Endogenous;
    for (const auto& [name, role] : spec.regressors)
        if (name == var) return role;
    // External instruments not in the model are treated as predetermined.
    return RegressorRole::Predetermined;
}

} // namespace

void InstrumentPlan::validate(const ModelSpec& spec) const {
    for (const auto& g : gmm_style) {
        if (g.min_lag < 1)
            throw ValidationError("plan: gmm-style min_lag must be >= 1 for '" + g.variable +
                                  "'");
        if (g.max_lag >= 0 && g.max_lag < g.min_lag)
            throw ValidationError("plan: gmm-style lag range empty for '" + g.variable + "'");
        if (role_of(spec, g.variable) == RegressorRole::Endogenous && g.min_lag < 2)
            throw ValidationError("plan: endogenous '" + g.variable +
                                  "' requires gmm-style min_lag >= 2 in the difference "
                                  "equations");
    }
    if (level_lag_depth < 0) throw ValidationError("plan: level lag depth must be >= 0");
}

InstrumentPlan default_plan(const ModelSpec& spec) {
    InstrumentPlan plan;
    if (spec.include_lagged_dependent)
        plan.gmm_style.push_back({spec.dependent, 2, -1, true});
    for (const auto& [name, role] : spec.regressors) {
        (void)role;
        plan.iv_style.push_back(name);
    }
    plan.level_lag_depth = 1;
    plan.level_collapse = true;
    // Keeps the level block minimal (lagged difference + constant), which is
    // what reproduces instrument counts below the group count on the
    // replication models.
    plan.level_time_dummies = false;
    return plan;
}

namespace {

struct ZColumn {
    enum class Kind {
        GmmDiff,
        GmmDiffCollapsed,
        IvDiff,
        DummyDiff,
        GmmLevel,
        GmmLevelCollapsed,
        Constant,
        DummyLevel,
    };
    Kind kind;
    std::string variable; // or dummy name
    int period = -1;      // uncollapsed column's own period position
    int lag = 0;
    int dummy_pos = -1; // period position of the dummy
    std::string name;
};

struct Design {
    int lag_depth = 0;            // d
    std::vector<int> dummy_pos;   // included dummy period positions
    bool intercept = false;       // system only
    int first_diff_p = 0;         // d + 1
    int first_level_p = 0;        // d
};

std::string dummy_name(int pos) { return "yr" + std::to_string(pos + 1); }

std::string lag_label(const std::string& var, int lag) {
    return lag == 1 ? "L." + var : "L" + std::to_string(lag) + "." + var;
}

Design make_design(const PanelDataset& panel, const ModelSpec& spec, Scheme scheme) {
    Design d;
    d.lag_depth = spec.include_lagged_dependent ? spec.lag_depth : 0;
    d.intercept = scheme == Scheme::System;
    d.first_diff_p = d.lag_depth + 1;
    d.first_level_p = d.lag_depth;
    if (static_cast<int>(panel.n_periods()) < d.first_diff_p + 1)
        throw ValidationError("model: too few periods for the differenced equations (need >= " +
                              std::to_string(d.first_diff_p + 1) + ")");
    if (spec.time_dummies)
        for (int p = 2; p < static_cast<int>(panel.n_periods()); ++p) d.dummy_pos.push_back(p);
    return d;
}

std::vector<std::string> coef_names_for(const ModelSpec& spec, const Design& d) {
    std::vector<std::string> names;
    for (int j = 1; j <= d.lag_depth; ++j) names.push_back(lag_label(spec.dependent, j));
    for (const auto& [name, role] : spec.regressors) {
        (void)role;
        names.push_back(name);
    }
    for (int pos : d.dummy_pos) names.push_back(dummy_name(pos));
    if (d.intercept) names.push_back("Constant");
    return names;
}

std::vector<ZColumn> enumerate_columns(const PanelDataset& panel, const InstrumentPlan& plan,
                                       Scheme scheme, const Design& d) {
    const int P = static_cast<int>(panel.n_periods());
    std::vector<ZColumn> cols;

    auto check_var = [&](const std::string& v) {
        if (!panel.has_variable(v))
            throw ValidationError("plan: references unknown variable '" + v + "'");
    };

    // Difference-equation block.
    for (const auto& g : plan.gmm_style) {
        check_var(g.variable);
        const int lmax = g.max_lag < 0 ? P : g.max_lag;
        if (g.collapse) {
            for (int s = g.min_lag; s <= std::min(lmax, P - 1); ++s) {
                ZColumn c{ZColumn::Kind::GmmDiffCollapsed, g.variable, -1, s, -1, ""};
                c.name = "gmm(" + lag_label(g.variable, s) + ")";
                cols.push_back(std::move(c));
            }
        } else {
            for (int p = d.first_diff_p; p < P; ++p) {
                for (int s = g.min_lag; s <= std::min(lmax, p); ++s) {
                    ZColumn c{ZColumn::Kind::GmmDiff, g.variable, p, s, -1, ""};
                    c.name = "gmm(" + lag_label(g.variable, s) + "," +
                             std::to_string(panel.periods()[p]) + ")";
                    cols.push_back(std::move(c));
                }
            }
        }
    }
    for (const auto& v : plan.iv_style) {
        check_var(v);
        ZColumn c{ZColumn::Kind::IvDiff, v, -1, 0, -1, "iv(D." + v + ")"};
        cols.push_back(std::move(c));
    }
    for (int pos : d.dummy_pos) {
        ZColumn c{ZColumn::Kind::DummyDiff, dummy_name(pos), -1, 0, pos,
                  "iv(D." + dummy_name(pos) + ")"};
        cols.push_back(std::move(c));
    }

    if (scheme == Scheme::System) {
        // Level-equation block: lagged differences per plan, then constant,
        // then untransformed dummies when enabled.
        for (const auto& g : plan.gmm_style) {
            if (plan.level_collapse) {
                for (int s = 1; s <= std::min(plan.level_lag_depth, P - 2); ++s) {
                    ZColumn c{ZColumn::Kind::GmmLevelCollapsed, g.variable, -1, s, -1, ""};
                    c.name = "gmmlev(" + lag_label("D." + g.variable, s) + ")";
                    cols.push_back(std::move(c));
                }
            } else {
                for (int p = d.first_level_p; p < P; ++p) {
                    for (int s = 1; s <= std::min({plan.level_lag_depth, p - 1}); ++s) {
                        ZColumn c{ZColumn::Kind::GmmLevel, g.variable, p, s, -1, ""};
                        c.name = "gmmlev(" + lag_label("D." + g.variable, s) + "," +
                                 std::to_string(panel.periods()[p]) + ")";
                        cols.push_back(std::move(c));
                    }
                }
            }
        }
        if (plan.level_constant)
            cols.push_back({ZColumn::Kind::Constant, "Constant", -1, 0, -1, "iv(Constant)"});
        if (plan.level_time_dummies)
            for (int pos : d.dummy_pos)
                cols.push_back({ZColumn::Kind::DummyLevel, dummy_name(pos), -1, 0, pos,
                                "iv(" + dummy_name(pos) + ")"});
    }
    return cols;
}

} // namespace

namespace detail_gmm {

GmmData assemble(const PanelDataset& panel, const ModelSpec& spec, const InstrumentPlan& plan,
                 Scheme scheme) {
    spec.validate();
    plan.validate(spec);
    if (!panel.has_variable(spec.dependent))
        throw ValidationError("model: unknown dependent variable '" + spec.dependent + "'");
    for (const auto& [name, role] : spec.regressors) {
        (void)role;
        if (!panel.has_variable(name))
            throw ValidationError("model: unknown regressor '" + name + "'");
    }

    const Design design = make_design(panel, spec, scheme);
    const int P = static_cast<int>(panel.n_periods());
    const int d = design.lag_depth;

    GmmData data;
    data.scheme = scheme;
    data.coef_names = coef_names_for(spec, design);
    data.k = static_cast<int>(data.coef_names.size());

    const std::vector<ZColumn> zcols = enumerate_columns(panel, plan, scheme, design);
    data.n_instruments = static_cast<int>(zcols.size());
    for (const auto& c : zcols) data.instrument_names.push_back(c.name);

    // Per-unit series cache.
    const auto& dep = panel.column(spec.dependent);
    std::vector<const std::vector<double>*> reg_cols;
    for (const auto& [name, role] : spec.regressors) {
        (void)role;
        reg_cols.push_back(&panel.column(name));
    }
    std::vector<const std::vector<double>*> zvar_cols(zcols.size(), nullptr);
    for (std::size_t c = 0; c < zcols.size(); ++c) {
        const auto kind = zcols[c].kind;
        if (kind == ZColumn::Kind::GmmDiff || kind == ZColumn::Kind::GmmDiffCollapsed ||
            kind == ZColumn::Kind::IvDiff || kind == ZColumn::Kind::GmmLevel ||
            kind == ZColumn::Kind::GmmLevelCollapsed)
            zvar_cols[c] = &panel.column(zcols[c].variable);
    }

    const std::size_t np = panel.n_periods();
    auto obs = [&](const std::vector<double>& col, std::size_t u, int p) {
        return !std::isnan(col[u * np + p]);
    };
    auto val = [&](const std::vector<double>& col, std::size_t u, int p) {
        return col[u * np + p];
    };

    for (std::size_t u = 0; u < panel.n_units(); ++u) {
        // Usable difference rows: every model term must difference cleanly.
        std::vector<int> diff_rows, level_rows;
        for (int p = design.first_diff_p; p < P; ++p) {
            bool ok = true;
            for (int j = 0; ok && j <= d + 1; ++j)
                if (!obs(dep, u, p - j)) ok = false;
            for (const auto* rc : reg_cols)
                if (ok && (!obs(*rc, u, p) || !obs(*rc, u, p - 1))) ok = false;
            if (ok) diff_rows.push_back(p);
        }
        if (scheme == Scheme::System) {
            for (int p = design.first_level_p; p < P; ++p) {
                bool ok = true;
                for (int j = 0; ok && j <= d; ++j)
                    if (!obs(dep, u, p - j)) ok = false;
                for (const auto* rc : reg_cols)
                    if (ok && !obs(*rc, u, p)) ok = false;
                if (ok) level_rows.push_back(p);
            }
        }
        const int n_rows = static_cast<int>(diff_rows.size() + level_rows.size());
        if (n_rows == 0) continue;

        GmmUnit unit;
        unit.panel_unit = u;
        unit.level_start = static_cast<int>(diff_rows.size());
        unit.row_periods = diff_rows;
        unit.row_periods.insert(unit.row_periods.end(), level_rows.begin(), level_rows.end());
        unit.x.setZero(n_rows, data.k);
        unit.y.resize(n_rows);
        unit.z.setZero(n_rows, data.n_instruments);
        unit.h.setZero(n_rows, n_rows);

        for (int r = 0; r < n_rows; ++r) {
            const bool is_level = r >= unit.level_start;
            const int p = unit.row_periods[r];
            int c = 0;
            if (!is_level) {
                unit.y(r) = val(dep, u, p) - val(dep, u, p - 1);
                for (int j = 1; j <= d; ++j)
                    unit.x(r, c++) = val(dep, u, p - j) - val(dep, u, p - j - 1);
                for (const auto* rc : reg_cols)
                    unit.x(r, c++) = val(*rc, u, p) - val(*rc, u, p - 1);
                for (int pos : design.dummy_pos)
                    unit.x(r, c++) = (p == pos ? 1.0 : 0.0) - (p - 1 == pos ? 1.0 : 0.0);
                // intercept column stays zero on difference rows
            } else {
                unit.y(r) = val(dep, u, p);
                for (int j = 1; j <= d; ++j) unit.x(r, c++) = val(dep, u, p - j);
                for (const auto* rc : reg_cols) unit.x(r, c++) = val(*rc, u, p);
                for (int pos : design.dummy_pos) unit.x(r, c++) = (p == pos ? 1.0 : 0.0);
                if (design.intercept) unit.x(r, data.k - 1) = 1.0;
            }

            for (std::size_t zc = 0; zc < zcols.size(); ++zc) {
                const ZColumn& col = zcols[zc];
                double v = 0.0;
                switch (col.kind) {
                case ZColumn::Kind::GmmDiff:
                    if (!is_level && p == col.period && p - col.lag >= 0 &&
                        obs(*zvar_cols[zc], u, p - col.lag))
                        v = val(*zvar_cols[zc], u, p - col.lag);
                    break;
                case ZColumn::Kind::GmmDiffCollapsed:
                    if (!is_level && p - col.lag >= 0 && obs(*zvar_cols[zc], u, p - col.lag))
                        v = val(*zvar_cols[zc], u, p - col.lag);
                    break;
                case ZColumn::Kind::IvDiff:
                    if (!is_level && obs(*zvar_cols[zc], u, p) && obs(*zvar_cols[zc], u, p - 1))
                        v = val(*zvar_cols[zc], u, p) - val(*zvar_cols[zc], u, p - 1);
                    break;
                case ZColumn::Kind::DummyDiff:
                    if (!is_level)
                        v = (p == col.dummy_pos ? 1.0 : 0.0) - (p - 1 == col.dummy_pos ? 1.0 : 0.0);
                    break;
                case ZColumn::Kind::GmmLevel:
                    if (is_level && p == col.period && p - col.lag - 1 >= 0 &&
                        obs(*zvar_cols[zc], u, p - col.lag) &&
                        obs(*zvar_cols[zc], u, p - col.lag - 1))
                        v = val(*zvar_cols[zc], u, p - col.lag) -
                            val(*zvar_cols[zc], u, p - col.lag - 1);
                    break;
                case ZColumn::Kind::GmmLevelCollapsed:
                    if (is_level && p - col.lag - 1 >= 0 &&
                        obs(*zvar_cols[zc], u, p - col.lag) &&
                        obs(*zvar_cols[zc], u, p - col.lag - 1))
                        v = val(*zvar_cols[zc], u, p - col.lag) -
                            val(*zvar_cols[zc], u, p - col.lag - 1);
                    break;
                case ZColumn::Kind::Constant:
                    if (is_level) v = 1.0;
                    break;
                case ZColumn::Kind::DummyLevel:
                    if (is_level) v = (p == col.dummy_pos ? 1.0 : 0.0);
                    break;
                }
                unit.z(r, zc) = v;
            }
        }

        // One-step kernel: tridiagonal(2,-1) over adjacent difference rows,
        // identity on level rows.
        for (int a = 0; a < unit.level_start; ++a) {
            unit.h(a, a) = 2.0;
            for (int b = a + 1; b < unit.level_start; ++b)
                if (std::abs(unit.row_periods[a] - unit.row_periods[b]) == 1) {
                    unit.h(a, b) = -1.0;
                    unit.h(b, a) = -1.0;
                }
        }
        for (int a = unit.level_start; a < n_rows; ++a) unit.h(a, a) = 1.0;

        data.n_diff_rows += unit.level_start;
        data.n_level_rows += n_rows - unit.level_start;
        data.unit_names.push_back(panel.units()[u]);
        data.units.push_back(std::move(unit));
    }

    if (data.units.empty())
        throw EstimationError("gmm: no usable observations for dependent '" + spec.dependent +
                              "'");
    data.n_groups = static_cast<int>(data.units.size());
    data.n_obs_reported = scheme == Scheme::System ? data.n_level_rows : data.n_diff_rows;
    return data;
}

namespace {

// Symmetric (pseudo-)inverse: eigenvalues below tol * max are dropped.
Eigen::MatrixXd robust_inverse(const Eigen::MatrixXd& m, bool* used_pseudo) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& vals = es.eigenvalues();
    const double vmax = vals.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * std::max(vmax, 1e-300);
    Eigen::VectorXd inv_vals(vals.size());
    bool pseudo = false;
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) > tol) {
            inv_vals(i) = 1.0 / vals(i);
        } else {
            inv_vals(i) = 0.0;
            pseudo = true;
        }
    }
    if (used_pseudo) *used_pseudo = pseudo;
    return es.eigenvectors() * inv_vals.asDiagonal() * es.eigenvectors().transpose();
}

// Solve A x = b for symmetric PSD A; on rank deficiency name the collinear
// coefficient columns via pivoted QR.
Eigen::MatrixXd invert_or_name_collinear(const Eigen::MatrixXd& a,
                                         const std::vector<std::string>& names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    const int k = static_cast<int>(a.rows());
    if (qr.rank() < k) {
        const auto perm = qr.colsPermutation().indices();
        std::ostringstream os;
        os << "gmm: rank-deficient moment matrix; collinear columns:";
        for (int i = qr.rank(); i < k; ++i) os << " '" << names[perm(i)] << "'";
        throw EstimationError(os.str());
    }
    return qr.solve(Eigen::MatrixXd::Identity(k, k));
}

} // namespace

std::vector<Eigen::VectorXd> residuals(const GmmData& data, const Eigen::VectorXd& beta) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(data.units.size());
    for (const auto& u : data.units) out.push_back(u.y - u.x * beta);
    return out;
}

double j_statistic(const GmmData& data, const std::vector<Eigen::VectorXd>& resid,
                   const Eigen::MatrixXd& w, const std::vector<int>& active) {
    const int L = active.empty() ? data.n_instruments : static_cast<int>(active.size());
    Eigen::VectorXd g = Eigen::VectorXd::Zero(L);
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        Eigen::VectorXd gi = data.units[i].z.transpose() * resid[i];
        if (active.empty()) {
            g += gi;
        } else {
            for (int c = 0; c < L; ++c) g(c) += gi(active[c]);
        }
    }
    return g.dot(w * g);
}

Solution solve_gmm(const GmmData& data, Step step, bool windmeijer,
                   const std::vector<int>& active) {
    const int k = data.k;
    const int L = active.empty() ? data.n_instruments : static_cast<int>(active.size());
    if (L < k)
        throw EstimationError("gmm: under-identified (" + std::to_string(L) +
                              " instruments for " + std::to_string(k) + " parameters)");

    auto slice = [&](const Eigen::MatrixXd& z) -> Eigen::MatrixXd {
        if (active.empty()) return z;
        Eigen::MatrixXd out(z.rows(), L);
        for (int c = 0; c < L; ++c) out.col(c) = z.col(active[c]);
        return out;
    };

    // Column equilibration: regressors and instruments arrive in wildly
    // different units, which wrecks the rank checks and the weighting-matrix
    // inversion. The estimator is exactly invariant to per-column scaling,
    // so solve in the scaled space and map the solution back at the end.
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd dz = Eigen::VectorXd::Zero(L);
    for (const auto& u : data.units) {
        const Eigen::MatrixXd z = slice(u.z);
        dx += u.x.colwise().squaredNorm().transpose();
        dz += z.colwise().squaredNorm().transpose();
    }
    dx = dx.cwiseSqrt();
    dz = dz.cwiseSqrt();
    for (int j = 0; j < k; ++j)
        if (dx(j) <= 0) dx(j) = 1.0;
    for (int c = 0; c < L; ++c)
        if (dz(c) <= 0) dz(c) = 1.0;
    const Eigen::VectorXd ix = dx.cwiseInverse();
    const Eigen::VectorXd iz = dz.cwiseInverse();

    Eigen::MatrixXd zx = Eigen::MatrixXd::Zero(L, k);
    Eigen::VectorXd zy = Eigen::VectorXd::Zero(L);
    Eigen::MatrixXd zhz = Eigen::MatrixXd::Zero(L, L);
    std::vector<Eigen::MatrixXd> zs; // scaled instruments per unit
    std::vector<Eigen::MatrixXd> xs; // scaled regressors per unit
    zs.reserve(data.units.size());
    xs.reserve(data.units.size());
    for (const auto& u : data.units) {
        zs.push_back(slice(u.z) * iz.asDiagonal());
        xs.push_back(u.x * ix.asDiagonal());
        const Eigen::MatrixXd& z = zs.back();
        zx.noalias() += z.transpose() * xs.back();
        zy.noalias() += z.transpose() * u.y;
        zhz.noalias() += z.transpose() * u.h * z;
    }

    Solution sol;
    sol.w1 = robust_inverse(zhz, &sol.weight_pseudo_inverse);

    const Eigen::MatrixXd xzw1 = zx.transpose() * sol.w1; // k x L
    const Eigen::MatrixXd a1 = xzw1 * zx;
    const Eigen::MatrixXd a1_inv = invert_or_name_collinear(a1, data.coef_names);
    sol.beta_one = a1_inv * (xzw1 * zy);

    // One-step residual moments.
    Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(L, L);
    std::vector<Eigen::VectorXd> e1;
    e1.reserve(data.units.size());
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        e1.push_back(data.units[i].y - xs[i] * sol.beta_one);
        Eigen::VectorXd gi = zs[i].transpose() * e1.back();
        s1.noalias() += gi * gi.transpose();
    }

    auto unscale = [&](Solution& s) {
        s.beta = ix.asDiagonal() * s.beta;
        s.beta_one = ix.asDiagonal() * s.beta_one;
        s.cov = ix.asDiagonal() * s.cov * ix.asDiagonal();
        s.cov_plain = ix.asDiagonal() * s.cov_plain * ix.asDiagonal();
        s.w1 = iz.asDiagonal() * s.w1 * iz.asDiagonal();
        if (s.w2.size() > 0) s.w2 = iz.asDiagonal() * s.w2 * iz.asDiagonal();
    };

    if (step == Step::One) {
        sol.beta = sol.beta_one;
        // Heteroskedasticity-robust sandwich.
        sol.cov = a1_inv * (xzw1 * s1 * xzw1.transpose()) * a1_inv;
        sol.cov_plain = sol.cov;
        unscale(sol);
        return sol;
    }

    bool pseudo2 = false;
    sol.w2 = robust_inverse(s1, &pseudo2);
    sol.weight_pseudo_inverse = sol.weight_pseudo_inverse || pseudo2;

    const Eigen::MatrixXd xzw2 = zx.transpose() * sol.w2; // k x L
    const Eigen::MatrixXd a2 = xzw2 * zx;
    const Eigen::MatrixXd a2_inv = invert_or_name_collinear(a2, data.coef_names);
    sol.beta = a2_inv * (xzw2 * zy);
    sol.cov_plain = a2_inv;
    sol.cov = sol.cov_plain;

    if (windmeijer) {
        // Finite-sample correction: Vc = V2 + D V2 + V2 D' + D V1r D' with
        // D[:,j] = A2^-1 X'Z W2 [sum_i Z'(x_j e1' + e1 x_j')Z] W2 g2.
        Eigen::VectorXd g2 = Eigen::VectorXd::Zero(L);
        std::vector<Eigen::VectorXd> b1(data.units.size());
        for (std::size_t i = 0; i < data.units.size(); ++i) {
            b1[i] = zs[i].transpose() * e1[i];
            g2.noalias() += zs[i].transpose() * (data.units[i].y - xs[i] * sol.beta);
        }
        const Eigen::VectorXd c = sol.w2 * g2;

        Eigen::MatrixXd dmat(k, k);
        for (int j = 0; j < k; ++j) {
            Eigen::VectorXd pj_c = Eigen::VectorXd::Zero(L);
            for (std::size_t i = 0; i < data.units.size(); ++i) {
                const Eigen::VectorXd aij = zs[i].transpose() * xs[i].col(j);
                pj_c.noalias() += aij * b1[i].dot(c) + b1[i] * aij.dot(c);
            }
            dmat.col(j) = a2_inv * (xzw2 * pj_c);
        }

        const Eigen::MatrixXd v1r = a1_inv * (xzw1 * s1 * xzw1.transpose()) * a1_inv;
        sol.cov = sol.cov_plain + dmat * sol.cov_plain + sol.cov_plain * dmat.transpose() +
                  dmat * v1r * dmat.transpose();
        sol.windmeijer_applied = true;
    }
    unscale(sol);
    return sol;
}

} // namespace detail_gmm

namespace {

InstrumentBlocks blocks_from(const GmmData& data) {
    InstrumentBlocks out;
    out.column_names = data.instrument_names;
    out.n_columns = data.n_instruments;
    for (const auto& u : data.units) {
        out.z.push_back(u.z);
        out.h.push_back(u.h);
        out.row_periods.push_back(u.row_periods);
        out.level_start.push_back(u.level_start);
    }
    return out;
}

} // namespace

InstrumentBlocks build_difference_instruments(const PanelDataset& panel, const ModelSpec& spec,
                                              const InstrumentPlan& plan) {
    return blocks_from(detail_gmm::assemble(panel, spec, plan, Scheme::Difference));
}

InstrumentBlocks build_system_instruments(const PanelDataset& panel, const ModelSpec& spec,
                                          const InstrumentPlan& plan) {
    return blocks_from(detail_gmm::assemble(panel, spec, plan, Scheme::System));
}

double GmmEstimate::p_value(std::size_t i) const {
    return stats::norm_two_sided_p(z_stat(i));
}

std::vector<Eigen::VectorXd> GmmEstimate::residuals() const {
    if (!data) throw ValidationError("estimate: no retained design data");
    return detail_gmm::residuals(*data, coef);
}

std::optional<std::size_t> GmmEstimate::coef_index(const std::string& name) const {
    for (std::size_t i = 0; i < coef_names.size(); ++i)
        if (coef_names[i] == name) return i;
    return std::nullopt;
}

GmmEstimate estimate(const PanelDataset& panel, const ModelSpec& spec,
                     const InstrumentPlan& plan, Scheme scheme, Step step,
                     const EstimateOptions& opts) {
    auto data = std::make_shared<GmmData>(detail_gmm::assemble(panel, spec, plan, scheme));
    detail_gmm::Solution sol = detail_gmm::solve_gmm(*data, step, opts.windmeijer);

    GmmEstimate est;
    est.dependent = spec.dependent;
    est.coef_names = data->coef_names;
    est.coef = sol.beta;
    est.cov = sol.cov;
    est.se = sol.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    est.step = step;
    est.scheme = scheme;
    est.instrument_count = data->n_instruments;
    est.group_count = data->n_groups;
    est.n_obs = data->n_obs_reported;
    est.windmeijer_applied = sol.windmeijer_applied;
    est.warnings.weight_pseudo_inverse = sol.weight_pseudo_inverse;
    if (sol.weight_pseudo_inverse)
        est.warnings.notes.push_back("weighting matrix required a pseudo-inverse");
    if (data->n_instruments >= data->n_groups) {
        est.warnings.instruments_ge_groups = true;
        est.warnings.notes.push_back("instrument count (" +
                                     std::to_string(data->n_instruments) +
                                     ") >= group count (" + std::to_string(data->n_groups) +
                                     ")");
    }
    bool lagged_dep_gmm = false;
    for (const auto& g : plan.gmm_style)
        if (g.variable == spec.dependent) lagged_dep_gmm = true;
    if (spec.include_lagged_dependent && !lagged_dep_gmm)
        est.warnings.notes.push_back(
            "lagged dependent has no gmm-style instruments (exactly identified setups only)");
    est.data = std::move(data);
    est.coef_one_step = sol.beta_one;
    est.w1 = sol.w1;
    est.w2 = sol.w2;
    return est;
}

GmmEstimate windmeijer_correct(const GmmEstimate& est) {
    if (est.step != Step::Two)
        throw ValidationError("windmeijer: correction applies to two-step estimates only");
    if (est.windmeijer_applied)
        throw ValidationError("windmeijer: correction already applied");
    if (!est.data) throw ValidationError("windmeijer: estimate lacks retained design data");

    detail_gmm::Solution sol = detail_gmm::solve_gmm(*est.data, Step::Two, true);
    GmmEstimate out = est;
    out.cov = sol.cov;
    out.se = sol.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    out.windmeijer_applied = true;
    return out;
}

} // namespace tfpanel
