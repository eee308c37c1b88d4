#include <algorithm>
#include <cmath>
#include <vector>

#include "tfpanel/errors.hpp"
#include "tfpanel/ingest.hpp"
#include "tfpanel/rng.hpp"

namespace tfpanel {

namespace {

struct MomentTarget {
    const char* label;
    // upper-middle group              lower-middle group
    double u_mean, u_sd, u_min, u_max, l_mean, l_sd, l_min, l_max;
};

// Per-group summary targets for the synthetic skeleton, one row per
// indicator column.
const MomentTarget kTargets[] = {
    {"GNI", 14855.94, 5208.089, 4500.667, 31840, 5697.473, 3100.357, 1610, 18010},
    {"EXPG", 9.97e10, 3.19e11, 1.98e8, 2.50e12, 2.82e10, 6.35e10, 1.09e7, 7.42e11},
    {"IMPG", 8.79e10, 2.59e11, 1.07e9, 2.04e12, 3.31e10, 7.55e10, 9.62e7, 6.23e11},
    {"ATCE", 7.512621, 4.40467, 1, 21.7, 8.133076, 4.296988, 1.8, 26},
    {"PCT", 6473584, 2.72e7, 472.614, 2.42e8, 3031969, 6157906, 3303.152, 6.62e7},
    {"AFT", 844.2934, 2993.477, 0, 25394.59, 227.8565, 650.8994, 0, 8596.939},
    {"QPI", 3.74705, 0.9403937, 1.61, 6.4, 3.394759, 0.8965979, 1.3, 5.5},
    {"LPIAC", 2.721116, 0.4016119, 1.64, 3.915447, 2.590702, 0.3361563, 1.542857, 3.518981},
    {"LPICQ", 2.640872, 0.3747325, 1.75, 3.747822, 2.504383, 0.3019186, 1.681079, 3.4},
    {"LPIEA", 2.742434, 0.3500987, 1.890625, 3.704961, 2.614273, 0.3389381, 1.77, 3.438571},
    {"LPIEC", 2.470341, 0.3305277, 1.68, 3.59546, 2.355691, 0.2795677, 1.5, 3.17442},
    {"LPIFS", 3.175554, 0.3773129, 2.308838, 4.14, 3.02869, 0.3495521, 2.023799, 4},
    {"LPI", 2.722053, 0.3428095, 1.87919, 3.775321, 2.580377, 0.280506, 1.716096, 3.420043},
    {"LPIQTT", 2.551193, 0.4042254, 1.5, 3.79, 2.347956, 0.3109751, 1.27, 3.337178},
    {"TRF", 5.090698, 3.84181, 0.3, 23.97, 7.416136, 4.5152, 0.73, 35.65},
    {"FDI", -5.84e9, 2.29e10, -2.32e11, 4.17e10, -2.38e9, 6.62e9, -9.33e10, 8.75e9},
    {"GFCF", 1.41e11, 6.59e11, 4.99e8, 6.12e12, 4.12e10, 1.06e11, 1.26e8, 8.25e11},
};

// n values on [lo, hi] with exact sample mean / std / min / max. Starts from
// a skew-matched power-of-uniform cloud, pins one cell to each extreme, then
// rescales the free cells; cells pushed outside the range are pinned to the
// boundary and the rescale repeats on the remainder.
std::vector<double> match_moments(int n, double mean, double sd, double lo, double hi,
                                  const std::vector<double>& uniforms, const char* label) {
    if (n < 4) throw ValidationError("skeleton: group too small");
    if (!(lo < hi) || !(lo <= mean && mean <= hi) || sd <= 0)
        throw ValidationError(std::string("skeleton: inconsistent targets for ") + label);

    const double range = hi - lo;
    const double kappa = std::max(0.05, range / (mean - lo) - 1.0);
    std::vector<double> x(n);
    x[0] = lo;
    x[1] = hi;
    for (int i = 2; i < n; ++i) x[i] = lo + range * std::pow(uniforms[i], kappa);

    std::vector<bool> pinned(n, false);
    pinned[0] = pinned[1] = true;

    const double target_ss = (n - 1.0) * sd * sd;
    for (int iter = 0; iter < 200; ++iter) {
        double pinned_sum = 0, pinned_ss = 0;
        int n_free = 0;
        for (int i = 0; i < n; ++i) {
            if (pinned[i]) {
                pinned_sum += x[i];
                pinned_ss += (x[i] - mean) * (x[i] - mean);
            } else {
                ++n_free;
            }
        }
        if (n_free < 2)
            throw ValidationError(std::string("skeleton: cannot match moments for ") + label);

        const double free_target_mean = (n * mean - pinned_sum) / n_free;
        const double free_target_ss = target_ss - pinned_ss;
        if (free_target_ss <= 0)
            throw ValidationError(std::string("skeleton: variance target too small for ") +
                                  label);

        double free_mean = 0;
        for (int i = 0; i < n; ++i)
            if (!pinned[i]) free_mean += x[i];
        free_mean /= n_free;
        double free_ss = 0;
        for (int i = 0; i < n; ++i)
            if (!pinned[i]) free_ss += (x[i] - free_mean) * (x[i] - free_mean);
        if (free_ss <= 0)
            throw ValidationError(std::string("skeleton: degenerate free cells for ") + label);

        // (x - free_mean) * c + free_target_mean hits the mean exactly and
        // the SS once c solves c^2 * free_ss + n_free * (d - mean)^2 = target.
        const double shift_ss = n_free * (free_target_mean - mean) * (free_target_mean - mean);
        if (free_target_ss <= shift_ss)
            throw ValidationError(std::string("skeleton: variance target too small for ") +
                                  label);
        const double c = std::sqrt((free_target_ss - shift_ss) / free_ss);

        bool clipped = false;
        for (int i = 0; i < n; ++i) {
            if (pinned[i]) continue;
            double v = (x[i] - free_mean) * c + free_target_mean;
            if (v < lo) {
                v = lo;
                pinned[i] = true;
                clipped = true;
            } else if (v > hi) {
                v = hi;
                pinned[i] = true;
                clipped = true;
            }
            x[i] = v;
        }
        if (!clipped) return x;
    }
    throw ValidationError(std::string("skeleton: moment matching did not converge for ") +
                          label);
}

} // namespace

PanelDataset replication_skeleton(std::uint64_t seed) {
    const ClassificationList& classes = replication_classification();
    std::vector<std::string> units;
    units.insert(units.end(), classes.lower_middle.begin(), classes.lower_middle.end());
    units.insert(units.end(), classes.upper_middle.begin(), classes.upper_middle.end());
    std::sort(units.begin(), units.end());

    std::vector<int> periods;
    for (int y = 2010; y <= 2020; ++y) periods.push_back(y);
    PanelDataset panel = PanelDataset::create(units, periods);

    const std::size_t np = periods.size();
    CounterRng rng(seed);

    // Group membership in unit order.
    std::vector<bool> is_upper(units.size());
    for (std::size_t u = 0; u < units.size(); ++u)
        is_upper[u] = std::find(classes.upper_middle.begin(), classes.upper_middle.end(),
                                units[u]) != classes.upper_middle.end();

    for (std::size_t v = 0; v < std::size(kTargets); ++v) {
        const MomentTarget& tgt = kTargets[v];
        std::vector<double> cells(units.size() * np);
        for (int group = 0; group < 2; ++group) {
            const bool upper = group == 1;
            std::vector<std::size_t> cell_ids;
            for (std::size_t u = 0; u < units.size(); ++u)
                if (is_upper[u] == upper)
                    for (std::size_t p = 0; p < np; ++p) cell_ids.push_back(u * np + p);

            std::vector<double> uniforms(cell_ids.size());
            for (std::size_t i = 0; i < cell_ids.size(); ++i)
                uniforms[i] = rng.uniform(cell_ids[i], v, group + 1);

            std::vector<double> values =
                upper ? match_moments(static_cast<int>(cell_ids.size()), tgt.u_mean, tgt.u_sd,
                                      tgt.u_min, tgt.u_max, uniforms, tgt.label)
                      : match_moments(static_cast<int>(cell_ids.size()), tgt.l_mean, tgt.l_sd,
                                      tgt.l_min, tgt.l_max, uniforms, tgt.label);
            for (std::size_t i = 0; i < cell_ids.size(); ++i) cells[cell_ids[i]] = values[i];
        }
        panel = panel.with_column(tgt.label, std::move(cells));
    }
    return panel;
}

} // namespace tfpanel
