#pragma once

// Embedded moment tables for the panel unit-root tests. The values are
// frozen output of the seeded Monte Carlo calibrators in unit_root.hpp
// (see tools/gen_moment_tables.cpp, which regenerates this file's .cpp).

#include <span>

#include "tfpanel/unit_root.hpp"

namespace tfpanel::detail {

struct LlcTableRow {
    double t_tilde;
    double mu_star;
    double sigma_star;
};

struct IpsTableRow {
    int n_obs;
    int lags;
    double mean_t;
    double var_t;
};

// Rows sorted ascending by t_tilde / n_obs. Empty span when the
// deterministic case has no table.
std::span<const LlcTableRow> llc_table(Deterministic det);
std::span<const IpsTableRow> ips_table(Deterministic det);

} // namespace tfpanel::detail
