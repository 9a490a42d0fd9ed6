#pragma once

// Exact minimum renewable-scenario emissions for tiny instances: one LP per
// charge/discharge direction pattern, solved with the dense simplex oracle.

#include "mgdeploy/dispatch.hpp"
#include "oracle/dense_simplex.hpp"

#include <algorithm>
#include <limits>

namespace oracle {

inline double enumerate_min_emissions(const mgdeploy::DispatchInstance& inst)
{
    const std::size_t T = inst.hours();
    const auto& bat = inst.battery;
    const double inf = std::numeric_limits<double>::infinity();
    const double pmax = bat.max_power_mw();
    const double e0 = bat.initial_soc_frac * bat.rated_energy_mwh;
    double best = inf;
    for (unsigned mask = 0; mask < (1u << T); ++mask) {
        DenseLp lp;
        int prev_e = -1;
        for (std::size_t t = 0; t < T; ++t) {
            const bool zero = inst.load[t] <= mgdeploy::kZeroLoadThresholdMw;
            const bool dis = (mask >> t) & 1u;
            const double w = zero ? 0.0 : inst.carbon[t] / inst.load[t];
            const double gcap = zero ? 0.0 : inf;
            const int sl = lp.add_var(0, 0, inf);
            const int sb = lp.add_var(0, 0, dis ? 0.0 : inf);
            const int cu = lp.add_var(0, 0, inf);
            const int gl = lp.add_var(w, 0, gcap);
            const int gb = lp.add_var(w, 0, dis ? 0.0 : gcap);
            const int bl = lp.add_var(0, 0, dis ? inf : 0.0);
            const int e = t + 1 == T ? lp.add_var(0, e0, e0)
                                     : lp.add_var(0, bat.soc_min_frac * bat.rated_energy_mwh,
                                                  bat.soc_max_frac * bat.rated_energy_mwh);
            const int s1 = lp.add_var(0, 0, inf);
            const int s2 = lp.add_var(0, 0, inf);
            int r = lp.add_row(inst.solar[t]);
            lp.A[r][sl] = lp.A[r][sb] = lp.A[r][cu] = 1;
            r = lp.add_row(zero ? 0.0 : inst.load[t]);
            lp.A[r][sl] = lp.A[r][gl] = lp.A[r][bl] = 1;
            r = lp.add_row(t == 0 ? e0 : 0.0);
            lp.A[r][e] = 1;
            if (prev_e >= 0) lp.A[r][prev_e] = -1;
            lp.A[r][sb] = lp.A[r][gb] = -bat.roundtrip_efficiency;
            lp.A[r][bl] = 1;
            r = lp.add_row(pmax);
            lp.A[r][bl] = lp.A[r][s1] = 1;
            r = lp.add_row(pmax);
            lp.A[r][sb] = lp.A[r][gb] = lp.A[r][s2] = 1;
            prev_e = e;
        }
        const auto res = solve_dense(lp);
        if (res) best = std::min(best, res->objective);
    }
    return best;
}

}  // namespace oracle
