#pragma once

#include "mgdeploy/dispatch.hpp"
#include "mgdeploy/lp.hpp"

#include <optional>
#include <vector>

namespace mgdeploy::detail {

// LP relaxation of the hourly dispatch MILP, in scaled units (powers divided
// by a common scale so that values are O(1)). The discharge indicator is a
// continuous column in [0, 1] that branch-and-bound fixes per hour.
class DispatchModel {
public:
    DispatchModel(const DispatchInstance& instance, const SolverOptions& options);

    bool has_battery() const { return battery_; }
    std::size_t hours() const { return hours_; }

    // nullopt releases the hour back to the relaxation.
    void fix_discharge(std::size_t hour, std::optional<bool> discharging);

    lp::Solution solve_relaxation() const;

    // Trajectories in MW/MWh, cleaned of solver noise and re-balanced so the
    // definitional splits hold to rounding.
    Trajectories extract(const lp::Solution& solution) const;

    // Per-hour min(p_b^l, p^b) in MW.
    std::vector<double> simultaneity(const lp::Solution& solution) const;

private:
    struct HourColumns {
        int grid_to_load = -1;
        int solar_to_load = -1;
        int battery_to_load = -1;
        int solar_to_battery = -1;
        int grid_to_battery = -1;
        int curtailed = -1;
        int grid_total = -1;
        int charge = -1;
        int energy = -1;
        int delta = -1;
        int slack_discharge = -1;
        int slack_charge = -1;
    };

    const DispatchInstance& instance_;
    SolverOptions options_;
    bool battery_ = false;
    std::size_t hours_ = 0;
    double scale_ = 1.0;
    double max_power_ = 0.0;  // scaled
    lp::Problem problem_;
    std::vector<HourColumns> cols_;
    std::vector<std::optional<bool>> fixed_;
};

}  // namespace mgdeploy::detail
