#include "dispatch_model.hpp"

#include <algorithm>
#include <cmath>

namespace mgdeploy::detail {

namespace {

constexpr double kInf = lp::kInfinity;

}  // namespace

DispatchModel::DispatchModel(const DispatchInstance& instance, const SolverOptions& options)
    : instance_(instance),
      options_(options),
      battery_(instance.battery.present()),
      hours_(instance.hours()),
      cols_(instance.hours()),
      fixed_(instance.hours())
{
    const auto& bat = instance.battery;
    scale_ = std::max({instance.load.max(), instance.solar.max(), bat.max_power_mw()});
    if (!(scale_ > 0.0)) scale_ = 1.0;
    max_power_ = bat.max_power_mw() / scale_;

    // Emission weight per MW of grid draw, normalized to at most 1.
    std::vector<double> weight(hours_, 0.0);
    double wmax = 0.0;
    for (std::size_t t = 0; t < hours_; ++t) {
        if (instance.load[t] > kZeroLoadThresholdMw) {
            weight[t] = instance.carbon[t] / instance.load[t];
            wmax = std::max(wmax, weight[t]);
        }
    }
    if (wmax > 0.0)
        for (double& w : weight) w /= wmax;
    const double eps = options.tie_break_epsilon;

    const double e_min = bat.soc_min_frac * bat.rated_energy_mwh / scale_;
    const double e_max = bat.soc_max_frac * bat.rated_energy_mwh / scale_;
    const double e_init = bat.initial_soc_frac * bat.rated_energy_mwh / scale_;
    const double mu = bat.roundtrip_efficiency;

    for (std::size_t t = 0; t < hours_; ++t) {
        auto& c = cols_[t];
        const bool zero_load = instance.load[t] <= kZeroLoadThresholdMw;
        const double grid_cap = zero_load ? 0.0 : kInf;
        const double load = zero_load ? 0.0 : instance.load[t] / scale_;
        const double solar = instance.solar[t] / scale_;

        c.grid_to_load = problem_.add_column(0.0, 0.0, grid_cap);
        c.solar_to_load = problem_.add_column(0.0, 0.0, kInf);
        c.curtailed = problem_.add_column(0.0, 0.0, kInf);
        c.grid_total = problem_.add_column(weight[t] + eps, 0.0, grid_cap);

        // p_s = p_s^l + p_s^b + p_s^curtail
        const int solar_row = problem_.add_row(solar);
        problem_.add_entry(solar_row, c.solar_to_load, 1.0);
        problem_.add_entry(solar_row, c.curtailed, 1.0);
        // p_g = p_g^b + p_g^l
        const int grid_row = problem_.add_row(0.0);
        problem_.add_entry(grid_row, c.grid_total, 1.0);
        problem_.add_entry(grid_row, c.grid_to_load, -1.0);
        // p^l = p_s^l + p_b^l + p_g^l
        const int load_row = problem_.add_row(load);
        problem_.add_entry(load_row, c.solar_to_load, 1.0);
        problem_.add_entry(load_row, c.grid_to_load, 1.0);

        if (!battery_) continue;

        c.battery_to_load = problem_.add_column(0.0, 0.0, kInf);
        c.solar_to_battery = problem_.add_column(0.0, 0.0, kInf);
        c.grid_to_battery = problem_.add_column(0.0, 0.0, grid_cap);
        c.charge = problem_.add_column(eps, 0.0, kInf);
        const bool last = (t + 1 == hours_);
        // Cyclic boundary: the final state equals the initial state.
        c.energy = last ? problem_.add_column(0.0, e_init, e_init) : problem_.add_column(0.0, e_min, e_max);
        c.delta = problem_.add_column(0.0, 0.0, 1.0);
        c.slack_discharge = problem_.add_column(0.0, 0.0, kInf);
        c.slack_charge = problem_.add_column(0.0, 0.0, kInf);

        problem_.add_entry(solar_row, c.solar_to_battery, 1.0);
        problem_.add_entry(grid_row, c.grid_to_battery, -1.0);
        problem_.add_entry(load_row, c.battery_to_load, 1.0);

        // p^b = p_s^b + p_g^b
        const int charge_row = problem_.add_row(0.0);
        problem_.add_entry(charge_row, c.charge, 1.0);
        problem_.add_entry(charge_row, c.solar_to_battery, -1.0);
        problem_.add_entry(charge_row, c.grid_to_battery, -1.0);

        // E(t) = E(t-1) + mu p^b(t) - p_b^l(t), E(0) = initial state
        const int energy_row = problem_.add_row(t == 0 ? e_init : 0.0);
        problem_.add_entry(energy_row, c.energy, 1.0);
        if (t > 0) problem_.add_entry(energy_row, cols_[t - 1].energy, -1.0);
        problem_.add_entry(energy_row, c.charge, -mu);
        problem_.add_entry(energy_row, c.battery_to_load, 1.0);

        // p_b^l <= delta p_max ; p^b <= (1 - delta) p_max
        const int dis_row = problem_.add_row(0.0);
        problem_.add_entry(dis_row, c.battery_to_load, 1.0);
        problem_.add_entry(dis_row, c.delta, -max_power_);
        problem_.add_entry(dis_row, c.slack_discharge, 1.0);
        const int chg_row = problem_.add_row(max_power_);
        problem_.add_entry(chg_row, c.charge, 1.0);
        problem_.add_entry(chg_row, c.delta, max_power_);
        problem_.add_entry(chg_row, c.slack_charge, 1.0);
    }
}

void DispatchModel::fix_discharge(std::size_t hour, std::optional<bool> discharging)
{
    if (!battery_) return;
    const auto& c = cols_[hour];
    fixed_[hour] = discharging;
    const double grid_cap = instance_.load[hour] <= kZeroLoadThresholdMw ? 0.0 : kInf;
    // Reset to the relaxation, then close the side the indicator excludes.
    problem_.set_bounds(c.delta, 0.0, 1.0);
    problem_.set_bounds(c.battery_to_load, 0.0, kInf);
    problem_.set_bounds(c.slack_discharge, 0.0, kInf);
    problem_.set_bounds(c.charge, 0.0, kInf);
    problem_.set_bounds(c.solar_to_battery, 0.0, kInf);
    problem_.set_bounds(c.grid_to_battery, 0.0, grid_cap);
    problem_.set_bounds(c.slack_charge, 0.0, kInf);
    if (!discharging) return;
    if (*discharging) {
        problem_.set_bounds(c.delta, 1.0, 1.0);
        problem_.set_bounds(c.charge, 0.0, 0.0);
        problem_.set_bounds(c.solar_to_battery, 0.0, 0.0);
        problem_.set_bounds(c.grid_to_battery, 0.0, 0.0);
        problem_.set_bounds(c.slack_charge, 0.0, 0.0);
    } else {
        problem_.set_bounds(c.delta, 0.0, 0.0);
        problem_.set_bounds(c.battery_to_load, 0.0, 0.0);
        problem_.set_bounds(c.slack_discharge, 0.0, 0.0);
    }
}

lp::Solution DispatchModel::solve_relaxation() const
{
    lp::Options opt;
    opt.tolerance = options_.lp_tolerance;
    return lp::solve(problem_, opt);
}

std::vector<double> DispatchModel::simultaneity(const lp::Solution& s) const
{
    std::vector<double> out(hours_, 0.0);
    if (!battery_) return out;
    for (std::size_t t = 0; t < hours_; ++t)
        out[t] = std::min(s.x[cols_[t].battery_to_load], s.x[cols_[t].charge]) * scale_;
    return out;
}

Trajectories DispatchModel::extract(const lp::Solution& s) const
{
    Trajectories tr(hours_);
    const auto& bat = instance_.battery;
    // Values this far below the feasibility tolerance are interior-point noise.
    const double snap = 0.1 * options_.feasibility_tol;
    auto value = [&](int col) {
        if (col < 0) return 0.0;
        const double v = s.x[col] * scale_;
        return v < snap ? 0.0 : v;
    };
    const double e_min = bat.soc_min_frac * bat.rated_energy_mwh;
    const double e_max = bat.soc_max_frac * bat.rated_energy_mwh;

    for (std::size_t t = 0; t < hours_; ++t) {
        const auto& c = cols_[t];
        const double load = instance_.load[t] <= kZeroLoadThresholdMw ? 0.0 : instance_.load[t];
        const double solar = instance_.solar[t];
        const bool zero_load = load == 0.0;

        double s_l = zero_load ? 0.0 : value(c.solar_to_load);
        double b_l = zero_load ? 0.0 : value(c.battery_to_load);
        double s_b = value(c.solar_to_battery);
        double g_b = zero_load ? 0.0 : value(c.grid_to_battery);
        if (fixed_[t]) {
            if (*fixed_[t]) s_b = g_b = 0.0;
            else b_l = 0.0;
        }

        // Solar split must not exceed availability.
        double over = s_l + s_b - solar;
        if (over > 0.0) {
            const double cut = std::min(s_b, over);
            s_b -= cut;
            s_l = std::max(0.0, s_l - (over - cut));
        }
        // Load balance closes on the grid; never negative.
        double g_l = load - s_l - b_l;
        if (g_l < 0.0) {
            const double cut = std::min(b_l, -g_l);
            b_l -= cut;
            s_l = std::max(0.0, s_l - (-g_l - cut));
            g_l = std::max(0.0, load - s_l - b_l);
        }
        if (battery_ && !fixed_[t] && std::min(b_l, s_b + g_b) > 0.0 &&
            std::min(b_l, s_b + g_b) <= options_.feasibility_tol) {
            // Net a sub-tolerance overlap into the dominant direction, keeping
            // the stored energy and the load balance unchanged.
            const double mu = bat.roundtrip_efficiency;
            if (b_l >= mu * (s_b + g_b)) {
                b_l -= mu * (s_b + g_b);
                s_l += mu * s_b;
                g_l += mu * g_b;
                s_b = g_b = 0.0;
            } else {
                double need = b_l / mu;
                const double from_grid = std::min(g_b, need);
                g_b -= from_grid;
                need -= from_grid;
                s_b = std::max(0.0, s_b - need);
                s_l += b_l - mu * from_grid;
                g_l += mu * from_grid;
                b_l = 0.0;
            }
        }
        if (!zero_load && g_l < snap && s_l + b_l > 0.0) {
            // Fold residual grid noise into the larger supplier.
            if (s_l + s_b + g_l <= solar) {
                s_l = load - b_l;
                g_l = 0.0;
            } else if (b_l > 0.0) {
                b_l = load - s_l;
                g_l = 0.0;
            }
        }

        tr.solar_to_load[t] = s_l;
        tr.battery_to_load[t] = b_l;
        tr.solar_to_battery[t] = s_b;
        tr.grid_to_battery[t] = g_b;
        tr.grid_to_load[t] = g_l;
        tr.solar_curtailed[t] = std::max(0.0, solar - s_l - s_b);
        tr.grid_total[t] = g_b + g_l;
        tr.battery_charge[t] = s_b + g_b;
        if (battery_) {
            tr.battery_energy[t] = std::clamp(s.x[c.energy] * scale_, e_min, e_max);
            if (fixed_[t]) tr.discharging[t] = *fixed_[t] ? 1 : 0;
            else tr.discharging[t] = b_l > tr.battery_charge[t] ? 1 : 0;
        }
    }
    if (battery_ && hours_ > 0) tr.battery_energy[hours_ - 1] = bat.initial_soc_frac * bat.rated_energy_mwh;
    return tr;
}

}  // namespace mgdeploy::detail
