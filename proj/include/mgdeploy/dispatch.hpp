#pragma once

#include "mgdeploy/profiles.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace mgdeploy {

struct BatterySpec {
    double rated_energy_mwh = 0.0;  // 0 means no battery
    double duration_h = 4.0;
    double roundtrip_efficiency = 0.85;
    double soc_min_frac = 0.1;
    double soc_max_frac = 0.9;
    double initial_soc_frac = 0.5;

    bool present() const { return rated_energy_mwh > 0.0; }
    double max_power_mw() const { return present() ? rated_energy_mwh / duration_h : 0.0; }
    double usable_energy_mwh() const { return (soc_max_frac - soc_min_frac) * rated_energy_mwh; }
    void validate() const;
};

// Validated optimization inputs. Use build_instance() to construct.
struct DispatchInstance {
    HourlyProfile load;    // MW
    HourlyProfile solar;   // MW available
    HourlyProfile carbon;  // kg CO2 per hour attributable to the load
    BatterySpec battery;

    std::size_t hours() const { return load.hours(); }
};

DispatchInstance build_instance(HourlyProfile load, HourlyProfile solar, HourlyProfile carbon, BatterySpec battery);

enum class SolveStatus { proven_optimal, gap_limited, infeasible };
std::string to_string(SolveStatus s);

struct SolverOptions {
    double relative_gap = 1e-4;
    double time_limit_s = 300.0;
    std::string backend = "builtin";
    double feasibility_tol = 1e-6;   // MW / MWh
    double integrality_tol = 1e-5;
    double tie_break_epsilon = 1e-6;  // per MWh, relative to the largest emission weight
    double lp_tolerance = 1e-10;
    long max_nodes = 200000;
};

// Hourly decision trajectories; index t is hour t+1.
struct Trajectories {
    std::vector<double> grid_to_load;       // p_g^l
    std::vector<double> solar_to_load;      // p_s^l
    std::vector<double> battery_to_load;    // p_b^l
    std::vector<double> solar_to_battery;   // p_s^b
    std::vector<double> grid_to_battery;    // p_g^b
    std::vector<double> solar_curtailed;    // p_s^curtail
    std::vector<double> grid_total;         // p_g
    std::vector<double> battery_charge;     // p^b
    std::vector<double> battery_energy;     // E_b at the end of the hour
    std::vector<std::uint8_t> discharging;  // delta_b

    explicit Trajectories(std::size_t hours = 0);
    std::size_t hours() const { return grid_to_load.size(); }
};

struct Utilization {
    double f_grid = 0.0;
    double f_solar = 0.0;
    double f_batt_dchg = 0.0;
    double f_chg_grid = 0.0;
    double f_chg_solar = 0.0;
    bool battery_charged = false;  // false -> charging fractions reported as (0, 0)
    std::size_t positive_load_hours = 0;
    std::size_t charging_hours = 0;
};

struct DispatchResult {
    Trajectories trajectories;
    double objective_percent = 0.0;  // J
    double c_base_kg = 0.0;
    double c_renew_kg = 0.0;
    Utilization utilization;
    std::size_t positive_load_hours = 0;
    SolveStatus status = SolveStatus::infeasible;
    double gap = 0.0;
    long nodes = 0;
    std::string backend;
};

double baseline_emissions(const HourlyProfile& carbon);

// Sum over hours with nonzero load of (p_g / p_l) * C_g.
double renewable_emissions(const Trajectories& traj, const DispatchInstance& instance);

// Throws ValidationError("undefined utilization") when no hour has load.
Utilization utilization(const Trajectories& traj, const DispatchInstance& instance);

// Equivalent full cycles per year over the usable SOC window.
double count_cycles(const Trajectories& traj, const BatterySpec& battery);

DispatchResult solve_dispatch(const DispatchInstance& instance, const SolverOptions& options = {});

// Worst violations of the per-hour physical constraints of a result.
struct InvariantReport {
    double max_balance_residual = 0.0;   // solar split, charge split, grid split, load balance
    double max_energy_residual = 0.0;    // SOC recursion
    double cyclic_residual = 0.0;        // |E(T) - E(0)|
    double max_soc_violation = 0.0;      // distance outside the SOC window
    double max_simultaneous = 0.0;       // max_t p_b^l * p^b
    double max_zero_load_grid = 0.0;     // grid draw at zero-load hours
    double min_value = 0.0;              // most negative power sample
    bool delta_consistent = true;        // discharge only with delta = 1, charge only with delta = 0

    bool ok(double tol = 1e-6) const;
};
InvariantReport check_invariants(const Trajectories& traj, const DispatchInstance& instance);

// Pluggable solver backends. "builtin" is the LP-relaxation plus
// branch-and-bound solver; others can be registered at startup.
using DispatchBackend = std::function<DispatchResult(const DispatchInstance&, const SolverOptions&)>;
void register_dispatch_backend(const std::string& name, DispatchBackend backend);
std::vector<std::string> dispatch_backends();

// Fills J, emissions and utilization from trajectories.
void finalize_metrics(DispatchResult& result, const DispatchInstance& instance);

void write_trajectories_csv(std::ostream& out, const Trajectories& traj);
Trajectories read_trajectories_csv(std::istream& in);
std::string dispatch_summary_json(const DispatchResult& result, const DispatchInstance& instance);

}  // namespace mgdeploy
