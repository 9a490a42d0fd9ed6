#pragma once

#include "mgdeploy/profiles.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mgdeploy {

inline constexpr double kDefaultGridPrice = 160.0;  // $/MWh
inline constexpr double kSolarLifeYears = 30.0;
inline constexpr double kDefaultDurationHours = 4.0;

// Module layout: 2 parallel strings of modules, 10 per row, 4 rows.
inline constexpr int kModuleStrings = 2;
inline constexpr int kModulesPerRow = 10;
inline constexpr int kModuleRows = 4;
inline constexpr int kSeriesModules = kModulesPerRow * kModuleRows / kModuleStrings;

struct ChemistryParams {
    std::string name;
    double pack_cost_usd_per_kwh = 0.0;
    double cycles_eol = 0.0;
    double cell_nominal_voltage = 0.0;
    double cell_capacity_ah = 15.0;
    double pack_voltage_target = 800.0;

    void validate() const;
};

// "NMC811" (alias "NMC"), "NCA", "LFP"; case-insensitive.
ChemistryParams default_chemistry(const std::string& name);
std::vector<ChemistryParams> default_chemistries();

struct BatteryPackSpec {
    double rated_energy_mwh = 0.0;
    std::string chemistry;
    long cells_parallel = 0;      // N_p
    long series_per_module = 0;
    long cells_per_module = 0;    // N_total_module
    double rated_power_mw = 0.0;
};

BatteryPackSpec configure_pack(double rated_energy_mwh, const ChemistryParams& chem,
                               double duration_h = kDefaultDurationHours);

struct CostStackParams {
    double sbos_frac = 0.23;
    double pcs_usd_per_kw = 45.0;
    // (MW, $/kW) knots for controls and communication, linear in between.
    std::vector<std::pair<double, double>> cnc_knots{{1.0, 3.9}, {10.0, 7.8}, {100.0, 10.374}};
    double integration_frac = 0.05;
    double epc_frac = 0.20;
    double projdev_frac = 0.20;
    double grid_integration_frac = 0.015;

    void validate() const;
};

struct CncRate {
    double usd_per_kw = 0.0;
    bool clamped = false;
};
CncRate cnc_rate(double power_mw, const CostStackParams& stack);

struct CostLine {
    std::string item;
    double amount_usd = 0.0;
    double running_total_usd = 0.0;
};

struct BatteryCapitalCost {
    std::vector<CostLine> lines;  // in stack order
    double total_usd = 0.0;
    double cnc_usd_per_kw = 0.0;
    bool cnc_clamped = false;
};

BatteryCapitalCost battery_capital_cost(const BatteryPackSpec& pack, const ChemistryParams& chem,
                                        const CostStackParams& stack);

double solar_capital_cost(double nameplate_mw, double cost_per_wdc);

// $/MWh of solar output over the operating life.
double lcopr(double occ_pv_usd, double years, const HourlyProfile& solar_mw);

double lcos(double occ_batt_usd, double cycles_eol, double rated_energy_mwh);

struct ChargingCost {
    double usd_per_mwh = 0.0;
    bool never_charged = false;
};
ChargingCost cost_of_charging(double f_chg_solar, double f_chg_grid, double lcopr_usd_per_mwh, double gep);

double total_electricity_cost(double f_solar, double f_batt, double f_grid, double lcopr_usd_per_mwh,
                              double lcos_usd_per_mwh, double coc_usd_per_mwh, double gep);

struct CostBreakdown {
    double occ_pv_usd = 0.0;
    std::optional<BatteryCapitalCost> battery;
    double lcopr_usd_per_mwh = 0.0;
    double lcos_usd_per_mwh = 0.0;
    double coc_usd_per_mwh = 0.0;
    double tec_usd_per_mwh = 0.0;
    bool never_charged = false;
};

std::string battery_cost_json(const BatteryPackSpec& pack, const BatteryCapitalCost& cost, double lcos_usd_per_mwh);

}  // namespace mgdeploy
