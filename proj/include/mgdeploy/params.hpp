#pragma once

#include "mgdeploy/costs.hpp"
#include "mgdeploy/dispatch.hpp"
#include "mgdeploy/stakeholders.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mgdeploy {

struct FleetConfig {
    FleetParams electric = electric_fleet(kFullFleetVehicles, 0.0);
    FleetParams diesel = diesel_fleet(kFullFleetVehicles, 0.0);
    std::optional<double> vmt_per_vehicle;  // full fleet; required for $/mile
    double partial_vehicles = kPartialFleetVehicles;
    double partial_vmt_per_vehicle = kPartialFleetVmtPerVehicle;
};

// Economic inputs shared by every sweep cell.
struct CostConfig {
    std::vector<ChemistryParams> chemistries = default_chemistries();
    CostStackParams stack;
    std::optional<double> solar_cost_per_wdc;  // required for solar costs
    double gep = kDefaultGridPrice;
    double solar_life_years = kSolarLifeYears;
    FleetConfig fleet;

    const ChemistryParams& chemistry(const std::string& name) const;
};

// Keys not present keep their defaults; unknown keys are rejected.
CostConfig parse_cost_config(const std::string& json_text);
CostConfig load_cost_config(const std::string& path);

SolverOptions parse_solver_options(const std::string& json_text);

BatterySpec battery_with_energy(double rated_energy_mwh, double duration_h = kDefaultDurationHours);

}  // namespace mgdeploy
