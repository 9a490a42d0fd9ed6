#pragma once

#include <optional>
#include <string>

namespace mgdeploy {

inline constexpr double kFullFleetVehicles = 1825.0;
inline constexpr double kPartialFleetVehicles = 1087.0;
inline constexpr double kPartialFleetVmtPerVehicle = 84932.0;

// C_base - C_renew in kg; rejects c_renew > c_base.
double co2_removed(double c_base_kg, double c_renew_kg);

struct UtilityInputs {
    double occ_pv_usd = 0.0;
    double occ_batt_usd = 0.0;
    double tec_usd_per_mwh = 0.0;
    double annual_load_mwh = 0.0;
    double solar_life_years = 30.0;
    double battery_cycles_eol = 0.0;  // unused when cycles_per_year is 0
    double cycles_per_year = 0.0;
};

struct UtilityTco {
    double tco_usd = 0.0;
    double years_op = 0.0;
};

UtilityTco utility_tco(const UtilityInputs& in);

// nullopt means undefined (nothing removed).
std::optional<double> utility_metric(double tco_usd, double kg_removed);

enum class FleetEnergy { electricity, diesel };

struct FleetParams {
    FleetEnergy energy = FleetEnergy::electricity;
    double n_veh = 0.0;
    double msrp = 0.0;
    double registration = 0.0;
    double subsidy = 0.0;
    double insurance = 0.0;           // per vehicle-year
    double maintenance_per_mile = 0.0;
    double residual_frac = 0.0;       // eta
    double years_op = 5.0;
    double vmt_total = 0.0;           // fleet miles per year
    double penalty_per_mile = 0.0;
    double fuel_per_mile = 0.0;       // diesel only

    void validate() const;
};

FleetParams electric_fleet(double n_veh, double vmt_total);
FleetParams diesel_fleet(double n_veh, double vmt_total);

struct FleetTco {
    double tco_usd = 0.0;
    bool negative_initial_cost = false;  // subsidy exceeds MSRP + registration
};

// tec and annual_load_mwh are ignored for diesel fleets.
FleetTco fleet_tco(const FleetParams& p, double tec_usd_per_mwh, double annual_load_mwh);

double fleet_cost_per_mile(double tco_usd, double vmt_total, double years_op, double penalty_per_mile);
double fleet_cost_per_mile(const FleetParams& p, double tec_usd_per_mwh, double annual_load_mwh);

// Per-vehicle annual mileage at which a diesel fleet reaches the target $/mile.
double calibrate_vehicle_vmt(const FleetParams& diesel, double target_per_mile);

// MWh per mile at which an electric fleet buying energy at tec reaches the target $/mile.
double calibrate_energy_intensity(const FleetParams& electric, double tec_usd_per_mwh, double target_per_mile);

std::string to_string(FleetEnergy e);

}  // namespace mgdeploy
