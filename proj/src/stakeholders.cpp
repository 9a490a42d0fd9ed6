#include "mgdeploy/stakeholders.hpp"

#include "mgdeploy/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mgdeploy {

double co2_removed(double c_base_kg, double c_renew_kg)
{
    if (!(c_base_kg >= 0.0 && c_renew_kg >= 0.0)) throw ValidationError("emissions must be non-negative");
    const double diff = c_base_kg - c_renew_kg;
    // Solver round-off may leave C_renew a hair above C_base.
    if (diff < -1e-9 * std::max(1.0, c_base_kg))
        throw ValidationError("renewable emissions exceed baseline emissions");
    return std::max(0.0, diff);
}

UtilityTco utility_tco(const UtilityInputs& in)
{
    for (double v : {in.occ_pv_usd, in.occ_batt_usd, in.tec_usd_per_mwh, in.annual_load_mwh, in.battery_cycles_eol,
                     in.cycles_per_year})
        if (!(v >= 0.0)) throw ValidationError("utility inputs must be non-negative");
    if (!(in.solar_life_years > 0.0)) throw ValidationError("solar life must be positive");
    double years = in.solar_life_years;
    if (in.cycles_per_year > 0.0) years = std::min(years, in.battery_cycles_eol / in.cycles_per_year);
    return {in.occ_pv_usd + in.occ_batt_usd + in.tec_usd_per_mwh * in.annual_load_mwh * years, years};
}

std::optional<double> utility_metric(double tco_usd, double kg_removed)
{
    if (!(kg_removed >= 0.0)) throw ValidationError("removed emissions must be non-negative");
    if (kg_removed == 0.0) return std::nullopt;
    return tco_usd / kg_removed;
}

void FleetParams::validate() const
{
    for (double v : {n_veh, msrp, registration, subsidy, insurance, maintenance_per_mile, years_op, vmt_total,
                     penalty_per_mile, fuel_per_mile})
        if (!(v >= 0.0)) throw ValidationError("fleet parameters must be non-negative");
    if (!(residual_frac >= 0.0 && residual_frac <= 1.0)) throw ValidationError("residual fraction must be in [0, 1]");
}

FleetParams electric_fleet(double n_veh, double vmt_total)
{
    FleetParams p;
    p.energy = FleetEnergy::electricity;
    p.n_veh = n_veh;
    p.msrp = 334313.0;
    p.registration = 1500.0;
    p.subsidy = 40000.0;
    p.insurance = 11700.0;
    p.maintenance_per_mile = 0.055;
    p.residual_frac = 0.25;
    p.vmt_total = vmt_total;
    p.penalty_per_mile = 0.5;
    return p;
}

FleetParams diesel_fleet(double n_veh, double vmt_total)
{
    FleetParams p;
    p.energy = FleetEnergy::diesel;
    p.n_veh = n_veh;
    p.msrp = 133841.0;
    p.registration = 1500.0;
    p.subsidy = 0.0;
    p.insurance = 8000.0;
    p.maintenance_per_mile = 0.086;
    p.residual_frac = 0.35;
    p.vmt_total = vmt_total;
    p.fuel_per_mile = 0.68;
    return p;
}

namespace {

double vehicle_cost(const FleetParams& p)
{
    return (1.0 - p.residual_frac) * p.msrp + p.registration - p.subsidy + p.insurance * p.years_op;
}

}  // namespace

FleetTco fleet_tco(const FleetParams& p, double tec_usd_per_mwh, double annual_load_mwh)
{
    p.validate();
    FleetTco out;
    out.negative_initial_cost = p.subsidy > p.msrp + p.registration;
    out.tco_usd = p.n_veh * vehicle_cost(p) + p.maintenance_per_mile * p.vmt_total * p.years_op;
    if (p.energy == FleetEnergy::diesel) {
        out.tco_usd += p.fuel_per_mile * p.vmt_total * p.years_op;
    } else {
        if (!(tec_usd_per_mwh >= 0.0 && annual_load_mwh >= 0.0))
            throw ValidationError("electricity cost and load must be non-negative");
        out.tco_usd += tec_usd_per_mwh * annual_load_mwh * p.years_op;
    }
    return out;
}

double fleet_cost_per_mile(double tco_usd, double vmt_total, double years_op, double penalty_per_mile)
{
    if (!(vmt_total * years_op > 0.0)) throw ValidationError("zero fleet mileage");
    return tco_usd / (vmt_total * years_op) + penalty_per_mile;
}

double fleet_cost_per_mile(const FleetParams& p, double tec_usd_per_mwh, double annual_load_mwh)
{
    return fleet_cost_per_mile(fleet_tco(p, tec_usd_per_mwh, annual_load_mwh).tco_usd, p.vmt_total, p.years_op,
                               p.penalty_per_mile);
}

double calibrate_vehicle_vmt(const FleetParams& diesel, double target_per_mile)
{
    diesel.validate();
    if (diesel.energy != FleetEnergy::diesel) throw ValidationError("mileage calibration expects a diesel fleet");
    const double per_mile = diesel.maintenance_per_mile + diesel.fuel_per_mile + diesel.penalty_per_mile;
    const double margin = target_per_mile - per_mile;
    if (!(margin > 0.0) || !(diesel.years_op > 0.0))
        throw ValidationError("target $/mile is not above the per-mile running cost");
    return vehicle_cost(diesel) / (diesel.years_op * margin);
}

double calibrate_energy_intensity(const FleetParams& electric, double tec_usd_per_mwh, double target_per_mile)
{
    electric.validate();
    if (electric.energy != FleetEnergy::electricity)
        throw ValidationError("energy-intensity calibration expects an electric fleet");
    if (!(tec_usd_per_mwh > 0.0)) throw ValidationError("electricity cost must be positive");
    const double without_energy = fleet_cost_per_mile(electric, 0.0, 0.0);
    const double intensity = (target_per_mile - without_energy) / tec_usd_per_mwh;
    if (!(intensity >= 0.0)) throw ValidationError("target $/mile is below the non-energy cost");
    return intensity;
}

std::string to_string(FleetEnergy e) { return e == FleetEnergy::diesel ? "diesel" : "electric"; }

}  // namespace mgdeploy
