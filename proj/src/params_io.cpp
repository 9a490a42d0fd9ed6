#include "mgdeploy/params.hpp"

#include "mgdeploy/errors.hpp"
#include "mgdeploy/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

namespace mgdeploy {

namespace {

using json = nlohmann::json;

json parse(const std::string& text, const char* what)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, T& into)
{
    if (!obj.contains(key)) return;
    try {
        into = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("bad value for '") + key + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, std::optional<T>& into)
{
    if (!obj.contains(key) || obj.at(key).is_null()) return;
    T v{};
    read(obj, key, v);
    into = v;
}

ChemistryParams parse_chemistry(const json& j)
{
    check_keys(j,
               {"name", "pack_cost_usd_per_kwh", "cycles_eol", "cell_nominal_voltage", "cell_capacity_ah",
                "pack_voltage_target"},
               "chemistry");
    if (!j.contains("name")) throw ValidationError("chemistry entry needs a name");
    ChemistryParams c;
    std::string name = j.at("name").get<std::string>();
    try {
        c = default_chemistry(name);
    } catch (const ValidationError&) {
        c.name = name;
    }
    read(j, "pack_cost_usd_per_kwh", c.pack_cost_usd_per_kwh);
    read(j, "cycles_eol", c.cycles_eol);
    read(j, "cell_nominal_voltage", c.cell_nominal_voltage);
    read(j, "cell_capacity_ah", c.cell_capacity_ah);
    read(j, "pack_voltage_target", c.pack_voltage_target);
    c.validate();
    return c;
}

void parse_fleet_params(const json& j, FleetParams& p, const std::string& where)
{
    check_keys(j,
               {"msrp", "registration", "subsidy", "insurance", "maintenance_per_mile", "residual_frac", "years_op",
                "penalty_per_mile", "fuel_per_mile"},
               where);
    read(j, "msrp", p.msrp);
    read(j, "registration", p.registration);
    read(j, "subsidy", p.subsidy);
    read(j, "insurance", p.insurance);
    read(j, "maintenance_per_mile", p.maintenance_per_mile);
    read(j, "residual_frac", p.residual_frac);
    read(j, "years_op", p.years_op);
    read(j, "penalty_per_mile", p.penalty_per_mile);
    read(j, "fuel_per_mile", p.fuel_per_mile);
    p.validate();
}

std::string upper(std::string s)
{
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

const ChemistryParams& CostConfig::chemistry(const std::string& name) const
{
    std::string key = upper(name);
    if (key == "NMC") key = "NMC811";
    for (const auto& c : chemistries)
        if (upper(c.name) == key) return c;
    throw ValidationError("unknown chemistry '" + name + "'");
}

CostConfig parse_cost_config(const std::string& json_text)
{
    const json j = parse(json_text, "cost parameters");
    check_keys(j, {"chemistries", "stack", "solar_cost_per_wdc", "gep", "solar_life_years", "fleet"},
               "cost parameters");
    CostConfig cfg;
    if (j.contains("chemistries")) {
        for (const auto& e : j.at("chemistries")) {
            const ChemistryParams c = parse_chemistry(e);
            auto it = std::find_if(cfg.chemistries.begin(), cfg.chemistries.end(),
                                   [&](const ChemistryParams& x) { return upper(x.name) == upper(c.name); });
            if (it != cfg.chemistries.end()) *it = c;
            else cfg.chemistries.push_back(c);
        }
    }
    if (j.contains("stack")) {
        const json& s = j.at("stack");
        check_keys(s,
                   {"sbos_frac", "pcs_usd_per_kw", "cnc_knots", "integration_frac", "epc_frac", "projdev_frac",
                    "grid_integration_frac"},
                   "stack");
        read(s, "sbos_frac", cfg.stack.sbos_frac);
        read(s, "pcs_usd_per_kw", cfg.stack.pcs_usd_per_kw);
        read(s, "cnc_knots", cfg.stack.cnc_knots);
        read(s, "integration_frac", cfg.stack.integration_frac);
        read(s, "epc_frac", cfg.stack.epc_frac);
        read(s, "projdev_frac", cfg.stack.projdev_frac);
        read(s, "grid_integration_frac", cfg.stack.grid_integration_frac);
        cfg.stack.validate();
    }
    read(j, "solar_cost_per_wdc", cfg.solar_cost_per_wdc);
    read(j, "gep", cfg.gep);
    read(j, "solar_life_years", cfg.solar_life_years);
    if (cfg.solar_cost_per_wdc && !(*cfg.solar_cost_per_wdc > 0.0))
        throw ValidationError("solar_cost_per_wdc must be positive");
    if (!(cfg.gep >= 0.0)) throw ValidationError("gep must be non-negative");
    if (!(cfg.solar_life_years > 0.0)) throw ValidationError("solar_life_years must be positive");

    if (j.contains("fleet")) {
        const json& f = j.at("fleet");
        check_keys(f,
                   {"vmt_per_vehicle", "vehicles", "partial_vehicles", "partial_vmt_per_vehicle", "electric", "diesel"},
                   "fleet");
        read(f, "vmt_per_vehicle", cfg.fleet.vmt_per_vehicle);
        double vehicles = cfg.fleet.electric.n_veh;
        read(f, "vehicles", vehicles);
        cfg.fleet.electric.n_veh = cfg.fleet.diesel.n_veh = vehicles;
        read(f, "partial_vehicles", cfg.fleet.partial_vehicles);
        read(f, "partial_vmt_per_vehicle", cfg.fleet.partial_vmt_per_vehicle);
        if (f.contains("electric")) parse_fleet_params(f.at("electric"), cfg.fleet.electric, "fleet.electric");
        if (f.contains("diesel")) parse_fleet_params(f.at("diesel"), cfg.fleet.diesel, "fleet.diesel");
        if (cfg.fleet.vmt_per_vehicle && !(*cfg.fleet.vmt_per_vehicle > 0.0))
            throw ValidationError("fleet.vmt_per_vehicle must be positive");
        if (!(vehicles > 0.0 && cfg.fleet.partial_vehicles > 0.0 && cfg.fleet.partial_vmt_per_vehicle > 0.0))
            throw ValidationError("fleet sizes and mileages must be positive");
    }
    return cfg;
}

CostConfig load_cost_config(const std::string& path) { return parse_cost_config(read_text_file(path)); }

SolverOptions parse_solver_options(const std::string& json_text)
{
    const json j = parse(json_text, "solver options");
    check_keys(j, {"relative_gap", "time_limit_s", "backend", "feasibility_tol", "max_nodes"}, "solver");
    SolverOptions o;
    read(j, "relative_gap", o.relative_gap);
    read(j, "time_limit_s", o.time_limit_s);
    read(j, "backend", o.backend);
    read(j, "feasibility_tol", o.feasibility_tol);
    read(j, "max_nodes", o.max_nodes);
    if (!(o.relative_gap >= 0.0 && o.time_limit_s > 0.0 && o.feasibility_tol > 0.0 && o.max_nodes > 0))
        throw ValidationError("solver options out of range");
    return o;
}

BatterySpec battery_with_energy(double rated_energy_mwh, double duration_h)
{
    BatterySpec b;
    b.rated_energy_mwh = rated_energy_mwh;
    b.duration_h = duration_h;
    b.validate();
    return b;
}

}  // namespace mgdeploy
