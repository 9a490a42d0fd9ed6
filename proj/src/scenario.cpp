#include "mgdeploy/scenario.hpp"

#include "mgdeploy/costs.hpp"
#include "mgdeploy/errors.hpp"
#include "mgdeploy/io.hpp"
#include "mgdeploy/siting.hpp"
#include "mgdeploy/stakeholders.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <ostream>
#include <sstream>

namespace mgdeploy {

namespace {

using json = nlohmann::json;

template <class T>
void require_nonempty(const std::vector<T>& v, const char* axis)
{
    if (v.empty()) throw ValidationError(std::string("sweep axis '") + axis + "' is empty");
}

}  // namespace

std::size_t SweepSpec::cell_count() const
{
    return sites.size() * nameplate_scales.size() * battery_mwh.size() * chemistries.size() * shift_hours.size();
}

void SweepSpec::validate() const
{
    require_nonempty(sites, "sites");
    require_nonempty(nameplate_scales, "nameplate_scales");
    require_nonempty(battery_mwh, "battery_mwh");
    require_nonempty(chemistries, "chemistries");
    require_nonempty(shift_hours, "shift_hours");
    if (load.unit() != Unit::megawatt) throw ValidationError("load profile must be in MW");
    if (carbon.unit() != Unit::kg_co2_per_hour) throw ValidationError("carbon profile must be in kg/h");
    if (carbon.hours() != load.hours()) throw ValidationError("load and carbon horizons differ");
    for (const auto& s : sites) {
        if (s.solar_cf.hours() != load.hours())
            throw ValidationError("site '" + s.name + "': solar horizon differs from load");
        if (s.solar_cf.unit() != Unit::capacity_factor)
            throw ValidationError("site '" + s.name + "': solar profile must be a capacity factor");
        if (!(s.nameplate_mw > 0.0)) throw ValidationError("site '" + s.name + "': nameplate must be positive");
    }
    for (double f : nameplate_scales)
        if (!(f > 0.0)) throw ValidationError("nameplate scales must be positive");
    for (double e : battery_mwh)
        if (!(e >= 0.0)) throw ValidationError("battery sizes must be non-negative");
    for (long h : shift_hours)
        if (static_cast<std::size_t>(std::labs(h)) >= load.hours())
            throw ValidationError("shift of " + std::to_string(h) + " h exceeds the horizon");
    for (const auto& c : chemistries) (void)costs.chemistry(c);
    if (!costs.solar_cost_per_wdc) throw ValidationError("solar_cost_per_wdc is required");
    if (!(battery_duration_h > 0.0)) throw ValidationError("battery duration must be positive");
}

SweepSpec parse_sweep_spec(const std::string& json_text, const std::filesystem::path& base_dir)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("sweep spec: ") + e.what());
    }
    static const char* allowed[] = {"hours",         "load",         "carbon",          "sites",
                                    "catalog",       "catalog_indices", "nameplate_scales", "battery_mwh",
                                    "chemistries",   "shift_hours",  "shift_carbon",    "battery_duration_h",
                                    "params",        "costs",        "solver",          "output_dir",
                                    "write_trajectories"};
    for (const auto& [key, v] : j.items())
        if (std::none_of(std::begin(allowed), std::end(allowed), [&](const char* a) { return key == a; }))
            throw ValidationError("sweep spec: unknown key '" + key + "'");

    auto path_of = [&](const std::string& key) {
        if (!j.contains(key)) throw ValidationError("sweep spec: missing '" + key + "'");
        std::filesystem::path p = j.at(key).get<std::string>();
        return p.is_absolute() ? p : base_dir / p;
    };

    try {
        SweepSpec spec;
        const std::size_t hours = j.value("hours", kHoursPerYear);
        spec.load = load_profile_file(path_of("load").string(), Unit::megawatt, hours);
        spec.carbon = load_profile_file(path_of("carbon").string(), Unit::kg_co2_per_hour, hours);

        if (j.contains("sites")) {
            for (const auto& s : j.at("sites")) {
                SiteInput site;
                site.name = s.at("name").get<std::string>();
                std::filesystem::path cf = s.at("solar_cf").get<std::string>();
                if (!cf.is_absolute()) cf = base_dir / cf;
                site.solar_cf = load_profile_file(cf.string(), Unit::capacity_factor, hours);
                site.nameplate_mw = s.at("nameplate_mw").get<double>();
                spec.sites.push_back(std::move(site));
            }
        }
        if (j.contains("catalog")) {
            const siting::SiteCatalog catalog = siting::catalog_from_json(read_text_file(path_of("catalog")));
            std::vector<std::size_t> pick;
            if (j.contains("catalog_indices")) pick = j.at("catalog_indices").get<std::vector<std::size_t>>();
            for (const auto& p : catalog.parcels) {
                if (!pick.empty() && std::find(pick.begin(), pick.end(), p.site_index) == pick.end()) continue;
                if (!p.representative_profile)
                    throw ValidationError("catalog site " + std::to_string(p.site_index) + " has no profile");
                if (p.representative_profile->hours() != hours)
                    throw ValidationError("catalog site " + std::to_string(p.site_index) + ": horizon mismatch");
                spec.sites.push_back({"site-" + std::to_string(p.site_index), *p.representative_profile,
                                      p.nameplate_mw});
            }
        }
        if (j.contains("nameplate_scales")) spec.nameplate_scales = j.at("nameplate_scales").get<std::vector<double>>();
        if (j.contains("battery_mwh")) spec.battery_mwh = j.at("battery_mwh").get<std::vector<double>>();
        if (j.contains("chemistries")) spec.chemistries = j.at("chemistries").get<std::vector<std::string>>();
        if (j.contains("shift_hours")) spec.shift_hours = j.at("shift_hours").get<std::vector<long>>();
        spec.shift_carbon = j.value("shift_carbon", true);
        spec.battery_duration_h = j.value("battery_duration_h", kDefaultDurationHours);
        if (j.contains("params") && j.contains("costs"))
            throw ValidationError("sweep spec: give either 'params' or 'costs', not both");
        if (j.contains("params")) spec.costs = load_cost_config(path_of("params").string());
        if (j.contains("costs")) spec.costs = parse_cost_config(j.at("costs").dump());
        if (j.contains("solver")) spec.solver = parse_solver_options(j.at("solver").dump());
        if (j.contains("output_dir")) spec.output_dir = path_of("output_dir");
        spec.write_trajectories = j.value("write_trajectories", false);
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("sweep spec: ") + e.what());
    }
}

SweepSpec load_sweep_spec(const std::filesystem::path& path)
{
    return parse_sweep_spec(read_text_file(path), path.parent_path());
}

std::string cell_key(const CellIndex& c)
{
    std::ostringstream os;
    os << "s" << c[0] << "_n" << c[1] << "_b" << c[2] << "_c" << c[3] << "_h" << c[4];
    return os.str();
}

ScenarioResult evaluate_cell(const SweepSpec& spec, const CellIndex& cell, DispatchResult* dispatch_out)
{
    const auto start = std::chrono::steady_clock::now();
    const SiteInput& site = spec.sites.at(cell[0]);
    ScenarioResult r;
    r.cell = cell;
    r.site = site.name;
    r.nameplate_mw = site.nameplate_mw * spec.nameplate_scales.at(cell[1]);
    r.battery_mwh = spec.battery_mwh.at(cell[2]);
    r.chemistry = spec.chemistries.at(cell[3]);
    r.shift_hours = spec.shift_hours.at(cell[4]);

    try {
        const auto load = shift_profile(spec.load, r.shift_hours);
        const auto carbon = spec.shift_carbon ? shift_profile(spec.carbon, r.shift_hours) : spec.carbon;
        const auto solar = available_capacity(site.solar_cf, r.nameplate_mw);
        BatterySpec battery = battery_with_energy(r.battery_mwh, spec.battery_duration_h);
        const auto inst = build_instance(load, solar, carbon, battery);

        DispatchResult d = solve_dispatch(inst, spec.solver);
        r.status = to_string(d.status);
        r.gap = d.gap;
        r.nodes = d.nodes;
        r.j_percent = d.objective_percent;
        r.c_base_kg = d.c_base_kg;
        r.c_renew_kg = d.c_renew_kg;
        const Utilization u = utilization(d.trajectories, inst);
        r.f_grid = u.f_grid;
        r.f_solar = u.f_solar;
        r.f_batt_dchg = u.f_batt_dchg;
        r.f_chg_grid = u.f_chg_grid;
        r.f_chg_solar = u.f_chg_solar;
        r.battery_charged = u.battery_charged;
        r.annual_load_mwh = load.sum();

        const CostConfig& cfg = spec.costs;
        const ChemistryParams& chem = cfg.chemistry(r.chemistry);
        r.occ_pv_usd = solar_capital_cost(r.nameplate_mw, *cfg.solar_cost_per_wdc);
        r.lcopr = lcopr(r.occ_pv_usd, cfg.solar_life_years, solar);
        double cycles = 0.0;
        if (battery.present()) {
            const auto pack = configure_pack(r.battery_mwh, chem, spec.battery_duration_h);
            r.occ_batt_usd = battery_capital_cost(pack, chem, cfg.stack).total_usd;
            r.lcos = lcos(r.occ_batt_usd, chem.cycles_eol, r.battery_mwh);
            cycles = count_cycles(d.trajectories, battery);
            r.cycles_per_year = cycles;
        }
        r.coc = cost_of_charging(u.f_chg_solar, u.f_chg_grid, r.lcopr, cfg.gep).usd_per_mwh;
        r.tec = total_electricity_cost(u.f_solar, u.f_batt_dchg, u.f_grid, r.lcopr, r.lcos, r.coc, cfg.gep);

        UtilityInputs ui;
        ui.occ_pv_usd = r.occ_pv_usd;
        ui.occ_batt_usd = r.occ_batt_usd;
        ui.tec_usd_per_mwh = r.tec;
        ui.annual_load_mwh = r.annual_load_mwh;
        ui.solar_life_years = cfg.solar_life_years;
        ui.battery_cycles_eol = chem.cycles_eol;
        ui.cycles_per_year = cycles;
        const UtilityTco tco = utility_tco(ui);
        r.utility_tco_usd = tco.tco_usd;
        r.years_op = tco.years_op;
        r.utility_usd_per_kg = utility_metric(tco.tco_usd, co2_removed(r.c_base_kg, r.c_renew_kg));

        if (cfg.fleet.vmt_per_vehicle) {
            FleetParams full = cfg.fleet.electric;
            full.vmt_total = full.n_veh * *cfg.fleet.vmt_per_vehicle;
            r.fleet_full_per_mile = fleet_cost_per_mile(full, r.tec, r.annual_load_mwh);
            FleetParams partial = cfg.fleet.electric;
            partial.n_veh = cfg.fleet.partial_vehicles;
            partial.vmt_total = cfg.fleet.partial_vehicles * cfg.fleet.partial_vmt_per_vehicle;
            // Partial-fleet energy scales with its share of fleet mileage.
            const double energy = r.annual_load_mwh * partial.vmt_total / full.vmt_total;
            r.fleet_partial_per_mile = fleet_cost_per_mile(partial, r.tec, energy);
        }
        if (dispatch_out) *dispatch_out = std::move(d);
    } catch (const SolverError& e) {
        r.status = "failed";
        r.error = e.what();
    } catch (const ValidationError& e) {
        r.status = "invalid";
        r.error = e.what();
    }
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<ScenarioResult> run_sweep(const SweepSpec& spec, const SweepOptions& options)
{
    spec.validate();
    std::vector<CellIndex> cells;
    for (std::size_t a = 0; a < spec.sites.size(); ++a)
        for (std::size_t b = 0; b < spec.nameplate_scales.size(); ++b)
            for (std::size_t c = 0; c < spec.battery_mwh.size(); ++c)
                for (std::size_t d = 0; d < spec.chemistries.size(); ++d)
                    for (std::size_t e = 0; e < spec.shift_hours.size(); ++e) cells.push_back({a, b, c, d, e});
    if (options.log) *options.log << "sweep: " << cells.size() << " cells\n";

    const bool persist = !spec.output_dir.empty();
    const auto cell_dir = spec.output_dir / "cells";
    const auto traj_dir = spec.output_dir / "trajectories";
    std::vector<std::optional<ScenarioResult>> slots(cells.size());
    std::vector<std::size_t> todo;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto file = cell_dir / (cell_key(cells[k]) + ".json");
        if (persist && options.resume && std::filesystem::exists(file)) {
            try {
                slots[k] = result_from_json(read_text_file(file));
                continue;
            } catch (const ValidationError&) {
                // Unreadable partial record: recompute.
            }
        }
        todo.push_back(k);
    }
    if (options.log && todo.size() != cells.size())
        *options.log << "sweep: resuming, " << cells.size() - todo.size() << " cells already done\n";

    std::mutex writer;
    std::string io_error;
    const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(todo.size()); ++i) {
        const std::size_t k = todo[static_cast<std::size_t>(i)];
        {
            std::lock_guard lock(writer);
            if (!io_error.empty()) continue;
        }
        DispatchResult d;
        ScenarioResult r = evaluate_cell(spec, cells[k], spec.write_trajectories ? &d : nullptr);
        std::lock_guard lock(writer);
        if (persist) {
            try {
                if (spec.write_trajectories && r.ok()) {
                    std::ostringstream os;
                    write_trajectories_csv(os, d.trajectories);
                    write_text_file(traj_dir / (cell_key(cells[k]) + ".csv"), os.str());
                }
                write_text_file(cell_dir / (cell_key(cells[k]) + ".json"), result_to_json(r));
            } catch (const IoError& e) {
                io_error = e.what();
            }
        }
        if (options.log) *options.log << "cell " << cell_key(cells[k]) << ": " << r.status << '\n';
        slots[k] = std::move(r);
    }
    if (!io_error.empty()) throw IoError(io_error);

    std::vector<ScenarioResult> out;
    out.reserve(cells.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    std::sort(out.begin(), out.end(), [](const ScenarioResult& a, const ScenarioResult& b) { return a.cell < b.cell; });
    return out;
}

CapacityGapReport capacity_gap(const std::map<std::string, double>& peaks_mw,
                               const std::map<std::string, double>& limits_mw)
{
    CapacityGapReport rep;
    for (const auto& [loc, peak] : peaks_mw) {
        const auto it = limits_mw.find(loc);
        if (it == limits_mw.end()) throw ValidationError("no capacity limit for location '" + loc + "'");
        if (!(peak >= 0.0 && it->second >= 0.0))
            throw ValidationError("peaks and limits must be non-negative at '" + loc + "'");
        GapEntry e{loc, peak, it->second, std::max(0.0, peak - it->second), false};
        e.violated = e.excess_mw > 0.0;
        rep.entries.push_back(e);
    }
    return rep;
}

std::string gap_report_json(const CapacityGapReport& report)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json row;
        row["location"] = e.location;
        row["peak_mw"] = e.peak_mw;
        row["limit_mw"] = e.limit_mw;
        row["excess_mw"] = e.excess_mw;
        row["violated"] = e.violated;
        j.push_back(row);
    }
    return j.dump(2);
}

}  // namespace mgdeploy
