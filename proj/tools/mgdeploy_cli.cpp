// Command-line front end: siting, dispatch, sweeps, cost calculators,
// capacity-gap checks and plot-data reports.

#include "mgdeploy/costs.hpp"
#include "mgdeploy/dispatch.hpp"
#include "mgdeploy/errors.hpp"
#include "mgdeploy/io.hpp"
#include "mgdeploy/params.hpp"
#include "mgdeploy/raster.hpp"
#include "mgdeploy/scenario.hpp"
#include "mgdeploy/siting.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace mgdeploy;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, validation = 1, solver = 2, io = 3 };

struct Common {
    std::string out;
    int workers = 0;
    double time_limit = 300.0;
    double gap_tol = 1e-4;
    std::string params;
};

CostConfig cost_config(const Common& c)
{
    return c.params.empty() ? CostConfig{} : load_cost_config(c.params);
}

void emit(const std::string& text, const std::string& out, const std::string& filename)
{
    std::cout << text << '\n';
    if (!out.empty()) write_text_file(fs::path(out) / filename, text + "\n");
}

int run_site(const std::string& config_path, const std::string& points_path, std::size_t hours, const Common& c)
{
    if (c.workers > 0) omp_set_num_threads(c.workers);
    const auto cfg = siting::load_siting_config(config_path);
    std::vector<GridRaster> layers;
    std::vector<siting::ExclusionRule> rules;
    for (const auto& l : cfg.layers) {
        layers.push_back(read_ascii_grid_file(l.path));
        rules.push_back(l.rule);
    }
    auto catalog = siting::run_siting(layers, rules, cfg.block_cells, cfg.power_density_mw_per_km2);
    if (!points_path.empty()) {
        const auto j = nlohmann::json::parse(read_text_file(points_path));
        const fs::path base = fs::path(points_path).parent_path();
        std::vector<siting::ProfilePoint> points;
        for (const auto& p : j) {
            fs::path cf = p.at("cf").get<std::string>();
            if (!cf.is_absolute()) cf = base / cf;
            points.push_back({p.at("row").get<std::size_t>(), p.at("col").get<std::size_t>(),
                              load_profile_file(cf.string(), Unit::capacity_factor, hours)});
        }
        siting::assign_profiles(catalog, points);
    }
    const std::string text = siting::catalog_to_json(catalog);
    if (c.out.empty()) std::cout << text << '\n';
    else write_text_file(c.out, text + "\n");
    std::cerr << "site: " << catalog.parcels.size() << " parcels\n";
    return ok;
}

struct DispatchArgs {
    std::string profile, solar, carbon, chemistry = "LFP";
    double battery_mwh = 0.0;
    double nameplate = 0.0;
    double solar_cost = 0.0;
    double gep = kDefaultGridPrice;
    long shift = 0;
    std::size_t hours = kHoursPerYear;
};

int run_dispatch(const DispatchArgs& a, const Common& c)
{
    auto load = load_profile_file(a.profile, Unit::megawatt, a.hours);
    auto carbon = load_profile_file(a.carbon, Unit::kg_co2_per_hour, a.hours);
    load = shift_profile(load, a.shift);
    carbon = shift_profile(carbon, a.shift);
    const bool from_cf = a.nameplate > 0.0;
    auto solar = load_profile_file(a.solar, from_cf ? Unit::capacity_factor : Unit::megawatt, a.hours);
    if (from_cf) solar = available_capacity(solar, a.nameplate);

    const auto inst = build_instance(load, solar, carbon, battery_with_energy(a.battery_mwh));
    SolverOptions opt;
    opt.time_limit_s = c.time_limit;
    opt.relative_gap = c.gap_tol;
    const auto r = solve_dispatch(inst, opt);

    auto summary = nlohmann::ordered_json::parse(dispatch_summary_json(r, inst));
    if (from_cf && a.solar_cost > 0.0) {
        CostConfig cfg = cost_config(c);
        const auto& u = r.utilization;
        const double occ_pv = solar_capital_cost(a.nameplate, a.solar_cost);
        const double lp = lcopr(occ_pv, cfg.solar_life_years, solar);
        double ls = 0.0;
        if (inst.battery.present()) {
            const auto& chem = cfg.chemistry(a.chemistry);
            ls = lcos(battery_capital_cost(configure_pack(a.battery_mwh, chem), chem, cfg.stack).total_usd,
                      chem.cycles_eol, a.battery_mwh);
        }
        const auto coc = cost_of_charging(u.f_chg_solar, u.f_chg_grid, lp, a.gep);
        summary["lcopr"] = lp;
        summary["lcos"] = ls;
        summary["coc"] = coc.usd_per_mwh;
        summary["tec"] = total_electricity_cost(u.f_solar, u.f_batt_dchg, u.f_grid, lp, ls, coc.usd_per_mwh, a.gep);
    }
    if (!c.out.empty()) {
        std::ostringstream os;
        write_trajectories_csv(os, r.trajectories);
        write_text_file(fs::path(c.out) / "trajectories.csv", os.str());
    }
    emit(summary.dump(2), c.out, "summary.json");
    return r.status == SolveStatus::infeasible ? solver : ok;
}

int run_sweep_cmd(const std::string& spec_path, bool resume, const Common& c, const CLI::App& cmd)
{
    SweepSpec spec = load_sweep_spec(spec_path);
    if (!c.out.empty()) spec.output_dir = c.out;
    if (spec.output_dir.empty()) throw ValidationError("sweep needs an output directory (--out or output_dir)");
    if (cmd.count("--time-limit")) spec.solver.time_limit_s = c.time_limit;
    if (cmd.count("--gap-tol")) spec.solver.relative_gap = c.gap_tol;
    SweepOptions opt;
    opt.workers = c.workers;
    opt.resume = resume;
    opt.log = &std::cerr;
    const auto results = run_sweep(spec, opt);
    export_results(results, spec.output_dir);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.ok() ? 0 : 1;
    std::cerr << "sweep: " << results.size() << " cells, " << failed << " with errors\n";
    return ok;
}

int run_costs(const std::string& chemistry, double battery_mwh, double duration, const Common& c)
{
    const CostConfig cfg = cost_config(c);
    const auto& chem = cfg.chemistry(chemistry);
    const auto pack = configure_pack(battery_mwh, chem, duration);
    const auto cost = battery_capital_cost(pack, chem, cfg.stack);
    const std::string text = battery_cost_json(pack, cost, lcos(cost.total_usd, chem.cycles_eol, battery_mwh));
    emit(text, c.out, "costs.json");
    if (cost.cnc_clamped) std::cerr << "warning: power outside the controls-cost table; rate clamped\n";
    return ok;
}

int run_gap(const std::string& input, const std::string& profile, double limit, const std::string& location,
            std::size_t hours, const Common& c)
{
    std::map<std::string, double> peaks, limits;
    if (!input.empty()) {
        const auto j = nlohmann::json::parse(read_text_file(input));
        peaks = j.at("peaks").get<std::map<std::string, double>>();
        limits = j.at("limits").get<std::map<std::string, double>>();
    }
    if (!profile.empty()) {
        if (!(limit >= 0.0)) throw ValidationError("--limit is required with --profile");
        peaks[location] = load_profile_file(profile, Unit::megawatt, hours).max();
        limits[location] = limit;
    }
    if (peaks.empty()) throw ValidationError("gap needs an input file or --profile");
    emit(gap_report_json(capacity_gap(peaks, limits)), c.out, "gap.json");
    return ok;
}

int run_report(const std::string& results_path, const Common& c)
{
    if (c.out.empty()) throw ValidationError("report needs --out");
    const auto results = results_from_json(read_text_file(results_path));
    for (const auto& p : export_plot_data(results, c.out)) std::cerr << "wrote " << p.string() << '\n';
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Microgrid siting, dispatch and cost analysis"};
    app.require_subcommand(1);
    Common c;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", c.out, "Output file or directory");
        sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::NonNegativeNumber);
        sub->add_option("--params", c.params, "Cost/stakeholder parameter JSON")->check(CLI::ExistingFile);
    };
    auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--time-limit", c.time_limit, "Solver time limit per instance (s)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--gap-tol", c.gap_tol, "Relative optimality gap")->check(CLI::NonNegativeNumber);
    };

    auto* site = app.add_subcommand("site", "Raster exclusion pipeline to a site catalog");
    std::string site_config, points;
    std::size_t hours = kHoursPerYear;
    site->add_option("config", site_config, "Siting config JSON")->required();
    site->add_option("--points", points, "Profile points JSON (row, col, cf)");
    site->add_option("--hours", hours, "Profile horizon");
    add_common(site);

    auto* dispatch = app.add_subcommand("dispatch", "Solve one dispatch instance");
    DispatchArgs da;
    dispatch->add_option("--profile", da.profile, "Excess load profile (MW)")->required();
    dispatch->add_option("--solar", da.solar, "Solar profile (MW, or capacity factor with --nameplate)")->required();
    dispatch->add_option("--carbon", da.carbon, "Carbon profile (kg/h)")->required();
    dispatch->add_option("--battery-mwh", da.battery_mwh, "Battery rated energy")->check(CLI::NonNegativeNumber);
    dispatch->add_option("--chemistry", da.chemistry, "NMC811, NCA or LFP");
    dispatch->add_option("--nameplate", da.nameplate, "Solar nameplate (MW)")->check(CLI::NonNegativeNumber);
    dispatch->add_option("--solar-cost", da.solar_cost, "Solar cost ($/W_DC)")->check(CLI::NonNegativeNumber);
    dispatch->add_option("--gep", da.gep, "Grid electricity price ($/MWh)")->check(CLI::NonNegativeNumber);
    dispatch->add_option("--shift-hours", da.shift, "Shift load and carbon by this many hours");
    dispatch->add_option("--hours", da.hours, "Profile horizon");
    add_common(dispatch);
    add_solver(dispatch);

    auto* sweep = app.add_subcommand("sweep", "Run a sweep spec");
    std::string spec_path;
    bool resume = false;
    sweep->add_option("spec", spec_path, "Sweep spec JSON")->required();
    sweep->add_flag("--resume", resume, "Skip cells with existing results");
    add_common(sweep);
    add_solver(sweep);

    auto* costs = app.add_subcommand("costs", "Battery pack and cost stack calculator");
    std::string chemistry = "LFP";
    double battery_mwh = 100.0, duration = kDefaultDurationHours;
    costs->add_option("--chemistry", chemistry, "NMC811, NCA or LFP");
    costs->add_option("--battery-mwh", battery_mwh, "Battery rated energy")->check(CLI::PositiveNumber);
    costs->add_option("--duration", duration, "Battery duration (h)")->check(CLI::PositiveNumber);
    add_common(costs);

    auto* gap = app.add_subcommand("gap", "Grid capacity gap check");
    std::string gap_input, gap_profile, location = "site";
    double limit = -1.0;
    gap->add_option("input", gap_input, "JSON with peaks and limits maps");
    gap->add_option("--profile", gap_profile, "Load profile whose peak is checked");
    gap->add_option("--limit", limit, "Capacity limit (MW) for --profile");
    gap->add_option("--location", location, "Location name for --profile");
    gap->add_option("--hours", hours, "Profile horizon");
    add_common(gap);

    auto* report = app.add_subcommand("report", "Plot-data files from results.json");
    std::string results_path;
    report->add_option("results", results_path, "results.json from a sweep")->required();
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::validation;
    }

    try {
        if (*site) return run_site(site_config, points, hours, c);
        if (*dispatch) return run_dispatch(da, c);
        if (*sweep) return run_sweep_cmd(spec_path, resume, c, *sweep);
        if (*costs) return run_costs(chemistry, battery_mwh, duration, c);
        if (*gap) return run_gap(gap_input, gap_profile, limit, location, hours, c);
        if (*report) return run_report(results_path, c);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::validation;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return Exit::solver;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return Exit::io;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::validation;
    }
    return Exit::ok;
}
