#pragma once

#include "mgdeploy/dispatch.hpp"
#include "mgdeploy/params.hpp"
#include "mgdeploy/profiles.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mgdeploy {

struct SiteInput {
    std::string name;
    HourlyProfile solar_cf = HourlyProfile::constant(1, 0.0, Unit::capacity_factor);
    double nameplate_mw = 0.0;
};

struct SweepSpec {
    HourlyProfile load = HourlyProfile::constant(1, 0.0, Unit::megawatt);
    HourlyProfile carbon = HourlyProfile::constant(1, 0.0, Unit::kg_co2_per_hour);
    std::vector<SiteInput> sites;
    std::vector<double> nameplate_scales{1.0};
    std::vector<double> battery_mwh{0.0};
    std::vector<std::string> chemistries{"LFP"};
    std::vector<long> shift_hours{0};
    bool shift_carbon = true;  // carbon moves with the load
    double battery_duration_h = kDefaultDurationHours;
    CostConfig costs;
    SolverOptions solver;
    std::filesystem::path output_dir;  // empty: keep results in memory only
    bool write_trajectories = false;

    std::size_t cell_count() const;
    void validate() const;
};

// Relative paths inside the file resolve against its directory.
SweepSpec parse_sweep_spec(const std::string& json_text, const std::filesystem::path& base_dir);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

// Indices into site, nameplate scale, battery, chemistry and shift axes.
using CellIndex = std::array<std::size_t, 5>;

struct ScenarioResult {
    CellIndex cell{};
    std::string site;
    double nameplate_mw = 0.0;
    double battery_mwh = 0.0;
    std::string chemistry;
    long shift_hours = 0;

    std::string status;  // dispatch status, or "failed" / "invalid" with error set
    std::string error;
    double gap = 0.0;
    long nodes = 0;

    double j_percent = 0.0;
    double c_base_kg = 0.0;
    double c_renew_kg = 0.0;
    double f_grid = 0.0;
    double f_solar = 0.0;
    double f_batt_dchg = 0.0;
    double f_chg_grid = 0.0;
    double f_chg_solar = 0.0;
    bool battery_charged = false;
    std::optional<double> cycles_per_year;
    double annual_load_mwh = 0.0;

    double occ_pv_usd = 0.0;
    double occ_batt_usd = 0.0;
    double lcopr = 0.0;
    double lcos = 0.0;
    double coc = 0.0;
    double tec = 0.0;
    double utility_tco_usd = 0.0;
    double years_op = 0.0;
    std::optional<double> utility_usd_per_kg;
    std::optional<double> fleet_full_per_mile;
    std::optional<double> fleet_partial_per_mile;

    double wall_time_s = 0.0;  // excluded from result files

    bool ok() const { return error.empty(); }
};

std::string cell_key(const CellIndex& cell);

// One cell of the cross product; errors are recorded in the result.
ScenarioResult evaluate_cell(const SweepSpec& spec, const CellIndex& cell, DispatchResult* dispatch_out = nullptr);

struct SweepOptions {
    int workers = 0;  // 0: OpenMP default
    bool resume = false;
    std::ostream* log = nullptr;
};

// Sorted by cell index. With an output directory, each finished cell is
// persisted so an interrupted sweep can resume.
std::vector<ScenarioResult> run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

struct GapEntry {
    std::string location;
    double peak_mw = 0.0;
    double limit_mw = 0.0;
    double excess_mw = 0.0;
    bool violated = false;
};

struct CapacityGapReport {
    std::vector<GapEntry> entries;  // sorted by location
};

CapacityGapReport capacity_gap(const std::map<std::string, double>& peaks_mw,
                               const std::map<std::string, double>& limits_mw);
std::string gap_report_json(const CapacityGapReport& report);

// Serialization.
std::string result_to_json(const ScenarioResult& r);
ScenarioResult result_from_json(const std::string& text);
std::string results_to_json(const std::vector<ScenarioResult>& results);
std::vector<ScenarioResult> results_from_json(const std::string& text);
std::string results_to_csv(const std::vector<ScenarioResult>& results);

// Writes results.csv, results.json, timings.csv and the plot_*.csv files.
std::vector<std::filesystem::path> export_results(const std::vector<ScenarioResult>& results,
                                                  const std::filesystem::path& dir);

// Plot-data files only.
std::vector<std::filesystem::path> export_plot_data(const std::vector<ScenarioResult>& results,
                                                    const std::filesystem::path& dir);

}  // namespace mgdeploy
