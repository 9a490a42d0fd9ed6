#include "mgdeploy/dispatch.hpp"

#include "dispatch_model.hpp"
#include "mgdeploy/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace mgdeploy {

void BatterySpec::validate() const
{
    if (!(rated_energy_mwh >= 0.0)) throw ValidationError("battery rated energy must be non-negative");
    if (!(duration_h > 0.0)) throw ValidationError("battery duration must be positive");
    if (!(roundtrip_efficiency > 0.0 && roundtrip_efficiency <= 1.0))
        throw ValidationError("roundtrip efficiency must be in (0, 1]");
    if (!(soc_min_frac >= 0.0 && soc_min_frac <= initial_soc_frac && initial_soc_frac <= soc_max_frac &&
          soc_max_frac <= 1.0))
        throw ValidationError("state-of-charge fractions must satisfy 0 <= min <= initial <= max <= 1");
}

DispatchInstance build_instance(HourlyProfile load, HourlyProfile solar, HourlyProfile carbon, BatterySpec battery)
{
    if (load.unit() != Unit::megawatt) throw ValidationError("load profile must be in MW");
    if (solar.unit() != Unit::megawatt) throw ValidationError("solar profile must be in MW");
    if (carbon.unit() != Unit::kg_co2_per_hour) throw ValidationError("carbon profile must be in kg/h");
    if (solar.hours() != load.hours() || carbon.hours() != load.hours())
        throw ValidationError("horizon mismatch: load " + std::to_string(load.hours()) + ", solar " +
                              std::to_string(solar.hours()) + ", carbon " + std::to_string(carbon.hours()));
    battery.validate();
    for (std::size_t t = 0; t < load.hours(); ++t) {
        if (load[t] <= kZeroLoadThresholdMw && carbon[t] > 0.0)
            throw ValidationError("carbon at zero-load hour " + std::to_string(t + 1));
    }
    return DispatchInstance{std::move(load), std::move(solar), std::move(carbon), battery};
}

std::string to_string(SolveStatus s)
{
    switch (s) {
        case SolveStatus::proven_optimal: return "proven-optimal";
        case SolveStatus::gap_limited: return "gap";
        case SolveStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

Trajectories::Trajectories(std::size_t hours)
    : grid_to_load(hours, 0.0),
      solar_to_load(hours, 0.0),
      battery_to_load(hours, 0.0),
      solar_to_battery(hours, 0.0),
      grid_to_battery(hours, 0.0),
      solar_curtailed(hours, 0.0),
      grid_total(hours, 0.0),
      battery_charge(hours, 0.0),
      battery_energy(hours, 0.0),
      discharging(hours, 0)
{
}

double baseline_emissions(const HourlyProfile& carbon) { return carbon.sum(); }

double renewable_emissions(const Trajectories& traj, const DispatchInstance& instance)
{
    double total = 0.0;
    for (std::size_t t = 0; t < instance.hours(); ++t) {
        const double load = instance.load[t];
        if (load > kZeroLoadThresholdMw) total += traj.grid_total[t] / load * instance.carbon[t];
    }
    return total;
}

Utilization utilization(const Trajectories& traj, const DispatchInstance& instance)
{
    Utilization u;
    for (std::size_t t = 0; t < instance.hours(); ++t) {
        const double load = instance.load[t];
        if (load <= kZeroLoadThresholdMw) continue;
        ++u.positive_load_hours;
        u.f_grid += traj.grid_to_load[t] / load;
        u.f_solar += traj.solar_to_load[t] / load;
        u.f_batt_dchg += traj.battery_to_load[t] / load;
    }
    if (u.positive_load_hours == 0) throw ValidationError("undefined utilization");
    const double n = static_cast<double>(u.positive_load_hours);
    u.f_grid /= n;
    u.f_solar /= n;
    u.f_batt_dchg /= n;

    for (std::size_t t = 0; t < instance.hours(); ++t) {
        const double charge = traj.battery_charge[t];
        if (charge <= 0.0) continue;
        ++u.charging_hours;
        u.f_chg_grid += traj.grid_to_battery[t] / charge;
        u.f_chg_solar += traj.solar_to_battery[t] / charge;
    }
    if (u.charging_hours > 0) {
        u.battery_charged = true;
        u.f_chg_grid /= static_cast<double>(u.charging_hours);
        u.f_chg_solar /= static_cast<double>(u.charging_hours);
    }
    return u;
}

double count_cycles(const Trajectories& traj, const BatterySpec& battery)
{
    if (!battery.present()) throw ValidationError("cycle counting needs a battery with positive rated energy");
    double discharged = 0.0;
    for (double v : traj.battery_to_load) discharged += v;
    return discharged / battery.usable_energy_mwh();
}

void finalize_metrics(DispatchResult& r, const DispatchInstance& instance)
{
    r.c_base_kg = baseline_emissions(instance.carbon);
    r.c_renew_kg = renewable_emissions(r.trajectories, instance);
    r.objective_percent = r.c_base_kg > 0.0 ? 100.0 * (1.0 - r.c_renew_kg / r.c_base_kg) : 0.0;
    try {
        r.utilization = utilization(r.trajectories, instance);
    } catch (const ValidationError&) {
        r.utilization = Utilization{};
    }
    r.positive_load_hours = r.utilization.positive_load_hours;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    std::vector<std::pair<std::size_t, bool>> fixings;
    double bound;
};

void apply(detail::DispatchModel& model, const std::vector<std::pair<std::size_t, bool>>& previous,
           const std::vector<std::pair<std::size_t, bool>>& next)
{
    for (const auto& f : previous) model.fix_discharge(f.first, std::nullopt);
    for (const auto& f : next) model.fix_discharge(f.first, f.second);
}

lp::Solution solve_or_throw(const detail::DispatchModel& model)
{
    const auto s = model.solve_relaxation();
    if (s.status == lp::Status::optimal || s.status == lp::Status::infeasible) return s;
    throw SolverError("LP relaxation failed: " + lp::to_string(s.status));
}

double max_violation(const std::vector<double>& sim, std::size_t& where)
{
    double worst = 0.0;
    where = 0;
    for (std::size_t t = 0; t < sim.size(); ++t) {
        if (sim[t] > worst) {
            worst = sim[t];
            where = t;
        }
    }
    return worst;
}

DispatchResult solve_builtin(const DispatchInstance& instance, const SolverOptions& options)
{
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    detail::DispatchModel model(instance, options);
    DispatchResult result;
    result.backend = "builtin";

    const lp::Solution root = solve_or_throw(model);
    if (root.status == lp::Status::infeasible)
        throw SolverError("internal error: dispatch relaxation infeasible although grid supply is unbounded");
    result.nodes = 1;

    if (!model.has_battery()) {
        result.trajectories = model.extract(root);
        result.status = SolveStatus::proven_optimal;
        finalize_metrics(result, instance);
        return result;
    }

    const double tol = options.feasibility_tol;
    double incumbent = std::numeric_limits<double>::infinity();
    std::optional<lp::Solution> best;
    std::vector<std::pair<std::size_t, bool>> best_fixings;
    std::vector<std::pair<std::size_t, bool>> applied;

    auto consider = [&](const lp::Solution& s, const std::vector<std::pair<std::size_t, bool>>& fixings) {
        std::size_t where = 0;
        const double v = max_violation(model.simultaneity(s), where);
        if (v <= tol && s.objective < incumbent) {
            incumbent = s.objective;
            best = s;
            best_fixings = fixings;
        }
        return v <= tol;
    };

    // Rounding heuristic: fix every conflicted hour to its dominant direction.
    auto round_and_solve = [&](const lp::Solution& s, std::vector<std::pair<std::size_t, bool>> fixings) {
        const auto sim = model.simultaneity(s);
        std::vector<char> seen(model.hours(), 0);
        for (const auto& f : fixings) seen[f.first] = 1;
        for (std::size_t t = 0; t < sim.size(); ++t) {
            if (sim[t] > tol && !seen[t]) fixings.emplace_back(t, true);
        }
        const auto tr = model.extract(s);
        for (auto& f : fixings)
            if (!seen[f.first]) f.second = tr.battery_to_load[f.first] >= tr.battery_charge[f.first];
        apply(model, applied, fixings);
        applied = fixings;
        const auto h = solve_or_throw(model);
        ++result.nodes;
        if (h.status == lp::Status::optimal) consider(h, fixings);
    };

    bool root_feasible = consider(root, {});
    if (!root_feasible) round_and_solve(root, {});

    std::vector<Node> stack;
    if (!root_feasible) stack.push_back({{}, root.objective});
    bool limit_hit = false;
    auto prune_gap = [&] { return options.relative_gap * std::max(std::abs(incumbent), 1e-9); };

    while (!stack.empty()) {
        if (elapsed() > options.time_limit_s || result.nodes >= options.max_nodes) {
            limit_hit = true;
            break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        if (node.bound >= incumbent - prune_gap()) continue;

        apply(model, applied, node.fixings);
        applied = node.fixings;
        const lp::Solution s = node.fixings.empty() ? root : solve_or_throw(model);
        if (!node.fixings.empty()) ++result.nodes;
        if (s.status == lp::Status::infeasible) continue;
        if (s.objective >= incumbent - prune_gap()) continue;

        std::size_t hour = 0;
        const double v = max_violation(model.simultaneity(s), hour);
        if (v <= tol) {
            consider(s, node.fixings);
            continue;
        }
        const auto tr = model.extract(s);
        const bool prefer_discharge = tr.battery_to_load[hour] >= tr.battery_charge[hour];
        Node later{node.fixings, s.objective};
        later.fixings.emplace_back(hour, !prefer_discharge);
        Node first{std::move(node.fixings), s.objective};
        first.fixings.emplace_back(hour, prefer_discharge);
        stack.push_back(std::move(later));
        stack.push_back(std::move(first));
    }

    if (!best) {
        // Limits hit before any integral point: fall back to the rounded relaxation.
        round_and_solve(root, {});
        if (!best) throw SolverError("no integral dispatch found within limits");
    }

    apply(model, applied, best_fixings);
    applied = best_fixings;
    result.trajectories = model.extract(*best);
    if (limit_hit && !stack.empty()) {
        double bound = incumbent;
        for (const auto& n : stack) bound = std::min(bound, n.bound);
        result.gap = (incumbent - bound) / std::max(std::abs(incumbent), 1e-9);
        result.status = result.gap <= options.relative_gap ? SolveStatus::proven_optimal : SolveStatus::gap_limited;
    } else {
        result.status = SolveStatus::proven_optimal;
        result.gap = 0.0;
    }
    finalize_metrics(result, instance);
    return result;
}

std::mutex& registry_mutex()
{
    static std::mutex m;
    return m;
}

std::map<std::string, DispatchBackend>& registry()
{
    static std::map<std::string, DispatchBackend> r{{"builtin", solve_builtin}};
    return r;
}

}  // namespace

void register_dispatch_backend(const std::string& name, DispatchBackend backend)
{
    std::lock_guard lock(registry_mutex());
    registry()[name] = std::move(backend);
}

std::vector<std::string> dispatch_backends()
{
    std::lock_guard lock(registry_mutex());
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

DispatchResult solve_dispatch(const DispatchInstance& instance, const SolverOptions& options)
{
    DispatchBackend backend;
    {
        std::lock_guard lock(registry_mutex());
        const auto it = registry().find(options.backend);
        if (it == registry().end()) throw ValidationError("unknown solver backend '" + options.backend + "'");
        backend = it->second;
    }
    DispatchResult r = backend(instance, options);
    r.backend = options.backend;
    return r;
}

bool InvariantReport::ok(double tol) const
{
    return max_balance_residual <= tol && max_energy_residual <= tol && cyclic_residual <= tol &&
           max_soc_violation <= tol && max_simultaneous <= tol && max_zero_load_grid <= 1e-9 &&
           min_value >= -tol && delta_consistent;
}

InvariantReport check_invariants(const Trajectories& tr, const DispatchInstance& inst)
{
    InvariantReport rep;
    const auto& bat = inst.battery;
    const double e_init = bat.initial_soc_frac * bat.rated_energy_mwh;
    const double e_min = bat.soc_min_frac * bat.rated_energy_mwh;
    const double e_max = bat.soc_max_frac * bat.rated_energy_mwh;
    const double pmax = bat.max_power_mw();
    double prev = e_init;
    for (std::size_t t = 0; t < inst.hours(); ++t) {
        const double load = inst.load[t] <= kZeroLoadThresholdMw ? 0.0 : inst.load[t];
        auto bal = [&](double r) { rep.max_balance_residual = std::max(rep.max_balance_residual, std::abs(r)); };
        bal(inst.solar[t] - tr.solar_to_load[t] - tr.solar_to_battery[t] - tr.solar_curtailed[t]);
        bal(tr.battery_charge[t] - tr.solar_to_battery[t] - tr.grid_to_battery[t]);
        bal(tr.grid_total[t] - tr.grid_to_battery[t] - tr.grid_to_load[t]);
        bal(load - tr.solar_to_load[t] - tr.battery_to_load[t] - tr.grid_to_load[t]);
        for (const auto* v : {&tr.grid_to_load, &tr.solar_to_load, &tr.battery_to_load, &tr.solar_to_battery,
                              &tr.grid_to_battery, &tr.solar_curtailed, &tr.grid_total, &tr.battery_charge})
            rep.min_value = std::min(rep.min_value, (*v)[t]);

        if (bat.present()) {
            const double e = tr.battery_energy[t];
            const double expected = prev + bat.roundtrip_efficiency * tr.battery_charge[t] - tr.battery_to_load[t];
            rep.max_energy_residual = std::max(rep.max_energy_residual, std::abs(e - expected));
            rep.max_soc_violation = std::max({rep.max_soc_violation, e_min - e, e - e_max});
            prev = e;
            const bool d = tr.discharging[t] != 0;
            if ((d && tr.battery_charge[t] > 1e-6) || (!d && tr.battery_to_load[t] > 1e-6))
                rep.delta_consistent = false;
            if (tr.battery_to_load[t] > pmax + 1e-6 || tr.battery_charge[t] > pmax + 1e-6)
                rep.delta_consistent = false;
        } else if (tr.battery_to_load[t] != 0.0 || tr.battery_charge[t] != 0.0 || tr.battery_energy[t] != 0.0) {
            rep.delta_consistent = false;
        }
        rep.max_simultaneous = std::max(rep.max_simultaneous, tr.battery_to_load[t] * tr.battery_charge[t]);
        if (load == 0.0) rep.max_zero_load_grid = std::max(rep.max_zero_load_grid, tr.grid_total[t]);
    }
    if (bat.present() && inst.hours() > 0) rep.cyclic_residual = std::abs(tr.battery_energy.back() - e_init);
    return rep;
}

namespace {

constexpr const char* kTrajectoryHeader = "hour,p_g_l,p_s_l,p_b_l,p_s_b,p_g_b,p_s_curtail,p_g,p_b,E_b,delta_b";

}  // namespace

void write_trajectories_csv(std::ostream& out, const Trajectories& tr)
{
    out << kTrajectoryHeader << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t t = 0; t < tr.hours(); ++t) {
        out << (t + 1) << ',' << tr.grid_to_load[t] << ',' << tr.solar_to_load[t] << ',' << tr.battery_to_load[t]
            << ',' << tr.solar_to_battery[t] << ',' << tr.grid_to_battery[t] << ',' << tr.solar_curtailed[t] << ','
            << tr.grid_total[t] << ',' << tr.battery_charge[t] << ',' << tr.battery_energy[t] << ','
            << static_cast<int>(tr.discharging[t]) << '\n';
    }
}

Trajectories read_trajectories_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader)
        throw ValidationError("trajectory CSV: unexpected header");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError("trajectory CSV: unparseable value '" + cell + "'");
            }
        }
        if (row.size() != 11) throw ValidationError("trajectory CSV: expected 11 columns");
        rows.push_back(std::move(row));
    }
    Trajectories tr(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto& r = rows[t];
        tr.grid_to_load[t] = r[1];
        tr.solar_to_load[t] = r[2];
        tr.battery_to_load[t] = r[3];
        tr.solar_to_battery[t] = r[4];
        tr.grid_to_battery[t] = r[5];
        tr.solar_curtailed[t] = r[6];
        tr.grid_total[t] = r[7];
        tr.battery_charge[t] = r[8];
        tr.battery_energy[t] = r[9];
        tr.discharging[t] = r[10] != 0.0 ? 1 : 0;
    }
    return tr;
}

std::string dispatch_summary_json(const DispatchResult& r, const DispatchInstance& instance)
{
    nlohmann::ordered_json j;
    j["J_percent"] = r.objective_percent;
    j["C_base_kg"] = r.c_base_kg;
    j["C_renew_kg"] = r.c_renew_kg;
    j["f_grid"] = r.utilization.f_grid;
    j["f_solar"] = r.utilization.f_solar;
    j["f_batt_dchg"] = r.utilization.f_batt_dchg;
    j["f_chg_grid"] = r.utilization.f_chg_grid;
    j["f_chg_solar"] = r.utilization.f_chg_solar;
    j["battery_charged"] = r.utilization.battery_charged;
    j["positive_load_hours"] = r.positive_load_hours;
    if (instance.battery.present()) j["cycles_per_year"] = count_cycles(r.trajectories, instance.battery);
    else j["cycles_per_year"] = nullptr;
    j["status"] = to_string(r.status);
    j["gap"] = r.gap;
    j["nodes"] = r.nodes;
    j["backend"] = r.backend;
    return j.dump(2);
}

}  // namespace mgdeploy
