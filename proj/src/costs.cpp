#include "mgdeploy/costs.hpp"

#include "mgdeploy/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace mgdeploy {

namespace {

std::string upper(std::string s)
{
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

void require_fraction(double f, const char* what)
{
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError(std::string(what) + " must be in [0, 1]");
}

}  // namespace

void ChemistryParams::validate() const
{
    if (name.empty()) throw ValidationError("chemistry name is empty");
    if (!(pack_cost_usd_per_kwh > 0.0 && cycles_eol > 0.0 && cell_nominal_voltage > 0.0 && cell_capacity_ah > 0.0 &&
          pack_voltage_target > 0.0))
        throw ValidationError("chemistry '" + name + "': all parameters must be positive");
}

ChemistryParams default_chemistry(const std::string& name)
{
    const std::string key = upper(name);
    if (key == "NMC811" || key == "NMC") return {"NMC811", 150.98, 2000.0, 3.68};
    if (key == "NCA") return {"NCA", 194.03, 1400.0, 3.67};
    if (key == "LFP") return {"LFP", 216.17, 6000.0, 3.31};
    throw ValidationError("unknown chemistry '" + name + "'");
}

std::vector<ChemistryParams> default_chemistries()
{
    return {default_chemistry("NMC811"), default_chemistry("NCA"), default_chemistry("LFP")};
}

BatteryPackSpec configure_pack(double rated_energy_mwh, const ChemistryParams& chem, double duration_h)
{
    if (!(rated_energy_mwh > 0.0)) throw ValidationError("battery energy must be positive");
    if (!(duration_h > 0.0)) throw ValidationError("battery duration must be positive");
    chem.validate();
    BatteryPackSpec spec;
    spec.rated_energy_mwh = rated_energy_mwh;
    spec.chemistry = chem.name;
    const double parallel = rated_energy_mwh * 1e6 / (chem.pack_voltage_target * chem.cell_capacity_ah) / kModuleStrings;
    spec.cells_parallel = std::max(1L, static_cast<long>(std::ceil(parallel - 1e-9)));
    spec.series_per_module = std::lround(chem.pack_voltage_target / chem.cell_nominal_voltage / kSeriesModules);
    spec.cells_per_module = spec.series_per_module * spec.cells_parallel;
    spec.rated_power_mw = rated_energy_mwh / duration_h;
    return spec;
}

void CostStackParams::validate() const
{
    for (double f : {sbos_frac, integration_frac, epc_frac, projdev_frac, grid_integration_frac})
        require_fraction(f, "cost stack fraction");
    if (!(pcs_usd_per_kw >= 0.0)) throw ValidationError("power conversion cost must be non-negative");
    if (cnc_knots.empty()) throw ValidationError("controls and communication knots are empty");
    for (std::size_t k = 0; k < cnc_knots.size(); ++k) {
        if (!(cnc_knots[k].first > 0.0 && cnc_knots[k].second >= 0.0))
            throw ValidationError("controls and communication knots must be positive");
        if (k > 0 && !(cnc_knots[k].first > cnc_knots[k - 1].first))
            throw ValidationError("controls and communication knots must increase in power");
    }
}

CncRate cnc_rate(double power_mw, const CostStackParams& stack)
{
    const auto& kn = stack.cnc_knots;
    if (power_mw <= kn.front().first) return {kn.front().second, power_mw < kn.front().first};
    if (power_mw >= kn.back().first) return {kn.back().second, power_mw > kn.back().first};
    std::size_t k = 1;
    while (kn[k].first < power_mw) ++k;
    const auto [p0, r0] = kn[k - 1];
    const auto [p1, r1] = kn[k];
    return {r0 + (r1 - r0) * (power_mw - p0) / (p1 - p0), false};
}

BatteryCapitalCost battery_capital_cost(const BatteryPackSpec& pack, const ChemistryParams& chem,
                                        const CostStackParams& stack)
{
    if (!(pack.rated_energy_mwh > 0.0 && pack.rated_power_mw > 0.0))
        throw ValidationError("battery pack must have positive energy and power");
    chem.validate();
    stack.validate();

    BatteryCapitalCost out;
    double total = 0.0;
    auto add = [&](const char* item, double amount) {
        total += amount;
        out.lines.push_back({item, amount, total});
    };
    const double kwh = pack.rated_energy_mwh * 1000.0;
    const double kw = pack.rated_power_mw * 1000.0;
    const CncRate cnc = cnc_rate(pack.rated_power_mw, stack);
    out.cnc_usd_per_kw = cnc.usd_per_kw;
    out.cnc_clamped = cnc.clamped;

    add("battery pack", chem.pack_cost_usd_per_kwh * kwh);
    add("storage balance of system", stack.sbos_frac * total);
    add("power conversion system", stack.pcs_usd_per_kw * kw);
    add("controls and communication", cnc.usd_per_kw * kw);
    add("system integration", stack.integration_frac * total);
    add("engineering, procurement and construction", stack.epc_frac * total);
    add("project development", stack.projdev_frac * total);
    add("grid integration", stack.grid_integration_frac * total);
    out.total_usd = total;
    return out;
}

double solar_capital_cost(double nameplate_mw, double cost_per_wdc)
{
    if (!(nameplate_mw > 0.0)) throw ValidationError("solar nameplate must be positive");
    if (!(cost_per_wdc > 0.0)) throw ValidationError("solar unit cost ($/W_DC) must be given and positive");
    return nameplate_mw * 1e6 * cost_per_wdc;
}

double lcopr(double occ_pv_usd, double years, const HourlyProfile& solar_mw)
{
    if (solar_mw.unit() != Unit::megawatt) throw ValidationError("solar output must be in MW");
    if (!(occ_pv_usd >= 0.0)) throw ValidationError("solar capital cost must be non-negative");
    if (!(years > 0.0)) throw ValidationError("solar operating life must be positive");
    const double annual = solar_mw.sum();
    if (!(annual > 0.0)) throw ValidationError("zero annual solar output");
    return occ_pv_usd / (years * annual);
}

double lcos(double occ_batt_usd, double cycles_eol, double rated_energy_mwh)
{
    if (!(occ_batt_usd >= 0.0)) throw ValidationError("battery capital cost must be non-negative");
    if (!(cycles_eol > 0.0 && rated_energy_mwh > 0.0))
        throw ValidationError("storage cost needs positive cycle life and rated energy");
    return occ_batt_usd / (cycles_eol * rated_energy_mwh);
}

ChargingCost cost_of_charging(double f_chg_solar, double f_chg_grid, double lcopr_usd_per_mwh, double gep)
{
    require_fraction(f_chg_solar, "solar charging fraction");
    require_fraction(f_chg_grid, "grid charging fraction");
    if (f_chg_solar == 0.0 && f_chg_grid == 0.0) return {0.0, true};
    if (std::abs(f_chg_solar + f_chg_grid - 1.0) > 1e-9)
        throw ValidationError("charging fractions must sum to 1");
    return {f_chg_solar * lcopr_usd_per_mwh + f_chg_grid * gep, false};
}

double total_electricity_cost(double f_solar, double f_batt, double f_grid, double lcopr_usd_per_mwh,
                              double lcos_usd_per_mwh, double coc_usd_per_mwh, double gep)
{
    require_fraction(f_solar, "solar fraction");
    require_fraction(f_batt, "battery fraction");
    require_fraction(f_grid, "grid fraction");
    if (std::abs(f_solar + f_batt + f_grid - 1.0) > 1e-9)
        throw ValidationError("utilization fractions must sum to 1");
    return f_solar * lcopr_usd_per_mwh + f_batt * (coc_usd_per_mwh + lcos_usd_per_mwh) + f_grid * gep;
}

std::string battery_cost_json(const BatteryPackSpec& pack, const BatteryCapitalCost& cost, double lcos_usd_per_mwh)
{
    nlohmann::ordered_json j;
    j["chemistry"] = pack.chemistry;
    j["rated_energy_mwh"] = pack.rated_energy_mwh;
    j["rated_power_mw"] = pack.rated_power_mw;
    j["cells_parallel"] = pack.cells_parallel;
    j["series_per_module"] = pack.series_per_module;
    j["cells_per_module"] = pack.cells_per_module;
    auto lines = nlohmann::ordered_json::array();
    for (const auto& l : cost.lines) {
        nlohmann::ordered_json line;
        line["item"] = l.item;
        line["amount_usd"] = l.amount_usd;
        line["running_total_usd"] = l.running_total_usd;
        lines.push_back(line);
    }
    j["lines"] = lines;
    j["total_usd"] = cost.total_usd;
    j["cnc_usd_per_kw"] = cost.cnc_usd_per_kw;
    j["cnc_clamped"] = cost.cnc_clamped;
    j["lcos_usd_per_mwh"] = lcos_usd_per_mwh;
    return j.dump(2);
}

}  // namespace mgdeploy
