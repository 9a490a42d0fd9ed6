#include "mgdeploy/errors.hpp"
#include "mgdeploy/io.hpp"
#include "mgdeploy/scenario.hpp"

#include <json.hpp>

#include <charconv>
#include <functional>
#include <sstream>

namespace mgdeploy {

namespace {

using ojson = nlohmann::ordered_json;

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> opt_from(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

ojson to_ojson(const ScenarioResult& r)
{
    ojson j;
    j["cell"] = r.cell;
    j["site"] = r.site;
    j["nameplate_mw"] = r.nameplate_mw;
    j["battery_mwh"] = r.battery_mwh;
    j["chemistry"] = r.chemistry;
    j["shift_hours"] = r.shift_hours;
    j["status"] = r.status;
    j["error"] = r.error;
    j["gap"] = r.gap;
    j["nodes"] = r.nodes;
    j["J_percent"] = r.j_percent;
    j["C_base_kg"] = r.c_base_kg;
    j["C_renew_kg"] = r.c_renew_kg;
    j["f_grid"] = r.f_grid;
    j["f_solar"] = r.f_solar;
    j["f_batt_dchg"] = r.f_batt_dchg;
    j["f_chg_grid"] = r.f_chg_grid;
    j["f_chg_solar"] = r.f_chg_solar;
    j["battery_charged"] = r.battery_charged;
    j["cycles_per_year"] = opt(r.cycles_per_year);
    j["annual_load_mwh"] = r.annual_load_mwh;
    j["occ_pv_usd"] = r.occ_pv_usd;
    j["occ_batt_usd"] = r.occ_batt_usd;
    j["lcopr"] = r.lcopr;
    j["lcos"] = r.lcos;
    j["coc"] = r.coc;
    j["tec"] = r.tec;
    j["utility_tco_usd"] = r.utility_tco_usd;
    j["years_op"] = r.years_op;
    j["utility_usd_per_kg"] = opt(r.utility_usd_per_kg);
    j["fleet_full_per_mile"] = opt(r.fleet_full_per_mile);
    j["fleet_partial_per_mile"] = opt(r.fleet_partial_per_mile);
    return j;
}

ScenarioResult from_json(const nlohmann::json& j)
{
    try {
        ScenarioResult r;
        r.cell = j.at("cell").get<CellIndex>();
        r.site = j.at("site").get<std::string>();
        r.nameplate_mw = j.at("nameplate_mw").get<double>();
        r.battery_mwh = j.at("battery_mwh").get<double>();
        r.chemistry = j.at("chemistry").get<std::string>();
        r.shift_hours = j.at("shift_hours").get<long>();
        r.status = j.at("status").get<std::string>();
        r.error = j.at("error").get<std::string>();
        r.gap = j.at("gap").get<double>();
        r.nodes = j.at("nodes").get<long>();
        r.j_percent = j.at("J_percent").get<double>();
        r.c_base_kg = j.at("C_base_kg").get<double>();
        r.c_renew_kg = j.at("C_renew_kg").get<double>();
        r.f_grid = j.at("f_grid").get<double>();
        r.f_solar = j.at("f_solar").get<double>();
        r.f_batt_dchg = j.at("f_batt_dchg").get<double>();
        r.f_chg_grid = j.at("f_chg_grid").get<double>();
        r.f_chg_solar = j.at("f_chg_solar").get<double>();
        r.battery_charged = j.at("battery_charged").get<bool>();
        r.cycles_per_year = opt_from(j, "cycles_per_year");
        r.annual_load_mwh = j.at("annual_load_mwh").get<double>();
        r.occ_pv_usd = j.at("occ_pv_usd").get<double>();
        r.occ_batt_usd = j.at("occ_batt_usd").get<double>();
        r.lcopr = j.at("lcopr").get<double>();
        r.lcos = j.at("lcos").get<double>();
        r.coc = j.at("coc").get<double>();
        r.tec = j.at("tec").get<double>();
        r.utility_tco_usd = j.at("utility_tco_usd").get<double>();
        r.years_op = j.at("years_op").get<double>();
        r.utility_usd_per_kg = opt_from(j, "utility_usd_per_kg");
        r.fleet_full_per_mile = opt_from(j, "fleet_full_per_mile");
        r.fleet_partial_per_mile = opt_from(j, "fleet_partial_per_mile");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("result record: ") + e.what());
    }
}

nlohmann::json parse(const std::string& text)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("result file: ") + e.what());
    }
}

std::string num(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

struct Column {
    const char* name;
    std::function<std::string(const ScenarioResult&)> get;
};

const std::vector<Column>& axis_columns()
{
    static const std::vector<Column> cols{
        {"site", [](const ScenarioResult& r) { return quote(r.site); }},
        {"nameplate_mw", [](const ScenarioResult& r) { return num(r.nameplate_mw); }},
        {"battery_mwh", [](const ScenarioResult& r) { return num(r.battery_mwh); }},
        {"chemistry", [](const ScenarioResult& r) { return quote(r.chemistry); }},
        {"shift_hours", [](const ScenarioResult& r) { return std::to_string(r.shift_hours); }},
    };
    return cols;
}

std::string table(const std::vector<ScenarioResult>& results, const std::vector<Column>& extra)
{
    std::vector<Column> cols = axis_columns();
    cols.insert(cols.end(), extra.begin(), extra.end());
    std::ostringstream os;
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c].name;
    os << '\n';
    for (const auto& r : results) {
        for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c].get(r);
        os << '\n';
    }
    return os.str();
}

#define MG_COL(name, expr) Column{name, [](const ScenarioResult& r) { return expr; }}

}  // namespace

std::string result_to_json(const ScenarioResult& r) { return to_ojson(r).dump(2); }

ScenarioResult result_from_json(const std::string& text) { return from_json(parse(text)); }

std::string results_to_json(const std::vector<ScenarioResult>& results)
{
    ojson arr = ojson::array();
    for (const auto& r : results) arr.push_back(to_ojson(r));
    return arr.dump(2) + "\n";
}

std::vector<ScenarioResult> results_from_json(const std::string& text)
{
    const auto j = parse(text);
    if (!j.is_array()) throw ValidationError("result file: expected a JSON array");
    std::vector<ScenarioResult> out;
    for (const auto& e : j) out.push_back(from_json(e));
    return out;
}

std::string results_to_csv(const std::vector<ScenarioResult>& results)
{
    return table(results, {
                              MG_COL("status", quote(r.status)),
                              MG_COL("error", quote(r.error)),
                              MG_COL("gap", num(r.gap)),
                              MG_COL("nodes", std::to_string(r.nodes)),
                              MG_COL("J_percent", num(r.j_percent)),
                              MG_COL("C_base_kg", num(r.c_base_kg)),
                              MG_COL("C_renew_kg", num(r.c_renew_kg)),
                              MG_COL("f_grid", num(r.f_grid)),
                              MG_COL("f_solar", num(r.f_solar)),
                              MG_COL("f_batt_dchg", num(r.f_batt_dchg)),
                              MG_COL("f_chg_grid", num(r.f_chg_grid)),
                              MG_COL("f_chg_solar", num(r.f_chg_solar)),
                              MG_COL("battery_charged", std::string(r.battery_charged ? "1" : "0")),
                              MG_COL("cycles_per_year", num(r.cycles_per_year)),
                              MG_COL("annual_load_mwh", num(r.annual_load_mwh)),
                              MG_COL("occ_pv_usd", num(r.occ_pv_usd)),
                              MG_COL("occ_batt_usd", num(r.occ_batt_usd)),
                              MG_COL("lcopr", num(r.lcopr)),
                              MG_COL("lcos", num(r.lcos)),
                              MG_COL("coc", num(r.coc)),
                              MG_COL("tec", num(r.tec)),
                              MG_COL("utility_tco_usd", num(r.utility_tco_usd)),
                              MG_COL("years_op", num(r.years_op)),
                              MG_COL("utility_usd_per_kg", num(r.utility_usd_per_kg)),
                              MG_COL("fleet_full_per_mile", num(r.fleet_full_per_mile)),
                              MG_COL("fleet_partial_per_mile", num(r.fleet_partial_per_mile)),
                          });
}

std::vector<std::filesystem::path> export_plot_data(const std::vector<ScenarioResult>& results,
                                                    const std::filesystem::path& dir)
{
    if (results.empty()) throw ValidationError("no results to export");
    std::vector<ScenarioResult> ok;
    for (const auto& r : results)
        if (r.ok()) ok.push_back(r);
    // Site-ordered views sort by nameplate, as the figures do.
    std::vector<ScenarioResult> by_size = ok;
    std::stable_sort(by_size.begin(), by_size.end(), [](const ScenarioResult& a, const ScenarioResult& b) {
        return a.nameplate_mw < b.nameplate_mw;
    });

    const std::vector<std::pair<std::string, std::string>> files{
        {"plot_reduction_vs_site.csv",
         table(by_size, {MG_COL("J_percent", num(r.j_percent)), MG_COL("f_grid", num(r.f_grid)),
                         MG_COL("f_solar", num(r.f_solar)), MG_COL("f_batt_dchg", num(r.f_batt_dchg))})},
        {"plot_tec_vs_site.csv",
         table(by_size, {MG_COL("tec", num(r.tec)), MG_COL("lcopr", num(r.lcopr)), MG_COL("lcos", num(r.lcos)),
                         MG_COL("coc", num(r.coc))})},
        {"plot_utility_metric.csv",
         table(by_size, {MG_COL("utility_tco_usd", num(r.utility_tco_usd)), MG_COL("years_op", num(r.years_op)),
                         MG_COL("utility_usd_per_kg", num(r.utility_usd_per_kg))})},
        {"plot_cost_per_mile.csv",
         table(by_size, {MG_COL("fleet_full_per_mile", num(r.fleet_full_per_mile)),
                         MG_COL("fleet_partial_per_mile", num(r.fleet_partial_per_mile))})},
        {"plot_contours.csv",
         table(ok, {MG_COL("J_percent", num(r.j_percent)), MG_COL("tec", num(r.tec)),
                    MG_COL("utility_usd_per_kg", num(r.utility_usd_per_kg)),
                    MG_COL("fleet_full_per_mile", num(r.fleet_full_per_mile))})},
    };
    std::vector<std::filesystem::path> written;
    for (const auto& [name, content] : files) {
        write_text_file(dir / name, content);
        written.push_back(dir / name);
    }
    return written;
}

std::vector<std::filesystem::path> export_results(const std::vector<ScenarioResult>& results,
                                                  const std::filesystem::path& dir)
{
    if (results.empty()) throw ValidationError("no results to export");
    std::vector<std::filesystem::path> written;
    write_text_file(dir / "results.csv", results_to_csv(results));
    written.push_back(dir / "results.csv");
    write_text_file(dir / "results.json", results_to_json(results));
    written.push_back(dir / "results.json");
    std::ostringstream t;
    t << "cell,wall_time_s\n";
    for (const auto& r : results) t << cell_key(r.cell) << ',' << num(r.wall_time_s) << '\n';
    write_text_file(dir / "timings.csv", t.str());
    written.push_back(dir / "timings.csv");
    for (auto& p : export_plot_data(results, dir)) written.push_back(std::move(p));
    return written;
}

}  // namespace mgdeploy
