#include "mgdeploy/siting.hpp"

#include "siting_common.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>

namespace mgdeploy::siting {

void ExclusionRule::validate() const
{
    const bool threshold_mode = mode != RuleMode::binary_no_go;
    if (threshold_mode != threshold.has_value())
        throw ValidationError("rule '" + layer_name + "': threshold must be present iff the mode is a threshold mode");
    if (!(buffer_distance_m >= 0.0)) throw ValidationError("rule '" + layer_name + "': negative buffer distance");
}

BinaryGrid apply_exclusion_rule(const GridRaster& layer, const ExclusionRule& rule)
{
    detail::check_rule_against_layer(layer, rule);
    BinaryGrid out(layer.rows, layer.cols, layer.cell_size_m);
    const long n = static_cast<long>(layer.cells.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out.cells[i] = detail::violates(layer, rule, layer.cells[i]) ? 1 : 0;
    return out;
}

namespace {

constexpr double kFar = 1e20;

// Squared 1-D distance transform of a sampled function (lower envelope of
// parabolas). `f` holds 0 at sites and kFar elsewhere.
void distance_transform_1d(const double* f, std::size_t n, double* d, std::vector<long>& v, std::vector<double>& z)
{
    v.resize(n);
    z.resize(n + 1);
    long k = -1;
    for (std::size_t q = 0; q < n; ++q) {
        if (f[q] >= kFar) continue;
        const double fq = f[q] + static_cast<double>(q) * static_cast<double>(q);
        double s = 0.0;
        while (k >= 0) {
            const double p = static_cast<double>(v[k]);
            s = (fq - (f[v[k]] + p * p)) / (2.0 * (static_cast<double>(q) - p));
            if (s <= z[k]) --k;
            else break;
        }
        ++k;
        v[k] = static_cast<long>(q);
        z[k] = (k == 0) ? -std::numeric_limits<double>::infinity() : s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) {
        std::fill(d, d + n, kFar);
        return;
    }
    long j = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[j + 1] < static_cast<double>(q)) ++j;
        const double diff = static_cast<double>(q) - static_cast<double>(v[j]);
        d[q] = diff * diff + f[v[j]];
    }
}

}  // namespace

BinaryGrid buffer_violations(const BinaryGrid& violations, double distance_m)
{
    const long radius = detail::buffer_radius_cells(distance_m, violations.cell_size_m);
    if (radius == 0) return violations;

    const long rows = static_cast<long>(violations.rows);
    const long cols = static_cast<long>(violations.cols);
    std::vector<double> col_pass(violations.cells.size());

    // Vertical pass: row distance to the nearest violation in each column,
    // swept down then up over strips of columns.
    constexpr long kStrip = 64;
    const long none = rows + 1;
    const long strips = (cols + kStrip - 1) / kStrip;
#pragma omp parallel for schedule(static)
    for (long sidx = 0; sidx < strips; ++sidx) {
        const long c0 = sidx * kStrip;
        const long c1 = std::min(cols, c0 + kStrip);
        std::vector<long> g((c1 - c0) * rows);
        for (long r = 0; r < rows; ++r)
            for (long c = c0; c < c1; ++c) {
                long& cell = g[r * (c1 - c0) + (c - c0)];
                if (violations.cells[r * cols + c]) cell = 0;
                else cell = r > 0 ? std::min(none, g[(r - 1) * (c1 - c0) + (c - c0)] + 1) : none;
            }
        for (long r = rows - 2; r >= 0; --r)
            for (long c = c0; c < c1; ++c) {
                long& cell = g[r * (c1 - c0) + (c - c0)];
                cell = std::min(cell, g[(r + 1) * (c1 - c0) + (c - c0)] + 1);
            }
        for (long r = 0; r < rows; ++r)
            for (long c = c0; c < c1; ++c) {
                const long v = g[r * (c1 - c0) + (c - c0)];
                col_pass[r * cols + c] = v >= none ? kFar : static_cast<double>(v) * static_cast<double>(v);
            }
    }

    BinaryGrid out(violations.rows, violations.cols, violations.cell_size_m);
    const double limit = static_cast<double>(radius) * static_cast<double>(radius);
#pragma omp parallel
    {
        std::vector<double> d(cols);
        std::vector<long> v;
        std::vector<double> z;
#pragma omp for schedule(static)
        for (long r = 0; r < rows; ++r) {
            distance_transform_1d(&col_pass[r * cols], cols, d.data(), v, z);
            for (long c = 0; c < cols; ++c) out.cells[r * cols + c] = d[c] <= limit ? 1 : 0;
        }
    }
    return out;
}

CompositeMap composite(std::span<const BinaryGrid> layers)
{
    detail::check_same_shape(layers);
    CompositeMap map;
    map.rows = layers[0].rows;
    map.cols = layers[0].cols;
    map.cell_size_m = layers[0].cell_size_m;
    map.num_layers = layers.size();
    map.counts.assign(map.rows * map.cols, 0);
    const long rows = static_cast<long>(map.rows);
    const std::size_t cols = map.cols;
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) {
        std::uint16_t* out = map.counts.data() + r * cols;
        for (const auto& layer : layers) {
            const std::uint8_t* in = layer.cells.data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) out[c] += in[c];
        }
    }
    return map;
}

SiteCatalog aggregate_parcels(const CompositeMap& map, std::size_t block_cells, double density)
{
    detail::check_aggregate_args(map, block_cells, density);
    const std::size_t brows = (map.rows + block_cells - 1) / block_cells;
    const std::size_t bcols = (map.cols + block_cells - 1) / block_cells;
    std::vector<std::size_t> viable(brows * bcols, 0);
    const long nblocks = static_cast<long>(viable.size());
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < nblocks; ++b) {
        const std::size_t br = (static_cast<std::size_t>(b) / bcols) * block_cells;
        const std::size_t bc = (static_cast<std::size_t>(b) % bcols) * block_cells;
        std::size_t count = 0;
        for (std::size_t r = br; r < std::min(map.rows, br + block_cells); ++r)
            for (std::size_t c = bc; c < std::min(map.cols, bc + block_cells); ++c) count += map.viable(r, c);
        viable[b] = count;
    }

    SiteCatalog catalog;
    catalog.block_cells = block_cells;
    catalog.power_density_mw_per_km2 = density;
    for (std::size_t b = 0; b < viable.size(); ++b) {
        if (viable[b] == 0) continue;
        catalog.parcels.push_back(detail::make_parcel(map, (b / bcols) * block_cells, (b % bcols) * block_cells,
                                                      block_cells, viable[b], density));
    }
    detail::index_parcels(catalog.parcels);
    return catalog;
}

std::size_t meanoid_index(std::span<const HourlyProfile> members)
{
    detail::check_members(members);
    const long T = static_cast<long>(members[0].hours());
    const long K = static_cast<long>(members.size());
    std::vector<double> mean(T, 0.0);
#pragma omp parallel for schedule(static)
    for (long t = 0; t < T; ++t) {
        double s = 0.0;
        for (const auto& m : members) s += m[t];
        mean[t] = s / static_cast<double>(K);
    }
    std::vector<double> dist(K, 0.0);
#pragma omp parallel for schedule(static)
    for (long k = 0; k < K; ++k) {
        double d = 0.0;
        for (long t = 0; t < T; ++t) d += (members[k][t] - mean[t]) * (members[k][t] - mean[t]);
        dist[k] = d;
    }
    std::size_t best = 0;
    for (long k = 1; k < K; ++k)
        if (dist[k] < dist[best]) best = static_cast<std::size_t>(k);
    return best;
}

HourlyProfile representative_profile(std::span<const HourlyProfile> members)
{
    return members[meanoid_index(members)];
}

void assign_profiles(SiteCatalog& catalog, std::span<const ProfilePoint> points)
{
    if (points.empty()) throw ValidationError("no capacity-factor points supplied");
    for (const auto& p : points)
        if (p.cf.unit() != Unit::capacity_factor)
            throw ValidationError("profile points must carry capacity-factor profiles");
    const std::size_t B = catalog.block_cells;
    for (auto& parcel : catalog.parcels) {
        std::vector<HourlyProfile> members;
        for (const auto& p : points) {
            if (p.row >= parcel.block_row && p.row < parcel.block_row + B && p.col >= parcel.block_col &&
                p.col < parcel.block_col + B)
                members.push_back(p.cf);
        }
        if (members.empty()) {
            const double cr = static_cast<double>(parcel.block_row) + 0.5 * static_cast<double>(B);
            const double cc = static_cast<double>(parcel.block_col) + 0.5 * static_cast<double>(B);
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double dr = static_cast<double>(points[i].row) - cr;
                const double dc = static_cast<double>(points[i].col) - cc;
                if (dr * dr + dc * dc < best_d) {
                    best_d = dr * dr + dc * dc;
                    best = i;
                }
            }
            members.push_back(points[best].cf);
        }
        parcel.representative_profile = representative_profile(members);
    }
}

SiteCatalog run_siting(std::span<const GridRaster> layers, std::span<const ExclusionRule> rules,
                       std::size_t block_cells, double density, CompositeMap* composite_out)
{
    if (layers.size() != rules.size()) throw ValidationError("one rule per layer required");
    std::vector<BinaryGrid> decisions;
    decisions.reserve(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        auto b = apply_exclusion_rule(layers[i], rules[i]);
        decisions.push_back(buffer_violations(b, rules[i].buffer_distance_m));
    }
    CompositeMap map = composite(decisions);
    SiteCatalog catalog = aggregate_parcels(map, block_cells, density);
    if (composite_out) *composite_out = std::move(map);
    return catalog;
}

namespace {

RuleMode parse_mode(const std::string& s)
{
    if (s == "binary" || s == "no_go" || s == "binary_no_go") return RuleMode::binary_no_go;
    if (s == "above" || s == "threshold_above") return RuleMode::threshold_above;
    if (s == "below" || s == "threshold_below") return RuleMode::threshold_below;
    throw ValidationError("unknown rule mode '" + s + "'");
}

}  // namespace

SitingConfig load_siting_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open siting config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("siting config: " + std::string(e.what()));
    }
    const auto base = std::filesystem::path(path).parent_path();
    SitingConfig cfg;
    try {
        cfg.block_cells = j.value("block_cells", kDefaultBlockCells);
        cfg.power_density_mw_per_km2 = j.value("power_density_mw_per_km2", kDefaultPowerDensityMwPerKm2);
        for (const auto& l : j.at("layers")) {
            LayerSpec spec;
            spec.path = (base / l.at("path").get<std::string>()).string();
            spec.rule.layer_name = l.value("name", spec.path);
            spec.rule.mode = parse_mode(l.value("mode", std::string("binary_no_go")));
            if (l.contains("threshold")) spec.rule.threshold = l.at("threshold").get<double>();
            spec.rule.unit = l.value("unit", std::string());
            double buffer = l.value("buffer_m", 0.0);
            if (l.contains("buffer_km")) buffer = l.at("buffer_km").get<double>() * 1000.0;
            if (l.contains("buffer_miles")) buffer = l.at("buffer_miles").get<double>() * kMetersPerMile;
            spec.rule.buffer_distance_m = buffer;
            spec.rule.validate();
            cfg.layers.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("siting config: " + std::string(e.what()));
    }
    if (cfg.layers.empty()) throw ValidationError("at least one layer required");
    return cfg;
}

std::string catalog_to_json(const SiteCatalog& catalog, bool include_profiles)
{
    nlohmann::ordered_json j;
    j["block_cells"] = catalog.block_cells;
    j["power_density_mw_per_km2"] = catalog.power_density_mw_per_km2;
    j["parcels"] = nlohmann::ordered_json::array();
    for (const auto& p : catalog.parcels) {
        nlohmann::ordered_json e;
        e["site_index"] = p.site_index;
        e["block_row"] = p.block_row;
        e["block_col"] = p.block_col;
        e["viable_cells"] = p.viable_cells;
        e["viable_area_km2"] = p.viable_area_km2;
        e["block_area_km2"] = p.block_area_km2;
        e["nameplate_mw"] = p.nameplate_mw;
        if (include_profiles && p.representative_profile) {
            const auto v = p.representative_profile->values();
            e["representative_profile"] = std::vector<double>(v.begin(), v.end());
        }
        j["parcels"].push_back(std::move(e));
    }
    return j.dump(2);
}

SiteCatalog catalog_from_json(const std::string& text)
{
    SiteCatalog c;
    try {
        const auto j = nlohmann::json::parse(text);
        c.block_cells = j.at("block_cells").get<std::size_t>();
        c.power_density_mw_per_km2 = j.at("power_density_mw_per_km2").get<double>();
        for (const auto& e : j.at("parcels")) {
            Parcel p;
            p.site_index = e.at("site_index").get<int>();
            p.block_row = e.at("block_row").get<std::size_t>();
            p.block_col = e.at("block_col").get<std::size_t>();
            p.viable_cells = e.at("viable_cells").get<std::size_t>();
            p.viable_area_km2 = e.at("viable_area_km2").get<double>();
            p.block_area_km2 = e.at("block_area_km2").get<double>();
            p.nameplate_mw = e.at("nameplate_mw").get<double>();
            if (e.contains("representative_profile"))
                p.representative_profile = HourlyProfile(e.at("representative_profile").get<std::vector<double>>(),
                                                         Unit::capacity_factor);
            c.parcels.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("site catalog: " + std::string(e.what()));
    }
    return c;
}

}  // namespace mgdeploy::siting
