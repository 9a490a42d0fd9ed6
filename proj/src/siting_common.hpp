#pragma once

#include "mgdeploy/errors.hpp"
#include "mgdeploy/siting.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace mgdeploy::siting::detail {

inline long buffer_radius_cells(double distance_m, double cell_size_m)
{
    if (!(distance_m >= 0.0)) throw ValidationError("buffer distance must be non-negative");
    return static_cast<long>(std::ceil(distance_m / cell_size_m - 1e-9));
}

inline void check_rule_against_layer(const GridRaster& layer, const ExclusionRule& rule)
{
    layer.validate();
    rule.validate();
    if (!rule.unit.empty() && !layer.unit.empty() && rule.unit != layer.unit)
        throw ValidationError("unit mismatch for layer '" + rule.layer_name + "': rule uses " + rule.unit +
                              ", layer is " + layer.unit);
}

inline bool violates(const GridRaster& layer, const ExclusionRule& rule, double v)
{
    if (layer.is_nodata(v)) return true;
    switch (rule.mode) {
        case RuleMode::binary_no_go: return v != 0.0;
        case RuleMode::threshold_above: return v > *rule.threshold;
        case RuleMode::threshold_below: return v < *rule.threshold;
    }
    return true;
}

inline void check_same_shape(std::span<const BinaryGrid> layers)
{
    if (layers.empty()) throw ValidationError("at least one layer required");
    for (const auto& l : layers) {
        if (l.rows != layers[0].rows || l.cols != layers[0].cols)
            throw ValidationError("composite: layer shapes differ");
    }
    if (layers.size() > 65535) throw ValidationError("composite: too many layers");
}

inline void check_aggregate_args(const CompositeMap& map, std::size_t block_cells, double density)
{
    if (block_cells < 1) throw ValidationError("block_cells must be at least 1");
    if (!(density > 0.0)) throw ValidationError("power density must be positive");
    if (map.rows < 1 || map.cols < 1) throw ValidationError("composite map is empty");
}

inline Parcel make_parcel(const CompositeMap& map, std::size_t br, std::size_t bc, std::size_t block_cells,
                          std::size_t viable, double density)
{
    const double cell_km2 = (map.cell_size_m / 1000.0) * (map.cell_size_m / 1000.0);
    const std::size_t h = std::min(block_cells, map.rows - br);
    const std::size_t w = std::min(block_cells, map.cols - bc);
    Parcel p;
    p.block_row = br;
    p.block_col = bc;
    p.viable_cells = viable;
    p.viable_area_km2 = static_cast<double>(viable) * cell_km2;
    p.block_area_km2 = static_cast<double>(h * w) * cell_km2;
    p.nameplate_mw = p.viable_area_km2 * density;
    return p;
}

// Sort by increasing nameplate (block origin breaks ties) and number 1..N.
inline void index_parcels(std::vector<Parcel>& parcels)
{
    std::sort(parcels.begin(), parcels.end(), [](const Parcel& a, const Parcel& b) {
        return std::tie(a.nameplate_mw, a.block_row, a.block_col) <
               std::tie(b.nameplate_mw, b.block_row, b.block_col);
    });
    for (std::size_t i = 0; i < parcels.size(); ++i) parcels[i].site_index = static_cast<int>(i + 1);
}

inline void check_members(std::span<const HourlyProfile> members)
{
    if (members.empty()) throw ValidationError("representative profile needs at least one member");
    for (const auto& m : members)
        if (m.hours() != members[0].hours()) throw ValidationError("member profiles have different horizons");
}

}  // namespace mgdeploy::siting::detail
