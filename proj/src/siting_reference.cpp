#include "mgdeploy/siting_reference.hpp"

#include "siting_common.hpp"

namespace mgdeploy::siting::reference {

BinaryGrid apply_exclusion_rule(const GridRaster& layer, const ExclusionRule& rule)
{
    detail::check_rule_against_layer(layer, rule);
    BinaryGrid out(layer.rows, layer.cols, layer.cell_size_m);
    for (std::size_t r = 0; r < layer.rows; ++r)
        for (std::size_t c = 0; c < layer.cols; ++c)
            out.at(r, c) = detail::violates(layer, rule, layer.at(r, c)) ? 1 : 0;
    return out;
}

BinaryGrid buffer_violations(const BinaryGrid& violations, double distance_m)
{
    const long radius = detail::buffer_radius_cells(distance_m, violations.cell_size_m);
    BinaryGrid out = violations;
    if (radius == 0) return out;
    const long rows = static_cast<long>(violations.rows);
    const long cols = static_cast<long>(violations.cols);
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) {
            if (!violations.at(r, c)) continue;
            for (long dr = -radius; dr <= radius; ++dr) {
                for (long dc = -radius; dc <= radius; ++dc) {
                    if (dr * dr + dc * dc > radius * radius) continue;
                    const long rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < rows && cc >= 0 && cc < cols) out.at(rr, cc) = 1;
                }
            }
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
    for (const auto& layer : layers)
        for (std::size_t i = 0; i < map.counts.size(); ++i) map.counts[i] += layer.cells[i];
    return map;
}

SiteCatalog aggregate_parcels(const CompositeMap& map, std::size_t block_cells, double density)
{
    detail::check_aggregate_args(map, block_cells, density);
    SiteCatalog catalog;
    catalog.block_cells = block_cells;
    catalog.power_density_mw_per_km2 = density;
    for (std::size_t br = 0; br < map.rows; br += block_cells) {
        for (std::size_t bc = 0; bc < map.cols; bc += block_cells) {
            std::size_t viable = 0;
            for (std::size_t r = br; r < std::min(map.rows, br + block_cells); ++r)
                for (std::size_t c = bc; c < std::min(map.cols, bc + block_cells); ++c)
                    if (map.viable(r, c)) ++viable;
            if (viable > 0)
                catalog.parcels.push_back(detail::make_parcel(map, br, bc, block_cells, viable, density));
        }
    }
    detail::index_parcels(catalog.parcels);
    return catalog;
}

std::size_t meanoid_index(std::span<const HourlyProfile> members)
{
    detail::check_members(members);
    const std::size_t T = members[0].hours();
    std::vector<double> mean(T, 0.0);
    for (const auto& m : members)
        for (std::size_t t = 0; t < T; ++t) mean[t] += m[t];
    for (double& v : mean) v /= static_cast<double>(members.size());
    std::size_t best = 0;
    double best_d = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        double d = 0.0;
        for (std::size_t t = 0; t < T; ++t) d += (members[k][t] - mean[t]) * (members[k][t] - mean[t]);
        if (k == 0 || d < best_d) {
            best = k;
            best_d = d;
        }
    }
    return best;
}

}  // namespace mgdeploy::siting::reference
