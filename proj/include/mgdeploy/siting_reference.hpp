#pragma once

// Serial brute-force siting kernels. Kept as the reference the parallel
// kernels are tested and benchmarked against.

#include "mgdeploy/siting.hpp"

namespace mgdeploy::siting::reference {

BinaryGrid apply_exclusion_rule(const GridRaster& layer, const ExclusionRule& rule);

// Stamps the full disc around every violation cell.
BinaryGrid buffer_violations(const BinaryGrid& violations, double distance_m);

CompositeMap composite(std::span<const BinaryGrid> layers);

SiteCatalog aggregate_parcels(const CompositeMap& map, std::size_t block_cells = kDefaultBlockCells,
                              double power_density_mw_per_km2 = kDefaultPowerDensityMwPerKm2);

std::size_t meanoid_index(std::span<const HourlyProfile> members);

}  // namespace mgdeploy::siting::reference
