#pragma once

// Exclusion-layer siting pipeline: decision layers -> buffered violations ->
// composite conflict counts -> parcel catalog with nameplate capacities and
// representative capacity-factor profiles.
//
// The kernels here are OpenMP-parallel. siting_reference.hpp holds the serial
// brute-force versions the tests compare against.

#include "mgdeploy/profiles.hpp"
#include "mgdeploy/raster.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mgdeploy::siting {

inline constexpr double kMetersPerMile = 1609.344;
inline constexpr double kDefaultPowerDensityMwPerKm2 = 36.0;
inline constexpr std::size_t kDefaultBlockCells = 64;

enum class RuleMode { binary_no_go, threshold_above, threshold_below };

struct ExclusionRule {
    std::string layer_name;
    RuleMode mode = RuleMode::binary_no_go;
    std::optional<double> threshold;  // present iff a threshold mode
    std::string unit;                 // compared against the layer's unit tag when both are set
    double buffer_distance_m = 0.0;

    void validate() const;
};

struct CompositeMap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double cell_size_m = 90.0;
    std::size_t num_layers = 0;
    std::vector<std::uint16_t> counts;

    std::uint16_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
    bool viable(std::size_t r, std::size_t c) const { return at(r, c) == 0; }

    bool operator==(const CompositeMap&) const = default;
};

struct Parcel {
    int site_index = 0;
    std::size_t block_row = 0;  // origin cell of the block
    std::size_t block_col = 0;
    std::size_t viable_cells = 0;
    double viable_area_km2 = 0.0;
    double block_area_km2 = 0.0;
    double nameplate_mw = 0.0;
    std::optional<HourlyProfile> representative_profile;  // capacity factor

    bool operator==(const Parcel&) const = default;
};

struct SiteCatalog {
    std::size_t block_cells = kDefaultBlockCells;
    double power_density_mw_per_km2 = kDefaultPowerDensityMwPerKm2;
    std::vector<Parcel> parcels;

    bool operator==(const SiteCatalog&) const = default;
};

// Capacity-factor time series sampled at a raster cell.
struct ProfilePoint {
    std::size_t row = 0;
    std::size_t col = 0;
    HourlyProfile cf;
};

BinaryGrid apply_exclusion_rule(const GridRaster& layer, const ExclusionRule& rule);

// Dilate violations by a Euclidean disc of radius ceil(distance / cell) cells.
BinaryGrid buffer_violations(const BinaryGrid& violations, double distance_m);

CompositeMap composite(std::span<const BinaryGrid> layers);

SiteCatalog aggregate_parcels(const CompositeMap& map, std::size_t block_cells = kDefaultBlockCells,
                              double power_density_mw_per_km2 = kDefaultPowerDensityMwPerKm2);

// Index of the member closest (L2) to the element-wise mean; lowest index
// wins ties.
std::size_t meanoid_index(std::span<const HourlyProfile> members);
HourlyProfile representative_profile(std::span<const HourlyProfile> members);

// Each parcel takes the meanoid of the points inside its block; a parcel
// with no points falls back to the single point nearest its block center.
void assign_profiles(SiteCatalog& catalog, std::span<const ProfilePoint> points);

// Rule set loaded from a JSON config; layer paths are resolved relative to
// the config file.
struct LayerSpec {
    std::string path;
    ExclusionRule rule;
};

struct SitingConfig {
    std::vector<LayerSpec> layers;
    std::size_t block_cells = kDefaultBlockCells;
    double power_density_mw_per_km2 = kDefaultPowerDensityMwPerKm2;
};

SitingConfig load_siting_config(const std::string& path);

// Full pipeline over loaded rasters (one per rule, same shape).
SiteCatalog run_siting(std::span<const GridRaster> layers, std::span<const ExclusionRule> rules,
                       std::size_t block_cells = kDefaultBlockCells,
                       double power_density_mw_per_km2 = kDefaultPowerDensityMwPerKm2,
                       CompositeMap* composite_out = nullptr);

std::string catalog_to_json(const SiteCatalog& catalog, bool include_profiles = true);
SiteCatalog catalog_from_json(const std::string& text);

}  // namespace mgdeploy::siting
