#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mgdeploy {

// Row-major grid of real samples, row 0 at the top (north), as in ESRI ASCII.
struct GridRaster {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double cell_size_m = 90.0;
    double xll = 0.0;
    double yll = 0.0;
    std::optional<double> nodata;
    std::string unit;  // empty when untagged
    std::vector<double> cells;

    GridRaster() = default;
    GridRaster(std::size_t rows_, std::size_t cols_, double cell_size = 90.0, double fill = 0.0);

    double& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
    bool is_nodata(double v) const { return nodata && v == *nodata; }

    void validate() const;
};

// 0 = suitable, 1 = violation.
struct BinaryGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double cell_size_m = 90.0;
    std::vector<std::uint8_t> cells;

    BinaryGrid() = default;
    BinaryGrid(std::size_t rows_, std::size_t cols_, double cell_size = 90.0)
        : rows(rows_), cols(cols_), cell_size_m(cell_size), cells(rows_ * cols_, 0)
    {
    }

    std::uint8_t& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
    std::size_t count() const;

    bool operator==(const BinaryGrid&) const = default;
};

GridRaster read_ascii_grid(std::istream& in);
GridRaster read_ascii_grid_file(const std::string& path);
void write_ascii_grid(std::ostream& out, const GridRaster& raster);
void write_ascii_grid_file(const std::string& path, const GridRaster& raster);

}  // namespace mgdeploy
