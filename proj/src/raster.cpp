#include "mgdeploy/raster.hpp"

#include "mgdeploy/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mgdeploy {

GridRaster::GridRaster(std::size_t rows_, std::size_t cols_, double cell_size, double fill)
    : rows(rows_), cols(cols_), cell_size_m(cell_size), cells(rows_ * cols_, fill)
{
    validate();
}

void GridRaster::validate() const
{
    if (rows < 1 || cols < 1) throw ValidationError("raster must have at least one row and column");
    if (!(cell_size_m > 0.0)) throw ValidationError("raster cell size must be positive");
    if (cells.size() != rows * cols) throw ValidationError("raster cell count does not match its shape");
}

std::size_t BinaryGrid::count() const
{
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
}

}  // namespace

GridRaster read_ascii_grid(std::istream& in)
{
    GridRaster g;
    long ncols = -1, nrows = -1;
    bool have_cell = false;
    std::streampos data_start = in.tellg();
    std::string line;
    // Header lines are `key value`; the first line starting with a number
    // begins the data block.
    while (true) {
        data_start = in.tellg();
        if (!std::getline(in, line)) break;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        const char first = key.front();
        if (std::isdigit(static_cast<unsigned char>(first)) || first == '-' || first == '+' || first == '.') {
            in.clear();
            in.seekg(data_start);
            break;
        }
        double value = 0.0;
        if (!(ls >> value)) throw ValidationError("ascii grid: malformed header line '" + line + "'");
        key = lower(key);
        if (key == "ncols") ncols = static_cast<long>(value);
        else if (key == "nrows") nrows = static_cast<long>(value);
        else if (key == "xllcorner" || key == "xllcenter") g.xll = value;
        else if (key == "yllcorner" || key == "yllcenter") g.yll = value;
        else if (key == "cellsize") {
            g.cell_size_m = value;
            have_cell = true;
        } else if (key == "nodata_value") g.nodata = value;
        else throw ValidationError("ascii grid: unknown header key '" + key + "'");
    }
    if (ncols < 1 || nrows < 1 || !have_cell) throw ValidationError("ascii grid: incomplete header");
    g.rows = static_cast<std::size_t>(nrows);
    g.cols = static_cast<std::size_t>(ncols);
    g.cells.reserve(g.rows * g.cols);
    double v = 0.0;
    while (g.cells.size() < g.rows * g.cols && (in >> v)) g.cells.push_back(v);
    if (g.cells.size() != g.rows * g.cols)
        throw ValidationError("ascii grid: expected " + std::to_string(g.rows * g.cols) + " cells, got " +
                              std::to_string(g.cells.size()));
    g.validate();
    return g;
}

GridRaster read_ascii_grid_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open raster '" + path + "'");
    return read_ascii_grid(in);
}

void write_ascii_grid(std::ostream& out, const GridRaster& g)
{
    out << "ncols " << g.cols << "\n";
    out << "nrows " << g.rows << "\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "xllcorner " << g.xll << "\n";
    out << "yllcorner " << g.yll << "\n";
    out << "cellsize " << g.cell_size_m << "\n";
    if (g.nodata) out << "NODATA_value " << *g.nodata << "\n";
    for (std::size_t r = 0; r < g.rows; ++r) {
        for (std::size_t c = 0; c < g.cols; ++c) {
            if (c) out << ' ';
            out << g.at(r, c);
        }
        out << '\n';
    }
}

void write_ascii_grid_file(const std::string& path, const GridRaster& raster)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write raster '" + path + "'");
    write_ascii_grid(out, raster);
}

}  // namespace mgdeploy
