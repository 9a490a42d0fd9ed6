#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgdeploy {

inline constexpr std::size_t kHoursPerYear = 8760;

// Loads below this are treated as zero-load hours (no grid draw allowed).
inline constexpr double kZeroLoadThresholdMw = 1e-9;

enum class Unit { megawatt, capacity_factor, kg_co2_per_hour };

std::string_view to_string(Unit unit);
Unit parse_unit(std::string_view text);

// Fixed-horizon, non-negative hourly series. Immutable after construction;
// capacity-factor series are additionally bounded by 1.
class HourlyProfile {
public:
    HourlyProfile(std::vector<double> values, Unit unit, std::string label = {});

    static HourlyProfile constant(std::size_t hours, double value, Unit unit, std::string label = {});

    std::size_t hours() const { return values_.size(); }
    Unit unit() const { return unit_; }
    const std::string& label() const { return label_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t hour) const { return values_[hour]; }

    double sum() const;
    double max() const;

    bool operator==(const HourlyProfile& other) const = default;

private:
    std::vector<double> values_;
    Unit unit_;
    std::string label_;
};

// Reads `hour,value` CSV with exactly `hours` rows numbered 1..hours. A
// leading `# unit: <unit>` line, when present, must agree with
// `expected_unit`.
HourlyProfile load_profile(std::istream& source, Unit expected_unit, std::size_t hours = kHoursPerYear,
                           std::string label = {});
HourlyProfile load_profile_file(const std::string& path, Unit expected_unit,
                                std::size_t hours = kHoursPerYear);

void write_profile(std::ostream& sink, const HourlyProfile& profile);

// Circular shift: sample at hour t moves to hour t + hours (mod T).
HourlyProfile shift_profile(const HourlyProfile& p, long hours);

HourlyProfile scale_profile(const HourlyProfile& p, double factor);

// p_s(t) = cf(t) * nameplate
HourlyProfile available_capacity(const HourlyProfile& cf, double nameplate_mw);

}  // namespace mgdeploy
