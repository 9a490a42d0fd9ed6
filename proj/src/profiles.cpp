#include "mgdeploy/profiles.hpp"

#include "mgdeploy/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mgdeploy {

std::string_view to_string(Unit unit)
{
    switch (unit) {
        case Unit::megawatt: return "MW";
        case Unit::capacity_factor: return "cf";
        case Unit::kg_co2_per_hour: return "kg/h";
    }
    return "?";
}

Unit parse_unit(std::string_view text)
{
    if (text == "MW" || text == "mw") return Unit::megawatt;
    if (text == "cf" || text == "capacity_factor" || text == "capacity factor") return Unit::capacity_factor;
    if (text == "kg/h" || text == "kg_co2_per_hour" || text == "kgCO2/h") return Unit::kg_co2_per_hour;
    throw ValidationError("unknown unit '" + std::string(text) + "'");
}

HourlyProfile::HourlyProfile(std::vector<double> values, Unit unit, std::string label)
    : values_(std::move(values)), unit_(unit), label_(std::move(label))
{
    if (values_.empty()) throw ValidationError("profile must contain at least one hour");
    for (std::size_t t = 0; t < values_.size(); ++t) {
        const double v = values_[t];
        if (!std::isfinite(v)) throw ValidationError("non-finite sample at hour " + std::to_string(t + 1));
        if (v < 0.0) throw ValidationError("negative sample at hour " + std::to_string(t + 1));
        if (unit_ == Unit::capacity_factor && v > 1.0)
            throw ValidationError("capacity factor above 1 at hour " + std::to_string(t + 1));
    }
}

HourlyProfile HourlyProfile::constant(std::size_t hours, double value, Unit unit, std::string label)
{
    return HourlyProfile(std::vector<double>(hours, value), unit, std::move(label));
}

double HourlyProfile::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double HourlyProfile::max() const { return *std::max_element(values_.begin(), values_.end()); }

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

}  // namespace

HourlyProfile load_profile(std::istream& source, Unit expected_unit, std::size_t hours, std::string label)
{
    std::string line;
    bool have_header = false;
    std::vector<double> values;
    values.reserve(hours);
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        if (view.front() == '#') {
            view.remove_prefix(1);
            view = trim(view);
            if (view.starts_with("unit:")) {
                view.remove_prefix(5);
                const Unit declared = parse_unit(trim(view));
                if (declared != expected_unit)
                    throw ValidationError("unit mismatch: file declares " + std::string(to_string(declared)) +
                                          ", expected " + std::string(to_string(expected_unit)));
            }
            continue;
        }
        if (!have_header) {
            if (view != "hour,value")
                throw ValidationError("expected header 'hour,value', got '" + std::string(view) + "'");
            have_header = true;
            continue;
        }
        const auto comma = view.find(',');
        if (comma == std::string_view::npos)
            throw ValidationError("malformed row at line " + std::to_string(line_no));
        long hour = 0;
        double value = 0.0;
        if (!parse_number(view.substr(0, comma), hour))
            throw ValidationError("unparseable hour at line " + std::to_string(line_no));
        if (!parse_number(view.substr(comma + 1), value))
            throw ValidationError("unparseable number at line " + std::to_string(line_no));
        if (hour != static_cast<long>(values.size()) + 1)
            throw ValidationError("non-monotone hour index at line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(values.size() + 1) + ", got " + std::to_string(hour));
        if (value < 0.0) throw ValidationError("negative sample at hour " + std::to_string(hour));
        if (expected_unit == Unit::capacity_factor && value > 1.0)
            throw ValidationError("capacity factor above 1 at hour " + std::to_string(hour));
        values.push_back(value);
    }
    if (!have_header) throw ValidationError("missing header 'hour,value'");
    if (values.size() != hours)
        throw ValidationError("expected " + std::to_string(hours) + " rows, got " + std::to_string(values.size()));
    return HourlyProfile(std::move(values), expected_unit, std::move(label));
}

HourlyProfile load_profile_file(const std::string& path, Unit expected_unit, std::size_t hours)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile '" + path + "'");
    return load_profile(in, expected_unit, hours, path);
}

void write_profile(std::ostream& sink, const HourlyProfile& profile)
{
    sink << "# unit: " << to_string(profile.unit()) << "\n";
    sink << "hour,value\n";
    sink << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t t = 0; t < profile.hours(); ++t) sink << (t + 1) << ',' << profile[t] << '\n';
}

HourlyProfile shift_profile(const HourlyProfile& p, long hours)
{
    const long T = static_cast<long>(p.hours());
    if (hours <= -T || hours >= T)
        throw ValidationError("shift of " + std::to_string(hours) + " hours exceeds horizon " + std::to_string(T));
    std::vector<double> out(p.hours());
    const auto src = p.values();
    for (long t = 0; t < T; ++t) out[static_cast<std::size_t>(((t + hours) % T + T) % T)] = src[t];
    return HourlyProfile(std::move(out), p.unit(), p.label());
}

HourlyProfile scale_profile(const HourlyProfile& p, double factor)
{
    if (!(factor >= 0.0)) throw ValidationError("scale factor must be non-negative");
    std::vector<double> out(p.values().begin(), p.values().end());
    for (double& v : out) v *= factor;
    if (p.unit() == Unit::capacity_factor && factor > 1.0) {
        // Scaled capacity factors leave [0, 1]; the result is a power series.
        return HourlyProfile(std::move(out), Unit::megawatt, p.label());
    }
    return HourlyProfile(std::move(out), p.unit(), p.label());
}

HourlyProfile available_capacity(const HourlyProfile& cf, double nameplate_mw)
{
    if (cf.unit() != Unit::capacity_factor)
        throw ValidationError("available_capacity expects a capacity-factor profile, got " +
                              std::string(to_string(cf.unit())));
    if (!(nameplate_mw >= 0.0)) throw ValidationError("nameplate must be non-negative");
    std::vector<double> out(cf.values().begin(), cf.values().end());
    for (double& v : out) v *= nameplate_mw;
    return HourlyProfile(std::move(out), Unit::megawatt, cf.label());
}

}  // namespace mgdeploy
