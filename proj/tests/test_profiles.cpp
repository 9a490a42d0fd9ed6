#include <doctest.h>

#include "mgdeploy/errors.hpp"
#include "mgdeploy/profiles.hpp"

#include <random>
#include <sstream>

using namespace mgdeploy;

namespace {

std::string make_csv(std::size_t rows, double value = 0.0)
{
    std::ostringstream os;
    os << "hour,value\n";
    for (std::size_t t = 1; t <= rows; ++t) os << t << ',' << value << '\n';
    return os.str();
}

std::string error_of(const std::string& csv, Unit unit = Unit::megawatt)
{
    std::istringstream in(csv);
    try {
        (void)load_profile(in, unit);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

HourlyProfile random_profile(std::mt19937& rng, std::size_t hours)
{
    std::uniform_real_distribution<double> d(0.0, 50.0);
    std::vector<double> v(hours);
    for (double& x : v) x = d(rng);
    return HourlyProfile(std::move(v), Unit::megawatt);
}

}  // namespace

TEST_CASE("load_profile: all-zero year")
{
    std::istringstream in(make_csv(8760, 0.0));
    const auto p = load_profile(in, Unit::megawatt);
    CHECK(p.hours() == 8760);
    CHECK(p.sum() == 0.0);
}

TEST_CASE("load_profile: error paths")
{
    std::string csv = make_csv(8760);
    const auto pos = csv.find("\n17,0\n");
    REQUIRE(pos != std::string::npos);
    csv.replace(pos, 6, "\n17,-3.2\n");
    CHECK(error_of(csv) == "negative sample at hour 17");

    CHECK(error_of(make_csv(8759)) == "expected 8760 rows, got 8759");
    CHECK(error_of("hour,value\n1,0\n3,0\n").find("non-monotone hour index") == 0);
    CHECK(error_of("hour,value\n1,abc\n").find("unparseable number") == 0);
    CHECK(error_of(make_csv(8760, 1.5), Unit::capacity_factor) == "capacity factor above 1 at hour 1");
    CHECK(error_of("# unit: MW\n" + make_csv(8760), Unit::capacity_factor).find("unit mismatch") == 0);
}

TEST_CASE("load_profile: unit sidecar line and short horizons")
{
    std::istringstream in("# unit: cf\nhour,value\n1,0.25\n2,0.5\n3,1\n4,0\n");
    const auto p = load_profile(in, Unit::capacity_factor, 4);
    CHECK(p.unit() == Unit::capacity_factor);
    CHECK(p[2] == 1.0);

    std::ostringstream out;
    write_profile(out, p);
    std::istringstream back(out.str());
    CHECK(load_profile(back, Unit::capacity_factor, 4) == p);
}

TEST_CASE("shift_profile")
{
    const HourlyProfile p({1, 0, 0, 0}, Unit::megawatt);
    CHECK(shift_profile(p, 0) == p);
    const auto shifted = shift_profile(p, 1);
    CHECK(std::vector<double>(shifted.values().begin(), shifted.values().end()) == std::vector<double>{0, 1, 0, 0});
    CHECK(shift_profile(p, -1)[3] == 1.0);
    CHECK_THROWS_AS(shift_profile(p, 4), ValidationError);
    CHECK_THROWS_AS(shift_profile(p, -4), ValidationError);

    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_profile(rng, 48);
        const long h = static_cast<long>(rng() % 95) - 47;
        const auto s = shift_profile(q, h);
        CHECK(shift_profile(s, -h) == q);
        auto a = std::vector<double>(q.values().begin(), q.values().end());
        auto b = std::vector<double>(s.values().begin(), s.values().end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);  // same multiset, hence the same sum in the same order
    }
}

TEST_CASE("scale_profile")
{
    const HourlyProfile p({0.2, 0.5}, Unit::capacity_factor);
    CHECK(scale_profile(p, 1.0) == p);
    CHECK(scale_profile(p, 0.0).sum() == 0.0);
    const auto s = scale_profile(p, 100.0);
    CHECK(s[0] == doctest::Approx(20.0));
    CHECK(s[1] == doctest::Approx(50.0));
    CHECK_THROWS_AS(scale_profile(p, -1.0), ValidationError);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> f(0.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_profile(rng, 24);
        const double a = f(rng), b = f(rng);
        const auto lhs = scale_profile(scale_profile(q, a), b);
        const auto rhs = scale_profile(q, a * b);
        for (std::size_t t = 0; t < q.hours(); ++t)
            CHECK(lhs[t] == doctest::Approx(rhs[t]).epsilon(1e-12));
    }
}

TEST_CASE("available_capacity")
{
    CHECK(available_capacity(HourlyProfile::constant(24, 0.0, Unit::capacity_factor), 80.0).sum() == 0.0);
    const auto full = available_capacity(HourlyProfile::constant(24, 1.0, Unit::capacity_factor), 50.0);
    CHECK(full.unit() == Unit::megawatt);
    CHECK(full.max() == 50.0);
    CHECK(full[7] == 50.0);

    std::vector<double> cf(24, 0.0);
    cf[12] = 0.6;
    const HourlyProfile noon(cf, Unit::capacity_factor);
    CHECK(available_capacity(noon, 120.0)[12] == doctest::Approx(72.0));
    CHECK_THROWS_AS(available_capacity(HourlyProfile::constant(4, 1.0, Unit::megawatt), 1.0), ValidationError);

    // Linear in nameplate: doubling is exact in binary floating point.
    const auto one = available_capacity(noon, 33.3);
    const auto two = available_capacity(noon, 66.6);
    for (std::size_t t = 0; t < 24; ++t) CHECK(two[t] == 2.0 * one[t]);
}
