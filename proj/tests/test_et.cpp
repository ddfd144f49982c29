#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <irrisim/et.hpp>

#include "support/temp_dir.hpp"

using namespace irrisim;

namespace {

// Mid-latitude spring day, cross-checked by hand against the closed formula.
WeatherSample spring_day() {
    WeatherSample w;
    w.temp_2m = 16.9;
    w.delta_svp = 0.122;
    w.net_irradiance = 13.28;
    w.ground_heat_flux = 0.0;
    w.psychrometric_const = 0.0666;
    w.wind_2m = 2.078;
    w.sat_vapor_pressure = 1.997;
    w.ambient_vapor_pressure = 1.409;
    return w;
}

} // namespace

// ---------------------------------------------------------------------------
// Penman-Monteith
// ---------------------------------------------------------------------------

TEST_CASE("penman_monteith reproduces the hand-checked reference day") {
    CHECK(penman_monteith(spring_day()) ==
          doctest::Approx(3.877117063268325).epsilon(1e-12));
}

TEST_CASE("penman_monteith collapses term by term") {
    WeatherSample w = spring_day();
    // no wind and saturated air: only the radiation term remains
    w.wind_2m = 0;
    w.ambient_vapor_pressure = w.sat_vapor_pressure;
    const double expected = 0.408 * w.delta_svp *
                            (w.net_irradiance - w.ground_heat_flux) /
                            (w.delta_svp + w.psychrometric_const);
    CHECK(penman_monteith(w) == doctest::Approx(expected).epsilon(1e-12));

    // no net energy either: nothing drives evaporation
    w.net_irradiance = 0;
    CHECK(penman_monteith(w) == 0.0);
}

TEST_CASE("penman_monteith clamps condensing conditions at zero") {
    WeatherSample w = spring_day();
    w.net_irradiance = 0.0;
    w.ground_heat_flux = 5.0;  // ground absorbing more than radiation supplies
    w.wind_2m = 0.0;
    w.ambient_vapor_pressure = w.sat_vapor_pressure;
    CHECK(penman_monteith(w) == 0.0);
}

TEST_CASE("weather validation names the offending field") {
    WeatherSample w = spring_day();
    w.ambient_vapor_pressure = w.sat_vapor_pressure + 0.5;
    CHECK_THROWS_WITH_AS(w.validate(),
                         doctest::Contains("ambient_vapor_pressure"),
                         std::invalid_argument);
    w = spring_day();
    w.wind_2m = -1;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    w = spring_day();
    w.temp_2m = -273.5;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    CHECK_NOTHROW(spring_day().validate());
}

// ---------------------------------------------------------------------------
// Blaney-Criddle
// ---------------------------------------------------------------------------

TEST_CASE("blaney_criddle matches the closed form") {
    CHECK(blaney_criddle(20.0, 0.55) == doctest::Approx(9.46).epsilon(1e-12));
    CHECK(blaney_criddle(0.0, 0.30) == doctest::Approx(2.4).epsilon(1e-12));
    // linear in rho
    CHECK(blaney_criddle(20.0, 1.10) ==
          doctest::Approx(2 * blaney_criddle(20.0, 0.55)).epsilon(1e-12));
}

TEST_CASE("blaney_criddle clamps cold conditions at zero") {
    CHECK(blaney_criddle(-30.0, 0.55) == 0.0);
    CHECK(blaney_criddle(-17.4, 0.55) == 0.0);  // just below the 0.46 T + 8 root
    CHECK(blaney_criddle(20.0, 0.0) == 0.0);
}

TEST_CASE("blaney_criddle rejects a negative daytime fraction") {
    CHECK_THROWS_AS(blaney_criddle(20.0, -0.1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

TEST_CASE("daily depths spread evenly over 1440 minutes") {
    CHECK(daily_to_per_minute(1440.0) == doctest::Approx(1.0));
    CHECK(daily_to_per_minute(0.0) == 0.0);
    CHECK(daily_to_per_minute(3.024) == doctest::Approx(0.0021).epsilon(1e-15));
    CHECK(daily_to_per_minute(9.072) == doctest::Approx(0.0063).epsilon(1e-15));
}

TEST_CASE("crop_et combines the dual coefficients") {
    CHECK(crop_et(0.0063, 1.15, 0.3) == doctest::Approx(0.009135).epsilon(1e-15));
    CHECK(crop_et(0.0063, 1.15, 0.3, 0.0) ==
          doctest::Approx(0.0063 * 0.3).epsilon(1e-15));
    CHECK(crop_et(0.0, 1.15, 0.3) == 0.0);
    // half stress sits exactly between the two extremes
    const double lo = crop_et(0.004, 0.8, 0.1, 0.0);
    const double hi = crop_et(0.004, 0.8, 0.1, 1.0);
    CHECK(crop_et(0.004, 0.8, 0.1, 0.5) == doctest::Approx((lo + hi) / 2));
}

// ---------------------------------------------------------------------------
// Daytime-fraction table
// ---------------------------------------------------------------------------

TEST_CASE("rho table loads and answers nearest-latitude lookups") {
    const RhoTable table = RhoTable::load(IRRISIM_DATA_DIR "/blaney_criddle_rho.txt");
    REQUIRE(table.size() > 0);

    // every monthly fraction is a percentage share of the annual daytime
    for (int month = 1; month <= 12; ++month) {
        const double rho = table.lookup(40.0, month);
        CHECK(rho > 0.1);
        CHECK(rho < 0.45);
    }
    // at the equator day length barely varies across the year
    double lo = 1, hi = 0;
    for (int month = 1; month <= 12; ++month) {
        const double rho = table.lookup(0.0, month);
        lo = std::min(lo, rho);
        hi = std::max(hi, rho);
    }
    CHECK(hi - lo < 0.01);
    // high northern latitude: June well above December
    CHECK(table.lookup(55.0, 6) > table.lookup(55.0, 12));
    // nearest-band matching
    CHECK(table.lookup(39.9, 6) == table.lookup(40.0, 6));
}

TEST_CASE("rho table rejects bad months and malformed files") {
    const RhoTable table = RhoTable::load(IRRISIM_DATA_DIR "/blaney_criddle_rho.txt");
    CHECK_THROWS_AS(table.lookup(40.0, 0), std::out_of_range);
    CHECK_THROWS_AS(table.lookup(40.0, 13), std::out_of_range);

    testsupport::TempDir dir;
    CHECK_THROWS(RhoTable::load(dir.file("missing.txt")));

    const std::string bad = dir.file("bad.txt");
    std::ofstream(bad) << "latitude_deg month rho\n40 1 not_a_number\n";
    CHECK_THROWS(RhoTable::load(bad));
}
