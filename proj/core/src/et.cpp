#include "irrisim/et.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irrisim {

void WeatherSample::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw std::invalid_argument(std::string("WeatherSample: ") + what);
    };
    require(temp_2m > -273.0, "temp_2m must be above absolute zero");
    require(delta_svp > 0.0, "delta_svp must be > 0");
    require(psychrometric_const > 0.0, "psychrometric_const must be > 0");
    require(wind_2m >= 0.0, "wind_2m must be >= 0");
    require(sat_vapor_pressure >= 0.0, "sat_vapor_pressure must be >= 0");
    require(ambient_vapor_pressure >= 0.0, "ambient_vapor_pressure must be >= 0");
    require(ambient_vapor_pressure <= sat_vapor_pressure, "ambient_vapor_pressure must be <= sat_vapor_pressure");
}

double penman_monteith(const WeatherSample& w) {
    w.validate();
    const double num =
        0.408 * w.delta_svp * (w.net_irradiance - w.ground_heat_flux) +
        w.psychrometric_const * (900.0 / (w.temp_2m + 273.0)) * w.wind_2m * (w.sat_vapor_pressure - w.ambient_vapor_pressure);
    const double den = w.delta_svp + w.psychrometric_const * (1.0 + 0.34 * w.wind_2m);
    return std::max(0.0, num / den);
}

double blaney_criddle(double temp_2m, double rho) {
    if (rho < 0.0)
        throw std::invalid_argument("blaney_criddle: rho must be >= 0");
    return std::max(0.0, rho * (0.46 * temp_2m + 8.0));
}

double daily_to_per_minute(double mm_per_day) { return mm_per_day / 1440.0; }

double crop_et(double et0, double kcb, double ke, double ks) {
    return et0 * (ks * kcb + ke);
}

RhoTable RhoTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RhoTable: cannot open " + path);
    RhoTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // skip the column-name row
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        Row r{};
        if (!(ss >> r.latitude >> r.month >> r.rho))
            throw std::runtime_error("RhoTable: malformed row '" + line + "'");
        if (r.month < 1 || r.month > 12 || r.rho < 0.0)
            throw std::runtime_error("RhoTable: invalid values in '" + line + "'");
        table.rows_.push_back(r);
    }
    if (table.rows_.empty())
        throw std::runtime_error("RhoTable: no data rows in " + path);
    return table;
}

double RhoTable::lookup(double latitude_deg, int month) const {
    if (month < 1 || month > 12)
        throw std::out_of_range("RhoTable: month must be 1..12");
    const Row* best = nullptr;
    for (const Row& r : rows_) {
        if (r.month != month) continue;
        if (!best ||
            std::abs(r.latitude - latitude_deg) < std::abs(best->latitude - latitude_deg))
            best = &r;
    }
    if (!best) throw std::out_of_range("RhoTable: no rows for requested month");
    return best->rho;
}

} // namespace irrisim
