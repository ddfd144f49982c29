#pragma once

#include <string>
#include <vector>

namespace irrisim {

/// Daily weather aggregates feeding the reference-ET models.
struct WeatherSample {
    double temp_2m;      ///< T_m, degC
    double delta_svp;      ///< Delta, slope of the vapour-pressure curve, kPa/degC
    double net_irradiance;  ///< R_n, MJ/m^2/day
    double ground_heat_flux;    ///< G, MJ/m^2/day
    double psychrometric_const;        ///< gamma, psychrometric constant, kPa/degC
    double wind_2m;          ///< u_2, wind speed at 2 m, m/s
    double sat_vapor_pressure;            ///< e_s, saturation vapour pressure, kPa
    double ambient_vapor_pressure;            ///< e_a, actual vapour pressure, kPa

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/**
 * FAO Penman-Monteith reference evapotranspiration, mm/day:
 *
 *   ET0 = (0.408 Delta (Rn - G) + gamma (900 / (Tm + 273)) u2 (es - ea))
 *         / (Delta + gamma (1 + 0.34 u2))
 *
 * Clamped at zero (condensing conditions report no ET demand).
 */
double penman_monteith(const WeatherSample& w);

/**
 * Blaney-Criddle reference evapotranspiration, mm/day:
 *   ET0 = rho (0.46 Tm + 8), clamped at zero.
 * rho is the mean daily fraction of annual daytime hours, in percent
 * (see RhoTable).
 */
double blaney_criddle(double temp_2m, double rho);

/// Spread a daily depth over the 1440 minutes of a day.
double daily_to_per_minute(double mm_per_day);

/// Crop evapotranspiration from a reference rate and the dual coefficients:
/// et0 * (ks * kcb + ke). Pass ks = 1 for the unstressed form.
double crop_et(double et0, double kcb, double ke, double ks = 1.0);

/**
 * Blaney-Criddle rho lookup, backed by a whitespace-separated text file with
 * a "latitude_deg month rho" header. Lookup matches the nearest latitude
 * band.
 */
class RhoTable {
public:
    static RhoTable load(const std::string& path);

    /// month is 1..12; throws std::out_of_range otherwise or on empty table.
    double lookup(double latitude_deg, int month) const;

    std::size_t size() const { return rows_.size(); }

private:
    struct Row {
        double latitude;
        int month;
        double rho;
    };
    std::vector<Row> rows_;
};

} // namespace irrisim
