#pragma once

namespace irrisim {

// Root-zone water balance as a stock-and-flow system, integrated with an
// explicit Euler step. Units throughout: water depths in mm, rates in mm/min,
// time in minutes. Volumetric moisture (theta) is dimensionless:
// soil_water / root_zone.

/// Static soil and site properties.
struct SoilParams {
    double wilting_point;          ///< theta below which plants extract nothing
    double field_capacity;         ///< theta above which gravity drainage starts
    double saturation;             ///< theta at which infiltration shuts off
    double percolation_rate;       ///< mm/min while theta > field_capacity
    double max_infiltration_rate;  ///< mm/min ceiling on surface-to-soil flux
    double runoff_coeff;           ///< fraction of ponded water lost per minute
    double root_zone;              ///< mm of water column at theta == 1
    double p_fraction;             ///< depletion fraction locating the stress threshold

    /// Throws std::invalid_argument naming the offending field.
    /// Note: field_capacity may exceed saturation; such soils never percolate
    /// because infiltration already stops at saturation.
    void validate() const;
};

/// Crop coefficients splitting reference ET into transpiration (kcb) and
/// soil-surface evaporation (ke).
struct CropParams {
    double kcb;
    double ke;

    void validate() const;
};

/// Boundary conditions for one step.
struct Forcing {
    double irrigation_rate = 0;  ///< mm/min applied at the surface
    double rain_rate = 0;        ///< mm/min
    double ref_evt_rate = 0;     ///< reference evapotranspiration, mm/min
};

/// Stocks. The totals accumulate water that has left the system, so
/// surface_water + soil_water + totals is conserved against inflows.
struct SoilState {
    double surface_water = 0;      ///< ponded on the surface, mm
    double soil_water = 0;         ///< stored in the root zone, mm
    double total_evt = 0;          ///< cumulative evapotranspiration, mm
    double total_percolation = 0;  ///< cumulative deep drainage, mm
    double total_runoff = 0;       ///< cumulative surface loss, mm
};

/// Flow rates (mm/min) evaluated from a state; step() applies them clipped.
struct FlowSet {
    double infiltration = 0;
    double percolation = 0;
    double evapotranspiration = 0;
    double runoff = 0;
    double irrigation_and_rain = 0;
};

/// Stress threshold: theta_th = fc - p * (fc - wp).
double threshold_moisture(const SoilParams& params);

/// Volumetric moisture of a state.
double theta(const SoilState& state, const SoilParams& params);

/**
 * Water-stress coefficient Ks in [0, 1]: 1 at or above the stress threshold,
 * 0 at or below the wilting point, linear in between. The degenerate case
 * theta_th == wp collapses to a step function (1 at or above, else 0).
 */
double stress_coefficient(double theta, const SoilParams& params);

/**
 * Flow rates for the current state:
 *  - infiltration: 0 once theta reaches saturation, otherwise the surface
 *    supply (irrigation + rain + ponded water / dt) capped by
 *    max_infiltration_rate;
 *  - percolation: the constant percolation_rate while theta > field capacity;
 *  - evapotranspiration: ref * (Ks * kcb + ke), with the ke term zeroed once
 *    theta <= wilting point (Ks already zeroes the kcb term there);
 *  - runoff: runoff_coeff * surface_water per minute.
 */
FlowSet compute_flows(const SoilState& state, const SoilParams& params,
                      const CropParams& crop, const Forcing& forcing,
                      double dt = 1.0);

/**
 * One explicit Euler step of length dt minutes.
 *
 * Flow amounts are clipped so that no stock goes negative and soil_water
 * stays within its physical bounds:
 *  - infiltration is limited by the surface supply and by the saturation
 *    headroom; what does not infiltrate ponds;
 *  - runoff takes at most what remains on the surface after infiltration;
 *  - percolation drains only water above fc * root_zone;
 *  - evapotranspiration drains only water above wp * root_zone.
 * Clipping adjusts the flows, not the stocks, so mass balance is exact.
 */
SoilState step(const SoilState& state, const SoilParams& params,
               const CropParams& crop, const Forcing& forcing, double dt = 1.0);

/**
 * Conservation residual for one step:
 *   inflow * dt - (delta stocks + delta outflow accumulators).
 * Zero up to rounding for states produced by step(), clipped or not.
 */
double mass_balance(const SoilState& before, const SoilState& after,
                    const FlowSet& flows, double dt);

} // namespace irrisim
