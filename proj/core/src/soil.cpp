#include "irrisim/soil.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace irrisim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("SoilParams: ") + what);
}

} // namespace

void SoilParams::validate() const {
    require(wilting_point >= 0.0, "wilting_point must be >= 0");
    require(wilting_point < field_capacity,
            "wilting_point must be < field_capacity");
    require(field_capacity <= 1.0, "field_capacity must be <= 1");
    require(saturation > wilting_point, "saturation must be > wilting_point");
    require(saturation <= 1.0, "saturation must be <= 1");
    require(percolation_rate >= 0.0, "percolation_rate must be >= 0");
    require(max_infiltration_rate >= 0.0,
            "max_infiltration_rate must be >= 0");
    require(runoff_coeff >= 0.0 && runoff_coeff <= 1.0,
            "runoff_coeff must be in [0, 1]");
    require(root_zone > 0.0, "root_zone must be > 0");
    require(p_fraction >= 0.0 && p_fraction <= 1.0,
            "p_fraction must be in [0, 1]");
}

void CropParams::validate() const {
    if (kcb < 0.0) throw std::invalid_argument("CropParams: kcb must be >= 0");
    if (ke < 0.0) throw std::invalid_argument("CropParams: ke must be >= 0");
}

double threshold_moisture(const SoilParams& params) {
    return params.field_capacity -
           params.p_fraction * (params.field_capacity - params.wilting_point);
}

double theta(const SoilState& state, const SoilParams& params) {
    return state.soil_water / params.root_zone;
}

double stress_coefficient(double theta, const SoilParams& params) {
    const double th = threshold_moisture(params);
    const double wp = params.wilting_point;
    if (theta >= th) return 1.0;
    if (th == wp) return 0.0;  // degenerate band: step function
    return std::clamp((theta - wp) / (th - wp), 0.0, 1.0);
}

FlowSet compute_flows(const SoilState& state, const SoilParams& params,
                      const CropParams& crop, const Forcing& forcing,
                      double dt) {
    FlowSet f;
    const double th = theta(state, params);
    f.irrigation_and_rain = forcing.irrigation_rate + forcing.rain_rate;

    if (th < params.saturation) {
        const double supply = f.irrigation_and_rain + state.surface_water / dt;
        f.infiltration = std::min(params.max_infiltration_rate, supply);
    }
    if (th > params.field_capacity) f.percolation = params.percolation_rate;

    const double ks = stress_coefficient(th, params);
    const double ke = th > params.wilting_point ? crop.ke : 0.0;
    f.evapotranspiration = forcing.ref_evt_rate * (ks * crop.kcb + ke);

    if (state.surface_water > 0.0)
        f.runoff = params.runoff_coeff * state.surface_water;
    return f;
}

SoilState step(const SoilState& state, const SoilParams& params,
               const CropParams& crop, const Forcing& forcing, double dt) {
    const FlowSet f = compute_flows(state, params, crop, forcing, dt);

    // Surface stock: infiltration is served first, runoff takes what is left.
    const double surface_supply =
        state.surface_water + f.irrigation_and_rain * dt;
    const double sat_headroom =
        params.saturation * params.root_zone - state.soil_water;
    double infil = std::min(f.infiltration * dt, surface_supply);
    infil = std::clamp(infil, 0.0, std::max(0.0, sat_headroom));
    const double runoff =
        std::clamp(f.runoff * dt, 0.0, surface_supply - infil);

    // Soil stock: percolation is served first but never drains below the
    // field-capacity line; evapotranspiration never drains below wilting.
    const double soil_in = state.soil_water + infil;
    const double perc =
        std::min(f.percolation * dt,
                 std::max(0.0, soil_in - params.field_capacity * params.root_zone));
    const double evt =
        std::min(f.evapotranspiration * dt,
                 std::max(0.0, soil_in - perc -
                                   params.wilting_point * params.root_zone));

    SoilState next = state;
    next.surface_water = surface_supply - infil - runoff;
    next.soil_water = soil_in - perc - evt;
    next.total_evt += evt;
    next.total_percolation += perc;
    next.total_runoff += runoff;
    return next;
}

double mass_balance(const SoilState& before, const SoilState& after,
                    const FlowSet& flows, double dt) {
    const double inflow = flows.irrigation_and_rain * dt;
    const double d_stocks = (after.surface_water - before.surface_water) +
                            (after.soil_water - before.soil_water);
    const double d_out = (after.total_evt - before.total_evt) +
                         (after.total_percolation - before.total_percolation) +
                         (after.total_runoff - before.total_runoff);
    return inflow - (d_stocks + d_out);
}

} // namespace irrisim
