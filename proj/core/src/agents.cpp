#include "irrisim/agents.hpp"

#include <algorithm>
#include <cmath>

namespace irrisim {

AgentState lifecycle_advance(AgentState s, double draw) {
    switch (s.phase) {
    case AgentPhase::Failure:
        return s;  // absorbing
    case AgentPhase::Initialize:
        if (--s.phase_timer <= 0) {
            s.phase = AgentPhase::Tasks;
            s.phase_timer = 1;
        }
        return s;
    case AgentPhase::Tasks:
        s.phase = AgentPhase::DeepSleep;
        s.phase_timer = s.wake_period;
        return s;
    case AgentPhase::DeepSleep:
        if (--s.phase_timer <= 0) {
            s.phase = AgentPhase::Restart;
            s.phase_timer = 1;
        }
        return s;
    case AgentPhase::Restart:
        if (--s.phase_timer <= 0) {
            if (draw < s.failure_prob) {
                s.phase = AgentPhase::Failure;
            } else {
                s.phase = AgentPhase::Tasks;
                s.phase_timer = 1;
            }
        }
        return s;
    }
    return s;
}

AgentState repair(AgentState s) {
    s.phase = AgentPhase::Initialize;
    s.phase_timer = 1;
    return s;
}

SensorReading sensor_measure(double truth, const SensorModel& model,
                             SensorState& state, SplitMix64& rng) {
    if (model.null_rate > 0 && rng.next_double() < model.null_rate)
        return {ReadingKind::SensorFailure};

    double raw = 0;
    for (int i = 0; i < model.n_samples; ++i)
        raw += truth + model.noise_sd * rng.next_normal();
    raw /= model.n_samples;
    if (model.stuck && !std::isnan(state.last_raw))
        raw = state.last_raw;  // injected fault: frozen at the previous value

    if (raw == state.last_raw) {
        ++state.repeat_count;
    } else {
        state.last_raw = raw;
        state.repeat_count = 1;
    }

    const double value = std::clamp(raw, model.floor, model.ceiling);
    if (model.detect_faults) {
        if (state.repeat_count >= model.stuck_limit)
            return {ReadingKind::SensorError, value};
        if (value == model.floor || value == model.ceiling)
            return {ReadingKind::SensorError, value};
    }
    return {ReadingKind::Measurement, value};
}

Decision controller_decide(double soil_water, double et0_rate,
                           const CropParams& crop, const SoilParams& params,
                           int periods, bool raining, double supply_fraction) {
    if (raining) return {DecisionKind::Stop};

    const double demand = periods * et0_rate * (crop.kcb + crop.ke);
    const double trigger = params.root_zone * threshold_moisture(params);
    if (soil_water - demand > trigger) return {DecisionKind::Hold};

    const double headroom =
        params.field_capacity * params.root_zone - soil_water;
    const double amount =
        std::min(demand * supply_fraction, std::max(0.0, headroom));
    if (amount <= 0) return {DecisionKind::Hold};
    return {DecisionKind::Irrigate, amount};
}

std::optional<double> morning_irrigation(double theta,
                                         const IrrigationPlan& plan,
                                         const SoilParams& params,
                                         int minute_of_day) {
    if (!plan.morning_time || minute_of_day != *plan.morning_time)
        return std::nullopt;
    const double target = std::min(plan.morning_target, params.field_capacity);
    if (theta >= target) return std::nullopt;
    return (target - theta) * params.root_zone;
}

Decision manual_schedule_step(int minute_of_day, const IrrigationPlan& plan,
                              bool raining) {
    for (const ScheduleWindow& w : plan.schedule) {
        if (minute_of_day >= w.start_minute &&
            minute_of_day < w.start_minute + w.duration) {
            if (raining) return {DecisionKind::Stop};
            return {DecisionKind::Irrigate, 0};
        }
    }
    return {DecisionKind::Hold};
}

std::optional<std::string> detect_miscalculation(double irrigated,
                                                 double predicted,
                                                 double theta,
                                                 const SoilParams& params) {
    if (predicted > 0) {
        const double rel = std::abs(irrigated - predicted) / predicted;
        if (rel > 0.2)
            return "delivered water deviates from prediction by more than 20%";
    }
    if (theta < params.wilting_point)
        return "moisture below wilting point";
    if (theta > params.field_capacity)
        return "moisture above field capacity";
    return std::nullopt;
}

CentralOutput central_tick(long minute,
                           const std::optional<ForecastPoint>& forecast,
                           const std::optional<double>& measured_theta,
                           const CropParams& crop, const SoilParams& params,
                           const WaterBudget& budget, CentralState& state) {
    CentralOutput out;

    if (forecast) {
        state.last_et0 = forecast->et0_rate;
    } else if (state.last_et0) {
        out.forecast_warning = true;  // degraded mode: reuse the last value
    }
    out.et_broadcast = state.last_et0;

    // Day rollover: audit yesterday's delivery against its prediction.
    const long day = minute / 1440;
    if (day != state.day_index) {
        if (measured_theta)
            out.miscalculation = detect_miscalculation(
                state.day_irrigated, state.day_predicted, *measured_theta,
                params);
        state.day_irrigated = 0;
        state.day_predicted = 0;
        state.day_index = day;
    }

    if (budget.initial_water && state.last_et0) {
        const double remaining = *budget.initial_water - state.delivered_total;
        const double predicted = budget.lookahead_minutes * *state.last_et0 *
                                 (crop.kcb + crop.ke);
        const bool shortage = remaining < predicted;
        out.shortage_raised = shortage && !state.shortage;
        state.shortage = shortage;
    }
    out.shortage_active = state.shortage;
    return out;
}

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::Wake: return "wake";
    case EventKind::Measurement: return "measurement";
    case EventKind::EtBroadcast: return "et_broadcast";
    case EventKind::IrrigateCommand: return "irrigate_command";
    case EventKind::StopCommand: return "stop_command";
    case EventKind::IrrigationBurst: return "irrigation_burst";
    case EventKind::ShortageNotice: return "shortage_notice";
    case EventKind::MiscalculationNotice: return "miscalculation_notice";
    case EventKind::SensorError: return "sensor_error";
    case EventKind::SensorFailure: return "sensor_failure";
    case EventKind::Warning: return "warning";
    }
    return "unknown";
}

long operating_time_accounting(const EventLog& events, long window_start,
                               long window_end) {
    long minutes = 0;
    for (const Event& e : events) {
        if (e.kind == EventKind::Wake) {
            if (e.minute >= window_start && e.minute < window_end) minutes += 2;
        } else if (e.kind == EventKind::IrrigationBurst) {
            // value = active minutes, contiguous from e.minute
            const long lo = std::max(e.minute, window_start);
            const long hi =
                std::min(e.minute + static_cast<long>(e.value), window_end);
            if (hi > lo) minutes += hi - lo;
        }
    }
    return minutes;
}

} // namespace irrisim
