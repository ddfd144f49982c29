#include "irrisim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "irrisim/et.hpp"
#include "irrisim/rng.hpp"

namespace irrisim {

SeriesForecast::SeriesForecast(std::vector<Sample> samples, long end_minute)
    : samples_(std::move(samples)), end_minute_(end_minute) {
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (samples_[i].minute <= samples_[i - 1].minute) {
            throw ValidationError("forcing: sample minutes must be strictly increasing");
        }
    }
}

std::optional<ForecastPoint> SeriesForecast::sample(long minute) const {
    if (samples_.empty() || minute < samples_.front().minute) return std::nullopt;
    if (end_minute_ >= 0 && minute > end_minute_) return std::nullopt;
    auto it = std::upper_bound(
        samples_.begin(), samples_.end(), minute,
        [](long m, const Sample& s) { return m < s.minute; });
    return std::prev(it)->point;
}

double Scenario::initial_theta_or_default() const {
    if (initial_theta) return *initial_theta;
    return 0.5 * (threshold_moisture(soil) + soil.field_capacity);
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ValidationError(field + ": " + why);
}

void validate_plan(const IrrigationPlan& plan, const SoilParams& soil) {
    if (plan.deficit_fraction < 0 || plan.deficit_fraction > 1) {
        fail("plan.deficit_fraction", "must be in [0, 1]");
    }
    if (plan.morning_time) {
        if (*plan.morning_time < 0 || *plan.morning_time >= 1440) {
            fail("plan.morning_time", "must be in [0, 1440)");
        }
        if (plan.morning_target <= soil.wilting_point ||
            plan.morning_target > soil.field_capacity) {
            fail("plan.morning_target", "must be in (wilting_point, field_capacity]");
        }
    }
    for (const auto& w : plan.schedule) {
        if (w.start_minute < 0 || w.start_minute >= 1440) {
            fail("plan.schedule.start_minute", "must be in [0, 1440)");
        }
        if (w.duration < 1 || w.start_minute + w.duration > 1440) {
            fail("plan.schedule.duration", "window must fit within one day");
        }
    }
    if (plan.mode == PlanMode::Manual && plan.schedule.empty()) {
        fail("plan.schedule", "manual mode needs at least one window");
    }
}

void validate_sensor(const SensorModel& m) {
    if (m.noise_sd < 0) fail("agents.sensor.noise_sd", "must be >= 0");
    if (m.n_samples < 1) fail("agents.sensor.n_samples", "must be >= 1");
    if (m.floor >= m.ceiling) fail("agents.sensor.floor", "must be below ceiling");
    if (m.stuck_limit < 2) fail("agents.sensor.stuck_limit", "must be >= 2");
    if (m.null_rate < 0 || m.null_rate > 1) {
        fail("agents.sensor.null_rate", "must be in [0, 1]");
    }
}

// Scales a per-minute rate so that m sub-steps of length dt reproduce the
// per-minute amount exactly; dt must be 1/m for integer m.
int substeps_for(double dt) {
    if (!(dt > 0) || dt > 1) {
        throw ValidationError("dt: must be in (0, 1]");
    }
    const double inv = 1.0 / dt;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) > 1e-9 * rounded) {
        throw ValidationError("dt: 1/dt must be an integer");
    }
    return static_cast<int>(rounded);
}

struct Burst {
    long start = -1;
    long active = 0;
    double delivered = 0;
};

void flush_burst(Burst& b, EventLog& events) {
    if (b.start < 0) return;
    events.push_back({b.start, "controller", EventKind::IrrigationBurst,
                      static_cast<double>(b.active), b.delivered, ""});
    b = Burst{};
}

} // namespace

void Scenario::validate() const {
    try {
        soil.validate();
        crop.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    validate_plan(plan, soil);
    validate_sensor(agents.sensor);
    if (agents.failure_prob < 0 || agents.failure_prob > 1) {
        fail("agents.failure_prob", "must be in [0, 1]");
    }
    if (wake_period < 3) fail("wake_period", "must be >= 3");
    if (irrigation_rate <= 0) fail("irrigation_rate", "must be > 0");
    if (warm_up < 0) fail("warm_up", "must be >= 0");
    if (run_length <= warm_up) fail("run_length", "must exceed warm_up");
    if (initial_theta) {
        const double lo = threshold_moisture(soil);
        if (*initial_theta < lo || *initial_theta > soil.field_capacity) {
            fail("initial_theta", "must be in [threshold_moisture, field_capacity]");
        }
    }
    for (std::size_t i = 0; i < forcing.size(); ++i) {
        const auto& s = forcing[i];
        if (i > 0 && s.minute <= forcing[i - 1].minute) {
            fail("forcing", "sample minutes must be strictly increasing");
        }
        if (s.point.et0_rate < 0) fail("forcing.ref_evt_rate", "must be >= 0");
        if (s.point.rain_rate < 0) fail("forcing.rain_rate", "must be >= 0");
    }
    if (et0_source.model == Et0Source::Model::BlaneyCriddle &&
        et0_source.rho <= 0) {
        fail("et0_source.rho", "must be > 0 for blaney_criddle");
    }
    if (budget.initial_water && *budget.initial_water < 0) {
        fail("budget.initial_water", "must be >= 0");
    }
    if (budget.lookahead_minutes < 1) {
        fail("budget.lookahead_minutes", "must be >= 1");
    }
}

RunResult run(const Scenario& scenario, EventLog* log, double dt) {
    SeriesForecast forecast(scenario.forcing, scenario.forcing_end);
    return run(scenario, forecast, log, dt);
}

RunResult run(const Scenario& sc, const ForecastProvider& forecast,
              EventLog* log, double dt) {
    sc.validate();
    const int substeps = substeps_for(dt);
    const double sub_dt = 1.0 / substeps;

    SoilState soil;
    soil.soil_water = sc.initial_theta_or_default() * sc.soil.root_zone;

    const int sleep = sc.wake_period - 2;
    auto spawn = [&](void) {
        AgentState a;
        a.phase = AgentPhase::Initialize;
        a.phase_timer = 1;
        a.wake_period = sleep;
        a.failure_prob = sc.agents.failure_prob;
        return a;
    };
    AgentState sensor = spawn();
    AgentState central = spawn();
    AgentState controller = spawn();
    SplitMix64 sensor_life = derive_stream(sc.seed, "sensor/life");
    SplitMix64 central_life = derive_stream(sc.seed, "central/life");
    SplitMix64 controller_life = derive_stream(sc.seed, "controller/life");
    SplitMix64 sensor_noise = derive_stream(sc.seed, "sensor/noise");

    SensorState sensor_state;
    CentralState central_state;
    std::optional<double> last_theta;       // controller's soil estimate
    long last_theta_minute = -1;
    std::optional<double> last_broadcast;   // controller's ET rate copy
    long last_broadcast_minute = -1;
    double supply_fraction = 1.0;

    std::vector<double> pending;  // per-minute delivery rates, front first
    std::size_t pending_pos = 0;
    auto schedule_delivery = [&](double amount) {
        pending.clear();
        pending_pos = 0;
        const double rate = sc.irrigation_rate;
        const long full = static_cast<long>(std::floor(amount / rate));
        for (long i = 0; i < full; ++i) pending.push_back(rate);
        const double rest = amount - static_cast<double>(full) * rate;
        if (rest > amount * 1e-12) pending.push_back(rest);
    };

    EventLog events;
    Burst burst;
    std::optional<ForecastPoint> held;  // physics keeps the last seen weather
    RunResult out;

    for (long t = 0; t < sc.run_length; ++t) {
        const bool in_window = t >= sc.warm_up;
        const std::optional<ForecastPoint> seen = forecast.sample(t);
        if (seen) held = seen;
        const double env_rain = held ? held->rain_rate : 0.0;
        double env_et0 = 0.0;
        if (held) {
            env_et0 = sc.et0_source.model == Et0Source::Model::BlaneyCriddle
                          ? daily_to_per_minute(
                                blaney_criddle(held->temp, sc.et0_source.rho))
                          : held->et0_rate;
        }
        const bool raining = env_rain > 0;

        // Sensor task: sample the true moisture, publish or report an error.
        if (sensor.phase == AgentPhase::Tasks) {
            const SensorReading reading = sensor_measure(
                theta(soil, sc.soil), sc.agents.sensor, sensor_state,
                sensor_noise);
            switch (reading.kind) {
                case ReadingKind::Measurement:
                    events.push_back({t, "sensor", EventKind::Measurement,
                                      reading.value, 0, ""});
                    last_theta = reading.value;
                    last_theta_minute = t;
                    break;
                case ReadingKind::SensorError:
                    events.push_back({t, "sensor", EventKind::SensorError,
                                      reading.value, 0,
                                      "implausible or unchanging reading"});
                    break;
                case ReadingKind::SensorFailure:
                    events.push_back({t, "sensor", EventKind::SensorFailure,
                                      0, 0, "reading lost"});
                    break;
            }
        }

        // Central task: refresh the ET broadcast, audit the water budget.
        if (central.phase == AgentPhase::Tasks) {
            std::optional<ForecastPoint> feed = seen;
            if (feed &&
                sc.et0_source.model == Et0Source::Model::BlaneyCriddle) {
                feed->et0_rate = daily_to_per_minute(
                    blaney_criddle(feed->temp, sc.et0_source.rho));
            }
            const CentralOutput co =
                central_tick(t, feed, last_theta, sc.crop, sc.soil, sc.budget,
                             central_state);
            if (co.et_broadcast) {
                events.push_back({t, "central", EventKind::EtBroadcast,
                                  *co.et_broadcast, 0, ""});
                last_broadcast = *co.et_broadcast;
                last_broadcast_minute = t;
            }
            if (co.forecast_warning) {
                events.push_back({t, "central", EventKind::Warning, 0, 0,
                                  "forecast data missing, reusing last value"});
            }
            if (co.shortage_raised) {
                events.push_back({t, "central", EventKind::ShortageNotice,
                                  central_state.delivered_total, 0,
                                  "water budget below projected demand"});
            }
            if (co.miscalculation) {
                events.push_back({t, "central", EventKind::MiscalculationNotice,
                                  0, 0, *co.miscalculation});
            }
            supply_fraction =
                co.shortage_active ? 1.0 - sc.plan.deficit_fraction : 1.0;
        }

        // Controller task: decide on irrigation from the freshest picture.
        if (controller.phase == AgentPhase::Tasks) {
            events.push_back({t, "controller", EventKind::Wake, 0, 0, ""});
            if (sc.plan.mode == PlanMode::Automatic) {
                const long stale = 2L * sc.wake_period;
                if (last_broadcast_minute >= 0 &&
                    t - last_broadcast_minute > stale) {
                    events.push_back({t, "controller", EventKind::Warning, 0, 0,
                                      "reference ET broadcast is stale"});
                }
                if (last_theta_minute >= 0 && t - last_theta_minute > stale) {
                    events.push_back({t, "controller", EventKind::Warning, 0, 0,
                                      "moisture measurement is stale"});
                }
                if (last_broadcast && last_theta) {
                    const Decision d = controller_decide(
                        *last_theta * sc.soil.root_zone, *last_broadcast,
                        sc.crop, sc.soil, sc.wake_period, raining,
                        supply_fraction);
                    if (d.kind == DecisionKind::Irrigate) {
                        schedule_delivery(d.amount);
                        central_state.day_predicted += d.amount;
                        events.push_back({t, "controller",
                                          EventKind::IrrigateCommand, d.amount,
                                          sc.irrigation_rate, ""});
                    } else if (d.kind == DecisionKind::Stop) {
                        if (pending_pos < pending.size()) {
                            events.push_back({t, "controller",
                                              EventKind::StopCommand, 0, 0,
                                              "rain detected"});
                        }
                        pending.clear();
                        pending_pos = 0;
                    }
                }
            }
        }

        // Morning top-up: an extra scheduled wake outside the sleep cycle.
        if (sc.plan.mode == PlanMode::Automatic && sc.plan.morning_time &&
            t % 1440 == *sc.plan.morning_time &&
            controller.phase != AgentPhase::Failure) {
            events.push_back({t, "controller", EventKind::Wake, 0, 0,
                              "morning schedule"});
            std::optional<double> th_now = last_theta;
            if (sensor.phase != AgentPhase::Failure) {
                const SensorReading reading = sensor_measure(
                    theta(soil, sc.soil), sc.agents.sensor, sensor_state,
                    sensor_noise);
                if (reading.kind == ReadingKind::Measurement) {
                    events.push_back({t, "sensor", EventKind::Measurement,
                                      reading.value, 0, "morning schedule"});
                    last_theta = reading.value;
                    last_theta_minute = t;
                    th_now = reading.value;
                }
            }
            if (!raining && th_now) {
                const auto amount = morning_irrigation(*th_now, sc.plan,
                                                       sc.soil, t % 1440);
                if (amount) {
                    schedule_delivery(*amount);
                    central_state.day_predicted += *amount;
                    events.push_back({t, "controller",
                                      EventKind::IrrigateCommand, *amount,
                                      sc.irrigation_rate, "morning schedule"});
                }
            }
        }

        // Rain interrupts delivery no matter where the agents are in their
        // cycles; the valve hardware reacts immediately.
        if (raining && pending_pos < pending.size()) {
            events.push_back({t, "controller", EventKind::StopCommand, 0, 0,
                              "rain detected"});
            pending.clear();
            pending_pos = 0;
        }

        double irrigation = 0;
        if (sc.plan.mode == PlanMode::Manual) {
            const Decision d = manual_schedule_step(t % 1440, sc.plan, raining);
            if (d.kind == DecisionKind::Irrigate) irrigation = sc.irrigation_rate;
        } else if (pending_pos < pending.size()) {
            irrigation = pending[pending_pos++];
        }

        if (irrigation > 0) {
            if (burst.start < 0) burst.start = t;
            burst.active += 1;
            burst.delivered += irrigation;
        } else {
            flush_burst(burst, events);
        }

        const SoilState before = soil;
        const Forcing forcing{irrigation, env_rain, env_et0};
        for (int s = 0; s < substeps; ++s) {
            soil = step(soil, sc.soil, sc.crop, forcing, sub_dt);
        }

        central_state.delivered_total += irrigation;
        central_state.day_irrigated += irrigation;
        if (in_window) {
            out.irrigated += irrigation;
            out.evapotranspired += soil.total_evt - before.total_evt;
            out.percolated += soil.total_percolation - before.total_percolation;
            if (theta(soil, sc.soil) < threshold_moisture(sc.soil)) {
                out.below_threshold_count += 1;
            }
        }

        sensor = lifecycle_advance(sensor, sensor_life.next_double());
        central = lifecycle_advance(central, central_life.next_double());
        controller =
            lifecycle_advance(controller, controller_life.next_double());
    }
    flush_burst(burst, events);

    const double err = out.irrigated - out.evapotranspired;
    out.error_sq = err * err;
    if (out.evapotranspired > 0) {
        const double rel = err / out.evapotranspired;
        out.relative_error_sq = rel * rel;
    } else {
        out.relative_error_sq =
            out.irrigated > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    out.operating_time =
        operating_time_accounting(events, sc.warm_up, sc.run_length);
    out.final_state = soil;
    if (log) *log = std::move(events);
    return out;
}

} // namespace irrisim
