#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "irrisim/rng.hpp"
#include "irrisim/soil.hpp"

namespace irrisim {

// Device-level behaviour of the sensing/irrigation network: power-cycle state
// machines, sensor faults, and the decision rules of the central unit and the
// irrigation controller. Everything here is a pure function of its inputs so
// the rules can be exercised without the simulation loop.

// ---------------------------------------------------------------------------
// Lifecycle
// ---------------------------------------------------------------------------

enum class AgentPhase { Initialize, Tasks, DeepSleep, Restart, Failure };

/// Power-cycle state. A healthy agent loops
/// Tasks -> DeepSleep(wake_period) -> Restart(1 min) -> Tasks, after an
/// initial one-minute Initialize, so consecutive Tasks phases are exactly
/// wake_period + 2 minutes apart.
struct AgentState {
    AgentPhase phase = AgentPhase::Initialize;
    int wake_period = 1;      ///< deep-sleep minutes per cycle, >= 1
    int phase_timer = 1;      ///< minutes left in the current phase
    double failure_prob = 0;  ///< chance per wake cycle of entering Failure
};

/**
 * Advance one minute. `draw` is a uniform [0,1) variate consumed at the
 * Restart -> Tasks boundary, where the agent fails (permanently) with
 * probability failure_prob; its value is ignored elsewhere. Failure is
 * absorbing until repair().
 */
AgentState lifecycle_advance(AgentState state, double draw);

/// External repair: a failed agent restarts from Initialize.
AgentState repair(AgentState state);

// ---------------------------------------------------------------------------
// Sensing
// ---------------------------------------------------------------------------

struct SensorModel {
    double noise_sd = 0;      ///< per-sample gaussian noise
    int n_samples = 1;        ///< samples averaged per reading
    double floor = 0;         ///< lower range limit (readings clamp here)
    double ceiling = 1;       ///< upper range limit
    bool detect_faults = true;
    int stuck_limit = 3;      ///< identical consecutive reads flagged as stuck
    bool stuck = false;       ///< fault injector: repeat the previous raw value
    double null_rate = 0;     ///< fault injector: chance a reading is lost
};

/// Per-sensor memory used by the stuck-reading check.
struct SensorState {
    double last_raw = std::numeric_limits<double>::quiet_NaN();
    int repeat_count = 0;
};

enum class ReadingKind { Measurement, SensorError, SensorFailure };

struct SensorReading {
    ReadingKind kind;
    double value = 0;  ///< averaged, clamped reading (Measurement only)
};

/**
 * One reading of `truth`: the mean of n_samples noisy samples, clamped to
 * [floor, ceiling]. Returns SensorFailure when the reading is lost entirely
 * (null_rate), and SensorError when fault detection sees a value pinned at a
 * range limit or unchanged for stuck_limit consecutive readings.
 */
SensorReading sensor_measure(double truth, const SensorModel& model,
                             SensorState& state, SplitMix64& rng);

// ---------------------------------------------------------------------------
// Irrigation plan
// ---------------------------------------------------------------------------

enum class PlanMode { Automatic, Manual };

/// Daily schedule window, minutes within the day.
struct ScheduleWindow {
    int start_minute;  ///< 0..1439
    int duration;      ///< minutes, >= 1
};

struct IrrigationPlan {
    PlanMode mode = PlanMode::Automatic;
    std::vector<ScheduleWindow> schedule;  ///< Manual mode only
    std::optional<int> morning_time;       ///< minute of day, Automatic only
    double morning_target = 0;             ///< theta to restore each morning
    double deficit_fraction = 0.5;         ///< cut applied under water shortage
};

// ---------------------------------------------------------------------------
// Decisions
// ---------------------------------------------------------------------------

enum class DecisionKind { Hold, Irrigate, Stop };

struct Decision {
    DecisionKind kind = DecisionKind::Hold;
    double amount = 0;  ///< mm; 0 in Manual mode (valve-open semantics)
};

/**
 * Demand rule of the automatic controller. Projects the root-zone store
 * `periods` minutes ahead using the unstressed crop demand
 * et0 * (kcb + ke) and irrigates when the projection falls to the stress
 * threshold:
 *
 *   irrigate  iff  soil_water - periods * et0 * (kcb + ke) <= root_zone * theta_th
 *
 * The amount replaces exactly the projected demand, scaled by
 * supply_fraction (shortage rationing) and capped so the store cannot exceed
 * field capacity. Rain overrides everything with Stop.
 */
Decision controller_decide(double soil_water, double et0_rate,
                           const CropParams& crop, const SoilParams& params,
                           int periods, bool raining,
                           double supply_fraction = 1.0);

/// Morning top-up: at plan.morning_time, refill from theta to
/// plan.morning_target (capped at field capacity). Returns the amount in mm.
std::optional<double> morning_irrigation(double theta,
                                         const IrrigationPlan& plan,
                                         const SoilParams& params,
                                         int minute_of_day);

/// Manual mode: valve open inside any schedule window unless it is raining
/// (Stop). Re-evaluated every minute, so irrigation resumes when rain ends
/// inside a window.
Decision manual_schedule_step(int minute_of_day, const IrrigationPlan& plan,
                              bool raining);

/**
 * End-of-day plausibility check. Flags a miscalculation when the water
 * actually delivered deviates from the predicted demand by strictly more
 * than 20 %, or when the measured moisture left the physical
 * [wilting_point, field_capacity] band. Returns the reason.
 */
std::optional<std::string> detect_miscalculation(double irrigated,
                                                 double predicted,
                                                 double theta,
                                                 const SoilParams& params);

// ---------------------------------------------------------------------------
// Central unit
// ---------------------------------------------------------------------------

/// One forecast sample (rates per minute).
struct ForecastPoint {
    double et0_rate = 0;   ///< mm/min
    double rain_rate = 0;  ///< mm/min
    double temp = 0;       ///< degC
};

struct WaterBudget {
    std::optional<double> initial_water;  ///< mm available; empty = unlimited
    int lookahead_minutes = 1440;         ///< horizon of the shortage forecast
};

/// Memory of the central unit between wake cycles.
struct CentralState {
    std::optional<double> last_et0;     ///< last known reference rate, mm/min
    double delivered_total = 0;         ///< mm, fed back by the caller
    double day_irrigated = 0;           ///< mm delivered since day start
    double day_predicted = 0;           ///< mm predicted since day start
    long day_index = 0;
    bool shortage = false;
};

struct CentralOutput {
    std::optional<double> et_broadcast;            ///< et0 rate for controllers
    bool forecast_warning = false;                 ///< forecast missing, reused last
    bool shortage_raised = false;                  ///< shortage newly detected
    bool shortage_active = false;
    std::optional<std::string> miscalculation;     ///< day-rollover check result
};

/**
 * Work done by the central unit in one Tasks phase: pick the reference ET
 * rate (falling back to the last known value when the forecast is missing),
 * run the day-rollover miscalculation check, and compare the remaining
 * budget against the demand predicted over budget.lookahead_minutes.
 */
CentralOutput central_tick(long minute,
                           const std::optional<ForecastPoint>& forecast,
                           const std::optional<double>& measured_theta,
                           const CropParams& crop, const SoilParams& params,
                           const WaterBudget& budget, CentralState& state);

// ---------------------------------------------------------------------------
// Event log
// ---------------------------------------------------------------------------

enum class EventKind {
    Wake,
    Measurement,
    EtBroadcast,
    IrrigateCommand,
    StopCommand,
    IrrigationBurst,
    ShortageNotice,
    MiscalculationNotice,
    SensorError,
    SensorFailure,
    Warning,
};

const char* to_string(EventKind kind);

struct Event {
    long minute;
    std::string agent;
    EventKind kind;
    double value = 0;  ///< Measurement: theta; Burst: active minutes; ...
    double extra = 0;  ///< Burst: delivered mm; IrrigateCommand: amount; ...
    std::string note;
};

using EventLog = std::vector<Event>;

/**
 * Operating time of the network inside [window_start, window_end):
 * 2 minutes of wake overhead (restart + initialize) per Wake event plus the
 * active minutes of every IrrigationBurst, clipped to the window.
 */
long operating_time_accounting(const EventLog& events, long window_start,
                               long window_end);

} // namespace irrisim
