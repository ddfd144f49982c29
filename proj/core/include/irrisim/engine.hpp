#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "irrisim/agents.hpp"
#include "irrisim/soil.hpp"

namespace irrisim {

/// Configuration or input-file problem; the CLI maps this to exit code 3.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant broken at runtime; the CLI maps this to exit code 4.
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Weather data source. sample() returns nothing when no data exists for the
/// minute; the engine keeps driving the physics with the last seen sample
/// (the atmosphere does not pause), while the central unit raises a Warning.
class ForecastProvider {
public:
    virtual ~ForecastProvider() = default;
    virtual std::optional<ForecastPoint> sample(long minute) const = 0;
};

/// Step-hold series: each sample holds from its minute until the next. The
/// last sample holds forever unless end_minute is set, after which data is
/// reported missing. No data before the first sample.
class SeriesForecast : public ForecastProvider {
public:
    struct Sample {
        long minute;
        ForecastPoint point;
    };

    explicit SeriesForecast(std::vector<Sample> samples, long end_minute = -1);
    std::optional<ForecastPoint> sample(long minute) const override;

private:
    std::vector<Sample> samples_;
    long end_minute_;
};

/// How the central unit obtains the reference ET rate: directly from the
/// forecast, or through Blaney-Criddle on the forecast temperature.
struct Et0Source {
    enum class Model { Direct, BlaneyCriddle };
    Model model = Model::Direct;
    double rho = 0;  ///< daytime-hours percentage (BlaneyCriddle only)
};

struct AgentConfig {
    double failure_prob = 0;  ///< per wake cycle, every agent
    SensorModel sensor;
};

/**
 * A complete, self-contained experiment description.
 *
 * wake_period (tm) is the working period of the network: the distance in
 * minutes between consecutive Tasks phases. Internally each agent spends
 * wake_period - 2 minutes in deep sleep, one in restart and one awake, so
 * tm >= 3.
 */
struct Scenario {
    SoilParams soil;
    CropParams crop;
    IrrigationPlan plan;
    std::vector<SeriesForecast::Sample> forcing;
    long forcing_end = -1;  ///< minute after which forecast data is missing
    Et0Source et0_source;
    int wake_period = 20;          ///< tm, minutes
    double irrigation_rate = 0.1;  ///< rt, mm/min
    long warm_up = 2880;
    long run_length = 17280;
    std::uint64_t seed = 1;
    std::optional<double> initial_theta;  ///< in [theta_th, fc]
    AgentConfig agents;
    WaterBudget budget;

    /// Midpoint of [threshold_moisture, field_capacity] when unset.
    double initial_theta_or_default() const;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Aggregates over the response window [warm_up, run_length).
struct RunResult {
    long below_threshold_count = 0;  ///< minutes with theta < theta_th
    double percolated = 0;           ///< mm lost to deep drainage
    double irrigated = 0;            ///< mm delivered by the system
    double evapotranspired = 0;      ///< mm of crop water use
    double error_sq = 0;             ///< (irrigated - evapotranspired)^2
    double relative_error_sq = 0;    ///< ((irr - evt) / evt)^2; 0 when both 0
    long operating_time = 0;         ///< 2 min/wake cycle + active irrigation
    SoilState final_state;
};

/**
 * Run one scenario. Each tick is one minute:
 *   1. agent phases stand as advanced at the end of the previous tick
 *      (first Tasks phase lands on minute 1, after the Initialize delay);
 *   2. messages flow sensor -> central -> controller within the tick;
 *   3. irrigation commands update the surface forcing (rain cancels any
 *      pending delivery; nothing is ever delivered on a rain minute);
 *   4. the soil advances in 1/dt sub-steps (dt must divide one minute);
 *   5. events and response accumulators are recorded.
 *
 * Bit-identical results for identical (scenario, dt): all randomness comes
 * from named SplitMix64 streams derived from scenario.seed.
 */
RunResult run(const Scenario& scenario, EventLog* log = nullptr,
              double dt = 1.0);

/// Same, with an externally supplied weather source.
RunResult run(const Scenario& scenario, const ForecastProvider& forecast,
              EventLog* log = nullptr, double dt = 1.0);

} // namespace irrisim
