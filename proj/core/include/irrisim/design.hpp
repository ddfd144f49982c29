#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irrisim/engine.hpp"

namespace irrisim {

inline constexpr int kBaseFactors = 8;
inline constexpr int kGeneratedFactors = 5;
inline constexpr int kFactors = 13;
inline constexpr int kRuns = 256;

/// First 8 are the base factors of the 2^13-5 fraction, last 5 are generated.
enum class Factor {
    rt,   ///< irrigation rate, mm/min
    tm,   ///< working period length, min
    evt,  ///< reference evapotranspiration rate, mm/min
    wp,   ///< wilting point
    fc,   ///< field capacity
    st,   ///< saturation point
    pr,   ///< percolation rate, mm/min
    nf,   ///< max infiltration rate, mm/min
    ke,   ///< evaporation crop coefficient
    kcb,  ///< transpiration crop coefficient
    rz,   ///< root zone depth, mm
    p,    ///< depletion fraction
    ro,   ///< runoff coefficient
};

const char* factor_name(Factor f);
std::optional<Factor> factor_from_name(std::string_view name);
inline int factor_index(Factor f) { return static_cast<int>(f); }

/// One bitmask over the base factors per generated column (bit i = base i).
using GeneratorSet = std::array<unsigned, kGeneratedFactors>;

/// Deterministic search: for each generated column in order, the numerically
/// smallest base subset (>= 4 factors) keeping every defining word at length
/// >= 5, with backtracking. The result is a resolution V fraction.
GeneratorSet find_generators();

/// Minimum word length of the full defining relation (2^5 - 1 words).
int design_resolution(const GeneratorSet& gens);

/// Human-readable defining word, e.g. "ke = rt*tm*evt*wp".
std::string generator_word(const GeneratorSet& gens, int generated);

using DesignRow = std::array<int, kFactors>;  // coded -1 / +1

/// 256 rows; base column j of row i is bit (7 - j) of i, 0 mapping to -1,
/// so row 0 is all-low and rows sort lexicographically by base levels.
std::vector<DesignRow> build_design(const GeneratorSet& gens);

/// Largest |sum of a coded column|; 0 means perfectly balanced.
long max_column_imbalance(const std::vector<DesignRow>& design);

/// Largest |dot product| between distinct columns among the 91 contrast
/// columns (13 mains + 78 two-factor interactions); 0 means orthogonal.
long max_contrast_dot(const std::vector<DesignRow>& design);

enum class SoilClass { Sandy, Silty, Clay };
const char* soil_class_name(SoilClass soil);
std::optional<SoilClass> soil_class_from_name(std::string_view name);

struct FactorLevels {
    double low;
    double high;
};

/// Physical low/high levels per factor for the given soil class.
std::array<FactorLevels, kFactors> factor_levels(SoilClass soil);

double physical_value(SoilClass soil, Factor f, int level);

/**
 * Materialize one design row as a runnable scenario: constant reference ET
 * forcing, no rain, automatic plan, ideal sensors, unlimited water budget,
 * warm-up 2880 of 17280 minutes. Initial moisture sits in the controller's
 * steady trigger band (threshold plus one period's worth of headroom) so the
 * response window sees no initial-condition transient.
 */
Scenario decode_row(const DesignRow& row, SoilClass soil, std::uint64_t seed);

struct CampaignRow {
    DesignRow levels;
    std::array<double, kFactors> values;
    RunResult result;
};

struct Campaign {
    SoilClass soil;
    GeneratorSet generators;
    std::uint64_t seed;
    std::vector<CampaignRow> rows;  // design order
};

/// Runs all 256 rows; `jobs` threads share the row pool. Row results are
/// independent and written by index, so output is identical for any jobs.
Campaign run_campaign(SoilClass soil, std::uint64_t seed, int jobs = 1,
                      double dt = 1.0);

} // namespace irrisim
