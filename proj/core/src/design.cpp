#include "irrisim/design.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

#include "irrisim/rng.hpp"

namespace irrisim {

namespace {

constexpr const char* kFactorNames[kFactors] = {
    "rt", "tm", "evt", "wp", "fc", "st", "pr", "nf",
    "ke", "kcb", "rz", "p", "ro"};

// Word length of every XOR-combination of the chosen generators, including
// the generated letters themselves. A fraction has resolution V iff all
// combinations reach length >= 5.
int min_word_length(const unsigned* masks, int count) {
    int shortest = kFactors + 1;
    for (unsigned subset = 1; subset < (1u << count); ++subset) {
        unsigned base = 0;
        int letters = 0;
        for (int g = 0; g < count; ++g) {
            if (subset & (1u << g)) {
                base ^= masks[g];
                ++letters;
            }
        }
        shortest = std::min(shortest, std::popcount(base) + letters);
    }
    return shortest;
}

bool search(unsigned* masks, int depth) {
    if (depth == kGeneratedFactors) return true;
    for (unsigned m = 0; m < (1u << kBaseFactors); ++m) {
        if (std::popcount(m) < 4) continue;
        masks[depth] = m;
        if (min_word_length(masks, depth + 1) >= 5 &&
            search(masks, depth + 1)) {
            return true;
        }
    }
    return false;
}

} // namespace

const char* factor_name(Factor f) { return kFactorNames[factor_index(f)]; }

std::optional<Factor> factor_from_name(std::string_view name) {
    for (int i = 0; i < kFactors; ++i) {
        if (name == kFactorNames[i]) return static_cast<Factor>(i);
    }
    return std::nullopt;
}

GeneratorSet find_generators() {
    GeneratorSet gens{};
    if (!search(gens.data(), 0)) {
        throw EngineError("generator search found no resolution V fraction");
    }
    return gens;
}

int design_resolution(const GeneratorSet& gens) {
    return min_word_length(gens.data(), kGeneratedFactors);
}

std::string generator_word(const GeneratorSet& gens, int generated) {
    std::string out = kFactorNames[kBaseFactors + generated];
    out += " = ";
    bool first = true;
    for (int b = 0; b < kBaseFactors; ++b) {
        if (gens[generated] & (1u << b)) {
            if (!first) out += "*";
            out += kFactorNames[b];
            first = false;
        }
    }
    return out;
}

std::vector<DesignRow> build_design(const GeneratorSet& gens) {
    std::vector<DesignRow> rows(kRuns);
    for (int i = 0; i < kRuns; ++i) {
        DesignRow& row = rows[i];
        for (int j = 0; j < kBaseFactors; ++j) {
            row[j] = (i >> (kBaseFactors - 1 - j)) & 1 ? 1 : -1;
        }
        for (int g = 0; g < kGeneratedFactors; ++g) {
            int prod = 1;
            for (int b = 0; b < kBaseFactors; ++b) {
                if (gens[g] & (1u << b)) prod *= row[b];
            }
            row[kBaseFactors + g] = prod;
        }
    }
    return rows;
}

long max_column_imbalance(const std::vector<DesignRow>& design) {
    long worst = 0;
    for (int j = 0; j < kFactors; ++j) {
        long sum = 0;
        for (const auto& row : design) sum += row[j];
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

long max_contrast_dot(const std::vector<DesignRow>& design) {
    // contrast columns: (a, -1) mains, (a, b) two-factor interactions
    std::vector<std::pair<int, int>> cols;
    for (int a = 0; a < kFactors; ++a) cols.emplace_back(a, -1);
    for (int a = 0; a < kFactors; ++a) {
        for (int b = a + 1; b < kFactors; ++b) cols.emplace_back(a, b);
    }
    auto value = [](const DesignRow& row, const std::pair<int, int>& c) {
        return c.second < 0 ? row[c.first] : row[c.first] * row[c.second];
    };
    long worst = 0;
    for (std::size_t u = 0; u < cols.size(); ++u) {
        for (std::size_t v = u + 1; v < cols.size(); ++v) {
            long dot = 0;
            for (const auto& row : design) {
                dot += value(row, cols[u]) * value(row, cols[v]);
            }
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

const char* soil_class_name(SoilClass soil) {
    switch (soil) {
        case SoilClass::Sandy: return "sandy";
        case SoilClass::Silty: return "silty";
        case SoilClass::Clay: return "clay";
    }
    return "?";
}

std::optional<SoilClass> soil_class_from_name(std::string_view name) {
    if (name == "sandy") return SoilClass::Sandy;
    if (name == "silty") return SoilClass::Silty;
    if (name == "clay") return SoilClass::Clay;
    return std::nullopt;
}

std::array<FactorLevels, kFactors> factor_levels(SoilClass soil) {
    // order: rt, tm, evt, wp, fc, st, pr, nf, ke, kcb, rz, p, ro
    switch (soil) {
        case SoilClass::Sandy:
            return {{{0.167, 0.334},
                     {20, 60},
                     {0.0021, 0.0063},
                     {0.05, 0.1},
                     {0.15, 0.20},
                     {0.4, 0.45},
                     {0.0035, 0.014},
                     {0.334, 0.690},
                     {0.1, 0.3},
                     {0.2, 1.15},
                     {300, 3000},
                     {0.2, 0.65},
                     {0.05, 0.3}}};
        case SoilClass::Silty:
            return {{{0.063, 0.126},
                     {20, 60},
                     {0.0021, 0.0063},
                     {0.07, 0.22},
                     {0.25, 0.37},
                     {0.45, 0.5},
                     {0.00083, 0.0042},
                     {0.126, 0.19},
                     {0.1, 0.3},
                     {0.2, 1.15},
                     {300, 3000},
                     {0.2, 0.65},
                     {0.05, 0.3}}};
        case SoilClass::Clay:
            return {{{0.0125, 0.025},
                     {20, 60},
                     {0.0021, 0.0063},
                     {0.17, 0.24},
                     {0.30, 0.42},
                     {0.4, 0.51},
                     {0.0007, 0.0035},
                     {0.025, 0.085},
                     {0.1, 0.3},
                     {0.2, 1.15},
                     {300, 3000},
                     {0.2, 0.65},
                     {0.05, 0.3}}};
    }
    throw EngineError("unknown soil class");
}

double physical_value(SoilClass soil, Factor f, int level) {
    const FactorLevels lv = factor_levels(soil)[factor_index(f)];
    return level > 0 ? lv.high : lv.low;
}

Scenario decode_row(const DesignRow& row, SoilClass soil, std::uint64_t seed) {
    auto val = [&](Factor f) {
        return physical_value(soil, f, row[factor_index(f)]);
    };
    Scenario sc;
    sc.soil.wilting_point = val(Factor::wp);
    sc.soil.field_capacity = val(Factor::fc);
    sc.soil.saturation = val(Factor::st);
    sc.soil.percolation_rate = val(Factor::pr);
    sc.soil.max_infiltration_rate = val(Factor::nf);
    sc.soil.runoff_coeff = val(Factor::ro);
    sc.soil.root_zone = val(Factor::rz);
    sc.soil.p_fraction = val(Factor::p);
    sc.crop.kcb = val(Factor::kcb);
    sc.crop.ke = val(Factor::ke);
    sc.plan.mode = PlanMode::Automatic;
    const double evt = val(Factor::evt);
    sc.forcing = {{0, {evt, 0.0, 0.0}}};
    sc.wake_period = static_cast<int>(val(Factor::tm));
    sc.irrigation_rate = val(Factor::rt);
    sc.warm_up = 2880;
    sc.run_length = 17280;
    sc.seed = seed;
    // steady trigger band: threshold + a period's drain + one pre-wake minute
    const double drain =
        evt * (sc.crop.kcb + sc.crop.ke) / sc.soil.root_zone;
    sc.initial_theta =
        threshold_moisture(sc.soil) + (1.0 + sc.wake_period / 2.0) * drain;
    sc.agents.failure_prob = 0;
    sc.agents.sensor.noise_sd = 0;
    sc.agents.sensor.detect_faults = false;
    return sc;
}

Campaign run_campaign(SoilClass soil, std::uint64_t seed, int jobs,
                      double dt) {
    const GeneratorSet gens = find_generators();
    const std::vector<DesignRow> design = build_design(gens);

    Campaign out;
    out.soil = soil;
    out.generators = gens;
    out.seed = seed;
    out.rows.resize(design.size());

    auto run_row = [&](int i) {
        const DesignRow& row = design[i];
        CampaignRow& slot = out.rows[i];
        slot.levels = row;
        for (int j = 0; j < kFactors; ++j) {
            slot.values[j] =
                physical_value(soil, static_cast<Factor>(j), row[j]);
        }
        const std::uint64_t row_seed =
            derive_seed(seed, "row/" + std::to_string(i));
        slot.result = run(decode_row(row, soil, row_seed), nullptr, dt);
    };

    const int workers =
        std::max(1, std::min(jobs, static_cast<int>(design.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < design.size(); ++i) run_row(int(i));
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < static_cast<int>(design.size());
                 i = next.fetch_add(1)) {
                run_row(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

} // namespace irrisim
