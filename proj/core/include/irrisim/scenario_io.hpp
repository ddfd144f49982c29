#pragma once

#include <string>
#include <vector>

#include "irrisim/design.hpp"
#include "irrisim/engine.hpp"
#include "irrisim/stats.hpp"

namespace irrisim {

inline constexpr const char* kVersion = "0.1.0";

/// Parse a scenario document (JSON). Unknown keys anywhere in the document
/// are rejected with the offending path; all errors are ValidationError.
/// base_dir resolves a relative "forcing_file" reference.
Scenario parse_scenario(const std::string& text, const std::string& base_dir);
Scenario load_scenario(const std::string& path);

/// Forcing series CSV: header minute,ref_evt_rate,rain_rate,temp; one row
/// per sample point, step-hold semantics between points.
std::vector<SeriesForecast::Sample> load_forcing_csv(const std::string& path);

std::string run_result_json(const RunResult& result);
void write_events_csv(const std::string& path, const EventLog& events);

/// Campaign CSV: 13 coded factor columns then R1..R4, one row per run in
/// design order (run index = row position).
void write_campaign_csv(const std::string& path, const Campaign& campaign);
std::string campaign_metadata_json(const Campaign& campaign);

struct CampaignTable {
    std::vector<std::string> factor_names;
    std::vector<std::vector<int>> levels;
    std::vector<std::string> response_names;
    std::vector<std::vector<double>> responses;  // column-major: [resp][run]
};
CampaignTable load_campaign_csv(const std::string& path);

std::string anova_table_csv(const AnovaTable& table);
std::string anova_table_text(const AnovaTable& table);

std::string model_json(const OlsModel& model, const std::string& response,
                       const std::vector<std::string>& factor_names);
OlsModel load_model_json(const std::string& path, std::string* response,
                         std::vector<std::string>* factor_names);
std::string model_text(const OlsModel& model, const std::string& response);

std::string surface_csv(const std::vector<SurfacePoint>& points,
                        const std::string& name1, const std::string& name2);

/// Sorted residuals paired with standard normal quantiles ((i+0.5)/n).
std::string residuals_csv(std::vector<double> residuals);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace irrisim
