#include "irrisim/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "irrisim/csv.hpp"

namespace irrisim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ValidationError(path + ": " + why);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end()) {
            fail(path, "unknown key '" + item.key() + "'");
        }
    }
}

const json& need(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing key '") + key + "'");
    return *it;
}

double num(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_number()) fail(path + "." + key, "must be a number");
    return v.get<double>();
}

double num_or(const json& obj, const char* key, const std::string& path,
              double fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_number()) fail(path + "." + key, "must be a number");
    return it->get<double>();
}

long integer(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "must be an integer");
    return v.get<long>();
}

long integer_or(const json& obj, const char* key, const std::string& path,
                long fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_number_integer()) fail(path + "." + key, "must be an integer");
    return it->get<long>();
}

bool flag_or(const json& obj, const char* key, const std::string& path,
             bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_boolean()) fail(path + "." + key, "must be a boolean");
    return it->get<bool>();
}

SoilParams parse_soil(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
    check_keys(j, path,
               {"wilting_point", "field_capacity", "saturation",
                "percolation_rate", "max_infiltration_rate", "runoff_coeff",
                "root_zone", "p_fraction"});
    SoilParams s;
    s.wilting_point = num(j, "wilting_point", path);
    s.field_capacity = num(j, "field_capacity", path);
    s.saturation = num(j, "saturation", path);
    s.percolation_rate = num(j, "percolation_rate", path);
    s.max_infiltration_rate = num(j, "max_infiltration_rate", path);
    s.runoff_coeff = num(j, "runoff_coeff", path);
    s.root_zone = num(j, "root_zone", path);
    s.p_fraction = num(j, "p_fraction", path);
    return s;
}

IrrigationPlan parse_plan(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
    check_keys(j, path,
               {"mode", "deficit_fraction", "morning_time", "morning_target",
                "schedule"});
    IrrigationPlan plan;
    if (auto it = j.find("mode"); it != j.end()) {
        if (!it->is_string()) fail(path + ".mode", "must be a string");
        const std::string mode = it->get<std::string>();
        if (mode == "automatic") {
            plan.mode = PlanMode::Automatic;
        } else if (mode == "manual") {
            plan.mode = PlanMode::Manual;
        } else {
            fail(path + ".mode", "must be 'automatic' or 'manual'");
        }
    }
    plan.deficit_fraction = num_or(j, "deficit_fraction", path, 0.5);
    if (auto it = j.find("morning_time"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
            fail(path + ".morning_time", "must be a minute of the day");
        }
        plan.morning_time = it->get<long>();
        plan.morning_target = num(j, "morning_target", path);
    } else if (j.contains("morning_target")) {
        fail(path + ".morning_target", "requires morning_time");
    }
    if (auto it = j.find("schedule"); it != j.end()) {
        if (!it->is_array()) fail(path + ".schedule", "must be an array");
        int idx = 0;
        for (const json& w : *it) {
            const std::string wp = path + ".schedule[" + std::to_string(idx++) + "]";
            if (!w.is_object()) fail(wp, "must be an object");
            check_keys(w, wp, {"start_minute", "duration"});
            ScheduleWindow win;
            win.start_minute = integer(w, "start_minute", wp);
            win.duration = integer(w, "duration", wp);
            plan.schedule.push_back(win);
        }
    }
    return plan;
}

std::vector<SeriesForecast::Sample> parse_forcing(const json& j,
                                                  const std::string& path) {
    if (!j.is_array()) fail(path, "must be an array of sample points");
    std::vector<SeriesForecast::Sample> out;
    int idx = 0;
    for (const json& s : j) {
        const std::string sp = path + "[" + std::to_string(idx++) + "]";
        if (!s.is_object()) fail(sp, "must be an object");
        check_keys(s, sp, {"minute", "ref_evt_rate", "rain_rate", "temp"});
        SeriesForecast::Sample sample;
        sample.minute = integer(s, "minute", sp);
        sample.point.et0_rate = num_or(s, "ref_evt_rate", sp, 0);
        sample.point.rain_rate = num_or(s, "rain_rate", sp, 0);
        sample.point.temp = num_or(s, "temp", sp, 0);
        out.push_back(sample);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

const char* signif_code(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return "";
}

constexpr const char* kSignifLine =
    "Signif. codes: 0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1";

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw ValidationError(path + ": read failed");
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EngineError(path + ": cannot open file for writing");
    out << text;
    out.flush();
    if (!out) throw EngineError(path + ": write failed");
}

std::vector<SeriesForecast::Sample> load_forcing_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty forcing file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "minute,ref_evt_rate,rain_rate,temp") {
        fail(path, "expected header 'minute,ref_evt_rate,rain_rate,temp'");
    }
    std::vector<SeriesForecast::Sample> out;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) {
            fail(path + ":" + std::to_string(line_no), "expected 4 columns");
        }
        try {
            SeriesForecast::Sample s;
            s.minute = parse_long(cells[0]);
            s.point.et0_rate = parse_double(cells[1]);
            s.point.rain_rate = parse_double(cells[2]);
            s.point.temp = parse_double(cells[3]);
            out.push_back(s);
        } catch (const std::runtime_error& e) {
            fail(path + ":" + std::to_string(line_no), e.what());
        }
    }
    return out;
}

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    if (!j.is_object()) fail("scenario", "top level must be an object");
    check_keys(j, "scenario",
               {"soil", "crop", "plan", "forcing", "forcing_file",
                "forcing_end", "et0_source", "wake_period", "irrigation_rate",
                "warm_up", "run_length", "seed", "initial_theta", "agents",
                "budget"});

    Scenario sc;
    sc.soil = parse_soil(need(j, "soil", "scenario"), "scenario.soil");
    {
        const json& c = need(j, "crop", "scenario");
        if (!c.is_object()) fail("scenario.crop", "must be an object");
        check_keys(c, "scenario.crop", {"kcb", "ke"});
        sc.crop.kcb = num(c, "kcb", "scenario.crop");
        sc.crop.ke = num(c, "ke", "scenario.crop");
    }
    if (auto it = j.find("plan"); it != j.end()) {
        sc.plan = parse_plan(*it, "scenario.plan");
    }

    const bool has_inline = j.contains("forcing");
    const bool has_file = j.contains("forcing_file");
    if (has_inline == has_file) {
        fail("scenario", "provide exactly one of 'forcing' or 'forcing_file'");
    }
    if (has_inline) {
        sc.forcing = parse_forcing(j["forcing"], "scenario.forcing");
    } else {
        const json& f = j["forcing_file"];
        if (!f.is_string()) fail("scenario.forcing_file", "must be a path");
        std::filesystem::path p = f.get<std::string>();
        if (p.is_relative() && !base_dir.empty()) {
            p = std::filesystem::path(base_dir) / p;
        }
        sc.forcing = load_forcing_csv(p.string());
    }
    sc.forcing_end = integer_or(j, "forcing_end", "scenario", -1);

    if (auto it = j.find("et0_source"); it != j.end()) {
        const std::string path = "scenario.et0_source";
        if (!it->is_object()) fail(path, "must be an object");
        check_keys(*it, path, {"model", "rho"});
        const json& m = need(*it, "model", path);
        if (!m.is_string()) fail(path + ".model", "must be a string");
        const std::string name = m.get<std::string>();
        if (name == "direct") {
            sc.et0_source.model = Et0Source::Model::Direct;
        } else if (name == "blaney_criddle") {
            sc.et0_source.model = Et0Source::Model::BlaneyCriddle;
            sc.et0_source.rho = num(*it, "rho", path);
        } else {
            fail(path + ".model", "must be 'direct' or 'blaney_criddle'");
        }
    }

    sc.wake_period = static_cast<int>(integer(j, "wake_period", "scenario"));
    sc.irrigation_rate = num(j, "irrigation_rate", "scenario");
    sc.warm_up = integer_or(j, "warm_up", "scenario", 2880);
    sc.run_length = integer_or(j, "run_length", "scenario", 17280);
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer() && !it->is_number_unsigned()) {
            fail("scenario.seed", "must be an integer");
        }
        sc.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("initial_theta"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) fail("scenario.initial_theta", "must be a number");
        sc.initial_theta = it->get<double>();
    }

    if (auto it = j.find("agents"); it != j.end()) {
        const std::string path = "scenario.agents";
        if (!it->is_object()) fail(path, "must be an object");
        check_keys(*it, path, {"failure_prob", "sensor"});
        sc.agents.failure_prob = num_or(*it, "failure_prob", path, 0);
        if (auto s = it->find("sensor"); s != it->end()) {
            const std::string sp = path + ".sensor";
            if (!s->is_object()) fail(sp, "must be an object");
            check_keys(*s, sp,
                       {"noise_sd", "n_samples", "floor", "ceiling",
                        "detect_faults", "stuck", "stuck_limit", "null_rate"});
            SensorModel& m = sc.agents.sensor;
            m.noise_sd = num_or(*s, "noise_sd", sp, m.noise_sd);
            m.n_samples = static_cast<int>(
                integer_or(*s, "n_samples", sp, m.n_samples));
            m.floor = num_or(*s, "floor", sp, m.floor);
            m.ceiling = num_or(*s, "ceiling", sp, m.ceiling);
            m.detect_faults = flag_or(*s, "detect_faults", sp, m.detect_faults);
            m.stuck = flag_or(*s, "stuck", sp, m.stuck);
            m.stuck_limit = static_cast<int>(
                integer_or(*s, "stuck_limit", sp, m.stuck_limit));
            m.null_rate = num_or(*s, "null_rate", sp, m.null_rate);
        }
    }

    if (auto it = j.find("budget"); it != j.end()) {
        const std::string path = "scenario.budget";
        if (!it->is_object()) fail(path, "must be an object");
        check_keys(*it, path, {"initial_water", "lookahead_minutes"});
        if (auto w = it->find("initial_water"); w != it->end() && !w->is_null()) {
            if (!w->is_number()) fail(path + ".initial_water", "must be a number");
            sc.budget.initial_water = w->get<double>();
        }
        sc.budget.lookahead_minutes =
            integer_or(*it, "lookahead_minutes", path, 1440);
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    const std::string text = read_text_file(path);
    const std::string base =
        std::filesystem::path(path).parent_path().string();
    return parse_scenario(text, base);
}

std::string run_result_json(const RunResult& r) {
    json j;
    j["below_threshold_count"] = r.below_threshold_count;
    j["percolated"] = r.percolated;
    j["irrigated"] = r.irrigated;
    j["evapotranspired"] = r.evapotranspired;
    j["error_sq"] = r.error_sq;
    j["relative_error_sq"] = r.relative_error_sq;
    j["operating_time"] = r.operating_time;
    j["final_state"] = {{"surface_water", r.final_state.surface_water},
                        {"soil_water", r.final_state.soil_water},
                        {"total_evt", r.final_state.total_evt},
                        {"total_percolation", r.final_state.total_percolation},
                        {"total_runoff", r.final_state.total_runoff}};
    return j.dump(2) + "\n";
}

void write_events_csv(const std::string& path, const EventLog& events) {
    std::string out = "minute,agent,kind,value,extra,note\n";
    for (const Event& e : events) {
        out += std::to_string(e.minute);
        out += ',';
        out += e.agent;
        out += ',';
        out += to_string(e.kind);
        out += ',';
        out += format_double(e.value);
        out += ',';
        out += format_double(e.extra);
        out += ',';
        out += csv_field(e.note);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_campaign_csv(const std::string& path, const Campaign& campaign) {
    std::string out;
    for (int i = 0; i < kFactors; ++i) {
        out += factor_name(static_cast<Factor>(i));
        out += ',';
    }
    out += "R1,R2,R3,R4\n";
    for (const CampaignRow& row : campaign.rows) {
        for (int i = 0; i < kFactors; ++i) {
            out += std::to_string(row.levels[i]);
            out += ',';
        }
        const RunResult& r = row.result;
        out += std::to_string(r.below_threshold_count);
        out += ',';
        out += format_double(r.percolated);
        out += ',';
        out += format_double(r.irrigated - r.evapotranspired);
        out += ',';
        out += std::to_string(r.operating_time);
        out += '\n';
    }
    write_text_file(path, out);
}

std::string campaign_metadata_json(const Campaign& campaign) {
    json j;
    j["soil"] = soil_class_name(campaign.soil);
    j["seed"] = campaign.seed;
    j["version"] = kVersion;
    j["design"] = "2^13-5";
    j["n_runs"] = campaign.rows.size();
    j["resolution"] = design_resolution(campaign.generators);
    json gens = json::array();
    for (int g = 0; g < kGeneratedFactors; ++g) {
        gens.push_back(generator_word(campaign.generators, g));
    }
    j["generators"] = gens;
    json factors = json::array();
    const auto levels = factor_levels(campaign.soil);
    for (int i = 0; i < kFactors; ++i) {
        factors.push_back({{"name", factor_name(static_cast<Factor>(i))},
                           {"low", levels[i].low},
                           {"high", levels[i].high}});
    }
    j["factors"] = factors;
    j["responses"] = {"R1", "R2", "R3", "R4"};
    double sum_sq = 0;
    double sum_rel_sq = 0;
    for (const CampaignRow& row : campaign.rows) {
        sum_sq += row.result.error_sq;
        sum_rel_sq += row.result.relative_error_sq;
    }
    j["irrigation_error"] = {{"sum_sq_mm2", sum_sq},
                             {"sum_sq_relative", sum_rel_sq}};
    j["run_index"] = "row order, lexicographic by base factor levels";
    return j.dump(2) + "\n";
}

CampaignTable load_campaign_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty campaign file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    CampaignTable table;
    {
        const auto cells = split_csv_line(line);
        if (cells.size() < 2u) fail(path, "malformed header");
        bool in_responses = false;
        for (const auto& cell : cells) {
            std::string name(cell);
            if (!name.empty() && name[0] == 'R' && name.size() > 1 &&
                std::isdigit(static_cast<unsigned char>(name[1]))) {
                in_responses = true;
            }
            if (in_responses) {
                table.response_names.push_back(name);
            } else {
                table.factor_names.push_back(name);
            }
        }
        if (table.factor_names.empty() || table.response_names.empty()) {
            fail(path, "header needs factor columns followed by R* columns");
        }
    }
    table.responses.resize(table.response_names.size());

    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() !=
            table.factor_names.size() + table.response_names.size()) {
            fail(path + ":" + std::to_string(line_no), "wrong column count");
        }
        try {
            std::vector<int> row;
            for (std::size_t i = 0; i < table.factor_names.size(); ++i) {
                const long v = parse_long(cells[i]);
                if (v != -1 && v != 1) {
                    throw std::runtime_error("coded level must be -1 or 1");
                }
                row.push_back(static_cast<int>(v));
            }
            table.levels.push_back(std::move(row));
            for (std::size_t r = 0; r < table.response_names.size(); ++r) {
                table.responses[r].push_back(
                    parse_double(cells[table.factor_names.size() + r]));
            }
        } catch (const std::runtime_error& e) {
            fail(path + ":" + std::to_string(line_no), e.what());
        }
    }
    if (table.levels.empty()) fail(path, "no data rows");
    return table;
}

std::string anova_table_csv(const AnovaTable& table) {
    std::string out = "term,df,sum_sq,mean_sq,f_value,p_value\n";
    for (const AnovaTerm& t : table.terms) {
        out += csv_field(t.name);
        out += ',' + std::to_string(t.df);
        out += ',' + format_double(t.ss);
        out += ',' + format_double(t.ms);
        out += ',' + format_double(t.f);
        out += ',' + format_double(t.p);
        out += '\n';
    }
    out += "Residuals," + std::to_string(table.df_resid);
    out += ',' + format_double(table.ss_resid);
    out += ',' + (table.saturated ? std::string("nan")
                                  : format_double(table.ms_resid));
    out += ",,\n";
    out += "Total," + std::to_string(table.df_total);
    out += ',' + format_double(table.ss_total);
    out += ",,,\n";
    return out;
}

std::string anova_table_text(const AnovaTable& table) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-12s %4s %12s %12s %10s %12s\n", "Term",
                  "Df", "Sum Sq", "Mean Sq", "F value", "Pr(>F)");
    out += buf;
    for (const AnovaTerm& t : table.terms) {
        std::snprintf(buf, sizeof buf,
                      "%-12s %4ld %12.5g %12.5g %10.4g %12.4g %s\n",
                      t.name.c_str(), t.df, t.ss, t.ms, t.f, t.p,
                      std::isnan(t.p) ? "" : signif_code(t.p));
        out += buf;
    }
    if (table.saturated) {
        std::snprintf(buf, sizeof buf, "%-12s %4ld %12.5g\n", "Residuals",
                      table.df_resid, table.ss_resid);
        out += buf;
        out += "(saturated model: no residual degrees of freedom)\n";
    } else {
        std::snprintf(buf, sizeof buf, "%-12s %4ld %12.5g %12.5g\n",
                      "Residuals", table.df_resid, table.ss_resid,
                      table.ms_resid);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-12s %4ld %12.5g\n", "Total",
                  table.df_total, table.ss_total);
    out += buf;
    out += "---\n";
    out += kSignifLine;
    out += '\n';
    return out;
}

std::string model_json(const OlsModel& model, const std::string& response,
                       const std::vector<std::string>& factor_names) {
    if (static_cast<int>(factor_names.size()) != model.n_factors) {
        throw ValidationError("factor name count does not match the model");
    }
    json j;
    j["response"] = response;
    j["factor_names"] = factor_names;
    j["intercept"] = model.intercept;
    j["intercept_se"] = model.intercept_se;
    json terms = json::array();
    for (std::size_t i = 0; i < model.terms.size(); ++i) {
        terms.push_back({{"name", model.names[i]},
                         {"a", model.terms[i].a},
                         {"b", model.terms[i].b},
                         {"coef", model.coefs[i]},
                         {"se", model.coef_se[i]}});
    }
    j["terms"] = terms;
    j["r2"] = model.r2;
    j["adj_r2"] = model.adj_r2;
    j["n"] = model.n;
    j["df_resid"] = model.df_resid;
    j["sigma2"] = model.sigma2;
    return j.dump(2) + "\n";
}

OlsModel load_model_json(const std::string& path, std::string* response,
                         std::vector<std::string>* factor_names) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
    if (!j.is_object()) fail(path, "top level must be an object");
    check_keys(j, path,
               {"response", "factor_names", "intercept", "intercept_se",
                "terms", "r2", "adj_r2", "n", "df_resid", "sigma2"});
    OlsModel m;
    if (response) {
        const json& r = need(j, "response", path);
        if (!r.is_string()) fail(path + ".response", "must be a string");
        *response = r.get<std::string>();
    }
    {
        const json& names = need(j, "factor_names", path);
        if (!names.is_array() || names.empty()) {
            fail(path + ".factor_names", "must be a non-empty array");
        }
        for (const json& n : names) {
            if (!n.is_string()) fail(path + ".factor_names", "must hold strings");
            if (factor_names) factor_names->push_back(n.get<std::string>());
        }
        m.n_factors = static_cast<int>(names.size());
    }
    m.intercept = num(j, "intercept", path);
    m.intercept_se = num_or(j, "intercept_se", path, 0);
    const json& terms = need(j, "terms", path);
    if (!terms.is_array()) fail(path + ".terms", "must be an array");
    int idx = 0;
    for (const json& t : terms) {
        const std::string tp = path + ".terms[" + std::to_string(idx++) + "]";
        if (!t.is_object()) fail(tp, "must be an object");
        check_keys(t, tp, {"name", "a", "b", "coef", "se"});
        const json& name = need(t, "name", tp);
        if (!name.is_string()) fail(tp + ".name", "must be a string");
        TermKey key;
        key.a = static_cast<int>(integer(t, "a", tp));
        key.b = static_cast<int>(integer(t, "b", tp));
        if (key.a < 0 || key.a >= m.n_factors || key.b >= m.n_factors ||
            (key.b >= 0 && key.b <= key.a)) {
            fail(tp, "term indices out of range");
        }
        m.terms.push_back(key);
        m.names.push_back(name.get<std::string>());
        m.coefs.push_back(num(t, "coef", tp));
        m.coef_se.push_back(num_or(t, "se", tp, 0));
    }
    m.r2 = num(j, "r2", path);
    m.adj_r2 = num(j, "adj_r2", path);
    m.n = integer(j, "n", path);
    m.df_resid = integer(j, "df_resid", path);
    m.sigma2 = num(j, "sigma2", path);
    return m;
}

std::string model_text(const OlsModel& model, const std::string& response) {
    char buf[160];
    std::string out = "Response: " + response + "\n\nCoefficients:\n";
    std::snprintf(buf, sizeof buf, "%-14s %12s %12s %10s %12s\n", "", "Estimate",
                  "Std. Error", "t value", "Pr(>|t|)");
    out += buf;
    auto emit = [&](const std::string& name, double est, double se) {
        if (model.df_resid > 0 && se > 0) {
            const double t = est / se;
            const double p = t_p_value(t, static_cast<double>(model.df_resid));
            std::snprintf(buf, sizeof buf,
                          "%-14s %12.6g %12.6g %10.4g %12.4g %s\n",
                          name.c_str(), est, se, t, p, signif_code(p));
        } else {
            std::snprintf(buf, sizeof buf, "%-14s %12.6g %12.6g\n",
                          name.c_str(), est, se);
        }
        out += buf;
    };
    emit("(Intercept)", model.intercept, model.intercept_se);
    for (std::size_t i = 0; i < model.terms.size(); ++i) {
        emit(model.names[i], model.coefs[i], model.coef_se[i]);
    }
    out += "---\n";
    out += kSignifLine;
    out += '\n';
    std::snprintf(buf, sizeof buf,
                  "\nR-squared: %.6g, Adjusted R-squared: %.6g\n"
                  "n = %ld, residual df = %ld, residual variance = %.6g\n",
                  model.r2, model.adj_r2, model.n, model.df_resid,
                  model.sigma2);
    out += buf;
    return out;
}

std::string surface_csv(const std::vector<SurfacePoint>& points,
                        const std::string& name1, const std::string& name2) {
    std::string out = csv_field(name1) + ',' + csv_field(name2) + ",predicted\n";
    for (const SurfacePoint& p : points) {
        out += format_double(p.x1);
        out += ',';
        out += format_double(p.x2);
        out += ',';
        out += format_double(p.value);
        out += '\n';
    }
    return out;
}

std::string residuals_csv(std::vector<double> residuals) {
    if (residuals.empty()) {
        throw ValidationError("residuals export needs at least one residual");
    }
    std::sort(residuals.begin(), residuals.end());
    std::string out = "normal_quantile,residual\n";
    const double n = static_cast<double>(residuals.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        out += format_double(
            normal_quantile((static_cast<double>(i) + 0.5) / n));
        out += ',';
        out += format_double(residuals[i]);
        out += '\n';
    }
    return out;
}

} // namespace irrisim
