#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irrisim/design.hpp"
#include "irrisim/engine.hpp"
#include "irrisim/rng.hpp"
#include "irrisim/scenario_io.hpp"
#include "irrisim/stats.hpp"

namespace irrisim_cli {

namespace {

using namespace irrisim;

int response_index(const CampaignTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.response_names.size(); ++i) {
        if (table.response_names[i] == name) return static_cast<int>(i);
    }
    throw ValidationError("response '" + name + "' not in campaign (have " +
                          std::to_string(table.response_names.size()) +
                          " response columns)");
}

int factor_index_of(const std::vector<std::string>& names,
                    const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    throw ValidationError("unknown factor '" + name + "'");
}

std::vector<double> coded_point(const std::vector<int>& levels) {
    return std::vector<double>(levels.begin(), levels.end());
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"irrisim: deterministic smart-irrigation simulator and "
                 "design-of-experiments harness"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    auto* seed_opt = app.add_option(
        "--seed", seed, "RNG seed (overrides the scenario file's seed)");
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for campaign runs")
        ->check(CLI::PositiveNumber);
    double dt = 1.0;
    app.add_option("--dt", dt,
                   "integration sub-step in minutes; 1/dt must be an integer")
        ->check(CLI::Range(1e-6, 1.0));

    auto* cmd_run = app.add_subcommand("run", "run one scenario file");
    std::string scenario_path;
    cmd_run->add_option("scenario", scenario_path, "scenario JSON file")
        ->required();
    std::string events_path;
    cmd_run->add_option("--events", events_path,
                        "event log CSV path (default <scenario>.events.csv)");
    std::string run_out;
    cmd_run->add_option("--out", run_out,
                        "write the responses JSON here instead of stdout");

    auto* cmd_doe = app.add_subcommand(
        "doe", "run a 256-run factorial campaign for one soil class");
    std::string soil_name;
    cmd_doe->add_option("--soil", soil_name, "soil class")
        ->required()
        ->check(CLI::IsMember({"sandy", "silty", "clay"}));
    std::string doe_dir;
    cmd_doe->add_option("--out", doe_dir, "output directory")->required();
    bool doe_events = false;
    cmd_doe->add_flag("--events", doe_events,
                      "also write one event-log CSV per run");

    auto* cmd_anova = app.add_subcommand(
        "anova", "analysis of variance over a campaign CSV");
    std::string anova_csv;
    cmd_anova->add_option("campaign", anova_csv, "campaign CSV")->required();
    std::string response = "R4";
    cmd_anova->add_option("--response", response, "response column (default R4)");
    std::string anova_out;
    cmd_anova->add_option("--out", anova_out, "also write the table as CSV");

    auto* cmd_fit = app.add_subcommand(
        "fit", "fit a response model on significant terms");
    std::string fit_csv;
    cmd_fit->add_option("campaign", fit_csv, "campaign CSV")->required();
    cmd_fit->add_option("--response", response, "response column (default R4)");
    double alpha = 0.05;
    cmd_fit->add_option("--alpha", alpha, "significance level")
        ->check(CLI::Range(1e-12, 0.5));
    std::string model_out;
    cmd_fit->add_option("--out", model_out, "write the model JSON here");
    std::string residuals_out;
    cmd_fit->add_option("--residuals", residuals_out,
                        "write sorted residual vs normal quantile CSV");

    auto* cmd_surface = app.add_subcommand(
        "surface", "evaluate a fitted model on a coded 2-factor grid");
    std::string model_path;
    cmd_surface->add_option("model", model_path, "model JSON from fit")
        ->required();
    std::string xname, yname;
    cmd_surface->add_option("--x", xname, "first factor name")->required();
    cmd_surface->add_option("--y", yname, "second factor name")->required();
    int grid = 21;
    cmd_surface->add_option("--grid", grid, "points per axis")
        ->check(CLI::Range(2, 1001));
    std::string surface_out;
    cmd_surface->add_option("--out", surface_out,
                            "write the grid CSV here instead of stdout");

    auto* cmd_validate = app.add_subcommand(
        "validate", "load and validate a scenario file without running it");
    std::string validate_path;
    cmd_validate->add_option("scenario", validate_path, "scenario JSON file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_run->parsed()) {
            Scenario sc = load_scenario(scenario_path);
            if (seed_opt->count() > 0) sc.seed = seed;
            EventLog log;
            const RunResult result = run(sc, &log, dt);
            std::string ev = events_path;
            if (ev.empty()) {
                ev = std::filesystem::path(scenario_path).stem().string() +
                     ".events.csv";
            }
            write_events_csv(ev, log);
            const std::string body = run_result_json(result);
            if (run_out.empty()) {
                std::cout << body;
            } else {
                write_text_file(run_out, body);
            }
        } else if (cmd_doe->parsed()) {
            const SoilClass soil = *soil_class_from_name(soil_name);
            const Campaign campaign = run_campaign(soil, seed, jobs, dt);
            std::filesystem::create_directories(doe_dir);
            const auto dir = std::filesystem::path(doe_dir);
            write_campaign_csv((dir / "campaign.csv").string(), campaign);
            write_text_file((dir / "metadata.json").string(),
                            campaign_metadata_json(campaign));
            if (doe_events) {
                for (std::size_t i = 0; i < campaign.rows.size(); ++i) {
                    const std::uint64_t row_seed =
                        derive_seed(seed, "row/" + std::to_string(i));
                    EventLog log;
                    run(decode_row(campaign.rows[i].levels, soil, row_seed),
                        &log, dt);
                    char name[32];
                    std::snprintf(name, sizeof name, "run%03zu.events.csv", i);
                    write_events_csv((dir / name).string(), log);
                }
            }
            std::cout << soil_class_name(soil) << " campaign: "
                      << campaign.rows.size() << " runs -> " << doe_dir
                      << "\n";
        } else if (cmd_anova->parsed()) {
            const CampaignTable table = load_campaign_csv(anova_csv);
            const int r = response_index(table, response);
            const AnovaTable at =
                anova(table.levels, table.responses[r], table.factor_names);
            std::cout << "Response: " << response << "\n\n"
                      << anova_table_text(at);
            if (!anova_out.empty()) {
                write_text_file(anova_out, anova_table_csv(at));
            }
        } else if (cmd_fit->parsed()) {
            const CampaignTable table = load_campaign_csv(fit_csv);
            const int r = response_index(table, response);
            const std::vector<double>& y = table.responses[r];
            const AnovaTable at = anova(table.levels, y, table.factor_names);
            const std::vector<TermKey> terms = significant_terms(at, alpha);
            const OlsModel model =
                ols_fit(table.levels, y, terms, table.factor_names);
            std::cout << model_text(model, response);
            if (terms.empty()) {
                std::cout << "(no significant terms at alpha = " << alpha
                          << "; intercept-only model)\n";
            }
            if (!model_out.empty()) {
                write_text_file(model_out,
                                model_json(model, response,
                                           table.factor_names));
            }
            if (!residuals_out.empty()) {
                std::vector<double> resid;
                resid.reserve(y.size());
                for (std::size_t i = 0; i < y.size(); ++i) {
                    resid.push_back(
                        y[i] - evaluate(model, coded_point(table.levels[i])));
                }
                write_text_file(residuals_out, residuals_csv(std::move(resid)));
            }
        } else if (cmd_surface->parsed()) {
            std::string resp;
            std::vector<std::string> names;
            const OlsModel model = load_model_json(model_path, &resp, &names);
            const int f1 = factor_index_of(names, xname);
            const int f2 = factor_index_of(names, yname);
            const auto points = surface_grid(model, f1, f2, grid);
            const std::string body = surface_csv(points, names[f1], names[f2]);
            if (surface_out.empty()) {
                std::cout << body;
            } else {
                write_text_file(surface_out, body);
            }
        } else if (cmd_validate->parsed()) {
            const Scenario sc = load_scenario(validate_path);
            sc.validate();
            std::cout << "scenario OK\n";
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const EngineError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace irrisim_cli
