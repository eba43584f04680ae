// chsh: command-line front end for the CHSH game simulator.
//
// Subcommands: validate-density, gamma-table, simulate, curve, score,
// optimize, holonomy, fisher.
//
// Settings are always given in the order A1B1,A1B2,A2B1,A2B2. The sign
// conventions matter for the holonomy, so double-check the order when
// reproducing results. Angle tokens accept decimal radians or pi fractions
// ("pi/4", "3pi/4", "-pi/4").
//
// Every command is deterministic given its full flag set; JSON outputs echo
// the configuration (seed included) so a run can be reproduced from its
// output alone. CSV outputs start with '#' metadata lines followed by an
// RFC-4180 header and rows.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chsh/analytic.hpp"
#include "chsh/angles.hpp"
#include "chsh/density.hpp"
#include "chsh/density_io.hpp"
#include "chsh/engine.hpp"
#include "chsh/fisher.hpp"
#include "chsh/gamma_map.hpp"
#include "chsh/holonomy.hpp"
#include "chsh/version.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

struct CommonOptions {
    std::string density_spec = "quantum";
    std::size_t grid = chsh::GammaMap::kDefaultGridSize;
    std::optional<double> tol;  // density validation tol or map tol, per command
    std::string out;            // empty = stdout
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_format_csv_default = false) {
    cmd->add_option("--density", opt.density_spec,
                    "Density: 'uniform', 'quantum', or a path to a density spec JSON");
    cmd->add_option("--grid", opt.grid, "Transport map grid size (default 8193)");
    cmd->add_option("--tol", opt.tol,
                    "Tolerance (validation tolerance for validate-density, map inversion "
                    "tolerance elsewhere); defaults depend on the density kind");
    cmd->add_option("--out", opt.out, "Output path (default: stdout)");
    if (with_format_csv_default) opt.format = "csv";
    cmd->add_option("--format", opt.format, "Output format: csv or json");
}

chsh::GameSettings parse_settings(const std::string& csv, bool enforce_additivity) {
    std::vector<double> angles;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) angles.push_back(chsh::parse_angle(token));
    if (angles.size() != 4)
        throw std::invalid_argument(
            "--settings needs four comma-separated angles in the order A1B1,A1B2,A2B1,A2B2");
    return chsh::GameSettings::of(angles[0], angles[1], angles[2], angles[3],
                                  enforce_additivity);
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

ordered_json meta_block(const chsh::DensityModel& model, std::size_t grid, double tol) {
    return ordered_json{{"density", model.name()},
                        {"grid", grid},
                        {"tol", tol},
                        {"version", chsh::kVersion}};
}

void write_csv_meta(std::ostream& os, const chsh::DensityModel& model, std::size_t grid,
                    double tol) {
    os << "# density=" << model.name() << " grid=" << grid << " tol=" << tol
       << " version=" << chsh::kVersion << "\n";
}

void emit_json(Output& out, const ordered_json& j) { out.stream() << j.dump(2) << "\n"; }

ordered_json settings_json(const chsh::GameSettings& s) {
    return ordered_json{{"a1b1", s.a1b1},
                        {"a1b2", s.a1b2},
                        {"a2b1", s.a2b1},
                        {"a2b2", s.a2b2},
                        {"additivity_enforced", s.additivity_enforced},
                        {"calibration_offset", s.calibration_offset}};
}

const char* policy_name(chsh::SettingPolicy policy) {
    return policy == chsh::SettingPolicy::RoundRobin ? "round-robin" : "random-choice";
}

int run_validate_density(const CommonOptions& opt) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_density_tol(model));
    const chsh::DensityReport report = chsh::validate_density(model, tol);

    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks)
        checks.push_back(ordered_json{{"name", c.name}, {"passed", c.passed},
                                      {"residual", c.residual}});
    ordered_json j{{"command", "validate-density"},
                   {"meta", meta_block(model, opt.grid, tol)},
                   {"checks", checks},
                   {"passed", report.passed()}};
    Output out(opt.out);
    emit_json(out, j);
    return report.passed() ? kExitOk : kExitCheckFailed;
}

int run_gamma_table(const CommonOptions& opt) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_map_tol(model));
    const chsh::GammaMap map = chsh::GammaMap::build(model, opt.grid, tol);
    Output out(opt.out);
    write_csv_meta(out.stream(), model, opt.grid, tol);
    map.write_table_csv(out.stream());
    return kExitOk;
}

int run_simulate(const CommonOptions& opt, const std::string& settings_csv,
                 bool enforce_additivity, std::uint64_t rounds, std::uint64_t seed,
                 const std::string& policy_str, unsigned threads, const std::string& trace_path) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_map_tol(model));
    const chsh::GammaMap map = chsh::GammaMap::build(model, opt.grid, tol);
    const chsh::GameSettings settings = parse_settings(settings_csv, enforce_additivity);

    chsh::SettingPolicy policy;
    if (policy_str == "round-robin")
        policy = chsh::SettingPolicy::RoundRobin;
    else if (policy_str == "random-choice")
        policy = chsh::SettingPolicy::RandomChoice;
    else
        throw std::invalid_argument("--policy must be round-robin or random-choice");

    std::vector<chsh::RoundRecord> trace;
    std::vector<chsh::RoundRecord>* trace_ptr = trace_path.empty() ? nullptr : &trace;
    const chsh::GameResult result =
        chsh::run_game(map, settings, rounds, seed, policy, threads, trace_ptr);

    if (trace_ptr) {
        std::ofstream tf(trace_path);
        if (!tf) throw std::invalid_argument("cannot open trace file: " + trace_path);
        write_csv_meta(tf, model, opt.grid, tol);
        tf << "# hidden angles delta_a/delta_b are model-internal, not observable\n";
        tf << "round,setting,delta_a,delta_b,s_a,s_b\n";
        tf.precision(17);
        for (const auto& rec : trace)
            tf << rec.round << ',' << chsh::setting_label(rec.setting) << ',' << rec.delta_a
               << ',' << rec.delta_b << ',' << int(rec.s_a) << ',' << int(rec.s_b) << '\n';
    }

    ordered_json per_setting = ordered_json::array();
    for (int s = 0; s < 4; ++s) {
        const auto& est = result.per_setting[static_cast<std::size_t>(s)];
        per_setting.push_back(ordered_json{{"setting", chsh::setting_label(s)},
                                           {"theta", settings.theta_flat(s)},
                                           {"n", est.n()},
                                           {"n_same", est.n_same},
                                           {"n_opp", est.n_opp},
                                           {"estimate", est.estimate()},
                                           {"std_error", est.std_error()},
                                           {"mean_sa", est.mean_sa()},
                                           {"mean_sb", est.mean_sb()}});
    }
    ordered_json j{{"command", "simulate"},
                   {"meta", meta_block(model, opt.grid, tol)},
                   {"config",
                    ordered_json{{"density", model.name()},
                                 {"settings", settings_json(settings)},
                                 {"rounds_per_setting", rounds},
                                 {"seed", seed},
                                 {"policy", policy_name(policy)},
                                 {"threads", threads}}},
                   {"per_setting", per_setting},
                   {"score", result.score()},
                   {"mean_sa", result.mean_sa()},
                   {"mean_sb", result.mean_sb()}};
    Output out(opt.out);
    emit_json(out, j);
    return kExitOk;
}

int run_curve(const CommonOptions& opt, std::size_t points) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_map_tol(model));
    const chsh::GammaMap map = chsh::GammaMap::build(model, opt.grid, tol);
    const chsh::CorrelationCurve curve = chsh::sweep(map, points);

    Output out(opt.out);
    if (opt.format == "csv") {
        auto& os = out.stream();
        write_csv_meta(os, model, opt.grid, tol);
        os << "theta,E\n";
        os.precision(17);
        for (std::size_t k = 0; k < curve.theta.size(); ++k)
            os << curve.theta[k] << ',' << curve.value[k] << '\n';
    } else {
        ordered_json j{{"command", "curve"},
                       {"meta", meta_block(model, opt.grid, tol)},
                       {"theta", curve.theta},
                       {"E", curve.value}};
        emit_json(out, j);
    }
    return kExitOk;
}

int run_score(const CommonOptions& opt, const std::string& settings_csv,
              bool enforce_additivity) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_map_tol(model));
    const chsh::GammaMap map = chsh::GammaMap::build(model, opt.grid, tol);
    const chsh::GameSettings settings = parse_settings(settings_csv, enforce_additivity);

    ordered_json correlations;
    for (int s = 0; s < 4; ++s)
        correlations[chsh::setting_label(s)] =
            chsh::correlation(map, settings.theta_flat(s));
    ordered_json j{{"command", "score"},
                   {"meta", meta_block(model, opt.grid, tol)},
                   {"settings", settings_json(settings)},
                   {"correlations", correlations},
                   {"score", chsh::score(map, settings)}};
    Output out(opt.out);
    emit_json(out, j);
    return kExitOk;
}

int run_optimize(const CommonOptions& opt, int starts, double search_tol) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_map_tol(model));
    const chsh::GammaMap map = chsh::GammaMap::build(model, opt.grid, tol);
    const chsh::OptimizationResult result =
        chsh::maximize_score(map, /*enforce_additivity=*/true, starts, search_tol);

    ordered_json j{{"command", "optimize"},
                   {"meta", meta_block(model, opt.grid, tol)},
                   {"settings", settings_json(result.settings)},
                   {"score", result.best_score},
                   {"evaluations", result.evaluations},
                   {"starts", result.starts}};
    Output out(opt.out);
    emit_json(out, j);
    return kExitOk;
}

int run_holonomy(const CommonOptions& opt, const std::string& settings_csv,
                 bool enforce_additivity, const std::optional<std::string>& walk_start) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_map_tol(model));
    const chsh::GammaMap map = chsh::GammaMap::build(model, opt.grid, tol);
    const chsh::GameSettings settings = parse_settings(settings_csv, enforce_additivity);
    chsh::HolonomyResult result = chsh::holonomy_delta(map, settings);

    ordered_json j{{"command", "holonomy"},
                   {"meta", meta_block(model, opt.grid, tol)},
                   {"settings", settings_json(settings)},
                   {"legs",
                    ordered_json{{"a1b1", result.legs[0]},
                                 {"a1b2", result.legs[1]},
                                 {"a2b1", result.legs[2]},
                                 {"a2b2", result.legs[3]}}},
                   {"alternating_sum", result.alternating_sum},
                   {"delta", result.delta}};
    if (walk_start) {
        const double start = chsh::wrap_angle(chsh::parse_angle(*walk_start));
        const double final_angle = chsh::cyclic_walk(map, settings, start);
        j["walk"] = ordered_json{{"start", start}, {"final", final_angle}};
    }
    Output out(opt.out);
    emit_json(out, j);
    return kExitOk;
}

int run_fisher(const CommonOptions& opt, std::size_t points, double margin) {
    const chsh::DensityModel model = chsh::density_from_spec(opt.density_spec);
    const double tol = opt.tol.value_or(chsh::default_map_tol(model));
    const chsh::GammaMap map = chsh::GammaMap::build(model, opt.grid, tol);
    const chsh::FisherProfile profile = chsh::fisher_profile(model, map, points, margin);

    Output out(opt.out);
    if (opt.format == "csv") {
        auto& os = out.stream();
        write_csv_meta(os, model, opt.grid, tol);
        os << "theta,p_plus,fisher\n";
        os.precision(17);
        for (std::size_t k = 0; k < profile.theta.size(); ++k)
            os << profile.theta[k] << ',' << profile.p_plus[k] << ',' << profile.info[k]
               << '\n';
    } else {
        const chsh::FisherSummary summary = chsh::summarize_fisher(model, map, profile);
        ordered_json j{{"command", "fisher"},
                       {"meta", meta_block(model, opt.grid, tol)},
                       {"margin", margin},
                       {"points", points},
                       {"summary",
                        ordered_json{{"mean", summary.mean},
                                     {"max_dev_from_mean", summary.max_dev_from_mean},
                                     {"divergence_flag", summary.divergence_flag}}}};
        emit_json(out, j);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH game simulator: measure-preserving hidden-angle transport, "
                 "correlations, holonomy, and Fisher information"};
    app.require_subcommand(1);
    app.set_version_flag("--version", chsh::kVersion);

    std::string settings_csv = "pi/4,3pi/4,-pi/4,pi/4";
    bool enforce_additivity = false;
    std::uint64_t rounds = 1000000;
    std::uint64_t seed = 42;
    std::string policy = "round-robin";
    unsigned threads = 1;
    std::string trace_path;
    std::size_t points = 1001;
    double margin = 1e-3;
    int starts = 64;
    double search_tol = 1e-9;
    std::optional<std::string> walk_start;

    CommonOptions validate_opt, table_opt, simulate_opt, curve_opt, score_opt, optimize_opt,
        holonomy_opt, fisher_opt;

    auto* cmd_validate = app.add_subcommand("validate-density",
                                            "Check a density for admissibility");
    add_common(cmd_validate, validate_opt);

    auto* cmd_table = app.add_subcommand("gamma-table", "Dump the transport map table as CSV");
    add_common(cmd_table, table_opt, /*with_format_csv_default=*/true);

    auto* cmd_simulate = app.add_subcommand("simulate", "Run game rounds and estimate "
                                                        "per-setting correlations and the score");
    add_common(cmd_simulate, simulate_opt);
    cmd_simulate->add_option("--settings", settings_csv,
                             "Four angles, order A1B1,A1B2,A2B1,A2B2");
    cmd_simulate->add_flag("--enforce-additivity", enforce_additivity,
                           "Require a1b1 + a2b2 - a1b2 - a2b1 = 0 (mod 2pi)");
    cmd_simulate->add_option("--rounds", rounds, "Rounds per setting");
    cmd_simulate->add_option("--seed", seed, "RNG seed");
    cmd_simulate->add_option("--policy", policy, "round-robin or random-choice");
    cmd_simulate->add_option("--threads", threads,
                             "Worker threads (affects wall time only, never results)");
    cmd_simulate->add_option("--trace", trace_path, "Write a per-round CSV trace here");

    auto* cmd_curve = app.add_subcommand("curve", "Correlation E(theta) on a grid");
    add_common(cmd_curve, curve_opt, /*with_format_csv_default=*/true);
    cmd_curve->add_option("--points", points, "Grid points");

    auto* cmd_score = app.add_subcommand("score", "Closed-form score at given settings");
    add_common(cmd_score, score_opt);
    cmd_score->add_option("--settings", settings_csv,
                          "Four angles, order A1B1,A1B2,A2B1,A2B2");
    cmd_score->add_flag("--enforce-additivity", enforce_additivity,
                        "Require a1b1 + a2b2 - a1b2 - a2b1 = 0 (mod 2pi)");

    auto* cmd_optimize = app.add_subcommand("optimize", "Maximize the score over settings");
    add_common(cmd_optimize, optimize_opt);
    cmd_optimize->add_option("--starts", starts, "Multi-start count");
    cmd_optimize->add_option("--search-tol", search_tol, "Stationarity tolerance");

    auto* cmd_holonomy = app.add_subcommand("holonomy",
                                            "Geometric phase over the setting cycle");
    add_common(cmd_holonomy, holonomy_opt);
    cmd_holonomy->add_option("--settings", settings_csv,
                             "Four angles, order A1B1,A1B2,A2B1,A2B2");
    cmd_holonomy->add_flag("--enforce-additivity", enforce_additivity,
                           "Require a1b1 + a2b2 - a1b2 - a2b1 = 0 (mod 2pi)");
    cmd_holonomy->add_option("--walk", walk_start,
                             "Also walk this starting angle around the cycle");

    auto* cmd_fisher = app.add_subcommand("fisher", "Fisher information profile or summary");
    add_common(cmd_fisher, fisher_opt, /*with_format_csv_default=*/true);
    cmd_fisher->add_option("--points", points, "Grid points");
    cmd_fisher->add_option("--margin", margin, "Endpoint margin (profile lives on "
                                               "[margin, pi - margin])");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (cmd_validate->parsed()) return run_validate_density(validate_opt);
        if (cmd_table->parsed()) return run_gamma_table(table_opt);
        if (cmd_simulate->parsed())
            return run_simulate(simulate_opt, settings_csv, enforce_additivity, rounds, seed,
                                policy, threads, trace_path);
        if (cmd_curve->parsed()) return run_curve(curve_opt, points);
        if (cmd_score->parsed()) return run_score(score_opt, settings_csv, enforce_additivity);
        if (cmd_optimize->parsed()) return run_optimize(optimize_opt, starts, search_tol);
        if (cmd_holonomy->parsed())
            return run_holonomy(holonomy_opt, settings_csv, enforce_additivity, walk_start);
        if (cmd_fisher->parsed()) return run_fisher(fisher_opt, points, margin);
    } catch (const std::exception& e) {
        std::cerr << "chsh: error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
