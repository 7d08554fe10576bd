// Command-line front end: validate specs, monitor recorded traces, shape
// rewards, train and benchmark tabular agents, and run the policy-invariance
// oracle on the bundled MDPs.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hprs/assessment.hpp"
#include "hprs/bundled.hpp"
#include "hprs/envs.hpp"
#include "hprs/error.hpp"
#include "hprs/semantics.hpp"
#include "hprs/shaping.hpp"
#include "hprs/solvers.hpp"
#include "hprs/task.hpp"
#include "hprs/trace.hpp"

namespace {

using namespace hprs;
using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash(const json& effective) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(effective.dump());
    return os.str();
}

void write_run_sidecar(const std::string& out_dir, const json& effective) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / "run.json");
    out << effective.dump(2) << '\n';
}

struct LoadedSpec {
    TaskSpec task;
    std::vector<Diagnostic> warnings;
};

// Parses and validates, printing diagnostics to stderr. Throws on failure.
LoadedSpec load_spec(const std::string& path) {
    const auto parsed = parse_spec(read_file(path), path);
    for (const auto& d : parsed.diagnostics) std::cerr << d << '\n';
    if (!parsed.ok()) throw Error(Errc::BadConfig, "specification has errors");
    std::vector<Diagnostic> warnings;
    TaskSpec task = TaskSpec::validate(parsed.draft, &warnings);
    for (const auto& w : warnings) std::cerr << w << '\n';
    return LoadedSpec{std::move(task), std::move(warnings)};
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---- subcommand payloads ----

int run_validate(const std::string& spec_path) {
    const auto loaded = load_spec(spec_path);
    const auto& task = loaded.task;

    std::cout << "class      name                      signal                          bounds\n";
    for (const auto& req : task.requirements()) {
        std::ostringstream sig;
        sig << *req.signal;
        std::cout << std::left << std::setw(11) << class_label(req.cls) << std::setw(26)
                  << req.name << std::setw(32) << sig.str() << "[" << format_double(req.bounds.lo)
                  << ", " << format_double(req.bounds.hi) << "]\n";
    }
    std::cout << "\npartition: |safety| = " << task.safety_indices().size()
              << ", |target| = 1, |comfort| = " << task.comfort_indices().size() << "\n";
    std::cout << "precedence (phi' < phi):\n";
    for (std::size_t i = 0; i < task.size(); ++i) {
        for (std::size_t j = 0; j < task.size(); ++j) {
            if (task.precedes(i, j)) {
                std::cout << "  " << task.requirements()[i].name << " < "
                          << task.requirements()[j].name << "\n";
            }
        }
    }
    return 0;
}

int run_monitor(const std::string& spec_path, const std::string& trace_path,
                ComfortCombine combine, const std::string& out_dir) {
    const auto loaded = load_spec(spec_path);
    const auto& task = loaded.task;
    int clamped = 0;
    const Trace trace = load_trace_file(trace_path, task.decls(), &clamped);
    if (clamped > 0) {
        std::cerr << trace_path << ": clamped " << clamped << " state values into declared ranges\n";
    }

    json effective{{"command", "monitor"},
                   {"spec", spec_path},
                   {"trace", trace_path},
                   {"comfort_combine", combine == ComfortCombine::Mean ? "mean" : "min"}};
    std::ostringstream csv;
    csv << "# config " << config_hash(effective) << "\n";
    csv << "name,class,sigma,sigma_avg,robustness\n";
    for (const auto& req : task.requirements()) {
        csv << req.name << ',' << class_label(req.cls) << ',' << bool_str(sigma(req, trace)) << ',';
        if (req.cls == RequirementClass::Comfort) csv << format_double(sigma_avg(req, trace));
        csv << ',' << format_double(robustness(req, trace)) << "\n";
    }
    csv << "_task_,task," << bool_str(sigma_task(task, trace)) << ','
        << format_double(sigma_avg_comfort(task, trace)) << ','
        << format_double(tltl_robustness(task, trace, combine)) << "\n";

    std::cout << csv.str();
    if (!out_dir.empty()) {
        write_run_sidecar(out_dir, effective);
        std::ofstream f(std::filesystem::path(out_dir) / "monitor.csv");
        f << csv.str();
    }
    return 0;
}

int run_shape(const std::string& spec_path, const std::string& trace_path, int window,
              TerminalPotential convention, ComfortCombine combine, const std::string& out_dir) {
    const auto loaded = load_spec(spec_path);
    const auto& task = loaded.task;
    int clamped = 0;
    const Trace trace = load_trace_file(trace_path, task.decls(), &clamped);
    if (trace.states.size() < 2) {
        throw Error(Errc::EmptyTrace, "shaping needs at least one transition");
    }

    json effective{{"command", "shape"},
                   {"spec", spec_path},
                   {"trace", trace_path},
                   {"window", window},
                   {"terminal_potential", convention == TerminalPotential::Zero ? "zero" : "free"},
                   {"comfort_combine", combine == ComfortCombine::Mean ? "mean" : "min"}};
    std::ostringstream csv;
    csv << "# config " << config_hash(effective) << "\n";
    csv << "t,base,psi_before,psi_after,shaped,morl_unif,morl_decr,tltl_final,bhnr\n";

    const bool ends_absorbing = trace.termination == Termination::SafetyViolation ||
                                trace.termination == Termination::GoalAchieved;
    for (std::size_t t = 1; t < trace.states.size(); ++t) {
        const bool last = t + 1 == trace.states.size();
        const bool terminal = last && ends_absorbing;
        const auto step =
            shaped_reward(task, trace.states[t - 1], trace.states[t], terminal, convention);
        csv << t << ',' << format_double(step.base) << ',' << format_double(step.potential_before)
            << ',' << format_double(step.potential_after) << ',' << format_double(step.shaped)
            << ',' << format_double(morl_reward(task, trace.states[t], MorlWeights::Uniform))
            << ',' << format_double(morl_reward(task, trace.states[t], MorlWeights::Decreasing))
            << ',';
        if (last) csv << format_double(tltl_robustness(task, trace, combine));
        csv << ',' << format_double(bhnr_reward(task, trace, t, window)) << "\n";
    }

    std::cout << csv.str();
    if (!out_dir.empty()) {
        write_run_sidecar(out_dir, effective);
        std::ofstream f(std::filesystem::path(out_dir) / "shape.csv");
        f << csv.str();
    }
    return 0;
}

struct EnvChoice {
    std::string name = "grid";
    std::string config_path;
};

GridDriveEnv make_grid_env(const EnvChoice& choice) {
    if (choice.config_path.empty()) return bundled::grid_small();
    return GridDriveEnv::from_config_text(read_file(choice.config_path));
}

int run_train(const std::string& spec_path, const EnvChoice& env_choice,
              const std::string& reward_name, int episodes, std::vector<std::uint64_t> seeds,
              const QLearnConfig& qcfg, const RewardParams& params, const std::string& out_dir) {
    if (env_choice.name != "grid") {
        throw Error(Errc::NonDiscreteEnvironment,
                    "tabular training requires the discrete grid environment, got '" +
                        env_choice.name + "'");
    }
    if (seeds.empty()) throw Error(Errc::BadConfig, "train needs at least one seed");
    const auto loaded = load_spec(spec_path);
    const auto& task = loaded.task;
    const auto env = make_grid_env(env_choice);
    const auto variant = reward_variant_from_name(reward_name);
    const auto reward = make_step_reward(env.model(), task, variant, params);

    json effective{{"command", "train"},       {"spec", spec_path},
                   {"env", env_choice.name},   {"env_config", env_choice.config_path},
                   {"reward", reward_name},    {"episodes", episodes},
                   {"seeds", seeds},           {"gamma", qcfg.gamma},
                   {"alpha", qcfg.alpha},      {"eval_every", qcfg.eval_every},
                   {"eval_episodes", qcfg.eval_episodes}};

    std::vector<std::vector<CurvePoint>> curves;
    for (std::uint64_t seed : seeds) {
        curves.push_back(q_learning(env.model(), task, reward, episodes, seed, qcfg).curve);
    }

    std::ostringstream csv;
    csv << "# config " << config_hash(effective) << "\n";
    csv << "episode,F_mean,F_std\n";
    if (!curves.empty() && !curves.front().empty()) {
        const std::size_t points = curves.front().size();
        for (std::size_t i = 0; i < points; ++i) {
            double mean = 0.0;
            for (const auto& c : curves) mean += c[i].f_mean;
            mean /= static_cast<double>(curves.size());
            double var = 0.0;
            for (const auto& c : curves) var += (c[i].f_mean - mean) * (c[i].f_mean - mean);
            const double stdev = curves.size() > 1
                                     ? std::sqrt(var / static_cast<double>(curves.size()))
                                     : curves.front()[i].f_std;
            csv << curves.front()[i].episode << ',' << format_double(mean) << ','
                << format_double(stdev) << "\n";
        }
    }

    std::cout << csv.str();
    if (!out_dir.empty()) {
        write_run_sidecar(out_dir, effective);
        std::ofstream f(std::filesystem::path(out_dir) / "train_curve.csv");
        f << csv.str();
    }
    return 0;
}

int run_verify_invariance(double gamma, double eps) {
    bool all_pass = true;
    for (const auto& vc : bundled::verification_cases()) {
        const auto report = verify_invariance(vc.name, vc.mdp, vc.task, gamma, eps, 1e-6);
        if (report.pass()) {
            std::cout << "PASS " << report.name << " (" << vc.mdp.num_states
                      << " states, max identity error " << format_double(report.max_identity_error)
                      << ")\n";
        } else {
            all_pass = false;
            std::cout << "FAIL " << report.name;
            if (!report.argmax_equal) {
                std::cout << ": greedy sets differ first at state " << report.first_diff_state
                          << " (" << vc.mdp.state_labels[report.first_diff_state] << ")";
            }
            if (!report.identity_ok) {
                std::cout << ": max identity error " << format_double(report.max_identity_error);
            }
            std::cout << "\n";
        }
    }
    return all_pass ? 0 : 1;
}

int run_bench(const std::string& spec_path, const EnvChoice& env_choice, int eval_episodes,
              int train_episodes, std::vector<std::uint64_t> seeds,
              std::vector<std::string> reward_names, double comfort_cutoff,
              const QLearnConfig& qcfg, const RewardParams& params, const std::string& out_dir) {
    if (env_choice.name != "grid") {
        throw Error(Errc::NonDiscreteEnvironment,
                    "bench requires the discrete grid environment, got '" + env_choice.name + "'");
    }
    if (seeds.empty()) throw Error(Errc::BadConfig, "bench needs at least one seed");
    const auto loaded = load_spec(spec_path);
    const auto& task = loaded.task;
    const auto env = make_grid_env(env_choice);

    json effective{{"command", "bench"},
                   {"spec", spec_path},
                   {"env", env_choice.name},
                   {"env_config", env_choice.config_path},
                   {"episodes", eval_episodes},
                   {"train_episodes", train_episodes},
                   {"seeds", seeds},
                   {"rewards", reward_names},
                   {"comfort_cutoff", comfort_cutoff}};

    std::ostringstream csv;
    csv << "# config " << config_hash(effective) << "\n";
    csv << "reward,S,S_T,S_T_C\n";
    for (const auto& name : reward_names) {
        const auto variant = reward_variant_from_name(name);
        const auto reward = make_step_reward(env.model(), task, variant, params);
        std::vector<AssessmentReport> reports;
        for (std::uint64_t seed : seeds) {
            const auto trained = q_learning(env.model(), task, reward, train_episodes, seed, qcfg);
            std::mt19937_64 eval_rng(seed ^ 0x9E3779B97F4A7C15ULL);
            for (int e = 0; e < eval_episodes; ++e) {
                reports.push_back(pam(task, rollout(env.model(), task, trained.policy, eval_rng)));
            }
        }
        const auto rates = aggregate(reports, comfort_cutoff);
        csv << name << ',' << format_double(rates.safety) << ','
            << format_double(rates.safety_target) << ','
            << format_double(rates.safety_target_comfort) << "\n";
    }

    std::cout << csv.str();
    if (!out_dir.empty()) {
        write_run_sidecar(out_dir, effective);
        std::ofstream f(std::filesystem::path(out_dir) / "bench.csv");
        f << csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical potential-based reward shaping from task specifications"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string spec_path, trace_path;
    std::string out_dir;
    EnvChoice env_choice;
    std::string reward_name = "hprs";
    std::vector<std::string> reward_names{"hprs", "sparse", "morl-unif", "morl-decr", "tltl",
                                          "bhnr"};
    std::vector<std::uint64_t> seeds{0};
    int episodes = 8000;
    int eval_episodes = 50;
    int train_episodes = 8000;
    int window = kBhnrDefaultWindow;
    double gamma = 0.99;   // verification oracle
    double train_gamma = 0.9;  // tabular learning
    double eps = 1e-10;
    double alpha = 0.1;
    double comfort_cutoff = kDefaultComfortCutoff;
    std::string terminal_mode = "zero";
    std::string combine_mode = "min";
    bool exploring_starts = false;
    QLearnConfig qcfg;

    auto* validate_cmd = app.add_subcommand("validate", "check a .req task specification");
    validate_cmd->add_option("spec", spec_path, "task specification (.req)")->required();

    auto* monitor_cmd = app.add_subcommand("monitor", "evaluate satisfaction over a trace");
    monitor_cmd->add_option("spec", spec_path)->required();
    monitor_cmd->add_option("trace", trace_path, "JSON-lines trace")->required();
    monitor_cmd->add_option("--comfort-combine", combine_mode, "min|mean comfort folding");
    monitor_cmd->add_option("--out", out_dir, "directory for monitor.csv and run.json");

    auto* shape_cmd = app.add_subcommand("shape", "per-step shaped rewards for a trace");
    shape_cmd->add_option("spec", spec_path)->required();
    shape_cmd->add_option("trace", trace_path)->required();
    shape_cmd->add_option("--window", window, "BHNR sliding-window length");
    shape_cmd->add_option("--terminal-potential", terminal_mode, "zero|free");
    shape_cmd->add_option("--comfort-combine", combine_mode, "min|mean comfort folding");
    shape_cmd->add_option("--out", out_dir, "directory for shape.csv and run.json");

    auto* train_cmd = app.add_subcommand("train", "tabular Q-learning with a chosen reward");
    train_cmd->add_option("spec", spec_path)->required();
    train_cmd->add_option("--env", env_choice.name, "grid|pointmass");
    train_cmd->add_option("--env-config", env_choice.config_path, "environment config file");
    train_cmd->add_option("--reward", reward_name, "hprs|sparse|morl-unif|morl-decr|tltl|bhnr");
    train_cmd->add_option("--episodes", episodes, "training episodes per seed");
    train_cmd->add_option("--seeds", seeds, "comma-separated seeds")
        ->delimiter(',')
        ->envname("HPRS_SEED");
    train_cmd->add_option("--gamma", train_gamma, "discount factor");
    train_cmd->add_option("--alpha", alpha, "learning rate");
    train_cmd->add_flag("--exploring-starts", exploring_starts,
                        "start training episodes from random states");
    train_cmd->add_option("--eval-every", qcfg.eval_every, "episodes between evaluations");
    train_cmd->add_option("--eval-episodes", qcfg.eval_episodes, "episodes per evaluation");
    train_cmd->add_option("--window", window, "BHNR sliding-window length");
    train_cmd->add_option("--out", out_dir, "directory for train_curve.csv and run.json");

    auto* verify_cmd =
        app.add_subcommand("verify-invariance", "policy-invariance oracle on bundled MDPs");
    verify_cmd->add_option("--gamma", gamma, "discount factor");
    verify_cmd->add_option("--eps", eps, "value-iteration stopping residual");

    auto* bench_cmd = app.add_subcommand("bench", "success-rate table across reward variants");
    bench_cmd->add_option("spec", spec_path)->required();
    bench_cmd->add_option("--env", env_choice.name, "grid|pointmass");
    bench_cmd->add_option("--env-config", env_choice.config_path, "environment config file");
    bench_cmd->add_option("--episodes", eval_episodes, "evaluation episodes per seed");
    bench_cmd->add_option("--train-episodes", train_episodes, "training episodes per seed");
    bench_cmd->add_option("--seeds", seeds, "comma-separated seeds")
        ->delimiter(',')
        ->envname("HPRS_SEED");
    bench_cmd->add_option("--rewards", reward_names, "reward variants to benchmark")
        ->delimiter(',');
    bench_cmd->add_option("--comfort-cutoff", comfort_cutoff, "S+T+C comfort threshold");
    bench_cmd->add_option("--gamma", train_gamma, "discount factor");
    bench_cmd->add_option("--alpha", alpha, "learning rate");
    bench_cmd->add_flag("--exploring-starts", exploring_starts,
                        "start training episodes from random states");
    bench_cmd->add_option("--window", window, "BHNR sliding-window length");
    bench_cmd->add_option("--out", out_dir, "directory for bench.csv and run.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const auto combine =
            combine_mode == "mean" ? ComfortCombine::Mean : ComfortCombine::MinConjunction;
        const auto convention =
            terminal_mode == "free" ? TerminalPotential::Free : TerminalPotential::Zero;
        qcfg.gamma = train_gamma;
        qcfg.alpha = alpha;
        qcfg.exploring_starts = exploring_starts;
        RewardParams params;
        params.gamma = train_gamma;
        params.bhnr_window = window;
        params.terminal = convention;

        if (validate_cmd->parsed()) return run_validate(spec_path);
        if (monitor_cmd->parsed()) return run_monitor(spec_path, trace_path, combine, out_dir);
        if (shape_cmd->parsed()) {
            return run_shape(spec_path, trace_path, window, convention, combine, out_dir);
        }
        if (train_cmd->parsed()) {
            return run_train(spec_path, env_choice, reward_name, episodes, seeds, qcfg, params,
                             out_dir);
        }
        if (verify_cmd->parsed()) return run_verify_invariance(gamma, eps);
        if (bench_cmd->parsed()) {
            return run_bench(spec_path, env_choice, eval_episodes, train_episodes, seeds,
                             reward_names, comfort_cutoff, qcfg, params, out_dir);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
