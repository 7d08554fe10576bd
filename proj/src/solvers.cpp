#include "hprs/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "hprs/assessment.hpp"
#include "hprs/error.hpp"
#include "hprs/semantics.hpp"

namespace hprs {

namespace {

std::vector<std::vector<int>> extract_greedy(const Eigen::MatrixXd& q, double tie_tol) {
    std::vector<std::vector<int>> greedy(static_cast<std::size_t>(q.rows()));
    for (Eigen::Index s = 0; s < q.rows(); ++s) {
        const double best = q.row(s).maxCoeff();
        for (Eigen::Index a = 0; a < q.cols(); ++a) {
            if (q(s, a) >= best - tie_tol) greedy[s].push_back(static_cast<int>(a));
        }
    }
    return greedy;
}

}  // namespace

ValueIterationResult value_iteration(const FiniteMDP& mdp, const RewardFn& reward, double gamma,
                                     double eps, double tie_tol) {
    mdp.check();
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(Errc::BadConfig, "gamma must be in (0, 1)");
    if (!(eps > 0.0)) throw Error(Errc::BadConfig, "eps must be positive");

    const int n = mdp.num_states;
    const int m = mdp.num_actions;

    // Expected immediate reward per (s, a); rewards never change across
    // sweeps, so fold them with the transition probabilities once.
    std::vector<Eigen::VectorXd> expected_r(m, Eigen::VectorXd::Zero(n));
    for (int a = 0; a < m; ++a) {
        for (int s = 0; s < n; ++s) {
            if (mdp.terminal[s]) continue;
            double acc = 0.0;
            for (int s2 = 0; s2 < n; ++s2) {
                const double p = mdp.P[a](s, s2);
                if (p > 0.0) acc += p * reward(s, a, s2);
            }
            expected_r[a][s] = acc;
        }
    }

    Eigen::VectorXd nonterminal(n);
    for (int s = 0; s < n; ++s) nonterminal[s] = mdp.terminal[s] ? 0.0 : 1.0;

    ValueIterationResult out;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, m);
    Eigen::MatrixXd q_next(n, m);
    const int max_sweeps = 1'000'000;
    for (int it = 0; it < max_sweeps; ++it) {
        const Eigen::VectorXd v =
            q.rowwise().maxCoeff().cwiseProduct(nonterminal);
        for (int a = 0; a < m; ++a) {
            q_next.col(a) = expected_r[a] + gamma * (mdp.P[a] * v);
        }
        q_next.array().colwise() *= nonterminal.array();
        const double residual = (q_next - q).cwiseAbs().maxCoeff();
        q.swap(q_next);
        out.residuals.push_back(residual);
        out.iterations = it + 1;
        if (residual <= eps) break;
    }

    out.policy.q = std::move(q);
    out.policy.greedy = extract_greedy(out.policy.q, tie_tol);
    return out;
}

Eigen::VectorXd state_potentials(const FiniteMDP& mdp, const TaskSpec& task,
                                 TerminalPotential convention) {
    Eigen::VectorXd psi(mdp.num_states);
    for (int s = 0; s < mdp.num_states; ++s) {
        if (mdp.terminal[s] && convention == TerminalPotential::Zero) {
            psi[s] = 0.0;
        } else {
            psi[s] = potential(task, mdp.features[s]);
        }
    }
    return psi;
}

RewardFn make_base_reward_fn(const FiniteMDP& mdp, const TaskSpec& task) {
    auto base = std::make_shared<Eigen::VectorXd>(mdp.num_states);
    for (int s = 0; s < mdp.num_states; ++s) (*base)[s] = base_reward(task, mdp.features[s]);
    return [base](int, int, int next) { return (*base)[next]; };
}

RewardFn make_hprs_reward_fn(const FiniteMDP& mdp, const TaskSpec& task, double gamma,
                             TerminalPotential convention) {
    auto base = std::make_shared<Eigen::VectorXd>(mdp.num_states);
    for (int s = 0; s < mdp.num_states; ++s) (*base)[s] = base_reward(task, mdp.features[s]);
    auto psi = std::make_shared<Eigen::VectorXd>(state_potentials(mdp, task, convention));
    return [base, psi, gamma](int s, int, int next) {
        return (*base)[next] + gamma * (*psi)[next] - (*psi)[s];
    };
}

InvarianceReport verify_invariance(const std::string& name, const FiniteMDP& mdp,
                                   const TaskSpec& task, double gamma, double eps,
                                   double identity_tol) {
    InvarianceReport report;
    report.name = name;

    const auto base = value_iteration(mdp, make_base_reward_fn(mdp, task), gamma, eps);
    const auto shaped = value_iteration(mdp, make_hprs_reward_fn(mdp, task, gamma), gamma, eps);

    report.argmax_equal = true;
    for (int s = 0; s < mdp.num_states; ++s) {
        if (base.policy.greedy[s] != shaped.policy.greedy[s]) {
            report.argmax_equal = false;
            report.first_diff_state = s;
            break;
        }
    }

    const Eigen::VectorXd psi = state_potentials(mdp, task, TerminalPotential::Zero);
    double max_err = 0.0;
    for (int s = 0; s < mdp.num_states; ++s) {
        for (int a = 0; a < mdp.num_actions; ++a) {
            const double expect = base.policy.q(s, a) - (mdp.terminal[s] ? 0.0 : psi[s]);
            max_err = std::max(max_err, std::fabs(shaped.policy.q(s, a) - expect));
        }
    }
    report.max_identity_error = max_err;
    report.identity_ok = max_err <= identity_tol;
    return report;
}

const char* reward_variant_name(RewardVariant v) {
    switch (v) {
        case RewardVariant::Hprs: return "hprs";
        case RewardVariant::Sparse: return "sparse";
        case RewardVariant::MorlUniform: return "morl-unif";
        case RewardVariant::MorlDecreasing: return "morl-decr";
        case RewardVariant::Tltl: return "tltl";
        case RewardVariant::Bhnr: return "bhnr";
    }
    return "?";
}

RewardVariant reward_variant_from_name(const std::string& name) {
    for (RewardVariant v : {RewardVariant::Hprs, RewardVariant::Sparse, RewardVariant::MorlUniform,
                            RewardVariant::MorlDecreasing, RewardVariant::Tltl,
                            RewardVariant::Bhnr}) {
        if (name == reward_variant_name(v)) return v;
    }
    throw Error(Errc::BadConfig, "unknown reward variant '" + name + "'");
}

StepRewardFn make_step_reward(const FiniteMDP& mdp, const TaskSpec& task, RewardVariant variant,
                              const RewardParams& params) {
    switch (variant) {
        case RewardVariant::Sparse: {
            auto fn = make_base_reward_fn(mdp, task);
            return [fn](const StepContext& ctx) { return fn(ctx.s, ctx.a, ctx.next); };
        }
        case RewardVariant::Hprs: {
            auto fn = make_hprs_reward_fn(mdp, task, params.gamma, params.terminal);
            return [fn](const StepContext& ctx) { return fn(ctx.s, ctx.a, ctx.next); };
        }
        case RewardVariant::MorlUniform:
        case RewardVariant::MorlDecreasing: {
            const auto scheme = variant == RewardVariant::MorlUniform ? MorlWeights::Uniform
                                                                      : MorlWeights::Decreasing;
            auto values = std::make_shared<Eigen::VectorXd>(mdp.num_states);
            for (int s = 0; s < mdp.num_states; ++s) {
                (*values)[s] = morl_reward(task, mdp.features[s], scheme);
            }
            return [values](const StepContext& ctx) { return (*values)[ctx.next]; };
        }
        case RewardVariant::Tltl: {
            const FiniteMDP* model = &mdp;
            const TaskSpec* t = &task;
            return [model, t](const StepContext& ctx) {
                if (!ctx.episode_end) return 0.0;
                Trace trace;
                for (int s : *ctx.history) trace.states.push_back(model->features[s]);
                trace.horizon = static_cast<int>(trace.states.size()) - 1;
                return tltl_robustness(*t, trace);
            };
        }
        case RewardVariant::Bhnr: {
            const FiniteMDP* model = &mdp;
            const TaskSpec* t = &task;
            const int window = params.bhnr_window;
            return [model, t, window](const StepContext& ctx) {
                Trace trace;
                for (int s : *ctx.history) trace.states.push_back(model->features[s]);
                trace.horizon = static_cast<int>(trace.states.size()) - 1;
                return bhnr_reward(*t, trace, trace.states.size() - 1, window);
            };
        }
    }
    throw Error(Errc::BadConfig, "unhandled reward variant");
}

Trace rollout(const FiniteMDP& mdp, const TaskSpec& task, const TabularPolicy& policy,
              std::mt19937_64& rng) {
    Trace trace;
    int s = mdp.sample_initial(rng);
    trace.states.push_back(mdp.features[s]);
    trace.horizon = mdp.horizon;
    EpisodeController ctrl(task, mdp.horizon);
    while (ctrl.status() == Termination::Running) {
        const int a = policy.greedy_action(s);
        const int next = mdp.sample_next(s, a, rng);
        trace.states.push_back(mdp.features[next]);
        trace.termination = ctrl.step_verdict(mdp.features[next]);
        s = next;
        if (mdp.terminal[s] && ctrl.status() == Termination::Running) {
            // absorbing state the task semantics did not flag; stop the walk
            trace.termination = Termination::Timeout;
            break;
        }
    }
    return trace;
}

namespace {

CurvePoint evaluate_policy(const FiniteMDP& mdp, const TaskSpec& task, const TabularPolicy& policy,
                           int episodes, int at_episode, std::mt19937_64& rng);

}  // namespace

QLearnResult q_learning(const FiniteMDP& mdp, const TaskSpec& task, const StepRewardFn& reward,
                        int episodes, std::uint64_t seed, const QLearnConfig& cfg) {
    mdp.check();
    if (episodes < 0) throw Error(Errc::BadConfig, "episode count must be nonnegative");

    QLearnResult out;
    out.policy.q = Eigen::MatrixXd::Zero(mdp.num_states, mdp.num_actions);
    Eigen::MatrixXd visits = Eigen::MatrixXd::Zero(mdp.num_states, mdp.num_actions);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> random_action(0, mdp.num_actions - 1);

    std::vector<int> live_states;
    for (int s = 0; s < mdp.num_states; ++s) {
        if (!mdp.terminal[s]) live_states.push_back(s);
    }
    std::uniform_int_distribution<std::size_t> random_start(0, live_states.size() - 1);

    std::vector<int> history;
    for (int ep = 0; ep < episodes; ++ep) {
        const double frac = episodes > 1 ? static_cast<double>(ep) / (episodes - 1) : 1.0;
        const double epsilon = cfg.epsilon_start + frac * (cfg.epsilon_end - cfg.epsilon_start);

        int s = cfg.exploring_starts ? live_states[random_start(rng)] : mdp.sample_initial(rng);
        history.assign(1, s);
        for (int t = 1; t <= mdp.horizon; ++t) {
            int a;
            if (unif(rng) < epsilon) {
                a = random_action(rng);
            } else {
                int best = 0;
                for (int cand = 1; cand < mdp.num_actions; ++cand) {
                    if (out.policy.q(s, cand) > out.policy.q(s, best)) best = cand;
                }
                a = best;
            }
            const int next = mdp.sample_next(s, a, rng);
            history.push_back(next);

            StepContext ctx;
            ctx.s = s;
            ctx.a = a;
            ctx.next = next;
            ctx.t = t;
            ctx.next_terminal = mdp.terminal[next];
            ctx.episode_end = ctx.next_terminal || t == mdp.horizon;
            ctx.history = &history;
            const double r = reward(ctx);

            const double bootstrap =
                mdp.terminal[next] ? 0.0 : out.policy.q.row(next).maxCoeff();
            const double target = r + cfg.gamma * bootstrap;
            visits(s, a) += 1.0;
            const double alpha =
                cfg.alpha_decay_visits > 0.0
                    ? cfg.alpha / (1.0 + visits(s, a) / cfg.alpha_decay_visits)
                    : cfg.alpha;
            out.policy.q(s, a) += alpha * (target - out.policy.q(s, a));

            s = next;
            if (mdp.terminal[s]) break;
        }

        if (cfg.eval_every > 0 && (ep + 1) % cfg.eval_every == 0) {
            TabularPolicy snapshot;
            snapshot.q = out.policy.q;
            snapshot.greedy = extract_greedy(snapshot.q, cfg.tie_tol);
            out.curve.push_back(
                evaluate_policy(mdp, task, snapshot, cfg.eval_episodes, ep + 1, rng));
        }
    }
    out.policy.greedy = extract_greedy(out.policy.q, cfg.tie_tol);
    return out;
}

namespace {

CurvePoint evaluate_policy(const FiniteMDP& mdp, const TaskSpec& task, const TabularPolicy& policy,
                           int episodes, int at_episode, std::mt19937_64& rng) {
    std::vector<double> fs;
    fs.reserve(static_cast<std::size_t>(episodes));
    for (int e = 0; e < episodes; ++e) {
        const Trace trace = rollout(mdp, task, policy, rng);
        fs.push_back(pam(task, trace).f);
    }
    CurvePoint point;
    point.episode = at_episode;
    double sum = 0.0;
    for (double f : fs) sum += f;
    point.f_mean = sum / static_cast<double>(fs.size());
    double var = 0.0;
    for (double f : fs) var += (f - point.f_mean) * (f - point.f_mean);
    point.f_std = std::sqrt(var / static_cast<double>(fs.size()));
    return point;
}

}  // namespace

}  // namespace hprs
