#ifndef HPRS_SOLVERS_HPP
#define HPRS_SOLVERS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hprs/mdp.hpp"
#include "hprs/shaping.hpp"

namespace hprs {

// Greedy policy extracted from a Q table; `greedy[s]` is the argmax set of
// state s with ties resolved up to a tolerance.
struct TabularPolicy {
    Eigen::MatrixXd q;  // states x actions
    std::vector<std::vector<int>> greedy;

    int greedy_action(int s) const { return greedy[s].front(); }
};

using RewardFn = std::function<double(int s, int a, int next)>;

struct ValueIterationResult {
    TabularPolicy policy;
    int iterations = 0;
    std::vector<double> residuals;  // sup-norm Bellman residual per sweep
};

// Exact dynamic programming to the fixed point: stops once the sup-norm
// residual drops to eps, leaving Q within eps/(1-gamma) of Q*. Terminal
// states carry no value. Throws Error{NonStochasticRow} via FiniteMDP::check.
ValueIterationResult value_iteration(const FiniteMDP& mdp, const RewardFn& reward, double gamma,
                                     double eps, double tie_tol = 1e-8);

// Per-state potential Psi(features(s)), with terminal states pinned to zero
// under the Zero convention.
Eigen::VectorXd state_potentials(const FiniteMDP& mdp, const TaskSpec& task,
                                 TerminalPotential convention = TerminalPotential::Zero);

// Markov reward functions for the verification oracle.
RewardFn make_base_reward_fn(const FiniteMDP& mdp, const TaskSpec& task);
// base + gamma * Psi(next) - Psi(s), zero-terminal convention
RewardFn make_hprs_reward_fn(const FiniteMDP& mdp, const TaskSpec& task, double gamma,
                             TerminalPotential convention = TerminalPotential::Zero);

// One policy-invariance verdict: argmax-set equality between the base and the
// shaped optimal policies plus the value-shift identity Q' = Q - Psi.
struct InvarianceReport {
    std::string name;
    bool argmax_equal = false;
    int first_diff_state = -1;
    double max_identity_error = 0.0;
    bool identity_ok = false;

    bool pass() const { return argmax_equal && identity_ok; }
};

InvarianceReport verify_invariance(const std::string& name, const FiniteMDP& mdp,
                                   const TaskSpec& task, double gamma = 0.99, double eps = 1e-10,
                                   double identity_tol = 1e-6);

// ---- learning ----

enum class RewardVariant { Hprs, Sparse, MorlUniform, MorlDecreasing, Tltl, Bhnr };

const char* reward_variant_name(RewardVariant v);
RewardVariant reward_variant_from_name(const std::string& name);  // throws Error{BadConfig}

struct RewardParams {
    double gamma = 0.99;
    int bhnr_window = kBhnrDefaultWindow;
    TerminalPotential terminal = TerminalPotential::Zero;
};

// Per-transition context handed to step rewards; `history` holds the state
// indices visited so far including `next`, so window- and episode-based
// baselines can look back.
struct StepContext {
    int s = 0;
    int a = 0;
    int next = 0;
    int t = 0;  // 1-based transition count
    bool next_terminal = false;
    bool episode_end = false;
    const std::vector<int>* history = nullptr;
};

using StepRewardFn = std::function<double(const StepContext&)>;

StepRewardFn make_step_reward(const FiniteMDP& mdp, const TaskSpec& task, RewardVariant variant,
                              const RewardParams& params = {});

struct QLearnConfig {
    // Constant step size by default; alpha_decay_visits > 0 switches to the
    // schedule alpha / (1 + visits(s,a) / alpha_decay_visits).
    double alpha = 0.1;
    double alpha_decay_visits = 0.0;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;  // linear decay across episodes
    // Shaped optimism drains at rate alpha * (1 - gamma) per visit, so the
    // learning discount stays below the verification oracle's 0.99.
    double gamma = 0.9;
    // Optionally start training episodes from uniformly drawn non-terminal
    // states; evaluation always uses the environment's initial distribution.
    bool exploring_starts = false;
    int eval_every = 100;   // episodes between greedy evaluations
    int eval_episodes = 10;
    double tie_tol = 1e-8;
};

struct CurvePoint {
    int episode = 0;
    double f_mean = 0.0;
    double f_std = 0.0;
};

struct QLearnResult {
    TabularPolicy policy;
    std::vector<CurvePoint> curve;
};

// Tabular Q-learning over the explicit model; fully deterministic given the
// seed. Evaluation rollouts use the policy greedily and score episodes with
// the policy-assessment metric.
QLearnResult q_learning(const FiniteMDP& mdp, const TaskSpec& task, const StepRewardFn& reward,
                        int episodes, std::uint64_t seed, const QLearnConfig& cfg = {});

// Greedy rollout producing a monitored trace (initial state included).
Trace rollout(const FiniteMDP& mdp, const TaskSpec& task, const TabularPolicy& policy,
              std::mt19937_64& rng);

}  // namespace hprs

#endif  // HPRS_SOLVERS_HPP
