#ifndef HPRS_SHAPING_HPP
#define HPRS_SHAPING_HPP

#include <vector>

#include "hprs/task.hpp"
#include "hprs/trace.hpp"

namespace hprs {

// Discrete satisfaction score b(p, s) = 1 when f(s) >= 0, else 0.
double score_b(const RequirementSpec& req, const StateSample& s);

// Continuous score c(p, s) = 1 - f_(s)/l with f_ = min(0, f) and f clamped
// into [l, u]: 1 once satisfied, 0 at the largest violation, linear between.
double score_c(const RequirementSpec& req, const StateSample& s);

// Per-requirement score r: b for safety, c for target and comfort.
double score(const RequirementSpec& req, const StateSample& s);

// All requirement scores in task order.
std::vector<double> scores(const TaskSpec& task, const StateSample& s);

// Hierarchical potential over explicit scores:
//   Psi = sum_phi ( prod_{phi' before phi} r(phi') ) * r(phi)
// Throws Error{WeightDimensionMismatch} when r has the wrong length.
double potential_from_scores(const TaskSpec& task, const std::vector<double>& r);

// Psi(s); always within [0, |Phi|].
double potential(const TaskSpec& task, const StateSample& s);

// Sparse base reward: 1 when the target predicate holds at the next state.
double base_reward(const TaskSpec& task, const StateSample& next);

// What Psi is taken to be at an absorbing terminal state.
enum class TerminalPotential { Zero, Free };

struct ShapingStep {
    double base = 0.0;
    double potential_before = 0.0;
    double potential_after = 0.0;
    double shaped = 0.0;  // base + potential_after - potential_before
};

// One shaped transition s -> next. When `next_terminal` is set and the Zero
// convention is active, potential_after is taken as 0.
ShapingStep shaped_reward(const TaskSpec& task, const StateSample& s, const StateSample& next,
                          bool next_terminal = false,
                          TerminalPotential convention = TerminalPotential::Zero);

enum class MorlWeights { Uniform, Decreasing };

// Scalarization weights over the requirement set, summing to 1. Decreasing
// puts class mass proportional to 4:2:1 on safety:target:comfort, split
// uniformly inside each class.
std::vector<double> morl_weight_vector(const TaskSpec& task, MorlWeights scheme);

// Linear scalarization sum_phi w_phi * r(phi, next).
double morl_reward(const TaskSpec& task, const StateSample& next, MorlWeights scheme);

// Explicit weights must be nonnegative, sum to 1, and match |Phi|;
// otherwise Error{WeightDimensionMismatch}.
double morl_reward(const TaskSpec& task, const StateSample& next,
                   const std::vector<double>& weights);

// Sliding-window robustness emitted at step `t`: the task formula evaluated
// over the most recent `window` states of the trace prefix ending at t
// (min across requirements). Throws Error{EmptyWindow} when window < 1 or
// the trace is empty.
double bhnr_reward(const TaskSpec& task, const Trace& trace, std::size_t t, int window);

constexpr int kBhnrDefaultWindow = 10;

}  // namespace hprs

#endif  // HPRS_SHAPING_HPP
