#ifndef HPRS_MDP_HPP
#define HPRS_MDP_HPP

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hprs/task.hpp"
#include "hprs/trace.hpp"

namespace hprs {

// Explicit tabular MDP. P[a](s, s') is the probability of reaching s' from s
// under action a; every row is a distribution. `terminal` marks absorbing
// states (self-loop rows; no value accrues past them).
struct FiniteMDP {
    int num_states = 0;
    int num_actions = 0;
    std::vector<Eigen::MatrixXd> P;    // one n-by-n matrix per action
    Eigen::VectorXd initial;           // distribution over states
    std::vector<bool> terminal;
    int horizon = 0;
    std::vector<StateSample> features;      // state index -> observed variables
    std::vector<std::string> state_labels;  // diagnostics only

    // Throws Error{NonStochasticRow} when any row deviates from a
    // distribution by more than 1e-9, and Error{BadConfig} on shape issues.
    void check() const;

    int sample_initial(std::mt19937_64& rng) const;
    int sample_next(int s, int a, std::mt19937_64& rng) const;
};

// Drives the termination rules of an episodic task:
//  - any safety signal negative at the new state ends the episode (safety
//    wins every tie),
//  - an achieve target ends it at the first satisfying state,
//  - a conquer target is decided at the horizon: reaching it with the target
//    held on a suffix is goal achievement, otherwise timeout.
// Verdicts are computed on the post-transition state; the start state is the
// environment's responsibility.
class EpisodeController {
public:
    EpisodeController(const TaskSpec& task, int horizon);

    // Feeds the state reached by one transition and returns the episode
    // status after it. Throws Error{AlreadyTerminated} once non-running.
    Termination step_verdict(const StateSample& next);

    Termination status() const { return status_; }
    int steps() const { return steps_; }
    int horizon() const { return horizon_; }

private:
    const TaskSpec* task_;
    int horizon_;
    int steps_ = 0;
    Termination status_ = Termination::Running;
};

}  // namespace hprs

#endif  // HPRS_MDP_HPP
