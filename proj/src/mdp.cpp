#include "hprs/mdp.hpp"

#include <cmath>

#include "hprs/error.hpp"

namespace hprs {

void FiniteMDP::check() const {
    if (num_states <= 0 || num_actions <= 0) {
        throw Error(Errc::BadConfig, "MDP needs at least one state and one action");
    }
    if (static_cast<int>(P.size()) != num_actions) {
        throw Error(Errc::BadConfig, "transition tensor has wrong action count");
    }
    if (initial.size() != num_states || static_cast<int>(terminal.size()) != num_states ||
        static_cast<int>(features.size()) != num_states) {
        throw Error(Errc::BadConfig, "state-indexed fields disagree on the state count");
    }
    auto check_row = [](const Eigen::VectorXd& row, const std::string& what) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < row.size(); ++i) {
            if (row[i] < 0.0 || row[i] > 1.0 || !std::isfinite(row[i])) {
                throw Error(Errc::NonStochasticRow, what + " has probability out of [0, 1]");
            }
            sum += row[i];
        }
        if (std::fabs(sum - 1.0) > 1e-9) {
            throw Error(Errc::NonStochasticRow, what + " sums to " + std::to_string(sum));
        }
    };
    for (int a = 0; a < num_actions; ++a) {
        if (P[a].rows() != num_states || P[a].cols() != num_states) {
            throw Error(Errc::BadConfig, "transition matrix shape mismatch");
        }
        for (int s = 0; s < num_states; ++s) {
            check_row(P[a].row(s), "row (s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")");
        }
    }
    check_row(initial, "initial distribution");
}

namespace {

int sample_categorical(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        u -= probs[i];
        if (u <= 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);  // guards rounding residue
}

}  // namespace

int FiniteMDP::sample_initial(std::mt19937_64& rng) const {
    return sample_categorical(initial, rng);
}

int FiniteMDP::sample_next(int s, int a, std::mt19937_64& rng) const {
    if (a < 0 || a >= num_actions) {
        throw Error(Errc::InvalidAction, "action index " + std::to_string(a) + " out of range");
    }
    return sample_categorical(P[a].row(s).transpose(), rng);
}

EpisodeController::EpisodeController(const TaskSpec& task, int horizon)
    : task_(&task), horizon_(horizon) {
    if (horizon <= 0) throw Error(Errc::BadConfig, "horizon must be positive");
}

Termination EpisodeController::step_verdict(const StateSample& next) {
    if (status_ != Termination::Running) {
        throw Error(Errc::AlreadyTerminated,
                    "episode already ended with '" + std::string(termination_name(status_)) + "'");
    }
    ++steps_;
    for (std::size_t i : task_->safety_indices()) {
        if (task_->requirements()[i].eval(next) < 0.0) {
            status_ = Termination::SafetyViolation;
            return status_;
        }
    }
    const RequirementSpec& target = task_->target();
    const bool target_holds = target.eval(next) >= 0.0;
    if (target.cls == RequirementClass::TargetAchieve) {
        if (target_holds) {
            status_ = Termination::GoalAchieved;
            return status_;
        }
        if (steps_ >= horizon_) status_ = Termination::Timeout;
        return status_;
    }
    // conquer: persistence is decided only when time runs out, and a suffix
    // always exists when the final state satisfies the target.
    if (steps_ >= horizon_) {
        status_ = target_holds ? Termination::GoalAchieved : Termination::Timeout;
    }
    return status_;
}

}  // namespace hprs
