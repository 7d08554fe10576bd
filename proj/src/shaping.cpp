#include "hprs/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hprs/error.hpp"
#include "hprs/semantics.hpp"

namespace hprs {

double score_b(const RequirementSpec& req, const StateSample& s) {
    return req.eval(s) >= 0.0 ? 1.0 : 0.0;
}

double score_c(const RequirementSpec& req, const StateSample& s) {
    const double l = req.bounds.lo;
    const double f = std::clamp(req.eval(s), l, req.bounds.hi);
    const double f_neg = std::min(0.0, f);
    return 1.0 - f_neg / l;
}

double score(const RequirementSpec& req, const StateSample& s) {
    return req.cls == RequirementClass::Safety ? score_b(req, s) : score_c(req, s);
}

std::vector<double> scores(const TaskSpec& task, const StateSample& s) {
    std::vector<double> r;
    r.reserve(task.size());
    for (const auto& req : task.requirements()) r.push_back(score(req, s));
    return r;
}

double potential_from_scores(const TaskSpec& task, const std::vector<double>& r) {
    if (r.size() != task.size()) {
        throw Error(Errc::WeightDimensionMismatch,
                    "score vector has " + std::to_string(r.size()) + " entries for " +
                        std::to_string(task.size()) + " requirements");
    }
    // The three-layer order makes the weights products of safety scores and,
    // for comfort, the target score as well.
    double safety_product = 1.0;
    double safety_sum = 0.0;
    for (std::size_t i : task.safety_indices()) {
        safety_product *= r[i];
        safety_sum += r[i];
    }
    const double target_term = safety_product * r[task.target_index()];
    double comfort_sum = 0.0;
    for (std::size_t i : task.comfort_indices()) comfort_sum += r[i];
    return safety_sum + target_term + target_term * comfort_sum;
}

double potential(const TaskSpec& task, const StateSample& s) {
    return potential_from_scores(task, scores(task, s));
}

double base_reward(const TaskSpec& task, const StateSample& next) {
    return task.target().eval(next) >= 0.0 ? 1.0 : 0.0;
}

ShapingStep shaped_reward(const TaskSpec& task, const StateSample& s, const StateSample& next,
                          bool next_terminal, TerminalPotential convention) {
    ShapingStep step;
    step.base = base_reward(task, next);
    step.potential_before = potential(task, s);
    step.potential_after = (next_terminal && convention == TerminalPotential::Zero)
                               ? 0.0
                               : potential(task, next);
    step.shaped = step.base + step.potential_after - step.potential_before;
    return step;
}

std::vector<double> morl_weight_vector(const TaskSpec& task, MorlWeights scheme) {
    const std::size_t n = task.size();
    std::vector<double> w(n, 0.0);
    if (scheme == MorlWeights::Uniform) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
        return w;
    }
    // Class mass 4:2:1, renormalized over the classes present, uniform within.
    const double safety_mass = task.safety_indices().empty() ? 0.0 : 4.0;
    const double target_mass = 2.0;
    const double comfort_mass = task.comfort_indices().empty() ? 0.0 : 1.0;
    const double total = safety_mass + target_mass + comfort_mass;
    for (std::size_t i : task.safety_indices()) {
        w[i] = safety_mass / total / static_cast<double>(task.safety_indices().size());
    }
    w[task.target_index()] = target_mass / total;
    for (std::size_t i : task.comfort_indices()) {
        w[i] = comfort_mass / total / static_cast<double>(task.comfort_indices().size());
    }
    return w;
}

double morl_reward(const TaskSpec& task, const StateSample& next, MorlWeights scheme) {
    return morl_reward(task, next, morl_weight_vector(task, scheme));
}

double morl_reward(const TaskSpec& task, const StateSample& next,
                   const std::vector<double>& weights) {
    if (weights.size() != task.size()) {
        throw Error(Errc::WeightDimensionMismatch,
                    "expected " + std::to_string(task.size()) + " weights, got " +
                        std::to_string(weights.size()));
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) {
            throw Error(Errc::WeightDimensionMismatch, "weights must be nonnegative");
        }
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw Error(Errc::WeightDimensionMismatch,
                    "weights sum to " + format_double(sum) + ", expected 1");
    }
    double reward = 0.0;
    const auto& reqs = task.requirements();
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        reward += weights[i] * score(reqs[i], next);
    }
    return reward;
}

double bhnr_reward(const TaskSpec& task, const Trace& trace, std::size_t t, int window) {
    if (window < 1) throw Error(Errc::EmptyWindow, "window must be at least 1");
    if (trace.empty() || t >= trace.states.size()) {
        throw Error(Errc::EmptyWindow, "window extends past the recorded trace");
    }
    const std::size_t first = t + 1 >= static_cast<std::size_t>(window)
                                  ? t + 1 - static_cast<std::size_t>(window)
                                  : 0;
    Trace slice;
    slice.states.assign(trace.states.begin() + static_cast<std::ptrdiff_t>(first),
                        trace.states.begin() + static_cast<std::ptrdiff_t>(t) + 1);
    slice.horizon = static_cast<int>(slice.states.size()) - 1;

    double value = std::numeric_limits<double>::infinity();
    for (const auto& req : task.requirements()) {
        value = std::min(value, robustness(req, slice));
    }
    return value;
}

}  // namespace hprs
