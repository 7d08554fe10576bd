#ifndef HPRS_SEMANTICS_HPP
#define HPRS_SEMANTICS_HPP

#include "hprs/task.hpp"
#include "hprs/trace.hpp"

namespace hprs {

// Boolean satisfaction of one requirement over a finite episode:
//   achieve    exists i with f(s_i) >= 0
//   conquer    exists i such that f(s_j) >= 0 for all j >= i
//   ensure     f(s_i) >= 0 at every i
//   encourage  always true
// Throws Error{EmptyTrace}.
bool sigma(const RequirementSpec& req, const Trace& trace);

// Conjunction of sigma over every requirement of the task.
bool sigma_task(const TaskSpec& task, const Trace& trace);

// Conjunction over an index subset; vacuously true on an empty set.
bool sigma_all(const TaskSpec& task, const std::vector<std::size_t>& indices, const Trace& trace);

// Fraction of steps at which a comfort predicate holds.
// Throws Error{NotComfort} when req is not an encourage requirement.
double sigma_avg(const RequirementSpec& req, const Trace& trace);

// Mean of sigma_avg over the comfort set; 1.0 when the task has no comfort
// requirements.
double sigma_avg_comfort(const TaskSpec& task, const Trace& trace);

// How a comfort requirement is folded into a monolithic-formula robustness.
enum class EncourageRobustness { Globally, Ignore };

// Infinity-norm style quantitative semantics; sign agrees with sigma away
// from zero (achieve/conquer/ensure):
//   achieve    max_i f(s_i)
//   conquer    max_i min_{j>=i} f(s_j)
//   ensure     min_i f(s_i)
//   encourage  min_i f(s_i) under Globally (the default baseline reading)
double robustness(const RequirementSpec& req, const Trace& trace,
                  EncourageRobustness enc = EncourageRobustness::Globally);

enum class ComfortCombine { MinConjunction, Mean };

// Episode robustness of the whole task read as one formula: min over the
// safety and target robustness values, combined with the comfort part
// (min or mean across comfort requirements).
double tltl_robustness(const TaskSpec& task, const Trace& trace,
                       ComfortCombine combine = ComfortCombine::MinConjunction);

}  // namespace hprs

#endif  // HPRS_SEMANTICS_HPP
