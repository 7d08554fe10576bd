#ifndef HPRS_ASSESSMENT_HPP
#define HPRS_ASSESSMENT_HPP

#include <vector>

#include "hprs/semantics.hpp"

namespace hprs {

enum class EpisodeCategory { Unsafe, SafeOnly, TaskSatisfied };

const char* category_name(EpisodeCategory c);

// F = sigma(Phi_S) + 1/2 sigma(Phi_T) + 1/4 sigma_avg(Phi_C), in [0, 1.75].
// F >= 1.0 exactly when safety held; F >= 1.5 exactly when the task is
// satisfied (encourage requirements are Boolean-vacuous).
struct AssessmentReport {
    double f = 0.0;
    bool sat_safety = false;
    bool sat_target = false;
    double comfort_avg = 0.0;  // 1 for tasks with no comfort requirements
    EpisodeCategory category = EpisodeCategory::Unsafe;
};

AssessmentReport pam(const TaskSpec& task, const Trace& trace);

struct SuccessRates {
    double safety = 0.0;                // S
    double safety_target = 0.0;         // S+T
    double safety_target_comfort = 0.0; // S+T+C with the comfort cutoff
};

// Success rates over a batch of episode reports. An episode counts toward
// S+T+C when it satisfies safety and target and its comfort average reaches
// `comfort_cutoff`. Throws Error{EmptyTrace} on an empty batch.
SuccessRates aggregate(const std::vector<AssessmentReport>& reports, double comfort_cutoff = 0.5);

constexpr double kDefaultComfortCutoff = 0.5;

}  // namespace hprs

#endif  // HPRS_ASSESSMENT_HPP
