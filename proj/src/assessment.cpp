#include "hprs/assessment.hpp"

#include "hprs/error.hpp"

namespace hprs {

const char* category_name(EpisodeCategory c) {
    switch (c) {
        case EpisodeCategory::Unsafe: return "unsafe";
        case EpisodeCategory::SafeOnly: return "safe-only";
        case EpisodeCategory::TaskSatisfied: return "task-satisfied";
    }
    return "?";
}

AssessmentReport pam(const TaskSpec& task, const Trace& trace) {
    AssessmentReport report;
    report.sat_safety = sigma_all(task, task.safety_indices(), trace);
    report.sat_target = sigma(task.target(), trace);
    report.comfort_avg = sigma_avg_comfort(task, trace);
    report.f = (report.sat_safety ? 1.0 : 0.0) + 0.5 * (report.sat_target ? 1.0 : 0.0) +
               0.25 * report.comfort_avg;
    if (report.f >= 1.5) {
        report.category = EpisodeCategory::TaskSatisfied;
    } else if (report.f >= 1.0) {
        report.category = EpisodeCategory::SafeOnly;
    } else {
        report.category = EpisodeCategory::Unsafe;
    }
    return report;
}

SuccessRates aggregate(const std::vector<AssessmentReport>& reports, double comfort_cutoff) {
    if (reports.empty()) throw Error(Errc::EmptyInput, "no episode reports to aggregate");
    SuccessRates rates;
    const double n = static_cast<double>(reports.size());
    for (const auto& r : reports) {
        if (!r.sat_safety) continue;
        rates.safety += 1.0;
        if (!r.sat_target) continue;
        rates.safety_target += 1.0;
        if (r.comfort_avg >= comfort_cutoff) rates.safety_target_comfort += 1.0;
    }
    rates.safety /= n;
    rates.safety_target /= n;
    rates.safety_target_comfort /= n;
    return rates;
}

}  // namespace hprs
