#include "hprs/semantics.hpp"

#include <algorithm>
#include <limits>

#include "hprs/error.hpp"

namespace hprs {

namespace {

void require_nonempty(const Trace& trace) {
    if (trace.empty()) throw Error(Errc::EmptyTrace, "trace has no states");
}

std::vector<double> signal_values(const RequirementSpec& req, const Trace& trace) {
    std::vector<double> f;
    f.reserve(trace.states.size());
    for (const auto& s : trace.states) f.push_back(req.eval(s));
    return f;
}

}  // namespace

bool sigma(const RequirementSpec& req, const Trace& trace) {
    require_nonempty(trace);
    if (req.cls == RequirementClass::Comfort) return true;
    const auto f = signal_values(req, trace);
    switch (req.cls) {
        case RequirementClass::TargetAchieve:
            return std::any_of(f.begin(), f.end(), [](double v) { return v >= 0.0; });
        case RequirementClass::TargetConquer: {
            // exists i with f >= 0 on the whole suffix from i; on a finite
            // trace this is exactly "the last state satisfies".
            return f.back() >= 0.0;
        }
        case RequirementClass::Safety:
            return std::all_of(f.begin(), f.end(), [](double v) { return v >= 0.0; });
        case RequirementClass::Comfort: break;
    }
    return true;
}

bool sigma_task(const TaskSpec& task, const Trace& trace) {
    for (const auto& req : task.requirements()) {
        if (!sigma(req, trace)) return false;
    }
    return true;
}

bool sigma_all(const TaskSpec& task, const std::vector<std::size_t>& indices, const Trace& trace) {
    for (std::size_t i : indices) {
        if (!sigma(task.requirements()[i], trace)) return false;
    }
    return true;
}

double sigma_avg(const RequirementSpec& req, const Trace& trace) {
    if (req.cls != RequirementClass::Comfort) {
        throw Error(Errc::NotComfort,
                    "sigma_avg applies to encourage requirements, got \"" + req.name + "\"");
    }
    require_nonempty(trace);
    std::size_t held = 0;
    for (const auto& s : trace.states) {
        if (req.eval(s) >= 0.0) ++held;
    }
    return static_cast<double>(held) / static_cast<double>(trace.states.size());
}

double sigma_avg_comfort(const TaskSpec& task, const Trace& trace) {
    const auto& comfort = task.comfort_indices();
    if (comfort.empty()) return 1.0;
    double sum = 0.0;
    for (std::size_t i : comfort) sum += sigma_avg(task.requirements()[i], trace);
    return sum / static_cast<double>(comfort.size());
}

double robustness(const RequirementSpec& req, const Trace& trace, EncourageRobustness enc) {
    require_nonempty(trace);
    const auto f = signal_values(req, trace);
    switch (req.cls) {
        case RequirementClass::TargetAchieve:
            return *std::max_element(f.begin(), f.end());
        case RequirementClass::TargetConquer: {
            // max over suffix starts of the suffix minimum, computed by one
            // backward sweep of running minima.
            double best = -std::numeric_limits<double>::infinity();
            double suffix_min = std::numeric_limits<double>::infinity();
            for (auto it = f.rbegin(); it != f.rend(); ++it) {
                suffix_min = std::min(suffix_min, *it);
                best = std::max(best, suffix_min);
            }
            return best;
        }
        case RequirementClass::Safety:
            return *std::min_element(f.begin(), f.end());
        case RequirementClass::Comfort:
            if (enc == EncourageRobustness::Ignore) {
                return std::numeric_limits<double>::infinity();
            }
            return *std::min_element(f.begin(), f.end());
    }
    return 0.0;
}

double tltl_robustness(const TaskSpec& task, const Trace& trace, ComfortCombine combine) {
    require_nonempty(trace);
    double hard = std::numeric_limits<double>::infinity();
    for (std::size_t i : task.safety_indices()) {
        hard = std::min(hard, robustness(task.requirements()[i], trace));
    }
    hard = std::min(hard, robustness(task.target(), trace));

    const auto& comfort = task.comfort_indices();
    if (comfort.empty()) return hard;

    double comfort_part;
    if (combine == ComfortCombine::MinConjunction) {
        comfort_part = std::numeric_limits<double>::infinity();
        for (std::size_t i : comfort) {
            comfort_part = std::min(comfort_part, robustness(task.requirements()[i], trace));
        }
    } else {
        comfort_part = 0.0;
        for (std::size_t i : comfort) {
            comfort_part += robustness(task.requirements()[i], trace);
        }
        comfort_part /= static_cast<double>(comfort.size());
    }
    return std::min(hard, comfort_part);
}

}  // namespace hprs
