#include "hprs/task.hpp"

#include "hprs/error.hpp"

namespace hprs {

TaskSpec TaskSpec::validate(const TaskSpecDraft& draft, std::vector<Diagnostic>* warnings) {
    if (draft.requirements.empty()) {
        throw Error(Errc::EmptyTask, "task has no requirements");
    }
    TaskSpec task;
    task.decls_ = draft.decls;
    task.reqs_ = draft.requirements;

    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < task.reqs_.size(); ++i) {
        switch (task.reqs_[i].cls) {
            case RequirementClass::Safety: task.safety_.push_back(i); break;
            case RequirementClass::Comfort: task.comfort_.push_back(i); break;
            case RequirementClass::TargetAchieve:
            case RequirementClass::TargetConquer: targets.push_back(i); break;
        }
    }
    if (targets.empty()) {
        throw Error(Errc::NoTarget, "task needs exactly one achieve/conquer requirement");
    }
    if (targets.size() > 1) {
        throw Error(Errc::MultipleTargets,
                    "found " + std::to_string(targets.size()) +
                        " target requirements; the target must be unique");
    }
    task.target_ = targets.front();

    if (task.safety_.empty() && warnings != nullptr) {
        warnings->push_back(Diagnostic{Severity::Warning, "EmptySafetySet",
                                       "task declares no safety requirement", {}, ""});
    }
    return task;
}

std::size_t TaskSpec::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < reqs_.size(); ++i) {
        if (reqs_[i].name == name) return i;
    }
    throw Error(Errc::UnknownRequirement, "no requirement named \"" + name + "\"");
}

bool TaskSpec::precedes(std::size_t a, std::size_t b) const {
    const RequirementClass ca = reqs_.at(a).cls;
    const RequirementClass cb = reqs_.at(b).cls;
    const bool a_safety = ca == RequirementClass::Safety;
    const bool b_safety = cb == RequirementClass::Safety;
    if (a_safety && !b_safety) return true;
    return is_target(ca) && cb == RequirementClass::Comfort;
}

std::vector<std::size_t> TaskSpec::predecessors(std::size_t i) const {
    if (i >= reqs_.size()) {
        throw Error(Errc::UnknownRequirement, "requirement index out of range");
    }
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < reqs_.size(); ++j) {
        if (precedes(j, i)) out.push_back(j);
    }
    return out;
}

}  // namespace hprs
