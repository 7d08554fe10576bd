#ifndef HPRS_TASK_HPP
#define HPRS_TASK_HPP

#include <cstddef>
#include <vector>

#include "hprs/spec_lang.hpp"

namespace hprs {

// A validated task: the class partition of the requirement set plus the
// strict partial order induced by class (safety before everything else,
// target before comfort). Immutable once built; safe to share across threads.
class TaskSpec {
public:
    // Throws Error{NoTarget, MultipleTargets, EmptyTask}. Non-fatal findings
    // (for example an empty safety set) are appended to `warnings` when given.
    static TaskSpec validate(const TaskSpecDraft& draft,
                             std::vector<Diagnostic>* warnings = nullptr);

    const std::vector<VarDecl>& decls() const { return decls_; }
    const std::vector<RequirementSpec>& requirements() const { return reqs_; }
    std::size_t size() const { return reqs_.size(); }

    const std::vector<std::size_t>& safety_indices() const { return safety_; }
    const std::vector<std::size_t>& comfort_indices() const { return comfort_; }
    std::size_t target_index() const { return target_; }
    const RequirementSpec& target() const { return reqs_[target_]; }

    // Index lookup by requirement name; throws Error{UnknownRequirement}.
    std::size_t index_of(const std::string& name) const;

    // True when reqs_[a] strictly precedes reqs_[b].
    bool precedes(std::size_t a, std::size_t b) const;

    // All indices j with reqs_[j] preceding reqs_[i]; empty for safety.
    std::vector<std::size_t> predecessors(std::size_t i) const;

private:
    std::vector<VarDecl> decls_;
    std::vector<RequirementSpec> reqs_;  // source order
    std::vector<std::size_t> safety_;
    std::vector<std::size_t> comfort_;
    std::size_t target_ = 0;
};

}  // namespace hprs

#endif  // HPRS_TASK_HPP
