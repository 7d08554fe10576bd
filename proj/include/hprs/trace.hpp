#ifndef HPRS_TRACE_HPP
#define HPRS_TRACE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hprs/spec_lang.hpp"
#include "hprs/state.hpp"

namespace hprs {

enum class Termination { Running, SafetyViolation, GoalAchieved, Timeout };

const char* termination_name(Termination t);          // "safety" / "goal" / "timeout" / "running"
std::optional<Termination> termination_from_name(std::string_view name);

// A recorded episode. Immutable once loaded; evaluators never mutate it.
struct Trace {
    std::vector<StateSample> states;
    std::vector<StateSample> actions;  // may be empty or shorter than states
    int horizon = 0;                   // T; states.size() <= T + 1
    Termination termination = Termination::Running;

    std::size_t length() const { return states.size(); }
    bool empty() const { return states.empty(); }
};

// JSON-lines trace format, one object per step:
//   {"t": 3, "state": {"v": 2.1, "d_walls": 0.4}, "action": {"steer": 0.05}, "done": false}
// The final record of a finished episode carries "done": true and
// "why": "safety" | "goal" | "timeout".
//
// State values outside a variable's declared range are clamped into it;
// `clamped_values`, when given, receives the number of clamped entries.
// Throws Error{IoError} on malformed input and Error{UnknownVariable} when a
// record misses a declared variable.
Trace load_trace_jsonl(std::istream& in, const std::vector<VarDecl>& decls,
                       int* clamped_values = nullptr, std::string_view filename = "<trace>");
Trace load_trace_file(const std::string& path, const std::vector<VarDecl>& decls,
                      int* clamped_values = nullptr);

void save_trace_jsonl(std::ostream& out, const Trace& trace);
void save_trace_file(const std::string& path, const Trace& trace);

}  // namespace hprs

#endif  // HPRS_TRACE_HPP
