#include "hprs/trace.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "hprs/error.hpp"

namespace hprs {

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::SafetyViolation: return "safety";
        case Termination::GoalAchieved: return "goal";
        case Termination::Timeout: return "timeout";
        case Termination::Running: return "running";
    }
    return "?";
}

std::optional<Termination> termination_from_name(std::string_view name) {
    if (name == "safety") return Termination::SafetyViolation;
    if (name == "goal") return Termination::GoalAchieved;
    if (name == "timeout") return Termination::Timeout;
    if (name == "running") return Termination::Running;
    return std::nullopt;
}

Trace load_trace_jsonl(std::istream& in, const std::vector<VarDecl>& decls, int* clamped_values,
                       std::string_view filename) {
    Trace trace;
    int clamped = 0;
    std::string line;
    int line_no = 0;
    auto where = [&](int no) { return std::string(filename) + ":" + std::to_string(no); };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            throw Error(Errc::IoError, where(line_no) + ": malformed trace record");
        }
        if (!rec.contains("state") || !rec["state"].is_object()) {
            throw Error(Errc::IoError, where(line_no) + ": record has no state object");
        }
        StateSample state;
        for (const auto& [key, value] : rec["state"].items()) {
            if (!value.is_number()) {
                throw Error(Errc::IoError, where(line_no) + ": state value for '" + key +
                                               "' is not a number");
            }
            state[key] = value.get<double>();
        }
        for (const auto& d : decls) {
            auto it = state.find(d.name);
            if (it == state.end()) {
                throw Error(Errc::UnknownVariable,
                            where(line_no) + ": state does not bind declared variable '" +
                                d.name + "'");
            }
            const double clamped_v = std::clamp(it->second, d.lo, d.hi);
            if (clamped_v != it->second) {
                it->second = clamped_v;
                ++clamped;
            }
        }
        trace.states.push_back(std::move(state));

        if (rec.contains("action") && rec["action"].is_object()) {
            StateSample action;
            for (const auto& [key, value] : rec["action"].items()) {
                if (value.is_number()) action[key] = value.get<double>();
            }
            trace.actions.push_back(std::move(action));
        }
        if (rec.value("done", false)) {
            const std::string why = rec.value("why", "timeout");
            auto term = termination_from_name(why);
            if (!term) {
                throw Error(Errc::IoError, where(line_no) + ": unknown termination '" + why + "'");
            }
            trace.termination = *term;
        }
    }
    if (clamped_values != nullptr) *clamped_values = clamped;
    trace.horizon = trace.states.empty() ? 0 : static_cast<int>(trace.states.size()) - 1;
    return trace;
}

Trace load_trace_file(const std::string& path, const std::vector<VarDecl>& decls,
                      int* clamped_values) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::IoError, "cannot open trace file '" + path + "'");
    }
    return load_trace_jsonl(in, decls, clamped_values, path);
}

void save_trace_jsonl(std::ostream& out, const Trace& trace) {
    for (std::size_t t = 0; t < trace.states.size(); ++t) {
        nlohmann::json rec;
        rec["t"] = t;
        rec["state"] = trace.states[t];
        // actions[i] belongs to the transition into state i+1, so it rides
        // on the post-transition record
        if (t >= 1 && t - 1 < trace.actions.size() && !trace.actions[t - 1].empty()) {
            rec["action"] = trace.actions[t - 1];
        }
        const bool last = t + 1 == trace.states.size();
        const bool done = last && trace.termination != Termination::Running;
        rec["done"] = done;
        if (done) rec["why"] = termination_name(trace.termination);
        out << rec.dump() << '\n';
    }
}

void save_trace_file(const std::string& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) {
        throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
    }
    save_trace_jsonl(out, trace);
}

}  // namespace hprs
