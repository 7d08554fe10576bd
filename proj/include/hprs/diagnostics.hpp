#ifndef HPRS_DIAGNOSTICS_HPP
#define HPRS_DIAGNOSTICS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace hprs {

struct SourcePos {
    int line = 0;  // 1-based; 0 means "no position"
    int col = 0;   // 1-based
};

enum class Severity { Warning, Error };

// One parser/validator finding, printable as `file:line:col: code: message`.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourcePos pos;
    std::string file;

    std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace hprs

#endif  // HPRS_DIAGNOSTICS_HPP
