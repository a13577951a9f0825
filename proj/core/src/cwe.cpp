#include "saft/cwe.hpp"

#include "saft/errors.hpp"
#include "saft/strings.hpp"

namespace saft {

CweTitleTable CweTitleTable::builtin() {
    CweTitleTable table;
    table.titles_ = {
        {"CWE-20", "Improper Input Validation"},
        {"CWE-22", "Improper Limitation of a Pathname to a Restricted Directory ('Path Traversal')"},
        {"CWE-78", "Improper Neutralization of Special Elements used in an OS Command ('OS Command Injection')"},
        {"CWE-79", "Improper Neutralization of Input During Web Page Generation ('Cross-site Scripting')"},
        {"CWE-89", "Improper Neutralization of Special Elements used in an SQL Command ('SQL Injection')"},
        {"CWE-119", "Improper Restriction of Operations within the Bounds of a Memory Buffer"},
        {"CWE-120", "Buffer Copy without Checking Size of Input ('Classic Buffer Overflow')"},
        {"CWE-125", "Out-of-bounds Read"},
        {"CWE-190", "Integer Overflow or Wraparound"},
        {"CWE-287", "Improper Authentication"},
        {"CWE-400", "Uncontrolled Resource Consumption"},
        {"CWE-406", "Insufficient Control of Network Message Volume (Network Amplification)"},
        {"CWE-416", "Use After Free"},
        {"CWE-476", "NULL Pointer Dereference"},
        {"CWE-787", "Out-of-bounds Write"},
    };
    return table;
}

CweTitleTable CweTitleTable::load(const std::string& path) {
    CweTitleTable table = builtin();
    size_t line_no = 0;
    for (const auto& raw : split(read_file(path), '\n')) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError("expected 'CWE-id<TAB>title'", line_no, 1, path);
        }
        std::string id = trim(line.substr(0, tab));
        std::string title = trim(line.substr(tab + 1));
        if (!id.starts_with("CWE-") || title.empty()) {
            throw ParseError("expected 'CWE-id<TAB>title'", line_no, 1, path);
        }
        table.titles_[id] = title;
    }
    return table;
}

std::string CweTitleTable::title_for(std::string_view cwe_id) const {
    auto it = titles_.find(cwe_id);
    if (it == titles_.end()) return std::string(cwe_id);
    return it->second;
}

}  // namespace saft
