#pragma once

#include <map>
#include <string>
#include <string_view>

namespace saft {

/// CWE id -> title lookup. Ships with a small built-in table of common
/// weaknesses; a tab-separated file (`CWE-406<TAB>title`) can add or
/// override entries. Unknown ids render as the raw id.
class CweTitleTable {
public:
    static CweTitleTable builtin();
    static CweTitleTable load(const std::string& path);  // builtin + file

    std::string title_for(std::string_view cwe_id) const;

private:
    std::map<std::string, std::string, std::less<>> titles_;
};

}  // namespace saft
