#include "saft/versioncmp.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "saft/strings.hpp"

namespace saft {

namespace {

struct Part {
    long long number = 0;
    bool has_number = false;
    std::string suffix;
};

Part split_part(std::string_view s) {
    Part part;
    size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0) {
        part.has_number = true;
        part.number = std::stoll(std::string(s.substr(0, i)));
    }
    part.suffix = std::string(s.substr(i));
    return part;
}

bool has_any_digit(std::string_view s) {
    for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return false;
}

}  // namespace

std::optional<int> compare_versions(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty() || !has_any_digit(a) || !has_any_digit(b)) return std::nullopt;
    auto pa = split(a, '.');
    auto pb = split(b, '.');
    size_t n = std::max(pa.size(), pb.size());
    for (size_t i = 0; i < n; ++i) {
        Part x = split_part(i < pa.size() ? std::string_view(pa[i]) : std::string_view{});
        Part y = split_part(i < pb.size() ? std::string_view(pb[i]) : std::string_view{});
        long long xv = x.has_number ? x.number : 0;
        long long yv = y.has_number ? y.number : 0;
        if (xv != yv) return xv < yv ? -1 : 1;
        if (x.suffix != y.suffix) return x.suffix < y.suffix ? -1 : 1;
    }
    return 0;
}

}  // namespace saft
