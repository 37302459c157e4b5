#ifndef CGA_SRC_TEXT_UTIL_HPP
#define CGA_SRC_TEXT_UTIL_HPP

#include <cctype>
#include <string_view>
#include <vector>

namespace cga::detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Split on a separator occurring at bracket depth zero.
inline std::vector<std::string_view> split_top_level(std::string_view s, std::string_view sep) {
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        char ch = s[k];
        if (ch == '(' || ch == '[') ++depth;
        else if (ch == ')' || ch == ']') --depth;
        else if (depth == 0 && s.substr(k, sep.size()) == sep) {
            parts.push_back(s.substr(start, k - start));
            k += sep.size() - 1;
            start = k + 1;
        }
    }
    parts.push_back(s.substr(start));
    return parts;
}

}  // namespace cga::detail

#endif
