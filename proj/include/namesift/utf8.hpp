#ifndef NAMESIFT_UTF8_HPP
#define NAMESIFT_UTF8_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace namesift {

// Minimal UTF-8 walker.  Handles are treated as sequences of code points;
// an invalid byte is consumed as a single one-byte unit rather than
// rejected, so arbitrary input never throws.

// Byte length of the code point starting at s[pos].
inline std::size_t utf8_advance(std::string_view s, std::size_t pos) {
    unsigned char c = static_cast<unsigned char>(s[pos]);
    std::size_t len = 1;
    if ((c & 0x80u) == 0x00u) len = 1;
    else if ((c & 0xE0u) == 0xC0u) len = 2;
    else if ((c & 0xF0u) == 0xE0u) len = 3;
    else if ((c & 0xF8u) == 0xF0u) len = 4;
    // clip to available bytes and require continuation bytes
    if (pos + len > s.size()) return 1;
    for (std::size_t i = 1; i < len; ++i) {
        if ((static_cast<unsigned char>(s[pos + i]) & 0xC0u) != 0x80u) return 1;
    }
    return len;
}

// Splits into per-code-point byte strings.
inline std::vector<std::string> codepoints(std::string_view s) {
    std::vector<std::string> out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t len = utf8_advance(s, pos);
        out.emplace_back(s.substr(pos, len));
        pos += len;
    }
    return out;
}

inline std::size_t count_codepoints(std::string_view s) {
    std::size_t n = 0, pos = 0;
    while (pos < s.size()) {
        pos += utf8_advance(s, pos);
        ++n;
    }
    return n;
}

inline bool ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool ascii_digit(char c) { return c >= '0' && c <= '9'; }

inline char ascii_tolower(char c) {
    return ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string ascii_lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = ascii_tolower(c);
    return out;
}

}  // namespace namesift

#endif
