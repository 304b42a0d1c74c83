#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pscan::utf8 {

// Decodes the codepoint starting at byte offset i; advances i past it.
// Malformed bytes are consumed one at a time and returned as-is, so the
// decoder is total over arbitrary input.
inline char32_t decode(std::string_view s, size_t& i) {
    unsigned char c0 = static_cast<unsigned char>(s[i]);
    if (c0 < 0x80) {
        ++i;
        return c0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((c0 & 0xE0) == 0xC0) {
        len = 2;
        cp = c0 & 0x1F;
    } else if ((c0 & 0xF0) == 0xE0) {
        len = 3;
        cp = c0 & 0x0F;
    } else if ((c0 & 0xF8) == 0xF0) {
        len = 4;
        cp = c0 & 0x07;
    } else {
        ++i;
        return c0;
    }
    if (i + len > s.size()) {
        ++i;
        return c0;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char ck = static_cast<unsigned char>(s[i + k]);
        if ((ck & 0xC0) != 0x80) {
            ++i;
            return c0;
        }
        cp = (cp << 6) | (ck & 0x3F);
    }
    i += len;
    return cp;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline bool is_cyrillic(char32_t cp) { return cp >= 0x0400 && cp <= 0x04FF; }

inline bool is_upper(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return true;
    if (cp >= 0x0410 && cp <= 0x042F) return true;  // А..Я
    if (cp == 0x0401) return true;                  // Ё
    return false;
}

inline char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
    if (cp == 0x0401) return 0x0451;
    return cp;
}

// Lowercases ASCII letters and the Cyrillic block; other codepoints pass
// through unchanged. Sufficient for the en/ru corpora this library targets.
inline std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        append(out, to_lower(decode(s, i)));
    }
    return out;
}

}  // namespace pscan::utf8
