#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nspg {

inline bool ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool ascii_alpha(char c) { return ascii_upper(c) || ascii_lower(c); }
inline bool ascii_alnum(char c) { return ascii_alpha(c) || ascii_digit(c); }
inline bool ident_char(char c) { return ascii_alnum(c) || c == '_' || c == '$'; }

inline char ascii_tolower(char c) { return ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(ascii_tolower(c));
    return out;
}

// Returns the byte offset of the first invalid UTF-8 byte, or nullopt if clean.
inline std::optional<std::size_t> find_invalid_utf8(std::string_view s) {
    std::size_t i = 0;
    auto cont = [&](std::size_t k) {
        return k < s.size() && (static_cast<unsigned char>(s[k]) & 0xC0) == 0x80;
    };
    while (i < s.size()) {
        unsigned char b = static_cast<unsigned char>(s[i]);
        if (b < 0x80) {
            ++i;
        } else if ((b & 0xE0) == 0xC0) {
            if (b < 0xC2 || !cont(i + 1)) return i;
            i += 2;
        } else if ((b & 0xF0) == 0xE0) {
            if (!cont(i + 1) || !cont(i + 2)) return i;
            unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            if (b == 0xE0 && b1 < 0xA0) return i;
            if (b == 0xED && b1 > 0x9F) return i;  // surrogates
            i += 3;
        } else if ((b & 0xF8) == 0xF0) {
            if (b > 0xF4 || !cont(i + 1) || !cont(i + 2) || !cont(i + 3)) return i;
            unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            if (b == 0xF0 && b1 < 0x90) return i;
            if (b == 0xF4 && b1 > 0x8F) return i;
            i += 4;
        } else {
            return i;
        }
    }
    return std::nullopt;
}

// Collapses runs of whitespace to single spaces and trims the ends.
inline std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true;  // swallow leading space
    for (char c : s) {
        if (ascii_space(c)) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out.push_back(' ');
            out.push_back(c);
            in_space = false;
        }
    }
    return out;
}

inline std::vector<std::string> ws_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && ascii_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !ascii_space(s[j])) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

// A whitespace token split into its word core and any trailing clause
// punctuation, so augmentation and fragmentation can move punctuation
// independently of words.  join_word_tokens() round-trips exactly.
struct WordToken {
    std::string core;
    std::string trail;

    std::string whole() const { return core + trail; }
};

inline bool trail_punct(char c) {
    return c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?';
}

inline std::vector<WordToken> parse_word_tokens(std::string_view text) {
    std::vector<WordToken> out;
    for (auto& raw : ws_tokens(text)) {
        std::size_t cut = raw.size();
        while (cut > 1 && trail_punct(raw[cut - 1])) --cut;
        // Keep an all-punctuation token intact rather than emit an empty core.
        if (cut == 1 && trail_punct(raw[0])) cut = raw.size();
        out.push_back({raw.substr(0, cut), raw.substr(cut)});
    }
    return out;
}

inline std::string join_word_tokens(const std::vector<WordToken>& toks) {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out.push_back(' ');
        out.append(toks[i].core);
        out.append(toks[i].trail);
    }
    return out;
}

// Orthography predicates used by the tagger and the augmentation guards.

inline bool numeric_literal(std::string_view w) {
    if (w.empty()) return false;
    std::size_t i = 0;
    if (w.size() > 2 && w[0] == '0' && (w[1] == 'x' || w[1] == 'X')) {
        for (i = 2; i < w.size(); ++i)
            if (!ascii_digit(w[i]) && !(ascii_tolower(w[i]) >= 'a' && ascii_tolower(w[i]) <= 'f'))
                return false;
        return true;
    }
    bool digit = false, dot = false;
    for (; i < w.size(); ++i) {
        if (ascii_digit(w[i])) {
            digit = true;
        } else if (w[i] == '.' && !dot) {
            dot = true;
        } else {
            return false;
        }
    }
    return digit;
}

// Dotted hardware identifier: KEYMGR.CTRL.STATUS, aes.out.
inline bool dotted_identifier(std::string_view w) {
    bool dot = false;
    if (w.empty() || !(ascii_alpha(w[0]) || w[0] == '_')) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        char c = w[i];
        if (c == '.') {
            if (i + 1 >= w.size() || !ident_char(w[i + 1])) return false;
            dot = true;
        } else if (!ident_char(c)) {
            return false;
        }
    }
    return dot;
}

// Register-style token: at least two characters, all caps/digits/underscores,
// with at least one letter (FIFO, CTRL_SHADOWED, MANUAL_OPERATION).
inline bool all_caps_token(std::string_view w) {
    if (w.size() < 2) return false;
    bool letter = false;
    for (char c : w) {
        if (ascii_upper(c)) letter = true;
        else if (!ascii_digit(c) && c != '_') return false;
    }
    return letter;
}

inline bool identifier_like(std::string_view w) {
    if (dotted_identifier(w) || all_caps_token(w)) return true;
    // snake_case signal names (fatal_bus_integ_error_q).
    if (w.find('_') == std::string_view::npos) return false;
    if (!(ascii_alpha(w[0]) || w[0] == '_')) return false;
    for (char c : w)
        if (!ident_char(c)) return false;
    return true;
}

// Tokenization for the featurizers: lowercase, split on anything that is not
// alphanumeric/underscore, except that '.' between identifier characters is
// kept so register paths stay whole.
inline std::vector<std::string> classifier_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool keep = ascii_alnum(c) || c == '_';
        if (!keep && c == '.' && !cur.empty() && i + 1 < text.size() &&
            (ascii_alnum(text[i + 1]) || text[i + 1] == '_'))
            keep = true;
        if (keep) {
            cur.push_back(ascii_tolower(c));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// splitmix64: stable across platforms, used for per-record seed derivation
// and for all bounded random picks.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
    // FNV-1a 64.
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
    return splitmix64(seed ^ hash_str(key));
}

// Deterministic bounded picker independent of any stdlib distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Uniform in [0, n); n must be positive.
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    double unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = pick(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && ascii_space(s[b])) ++b;
    while (e > b && ascii_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace nspg
