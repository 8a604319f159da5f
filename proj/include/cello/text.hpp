#pragma once

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cello {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

/// Whitespace tokenization; the unit used for question/answer lengths
/// and for the diversity metrics.
inline std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Tokens lowercased with surrounding punctuation stripped; empty tokens
/// dropped. The diversity metrics run over this normal form.
inline std::vector<std::string> lexical_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& raw : tokenize(s)) {
    size_t b = 0;
    size_t e = raw.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (e > b) out.push_back(lower(raw.substr(b, e - b)));
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  if (from.empty()) return s;
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

/// Case-insensitive whole-word containment: "art" does not match "cart",
/// but "coffee table" matches inside "the coffee table is set".
inline bool contains_word(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::string h = lower(haystack);
  std::string n = lower(needle);
  size_t pos = 0;
  while ((pos = h.find(n, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_word_char(h[pos - 1]);
    size_t end = pos + n.size();
    bool right_ok = end == h.size() || !is_word_char(h[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

/// Heuristic plural detection for verb agreement. Mass/irregular nouns are
/// special-cased; otherwise a trailing 's' (not 'ss'/'us'/'is') counts.
inline bool is_plural_noun(std::string_view noun) {
  std::string n = lower(trim(noun));
  // Agreement keys off the head noun ("stack of books" -> "books").
  auto toks = tokenize(n);
  if (!toks.empty()) n = toks.back();
  static const char* kPlurals[] = {"men", "women", "children", "people", "feet", "teeth", "geese", "mice"};
  static const char* kSingulars[] = {"glass", "grass", "bus", "gas", "lens", "class", "dress", "chess", "cactus", "campus", "tennis", "analysis"};
  for (const char* p : kPlurals)
    if (n == p) return true;
  for (const char* p : kSingulars)
    if (n == p) return false;
  if (n.size() >= 3 && n.compare(n.size() - 2, 2, "ss") == 0) return false;
  if (n.size() >= 3 && n.compare(n.size() - 2, 2, "us") == 0) return false;
  if (n.size() >= 3 && n.compare(n.size() - 2, 2, "is") == 0) return false;
  return !n.empty() && n.back() == 's';
}

inline std::string be_verb(std::string_view noun) {
  return is_plural_noun(noun) ? "are" : "is";
}

inline std::string do_not(std::string_view noun) {
  return is_plural_noun(noun) ? "don't" : "doesn't";
}

}  // namespace cello
