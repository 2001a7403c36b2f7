#pragma once

// Normalization and tokenization shared by every stage.
//
// A token is a maximal run of letters, digits, apostrophes (and combining
// marks attached to them). Tokens are normalized by lowercasing followed by
// NFC. Sentence boundaries are '.', '!', '?' and newline. Offsets are
// reported in code points of the raw (un-normalized) text.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "dagon/error.hpp"

namespace dagon::text {

struct Token {
  std::string norm;
  std::size_t char_begin = 0;  // code points, raw text
  std::size_t char_end = 0;
  std::size_t byte_begin = 0;
  std::size_t byte_end = 0;
  std::uint32_t sentence = 0;
};

namespace detail {

inline bool is_apostrophe(UChar32 c) { return c == U'\'' || c == 0x2019; }

inline bool is_token_char(UChar32 c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '\'';
  }
  if (c < 0) return false;
  if (is_apostrophe(c) || u_isalnum(c)) return true;
  return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

inline bool is_sentence_break(UChar32 c) { return c == '.' || c == '!' || c == '?' || c == '\n'; }

// Decodes one code point, mapping ill-formed sequences to U+FFFD.
inline UChar32 next_code_point(std::string_view s, std::size_t& i) {
  UChar32 c;
  auto idx = static_cast<int32_t>(i);
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), idx, static_cast<int32_t>(s.size()), c);
  i = static_cast<std::size_t>(idx);
  return c < 0 ? 0xFFFD : c;
}

}  // namespace detail

// Lowercase + NFC of a single raw token.
inline std::string normalize_token(std::string_view raw) {
  bool ascii = true;
  for (unsigned char ch : raw) {
    if (ch >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) {
    std::string out(raw);
    for (auto& ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
  }
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  u.toLower(icu::Locale::getRoot());
  icu::UnicodeString normalized = nfc->normalize(u, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  std::size_t cp = 0;
  std::uint32_t sentence = 0;
  bool in_token = false;
  Token cur;
  while (i < s.size()) {
    const std::size_t byte_pos = i;
    const UChar32 c = detail::next_code_point(s, i);
    if (detail::is_token_char(c)) {
      if (!in_token) {
        in_token = true;
        cur = Token{};
        cur.char_begin = cp;
        cur.byte_begin = byte_pos;
        cur.sentence = sentence;
      }
    } else {
      if (in_token) {
        cur.char_end = cp;
        cur.byte_end = byte_pos;
        cur.norm = normalize_token(s.substr(cur.byte_begin, cur.byte_end - cur.byte_begin));
        tokens.push_back(std::move(cur));
        in_token = false;
      }
      if (detail::is_sentence_break(c)) ++sentence;
    }
    ++cp;
  }
  if (in_token) {
    cur.char_end = cp;
    cur.byte_end = s.size();
    cur.norm = normalize_token(s.substr(cur.byte_begin));
    tokens.push_back(std::move(cur));
  }
  return tokens;
}

// Normalized token sequence of a term.
inline std::vector<std::string> term_tokens(std::string_view term) {
  std::vector<std::string> out;
  for (auto& t : tokenize(term)) out.push_back(std::move(t.norm));
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Canonical surface form: normalized tokens joined by single spaces.
inline std::string canonical_term(std::string_view term) { return join(term_tokens(term)); }

inline std::size_t char_length(std::string_view s) {
  std::size_t i = 0, n = 0;
  while (i < s.size()) {
    detail::next_code_point(s, i);
    ++n;
  }
  return n;
}

// Byte offset of the code point with index `cp` (or s.size() past the end).
inline std::size_t byte_offset(std::string_view s, std::size_t cp) {
  std::size_t i = 0, n = 0;
  while (i < s.size() && n < cp) {
    detail::next_code_point(s, i);
    ++n;
  }
  return i;
}

inline std::string substr_chars(std::string_view s, std::size_t cp_begin, std::size_t cp_end) {
  const std::size_t b = byte_offset(s, cp_begin);
  const std::size_t e = b + byte_offset(s.substr(b), cp_end - cp_begin);
  return std::string(s.substr(b, e - b));
}

// True when `needle` occurs as a contiguous token run inside one sentence.
inline bool matches_at(const std::vector<Token>& toks, std::size_t pos, const std::vector<std::string>& needle) {
  if (needle.empty() || pos + needle.size() > toks.size()) return false;
  for (std::size_t k = 0; k < needle.size(); ++k) {
    if (toks[pos + k].norm != needle[k]) return false;
    if (toks[pos + k].sentence != toks[pos].sentence) return false;
  }
  return true;
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace dagon::text
