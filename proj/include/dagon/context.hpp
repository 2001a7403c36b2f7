#pragma once

// Masked context windows around term occurrences.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dagon/corpus.hpp"
#include "dagon/error.hpp"
#include "dagon/index.hpp"
#include "dagon/io.hpp"
#include "dagon/text.hpp"

namespace dagon {

inline constexpr std::string_view kDefaultMaskToken = "CTHULHUFHTAGN";

struct ContextConfig {
  std::size_t window_chars = 50;  // per side
  std::string mask_token{kDefaultMaskToken};
  std::size_t max_posts_per_term = 3000;

  void validate() const {
    if (window_chars < 1) throw ConfigError("window_chars must be >= 1");
    if (max_posts_per_term < 1) throw ConfigError("max_posts_per_term must be >= 1");
    auto toks = text::tokenize(mask_token);
    if (toks.size() != 1 || toks[0].byte_begin != 0 || toks[0].byte_end != mask_token.size()) {
      throw ConfigError("mask token must be a single token without separator characters");
    }
  }
};

struct ContextSnippet {
  std::string source_post_id;
  std::string masked_text;
  std::string term_surface;  // bookkeeping only

  friend bool operator==(const ContextSnippet&, const ContextSnippet&) = default;
};

// Replaces every token-run match of `term` inside `window` with the mask.
inline std::string mask_term(std::string_view window, const std::vector<std::string>& term,
                             std::string_view mask) {
  const auto toks = text::tokenize(window);
  std::string out;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < toks.size();) {
    if (text::matches_at(toks, i, term)) {
      const auto& last = toks[i + term.size() - 1];
      out.append(window.substr(cursor, toks[i].byte_begin - cursor));
      out.append(mask);
      cursor = last.byte_end;
      i += term.size();
    } else {
      ++i;
    }
  }
  out.append(window.substr(cursor));
  return out;
}

// Raw text within `window_chars` code points on each side of the occurrence,
// with the occurrence (and any other occurrence of the term in the window)
// replaced by the mask token.
inline std::string cut_masked_window(std::string_view post_text, const Occurrence& occ,
                                     const std::vector<std::string>& term, const ContextConfig& cfg) {
  const std::size_t begin = occ.char_start > cfg.window_chars ? occ.char_start - cfg.window_chars : 0;
  const std::size_t end = occ.char_end + cfg.window_chars;  // clamped by substr_chars
  const std::string window = text::substr_chars(post_text, begin, end);
  return mask_term(window, term, cfg.mask_token);
}

inline std::vector<ContextSnippet> harvest(const Index& index, const Corpus& corpus, std::string_view term,
                                           const ContextConfig& cfg) {
  cfg.validate();
  std::vector<ContextSnippet> out;
  const auto toks = text::term_tokens(term);
  if (toks.empty()) return out;
  const std::string surface = text::join(toks);
  for (const auto& occ : index.find_occurrences(surface, cfg.max_posts_per_term)) {
    const Post& post = corpus[occ.post_index];
    out.push_back(ContextSnippet{occ.post_id, cut_masked_window(post.text, occ, toks, cfg), surface});
  }
  return out;
}

inline std::string snippets_to_tsv(const std::vector<ContextSnippet>& snippets) {
  std::string out = "term\tpost_id\tmasked_text\n";
  for (const auto& s : snippets) {
    out += tsv_escape(s.term_surface) + '\t' + tsv_escape(s.source_post_id) + '\t' + tsv_escape(s.masked_text) + '\n';
  }
  return out;
}

}  // namespace dagon
