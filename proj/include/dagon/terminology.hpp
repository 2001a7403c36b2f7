#pragma once

// Contrastive terminology extraction: n-grams (n <= 3) over-represented in
// the domain corpus relative to a background corpus.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dagon/corpus.hpp"
#include "dagon/error.hpp"
#include "dagon/io.hpp"
#include "dagon/text.hpp"

namespace dagon {

inline constexpr std::size_t kMaxNgram = 3;

struct CandidateTerm {
  std::string surface;
  std::size_t df_domain = 0;
  std::size_t tf_domain = 0;
  std::size_t tf_background = 0;
  double relevance = 0.0;

  std::size_t token_count() const { return static_cast<std::size_t>(std::count(surface.begin(), surface.end(), ' ')) + 1; }
  friend bool operator==(const CandidateTerm&, const CandidateTerm&) = default;
};

struct TerminologyConfig {
  std::size_t min_df = 5;
  std::size_t max_candidates = 5000;
  double smoothing = 1e-9;

  void validate() const {
    if (min_df < 1) throw ConfigError("min_df must be >= 1");
    if (max_candidates < 1) throw ConfigError("max_candidates must be >= 1");
    if (!(smoothing > 0.0)) throw ConfigError("smoothing must be > 0");
  }
};

using NgramCounts = std::map<std::string, std::size_t>;

namespace detail {

// Calls fn(surface) for every n-gram (1..n_max) inside one sentence.
template <typename Fn>
void for_each_ngram(const std::vector<text::Token>& toks, std::size_t n_max, Fn&& fn) {
  std::string gram;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    gram.clear();
    for (std::size_t n = 0; n < n_max && i + n < toks.size(); ++n) {
      if (toks[i + n].sentence != toks[i].sentence) break;
      if (n) gram += ' ';
      gram += toks[i + n].norm;
      fn(std::as_const(gram));
    }
  }
}

}  // namespace detail

inline NgramCounts extract_ngrams(std::string_view post_text, std::size_t n_max = kMaxNgram) {
  NgramCounts counts;
  detail::for_each_ngram(text::tokenize(post_text), n_max, [&](const std::string& g) { ++counts[g]; });
  return counts;
}

// p_d * ln(p_d / max(p_b, eps)); zero when the term never occurs in the domain.
inline double contrastive_score(std::size_t tf_domain, std::size_t domain_tokens, std::size_t tf_background,
                                std::size_t background_tokens, double eps) {
  if (domain_tokens == 0 || background_tokens == 0) throw ConfigError("corpus token totals must be positive");
  if (tf_domain == 0) return 0.0;
  const double pd = static_cast<double>(tf_domain) / static_cast<double>(domain_tokens);
  const double pb = static_cast<double>(tf_background) / static_cast<double>(background_tokens);
  return pd * std::log(pd / std::max(pb, eps));
}

inline std::vector<CandidateTerm> extract_candidates(const Corpus& domain, const Corpus& background,
                                                     const TerminologyConfig& cfg) {
  cfg.validate();
  if (background.empty()) throw ConfigError("background corpus is empty");
  if (domain.empty()) throw ConfigError("domain corpus is empty");

  struct Stat {
    std::size_t tf = 0;
    std::size_t df = 0;
    std::size_t last_post = static_cast<std::size_t>(-1);
  };
  std::unordered_map<std::string, Stat> stats;
  std::size_t domain_tokens = 0;
  for (std::size_t i = 0; i < domain.doc_count(); ++i) {
    auto toks = text::tokenize(domain[i].text);
    domain_tokens += toks.size();
    detail::for_each_ngram(toks, kMaxNgram, [&](const std::string& g) {
      auto& s = stats[g];
      ++s.tf;
      if (s.last_post != i) {
        s.last_post = i;
        ++s.df;
      }
    });
  }

  std::unordered_map<std::string, std::size_t> bg_tf;
  for (const auto& [g, s] : stats) {
    if (s.df >= cfg.min_df) bg_tf.emplace(g, 0);
  }
  std::size_t background_tokens = 0;
  for (const auto& post : background.posts()) {
    auto toks = text::tokenize(post.text);
    background_tokens += toks.size();
    detail::for_each_ngram(toks, kMaxNgram, [&](const std::string& g) {
      auto it = bg_tf.find(g);
      if (it != bg_tf.end()) ++it->second;
    });
  }
  if (domain_tokens == 0) throw ConfigError("domain corpus has no tokens");
  if (background_tokens == 0) throw ConfigError("background corpus has no tokens");

  std::vector<CandidateTerm> out;
  out.reserve(bg_tf.size());
  for (const auto& [g, tfb] : bg_tf) {
    const auto& s = stats.at(g);
    out.push_back(CandidateTerm{g, s.df, s.tf, tfb,
                                contrastive_score(s.tf, domain_tokens, tfb, background_tokens, cfg.smoothing)});
  }
  std::sort(out.begin(), out.end(), [](const CandidateTerm& a, const CandidateTerm& b) {
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    return a.surface < b.surface;
  });
  if (out.size() > cfg.max_candidates) out.resize(cfg.max_candidates);
  return out;
}

inline std::string candidates_to_tsv(const std::vector<CandidateTerm>& cands) {
  std::string out = "surface\tdf_domain\ttf_domain\ttf_background\trelevance\n";
  for (const auto& c : cands) {
    out += tsv_escape(c.surface) + '\t' + std::to_string(c.df_domain) + '\t' + std::to_string(c.tf_domain) + '\t' +
           std::to_string(c.tf_background) + '\t' + format_double(c.relevance) + '\n';
  }
  return out;
}

// Parses the body produced by candidates_to_tsv (lines starting with '#' are ignored).
inline std::vector<CandidateTerm> candidates_from_tsv(std::string_view data) {
  std::vector<CandidateTerm> out;
  bool header = true;
  for (const auto& line : split(data, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 5) throw FormatError("candidate TSV row has " + std::to_string(cols.size()) + " columns");
    try {
      out.push_back(CandidateTerm{cols[0], std::stoull(cols[1]), std::stoull(cols[2]), std::stoull(cols[3]),
                                  std::stod(cols[4])});
    } catch (const std::exception&) {
      throw FormatError("bad numeric field in candidate TSV: " + line);
    }
  }
  return out;
}

}  // namespace dagon
