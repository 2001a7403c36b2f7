#pragma once

// Substance -> effect links from per-post co-occurrence of lexicon terms.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dagon/corpus.hpp"
#include "dagon/error.hpp"
#include "dagon/io.hpp"
#include "dagon/seeds.hpp"
#include "dagon/term_classifier.hpp"
#include "dagon/text.hpp"

namespace dagon {

struct LexiconEntry {
  std::string term;
  Label label = Label::Unassigned;
};

struct PostMetadata {
  std::string post_id;
  std::set<std::string> substances;
  std::set<std::string> effects;

  bool empty() const { return substances.empty() && effects.empty(); }
};

struct EffectCount {
  std::string effect;
  std::size_t count = 0;
  friend bool operator==(const EffectCount&, const EffectCount&) = default;
};

struct LinkTable {
  std::size_t min_support = 3;
  std::map<std::string, std::vector<EffectCount>> links;  // sorted (count desc, effect asc)

  const std::vector<EffectCount>& effects_of(const std::string& substance) const {
    static const std::vector<EffectCount> kEmpty;
    auto it = links.find(substance);
    return it == links.end() ? kEmpty : it->second;
  }
};

inline std::vector<LexiconEntry> lexicon_from_decisions(std::span<const TermDecision> decisions) {
  std::vector<LexiconEntry> out;
  for (const auto& d : decisions) {
    if (d.label != Label::Unassigned) out.push_back({d.term, d.label});
  }
  return out;
}

// Tags every post with the lexicon terms it contains (token-run match within a sentence).
inline std::vector<PostMetadata> annotate_posts(const Corpus& corpus, std::span<const LexiconEntry> lexicon) {
  if (lexicon.empty()) throw ConfigError("lexicon is empty");
  struct Entry {
    std::vector<std::string> tokens;
    std::string surface;
    Label label;
  };
  std::unordered_map<std::string, std::vector<Entry>> by_first;
  std::unordered_map<std::string, Label> seen;
  for (const auto& e : lexicon) {
    if (e.label == Label::Unassigned) continue;
    auto toks = text::term_tokens(e.term);
    if (toks.empty()) continue;
    auto surface = text::join(toks);
    auto [it, inserted] = seen.emplace(surface, e.label);
    if (!inserted) {
      if (it->second != e.label) throw ConfigError("lexicon term '" + surface + "' carries both labels");
      continue;
    }
    const std::string first = toks.front();
    by_first[first].push_back(Entry{std::move(toks), std::move(surface), e.label});
  }
  std::vector<PostMetadata> out;
  out.reserve(corpus.doc_count());
  for (const auto& post : corpus.posts()) {
    PostMetadata md;
    md.post_id = post.post_id;
    const auto toks = text::tokenize(post.text);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      auto it = by_first.find(toks[i].norm);
      if (it == by_first.end()) continue;
      for (const auto& e : it->second) {
        if (!text::matches_at(toks, i, e.tokens)) continue;
        (e.label == Label::Substance ? md.substances : md.effects).insert(e.surface);
      }
    }
    out.push_back(std::move(md));
  }
  return out;
}

// count(s, e) = number of posts tagged with both s and e.
inline LinkTable build_links(std::span<const PostMetadata> metadata, std::size_t min_support) {
  if (min_support < 1) throw ConfigError("min_support must be >= 1");
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& md : metadata) {
    for (const auto& s : md.substances) {
      for (const auto& e : md.effects) ++counts[{s, e}];
    }
  }
  LinkTable table;
  table.min_support = min_support;
  for (const auto& [key, c] : counts) {
    if (c >= min_support) table.links[key.first].push_back({key.second, c});
  }
  for (auto& [s, list] : table.links) {
    std::sort(list.begin(), list.end(), [](const EffectCount& a, const EffectCount& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.effect < b.effect;
    });
  }
  return table;
}

inline std::string links_to_tsv(const LinkTable& table) {
  std::string out = "substance\teffect\tcount\n";
  for (const auto& [s, list] : table.links) {
    for (const auto& ec : list) out += tsv_escape(s) + '\t' + tsv_escape(ec.effect) + '\t' + std::to_string(ec.count) + '\n';
  }
  return out;
}

// Top effects for the `top_substances` substances with the most linked posts.
inline std::string links_summary(const LinkTable& table, std::size_t top_substances, std::size_t top_effects) {
  std::vector<std::pair<std::string, std::size_t>> totals;
  for (const auto& [s, list] : table.links) {
    std::size_t t = 0;
    for (const auto& ec : list) t += ec.count;
    totals.emplace_back(s, t);
  }
  std::sort(totals.begin(), totals.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string out = "Drug\tEffects\n";
  for (std::size_t i = 0; i < totals.size() && i < top_substances; ++i) {
    const auto& list = table.effects_of(totals[i].first);
    out += totals[i].first + '\t';
    for (std::size_t k = 0; k < list.size() && k < top_effects; ++k) {
      if (k) out += ", ";
      out += list[k].effect;
    }
    out += '\n';
  }
  return out;
}

}  // namespace dagon
