#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dagon/error.hpp"
#include "dagon/index.hpp"
#include "dagon/io.hpp"
#include "dagon/text.hpp"

namespace dagon {

enum class Label { Substance, Effect, Unassigned };

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::Substance:
      return "Substance";
    case Label::Effect:
      return "Effect";
    case Label::Unassigned:
      return "Unassigned";
  }
  return "Unassigned";
}

inline Label label_from_string(std::string_view s) {
  if (s == "Substance") return Label::Substance;
  if (s == "Effect") return Label::Effect;
  if (s == "Unassigned") return Label::Unassigned;
  throw FormatError("unknown label '" + std::string(s) + "'");
}

struct SeedList {
  Label class_label = Label::Substance;
  std::vector<std::string> terms;  // canonical surfaces, unique, file order
};

// One term per line; '#' starts a comment; blank lines ignored; duplicates dropped.
inline std::vector<std::string> parse_term_list(std::string_view data) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto line : split(data, '\n')) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto canon = text::canonical_term(line);
    if (canon.empty()) continue;
    if (seen.insert(canon).second) out.push_back(std::move(canon));
  }
  return out;
}

inline SeedList load_seed_list(const std::filesystem::path& path, Label label) {
  return SeedList{label, parse_term_list(read_file(path))};
}

inline void check_disjoint(const SeedList& a, const SeedList& b) {
  std::unordered_set<std::string> s(a.terms.begin(), a.terms.end());
  for (const auto& t : b.terms) {
    if (s.count(t)) throw ConfigError("seed lists are not disjoint: '" + t + "' appears in both");
  }
}

// ln(doc_count / df); undefined for df = 0.
inline double idf(std::size_t doc_count, std::size_t df) {
  if (df == 0 || df > doc_count) throw ConfigError("idf requires 1 <= df <= doc_count");
  return std::log(static_cast<double>(doc_count) / static_cast<double>(df));
}

// Unused seed with maximum document frequency (minimum idf); ties broken by surface.
inline std::string select_next_seed(const SeedList& seeds, const std::set<std::string>& used, const Index& index) {
  const std::string* best = nullptr;
  std::size_t best_df = 0;
  bool any_unused = false;
  for (const auto& t : seeds.terms) {
    if (used.count(t)) continue;
    any_unused = true;
    const std::size_t df = index.term_document_frequency(t);
    if (df == 0) continue;
    if (!best || df > best_df || (df == best_df && t < *best)) {
      best = &t;
      best_df = df;
    }
  }
  if (!any_unused) throw SeedsExhaustedError("all " + std::string(to_string(seeds.class_label)) + " seeds are used");
  if (!best) {
    throw SeedsAbsentError("no unused " + std::string(to_string(seeds.class_label)) + " seed occurs in the corpus");
  }
  return *best;
}

}  // namespace dagon
