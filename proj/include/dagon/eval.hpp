#pragma once

// Micro-averaged precision / recall / F1 over term decisions.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "dagon/error.hpp"
#include "dagon/io.hpp"
#include "dagon/seeds.hpp"
#include "dagon/term_classifier.hpp"

namespace dagon {

struct GoldSet {
  std::unordered_set<std::string> substances;
  std::unordered_set<std::string> effects;
  std::unordered_set<std::string> rest;

  void validate() const {
    for (const auto& t : substances) {
      if (effects.count(t) || rest.count(t)) throw ConfigError("gold term '" + t + "' appears in two sets");
    }
    for (const auto& t : effects) {
      if (rest.count(t)) throw ConfigError("gold term '" + t + "' appears in two sets");
    }
  }

  bool contains(const std::string& t) const { return substances.count(t) || effects.count(t) || rest.count(t); }

  // Gold class of a term; Unassigned stands for "rest".
  Label label_of(const std::string& t) const {
    if (substances.count(t)) return Label::Substance;
    if (effects.count(t)) return Label::Effect;
    return Label::Unassigned;
  }
};

inline GoldSet load_gold(const std::filesystem::path& substances, const std::filesystem::path& effects,
                         const std::filesystem::path& rest = {}) {
  GoldSet g;
  for (auto& t : parse_term_list(read_file(substances))) g.substances.insert(std::move(t));
  for (auto& t : parse_term_list(read_file(effects))) g.effects.insert(std::move(t));
  if (!rest.empty()) {
    for (auto& t : parse_term_list(read_file(rest))) g.rest.insert(std::move(t));
  }
  g.validate();
  return g;
}

struct ClassCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

struct MetricsReport {
  ClassCounts substance;
  ClassCounts effect;
  std::size_t tp = 0, fp = 0, fn = 0;  // pooled
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t evaluated_terms = 0;

  static double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  }

  static double harmonic_mean(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

  // Recomputes pooled counts and scores from the per-class counts.
  void finalize() {
    tp = substance.tp + effect.tp;
    fp = substance.fp + effect.fp;
    fn = substance.fn + effect.fn;
    precision = ratio(tp, tp + fp);
    recall = ratio(tp, tp + fn);
    f1 = harmonic_mean(precision, recall);
  }
};

// Decisions on terms outside the gold set are ignored. An Unassigned gold
// substance/effect is a false negative; any assignment of a "rest" term is a
// false positive.
inline MetricsReport micro_prf(std::span<const TermDecision> decisions, const GoldSet& gold) {
  MetricsReport r;
  for (const auto& d : decisions) {
    if (!gold.contains(d.term)) continue;
    ++r.evaluated_terms;
    const Label truth = gold.label_of(d.term);
    if (d.label != Label::Unassigned) {
      auto& c = d.label == Label::Substance ? r.substance : r.effect;
      (d.label == truth ? c.tp : c.fp)++;
    }
    if (truth != Label::Unassigned && d.label != truth) {
      (truth == Label::Substance ? r.substance : r.effect).fn++;
    }
  }
  r.finalize();
  return r;
}

}  // namespace dagon
