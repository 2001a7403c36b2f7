#pragma once

// Term classifier: labels a candidate term by confidence-filtered voting
// over the context-model predictions for its occurrences.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dagon/context.hpp"
#include "dagon/corpus.hpp"
#include "dagon/ctx_model.hpp"
#include "dagon/error.hpp"
#include "dagon/index.hpp"
#include "dagon/io.hpp"
#include "dagon/seeds.hpp"

namespace dagon {

struct VoteConfig {
  double theta_p = 0.8;  // per-context confidence threshold
  double theta_c = 0.6;  // winning-fraction threshold
  std::size_t contexts_per_term = 100;
  bool inclusive_theta_c = true;  // winning_fraction >= theta_c (false: strictly >)

  void validate() const {
    if (!(theta_p > 0.0 && theta_p <= 1.0)) throw ConfigError("theta_p must be in (0, 1]");
    if (!(theta_c > 0.0 && theta_c <= 1.0)) throw ConfigError("theta_c must be in (0, 1]");
    if (contexts_per_term < 1) throw ConfigError("contexts_per_term must be >= 1");
  }
};

struct TermDecision {
  std::string term;
  Label label = Label::Unassigned;
  std::size_t n_fetched = 0;
  std::size_t n_retained = 0;
  std::size_t votes_substance = 0;
  std::size_t votes_effect = 0;
  double winning_fraction = 0.0;

  friend bool operator==(const TermDecision&, const TermDecision&) = default;
};

// Voting rule on already-computed predictions.
inline TermDecision decide(std::string term, std::span<const ContextPrediction> predictions, const VoteConfig& cfg) {
  TermDecision d;
  d.term = std::move(term);
  d.n_fetched = predictions.size();
  for (const auto& p : predictions) {
    if (p.confidence < cfg.theta_p) continue;
    ++d.n_retained;
    if (p.label == Label::Substance) {
      ++d.votes_substance;
    } else {
      ++d.votes_effect;
    }
  }
  if (d.n_retained == 0) return d;
  const std::size_t top = std::max(d.votes_substance, d.votes_effect);
  d.winning_fraction = static_cast<double>(top) / static_cast<double>(d.n_retained);
  if (d.votes_substance == d.votes_effect) return d;
  const bool passes = cfg.inclusive_theta_c ? d.winning_fraction >= cfg.theta_c : d.winning_fraction > cfg.theta_c;
  if (passes) d.label = d.votes_substance > d.votes_effect ? Label::Substance : Label::Effect;
  return d;
}

// Harvest + predict, without the vote. Lets threshold sweeps reuse predictions.
inline std::vector<ContextPrediction> term_predictions(std::string_view candidate, const ContextModel& model,
                                                       const Index& index, const Corpus& corpus, ContextConfig ctx,
                                                       std::size_t contexts_per_term) {
  ctx.max_posts_per_term = contexts_per_term;
  ctx.mask_token = model.mask_token();
  std::vector<ContextPrediction> out;
  for (const auto& s : harvest(index, corpus, candidate, ctx)) out.push_back(model.predict(s));
  return out;
}

inline TermDecision classify_term(std::string_view candidate, const ContextModel& model, const Index& index,
                                  const Corpus& corpus, const ContextConfig& ctx, const VoteConfig& vote) {
  vote.validate();
  const auto preds = term_predictions(candidate, model, index, corpus, ctx, vote.contexts_per_term);
  return decide(text::canonical_term(candidate), preds, vote);
}

inline std::vector<TermDecision> classify_all(std::span<const std::string> candidates, const ContextModel& model,
                                              const Index& index, const Corpus& corpus, const ContextConfig& ctx,
                                              const VoteConfig& vote) {
  std::vector<TermDecision> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(classify_term(c, model, index, corpus, ctx, vote));
  return out;
}

inline std::string lexicon_to_tsv(const std::vector<TermDecision>& decisions) {
  std::string out = "term\tlabel\tn_fetched\tn_retained\tvotes_substance\tvotes_effect\twinning_fraction\n";
  for (const auto& d : decisions) {
    out += tsv_escape(d.term) + '\t' + std::string(to_string(d.label)) + '\t' + std::to_string(d.n_fetched) + '\t' +
           std::to_string(d.n_retained) + '\t' + std::to_string(d.votes_substance) + '\t' +
           std::to_string(d.votes_effect) + '\t' + format_double(d.winning_fraction) + '\n';
  }
  return out;
}

inline std::vector<TermDecision> lexicon_from_tsv(std::string_view data) {
  std::vector<TermDecision> out;
  bool header = true;
  for (const auto& line : split(data, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    auto c = split(line, '\t');
    if (c.size() != 7) throw FormatError("lexicon TSV row has " + std::to_string(c.size()) + " columns");
    try {
      out.push_back(TermDecision{c[0], label_from_string(c[1]), std::stoull(c[2]), std::stoull(c[3]),
                                 std::stoull(c[4]), std::stoull(c[5]), std::stod(c[6])});
    } catch (const std::invalid_argument&) {
      throw FormatError("bad numeric field in lexicon TSV: " + line);
    } catch (const std::out_of_range&) {
      throw FormatError("numeric field out of range in lexicon TSV: " + line);
    }
  }
  return out;
}

}  // namespace dagon
