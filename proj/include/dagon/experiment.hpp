#pragma once

// End-to-end runs over one domain/background corpus pair and the four
// parameter sweeps (seeds per class, theta_c, contexts per seed, contexts
// per term). Each sweep point trains and classifies from scratch except
// where a parameter only affects a later stage.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "dagon/context.hpp"
#include "dagon/corpus.hpp"
#include "dagon/ctx_model.hpp"
#include "dagon/eval.hpp"
#include "dagon/index.hpp"
#include "dagon/io.hpp"
#include "dagon/seeds.hpp"
#include "dagon/term_classifier.hpp"
#include "dagon/terminology.hpp"

namespace dagon {

struct ExperimentSettings {
  std::size_t seeds_per_class = 6;
  std::size_t contexts_per_seed = 3000;
  ContextConfig context;  // max_posts_per_term is overridden per stage
  VoteConfig vote;
  TrainingConfig training;
  bool include_rest = false;
};

struct RunResult {
  ContextModel model;
  std::vector<std::string> evaluated_terms;
  std::vector<std::vector<ContextPrediction>> predictions;  // parallel to evaluated_terms
  std::vector<TermDecision> decisions;
  MetricsReport metrics;
};

struct SweepPoint {
  std::string param;
  double value = 0.0;
  MetricsReport metrics;
  std::size_t seeds_used = 0;  // per class
};

class Experiment {
 public:
  Experiment(const Corpus& domain, const Corpus& background, SeedList substances, SeedList effects, GoldSet gold,
             const TerminologyConfig& terms)
      : domain_(domain),
        index_(Index::build(domain)),
        substances_(std::move(substances)),
        effects_(std::move(effects)),
        gold_(std::move(gold)) {
    check_disjoint(substances_, effects_);
    gold_.validate();
    candidates_ = extract_candidates(domain, background, terms);
    for (const auto& c : candidates_) candidate_set_.insert(c.surface);
  }

  const Index& index() const { return index_; }
  const std::vector<CandidateTerm>& candidates() const { return candidates_; }
  const GoldSet& gold() const { return gold_; }

  // Gold terms that were extracted as candidates and not used as seeds, sorted.
  std::vector<std::string> evaluation_terms(const ContextModel& model, bool include_rest) const {
    std::set<std::string> seeds(model.substance_seeds().begin(), model.substance_seeds().end());
    seeds.insert(model.effect_seeds().begin(), model.effect_seeds().end());
    std::vector<std::string> out;
    auto add = [&](const std::unordered_set<std::string>& terms) {
      for (const auto& t : terms) {
        if (candidate_set_.count(t) && !seeds.count(t)) out.push_back(t);
      }
    };
    add(gold_.substances);
    add(gold_.effects);
    if (include_rest) add(gold_.rest);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Evaluation restricted to the two classes unless include_rest is set.
  GoldSet scoring_gold(bool include_rest) const {
    GoldSet g = gold_;
    if (!include_rest) g.rest.clear();
    return g;
  }

  ContextModel train(std::size_t seeds_per_class, std::size_t contexts_per_seed, const ExperimentSettings& s) const {
    ContextConfig ctx = s.context;
    ctx.max_posts_per_term = contexts_per_seed;
    auto ts = build_training_set(index_, domain_, substances_, effects_, seeds_per_class, ctx);
    return ContextModel::train(ts, s.training, ctx.mask_token);
  }

  // Predictions for every evaluation term, including "rest" terms so that
  // two-class and three-class scores come from the same run.
  RunResult predict(ContextModel model, std::size_t contexts_per_term, const ExperimentSettings& s) const {
    RunResult r;
    r.model = std::move(model);
    r.evaluated_terms = evaluation_terms(r.model, true);
    for (const auto& t : r.evaluated_terms) {
      r.predictions.push_back(term_predictions(t, r.model, index_, domain_, s.context, contexts_per_term));
    }
    return r;
  }

  void decide_and_score(RunResult& r, const VoteConfig& vote, bool include_rest) const {
    vote.validate();
    r.decisions.clear();
    for (std::size_t i = 0; i < r.evaluated_terms.size(); ++i) {
      r.decisions.push_back(decide(r.evaluated_terms[i], r.predictions[i], vote));
    }
    r.metrics = micro_prf(r.decisions, scoring_gold(include_rest));
  }

  RunResult run(const ExperimentSettings& s) const {
    auto r = predict(train(s.seeds_per_class, s.contexts_per_seed, s), s.vote.contexts_per_term, s);
    decide_and_score(r, s.vote, s.include_rest);
    return r;
  }

  // Stops at the first k for which either seed list runs out; the reason is
  // appended to `warnings` when given.
  std::vector<SweepPoint> sweep_seeds(std::size_t k_max, const ExperimentSettings& s,
                                      std::vector<std::string>* warnings = nullptr) const {
    std::vector<SweepPoint> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
      auto model = train(k, s.contexts_per_seed, s);
      const std::size_t used = std::min(model.substance_seeds().size(), model.effect_seeds().size());
      if (used < k) {
        if (warnings) {
          warnings->push_back("seed sweep stopped at " + std::to_string(k - 1) + " of " + std::to_string(k_max) +
                              " seeds per class");
          for (const auto& w : model.warnings()) warnings->push_back(w);
        }
        break;
      }
      auto r = predict(std::move(model), s.vote.contexts_per_term, s);
      decide_and_score(r, s.vote, s.include_rest);
      out.push_back({"seeds_per_class", static_cast<double>(k), r.metrics, used});
    }
    return out;
  }

  std::vector<SweepPoint> sweep_theta_c(const std::vector<double>& values, const ExperimentSettings& s) const {
    auto r = predict(train(s.seeds_per_class, s.contexts_per_seed, s), s.vote.contexts_per_term, s);
    std::vector<SweepPoint> out;
    for (double v : values) {
      VoteConfig vote = s.vote;
      vote.theta_c = v;
      decide_and_score(r, vote, s.include_rest);
      out.push_back({"theta_c", v, r.metrics, s.seeds_per_class});
    }
    return out;
  }

  std::vector<SweepPoint> sweep_contexts_per_seed(const std::vector<std::size_t>& values,
                                                  const ExperimentSettings& s) const {
    std::vector<SweepPoint> out;
    for (auto v : values) {
      auto r = predict(train(s.seeds_per_class, v, s), s.vote.contexts_per_term, s);
      decide_and_score(r, s.vote, s.include_rest);
      out.push_back({"contexts_per_seed", static_cast<double>(v), r.metrics, s.seeds_per_class});
    }
    return out;
  }

  std::vector<SweepPoint> sweep_contexts_per_term(const std::vector<std::size_t>& values,
                                                  const ExperimentSettings& s) const {
    const auto model = train(s.seeds_per_class, s.contexts_per_seed, s);
    std::vector<SweepPoint> out;
    for (auto v : values) {
      auto r = predict(model, v, s);
      decide_and_score(r, s.vote, s.include_rest);
      out.push_back({"contexts_per_term", static_cast<double>(v), r.metrics, s.seeds_per_class});
    }
    return out;
  }

 private:
  const Corpus& domain_;
  Index index_;
  SeedList substances_;
  SeedList effects_;
  GoldSet gold_;
  std::vector<CandidateTerm> candidates_;
  std::unordered_set<std::string> candidate_set_;
};

inline std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::string out = "sweep_param,value,recall,precision,f1\n";
  for (const auto& p : points) {
    out += p.param + ',' + format_double(p.value) + ',' + format_fixed(p.metrics.recall, 6) + ',' +
           format_fixed(p.metrics.precision, 6) + ',' + format_fixed(p.metrics.f1, 6) + '\n';
  }
  return out;
}

}  // namespace dagon
