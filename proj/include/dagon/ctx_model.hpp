#pragma once

// Context model: classifies a masked snippet as Substance-like or
// Effect-like with a calibrated confidence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <utility>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dagon/context.hpp"
#include "dagon/corpus.hpp"
#include "dagon/error.hpp"
#include "dagon/index.hpp"
#include "dagon/io.hpp"
#include "dagon/seeds.hpp"
#include "dagon/svm.hpp"
#include "dagon/text.hpp"

namespace dagon {

// Token-distance buckets for the mask position features.
inline constexpr std::size_t kPositionBuckets = 7;

inline std::size_t position_bucket(std::size_t distance) {
  if (distance <= 3) return distance;  // 0,1,2,3
  if (distance <= 5) return 4;
  if (distance <= 8) return 5;
  return 6;
}

// Feature space. Indices [0, 2*kPositionBuckets) are the mask position
// features (tokens before / after the mask); token features follow in order
// of first appearance in the training data.
class Vocabulary {
 public:
  Vocabulary() = default;

  static constexpr std::size_t kReserved = 2 * kPositionBuckets;

  std::size_t dimension() const { return kReserved + tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::uint32_t add(const std::string& token) {
    auto [it, inserted] = ids_.emplace(token, static_cast<std::uint32_t>(kReserved + tokens_.size()));
    if (inserted) tokens_.push_back(token);
    return it->second;
  }

  std::optional<std::uint32_t> find(const std::string& token) const {
    auto it = ids_.find(token);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  static std::uint32_t before_feature(std::size_t distance) {
    return static_cast<std::uint32_t>(position_bucket(distance));
  }
  static std::uint32_t after_feature(std::size_t distance) {
    return static_cast<std::uint32_t>(kPositionBuckets + position_bucket(distance));
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

namespace detail {

struct SnippetTokens {
  std::vector<std::string> words;  // mask excluded
  std::size_t before = 0;          // tokens before the first mask
  std::size_t after = 0;           // tokens after the last mask
};

inline SnippetTokens split_snippet(std::string_view masked_text, std::string_view mask_token) {
  const std::string mask = text::normalize_token(mask_token);
  SnippetTokens st;
  auto toks = text::tokenize(masked_text);
  std::ptrdiff_t first = -1, last = -1;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].norm == mask) {
      if (first < 0) first = static_cast<std::ptrdiff_t>(i);
      last = static_cast<std::ptrdiff_t>(i);
    } else {
      st.words.push_back(std::move(toks[i].norm));
    }
  }
  if (first >= 0) {
    st.before = static_cast<std::size_t>(first);
    st.after = toks.size() - 1 - static_cast<std::size_t>(last);
  }
  return st;
}

}  // namespace detail

// Bag of tokens (tf, mask excluded) plus one before-mask and one after-mask
// position feature, l2-normalized. Zero vector when no token is in-vocabulary.
inline SparseVector featurize(const ContextSnippet& snippet, const Vocabulary& vocab, std::string_view mask_token) {
  const auto st = detail::split_snippet(snippet.masked_text, mask_token);
  std::map<std::uint32_t, double> tf;
  for (const auto& w : st.words) {
    if (auto id = vocab.find(w)) tf[*id] += 1.0;
  }
  SparseVector v;
  if (tf.empty()) return v;
  tf[Vocabulary::before_feature(st.before)] += 1.0;
  tf[Vocabulary::after_feature(st.after)] += 1.0;
  double norm = 0.0;
  for (const auto& [k, x] : tf) norm += x * x;
  norm = std::sqrt(norm);
  for (const auto& [k, x] : tf) {
    v.index.push_back(k);
    v.value.push_back(x / norm);
  }
  return v;
}

struct TrainingConfig {
  double C = 1.0;
  std::size_t calibration_folds = 5;
  std::uint64_t rng_seed = 42;
  std::size_t max_epochs = 1000;
  double tolerance = 1e-3;
  // Average the loss per seed term before averaging per class, so a single
  // frequent seed does not dominate its class.
  bool balance_seeds = true;
};

struct TrainingSet {
  std::vector<ContextSnippet> substance;  // T_S
  std::vector<ContextSnippet> effect;     // T_E
  std::vector<std::string> substance_seeds;
  std::vector<std::string> effect_seeds;
  std::vector<std::string> warnings;
};

struct ContextPrediction {
  Label label = Label::Substance;
  double confidence = 0.5;
  double substance_probability = 0.5;

  double effect_probability() const { return 1.0 - substance_probability; }
};

class ContextModel {
 public:
  static constexpr std::string_view kFormat = "dagon-context-model";
  static constexpr int kVersion = 1;

  ContextModel() = default;

  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<double>& weights() const { return weights_; }
  double calibration_slope() const { return slope_; }
  const std::string& mask_token() const { return mask_token_; }
  const std::vector<std::string>& substance_seeds() const { return substance_seeds_; }
  const std::vector<std::string>& effect_seeds() const { return effect_seeds_; }
  const std::string& config_hash() const { return config_hash_; }
  void set_config_hash(std::string h) { config_hash_ = std::move(h); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Positive margins lean Substance.
  double margin(const SparseVector& x) const { return x.dot(weights_); }

  ContextPrediction predict_vector(const SparseVector& x) const {
    ContextPrediction p;
    p.substance_probability = x.empty() ? 0.5 : sigmoid(slope_ * margin(x));
    if (p.substance_probability >= 0.5) {
      p.label = Label::Substance;
      p.confidence = p.substance_probability;
    } else {
      p.label = Label::Effect;
      p.confidence = 1.0 - p.substance_probability;
    }
    return p;
  }

  ContextPrediction predict(const ContextSnippet& snippet) const {
    return predict_vector(featurize(snippet, vocab_, mask_token_));
  }

  static ContextModel train(const TrainingSet& ts, const TrainingConfig& cfg, std::string_view mask_token) {
    if (ts.substance.empty() || ts.effect.empty()) {
      throw ConfigError("training needs contexts for both classes (substance: " + std::to_string(ts.substance.size()) +
                        ", effect: " + std::to_string(ts.effect.size()) + ")");
    }
    if (cfg.C <= 0.0) throw ConfigError("C must be positive");
    ContextModel m;
    m.mask_token_ = std::string(mask_token);
    m.substance_seeds_ = ts.substance_seeds;
    m.effect_seeds_ = ts.effect_seeds;
    m.warnings_ = ts.warnings;
    if (ts.substance.size() + ts.effect.size() < 10) {
      m.warnings_.push_back("fewer than 10 training contexts; the model will be unreliable");
    }

    std::vector<const ContextSnippet*> all;
    std::vector<int> ys;
    std::vector<std::size_t> groups;
    std::map<std::pair<int, std::string>, std::size_t> group_ids;
    std::set<std::tuple<int, std::size_t, std::string_view>> seen;
    auto add = [&](const std::vector<ContextSnippet>& snippets, int y) {
      for (const auto& s : snippets) {
        const auto key = std::make_pair(y, cfg.balance_seeds ? s.term_surface : std::string());
        const std::size_t group = group_ids.emplace(key, group_ids.size()).first->second;
        // Repeated snippets carry no new evidence.
        if (!seen.emplace(y, group, s.masked_text).second) continue;
        all.push_back(&s);
        ys.push_back(y);
        groups.push_back(group);
      }
    };
    add(ts.substance, +1);
    add(ts.effect, -1);
    for (const auto* s : all) {
      for (const auto& w : detail::split_snippet(s->masked_text, mask_token).words) m.vocab_.add(w);
    }
    std::vector<SparseVector> xs;
    xs.reserve(all.size());
    for (const auto* s : all) xs.push_back(featurize(*s, m.vocab_, mask_token));

    const SvmParams svm{cfg.C, cfg.max_epochs, cfg.tolerance, cfg.rng_seed};
    m.weights_ = train_linear_svm(xs, ys, m.vocab_.dimension(), svm, groups);
    m.slope_ = calibrate(xs, ys, groups, m.vocab_.dimension(), svm, cfg);
    return m;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["config_hash"] = config_hash_;
    j["mask_token"] = mask_token_;
    j["substance_seeds"] = substance_seeds_;
    j["effect_seeds"] = effect_seeds_;
    j["warnings"] = warnings_;
    j["calibration_slope"] = slope_;
    j["vocabulary"] = vocab_.tokens();
    j["weights"] = weights_;
    return j;
  }

  static ContextModel from_json(const nlohmann::json& j) {
    try {
      if (j.at("format").get<std::string>() != kFormat) throw FormatError("not a context model file");
      if (j.at("version").get<int>() != kVersion) {
        throw FormatError("context model version " + std::to_string(j.at("version").get<int>()) +
                          " is not supported");
      }
      ContextModel m;
      m.config_hash_ = j.at("config_hash").get<std::string>();
      m.mask_token_ = j.at("mask_token").get<std::string>();
      m.substance_seeds_ = j.at("substance_seeds").get<std::vector<std::string>>();
      m.effect_seeds_ = j.at("effect_seeds").get<std::vector<std::string>>();
      m.warnings_ = j.at("warnings").get<std::vector<std::string>>();
      m.slope_ = j.at("calibration_slope").get<double>();
      for (const auto& t : j.at("vocabulary").get<std::vector<std::string>>()) m.vocab_.add(t);
      m.weights_ = j.at("weights").get<std::vector<double>>();
      if (m.weights_.size() != m.vocab_.dimension()) throw FormatError("model weight count does not match vocabulary");
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed context model: ") + e.what());
    }
  }

  void save(const std::filesystem::path& path) const { write_file_atomic(path, to_json().dump(1) + "\n"); }

  static ContextModel load(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(data);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("model file " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j);
  }

 private:
  // Slope of the sigmoid fitted on cross-validated margins (falls back to
  // training margins when a fold would lose a class).
  static double calibrate(const std::vector<SparseVector>& xs, const std::vector<int>& ys,
                          const std::vector<std::size_t>& groups, std::size_t dim, const SvmParams& svm,
                          const TrainingConfig& cfg) {
    const std::size_t n = xs.size();
    const std::size_t k = std::min<std::size_t>(cfg.calibration_folds, n);
    std::vector<double> margins(n, 0.0);
    bool cv_ok = k >= 2;
    if (cv_ok) {
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      std::mt19937_64 rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
      detail::deterministic_shuffle(perm, rng);
      std::vector<std::size_t> fold(n);
      for (std::size_t r = 0; r < n; ++r) fold[perm[r]] = r % k;
      for (std::size_t f = 0; f < k && cv_ok; ++f) {
        std::vector<SparseVector> tx;
        std::vector<int> ty;
        std::vector<std::size_t> tg;
        for (std::size_t i = 0; i < n; ++i) {
          if (fold[i] != f) {
            tx.push_back(xs[i]);
            ty.push_back(ys[i]);
            tg.push_back(groups[i]);
          }
        }
        const bool has_pos = std::find(ty.begin(), ty.end(), +1) != ty.end();
        const bool has_neg = std::find(ty.begin(), ty.end(), -1) != ty.end();
        if (!has_pos || !has_neg) {
          cv_ok = false;
          break;
        }
        SvmParams p = svm;
        p.seed = svm.seed + 1 + f;
        const auto w = train_linear_svm(tx, ty, dim, p, tg);
        for (std::size_t i = 0; i < n; ++i) {
          if (fold[i] == f) margins[i] = xs[i].dot(w);
        }
      }
    }
    if (!cv_ok) {
      const auto w = train_linear_svm(xs, ys, dim, svm, groups);
      for (std::size_t i = 0; i < n; ++i) margins[i] = xs[i].dot(w);
    }
    return fit_sigmoid_slope(margins, ys);
  }

  Vocabulary vocab_;
  std::vector<double> weights_;
  double slope_ = 0.0;
  std::string mask_token_{kDefaultMaskToken};
  std::vector<std::string> substance_seeds_;
  std::vector<std::string> effect_seeds_;
  std::vector<std::string> warnings_;
  std::string config_hash_;
};

// Picks `seeds_per_class` seeds per class in increasing-idf order and
// harvests their contexts. Stops early (with a warning) when a list runs out.
inline TrainingSet build_training_set(const Index& index, const Corpus& corpus, const SeedList& substances,
                                      const SeedList& effects, std::size_t seeds_per_class, const ContextConfig& ctx) {
  TrainingSet ts;
  auto collect = [&](const SeedList& list, std::vector<ContextSnippet>& out, std::vector<std::string>& used_order) {
    std::set<std::string> used;
    for (std::size_t k = 0; k < seeds_per_class; ++k) {
      std::string seed;
      try {
        seed = select_next_seed(list, used, index);
      } catch (const SeedsExhaustedError& e) {
        ts.warnings.push_back(std::string(e.what()) + " after " + std::to_string(k) + " seeds");
        break;
      } catch (const SeedsAbsentError& e) {
        ts.warnings.push_back(std::string(e.what()) + " after " + std::to_string(k) + " seeds");
        break;
      }
      used.insert(seed);
      used_order.push_back(seed);
      auto snippets = harvest(index, corpus, seed, ctx);
      out.insert(out.end(), std::make_move_iterator(snippets.begin()), std::make_move_iterator(snippets.end()));
    }
  };
  collect(substances, ts.substance, ts.substance_seeds);
  collect(effects, ts.effect, ts.effect_seeds);
  return ts;
}

}  // namespace dagon
