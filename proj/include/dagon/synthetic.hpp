#pragma once

// Synthetic forum corpora with planted substance / effect / neutral terms.
//
// Every planted term belongs to a class family. Its mentions are rendered
// from that family's sentence templates, so a context model trained on a few
// families generalizes poorly to the others. Substances link to effects
// through a known co-mention matrix. The generator is fully determined by
// `SyntheticSpec::seed`; no sampling depends on the surface strings, which
// lets tests swap surfaces between two runs.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dagon/corpus.hpp"
#include "dagon/error.hpp"
#include "dagon/eval.hpp"
#include "dagon/seeds.hpp"
#include "dagon/text.hpp"

namespace dagon {

struct SyntheticSpec {
  std::size_t n_posts = 10000;
  std::size_t n_background_posts = 5000;
  std::size_t n_substances = 100;
  std::size_t n_effects = 40;
  std::size_t n_neutral = 100;
  std::size_t substance_families = 6;
  std::size_t effect_families = 6;
  std::size_t templates_per_family = 8;
  std::size_t family_pool_size = 4000;  // cue words per family
  std::size_t class_pool_size = 25;   // cue words shared by all families of a class
  std::size_t bridge_pool_size = 20;  // words shared by a substance family and an effect family
  double noise_rate = 0.05;           // mention rendered from a template of the wrong class
  double shared_template_rate = 0.0;
  double multi_token_fraction = 0.1;
  double confusable_neutral_fraction = 0.3;
  double confusable_rate = 0.7;  // share of a confusable neutral term's mentions in class templates
  double second_substance_rate = 0.1;
  double chat_post_rate = 0.15;  // posts with no substance
  double linked_effect_rate = 0.9;
  double zipf_exponent = 1.0;
  double pool_zipf_exponent = 0.0;  // word popularity inside a family pool
  // Template slot mix; the remainder are free filler slots.
  double slot_family_fixed = 0.0;
  double slot_family_pool = 0.80;
  double slot_class_pool = 0.0;
  double slot_bridge = 0.10;
  double slot_filler_fixed = 0.05;
  std::uint64_t seed = 42;

  void validate() const {
    if (n_posts == 0 || n_background_posts == 0) throw ConfigError("synthetic corpora need posts");
    if (n_substances == 0 || n_effects < 3) throw ConfigError("need substances and at least 3 effects");
    if (substance_families == 0 || effect_families == 0 || templates_per_family == 0) {
      throw ConfigError("families and templates must be positive");
    }
    if (family_pool_size < 4 || class_pool_size < 2 || bridge_pool_size < 2) {
      throw ConfigError("vocabulary pools are smaller than template demand");
    }
    auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!unit(noise_rate) || !unit(shared_template_rate) || !unit(multi_token_fraction) ||
        !unit(confusable_neutral_fraction) || !unit(confusable_rate) || !unit(second_substance_rate) ||
        !unit(chat_post_rate) || !unit(linked_effect_rate)) {
      throw ConfigError("synthetic rates must lie in [0, 1]");
    }
    const double slots = slot_family_fixed + slot_family_pool + slot_class_pool + slot_bridge + slot_filler_fixed;
    if (slot_family_fixed < 0 || slot_family_pool < 0 || slot_class_pool < 0 || slot_bridge < 0 ||
        slot_filler_fixed < 0 || slots > 1.0) {
      throw ConfigError("template slot shares must be non-negative and sum to at most 1");
    }
  }
};

struct PlantedTerm {
  std::string surface;
  Label label = Label::Unassigned;  // Unassigned = neutral
  std::size_t family = 0;
  bool confusable = false;          // neutral terms only
  std::set<std::size_t> posts;      // domain post positions it was injected into
};

struct SyntheticData {
  Corpus domain{"synthetic-domain"};
  Corpus background{"synthetic-background"};
  std::vector<PlantedTerm> substances;  // index = popularity rank
  std::vector<PlantedTerm> effects;
  std::vector<PlantedTerm> neutral;
  // link_weights[s] = (effect index, weight), weight descending
  std::vector<std::vector<std::pair<std::size_t, double>>> link_weights;

  GoldSet gold() const {
    GoldSet g;
    for (const auto& t : substances) g.substances.insert(t.surface);
    for (const auto& t : effects) g.effects.insert(t.surface);
    for (const auto& t : neutral) g.rest.insert(t.surface);
    return g;
  }

  SeedList substance_seeds() const {
    SeedList s{Label::Substance, {}};
    for (const auto& t : substances) s.terms.push_back(t.surface);
    return s;
  }

  SeedList effect_seeds() const {
    SeedList s{Label::Effect, {}};
    for (const auto& t : effects) s.terms.push_back(t.surface);
    return s;
  }

  // Number of domain posts into which both terms were injected.
  static std::size_t comentions(const PlantedTerm& a, const PlantedTerm& b) {
    std::size_t n = 0;
    for (auto p : a.posts) n += b.posts.count(p);
    return n;
  }

  // The k most co-mentioned effects of a substance among those with at least
  // `min_support` co-mentions, ordered by (count desc, surface asc).
  std::vector<std::string> top_effects(std::size_t substance, std::size_t k, std::size_t min_support) const {
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (const auto& e : effects) {
      const auto c = comentions(substances[substance], e);
      if (c >= min_support) ranked.emplace_back(c, e.surface);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].second);
    return out;
  }
};

// splitmix64; explicit so output is identical on every platform.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

class ZipfSampler {
 public:
  ZipfSampler() = default;
  ZipfSampler(std::size_t n, double s) {
    cdf_.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }
  std::size_t operator()(SplitRng& rng) const {
    const double u = rng.uniform();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
  }
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

namespace synth_detail {

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "the", "and", "i", "it", "was", "so", "but", "just", "like", "really", "my", "me", "we", "then",
      "after", "before", "about", "some", "very", "when", "with", "from", "that", "this", "for", "on",
      "at", "of", "to", "in", "had", "have", "got", "been", "were", "they", "you", "all", "out", "up",
      "time", "day", "night", "week", "friend", "friends", "home", "work", "think", "know", "good",
      "bad", "first", "last", "little", "lot", "much", "more", "less", "again", "still", "never",
      "always", "maybe", "pretty", "kind", "thing", "things", "way", "back", "around", "over", "into",
      "went", "came", "made", "said", "did", "do", "does", "going", "get", "getting", "would", "could",
      "should", "will", "can", "not", "no", "yes", "one", "two", "three", "people", "guy", "place",
      "room", "house", "car", "music", "food", "water", "today", "yesterday", "morning", "evening",
      "weekend", "hours", "minutes", "long", "since", "because", "though", "while", "which", "what",
      "who", "how", "why", "where", "there", "here", "now", "ever", "also", "even", "only", "well",
      "sure", "probably", "actually", "definitely", "honestly", "a", "an", "is", "are", "be", "as",
      "if", "or", "by", "too", "than", "them", "their", "our", "your", "its", "he", "she", "his", "her"};
  return words;
}

inline const std::vector<std::string>& offtopic_words() {
  static const std::vector<std::string> words = {
      "recipe", "oven", "garden", "football", "league", "match", "weather", "rain", "holiday", "train",
      "station", "ticket", "movie", "series", "episode", "book", "chapter", "phone", "laptop", "screen",
      "kitchen", "dinner", "lunch", "shop", "price", "market", "bike", "road", "city", "village",
      "school", "teacher", "class", "exam", "paint", "guitar", "song", "concert", "beach", "mountain"};
  return words;
}

// Pronounceable unique pseudo-words.
class WordMaker {
 public:
  explicit WordMaker(SplitRng& rng) : rng_(rng) {
    for (const auto& w : filler_words()) used_.insert(w);
    for (const auto& w : offtopic_words()) used_.insert(w);
  }

  std::string make(std::size_t min_syll, std::size_t max_syll) {
    static const std::array<const char*, 20> onsets = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r",
                                                      "s", "t", "v", "z", "br", "dr", "kl", "tr", "sh", "gr"};
    static const std::array<const char*, 7> vowels = {"a", "e", "i", "o", "u", "ai", "ou"};
    static const std::array<const char*, 6> codas = {"", "", "n", "x", "l", "r"};
    for (;;) {
      const std::size_t n = min_syll + rng_.below(max_syll - min_syll + 1);
      std::string w;
      for (std::size_t i = 0; i < n; ++i) {
        w += onsets[rng_.below(onsets.size())];
        w += vowels[rng_.below(vowels.size())];
      }
      w += codas[rng_.below(codas.size())];
      if (used_.insert(w).second) return w;
    }
  }

 private:
  SplitRng& rng_;
  std::unordered_set<std::string> used_;
};

// Slot kinds inside a sentence template.
enum class Slot { Term, Fixed, FamilyPool, ClassPool, BridgePool, Filler };

struct TemplateWord {
  Slot slot;
  std::string word;  // Fixed only
};

struct Template {
  std::vector<TemplateWord> words;
  char end = '.';
};

struct Pools {
  std::vector<std::string> family;
  std::vector<std::string> class_shared;
  std::vector<std::string> bridge;
};

inline std::string pick(const std::vector<std::string>& pool, const ZipfSampler& z, SplitRng& rng) {
  return pool[z(rng) % pool.size()];
}

struct SlotMix {
  double family_fixed, family_pool, class_pool, bridge, filler_fixed;
};

inline Template make_template(const Pools& pools, const SlotMix& mix, SplitRng& rng) {
  static const char ends[] = {'.', '.', '.', '!', '?'};
  Template t;
  t.end = ends[rng.below(5)];
  const std::size_t before = 3 + rng.below(5);
  const std::size_t after = 3 + rng.below(5);
  auto slot = [&]() -> TemplateWord {
    double u = rng.uniform();
    if ((u -= mix.family_fixed) < 0) return {Slot::Fixed, pools.family[rng.below(pools.family.size())]};
    if ((u -= mix.family_pool) < 0) return {Slot::FamilyPool, {}};
    if ((u -= mix.class_pool) < 0) return {Slot::ClassPool, {}};
    if ((u -= mix.bridge) < 0) return {Slot::BridgePool, {}};
    if ((u -= mix.filler_fixed) < 0) return {Slot::Fixed, filler_words()[rng.below(filler_words().size())]};
    return {Slot::Filler, {}};
  };
  for (std::size_t i = 0; i < before; ++i) t.words.push_back(slot());
  t.words.push_back({Slot::Term, {}});
  for (std::size_t i = 0; i < after; ++i) t.words.push_back(slot());
  return t;
}

inline Template make_neutral_template(const std::vector<std::string>& forum_pool, SplitRng& rng) {
  Template t;
  t.end = rng.chance(0.8) ? '.' : '?';
  const std::size_t before = 2 + rng.below(4);
  const std::size_t after = 2 + rng.below(4);
  auto slot = [&]() -> TemplateWord {
    const double u = rng.uniform();
    if (u < 0.45) return {Slot::Fixed, forum_pool[rng.below(forum_pool.size())]};
    if (u < 0.65) return {Slot::FamilyPool, {}};
    if (u < 0.85) return {Slot::Fixed, filler_words()[rng.below(filler_words().size())]};
    return {Slot::Filler, {}};
  };
  for (std::size_t i = 0; i < before; ++i) t.words.push_back(slot());
  t.words.push_back({Slot::Term, {}});
  for (std::size_t i = 0; i < after; ++i) t.words.push_back(slot());
  return t;
}

struct TemplateFamily {
  Pools pools;
  std::vector<Template> templates;
};

}  // namespace synth_detail

inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  using namespace synth_detail;
  spec.validate();
  SplitRng rng(spec.seed);
  WordMaker maker(rng);
  SyntheticData data;

  auto make_pool = [&](std::size_t n) {
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < n; ++i) pool.push_back(maker.make(2, 3));
    return pool;
  };

  // Vocabulary pools and templates.
  const SlotMix mix{spec.slot_family_fixed, spec.slot_family_pool, spec.slot_class_pool, spec.slot_bridge,
                    spec.slot_filler_fixed};
  const auto substance_shared = make_pool(spec.class_pool_size);
  const auto effect_shared = make_pool(spec.class_pool_size);
  const std::size_t nbridge = std::max(spec.substance_families, spec.effect_families);
  std::vector<std::vector<std::string>> bridges;
  for (std::size_t b = 0; b < nbridge; ++b) bridges.push_back(make_pool(spec.bridge_pool_size));

  // Substance family f shares its bridge pool with effect family (E - 1 - f) mod E,
  // so early-learned effect families look like late substance families.
  auto make_families = [&](std::size_t nfam, const std::vector<std::string>& shared, bool substance) {
    std::vector<TemplateFamily> fams(nfam);
    for (std::size_t f = 0; f < nfam; ++f) {
      fams[f].pools.family = make_pool(spec.family_pool_size);
      fams[f].pools.class_shared = shared;
      const std::size_t b = substance ? (spec.effect_families - 1 - (f % spec.effect_families)) : f;
      fams[f].pools.bridge = bridges[b % nbridge];
      for (std::size_t t = 0; t < spec.templates_per_family; ++t) {
        fams[f].templates.push_back(make_template(fams[f].pools, mix, rng));
      }
    }
    return fams;
  };
  const auto substance_fams = make_families(spec.substance_families, substance_shared, true);
  const auto effect_fams = make_families(spec.effect_families, effect_shared, false);

  // Class-wide templates draw their cue words from the class-shared pool.
  auto make_shared = [&](const std::vector<std::string>& shared, const std::vector<std::string>& bridge) {
    TemplateFamily fam;
    fam.pools.family = shared;
    fam.pools.class_shared = shared;
    fam.pools.bridge = bridge;
    for (std::size_t t = 0; t < spec.templates_per_family; ++t) fam.templates.push_back(make_template(fam.pools, mix, rng));
    return fam;
  };
  const auto substance_common = make_shared(substance_shared, substance_shared);
  const auto effect_common = make_shared(effect_shared, effect_shared);

  TemplateFamily neutral_fam;
  neutral_fam.pools.family = make_pool(spec.family_pool_size);
  const auto forum_fixed = make_pool(spec.family_pool_size);
  for (std::size_t t = 0; t < spec.templates_per_family * 2; ++t) {
    neutral_fam.templates.push_back(make_neutral_template(forum_fixed, rng));
  }

  // Planted terms.
  auto plant = [&](std::size_t n, Label label, std::size_t nfam, bool allow_multi) {
    std::vector<PlantedTerm> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
      terms[i].label = label;
      terms[i].family = nfam ? i % nfam : 0;
      if (allow_multi && rng.chance(spec.multi_token_fraction)) {
        terms[i].surface = maker.make(1, 2) + " " + maker.make(2, 3);
      } else {
        terms[i].surface = maker.make(2, 4);
      }
    }
    return terms;
  };
  data.substances = plant(spec.n_substances, Label::Substance, spec.substance_families, true);
  data.effects = plant(spec.n_effects, Label::Effect, spec.effect_families, false);
  data.neutral = plant(spec.n_neutral, Label::Unassigned, 0, false);
  for (auto& t : data.neutral) {
    t.confusable = rng.chance(spec.confusable_neutral_fraction);
    if (t.confusable) t.family = rng.below(spec.substance_families + spec.effect_families);
  }

  const ZipfSampler substance_zipf(spec.n_substances, spec.zipf_exponent);
  const ZipfSampler effect_zipf(spec.n_effects, spec.zipf_exponent);
  const ZipfSampler neutral_zipf(spec.n_neutral, spec.zipf_exponent);
  const ZipfSampler pool_zipf(spec.family_pool_size, spec.pool_zipf_exponent);
  const ZipfSampler small_pool_zipf(std::min(spec.class_pool_size, spec.bridge_pool_size), 1.0);
  const ZipfSampler filler_zipf(filler_words().size(), 1.0);

  // Co-mention matrix: three distinct effects per substance, popular effects more likely.
  static constexpr std::array<double, 3> kLinkWeights = {0.45, 0.33, 0.22};
  data.link_weights.resize(spec.n_substances);
  for (std::size_t s = 0; s < spec.n_substances; ++s) {
    std::vector<std::size_t> chosen;
    while (chosen.size() < 3) {
      const std::size_t e = effect_zipf(rng);
      if (std::find(chosen.begin(), chosen.end(), e) == chosen.end()) chosen.push_back(e);
    }
    for (std::size_t k = 0; k < 3; ++k) data.link_weights[s].emplace_back(chosen[k], kLinkWeights[k]);
  }

  auto render = [&](const TemplateFamily& fam, const Template& tpl, const std::string& surface) {
    std::string out;
    bool first = true;
    for (const auto& tw : tpl.words) {
      std::string w;
      switch (tw.slot) {
        case Slot::Term:
          w = surface;
          break;
        case Slot::Fixed:
          w = tw.word;
          break;
        case Slot::FamilyPool:
          w = pick(fam.pools.family, pool_zipf, rng);
          break;
        case Slot::ClassPool:
          w = pick(fam.pools.class_shared.empty() ? fam.pools.family : fam.pools.class_shared, small_pool_zipf, rng);
          break;
        case Slot::BridgePool:
          w = pick(fam.pools.bridge.empty() ? fam.pools.family : fam.pools.bridge, small_pool_zipf, rng);
          break;
        case Slot::Filler:
          w = pick(filler_words(), filler_zipf, rng);
          break;
      }
      if (!first) out += ' ';
      if (first && !w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
      out += w;
      first = false;
    }
    out += tpl.end;
    return out;
  };

  auto class_sentence = [&](const PlantedTerm& term) {
    const bool substance = term.label == Label::Substance;
    if (rng.chance(spec.noise_rate)) {
      // wrong-class template
      const auto& other = substance ? effect_fams : substance_fams;
      const auto& fam = other[rng.below(other.size())];
      return render(fam, fam.templates[rng.below(fam.templates.size())], term.surface);
    }
    if (rng.chance(spec.shared_template_rate)) {
      const auto& fam = substance ? substance_common : effect_common;
      return render(fam, fam.templates[rng.below(fam.templates.size())], term.surface);
    }
    const auto& fam = (substance ? substance_fams : effect_fams)[term.family];
    return render(fam, fam.templates[rng.below(fam.templates.size())], term.surface);
  };

  auto neutral_sentence = [&](const PlantedTerm& term) {
    if (term.confusable && rng.chance(spec.confusable_rate)) {
      const bool substance = term.family < spec.substance_families;
      const auto& fam = substance ? substance_fams[term.family] : effect_fams[term.family - spec.substance_families];
      return render(fam, fam.templates[rng.below(fam.templates.size())], term.surface);
    }
    return render(neutral_fam, neutral_fam.templates[rng.below(neutral_fam.templates.size())], term.surface);
  };

  auto filler_sentence = [&](const std::vector<std::string>& extra) {
    const std::size_t n = 5 + rng.below(8);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      std::string w = (!extra.empty() && rng.chance(0.3)) ? extra[rng.below(extra.size())]
                                                          : pick(filler_words(), filler_zipf, rng);
      if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      if (i) out += ' ';
      out += w;
    }
    out += '.';
    return out;
  };

  auto timestamp = [](std::size_t i) {
    // one post every 7 minutes starting 2015-01-01T00:00:00Z
    const std::size_t minutes = i * 7;
    std::size_t day = minutes / (24 * 60);
    const std::size_t hh = (minutes / 60) % 24, mm = minutes % 60;
    static const int month_days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int year = 2015, month = 0;
    for (;;) {
      const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
      const std::size_t len = static_cast<std::size_t>(month_days[month] + (month == 1 && leap ? 1 : 0));
      if (day < len) break;
      day -= len;
      if (++month == 12) {
        month = 0;
        ++year;
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02zuT%02zu:%02zu:00Z", year, month + 1, day + 1, hh, mm);
    return std::string(buf);
  };

  auto id = [](char prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%07zu", prefix, i);
    return std::string(buf);
  };

  std::vector<std::string> sentences;
  for (std::size_t p = 0; p < spec.n_posts; ++p) {
    sentences.clear();
    auto mention = [&](PlantedTerm& term, std::string sentence) {
      term.posts.insert(p);
      sentences.push_back(std::move(sentence));
    };
    if (!rng.chance(spec.chat_post_rate)) {
      const std::size_t s = substance_zipf(rng);
      mention(data.substances[s], class_sentence(data.substances[s]));
      if (rng.chance(0.3)) mention(data.substances[s], class_sentence(data.substances[s]));
      const std::size_t n_effects = 1 + rng.below(2);
      for (std::size_t k = 0; k < n_effects; ++k) {
        std::size_t e;
        if (rng.chance(spec.linked_effect_rate)) {
          const double u = rng.uniform();
          double acc = 0.0;
          e = data.link_weights[s].back().first;
          for (const auto& [eff, w] : data.link_weights[s]) {
            acc += w;
            if (u < acc) {
              e = eff;
              break;
            }
          }
        } else {
          e = effect_zipf(rng);
        }
        mention(data.effects[e], class_sentence(data.effects[e]));
      }
      if (rng.chance(spec.second_substance_rate)) {
        const std::size_t s2 = substance_zipf(rng);
        mention(data.substances[s2], class_sentence(data.substances[s2]));
      }
    }
    if (rng.chance(0.5)) {
      const std::size_t n = neutral_zipf(rng);
      mention(data.neutral[n], neutral_sentence(data.neutral[n]));
    }
    const std::size_t n_filler = 1 + rng.below(2);
    for (std::size_t k = 0; k < n_filler; ++k) sentences.push_back(filler_sentence({}));
    for (std::size_t i = sentences.size(); i > 1; --i) std::swap(sentences[i - 1], sentences[rng.below(i)]);

    Post post;
    post.post_id = id('p', p);
    post.thread_id = id('t', p / 20);
    post.user_id = id('u', rng.below(500));
    post.timestamp = timestamp(p);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (i) post.text += ' ';
      post.text += sentences[i];
    }
    data.domain.add(std::move(post));
  }

  for (std::size_t p = 0; p < spec.n_background_posts; ++p) {
    Post post;
    post.post_id = id('b', p);
    post.thread_id = id('t', p / 20);
    post.user_id = id('u', rng.below(500));
    post.timestamp = timestamp(p);
    const std::size_t n = 2 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) post.text += ' ';
      post.text += filler_sentence(offtopic_words());
    }
    data.background.add(std::move(post));
  }
  return data;
}

// Replaces the surface strings of planted terms; used to build surface-swapped
// twins of a corpus. Both maps must be applied on whole tokens.
inline std::string swap_tokens(const std::string& text, const std::string& a, const std::string& b) {
  std::string out;
  const auto toks = dagon::text::tokenize(text);
  std::size_t cursor = 0;
  for (const auto& t : toks) {
    if (t.norm != a && t.norm != b) continue;
    out.append(text, cursor, t.byte_begin - cursor);
    out += t.norm == a ? b : a;
    cursor = t.byte_end;
  }
  out.append(text, cursor, std::string::npos);
  return out;
}

}  // namespace dagon
