#include <gtest/gtest.h>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"

namespace dagon {
namespace {

using testing::corpus_of;
using testing::TempDir;

// --- seed selection and idf ---------------------------------------------------

Corpus corpus_with_df(const std::vector<std::pair<std::string, std::size_t>>& dfs, std::size_t total) {
  Corpus c("df");
  for (std::size_t i = 0; i < total; ++i) {
    std::string text = "filler";
    for (const auto& [term, df] : dfs) {
      if (i < df) text += " " + term;
    }
    c.add({"p" + std::to_string(i), "", "", std::nullopt, text});
  }
  return c;
}

TEST(SelectNextSeed, PicksMostFrequentUnusedSeed) {
  const auto idx = Index::build(corpus_with_df({{"mdma", 200}, {"dxm", 50}, {"pcp", 10}}, 300));
  const SeedList seeds{Label::Substance, {"pcp", "dxm", "mdma"}};
  EXPECT_EQ(select_next_seed(seeds, {}, idx), "mdma");
  EXPECT_EQ(select_next_seed(seeds, {"mdma"}, idx), "dxm");
}

TEST(SelectNextSeed, AbsentSeedIsNeverSelected) {
  const auto idx = Index::build(corpus_with_df({{"kratom", 3}}, 5));
  const SeedList seeds{Label::Substance, {"ghostdrug", "kratom"}};
  EXPECT_EQ(select_next_seed(seeds, {}, idx), "kratom");
  EXPECT_THROW(select_next_seed(seeds, {"kratom"}, idx), SeedsAbsentError);
  EXPECT_THROW(select_next_seed(seeds, {"kratom", "ghostdrug"}, idx), SeedsExhaustedError);
}

TEST(SelectNextSeed, OrderEqualsSortByDfThenSurface) {
  std::vector<std::pair<std::string, std::size_t>> dfs;
  std::mt19937 rng(7);
  std::vector<std::string> names;
  for (int i = 0; i < 20; ++i) {
    std::string name = "seed";
    name += static_cast<char>('a' + i);
    dfs.emplace_back(name, 1 + rng() % 12);  // ties are likely
    names.push_back(name);
  }
  const auto idx = Index::build(corpus_with_df(dfs, 20));
  std::sort(dfs.begin(), dfs.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::shuffle(names.begin(), names.end(), rng);
  const SeedList seeds{Label::Effect, names};
  std::set<std::string> used;
  for (const auto& [expected, df] : dfs) {
    const auto got = select_next_seed(seeds, used, idx);
    EXPECT_EQ(got, expected);
    used.insert(got);
  }
}

TEST(Idf, WorkedValues) {
  EXPECT_EQ(idf(10, 10), 0.0);
  EXPECT_NEAR(idf(1000, 1), 6.9078, 5e-5);
  EXPECT_THROW(idf(10, 0), ConfigError);
  EXPECT_THROW(idf(10, 11), ConfigError);
}

TEST(Idf, MatchesArbitraryPrecisionLog) {
  std::mt19937_64 rng(2024);
  mpfr_t n, d, r;
  mpfr_inits2(256, n, d, r, static_cast<mpfr_ptr>(nullptr));
  for (int i = 0; i < 2000; ++i) {
    const std::size_t docs = 1 + rng() % 5'000'000;
    const std::size_t df = 1 + rng() % docs;
    mpfr_set_ui(n, docs, MPFR_RNDN);
    mpfr_set_ui(d, df, MPFR_RNDN);
    mpfr_div(r, n, d, MPFR_RNDN);
    mpfr_log(r, r, MPFR_RNDN);
    const double expected = mpfr_get_d(r, MPFR_RNDN);
    ASSERT_NEAR(idf(docs, df), expected, 1e-12) << docs << "/" << df;
  }
  mpfr_clears(n, d, r, static_cast<mpfr_ptr>(nullptr));
}

TEST(SeedLists, ParseCommentsBlankLinesAndDuplicates) {
  const auto terms = parse_term_list("# substances\nMDMA\n\n  red   pill # slang\nmdma\n");
  EXPECT_EQ(terms, (std::vector<std::string>{"mdma", "red pill"}));
}

TEST(SeedLists, OverlapIsRejected) {
  EXPECT_THROW(check_disjoint({Label::Substance, {"a", "b"}}, {Label::Effect, {"b"}}), ConfigError);
}

// --- features -----------------------------------------------------------------

TEST(Featurize, MaskIsExcludedAndPositionsAdded) {
  Vocabulary v;
  const auto gave = v.add("gave");
  const auto me = v.add("me");
  const auto x = featurize({"p", "CTHULHUFHTAGN gave me", "t"}, v, kDefaultMaskToken);
  std::vector<std::uint32_t> want = {Vocabulary::before_feature(0), Vocabulary::after_feature(2), gave, me};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(x.index, want);
  EXPECT_FALSE(v.find("cthulhufhtagn").has_value());
  EXPECT_NEAR(x.squared_norm(), 1.0, 1e-12);
}

TEST(Featurize, SameTokensGiveSameVector) {
  Vocabulary v;
  v.add("gave");
  v.add("me");
  EXPECT_EQ(featurize({"p", "CTHULHUFHTAGN Gave, ME!", "t"}, v, kDefaultMaskToken),
            featurize({"q", "CTHULHUFHTAGN gave me", "u"}, v, kDefaultMaskToken));
}

TEST(Featurize, OutOfVocabularySnippetIsZero) {
  Vocabulary v;
  v.add("gave");
  EXPECT_TRUE(featurize({"p", "nothing known here CTHULHUFHTAGN", "t"}, v, kDefaultMaskToken).empty());
}

TEST(Featurize, UnitNormOnSyntheticSnippets) {
  const auto& d = testing::default_synthetic();
  const auto& idx = testing::default_experiment().index();
  Vocabulary v;
  const auto snippets = harvest(idx, d.domain, d.substances[3].surface, ContextConfig{});
  for (const auto& s : snippets) {
    for (const auto& w : detail::split_snippet(s.masked_text, kDefaultMaskToken).words) v.add(w);
  }
  for (const auto& s : snippets) EXPECT_NEAR(featurize(s, v, kDefaultMaskToken).squared_norm(), 1.0, 1e-12);
}

TEST(PositionBucket, Boundaries) {
  EXPECT_EQ(position_bucket(0), 0u);
  EXPECT_EQ(position_bucket(3), 3u);
  EXPECT_EQ(position_bucket(4), 4u);
  EXPECT_EQ(position_bucket(5), 4u);
  EXPECT_EQ(position_bucket(8), 5u);
  EXPECT_EQ(position_bucket(9), 6u);
  EXPECT_EQ(position_bucket(1000), 6u);
}

// --- linear SVM ---------------------------------------------------------------

TEST(Svm, GroupWeightsAverageToOneAndBalance) {
  const std::vector<int> ys = {1, 1, 1, -1, -1, -1, -1, -1, -1, -1};
  const std::vector<std::size_t> groups = {0, 0, 1, 2, 2, 2, 2, 2, 3, 3};
  const auto w = group_loss_weights(ys, groups);
  double total = 0.0, pos = 0.0, g0 = 0.0, g1 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    if (ys[i] > 0) pos += w[i];
    if (groups[i] == 0) g0 += w[i];
    if (groups[i] == 1) g1 += w[i];
  }
  EXPECT_NEAR(total / w.size(), 1.0, 1e-12);
  EXPECT_NEAR(pos, total / 2, 1e-12);
  EXPECT_NEAR(g0, g1, 1e-12);
}

TEST(Svm, SeparatesSeparableData) {
  std::vector<SparseVector> xs;
  std::vector<int> ys;
  for (int i = 0; i < 20; ++i) {
    const bool pos = i % 2 == 0;
    xs.push_back({{pos ? 0u : 1u, 2u}, {0.8, 0.6}});
    ys.push_back(pos ? 1 : -1);
  }
  const auto w = train_linear_svm(xs, ys, 3, SvmParams{});
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_GT(ys[i] * xs[i].dot(w), 0.0);
}

TEST(Svm, SingleClassIsRejected) {
  const std::vector<SparseVector> xs = {{{0}, {1.0}}};
  const std::vector<int> ys = {1};
  EXPECT_THROW(train_linear_svm(xs, ys, 1, SvmParams{}), ConfigError);
}

TEST(Sigmoid, SlopeFitIsPositiveOnInformativeMargins) {
  const std::vector<double> m = {2, 1.5, 1, -0.2, -1, -2, 0.3, -1.5};
  const std::vector<int> y = {1, 1, 1, 1, -1, -1, -1, -1};
  EXPECT_GT(fit_sigmoid_slope(m, y), 0.0);
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(-800.0), 0.0, 1e-300);
}

// --- context model ------------------------------------------------------------

TrainingSet templated_training_set() {
  TrainingSet ts;
  const std::vector<std::string> subs = {"snorted a line of CTHULHUFHTAGN at the party",
                                         "my dealer sold me CTHULHUFHTAGN pills",
                                         "dosed CTHULHUFHTAGN and waited an hour"};
  const std::vector<std::string> effs = {"the CTHULHUFHTAGN kept me awake all night",
                                         "woke up with CTHULHUFHTAGN and nausea",
                                         "so much CTHULHUFHTAGN during the comedown"};
  for (int r = 0; r < 4; ++r) {
    for (const auto& s : subs) ts.substance.push_back({"s" + std::to_string(r), s, "sub" + std::to_string(r)});
    for (const auto& e : effs) ts.effect.push_back({"e" + std::to_string(r), e, "eff" + std::to_string(r)});
  }
  ts.substance_seeds = {"sub0", "sub1", "sub2", "sub3"};
  ts.effect_seeds = {"eff0", "eff1", "eff2", "eff3"};
  return ts;
}

TEST(ContextModel, SeparableTemplatesAreLearnedExactly) {
  const auto ts = templated_training_set();
  const auto m = ContextModel::train(ts, TrainingConfig{}, kDefaultMaskToken);
  for (const auto& s : ts.substance) EXPECT_EQ(m.predict(s).label, Label::Substance);
  for (const auto& s : ts.effect) EXPECT_EQ(m.predict(s).label, Label::Effect);
}

TEST(ContextModel, ZeroVectorIsMaximallyUncertain) {
  const auto m = ContextModel::train(templated_training_set(), TrainingConfig{}, kDefaultMaskToken);
  const auto p = m.predict({"x", "entirely unseen vocabulary CTHULHUFHTAGN", ""});
  EXPECT_EQ(p.confidence, 0.5);
  EXPECT_EQ(p.substance_probability, 0.5);
}

TEST(ContextModel, EmptyClassIsFatalAndTinySetWarns) {
  TrainingSet ts;
  ts.substance.push_back({"p", "a CTHULHUFHTAGN b", "x"});
  EXPECT_THROW(ContextModel::train(ts, TrainingConfig{}, kDefaultMaskToken), ConfigError);
  ts.effect.push_back({"q", "c CTHULHUFHTAGN d", "y"});
  const auto m = ContextModel::train(ts, TrainingConfig{}, kDefaultMaskToken);
  EXPECT_FALSE(m.warnings().empty());
}

// Held-out snippets of non-seed planted terms on a noise-free corpus, labelled
// with the class of the template family that produced them.
struct HeldOut {
  std::vector<ContextSnippet> snippets;
  std::vector<Label> labels;
};

const SyntheticData& noise_free() {
  static const SyntheticData data = [] {
    SyntheticSpec spec;
    spec.noise_rate = 0.0;
    spec.substance_families = 1;
    spec.effect_families = 1;
    return generate_synthetic(spec);
  }();
  return data;
}

const Index& noise_free_index() {
  static const Index idx = Index::build(noise_free().domain);
  return idx;
}

HeldOut held_out(const ContextModel& m, std::size_t per_term) {
  HeldOut h;
  std::set<std::string> seeds(m.substance_seeds().begin(), m.substance_seeds().end());
  seeds.insert(m.effect_seeds().begin(), m.effect_seeds().end());
  ContextConfig cfg;
  cfg.max_posts_per_term = per_term;
  for (const auto* list : {&noise_free().substances, &noise_free().effects}) {
    for (const auto& t : *list) {
      if (seeds.count(t.surface)) continue;
      for (auto& s : harvest(noise_free_index(), noise_free().domain, t.surface, cfg)) {
        h.snippets.push_back(std::move(s));
        h.labels.push_back(t.label);
      }
    }
  }
  return h;
}

double accuracy(const ContextModel& m, const HeldOut& h) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < h.snippets.size(); ++i) ok += m.predict(h.snippets[i]).label == h.labels[i];
  return static_cast<double>(ok) / static_cast<double>(h.snippets.size());
}

ContextModel train_noise_free(std::size_t k, std::size_t m_contexts, const TrainingConfig& tc = {}) {
  ContextConfig ctx;
  ctx.max_posts_per_term = m_contexts;
  const auto ts = build_training_set(noise_free_index(), noise_free().domain, noise_free().substance_seeds(),
                                     noise_free().effect_seeds(), k, ctx);
  return ContextModel::train(ts, tc, ctx.mask_token);
}

TEST(ContextModel, HeldOutAccuracyWithThreeSeeds) {
  const auto m = train_noise_free(3, 1000);
  EXPECT_GE(accuracy(m, held_out(m, 20)), 0.95);
}

TEST(ContextModel, AccuracyDoesNotDropAsSeedsAreAdded) {
  double prev = -1.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto m = train_noise_free(k, 1000);
    const double acc = accuracy(m, held_out(m, 10));
    if (prev >= 0.0) EXPECT_GE(acc, prev - 0.02) << "k=" << k;
    prev = acc;
  }
}

TEST(ContextModel, ConfidenceBoundsAndComplement) {
  const auto m = train_noise_free(2, 300);
  const auto h = held_out(m, 5);
  for (const auto& s : h.snippets) {
    const auto p = m.predict(s);
    EXPECT_GE(p.confidence, 0.5);
    EXPECT_LE(p.confidence, 1.0);
    EXPECT_NEAR(p.substance_probability + p.effect_probability(), 1.0, 1e-9);
  }
}

TEST(ContextModel, TrainingIsDeterministic) {
  const auto a = train_noise_free(2, 300);
  const auto b = train_noise_free(2, 300);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(ContextModel, DuplicatedTrainingDataGivesSameModel) {
  ContextConfig ctx;
  ctx.max_posts_per_term = 300;
  const auto ts = build_training_set(noise_free_index(), noise_free().domain, noise_free().substance_seeds(),
                                     noise_free().effect_seeds(), 2, ctx);
  TrainingSet doubled = ts;
  doubled.substance.insert(doubled.substance.end(), ts.substance.begin(), ts.substance.end());
  doubled.effect.insert(doubled.effect.end(), ts.effect.begin(), ts.effect.end());
  const auto a = ContextModel::train(ts, TrainingConfig{}, ctx.mask_token);
  const auto b = ContextModel::train(doubled, TrainingConfig{}, ctx.mask_token);
  const auto h = held_out(a, 5);
  for (const auto& s : h.snippets) EXPECT_EQ(a.predict(s).label, b.predict(s).label);
}

TEST(ContextModel, MaskTokenDoesNotMatter) {
  ContextConfig a_cfg, b_cfg;
  a_cfg.max_posts_per_term = b_cfg.max_posts_per_term = 300;
  b_cfg.mask_token = "QQXJZWV";
  const auto& d = noise_free();
  const auto ta = build_training_set(noise_free_index(), d.domain, d.substance_seeds(), d.effect_seeds(), 2, a_cfg);
  const auto tb = build_training_set(noise_free_index(), d.domain, d.substance_seeds(), d.effect_seeds(), 2, b_cfg);
  const auto a = ContextModel::train(ta, TrainingConfig{}, a_cfg.mask_token);
  const auto b = ContextModel::train(tb, TrainingConfig{}, b_cfg.mask_token);
  EXPECT_TRUE(a.vocabulary() == b.vocabulary());
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.calibration_slope(), b.calibration_slope());
}

TEST(ContextModel, SaveLoadRoundTrip) {
  TempDir dir;
  auto m = train_noise_free(2, 300);
  m.set_config_hash("abc123");
  m.save(dir / "model.json");
  const auto loaded = ContextModel::load(dir / "model.json");
  EXPECT_EQ(loaded.config_hash(), "abc123");
  EXPECT_EQ(loaded.to_json().dump(), m.to_json().dump());
  const auto h = held_out(m, 5);
  for (const auto& s : h.snippets) {
    EXPECT_EQ(loaded.predict(s).substance_probability, m.predict(s).substance_probability);
  }
}

TEST(ContextModel, UnsupportedVersionIsRejected) {
  auto j = train_noise_free(1, 50).to_json();
  j["version"] = 99;
  EXPECT_THROW(ContextModel::from_json(j), FormatError);
  j["version"] = 1;
  j["weights"].push_back(0.0);
  EXPECT_THROW(ContextModel::from_json(j), FormatError);
}

TEST(BuildTrainingSet, UsesSeedsInDfOrderAndWarnsWhenShort) {
  const auto& d = noise_free();
  const SeedList few{Label::Effect, {d.effects[0].surface, d.effects[1].surface}};
  const auto ts = build_training_set(noise_free_index(), d.domain, d.substance_seeds(), few, 4, ContextConfig{});
  EXPECT_EQ(ts.substance_seeds.size(), 4u);
  EXPECT_EQ(ts.effect_seeds.size(), 2u);
  EXPECT_FALSE(ts.warnings.empty());
  for (std::size_t i = 1; i < ts.substance_seeds.size(); ++i) {
    EXPECT_GE(noise_free_index().term_document_frequency(ts.substance_seeds[i - 1]),
              noise_free_index().term_document_frequency(ts.substance_seeds[i]));
  }
}

}  // namespace
}  // namespace dagon
