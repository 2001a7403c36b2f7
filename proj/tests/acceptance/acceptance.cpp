// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <unistd.h>

#include "dagon/dagon.hpp"

namespace {

using namespace dagon;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) { return format_fixed(v, 3); }

// ---------------------------------------------------------------------------
// 1. Metric formulas against reference (recall, precision, F1) rows.

struct ReferenceRow {
  const char* table;
  const char* row;
  double recall, precision, f1;
};

const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows = {
      {"2", "1 seed", 0.502, 0.649, 0.566},   {"2", "2 seeds", 0.576, 0.734, 0.645},
      {"2", "3 seeds", 0.650, 0.827, 0.728},  {"2", "4 seeds", 0.769, 0.891, 0.826},
      {"2", "5 seeds", 0.823, 0.909, 0.864},  {"2", "6 seeds", 0.832, 0.926, 0.876},
      {"3", "1 seed", 0.502, 0.502, 0.502},   {"3", "2 seeds", 0.576, 0.563, 0.569},
      {"3", "3 seeds", 0.650, 0.628, 0.639},  {"3", "4 seeds", 0.769, 0.694, 0.730},
      {"3", "5 seeds", 0.823, 0.723, 0.770},  {"3", "6 seeds", 0.832, 0.733, 0.779},
      {"4", "5 seeds 0.75", 0.607, 0.755, 0.673}, {"4", "5 seeds 0.8", 0.508, 0.787, 0.618},
      {"4", "10 seeds 0.75", 0.759, 0.852, 0.803}, {"4", "10 seeds 0.8", 0.654, 0.889, 0.754},
      {"4", "15 seeds 0.75", 0.811, 0.837, 0.824}, {"4", "15 seeds 0.8", 0.705, 0.874, 0.781},
      {"4", "20 seeds 0.75", 0.833, 0.854, 0.843}, {"4", "20 seeds 0.8", 0.753, 0.866, 0.805},
      {"5", "100", 0.437, 0.709, 0.541},      {"5", "1000", 0.675, 0.802, 0.733},
      {"5", "2000", 0.742, 0.830, 0.784},     {"5", "3000", 0.759, 0.852, 0.803},
      {"5", "4000", 0.769, 0.838, 0.802},     {"5", "5000", 0.817, 0.867, 0.841},
      {"5", "6000", 0.831, 0.851, 0.840},     {"6", "10", 0.763, 0.758, 0.760},
      {"6", "50", 0.746, 0.815, 0.779},       {"6", "100", 0.759, 0.852, 0.803},
      {"6", "150", 0.763, 0.852, 0.805},      {"6", "200", 0.753, 0.854, 0.800},
      {"6", "300", 0.759, 0.852, 0.803},
  };
  return rows;
}

// Smallest counts whose precision and recall land within 5e-5 of the row.
struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

Counts realize(double recall, double precision) {
  for (std::size_t tp = 1; tp < 100000; ++tp) {
    const auto fp = static_cast<std::size_t>(std::llround(tp / precision - tp));
    const auto fn = static_cast<std::size_t>(std::llround(tp / recall - tp));
    const double p = static_cast<double>(tp) / (tp + fp);
    const double r = static_cast<double>(tp) / (tp + fn);
    if (std::abs(p - precision) < 5e-5 && std::abs(r - recall) < 5e-5) return {tp, fp, fn};
  }
  return {};
}

// Decisions and gold set realizing the counts, spread over both classes and a rest set.
std::pair<std::vector<TermDecision>, GoldSet> build_case(const Counts& c) {
  std::vector<TermDecision> ds;
  GoldSet gold;
  std::size_t id = 0;
  auto term = [&] { return "t" + std::to_string(id++); };
  for (std::size_t i = 0; i < c.tp; ++i) {
    const bool s = i % 2 == 0;
    TermDecision d;
    d.term = term();
    d.label = s ? Label::Substance : Label::Effect;
    (s ? gold.substances : gold.effects).insert(d.term);
    ds.push_back(d);
  }
  // False positives: alternately rest terms and wrong-class terms; each wrong-class
  // term also yields a false negative.
  std::size_t fn_left = c.fn;
  for (std::size_t i = 0; i < c.fp; ++i) {
    TermDecision d;
    d.term = term();
    d.label = Label::Substance;
    if (i % 2 == 1 && fn_left > 0) {
      gold.effects.insert(d.term);
      --fn_left;
    } else {
      gold.rest.insert(d.term);
    }
    ds.push_back(d);
  }
  for (std::size_t i = 0; i < fn_left; ++i) {
    TermDecision d;
    d.term = term();
    (i % 2 ? gold.substances : gold.effects).insert(d.term);
    ds.push_back(d);
  }
  return {ds, gold};
}

Outcome criterion1() {
  std::size_t ok = 0;
  double worst = 0.0;
  std::string bad;
  for (const auto& row : reference_rows()) {
    const Counts c = realize(row.recall, row.precision);
    const auto [ds, gold] = build_case(c);
    const auto m = micro_prf(ds, gold);
    const double err = std::abs(m.f1 - row.f1);
    worst = std::max(worst, err);
    const bool counts_match = m.tp == c.tp && m.fp == c.fp && m.fn == c.fn;
    if (c.tp > 0 && counts_match && err <= 0.001) {
      ++ok;
    } else {
      bad += std::string(" table ") + row.table + " row " + row.row + ";";
    }
  }
  const auto n = reference_rows().size();
  return {ok == n, std::to_string(ok) + "/" + std::to_string(n) + " rows within 0.001, max |dF1| " +
                       format_fixed(worst, 5) + bad};
}

// ---------------------------------------------------------------------------
// 2. Voting rule against an integer-arithmetic oracle.

struct VoteKind {
  Label label;
  int twentieths;  // confidence = twentieths / 20
};

struct VoteCheck {
  std::vector<VoteKind> kinds;
  std::size_t min_n = 0, max_n = 0;
};

struct VoteStats {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
};

void enumerate_votes(const VoteCheck& check, VoteStats& stats) {
  static const std::array<int, 2> theta_p = {15, 16};          // 0.75, 0.8 in twentieths
  static const std::array<int, 3> theta_c = {60, 75, 80};      // percent
  std::vector<ContextPrediction> preds;
  std::vector<std::size_t> kind_of;

  auto check_current = [&] {
    for (int tp : theta_p) {
      std::size_t s = 0, e = 0;
      for (auto k : kind_of) {
        if (check.kinds[k].twentieths >= tp) (check.kinds[k].label == Label::Substance ? s : e)++;
      }
      for (int tc : theta_c) {
        VoteConfig cfg;
        cfg.theta_p = tp / 20.0;
        cfg.theta_c = tc / 100.0;
        Label want = Label::Unassigned;
        const std::size_t n = s + e, top = std::max(s, e);
        if (n > 0 && s != e && top * 100 >= static_cast<std::size_t>(tc) * n) {
          want = s > e ? Label::Substance : Label::Effect;
        }
        const double frac = n ? static_cast<double>(top) / static_cast<double>(n) : 0.0;
        const auto got = decide("x", preds, cfg);
        ++stats.cases;
        if (got.label != want || got.votes_substance != s || got.votes_effect != e || got.n_retained != n ||
            got.n_fetched != preds.size() || got.winning_fraction != frac) {
          ++stats.mismatches;
        }
      }
    }
  };

  std::function<void(std::size_t)> rec = [&](std::size_t first) {
    if (preds.size() >= check.min_n) check_current();
    if (preds.size() == check.max_n) return;
    for (std::size_t k = first; k < check.kinds.size(); ++k) {
      const auto& kind = check.kinds[k];
      ContextPrediction p;
      p.label = kind.label;
      p.confidence = kind.twentieths / 20.0;
      p.substance_probability = kind.label == Label::Substance ? p.confidence : 1.0 - p.confidence;
      preds.push_back(p);
      kind_of.push_back(k);
      rec(k);
      preds.pop_back();
      kind_of.pop_back();
    }
  };
  rec(0);
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  VoteStats stats;
  // Every multiset over the full grid (confidence 0.50..1.00) up to 9 contexts.
  VoteCheck full;
  for (Label l : {Label::Substance, Label::Effect}) {
    for (int t = 10; t <= 20; ++t) full.kinds.push_back({l, t});
  }
  full.max_n = 9;
  enumerate_votes(full, stats);
  // 10 to 12 contexts: grid values at and beside both thresholds plus the extremes.
  VoteCheck large;
  for (Label l : {Label::Substance, Label::Effect}) {
    for (int t : {10, 14, 15, 16, 17, 20}) large.kinds.push_back({l, t});
  }
  large.min_n = 10;
  large.max_n = 12;
  enumerate_votes(large, stats);
  const double secs = seconds_since(t0);
  return {stats.mismatches == 0 && secs < 10.0,
          std::to_string(stats.cases - stats.mismatches) + "/" + std::to_string(stats.cases) +
              " vote patterns match, " + format_fixed(secs, 2) + " s"};
}

// ---------------------------------------------------------------------------
// Shared synthetic corpus for criteria 3, 4 and the classify_term cross-check.

struct Synthetic {
  SyntheticData data = generate_synthetic(SyntheticSpec{});
  Experiment experiment{data.domain, data.background, data.substance_seeds(), data.effect_seeds(), data.gold(),
                        TerminologyConfig{}};
};

Outcome criterion2_pipeline(const Synthetic& syn) {
  // classify_term applies the same rule to model output.
  ExperimentSettings s;
  const auto model = syn.experiment.train(s.seeds_per_class, s.contexts_per_seed, s);
  const auto terms = syn.experiment.evaluation_terms(model, true);
  std::size_t ok = 0;
  for (const auto& t : terms) {
    const auto preds = term_predictions(t, model, syn.experiment.index(), syn.data.domain, s.context, 100);
    const auto a = decide(t, preds, s.vote);
    const auto b = classify_term(t, model, syn.experiment.index(), syn.data.domain, s.context, s.vote);
    ok += a == b;
  }
  return {ok == terms.size(), std::to_string(ok) + "/" + std::to_string(terms.size()) +
                                  " synthetic terms agree with the rule on their predictions"};
}

Outcome criterion3(const Synthetic& syn) {
  const auto t0 = Clock::now();
  const Experiment& ex = syn.experiment;
  ExperimentSettings s;  // 6 seeds, theta_c 0.6, two-class scoring
  const auto curve = ex.sweep_seeds(6, s);
  bool a = false, b = curve.size() == 6;
  std::string d = "F1 by seeds:";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    d += " " + fmt(curve[i].metrics.f1);
    if (i > 0 && !(curve[i].metrics.f1 > curve[i - 1].metrics.f1)) b = false;
  }
  if (curve.size() == 6) {
    a = curve.back().metrics.f1 >= 0.85;
    b = b && curve.back().metrics.f1 - curve.front().metrics.f1 >= 0.15;
  }

  auto base = ex.predict(ex.train(s.seeds_per_class, s.contexts_per_seed, s), s.vote.contexts_per_term, s);
  ex.decide_and_score(base, s.vote, false);
  const double p_two = base.metrics.precision;
  ex.decide_and_score(base, s.vote, true);
  const double p_rest = base.metrics.precision;
  const bool c = p_two - p_rest >= 0.05;

  VoteConfig strict = s.vote;
  ex.decide_and_score(base, s.vote, false);
  const auto m06 = base.metrics;
  strict.theta_c = 0.8;
  ex.decide_and_score(base, strict, false);
  const auto m08 = base.metrics;
  const bool dd = m08.precision >= m06.precision - 0.02 && m08.recall <= m06.recall;

  const double secs = seconds_since(t0);
  d += std::string(" (a ") + (a ? "ok" : "FAIL") + ", b " + (b ? "ok" : "FAIL") + "); precision two-class " +
       fmt(p_two) + " vs with rest " + fmt(p_rest) + " (c " + (c ? "ok" : "FAIL") + "); theta_c 0.6->0.8 P " +
       fmt(m06.precision) + "->" + fmt(m08.precision) + " R " + fmt(m06.recall) + "->" + fmt(m08.recall) + " (d " +
       (dd ? "ok" : "FAIL") + "); " + format_fixed(secs, 1) + " s";
  return {a && b && c && dd && secs < 300.0, d};
}

Outcome criterion4(const Synthetic& syn) {
  const auto t0 = Clock::now();
  // 10 seeds per class, theta_c 0.75, rest terms scored.
  ExperimentSettings s;
  s.seeds_per_class = 10;
  s.vote.theta_c = 0.75;
  s.include_rest = true;
  const auto per_seed = syn.experiment.sweep_contexts_per_seed({100, 3000}, s);
  const auto per_term = syn.experiment.sweep_contexts_per_term({100, 300}, s);
  const double dr = per_seed[1].metrics.recall - per_seed[0].metrics.recall;
  const double df = std::abs(per_term[1].metrics.f1 - per_term[0].metrics.f1);
  const double secs = seconds_since(t0);
  const bool a = dr >= 0.10, b = df <= 0.03;
  return {a && b && secs < 600.0,
          "recall at 100/3000 contexts per seed " + fmt(per_seed[0].metrics.recall) + "/" +
              fmt(per_seed[1].metrics.recall) + " (+" + fmt(dr) + ", " + (a ? "ok" : "FAIL") +
              "); F1 at 100/300 contexts per term " + fmt(per_term[0].metrics.f1) + "/" + fmt(per_term[1].metrics.f1) +
              " (|d| " + fmt(df) + ", " + (b ? "ok" : "FAIL") + "); " + format_fixed(secs, 1) + " s"};
}

Outcome criterion5() {
  SyntheticSpec spec;
  spec.noise_rate = 0.0;
  const auto data = generate_synthetic(spec);
  // Two single-token substances outside the seed range.
  std::vector<std::string> pick;
  for (std::size_t i = 20; i < data.substances.size() && pick.size() < 2; ++i) {
    if (data.substances[i].surface.find(' ') == std::string::npos) pick.push_back(data.substances[i].surface);
  }
  if (pick.size() < 2) return {false, "no swappable pair"};
  const std::string a = pick[0], b = pick[1];
  Corpus twin(data.domain.name());
  for (auto p : data.domain.posts()) {
    p.text = swap_tokens(p.text, a, b);
    twin.add(std::move(p));
  }
  ExperimentSettings s;
  Experiment e1(data.domain, data.background, data.substance_seeds(), data.effect_seeds(), data.gold(), {});
  Experiment e2(twin, data.background, data.substance_seeds(), data.effect_seeds(), data.gold(), {});
  const auto r1 = e1.run(s);
  const auto r2 = e2.run(s);
  std::map<std::string, TermDecision> twin_decisions;
  for (const auto& d : r2.decisions) twin_decisions[d.term] = d;
  auto swapped = [&](const std::string& t) { return t == a ? b : t == b ? a : t; };
  std::size_t differ = 0;
  for (const auto& d : r1.decisions) {
    const auto it = twin_decisions.find(swapped(d.term));
    if (it == twin_decisions.end()) {
      ++differ;
      continue;
    }
    TermDecision x = it->second;
    x.term = d.term;
    differ += !(x == d);
  }
  const bool same_size = r1.decisions.size() == r2.decisions.size();
  return {differ == 0 && same_size, "swapped '" + a + "' and '" + b + "': " + std::to_string(differ) + " of " +
                                        std::to_string(r1.decisions.size()) + " decisions differ"};
}

Outcome criterion6() {
  const auto data = generate_synthetic(SyntheticSpec{});
  std::vector<LexiconEntry> lexicon;
  for (const auto& t : data.substances) lexicon.push_back({t.surface, Label::Substance});
  for (const auto& t : data.effects) lexicon.push_back({t.surface, Label::Effect});
  const auto table = build_links(annotate_posts(data.domain, lexicon), 3);
  std::size_t match = 0;
  for (std::size_t s = 0; s < data.substances.size(); ++s) {
    const auto truth = data.top_effects(s, 3, 3);
    std::vector<std::string> got;
    for (const auto& ec : table.effects_of(data.substances[s].surface)) {
      if (got.size() == 3) break;
      got.push_back(ec.effect);
    }
    match += got == truth;
  }
  const double rate = static_cast<double>(match) / static_cast<double>(data.substances.size());

  Corpus one("example");
  one.add({"p1", "t1", "u1", std::nullopt, "I took heroin yesterday and now I have a terrible headache."});
  const std::vector<LexiconEntry> lx = {{"heroin", Label::Substance}, {"headache", Label::Effect}};
  const auto single = build_links(annotate_posts(one, lx), 1);
  std::size_t links = 0;
  for (const auto& [s, list] : single.links) links += list.size();
  const auto& he = single.effects_of("heroin");
  const bool example_ok = links == 1 && he.size() == 1 && he[0].effect == "headache" && he[0].count == 1;

  return {rate >= 0.95 && example_ok, std::to_string(match) + "/" + std::to_string(data.substances.size()) +
                                          " top-3 lists match the co-mention matrix; single-post example " +
                                          (example_ok ? "gives one link with count 1" : "FAILED")};
}

Outcome criterion7() {
  const auto root = std::filesystem::temp_directory_path() / ("dagon-acceptance-" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root / "synth");
  const auto files = write_synthetic(SyntheticSpec{}, root / "synth");

  auto run = [&](const std::string& name) {
    PipelineConfig cfg;
    cfg.domain_corpus = files.domain.string();
    cfg.background_corpus = files.background.string();
    cfg.seeds_substance = files.seeds_substance.string();
    cfg.seeds_effect = files.seeds_effect.string();
    cfg.gold_rest = files.gold_rest.string();
    cfg.workspace = (root / name).string();
    std::filesystem::create_directories(cfg.workspace);
    Workspace ws(cfg);
    ws.ingest();
    ws.index();
    ws.terms();
    ws.train();
    ws.classify();
    ws.link();
    ws.eval();
    return ws;
  };
  const Workspace w1 = run("run1");
  const Workspace w2 = run("run2");
  std::size_t same = 0;
  std::string detail;
  const std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs = {
      {w1.lexicon_path(), w2.lexicon_path()},
      {w1.links_path(), w2.links_path()},
      {w1.links_summary_path(), w2.links_summary_path()},
      {w1.metrics_path(), w2.metrics_path()},
  };
  for (const auto& [p1, p2] : pairs) {
    const bool eq = read_file(p1) == read_file(p2);
    same += eq;
    detail += " " + p1.filename().string() + (eq ? " identical;" : " DIFFERS;");
  }
  std::filesystem::remove_all(root);
  return {same == pairs.size(), "two pipeline runs:" + detail};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const Outcome& o) {
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  auto guarded = [&](int n, const std::function<Outcome()>& fn) {
    try {
      report(n, fn());
    } catch (const std::exception& e) {
      report(n, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, criterion1);
  const Synthetic syn;
  guarded(2, [&] {
    Outcome exhaustive = criterion2();
    const Outcome pipeline = criterion2_pipeline(syn);
    return Outcome{exhaustive.pass && pipeline.pass, exhaustive.detail + "; " + pipeline.detail};
  });
  guarded(3, [&] { return criterion3(syn); });
  guarded(4, [&] { return criterion4(syn); });
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  return failures == 0 ? 0 : 1;
}
