#pragma once

// Workspace-based pipeline: each stage reads the artifacts of earlier stages
// from a directory and writes its own. Every artifact starts with '#'
// header lines carrying the stage name, the stage's config hash, the hashes
// of the inputs it was built from, and the effective configuration.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dagon/context.hpp"
#include "dagon/corpus.hpp"
#include "dagon/ctx_model.hpp"
#include "dagon/error.hpp"
#include "dagon/eval.hpp"
#include "dagon/experiment.hpp"
#include "dagon/index.hpp"
#include "dagon/io.hpp"
#include "dagon/linker.hpp"
#include "dagon/seeds.hpp"
#include "dagon/synthetic.hpp"
#include "dagon/term_classifier.hpp"
#include "dagon/terminology.hpp"

namespace dagon {

struct PipelineConfig {
  std::string domain_corpus;
  std::string background_corpus;
  std::string seeds_substance;
  std::string seeds_effect;
  std::string gold_rest;  // optional
  std::string workspace = "dagon-work";

  ContextConfig context;
  std::size_t contexts_per_seed = 3000;
  std::size_t seeds_per_class = 6;
  VoteConfig vote;
  TerminologyConfig terms;
  TrainingConfig training;
  std::size_t min_support = 3;

  void validate() const {
    context.validate();
    vote.validate();
    terms.validate();
    if (contexts_per_seed < 1) throw ConfigError("contexts_per_seed must be >= 1");
    if (seeds_per_class < 1) throw ConfigError("seeds_per_class must be >= 1");
    if (min_support < 1) throw ConfigError("min_support must be >= 1");
    if (!(training.C > 0.0)) throw ConfigError("svm_c must be > 0");
    if (training.calibration_folds < 2) throw ConfigError("calibration_folds must be >= 2");
    if (training.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
    if (!(training.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  }

  // Flat key/value form used by config files and artifact headers. The
  // workspace location is not part of what produces an artifact, so it is
  // only included on request.
  nlohmann::ordered_json to_json(bool include_workspace = false) const {
    nlohmann::ordered_json j;
    j["domain_corpus"] = domain_corpus;
    j["background_corpus"] = background_corpus;
    j["seeds_substance"] = seeds_substance;
    j["seeds_effect"] = seeds_effect;
    j["gold_rest"] = gold_rest;
    if (include_workspace) j["workspace"] = workspace;
    j["window_chars"] = context.window_chars;
    j["mask_token"] = context.mask_token;
    j["contexts_per_seed"] = contexts_per_seed;
    j["contexts_per_term"] = vote.contexts_per_term;
    j["theta_p"] = vote.theta_p;
    j["theta_c"] = vote.theta_c;
    j["inclusive_theta_c"] = vote.inclusive_theta_c;
    j["min_support"] = min_support;
    j["seeds_per_class"] = seeds_per_class;
    j["rng_seed"] = training.rng_seed;
    j["min_df"] = terms.min_df;
    j["max_candidates"] = terms.max_candidates;
    j["smoothing"] = terms.smoothing;
    j["svm_c"] = training.C;
    j["calibration_folds"] = training.calibration_folds;
    j["max_epochs"] = training.max_epochs;
    j["tolerance"] = training.tolerance;
    j["balance_seeds"] = training.balance_seeds;
    return j;
  }

  // Applies the keys present in `j` on top of `*this`. Unknown keys are errors.
  void merge_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    try {
      for (const auto& [key, v] : j.items()) {
        if (key == "domain_corpus") domain_corpus = v.get<std::string>();
        else if (key == "background_corpus") background_corpus = v.get<std::string>();
        else if (key == "seeds_substance") seeds_substance = v.get<std::string>();
        else if (key == "seeds_effect") seeds_effect = v.get<std::string>();
        else if (key == "gold_rest") gold_rest = v.get<std::string>();
        else if (key == "workspace") workspace = v.get<std::string>();
        else if (key == "window_chars") context.window_chars = v.get<std::size_t>();
        else if (key == "mask_token") context.mask_token = v.get<std::string>();
        else if (key == "contexts_per_seed") contexts_per_seed = v.get<std::size_t>();
        else if (key == "contexts_per_term") vote.contexts_per_term = v.get<std::size_t>();
        else if (key == "theta_p") vote.theta_p = v.get<double>();
        else if (key == "theta_c") vote.theta_c = v.get<double>();
        else if (key == "inclusive_theta_c") vote.inclusive_theta_c = v.get<bool>();
        else if (key == "min_support") min_support = v.get<std::size_t>();
        else if (key == "seeds_per_class") seeds_per_class = v.get<std::size_t>();
        else if (key == "rng_seed") training.rng_seed = v.get<std::uint64_t>();
        else if (key == "min_df") terms.min_df = v.get<std::size_t>();
        else if (key == "max_candidates") terms.max_candidates = v.get<std::size_t>();
        else if (key == "smoothing") terms.smoothing = v.get<double>();
        else if (key == "svm_c") training.C = v.get<double>();
        else if (key == "calibration_folds") training.calibration_folds = v.get<std::size_t>();
        else if (key == "max_epochs") training.max_epochs = v.get<std::size_t>();
        else if (key == "tolerance") training.tolerance = v.get<double>();
        else if (key == "balance_seeds") training.balance_seeds = v.get<bool>();
        else throw ConfigError("unknown configuration key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad configuration value: ") + e.what());
    }
  }

  static PipelineConfig load(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    PipelineConfig cfg;
    cfg.merge_json(j);
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// Artifact framing

struct ArtifactHeader {
  std::string stage;
  std::string config_hash;
  std::map<std::string, std::string> inputs;  // upstream stage -> hash
  std::string config;                         // compact JSON
};

inline std::string render_header(const ArtifactHeader& h) {
  std::string out = "# dagon-artifact: " + h.stage + "\n# config-hash: " + h.config_hash + "\n";
  for (const auto& [stage, hash] : h.inputs) out += "# input-" + stage + ": " + hash + "\n";
  out += "# config: " + h.config + "\n";
  return out;
}

struct Artifact {
  ArtifactHeader header;
  std::string body;
};

inline Artifact parse_artifact(std::string data, const std::filesystem::path& path) {
  Artifact a;
  std::size_t pos = 0;
  while (pos < data.size() && data.compare(pos, 2, "# ") == 0) {
    const auto eol = data.find('\n', pos);
    if (eol == std::string::npos) throw FormatError(path.string() + ": unterminated header line");
    const std::string_view line(data.data() + pos + 2, eol - pos - 2);
    const auto colon = line.find(": ");
    if (colon != std::string_view::npos) {
      const auto key = line.substr(0, colon);
      const auto value = std::string(line.substr(colon + 2));
      if (key == "dagon-artifact") a.header.stage = value;
      else if (key == "config-hash") a.header.config_hash = value;
      else if (key == "config") a.header.config = value;
      else if (key.substr(0, 6) == "input-") a.header.inputs[std::string(key.substr(6))] = value;
    }
    pos = eol + 1;
  }
  if (a.header.stage.empty() || a.header.config_hash.empty()) {
    throw FormatError(path.string() + " is not a dagon artifact (missing header)");
  }
  a.body = data.substr(pos);
  return a;
}

// Hash of a stage: its own settings plus the hashes of its inputs.
inline std::string stage_hash(std::string_view stage, const nlohmann::ordered_json& settings,
                              const std::map<std::string, std::string>& inputs) {
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["settings"] = settings;
  j["inputs"] = inputs;
  return hex64(fnv1a(j.dump()));
}

// ---------------------------------------------------------------------------
// Workspace

struct IngestSummary {
  std::size_t domain_posts = 0, domain_skipped = 0;
  std::size_t background_posts = 0, background_skipped = 0;
};

struct SyntheticFiles {
  std::filesystem::path domain, background, seeds_substance, seeds_effect, gold_rest, truth_links;
};

class Workspace {
 public:
  explicit Workspace(PipelineConfig cfg) : cfg_(std::move(cfg)), dir_(cfg_.workspace) { cfg_.validate(); }

  const PipelineConfig& config() const { return cfg_; }
  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path domain_path() const { return dir_ / "domain.jsonl"; }
  std::filesystem::path background_path() const { return dir_ / "background.jsonl"; }
  std::filesystem::path index_path() const { return dir_ / "index.bin"; }
  std::filesystem::path candidates_path() const { return dir_ / "candidates.tsv"; }
  std::filesystem::path model_path() const { return dir_ / "model.json"; }
  std::filesystem::path lexicon_path() const { return dir_ / "lexicon.tsv"; }
  std::filesystem::path links_path() const { return dir_ / "links.tsv"; }
  std::filesystem::path links_summary_path() const { return dir_ / "links_summary.tsv"; }
  std::filesystem::path metrics_path() const { return dir_ / "metrics.csv"; }
  std::filesystem::path sweep_path(std::string_view param) const {
    return dir_ / ("sweep_" + std::string(param) + ".csv");
  }

  // -- stage hashes --------------------------------------------------------

  std::string ingest_hash() const {
    return stage_hash("ingest", {{"domain_corpus", cfg_.domain_corpus}, {"background_corpus", cfg_.background_corpus}},
                      {});
  }
  std::string index_hash() const { return stage_hash("index", nlohmann::ordered_json::object(), {{"ingest", ingest_hash()}}); }
  std::string terms_hash() const {
    return stage_hash("terms",
                      {{"min_df", cfg_.terms.min_df},
                       {"max_candidates", cfg_.terms.max_candidates},
                       {"smoothing", cfg_.terms.smoothing}},
                      {{"ingest", ingest_hash()}});
  }
  std::string train_hash() const {
    return stage_hash("train",
                      {{"seeds_substance", file_digest(cfg_.seeds_substance)},
                       {"seeds_effect", file_digest(cfg_.seeds_effect)},
                       {"seeds_per_class", cfg_.seeds_per_class},
                       {"contexts_per_seed", cfg_.contexts_per_seed},
                       {"window_chars", cfg_.context.window_chars},
                       {"mask_token", cfg_.context.mask_token},
                       {"svm_c", cfg_.training.C},
                       {"calibration_folds", cfg_.training.calibration_folds},
                       {"max_epochs", cfg_.training.max_epochs},
                       {"tolerance", cfg_.training.tolerance},
                       {"balance_seeds", cfg_.training.balance_seeds},
                       {"rng_seed", cfg_.training.rng_seed}},
                      {{"index", index_hash()}});
  }
  std::string classify_hash() const {
    return stage_hash("classify",
                      {{"theta_p", cfg_.vote.theta_p},
                       {"theta_c", cfg_.vote.theta_c},
                       {"inclusive_theta_c", cfg_.vote.inclusive_theta_c},
                       {"contexts_per_term", cfg_.vote.contexts_per_term}},
                      {{"terms", terms_hash()}, {"train", train_hash()}});
  }
  std::string link_hash() const {
    return stage_hash("link", {{"min_support", cfg_.min_support}}, {{"classify", classify_hash()}});
  }
  std::string eval_hash() const {
    return stage_hash("eval", {{"gold_rest", cfg_.gold_rest.empty() ? "" : file_digest(cfg_.gold_rest)}},
                      {{"classify", classify_hash()}});
  }

  // -- stages --------------------------------------------------------------

  IngestSummary ingest() const {
    require_path(cfg_.domain_corpus, "--domain-corpus");
    require_path(cfg_.background_corpus, "--background-corpus");
    auto dom = dagon::ingest(cfg_.domain_corpus);
    auto bg = dagon::ingest(cfg_.background_corpus);
    if (dom.corpus.empty()) throw FormatError("domain corpus " + cfg_.domain_corpus + " has no valid posts");
    if (bg.corpus.empty()) throw FormatError("background corpus " + cfg_.background_corpus + " has no valid posts");
    const auto header = make_header("ingest", ingest_hash(), {});
    write_file_atomic(domain_path(), header + corpus_to_jsonl(dom.corpus));
    write_file_atomic(background_path(), header + corpus_to_jsonl(bg.corpus));
    return {dom.corpus.doc_count(), dom.skipped, bg.corpus.doc_count(), bg.skipped};
  }

  Index index() const {
    const Corpus dom = load_corpus(domain_path());
    Index idx = Index::build(dom);
    write_file_atomic(index_path(), make_header("index", index_hash(), {{"ingest", ingest_hash()}}) + idx.serialize());
    return idx;
  }

  std::vector<CandidateTerm> terms() const {
    const Corpus dom = load_corpus(domain_path());
    const Corpus bg = load_corpus(background_path());
    auto cands = extract_candidates(dom, bg, cfg_.terms);
    write_file_atomic(candidates_path(),
                      make_header("terms", terms_hash(), {{"ingest", ingest_hash()}}) + candidates_to_tsv(cands));
    return cands;
  }

  ContextModel train() const {
    const Corpus dom = load_corpus(domain_path());
    const Index idx = load_index(dom);
    const auto [subs, effs] = load_seeds();
    ContextConfig ctx = cfg_.context;
    ctx.max_posts_per_term = cfg_.contexts_per_seed;
    const auto ts = build_training_set(idx, dom, subs, effs, cfg_.seeds_per_class, ctx);
    ContextModel model = ContextModel::train(ts, cfg_.training, ctx.mask_token);
    model.set_config_hash(train_hash());
    auto j = model.to_json();
    j["inputs"] = {{"index", index_hash()}};
    j["config"] = cfg_.to_json();
    write_file_atomic(model_path(), j.dump(1) + "\n");
    return model;
  }

  std::vector<TermDecision> classify() const {
    const ContextModel model = load_model();
    const Corpus dom = load_corpus(domain_path());
    const Index idx = load_index(dom);
    const auto cands = load_candidates();
    std::set<std::string> seeds(model.substance_seeds().begin(), model.substance_seeds().end());
    seeds.insert(model.effect_seeds().begin(), model.effect_seeds().end());
    std::vector<std::string> terms;
    for (const auto& c : cands) {
      if (!seeds.count(c.surface)) terms.push_back(c.surface);
    }
    const auto decisions = classify_all(terms, model, idx, dom, cfg_.context, cfg_.vote);
    write_file_atomic(lexicon_path(),
                      make_header("classify", classify_hash(), {{"terms", terms_hash()}, {"train", train_hash()}}) +
                          lexicon_to_tsv(decisions));
    return decisions;
  }

  // Links are computed over the induced lexicon plus the seeds the model was trained on.
  LinkTable link(std::size_t top_substances = 20, std::size_t top_effects = 5) const {
    const ContextModel model = load_model();
    const auto decisions = load_lexicon();
    const Corpus dom = load_corpus(domain_path());
    auto lexicon = lexicon_from_decisions(decisions);
    for (const auto& s : model.substance_seeds()) lexicon.push_back({s, Label::Substance});
    for (const auto& e : model.effect_seeds()) lexicon.push_back({e, Label::Effect});
    const auto table = build_links(annotate_posts(dom, lexicon), cfg_.min_support);
    const auto header = make_header("link", link_hash(), {{"classify", classify_hash()}});
    write_file_atomic(links_path(), header + links_to_tsv(table));
    write_file_atomic(links_summary_path(), header + links_summary(table, top_substances, top_effects));
    return table;
  }

  MetricsReport eval() const {
    const auto decisions = load_lexicon();
    const GoldSet gold = load_gold_set();
    const auto report = micro_prf(decisions, gold);
    write_file_atomic(metrics_path(),
                      make_header("eval", eval_hash(), {{"classify", classify_hash()}}) + metrics_to_csv(report));
    return report;
  }

  // Re-runs train + classify + score in memory for each value of `param`.
  std::vector<SweepPoint> sweep(const std::string& param, const std::vector<double>& values,
                                std::vector<std::string>* warnings = nullptr) const {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    const Corpus dom = load_corpus(domain_path());
    const Corpus bg = load_corpus(background_path());
    const auto [subs, effs] = load_seeds();
    Experiment ex(dom, bg, subs, effs, load_gold_set(), cfg_.terms);
    ExperimentSettings s;
    s.seeds_per_class = cfg_.seeds_per_class;
    s.contexts_per_seed = cfg_.contexts_per_seed;
    s.context = cfg_.context;
    s.vote = cfg_.vote;
    s.training = cfg_.training;
    s.include_rest = !cfg_.gold_rest.empty();

    auto as_count = [&](double v) {
      if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw ConfigError("sweep values for " + param + " must be positive integers");
      }
      return static_cast<std::size_t>(v);
    };
    std::vector<SweepPoint> points;
    if (param == "seeds_per_class") {
      std::size_t k_max = 0;
      for (double v : values) k_max = std::max(k_max, as_count(v));
      for (auto& p : ex.sweep_seeds(k_max, s, warnings)) {
        if (std::find(values.begin(), values.end(), p.value) != values.end()) points.push_back(std::move(p));
      }
    } else if (param == "theta_c") {
      points = ex.sweep_theta_c(values, s);
    } else if (param == "contexts_per_seed" || param == "contexts_per_term") {
      std::vector<std::size_t> counts;
      for (double v : values) counts.push_back(as_count(v));
      points = param == "contexts_per_seed" ? ex.sweep_contexts_per_seed(counts, s)
                                            : ex.sweep_contexts_per_term(counts, s);
    } else {
      throw ConfigError("unknown sweep parameter '" + param +
                        "' (expected seeds_per_class, theta_c, contexts_per_seed or contexts_per_term)");
    }
    nlohmann::ordered_json settings = cfg_.to_json();
    settings["sweep_param"] = param;
    settings["sweep_values"] = values;
    write_file_atomic(sweep_path(param),
                      make_header("sweep", stage_hash("sweep", settings, {{"ingest", ingest_hash()}}),
                                  {{"ingest", ingest_hash()}}) +
                          sweep_to_csv(points));
    return points;
  }

  // -- loading with provenance checks ----------------------------------------

  Corpus load_corpus(const std::filesystem::path& path) const {
    auto art = read_artifact(path, "ingest", ingest_hash(), "ingest");
    (void)art;
    auto res = dagon::ingest(path, CorpusFormat::JsonLines);
    if (res.skipped) throw FormatError(path.string() + " contains malformed records; re-run `dagon ingest`");
    return std::move(res.corpus);
  }

  Index load_index(const Corpus& domain) const {
    auto art = read_artifact(index_path(), "index", index_hash(), "index");
    Index idx = Index::deserialize(art.body);
    if (!idx.matches(domain)) throw ConfigError("index does not match the domain corpus; re-run `dagon index`");
    return idx;
  }

  std::vector<CandidateTerm> load_candidates() const {
    return candidates_from_tsv(read_artifact(candidates_path(), "terms", terms_hash(), "terms").body);
  }

  ContextModel load_model() const {
    if (!std::filesystem::exists(model_path())) {
      throw IoError("no trained model at " + model_path().string() + "; run `dagon train` first");
    }
    ContextModel m = ContextModel::load(model_path());
    if (m.config_hash() != train_hash()) {
      throw ConfigError(mismatch_message(model_path(), m.config_hash(), train_hash(), "train"));
    }
    return m;
  }

  std::vector<TermDecision> load_lexicon() const {
    return lexicon_from_tsv(read_artifact(lexicon_path(), "classify", classify_hash(), "classify").body);
  }

  std::pair<SeedList, SeedList> load_seeds() const {
    require_path(cfg_.seeds_substance, "--seeds-substance");
    require_path(cfg_.seeds_effect, "--seeds-effect");
    SeedList s = load_seed_list(cfg_.seeds_substance, Label::Substance);
    SeedList e = load_seed_list(cfg_.seeds_effect, Label::Effect);
    check_disjoint(s, e);
    return {std::move(s), std::move(e)};
  }

  // Gold substances and effects are the seed lists; "rest" comes from --gold-rest.
  GoldSet load_gold_set() const {
    require_path(cfg_.seeds_substance, "--seeds-substance");
    require_path(cfg_.seeds_effect, "--seeds-effect");
    return load_gold(cfg_.seeds_substance, cfg_.seeds_effect, cfg_.gold_rest);
  }

  static std::string metrics_to_csv(const MetricsReport& r) {
    std::string out = "class,tp,fp,fn,precision,recall,f1\n";
    auto row = [&](std::string_view name, const ClassCounts& c) {
      const double p = MetricsReport::ratio(c.tp, c.tp + c.fp);
      const double rc = MetricsReport::ratio(c.tp, c.tp + c.fn);
      out += std::string(name) + ',' + std::to_string(c.tp) + ',' + std::to_string(c.fp) + ',' +
             std::to_string(c.fn) + ',' + format_fixed(p, 6) + ',' + format_fixed(rc, 6) + ',' +
             format_fixed(MetricsReport::harmonic_mean(p, rc), 6) + '\n';
    };
    row("substance", r.substance);
    row("effect", r.effect);
    out += "micro," + std::to_string(r.tp) + ',' + std::to_string(r.fp) + ',' + std::to_string(r.fn) + ',' +
           format_fixed(r.precision, 6) + ',' + format_fixed(r.recall, 6) + ',' + format_fixed(r.f1, 6) + '\n';
    return out;
  }

 private:
  static void require_path(const std::string& p, std::string_view flag) {
    if (p.empty()) throw ConfigError(std::string(flag) + " is required");
  }

  static std::string file_digest(const std::string& path) {
    if (path.empty()) return "";
    return hex64(fnv1a(read_file(path)));
  }

  std::string make_header(std::string stage, std::string hash, std::map<std::string, std::string> inputs) const {
    return render_header({std::move(stage), std::move(hash), std::move(inputs), cfg_.to_json().dump()});
  }

  static std::string mismatch_message(const std::filesystem::path& path, const std::string& found,
                                      const std::string& expected, std::string_view producer) {
    return path.string() + " was produced with config hash " + found + " but the current configuration expects " +
           expected + "; re-run `dagon " + std::string(producer) + "`";
  }

  static Artifact read_artifact(const std::filesystem::path& path, std::string_view stage,
                                const std::string& expected_hash, std::string_view producer) {
    if (!std::filesystem::exists(path)) {
      throw IoError("missing " + path.string() + "; run `dagon " + std::string(producer) + "` first");
    }
    Artifact a = parse_artifact(read_file(path), path);
    if (a.header.stage != stage) {
      throw FormatError(path.string() + " holds a '" + a.header.stage + "' artifact, expected '" +
                        std::string(stage) + "'");
    }
    if (a.header.config_hash != expected_hash) {
      throw ConfigError(mismatch_message(path, a.header.config_hash, expected_hash, producer));
    }
    return a;
  }

  PipelineConfig cfg_;
  std::filesystem::path dir_;
};

// Writes a synthetic corpus pair with its seed, gold and link-truth files.
inline SyntheticFiles write_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out) {
  const SyntheticData data = generate_synthetic(spec);
  nlohmann::ordered_json settings;
  settings["seed"] = spec.seed;
  settings["n_posts"] = spec.n_posts;
  settings["n_background_posts"] = spec.n_background_posts;
  settings["n_substances"] = spec.n_substances;
  settings["n_effects"] = spec.n_effects;
  settings["n_neutral"] = spec.n_neutral;
  settings["noise_rate"] = spec.noise_rate;
  const std::string header =
      render_header({"synth", stage_hash("synth", settings, {}), {}, settings.dump()});

  SyntheticFiles f{out / "domain.jsonl",     out / "background.jsonl", out / "seeds_substance.txt",
                   out / "seeds_effect.txt", out / "gold_rest.txt",    out / "truth_links.tsv"};
  write_file_atomic(f.domain, header + corpus_to_jsonl(data.domain));
  write_file_atomic(f.background, header + corpus_to_jsonl(data.background));
  auto list = [&](const std::vector<PlantedTerm>& terms) {
    std::string s = header;
    for (const auto& t : terms) s += t.surface + '\n';
    return s;
  };
  write_file_atomic(f.seeds_substance, list(data.substances));
  write_file_atomic(f.seeds_effect, list(data.effects));
  write_file_atomic(f.gold_rest, list(data.neutral));
  std::string truth = header + "substance\trank\teffect\tcomentions\n";
  for (std::size_t s = 0; s < data.substances.size(); ++s) {
    const auto top = data.top_effects(s, 3, 1);
    for (std::size_t k = 0; k < top.size(); ++k) {
      std::size_t count = 0;
      for (const auto& e : data.effects) {
        if (e.surface == top[k]) count = SyntheticData::comentions(data.substances[s], e);
      }
      truth += data.substances[s].surface + '\t' + std::to_string(k + 1) + '\t' + top[k] + '\t' +
               std::to_string(count) + '\n';
    }
  }
  write_file_atomic(f.truth_links, truth);
  return f;
}

}  // namespace dagon
