#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagon/dagon.hpp"

namespace {

struct Flags {
  std::string config_file;
  std::optional<std::string> domain_corpus, background_corpus, seeds_substance, seeds_effect, gold_rest, workspace;
  std::optional<std::string> mask_token;
  std::optional<std::size_t> window_chars, contexts_per_seed, contexts_per_term, min_support, seeds_per_class;
  std::optional<std::size_t> min_df, max_candidates, calibration_folds;
  std::optional<double> theta_p, theta_c, svm_c;
  std::optional<std::uint64_t> rng_seed;
  bool exclusive_theta_c = false;

  // synth
  std::uint64_t synth_seed = 42;
  std::string synth_out = "synthetic";
  std::size_t synth_posts = 10000;

  // sweep
  std::string sweep_param;
  std::vector<double> sweep_values;
};

template <typename T>
void set_if(const std::optional<T>& v, T& target) {
  if (v) target = *v;
}

dagon::PipelineConfig effective_config(const Flags& f) {
  dagon::PipelineConfig cfg;
  if (!f.config_file.empty()) cfg = dagon::PipelineConfig::load(f.config_file);
  set_if(f.domain_corpus, cfg.domain_corpus);
  set_if(f.background_corpus, cfg.background_corpus);
  set_if(f.seeds_substance, cfg.seeds_substance);
  set_if(f.seeds_effect, cfg.seeds_effect);
  set_if(f.gold_rest, cfg.gold_rest);
  set_if(f.workspace, cfg.workspace);
  set_if(f.mask_token, cfg.context.mask_token);
  set_if(f.window_chars, cfg.context.window_chars);
  set_if(f.contexts_per_seed, cfg.contexts_per_seed);
  set_if(f.contexts_per_term, cfg.vote.contexts_per_term);
  set_if(f.min_support, cfg.min_support);
  set_if(f.seeds_per_class, cfg.seeds_per_class);
  set_if(f.min_df, cfg.terms.min_df);
  set_if(f.max_candidates, cfg.terms.max_candidates);
  set_if(f.calibration_folds, cfg.training.calibration_folds);
  set_if(f.theta_p, cfg.vote.theta_p);
  set_if(f.theta_c, cfg.vote.theta_c);
  set_if(f.svm_c, cfg.training.C);
  set_if(f.rng_seed, cfg.training.rng_seed);
  if (f.exclusive_theta_c) cfg.vote.inclusive_theta_c = false;
  return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run(const std::string& command, const Flags& f) {
  if (command == "synth") {
    dagon::SyntheticSpec spec;
    spec.seed = f.synth_seed;
    spec.n_posts = f.synth_posts;
    spec.validate();
    std::filesystem::create_directories(f.synth_out);
    const auto files = dagon::write_synthetic(spec, f.synth_out);
    std::cout << "wrote " << files.domain.string() << ", " << files.background.string() << " and seed/gold lists\n";
    return 0;
  }

  const dagon::Workspace ws(effective_config(f));
  std::filesystem::create_directories(ws.dir());

  if (command == "ingest") {
    const auto s = ws.ingest();
    std::cout << "domain: " << s.domain_posts << " posts (" << s.domain_skipped << " skipped)\n"
              << "background: " << s.background_posts << " posts (" << s.background_skipped << " skipped)\n";
  } else if (command == "index") {
    const auto idx = ws.index();
    std::cout << "indexed " << idx.doc_count() << " posts, " << idx.vocabulary_size() << " distinct tokens\n";
  } else if (command == "terms") {
    std::cout << ws.terms().size() << " candidate terms -> " << ws.candidates_path().string() << '\n';
  } else if (command == "train") {
    const auto model = ws.train();
    print_warnings(model.warnings());
    std::cout << "trained on " << model.substance_seeds().size() << " substance and " << model.effect_seeds().size()
              << " effect seeds -> " << ws.model_path().string() << '\n';
  } else if (command == "classify") {
    std::size_t s = 0, e = 0;
    const auto decisions = ws.classify();
    for (const auto& d : decisions) {
      s += d.label == dagon::Label::Substance;
      e += d.label == dagon::Label::Effect;
    }
    std::cout << decisions.size() << " terms classified: " << s << " substances, " << e << " effects\n";
  } else if (command == "link") {
    const auto table = ws.link();
    std::cout << table.links.size() << " substances linked -> " << ws.links_path().string() << '\n';
  } else if (command == "eval") {
    const auto r = ws.eval();
    std::cout << "precision " << dagon::format_fixed(r.precision, 3) << "  recall " << dagon::format_fixed(r.recall, 3)
              << "  f1 " << dagon::format_fixed(r.f1, 3) << '\n';
  } else if (command == "sweep") {
    std::vector<std::string> warnings;
    const auto points = ws.sweep(f.sweep_param, f.sweep_values, &warnings);
    print_warnings(warnings);
    std::cout << dagon::sweep_to_csv(points);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dagon: induce substance and effect lexicons from forum text"};
  app.require_subcommand(1);
  Flags f;

  app.add_option("--config", f.config_file, "JSON configuration file; flags override its values");
  app.add_option("--workspace", f.workspace, "Directory holding stage artifacts");
  app.add_option("--domain-corpus", f.domain_corpus, "Domain corpus (JSONL file or directory of .txt files)");
  app.add_option("--background-corpus", f.background_corpus, "Background corpus");
  app.add_option("--seeds-substance", f.seeds_substance, "Substance seed list, one term per line");
  app.add_option("--seeds-effect", f.seeds_effect, "Effect seed list, one term per line");
  app.add_option("--gold-rest", f.gold_rest, "Terms that are neither substances nor effects (for eval)");
  app.add_option("--window-chars", f.window_chars, "Context characters kept on each side (default 50)");
  app.add_option("--mask-token", f.mask_token, "Token replacing the term in contexts");
  app.add_option("--contexts-per-seed", f.contexts_per_seed, "Training contexts per seed (default 3000)");
  app.add_option("--contexts-per-term", f.contexts_per_term, "Contexts classified per candidate (default 100)");
  app.add_option("--theta-p", f.theta_p, "Per-context confidence threshold (default 0.8)");
  app.add_option("--theta-c", f.theta_c, "Winning vote fraction threshold (default 0.6)");
  app.add_flag("--exclusive-theta-c", f.exclusive_theta_c, "Require the vote fraction to exceed theta-c strictly");
  app.add_option("--min-support", f.min_support, "Minimum co-mentioning posts per link (default 3)");
  app.add_option("--seeds-per-class", f.seeds_per_class, "Seeds used per class (default 6)");
  app.add_option("--rng-seed", f.rng_seed, "Seed for training randomness");
  app.add_option("--svm-c", f.svm_c, "SVM regularization constant (default 1)");
  app.add_option("--calibration-folds", f.calibration_folds, "Cross-validation folds for calibration (default 5)");
  app.add_option("--min-df", f.min_df, "Minimum document frequency of candidate terms (default 5)");
  app.add_option("--max-candidates", f.max_candidates, "Maximum number of candidate terms (default 5000)");

  app.add_subcommand("ingest", "Normalize both corpora into the workspace")->fallthrough();
  app.add_subcommand("index", "Build the positional index of the domain corpus")->fallthrough();
  app.add_subcommand("terms", "Rank candidate terms against the background corpus")->fallthrough();
  app.add_subcommand("train", "Train the context classifier from seed contexts")->fallthrough();
  app.add_subcommand("classify", "Label every candidate term by context voting")->fallthrough();
  app.add_subcommand("link", "Count substance/effect co-mentions per post")->fallthrough();
  app.add_subcommand("eval", "Score the lexicon against the gold lists")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "Re-run training and scoring over a parameter grid")->fallthrough();
  sweep->add_option("--param", f.sweep_param, "seeds_per_class, theta_c, contexts_per_seed or contexts_per_term")
      ->required();
  sweep->add_option("--values", f.sweep_values, "Comma-separated values")->required()->delimiter(',');
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus with known ground truth")->fallthrough();
  synth->add_option("--seed", f.synth_seed, "Generator seed (default 42)");
  synth->add_option("--out", f.synth_out, "Output directory (default ./synthetic)");
  synth->add_option("--posts", f.synth_posts, "Domain posts (default 10000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), f);
  } catch (const dagon::UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
