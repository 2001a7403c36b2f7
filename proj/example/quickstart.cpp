// Builds a small synthetic forum, induces a lexicon from six seeds per class
// and prints the strongest substance/effect links.

#include <iostream>

#include "dagon/dagon.hpp"

int main() {
  dagon::SyntheticSpec spec;
  spec.n_posts = 4000;
  spec.n_background_posts = 2000;
  const auto data = dagon::generate_synthetic(spec);

  dagon::Experiment ex(data.domain, data.background, data.substance_seeds(), data.effect_seeds(), data.gold(), {});
  dagon::ExperimentSettings settings;
  const auto run = ex.run(settings);

  std::cout << "seeds: " << run.model.substance_seeds().size() << " substances, " << run.model.effect_seeds().size()
            << " effects\n";
  std::cout << "evaluated " << run.metrics.evaluated_terms << " terms: precision "
            << dagon::format_fixed(run.metrics.precision, 3) << ", recall " << dagon::format_fixed(run.metrics.recall, 3)
            << ", f1 " << dagon::format_fixed(run.metrics.f1, 3) << "\n\n";

  auto lexicon = dagon::lexicon_from_decisions(run.decisions);
  for (const auto& s : run.model.substance_seeds()) lexicon.push_back({s, dagon::Label::Substance});
  for (const auto& e : run.model.effect_seeds()) lexicon.push_back({e, dagon::Label::Effect});
  const auto links = dagon::build_links(dagon::annotate_posts(data.domain, lexicon), 3);
  std::cout << dagon::links_summary(links, 5, 3);
}
