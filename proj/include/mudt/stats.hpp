// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_STATS_HPP
#define MUDT_STATS_HPP

#include <map>
#include <string>
#include <vector>

#include "mudt/conllu.hpp"
#include "mudt/metrics.hpp"
#include "mudt/validator.hpp"

namespace mudt {

struct CorpusStats {
  long sentences = 0;
  long tokens = 0;
  std::map<std::string, long> label_freq;
  std::map<std::string, long> feat_freq;  // "Key=Value" occurrences
  long projective = 0;
  long well_formed = 0;   // sentences whose tree builds
  long malformed = 0;
  double depth_sum = 0;   // over well-formed sentences; root depth = 1

  void add(const Sentence& s) {
    ++sentences;
    tokens += static_cast<long>(s.tokens.size());
    for (const Token& t : s.tokens) {
      label_freq[t.deprel.empty() ? "_" : t.deprel]++;
      for (const auto& [k, v] : t.feats) feat_freq[k + "=" + v]++;
    }
    try {
      const DependencyTree tree = build_tree(s);
      ++well_formed;
      if (detail::crossing_pairs(s).empty()) ++projective;
      depth_sum += max_depth(tree);
    } catch (const Error&) {
      ++malformed;
    }
  }

  double projectivity_rate() const {
    return well_formed == 0 ? 0.0 : 100.0 * projective / well_formed;
  }

  double mean_tree_depth() const {
    return well_formed == 0 ? 0.0 : depth_sum / well_formed;
  }

 private:
  static int max_depth(const DependencyTree& tree) {
    int best = 0;
    std::vector<std::pair<int, int>> stack{{tree.root, 1}};
    while (!stack.empty()) {
      const auto [node, depth] = stack.back();
      stack.pop_back();
      best = std::max(best, depth);
      for (int c : tree.children_of(node)) stack.emplace_back(c, depth + 1);
    }
    return best;
  }
};

inline CorpusStats corpus_stats(const Treebank& tb) {
  CorpusStats stats;
  for (const Sentence& s : tb.sentences) stats.add(s);
  return stats;
}

inline std::string stats_tsv(const CorpusStats& s) {
  std::string out;
  out += "sentences\t" + std::to_string(s.sentences) + "\n";
  out += "tokens\t" + std::to_string(s.tokens) + "\n";
  out += "well_formed_trees\t" + std::to_string(s.well_formed) + "\n";
  out += "malformed_trees\t" + std::to_string(s.malformed) + "\n";
  out += "projectivity_rate\t" + format_pct(s.projectivity_rate()) + "\n";
  out += "mean_tree_depth\t" + format_pct(s.mean_tree_depth()) + "\n";
  for (const auto& [label, n] : s.label_freq) {
    out += "label\t" + label + "\t" + std::to_string(n) + "\n";
  }
  for (const auto& [feat, n] : s.feat_freq) {
    out += "feat\t" + feat + "\t" + std::to_string(n) + "\n";
  }
  return out;
}

inline std::string stats_text(const CorpusStats& s) {
  std::string out;
  out += "sentences:          " + std::to_string(s.sentences) + "\n";
  out += "tokens:             " + std::to_string(s.tokens) + "\n";
  out += "well-formed trees:  " + std::to_string(s.well_formed) + "\n";
  out += "malformed trees:    " + std::to_string(s.malformed) + "\n";
  out += "projectivity rate:  " + format_pct(s.projectivity_rate()) + "\n";
  out += "mean tree depth:    " + format_pct(s.mean_tree_depth()) + "\n";
  out += "relation frequencies:\n";
  for (const auto& [label, n] : s.label_freq) {
    out += "  " + label + "  " + std::to_string(n) + "\n";
  }
  out += "feature distribution:\n";
  for (const auto& [feat, n] : s.feat_freq) {
    out += "  " + feat + "  " + std::to_string(n) + "\n";
  }
  return out;
}

}  // namespace mudt

#endif  // MUDT_STATS_HPP
