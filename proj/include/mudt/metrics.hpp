// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_METRICS_HPP
#define MUDT_METRICS_HPP

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mudt/conllu.hpp"
#include "mudt/schema.hpp"

// Attachment-score evaluation between two annotations of the same text.
//
//   UAS   correct head
//   LAS   correct head + relation
//   MLAS  content-relation tokens; additionally correct POS, the selected
//         feature values, and the token's function-relation dependents
//   BLEX  correct head + relation + lemma
//
// All four are F1 over the gold/predicted aligned sets and render with two
// decimals, round half up. Tokenizations normally match (index alignment);
// longest-common-subsequence over surface forms is the fallback.

namespace mudt {

struct MetricConfig {
  std::set<std::string> content_relations;
  std::set<std::string> function_relations;
  std::vector<std::string> mlas_features;

  static MetricConfig standard() {
    MetricConfig cfg;
    cfg.content_relations = {"nsubj",    "obj",       "advcl",         "amod",
                             "advmod",   "nmod",      "nummod",        "appos",
                             "conj",     "det",       "discourse",     "fixed",
                             "case:abl", "case:loc",  "case:dat",      "case:poss",
                             "instr:case=loc", "instr:case=dat", "instr:case=post"};
    cfg.function_relations = {"aux", "cc", "cop", "cop:zero", "post", "punct"};
    cfg.mlas_features = {"Case", "Number", "Person", "Tense"};
    return cfg;
  }

  // [mlas-content] / [mlas-function] / [mlas-features] sections, one entry
  // per line; a present section replaces the default set.
  void load_config(std::istream& in) {
    std::string line, section;
    bool content_seen = false, function_seen = false, features_seen = false;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto trimmed = str::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      if (trimmed.front() == '[' && trimmed.back() == ']') {
        section = std::string(trimmed.substr(1, trimmed.size() - 2));
        continue;
      }
      const std::string entry(str::trim(str::split(line, '\t').front()));
      if (section == "mlas-content") {
        if (!content_seen) content_relations.clear();
        content_seen = true;
        content_relations.insert(entry);
      } else if (section == "mlas-function") {
        if (!function_seen) function_relations.clear();
        function_seen = true;
        function_relations.insert(entry);
      } else if (section == "mlas-features") {
        if (!features_seen) mlas_features.clear();
        features_seen = true;
        mlas_features.push_back(entry);
      }
      // other sections belong to SchemaRegistry::load_config
    }
  }

  void load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("E_CONFIG", "cannot open config '" + path + "'");
    load_config(in);
  }
};

// Order-preserving token alignment (1-based ids both sides).
struct Alignment {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched_gold;
  std::vector<int> unmatched_pred;
};

inline Alignment align_tokens(const Sentence& gold, const Sentence& pred) {
  Alignment out;
  const std::size_t n = gold.tokens.size(), m = pred.tokens.size();
  bool identical = n == m;
  for (std::size_t i = 0; identical && i < n; ++i) {
    identical = gold.tokens[i].form == pred.tokens[i].form;
  }
  if (identical) {
    for (std::size_t i = 0; i < n; ++i) out.pairs.emplace_back(i + 1, i + 1);
    return out;
  }

  // LCS over surface forms.
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (gold.tokens[i - 1].form == pred.tokens[j - 1].form) {
        dp[i][j] = dp[i - 1][j - 1] + 1;
      } else {
        dp[i][j] = std::max(dp[i - 1][j], dp[i][j - 1]);
      }
    }
  }
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    if (gold.tokens[i - 1].form == pred.tokens[j - 1].form && dp[i][j] == dp[i - 1][j - 1] + 1) {
      out.pairs.emplace_back(i, j);
      --i;
      --j;
    } else if (dp[i - 1][j] >= dp[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());

  std::set<int> g_matched, p_matched;
  for (const auto& [g, p] : out.pairs) {
    g_matched.insert(g);
    p_matched.insert(p);
  }
  for (std::size_t k = 1; k <= n; ++k) {
    if (!g_matched.count(static_cast<int>(k))) out.unmatched_gold.push_back(static_cast<int>(k));
  }
  for (std::size_t k = 1; k <= m; ++k) {
    if (!p_matched.count(static_cast<int>(k))) out.unmatched_pred.push_back(static_cast<int>(k));
  }
  return out;
}

struct PerLabelScore {
  long gold_n = 0;
  long pred_n = 0;
  long correct = 0;
  double precision = 0, recall = 0, f1 = 0;
};

struct EvalScores {
  double uas_f1 = 0, las_f1 = 0, mlas = 0, blex = 0;
  struct Counts {
    long aligned = 0;
    long gold_total = 0;
    long pred_total = 0;
  } counts;
  std::map<std::string, PerLabelScore> per_label;
};

struct DivergenceReport {
  std::map<std::pair<std::string, std::string>, long> confusion;  // (gold, pred) -> count
  std::map<std::string, long> categories;
  double agreement_rate = 0;
  long aligned = 0;
};

inline constexpr std::string_view kDivergenceCategories[] = {
    "case-relations", "compound-predicates", "fixed-expressions",
    "quotative",      "postposition-headedness", "other"};

// Percentage with exactly two decimals, round half up.
inline std::string format_pct(double value) {
  const long long cents = static_cast<long long>(std::floor(value * 100.0 + 0.5));
  std::string out = std::to_string(cents / 100) + ".";
  const long long frac = cents % 100;
  if (frac < 10) out += "0";
  return out + std::to_string(frac);
}

namespace detail {

inline double f1_pct(long correct, long gold_n, long pred_n) {
  if (gold_n == 0 && pred_n == 0) return 100.0;  // vacuously perfect
  const double p = pred_n == 0 ? 0.0 : static_cast<double>(correct) / pred_n;
  const double r = gold_n == 0 ? 0.0 : static_cast<double>(correct) / gold_n;
  if (p + r == 0.0) return 0.0;
  return 100.0 * 2.0 * p * r / (p + r);
}

struct PairView {
  const Sentence& gold;
  const Sentence& pred;
  Alignment align;
  std::map<int, int> g2p;  // gold id -> pred id
  std::map<int, int> p2g;

  PairView(const Sentence& g, const Sentence& p) : gold(g), pred(p), align(align_tokens(g, p)) {
    for (const auto& [gi, pi] : align.pairs) {
      g2p.emplace(gi, pi);
      p2g.emplace(pi, gi);
    }
  }

  bool head_correct(const Token& g, const Token& p) const {
    if (g.head == 0) return p.head == 0;
    auto it = g2p.find(g.head);
    return it != g2p.end() && it->second == p.head;
  }
};

inline void require_pairing(const Treebank& gold, const Treebank& pred) {
  if (gold.sentences.size() != pred.sentences.size()) {
    throw Error("E_PAIRING", "sentence counts differ: " +
                                 std::to_string(gold.sentences.size()) + " gold vs " +
                                 std::to_string(pred.sentences.size()) + " predicted");
  }
}

}  // namespace detail

inline EvalScores score(const Treebank& gold, const Treebank& pred, const SchemaRegistry& reg,
                        const MetricConfig& cfg = MetricConfig::standard()) {
  detail::require_pairing(gold, pred);
  const auto nd = [&](const Token& t) {
    if (auto canon = try_normalize_label(t.deprel, reg)) return *canon;
    return t.deprel;
  };

  long uas = 0, las = 0, blex = 0;
  long mlas_correct = 0, gold_content = 0, pred_content = 0;
  EvalScores scores;
  auto& counts = scores.counts;
  std::map<std::string, PerLabelScore> per_label;

  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const detail::PairView view(gold.sentences[si], pred.sentences[si]);
    counts.gold_total += static_cast<long>(view.gold.tokens.size());
    counts.pred_total += static_cast<long>(view.pred.tokens.size());
    counts.aligned += static_cast<long>(view.align.pairs.size());

    for (const Token& g : view.gold.tokens) {
      per_label[nd(g)].gold_n++;
      if (cfg.content_relations.count(nd(g))) ++gold_content;
    }
    for (const Token& p : view.pred.tokens) {
      per_label[nd(p)].pred_n++;
      if (cfg.content_relations.count(nd(p))) ++pred_content;
    }

    for (const auto& [gi, pi] : view.align.pairs) {
      const Token& g = view.gold.tokens[static_cast<std::size_t>(gi) - 1];
      const Token& p = view.pred.tokens[static_cast<std::size_t>(pi) - 1];
      const bool head_ok = view.head_correct(g, p);
      const bool label_ok = nd(g) == nd(p);
      if (head_ok) ++uas;
      if (head_ok && label_ok) {
        ++las;
        per_label[nd(g)].correct++;
        if (g.lemma == p.lemma) ++blex;
      }

      if (!cfg.content_relations.count(nd(g)) || !cfg.content_relations.count(nd(p))) continue;
      if (!head_ok || !label_ok || g.pos != p.pos) continue;
      bool feats_ok = true;
      for (const auto& key : cfg.mlas_features) {
        if (g.feat(key) != p.feat(key)) {
          feats_ok = false;
          break;
        }
      }
      if (!feats_ok) continue;
      // function-relation dependents must carry over, label-for-label
      std::vector<std::pair<int, std::string>> g_fun, p_fun;
      for (const Token& d : view.gold.tokens) {
        if (d.head != g.id || !cfg.function_relations.count(nd(d))) continue;
        auto it = view.g2p.find(d.id);
        g_fun.emplace_back(it == view.g2p.end() ? -d.id : it->second, nd(d));
      }
      for (const Token& d : view.pred.tokens) {
        if (d.head == p.id && cfg.function_relations.count(nd(d))) {
          p_fun.emplace_back(d.id, nd(d));
        }
      }
      std::sort(g_fun.begin(), g_fun.end());
      std::sort(p_fun.begin(), p_fun.end());
      if (g_fun == p_fun) ++mlas_correct;
    }
  }

  scores.uas_f1 = detail::f1_pct(uas, counts.gold_total, counts.pred_total);
  scores.las_f1 = detail::f1_pct(las, counts.gold_total, counts.pred_total);
  scores.blex = detail::f1_pct(blex, counts.gold_total, counts.pred_total);
  scores.mlas = detail::f1_pct(mlas_correct, gold_content, pred_content);
  for (auto& [label, pl] : per_label) {
    pl.precision = pl.pred_n == 0 ? 0.0 : 100.0 * pl.correct / pl.pred_n;
    pl.recall = pl.gold_n == 0 ? 0.0 : 100.0 * pl.correct / pl.gold_n;
    pl.f1 = detail::f1_pct(pl.correct, pl.gold_n, pl.pred_n);
  }
  scores.per_label = std::move(per_label);
  return scores;
}

// ---------------------------------------------------------------------------
// Divergence report

namespace detail {

inline bool is_quotative_token(const Token& t) {
  return t.lemma == "de" || t.form == "dəp" || t.form == "dep";
}

// Dependents that kept their label but moved from the predicted auxiliary
// root to the gold lexical root are part of the same re-rooting event.
inline void absorb_reroot_fallout(const PairView& view, const SchemaRegistry& reg,
                                  int lex_gold_id, int aux_pred_id, std::set<int>& consumed) {
  const auto nd = [&](const Token& t) {
    if (auto canon = try_normalize_label(t.deprel, reg)) return *canon;
    return t.deprel;
  };
  for (const auto& [xg, xp] : view.align.pairs) {
    const Token& x = view.gold.tokens[static_cast<std::size_t>(xg) - 1];
    const Token& xpred = view.pred.tokens[static_cast<std::size_t>(xp) - 1];
    if (consumed.count(x.id) || x.id == lex_gold_id) continue;
    if (nd(x) == nd(xpred) && x.head == lex_gold_id && xpred.head == aux_pred_id &&
        !view.head_correct(x, xpred)) {
      consumed.insert(x.id);
    }
  }
}

// Classifies the disagreements of one sentence pair into the five divergence
// phenomena. Runs in two phases because the phenomena are arc-pattern
// events, not single-token label swaps: inversions (aux/advcl re-rooting,
// postposition re-heading) are detected first and consume both tokens of the
// pair plus any same-label re-attachment fallout; the leftover disagreements
// are then classified token by token.
inline void classify_divergences(const PairView& view, const SchemaRegistry& reg,
                                 std::map<std::string, long>& categories) {
  const auto nd = [&](const Token& t) {
    if (auto canon = try_normalize_label(t.deprel, reg)) return *canon;
    return t.deprel;
  };
  static const std::set<std::string_view> case_labels = {"case:abl", "case:loc", "case:dat",
                                                         "case:poss"};
  static const std::set<std::string_view> post_labels = {"post", "instr:case=post"};

  std::set<int> consumed;
  const auto pred_of = [&](int gold_id) -> const Token* {
    auto it = view.g2p.find(gold_id);
    return it == view.g2p.end() ? nullptr : view.pred.find(it->second);
  };
  const auto disagrees = [&](const Token& g, const Token& p) {
    return !(view.head_correct(g, p) && nd(g) == nd(p));
  };

  // Phase 1: inversion events.
  for (const auto& [gi, pi] : view.align.pairs) {
    const Token& g = view.gold.tokens[static_cast<std::size_t>(gi) - 1];
    const Token& p = view.pred.tokens[static_cast<std::size_t>(pi) - 1];
    if (consumed.count(g.id)) continue;

    if (g.pos == "Post" && post_labels.count(nd(g))) {
      // gold: noun -obj-> Post -> predicate; predicted: Post hangs under the
      // noun (logically inverted)
      for (const Token& d : view.gold.tokens) {
        if (d.head != g.id || nd(d) != "obj" || consumed.count(d.id)) continue;
        auto it = view.g2p.find(d.id);
        const Token* d_pred = it == view.g2p.end() ? nullptr : view.pred.find(it->second);
        if (!d_pred || p.head != d_pred->id) continue;
        if (!disagrees(g, p) && !disagrees(d, *d_pred)) continue;
        categories["postposition-headedness"]++;
        consumed.insert(g.id);
        consumed.insert(d.id);
        break;
      }
    } else if (nd(g) == "aux" && disagrees(g, p)) {
      // gold: lexical verb -aux-> auxiliary; predicted: auxiliary roots the
      // clause and demotes the lexical verb to advcl
      const Token* lex = view.gold.find(g.head);
      const Token* lex_pred = lex ? pred_of(lex->id) : nullptr;
      if (lex && lex_pred && !consumed.count(lex->id) && nd(*lex_pred) == "advcl" &&
          lex_pred->head == p.id) {
        categories["compound-predicates"]++;
        consumed.insert(g.id);
        consumed.insert(lex->id);
        absorb_reroot_fallout(view, reg, lex->id, p.id, consumed);
      }
    }
  }

  // Phase 2: per-token patterns over the remaining disagreements.
  for (const auto& [gi, pi] : view.align.pairs) {
    const Token& g = view.gold.tokens[static_cast<std::size_t>(gi) - 1];
    const Token& p = view.pred.tokens[static_cast<std::size_t>(pi) - 1];
    if (consumed.count(g.id) || !disagrees(g, p)) continue;
    const std::string gl = nd(g), pl = nd(p);
    std::string category = "other";
    if (case_labels.count(gl) && pl == "obl") {
      category = "case-relations";
    } else if (gl == "fixed" && pl == "compound") {
      category = "fixed-expressions";
    } else if (gl == "obj" && pl == "advcl" && view.gold.find(g.head) &&
               is_quotative_token(*view.gold.find(g.head))) {
      category = "quotative";
    } else if (gl == "aux" && pl == "advcl") {
      category = "compound-predicates";
    }
    categories[category]++;
    consumed.insert(g.id);
  }
}

}  // namespace detail

inline DivergenceReport divergence(const Treebank& gold, const Treebank& pred,
                                   const SchemaRegistry& reg) {
  detail::require_pairing(gold, pred);
  const auto nd = [&](const Token& t) {
    if (auto canon = try_normalize_label(t.deprel, reg)) return *canon;
    return t.deprel;
  };

  DivergenceReport report;
  for (auto cat : kDivergenceCategories) report.categories[std::string(cat)] = 0;
  long las = 0;
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const detail::PairView view(gold.sentences[si], pred.sentences[si]);
    for (const auto& [gi, pi] : view.align.pairs) {
      const Token& g = view.gold.tokens[static_cast<std::size_t>(gi) - 1];
      const Token& p = view.pred.tokens[static_cast<std::size_t>(pi) - 1];
      report.confusion[{nd(g), nd(p)}]++;
      ++report.aligned;
      if (view.head_correct(g, p) && nd(g) == nd(p)) ++las;
    }
    detail::classify_divergences(view, reg, report.categories);
  }
  report.agreement_rate =
      report.aligned == 0 ? 100.0 : 100.0 * static_cast<double>(las) / report.aligned;
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string score_tsv(const EvalScores& s) {
  std::string out;
  out += "uas_f1\t" + format_pct(s.uas_f1) + "\n";
  out += "las_f1\t" + format_pct(s.las_f1) + "\n";
  out += "mlas\t" + format_pct(s.mlas) + "\n";
  out += "blex\t" + format_pct(s.blex) + "\n";
  out += "aligned_tokens\t" + std::to_string(s.counts.aligned) + "\n";
  out += "gold_tokens\t" + std::to_string(s.counts.gold_total) + "\n";
  out += "predicted_tokens\t" + std::to_string(s.counts.pred_total) + "\n";
  for (const auto& [label, pl] : s.per_label) {
    out += "label\t" + label + "\t" + format_pct(pl.precision) + "\t" + format_pct(pl.recall) +
           "\t" + format_pct(pl.f1) + "\n";
  }
  return out;
}

inline std::string score_text(const EvalScores& s) {
  std::string out;
  out += "UAS F1  " + format_pct(s.uas_f1) + "\n";
  out += "LAS F1  " + format_pct(s.las_f1) + "\n";
  out += "MLAS    " + format_pct(s.mlas) + "\n";
  out += "BLEX    " + format_pct(s.blex) + "\n";
  out += "tokens: " + std::to_string(s.counts.aligned) + " aligned, " +
         std::to_string(s.counts.gold_total) + " gold, " + std::to_string(s.counts.pred_total) +
         " predicted\n";
  out += "\nper label (precision/recall/f1):\n";
  for (const auto& [label, pl] : s.per_label) {
    out += "  " + label + "  " + format_pct(pl.precision) + " / " + format_pct(pl.recall) +
           " / " + format_pct(pl.f1) + "\n";
  }
  return out;
}

inline std::string divergence_tsv(const DivergenceReport& r) {
  std::string out;
  out += "agreement_rate\t" + format_pct(r.agreement_rate) + "\n";
  out += "aligned_tokens\t" + std::to_string(r.aligned) + "\n";
  for (const auto& [cat, count] : r.categories) {
    out += "category\t" + cat + "\t" + std::to_string(count) + "\n";
  }
  for (const auto& [pair, count] : r.confusion) {
    out += "confusion\t" + pair.first + "\t" + pair.second + "\t" + std::to_string(count) + "\n";
  }
  return out;
}

inline std::string divergence_text(const DivergenceReport& r) {
  std::string out;
  out += "agreement rate (LAS over aligned): " + format_pct(r.agreement_rate) + "\n";
  out += "divergence categories:\n";
  for (const auto& [cat, count] : r.categories) {
    out += "  " + cat + ": " + std::to_string(count) + "\n";
  }
  out += "label confusion (gold -> predicted, disagreements only):\n";
  for (const auto& [pair, count] : r.confusion) {
    if (pair.first == pair.second) continue;
    out += "  " + pair.first + " -> " + pair.second + ": " + std::to_string(count) + "\n";
  }
  return out;
}

}  // namespace mudt

#endif  // MUDT_METRICS_HPP
