#include <catch2/catch.hpp>

#include <set>

#include "mudt/metrics.hpp"
#include "test_support.hpp"

using namespace mudt;

namespace {

Sentence two_tokens(const std::string& rel1, const std::string& lemma1) {
  return test::sentence({test::tok(1, "kitabni", lemma1, "N", 2, rel1),
                         test::tok(2, "aldim", "al", "V", 0, "root")});
}

// Independent per-token agreement tally over identically tokenized treebanks.
long oracle_las_correct(const Treebank& gold, const Treebank& pred) {
  long correct = 0;
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const auto& g = gold.sentences[si].tokens;
    const auto& p = pred.sentences[si].tokens;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i].head == p[i].head && g[i].deprel == p[i].deprel) ++correct;
    }
  }
  return correct;
}

long token_count(const Treebank& tb) {
  long n = 0;
  for (const auto& s : tb.sentences) n += static_cast<long>(s.tokens.size());
  return n;
}

}  // namespace

TEST_CASE("align_tokens identity and LCS fallback", "[metrics]") {
  const Sentence a = test::sentence({test::tok(1, "a", "a", "N", 0, "root"),
                                     test::tok(2, "b", "b", "N", 1, "nmod"),
                                     test::tok(3, "c", "c", "N", 1, "nmod")});
  const Alignment id = align_tokens(a, a);
  CHECK(id.pairs == std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 3}});
  CHECK(id.unmatched_gold.empty());

  const Sentence b = test::sentence({test::tok(1, "a", "a", "N", 0, "root"),
                                     test::tok(2, "c", "c", "N", 1, "nmod")});
  const Alignment lcs = align_tokens(a, b);
  CHECK(lcs.pairs == std::vector<std::pair<int, int>>{{1, 1}, {3, 2}});
  CHECK(lcs.unmatched_gold == std::vector<int>{2});
  CHECK(lcs.unmatched_pred.empty());

  const Sentence c = test::sentence({test::tok(1, "x", "x", "N", 0, "root"),
                                     test::tok(2, "y", "y", "N", 1, "nmod")});
  const Alignment none = align_tokens(a, c);
  CHECK(none.pairs.empty());
  CHECK(none.unmatched_gold == std::vector<int>{1, 2, 3});
  CHECK(none.unmatched_pred == std::vector<int>{1, 2});
}

TEST_CASE("self-evaluation is exactly 100.00 on every metric", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  for (const auto* fixture : {"relations.conllu", "divergence_gold.conllu", "morphology.conllu"}) {
    const Treebank tb = test::load_fixture(fixture);
    const EvalScores s = score(tb, tb, reg);
    INFO(fixture);
    CHECK(format_pct(s.uas_f1) == "100.00");
    CHECK(format_pct(s.las_f1) == "100.00");
    CHECK(format_pct(s.mlas) == "100.00");
    CHECK(format_pct(s.blex) == "100.00");
  }
}

TEST_CASE("wrong deprel on one of two tokens: UAS 100, LAS 50", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank gold{{two_tokens("obj", "kitab")}, ""};
  const Treebank pred{{two_tokens("nmod", "kitab")}, ""};
  const EvalScores s = score(gold, pred, reg);
  CHECK(format_pct(s.uas_f1) == "100.00");
  CHECK(format_pct(s.las_f1) == "50.00");
  CHECK(format_pct(s.blex) == "50.00");
}

TEST_CASE("wrong lemma on a correctly attached token: BLEX 50, LAS 100", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank gold{{two_tokens("obj", "kitab")}, ""};
  const Treebank pred{{two_tokens("obj", "qitab")}, ""};
  const EvalScores s = score(gold, pred, reg);
  CHECK(format_pct(s.las_f1) == "100.00");
  CHECK(format_pct(s.blex) == "50.00");
}

TEST_CASE("alias spellings count as label matches", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  Sentence g = test::sentence({test::tok(1, "Qol", "qol", "N", 2, "obj"),
                               test::tok(2, "bilən", "bilən", "Post", 3, "instr:case=post"),
                               test::tok(3, "jezif", "jaz", "V", 0, "root")});
  Sentence p = g;
  p.tokens[1].deprel = "instr:post";  // alternate spelling of the label
  const EvalScores s = score(Treebank{{g}, ""}, Treebank{{p}, ""}, reg);
  CHECK(format_pct(s.las_f1) == "100.00");
}

TEST_CASE("MLAS requires POS, selected features, and function dependents", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank gold = test::load_fixture("relations.conllu");

  SECTION("POS flip on a content token lowers MLAS, not LAS") {
    Treebank pred = gold;
    for (auto& s : pred.sentences) {
      for (auto& t : s.tokens) {
        if (t.deprel == "obj") t.pos = "A";
      }
    }
    const EvalScores s = score(gold, pred, reg);
    CHECK(format_pct(s.las_f1) == "100.00");
    CHECK(s.mlas < 100.0);
  }
  SECTION("feature flip on a content token lowers MLAS, not LAS") {
    Treebank pred = gold;
    test::sentence_by_id(pred, "rel-case-abl");  // fixture sanity
    for (auto& s : pred.sentences) {
      for (auto& t : s.tokens) {
        if (t.deprel == "case:abl") t.feats["Case"] = "LOC";
      }
    }
    const EvalScores s = score(gold, pred, reg);
    CHECK(format_pct(s.las_f1) == "100.00");
    CHECK(s.mlas < 100.0);
  }
  SECTION("misattached function dependent blocks its content head") {
    Treebank pred = gold;
    // move the aux of rel-aux off its verb
    for (auto& s : pred.sentences) {
      if (s.sent_id != "rel-aux") continue;
      s.tokens[2].deprel = "advmod";  // boldi no longer a function dependent of oqup
    }
    const EvalScores s = score(gold, pred, reg);
    CHECK(s.mlas < 100.0);
  }
}

TEST_CASE("sentence-count mismatch raises E_PAIRING", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank one{{two_tokens("obj", "kitab")}, ""};
  const Treebank two{{two_tokens("obj", "kitab"), two_tokens("obj", "kitab")}, ""};
  CHECK_THROWS_MATCHES(score(one, two, reg), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == "E_PAIRING"; }));
  CHECK_THROWS_AS(divergence(one, two, reg), Error);
}

TEST_CASE("divergence of identical treebanks is empty", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank tb = test::load_fixture("relations.conllu");
  const DivergenceReport r = divergence(tb, tb, reg);
  CHECK(format_pct(r.agreement_rate) == "100.00");
  for (const auto& [cat, count] : r.categories) CHECK(count == 0);
  for (const auto& [pair, count] : r.confusion) CHECK(pair.first == pair.second);
}

TEST_CASE("the five divergence exemplar pairs land one in each category", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank gold = test::load_fixture("divergence_gold.conllu");
  const Treebank pred = test::load_fixture("divergence_pred.conllu");
  const DivergenceReport r = divergence(gold, pred, reg);
  CHECK(r.categories.at("case-relations") == 1);
  CHECK(r.categories.at("compound-predicates") == 1);
  CHECK(r.categories.at("fixed-expressions") == 1);
  CHECK(r.categories.at("quotative") == 1);
  CHECK(r.categories.at("postposition-headedness") == 1);
  CHECK(r.categories.at("other") == 0);

  // brute-force tallies
  const long n = token_count(gold);
  CHECK(r.aligned == n);
  CHECK(r.agreement_rate == Approx(100.0 * oracle_las_correct(gold, pred) / n));
  long confusion_mass = 0;
  for (const auto& [pair, count] : r.confusion) confusion_mass += count;
  CHECK(confusion_mass == n);

  const EvalScores s = score(gold, pred, reg);
  CHECK(s.las_f1 > 0.0);
  CHECK(s.las_f1 < 100.0);
  CHECK(s.mlas <= s.las_f1);
}

TEST_CASE("random label corruption: agreement rate is 100(n-k)/n", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank gold = test::load_fixture("relations.conllu");
  const long n = token_count(gold);
  test::Rng rng(555);

  Treebank pred = gold;
  std::set<std::pair<std::size_t, std::size_t>> corrupted;
  double last_las = 100.0;
  for (int k = 1; k <= 20; ++k) {
    // corrupt one additional previously untouched token
    while (true) {
      const std::size_t si = static_cast<std::size_t>(rng.below(
          static_cast<int>(pred.sentences.size())));
      const std::size_t ti = static_cast<std::size_t>(rng.below(
          static_cast<int>(pred.sentences[si].tokens.size())));
      if (corrupted.insert({si, ti}).second) {
        pred.sentences[si].tokens[ti].deprel = "corrupted";
        break;
      }
    }
    const DivergenceReport r = divergence(gold, pred, reg);
    CHECK(r.agreement_rate == Approx(100.0 * (n - k) / n));
    const EvalScores s = score(gold, pred, reg);
    CHECK(s.las_f1 <= last_las);  // monotone under additional corruption
    CHECK(s.las_f1 <= s.uas_f1);
    last_las = s.las_f1;
  }
}

TEST_CASE("per-label scores track precision and recall", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank gold{{two_tokens("obj", "kitab")}, ""};
  const Treebank pred{{two_tokens("nmod", "kitab")}, ""};
  const EvalScores s = score(gold, pred, reg);
  CHECK(s.per_label.at("obj").gold_n == 1);
  CHECK(s.per_label.at("obj").pred_n == 0);
  CHECK(s.per_label.at("obj").correct == 0);
  CHECK(s.per_label.at("nmod").pred_n == 1);
  CHECK(s.per_label.at("root").correct == 1);
  CHECK(s.per_label.at("root").f1 == Approx(100.0));
}

TEST_CASE("format_pct renders two decimals, round half up", "[metrics]") {
  CHECK(format_pct(100.0) == "100.00");
  CHECK(format_pct(0.0) == "0.00");
  CHECK(format_pct(50.0) == "50.00");
  CHECK(format_pct(100.0 * 23 / 33) == "69.70");
  CHECK(format_pct(2.0 / 3.0 * 100.0) == "66.67");
  CHECK(format_pct(0.005) == "0.01");
}

TEST_CASE("scores render in text and tsv forms", "[metrics]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank tb = test::load_fixture("morphology.conllu");
  const EvalScores s = score(tb, tb, reg);
  CHECK(score_text(s).find("LAS F1  100.00") != std::string::npos);
  CHECK(score_tsv(s).find("las_f1\t100.00") != std::string::npos);
  const DivergenceReport r = divergence(tb, tb, reg);
  CHECK(divergence_tsv(r).find("agreement_rate\t100.00") != std::string::npos);
}
