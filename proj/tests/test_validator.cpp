#include <catch2/catch.hpp>

#include <set>

#include "mudt/validator.hpp"
#include "test_support.hpp"

using namespace mudt;

namespace {

Sentence heads_only(const std::vector<int>& heads, const std::string& pos = "N") {
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    tokens.push_back(test::tok(static_cast<int>(i) + 1, "w" + std::to_string(i + 1), "w",
                               heads[i] == 0 ? "V" : pos, heads[i],
                               heads[i] == 0 ? "root" : "nmod"));
  }
  return test::sentence(std::move(tokens));
}

std::set<std::string> error_codes(const ValidationReport& report) {
  std::set<std::string> codes;
  for (const auto& d : report.diagnostics) {
    if (d.severity == Severity::error) codes.insert(d.code);
  }
  return codes;
}

}  // namespace

TEST_CASE("projectivity on small canonical trees", "[validator]") {
  CHECK(check_projectivity(heads_only({2, 0, 2})).empty());
  CHECK(check_projectivity(heads_only({0, 1, 2})).empty());

  const auto crossings = check_projectivity(heads_only({3, 4, 0, 3}));
  REQUIRE(crossings.size() == 1);
  const auto& [a, b] = crossings[0];
  CHECK(((a == Arc{3, 1} && b == Arc{4, 2}) || (a == Arc{4, 2} && b == Arc{3, 1})));
}

TEST_CASE("projectivity propagates malformed-tree errors", "[validator]") {
  CHECK_THROWS_AS(check_projectivity(heads_only({0, 0})), Error);
  CHECK_THROWS_AS(check_projectivity(heads_only({2, 1})), Error);
}

TEST_CASE("check_projectivity agrees with the interleave oracle on random trees",
          "[validator]") {
  test::Rng rng(97);
  for (int iter = 0; iter < 1000; ++iter) {
    const int n = rng.range(1, 10);
    const Sentence s = heads_only(test::random_tree_heads(rng, n));
    CHECK(static_cast<int>(check_projectivity(s).size()) == test::oracle_crossing_count(s));
  }
}

TEST_CASE("relation-inventory fixtures validate with zero errors", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank tb = test::load_fixture("relations.conllu");
  for (const auto& s : tb.sentences) {
    const ValidationReport report = validate_sentence(s, reg);
    INFO("sentence " << s.sent_id);
    CHECK(report.passed);
    CHECK(report.diagnostics.empty());
  }
}

TEST_CASE("zero-copula sentence passes; duplicated root flags P2", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  Sentence s = test::sentence({test::tok(1, "U", "u", "Pron", 2, "cop:zero"),
                               test::tok(2, "oqutqufə", "oqutqufə", "N", 0, "root"),
                               test::tok(3, ".", ".", "Punct", 2, "punct")});
  CHECK(validate_sentence(s, reg).passed);

  s.tokens[0].head = 0;
  s.tokens[0].deprel = "root";
  const ValidationReport report = validate_sentence(s, reg);
  CHECK_FALSE(report.passed);
  CHECK(error_codes(report) == std::set<std::string>{"P2"});
}

TEST_CASE("conj chain passes and a reversed arc flags C2", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank pass = test::load_fixture("relations.conllu");
  CHECK(validate_sentence(test::sentence_by_id(pass, "rel-conj"), reg).passed);

  const Treebank fail = test::load_fixture("checks/C2_fail.conllu");
  const ValidationReport report = validate_sentence(fail.sentences[0], reg);
  CHECK(error_codes(report) == std::set<std::string>{"C2"});
}

TEST_CASE("each principle and construction check has a pass and a fail fixture",
          "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const std::vector<std::string> codes = {"P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8",
                                          "C1", "C2", "C3", "C4", "C5", "C6"};
  for (const auto& code : codes) {
    INFO("check " << code);
    const Treebank pass = test::load_fixture("checks/" + code + "_pass.conllu");
    REQUIRE(pass.sentences.size() == 1);
    const ValidationReport clean = validate_sentence(pass.sentences[0], reg);
    CHECK(clean.passed);
    CHECK(clean.diagnostics.empty());

    const Treebank fail = test::load_fixture("checks/" + code + "_fail.conllu");
    REQUIRE(fail.sentences.size() == 1);
    const ValidationReport flagged = validate_sentence(fail.sentences[0], reg);
    CHECK_FALSE(flagged.passed);
    CHECK(error_codes(flagged) == std::set<std::string>{code});
  }
}

TEST_CASE("P9 notes accompany construction findings as warnings only", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank fail = test::load_fixture("checks/C1_fail.conllu");
  const ValidationReport report = validate_sentence(fail.sentences[0], reg);
  bool p9 = false;
  for (const auto& d : report.diagnostics) {
    if (d.code == "P9") {
      p9 = true;
      CHECK(d.severity == Severity::warning);
    }
  }
  CHECK(p9);

  // no construction finding, no P9
  const Treebank pfail = test::load_fixture("checks/P2_fail.conllu");
  CHECK_FALSE(validate_sentence(pfail.sentences[0], reg).has_code("P9"));
}

TEST_CASE("C4 treats a missing Case feature as a warning", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Sentence s = test::sentence({test::tok(1, "jerdin", "jer", "N", 2, "case:abl"),
                                     test::tok(2, "keldi", "kəl", "V", 0, "root")});
  const ValidationReport report = validate_sentence(s, reg);
  CHECK(report.passed);  // warning severity does not fail the sentence
  REQUIRE(report.has_code("C4"));
  for (const auto& d : report.diagnostics) {
    if (d.code == "C4") CHECK(d.severity == Severity::warning);
  }
}

TEST_CASE("discourse attachment below a non-predicate is an error", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  Sentence s = test::sentence({test::tok(1, "Həə", "həə", "Intj", 2, "discourse"),
                               test::tok(2, "kitab", "kitab", "N", 3, "obj"),
                               test::tok(3, "aldim", "al", "V", 0, "root")});
  CHECK(error_codes(validate_sentence(s, reg)) == std::set<std::string>{"E_DISCOURSE"});

  s.tokens[0].head = 3;  // root attachment is the documented analysis
  CHECK(validate_sentence(s, reg).passed);
}

TEST_CASE("validation is pure and repeatable", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank tb = test::load_fixture("checks/C3_fail.conllu");
  const Sentence copy = tb.sentences[0];
  const ValidationReport first = validate_sentence(tb.sentences[0], reg);
  const ValidationReport second = validate_sentence(tb.sentences[0], reg);
  CHECK(tb.sentences[0] == copy);
  CHECK(first.diagnostics == second.diagnostics);
  CHECK(first.passed == second.passed);
}

TEST_CASE("report TSV serialization", "[validator]") {
  const SchemaRegistry reg = SchemaRegistry::mudt();
  const Treebank fail = test::load_fixture("checks/P2_fail.conllu");
  const ValidationReport report = validate_sentence(fail.sentences[0], reg);
  const std::string tsv = report_tsv(report);
  CHECK(tsv.find("p2-fail\tP2\terror\t2,3\t") != std::string::npos);
}
