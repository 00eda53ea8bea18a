#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mudt/cli.hpp"
#include "test_support.hpp"

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args, const std::string& stdin_data = "") {
  std::istringstream in(stdin_data);
  std::ostringstream out, err;
  const int code = mudt::cli::run(std::move(args), in, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << content;
  return path.string();
}

}  // namespace

TEST_CASE("validate on the clean relation-inventory fixtures exits 0 with 0 errors", "[cli]") {
  const auto r = run_cli({"validate", test::fixture_path("relations.conllu")});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 errors") != std::string::npos);
}

TEST_CASE("validate flags a two-root sentence and exits 1", "[cli]") {
  const auto r = run_cli({"validate", test::fixture_path("checks/P2_fail.conllu")});
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("P2") != std::string::npos);
}

TEST_CASE("validate TSV format emits the report contract lines", "[cli]") {
  const auto r = run_cli(
      {"validate", "--format", "tsv", test::fixture_path("checks/P2_fail.conllu")});
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("p2-fail\tP2\terror\t") != std::string::npos);
}

TEST_CASE("eval of a file against itself prints perfect scores", "[cli]") {
  const std::string gold = test::fixture_path("relations.conllu");
  const auto r = run_cli({"eval", gold, gold});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("LAS F1  100.00") != std::string::npos);
  CHECK(r.out.find("MLAS    100.00") != std::string::npos);
  CHECK(r.out.find("BLEX    100.00") != std::string::npos);
}

TEST_CASE("eval json output is machine-parseable", "[cli]") {
  const std::string gold = test::fixture_path("morphology.conllu");
  const auto r = run_cli({"eval", "--format", "json", gold, gold});
  REQUIRE(r.exit_code == 0);
  const auto parsed = nlohmann::json::parse(r.out);
  CHECK(parsed.at("las_f1") == "100.00");
  CHECK(parsed.at("aligned_tokens") == 4);
}

TEST_CASE("eval --min-las gates the exit code", "[cli]") {
  const std::string gold = test::fixture_path("divergence_gold.conllu");
  const std::string pred = test::fixture_path("divergence_pred.conllu");
  CHECK(run_cli({"eval", gold, pred, "--min-las", "99"}).exit_code == 1);
  CHECK(run_cli({"eval", gold, pred, "--min-las", "10"}).exit_code == 0);
}

TEST_CASE("unknown commands and flags exit 2 with usage on stderr", "[cli]") {
  const auto bad_cmd = run_cli({"frobnicate", "x"});
  CHECK(bad_cmd.exit_code == 2);
  CHECK_FALSE(bad_cmd.err.empty());
  const auto bad_flag = run_cli({"validate", "--no-such-flag", "x"});
  CHECK(bad_flag.exit_code == 2);
  const auto no_cmd = run_cli({});
  CHECK(no_cmd.exit_code == 2);
}

TEST_CASE("missing input files exit 2", "[cli]") {
  const auto r = run_cli({"validate", "/nonexistent/nothing.conllu"});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("E_IO") != std::string::npos);
}

TEST_CASE("parse errors exit 2 and are reported with line numbers", "[cli]") {
  const std::string path = temp_file("mudt_cli_bad.conllu",
                                     "1\tU\tu\tPron\t_\t_\t2\tnsubj\t_\n\n");
  const auto r = run_cli({"validate", path});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("E_COLUMNS") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("dash reads standard input", "[cli]") {
  const std::string data = test::read_file(test::fixture_path("relations.conllu"));
  const auto r = run_cli({"validate", "-"}, data);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 errors") != std::string::npos);
}

TEST_CASE("convert rewrites the UD-style divergence file into the gold bytes", "[cli]") {
  const auto out_path = std::filesystem::temp_directory_path() / "mudt_cli_convert.conllu";
  const auto r = run_cli({"convert", test::fixture_path("divergence_pred.conllu"), "--output",
                          out_path.string()});
  REQUIRE(r.exit_code == 0);
  CHECK(test::read_file(out_path.string()) ==
        test::read_file(test::fixture_path("divergence_gold.conllu")));
  std::filesystem::remove(out_path);
}

TEST_CASE("convert writes a rewrite trace", "[cli]") {
  const auto trace_path = std::filesystem::temp_directory_path() / "mudt_cli_trace.tsv";
  const auto r = run_cli({"convert", test::fixture_path("divergence_pred.conllu"), "--output", "-",
                          "--trace", trace_path.string()});
  REQUIRE(r.exit_code == 0);
  const std::string trace = test::read_file(trace_path.string());
  CHECK(trace.find("div-case\tR1\t3\t4:obl\t4:case:dat") != std::string::npos);
  CHECK(trace.find("div-compound\tR2\t") != std::string::npos);
  std::filesystem::remove(trace_path);
}

TEST_CASE("convert --diff lists before/after arcs", "[cli]") {
  const auto r = run_cli({"convert", "--diff", test::fixture_path("divergence_pred.conllu")});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("# div-case") != std::string::npos);
  CHECK(r.out.find("->") != std::string::npos);
  CHECK(r.out.find("(R1)") != std::string::npos);
}

TEST_CASE("convert --rules restricts the applied ruleset", "[cli]") {
  const auto r = run_cli({"convert", "--rules", "R1", "--output", "-",
                          test::fixture_path("divergence_pred.conllu")});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("case:dat") != std::string::npos);   // R1 applied
  CHECK(r.out.find("compound") != std::string::npos);   // R3 skipped
}

TEST_CASE("diff reports the five categories", "[cli]") {
  const auto r = run_cli({"diff", "--format", "tsv", test::fixture_path("divergence_gold.conllu"),
                          test::fixture_path("divergence_pred.conllu")});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("category\tquotative\t1") != std::string::npos);
  CHECK(r.out.find("category\tother\t0") != std::string::npos);
  CHECK(r.out.find("agreement_rate\t69.70") != std::string::npos);
}

TEST_CASE("stats summarizes a corpus", "[cli]") {
  const auto r = run_cli({"stats", test::fixture_path("relations.conllu")});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("sentences:          25") != std::string::npos);
  CHECK(r.out.find("projectivity rate:  100.00") != std::string::npos);
}

TEST_CASE("output is deterministic and --jobs preserves input order", "[cli]") {
  const std::string path = test::fixture_path("relations.conllu");
  const auto a = run_cli({"validate", "--format", "tsv", path});
  const auto b = run_cli({"validate", "--format", "tsv", path});
  CHECK(a.out == b.out);
  const auto serial = run_cli({"convert", "--output", "-", path});
  const auto parallel = run_cli({"convert", "--jobs", "4", "--output", "-", path});
  CHECK(serial.out == parallel.out);
  CHECK(serial.exit_code == 0);
  CHECK(parallel.exit_code == 0);
}

TEST_CASE("registry overrides apply from --registry", "[cli]") {
  // obl:abl is alias-resolved to case:abl by the sample config, so the
  // validator accepts it instead of flagging E_REL_UNKNOWN
  const std::string path = temp_file(
      "mudt_cli_alias.conllu",
      "1\tjerdin\tjer\tN\t_\tCase=ABL\t2\tobl:abl\t_\t_\n"
      "2\tkeldi\tkəl\tV\t_\t_\t0\troot\t_\t_\n\n");
  const auto without = run_cli({"validate", path});
  CHECK(without.exit_code == 1);
  const auto with = run_cli(
      {"validate", "--registry", test::fixture_path("registry_extra.tsv"), path});
  CHECK(with.exit_code == 0);
  std::remove(path.c_str());
}
