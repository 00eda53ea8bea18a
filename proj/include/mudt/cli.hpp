// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_CLI_HPP
#define MUDT_CLI_HPP

#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mudt/conllu.hpp"
#include "mudt/metrics.hpp"
#include "mudt/schema.hpp"
#include "mudt/stats.hpp"
#include "mudt/transform.hpp"
#include "mudt/validator.hpp"

// Command-line front end.
//
//   mudt validate FILE...        principle/construction diagnostics
//   mudt convert FILE...         UD-style -> MUDT rewrite, CoNLL-U out
//   mudt eval GOLD PRED          UAS/LAS/MLAS/BLEX
//   mudt diff GOLD PRED          label confusion + divergence categories
//   mudt stats FILE...           corpus statistics
//
// Exit codes: 0 clean, 1 validation errors found or metric threshold unmet,
// 2 input/usage error. "-" reads standard input. Processing is streaming,
// sentence-parallel behind --jobs, and output order always matches input
// order.

namespace mudt::cli {

namespace detail {

using nlohmann::json;

struct Options {
  std::vector<std::string> inputs;
  std::string output = "-";
  std::string format = "text";
  std::string registry_path;
  std::string rules;
  std::string trace_path;
  double min_las = -1.0;
  bool strict = false;
  bool show_diff = false;
  int jobs = 1;
};

struct IoStreams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

class InputFile {
 public:
  InputFile(const std::string& path, std::istream& stdin_stream) : path_(path) {
    if (path == "-") {
      stream_ = &stdin_stream;
    } else {
      file_ = std::make_unique<std::ifstream>(path);
      if (!*file_) throw Error("E_IO", "cannot open input file '" + path + "'");
      stream_ = file_.get();
    }
  }

  std::istream& stream() { return *stream_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& stdout_stream) {
    if (path == "-" || path.empty()) {
      stream_ = &stdout_stream;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("E_IO", "cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }

  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline SchemaRegistry make_registry(const Options& opts) {
  SchemaRegistry reg = SchemaRegistry::mudt();
  if (!opts.registry_path.empty()) reg.load_config_file(opts.registry_path);
  return reg;
}

inline void report_parse_errors(const std::string& file, const std::vector<ParseError>& errors,
                                std::ostream& err) {
  for (const auto& e : errors) {
    err << file << ":" << e.line << ": " << e.code << ": " << e.message << "\n";
  }
}

// Streams sentences through `process`, emitting results in input order.
// With jobs > 1, batches are fanned out over std::async workers.
template <typename Result, typename Process, typename Emit>
void process_sentences(std::istream& in, const Options& opts, std::vector<ParseError>& errors,
                       Process process, Emit emit) {
  SentenceReader reader(in);
  std::vector<Sentence> batch;
  const std::size_t batch_size =
      opts.jobs > 1 ? static_cast<std::size_t>(opts.jobs) * 16 : 1;

  const auto flush = [&] {
    if (batch.empty()) return;
    if (opts.jobs <= 1 || batch.size() < 2) {
      for (const Sentence& s : batch) emit(process(s));
    } else {
      const std::size_t chunk = (batch.size() + opts.jobs - 1) / opts.jobs;
      std::vector<std::future<std::vector<Result>>> futures;
      for (std::size_t begin = 0; begin < batch.size(); begin += chunk) {
        const std::size_t end = std::min(begin + chunk, batch.size());
        futures.push_back(std::async(std::launch::async, [&, begin, end] {
          std::vector<Result> results;
          results.reserve(end - begin);
          for (std::size_t i = begin; i < end; ++i) results.push_back(process(batch[i]));
          return results;
        }));
      }
      for (auto& f : futures) {
        for (Result& r : f.get()) emit(std::move(r));
      }
    }
    batch.clear();
  };

  Sentence s;
  bool ok = false;
  while (reader.next(s, errors, ok)) {
    if (!ok) {
      if (opts.strict) break;
      continue;
    }
    batch.push_back(std::move(s));
    if (batch.size() >= batch_size) flush();
  }
  flush();
}

inline json diagnostic_json(const Diagnostic& d) {
  return json{{"code", d.code},
              {"severity", severity_name(d.severity)},
              {"tokens", d.token_ids},
              {"message", d.message}};
}

// --------------------------------------------------------------------------
// validate

inline int cmd_validate(const Options& opts, IoStreams io) {
  const SchemaRegistry reg = make_registry(opts);
  OutputFile output(opts.output, io.out);
  std::ostream& out = output.stream();

  long error_count = 0, warning_count = 0, sentence_count = 0;
  bool any_parse_error = false;
  json json_sentences = json::array();

  for (const auto& path : opts.inputs) {
    InputFile input(path, io.in);
    std::size_t index = 0;
    std::vector<ParseError> parse_errors;
    process_sentences<ValidationReport>(
        input.stream(), opts, parse_errors,
        [&reg](const Sentence& s) { return validate_sentence(s, reg); },
        [&](ValidationReport report) {
          ++sentence_count;
          ++index;
          if (report.sent_id.empty()) report.sent_id = path + "#" + std::to_string(index);
          for (const auto& d : report.diagnostics) {
            (d.severity == Severity::error ? error_count : warning_count)++;
          }
          if (opts.format == "tsv") {
            out << report_tsv(report);
          } else if (opts.format == "json") {
            json diags = json::array();
            for (const auto& d : report.diagnostics) diags.push_back(diagnostic_json(d));
            json_sentences.push_back(json{{"sent_id", report.sent_id},
                                          {"passed", report.passed},
                                          {"diagnostics", diags}});
          } else {
            for (const auto& d : report.diagnostics) {
              std::vector<std::string> ids;
              for (int id : d.token_ids) ids.push_back(std::to_string(id));
              out << "[" << report.sent_id << "] " << d.code << " "
                  << severity_name(d.severity) << " (tokens " << str::join(ids, ",")
                  << "): " << d.message << "\n";
            }
          }
        });
    report_parse_errors(path, parse_errors, io.err);
    any_parse_error = any_parse_error || !parse_errors.empty();
  }

  if (opts.format == "json") {
    out << json{{"sentences", json_sentences},
                {"errors", error_count},
                {"warnings", warning_count}}
               .dump(2)
        << "\n";
  } else if (opts.format == "text") {
    out << error_count << " errors, " << warning_count << " warnings in " << sentence_count
        << " sentences\n";
  } else {
    io.err << error_count << " errors, " << warning_count << " warnings in " << sentence_count
           << " sentences\n";
  }
  if (any_parse_error) return 2;
  return error_count > 0 ? 1 : 0;
}

// --------------------------------------------------------------------------
// convert

inline int cmd_convert(const Options& opts, IoStreams io) {
  const SchemaRegistry reg = make_registry(opts);
  const RuleSet rules = opts.rules.empty() ? RuleSet{} : RuleSet::only(opts.rules);
  OutputFile output(opts.output, io.out);
  std::ostream& out = output.stream();

  std::unique_ptr<OutputFile> trace_file;
  std::ostream* trace_out = &io.err;
  if (!opts.trace_path.empty()) {
    trace_file = std::make_unique<OutputFile>(opts.trace_path, io.out);
    trace_out = &trace_file->stream();
  }

  bool any_parse_error = false;
  struct Converted {
    Sentence sentence;
    TransformTrace trace;
  };

  for (const auto& path : opts.inputs) {
    InputFile input(path, io.in);
    std::vector<ParseError> parse_errors;
    process_sentences<Converted>(
        input.stream(), opts, parse_errors,
        [&](const Sentence& s) {
          auto [converted, trace] = apply_all(s, reg, rules);
          return Converted{std::move(converted), std::move(trace)};
        },
        [&](Converted result) {
          if (opts.show_diff) {
            out << "# " << (result.trace.sent_id.empty() ? "(sentence)" : result.trace.sent_id)
                << "\n";
            for (const auto& e : result.trace.applications) {
              if (!e.changed()) continue;
              const Token* t = result.sentence.find(e.token_id);
              out << "  " << (t ? t->form : "?") << "  " << e.old_head << ":"
                  << (e.old_rel.empty() ? "_" : e.old_rel) << "  ->  " << e.new_head << ":"
                  << (e.new_rel.empty() ? "_" : e.new_rel) << "  (" << e.rule << ")\n";
            }
          } else {
            serialize_sentence(out, result.sentence);
          }
          *trace_out << trace_tsv(result.trace);
          for (const auto& code : result.trace.residual_codes) {
            io.err << "residual " << code << " in '" << result.trace.sent_id << "'\n";
          }
        });
    report_parse_errors(path, parse_errors, io.err);
    any_parse_error = any_parse_error || !parse_errors.empty();
  }
  return any_parse_error ? 2 : 0;
}

// --------------------------------------------------------------------------
// eval / diff

inline Treebank load_treebank(const std::string& path, const Options& opts, IoStreams io) {
  InputFile input(path, io.in);
  ParseResult result = parse_treebank(input.stream(), {opts.strict});
  report_parse_errors(path, result.errors, io.err);
  if (!result.ok()) throw Error("E_IO", "parse errors in '" + path + "'");
  result.treebank.source = path;
  return std::move(result.treebank);
}

inline int cmd_eval(const Options& opts, IoStreams io) {
  const SchemaRegistry reg = make_registry(opts);
  MetricConfig cfg = MetricConfig::standard();
  if (!opts.registry_path.empty()) cfg.load_config_file(opts.registry_path);

  const Treebank gold = load_treebank(opts.inputs[0], opts, io);
  const Treebank pred = load_treebank(opts.inputs[1], opts, io);
  const EvalScores scores = score(gold, pred, reg, cfg);

  OutputFile output(opts.output, io.out);
  std::ostream& out = output.stream();
  if (opts.format == "tsv") {
    out << score_tsv(scores);
  } else if (opts.format == "json") {
    json labels = json::object();
    for (const auto& [label, pl] : scores.per_label) {
      labels[label] = json{{"precision", format_pct(pl.precision)},
                           {"recall", format_pct(pl.recall)},
                           {"f1", format_pct(pl.f1)},
                           {"gold", pl.gold_n},
                           {"predicted", pl.pred_n},
                           {"correct", pl.correct}};
    }
    out << json{{"uas_f1", format_pct(scores.uas_f1)},
                {"las_f1", format_pct(scores.las_f1)},
                {"mlas", format_pct(scores.mlas)},
                {"blex", format_pct(scores.blex)},
                {"aligned_tokens", scores.counts.aligned},
                {"gold_tokens", scores.counts.gold_total},
                {"predicted_tokens", scores.counts.pred_total},
                {"per_label", labels}}
               .dump(2)
        << "\n";
  } else {
    out << score_text(scores);
  }
  if (opts.min_las >= 0 && scores.las_f1 < opts.min_las) return 1;
  return 0;
}

inline int cmd_diff(const Options& opts, IoStreams io) {
  const SchemaRegistry reg = make_registry(opts);
  const Treebank gold = load_treebank(opts.inputs[0], opts, io);
  const Treebank pred = load_treebank(opts.inputs[1], opts, io);
  const DivergenceReport report = divergence(gold, pred, reg);

  OutputFile output(opts.output, io.out);
  std::ostream& out = output.stream();
  if (opts.format == "tsv") {
    out << divergence_tsv(report);
  } else if (opts.format == "json") {
    json confusion = json::array();
    for (const auto& [pair, count] : report.confusion) {
      confusion.push_back(json{{"gold", pair.first}, {"predicted", pair.second}, {"count", count}});
    }
    out << json{{"agreement_rate", format_pct(report.agreement_rate)},
                {"aligned_tokens", report.aligned},
                {"categories", report.categories},
                {"confusion", confusion}}
               .dump(2)
        << "\n";
  } else {
    out << divergence_text(report);
  }
  return 0;
}

// --------------------------------------------------------------------------
// stats

inline int cmd_stats(const Options& opts, IoStreams io) {
  CorpusStats stats;
  bool any_parse_error = false;
  for (const auto& path : opts.inputs) {
    InputFile input(path, io.in);
    std::vector<ParseError> parse_errors;
    process_sentences<Sentence>(
        input.stream(), opts, parse_errors, [](const Sentence& s) { return s; },
        [&](Sentence s) { stats.add(s); });
    report_parse_errors(path, parse_errors, io.err);
    any_parse_error = any_parse_error || !parse_errors.empty();
  }

  OutputFile output(opts.output, io.out);
  std::ostream& out = output.stream();
  if (opts.format == "tsv") {
    out << stats_tsv(stats);
  } else if (opts.format == "json") {
    out << json{{"sentences", stats.sentences},
                {"tokens", stats.tokens},
                {"well_formed_trees", stats.well_formed},
                {"malformed_trees", stats.malformed},
                {"projectivity_rate", format_pct(stats.projectivity_rate())},
                {"mean_tree_depth", format_pct(stats.mean_tree_depth())},
                {"labels", stats.label_freq},
                {"features", stats.feat_freq}}
               .dump(2)
        << "\n";
  } else {
    out << stats_text(stats);
  }
  return any_parse_error ? 2 : 0;
}

}  // namespace detail

// Entry point shared by the binary and the tests. Streams are injectable so
// the whole surface is testable without a process boundary.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"treebank toolkit for the MUDT annotation scheme"};
  app.require_subcommand(1);

  detail::Options opts;
  const auto add_common = [&](CLI::App* cmd, bool multi_input) {
    cmd->add_option("files", opts.inputs, "input CoNLL-U file(s), '-' for stdin")
        ->required()
        ->expected(multi_input ? -1 : 2);
    cmd->add_option("--output", opts.output, "output path, '-' for stdout");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "tsv", "json"}));
    cmd->add_option("--registry", opts.registry_path, "registry config overrides");
    cmd->add_flag("--strict", opts.strict, "abort on the first parse error");
    cmd->add_option("--jobs", opts.jobs, "sentence-parallel workers")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand("validate", "check annotation principles");
  add_common(validate, true);
  CLI::App* convert = app.add_subcommand("convert", "rewrite UD-style annotation into MUDT");
  add_common(convert, true);
  convert->add_option("--rules", opts.rules, "enable only these rules, e.g. R1,R5");
  convert->add_option("--trace", opts.trace_path, "write the rewrite trace TSV here");
  convert->add_flag("--diff", opts.show_diff, "print before/after arcs instead of CoNLL-U");
  CLI::App* eval = app.add_subcommand("eval", "attachment scores (gold vs predicted)");
  add_common(eval, false);
  eval->add_option("--min-las", opts.min_las, "exit 1 when LAS F1 falls below this");
  CLI::App* diff = app.add_subcommand("diff", "divergence report (gold vs predicted)");
  add_common(diff, false);
  CLI::App* stats = app.add_subcommand("stats", "corpus statistics");
  add_common(stats, true);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes back-to-front
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    err << app.help();
    return 2;
  }

  const detail::IoStreams io{in, out, err};
  try {
    if (*validate) return detail::cmd_validate(opts, io);
    if (*convert) return detail::cmd_convert(opts, io);
    if (*eval) return detail::cmd_eval(opts, io);
    if (*diff) return detail::cmd_diff(opts, io);
    if (*stats) return detail::cmd_stats(opts, io);
  } catch (const Error& e) {
    err << e.code() << ": " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace mudt::cli

#endif  // MUDT_CLI_HPP
