// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_CONLLU_HPP
#define MUDT_CONLLU_HPP

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mudt/common.hpp"

// Extended CoNLL-U reader/writer.
//
// The file format is standard CoNLL-U: sentences separated by a blank line,
// '#'-prefixed comment lines, one token per line with 10 tab-separated
// columns, '_' for empty fields.
//
//   1  ID      token index, 1-based; "i-j" multiword ranges and "i.j" empty
//              nodes are preserved verbatim and excluded from the tree
//   2  FORM    surface form (morphology layer 1)
//   3  LEMMA   root/basic form (layer 2)
//   4  UPOS    main POS tag (the 13-tag inventory lives in schema.hpp)
//   5  XPOS    subcategory annotation, e.g. "N[+pern]"
//   6  FEATS   '|'-separated Key=Value morphosyntactic features (layer 4)
//   7  HEAD    index of the governing token, 0 for root
//   8  DEPREL  dependency relation label
//   9  DEPS    preserved verbatim (basic trees only; the validator flags use)
//  10  MISC    residual annotations; the keys "MSeg" and "MGloss" carry the
//              morpheme segmentation layer (layer 3) and its gloss
//
// Canonical serialization is byte-stable: FEATS sorted by key, MSeg/MGloss
// first in MISC followed by residual keys in input order, one blank line
// after every sentence.

namespace mudt {

inline constexpr std::string_view kMSegKey = "MSeg";
inline constexpr std::string_view kMGlossKey = "MGloss";

// Layer 3: hyphen-separated morphs, root first. Segments are not required to
// concatenate to the surface form (surface "oqyanlarimdin" vs segments
// oqu-yan-lar-im-din).
struct MorphSegmentation {
  std::vector<std::string> segments;
  std::vector<std::string> gloss;  // empty, or one gloss per segment

  bool operator==(const MorphSegmentation&) const = default;
};

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string pos;      // UPOS; empty when the column is '_'
  std::string pos_sub;  // XPOS
  std::map<std::string, std::string> feats;  // sorted by key = canonical order
  int head = -1;
  std::string deprel;
  std::string deps = "_";  // column 9, verbatim
  std::optional<MorphSegmentation> mseg;
  OrderedMap misc;  // residual MISC keys; MSeg/MGloss are lifted into mseg

  std::optional<std::string> feat(std::string_view key) const {
    auto it = feats.find(std::string(key));
    if (it == feats.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Token&) const = default;
};

// A multiword range line ("2-3") or empty node ("4.1"), kept verbatim.
// after_token is the number of regular tokens seen before the line.
struct RawNode {
  std::size_t after_token = 0;
  std::string line;

  bool operator==(const RawNode&) const = default;
};

struct Sentence {
  std::string sent_id;  // from "# sent_id = ..." if present
  std::string text;     // from "# text = ..." if present
  std::vector<std::string> comments;  // all comment lines, verbatim
  std::vector<Token> tokens;
  std::vector<RawNode> raw_nodes;

  const Token* find(int id) const {
    if (id < 1 || id > static_cast<int>(tokens.size())) return nullptr;
    return &tokens[static_cast<std::size_t>(id) - 1];
  }
  Token* find(int id) {
    if (id < 1 || id > static_cast<int>(tokens.size())) return nullptr;
    return &tokens[static_cast<std::size_t>(id) - 1];
  }

  bool operator==(const Sentence&) const = default;
};

struct Treebank {
  std::vector<Sentence> sentences;
  std::string source;

  bool operator==(const Treebank& other) const {
    return sentences == other.sentences;
  }
};

struct ParseError {
  std::size_t line = 0;
  std::string code;
  std::string message;
};

struct ParseOptions {
  bool strict = false;  // strict: stop at the first error instead of skipping
};

struct ParseResult {
  Treebank treebank;
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty(); }
};

// ---------------------------------------------------------------------------
// Field-level parsers

// Canonical feature casing: Case values uppercase, everything else title case
// (input matching is case-insensitive, output uses the canonical spellings).
inline std::string canonical_feat_key(std::string_view key) {
  for (std::string_view k : {"Case", "Tense", "Number", "Person", "Aspect", "Mood", "VerbForm"}) {
    if (str::iequals(key, k)) return std::string(k);
  }
  return std::string(key);
}

inline std::string canonical_feat_value(std::string_view key, std::string_view value) {
  if (str::iequals(key, "Case")) return str::upper(value);
  return str::title(value);
}

// FEATS column -> map. '_' yields an empty map.
inline std::map<std::string, std::string> parse_feats(std::string_view raw) {
  std::map<std::string, std::string> out;
  if (raw.empty() || raw == "_") return out;
  for (const std::string& pair : str::split(raw, '|')) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error("E_FEATS", "malformed FEATS pair '" + pair + "'");
    }
    std::string key = canonical_feat_key(std::string_view(pair).substr(0, eq));
    std::string value = canonical_feat_value(key, std::string_view(pair).substr(eq + 1));
    if (value.empty()) throw Error("E_FEATS", "empty value in FEATS pair '" + pair + "'");
    if (!out.emplace(key, value).second) {
      throw Error("E_FEATS", "duplicate FEATS key '" + key + "'");
    }
  }
  return out;
}

// "oqu-yan-lar-im-din" -> [oqu, yan, lar, im, din]; root is segment 0.
inline MorphSegmentation parse_mseg(std::string_view raw) {
  if (raw.empty()) throw Error("E_MSEG", "empty morpheme segmentation");
  MorphSegmentation ms;
  ms.segments = str::split(raw, '-');
  for (const auto& seg : ms.segments) {
    if (seg.empty()) throw Error("E_MSEG", "empty segment in '" + std::string(raw) + "'");
  }
  return ms;
}

inline std::string serialize_feats(const std::map<std::string, std::string>& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (const auto& [k, v] : feats) {
    if (!out.empty()) out += '|';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

inline std::string serialize_misc(const Token& tok) {
  std::vector<std::string> parts;
  if (tok.mseg) {
    parts.push_back(std::string(kMSegKey) + "=" + str::join(tok.mseg->segments, "-"));
    if (!tok.mseg->gloss.empty()) {
      parts.push_back(std::string(kMGlossKey) + "=" + str::join(tok.mseg->gloss, "-"));
    }
  }
  for (const auto& [k, v] : tok.misc) {
    parts.push_back(v.empty() ? k : k + "=" + v);
  }
  if (parts.empty()) return "_";
  return str::join(parts, "|");
}

// ---------------------------------------------------------------------------
// Streaming reader

namespace detail {

inline std::string unescape_underscore(std::string_view col) {
  return col == "_" ? std::string() : std::string(col);
}

inline bool is_range_id(std::string_view id) {
  const auto dash = id.find('-');
  if (dash == std::string_view::npos) return false;
  return str::all_digits(id.substr(0, dash)) && str::all_digits(id.substr(dash + 1));
}

inline bool is_empty_node_id(std::string_view id) {
  const auto dot = id.find('.');
  if (dot == std::string_view::npos) return false;
  return str::all_digits(id.substr(0, dot)) && str::all_digits(id.substr(dot + 1));
}

inline void extract_metadata(Sentence& s, std::string_view comment) {
  std::string_view body = comment;
  body.remove_prefix(1);  // '#'
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return;
  const auto key = str::trim(body.substr(0, eq));
  const auto value = str::trim(body.substr(eq + 1));
  if (key == "sent_id") s.sent_id = std::string(value);
  else if (key == "text") s.text = std::string(value);
}

}  // namespace detail

// Reads one blank-line-delimited sentence at a time; constant memory per
// sentence. A sentence that fails to parse is reported through `errors` and
// skipped (the reader moves on to the next block).
class SentenceReader {
 public:
  explicit SentenceReader(std::istream& in) : in_(in) {}

  std::size_t line_number() const noexcept { return line_no_; }

  // Returns false at end of input. On a malformed block, appends to `errors`
  // and returns true with `ok` set to false.
  bool next(Sentence& out, std::vector<ParseError>& errors, bool& ok) {
    out = Sentence{};
    ok = true;
    bool saw_content = false;
    std::string line;
    std::vector<std::size_t> token_lines;

    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) {
        if (saw_content) break;
        continue;  // tolerate extra blank lines between sentences
      }
      saw_content = true;
      if (!ok) continue;  // draining a failed block until its blank line
      if (line[0] == '#') {
        out.comments.push_back(line);
        detail::extract_metadata(out, line);
        continue;
      }
      try {
        parse_token_line(line, out);
        token_lines.push_back(line_no_);
      } catch (const Error& e) {
        errors.push_back({line_no_, e.code(), e.what()});
        ok = false;
      }
    }
    if (!saw_content) return false;
    if (ok) check_heads(out, token_lines, errors, ok);
    return true;
  }

 private:
  void parse_token_line(const std::string& line, Sentence& s) {
    const auto cols = str::split(line, '\t');
    if (cols.size() != 10) {
      throw Error("E_COLUMNS",
                  "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    }
    if (detail::is_range_id(cols[0]) || detail::is_empty_node_id(cols[0])) {
      s.raw_nodes.push_back({s.tokens.size(), line});
      return;
    }
    if (!str::all_digits(cols[0])) {
      throw Error("E_ID", "malformed token id '" + cols[0] + "'");
    }

    Token tok;
    try {
      tok.id = std::stoi(cols[0]);
    } catch (const std::exception&) {
      throw Error("E_ID", "token id '" + cols[0] + "' out of range");
    }
    const int expected = static_cast<int>(s.tokens.size()) + 1;
    if (tok.id != expected) {
      if (tok.id >= 1 && tok.id <= static_cast<int>(s.tokens.size())) {
        throw Error("E_DUP_ID", "duplicate token id " + cols[0]);
      }
      throw Error("E_ID", "non-consecutive token id " + cols[0] + ", expected " +
                              std::to_string(expected));
    }
    tok.form = cols[1];
    tok.lemma = detail::unescape_underscore(cols[2]);
    tok.pos = detail::unescape_underscore(cols[3]);
    tok.pos_sub = detail::unescape_underscore(cols[4]);
    tok.feats = parse_feats(cols[5]);
    if (!str::all_digits(cols[6])) {
      throw Error("E_HEAD", "non-numeric head '" + cols[6] + "'");
    }
    try {
      tok.head = std::stoi(cols[6]);
    } catch (const std::exception&) {
      throw Error("E_HEAD", "head '" + cols[6] + "' out of range");
    }
    tok.deprel = detail::unescape_underscore(cols[7]);
    tok.deps = cols[8].empty() ? "_" : cols[8];
    parse_misc(cols[9], tok);
    s.tokens.push_back(std::move(tok));
  }

  static void parse_misc(const std::string& raw, Token& tok) {
    if (raw.empty() || raw == "_") return;
    std::optional<std::string> gloss;
    for (const std::string& entry : str::split(raw, '|')) {
      const auto eq = entry.find('=');
      const std::string key = eq == std::string::npos ? entry : entry.substr(0, eq);
      const std::string value = eq == std::string::npos ? "" : entry.substr(eq + 1);
      if (key == kMSegKey) {
        tok.mseg = parse_mseg(value);
      } else if (key == kMGlossKey) {
        gloss = value;
      } else {
        tok.misc.set(key, value);
      }
    }
    if (gloss) {
      if (!tok.mseg) throw Error("E_MSEG", "MGloss without MSeg");
      auto parts = str::split(*gloss, '-');
      if (parts.size() != tok.mseg->segments.size()) {
        throw Error("E_MSEG", "gloss count does not match segment count");
      }
      tok.mseg->gloss = std::move(parts);
    }
    if (tok.mseg && tok.mseg->segments.front() != tok.lemma) {
      throw Error("E_MSEG_LEMMA", "first segment '" + tok.mseg->segments.front() +
                                      "' does not match lemma '" + tok.lemma + "'");
    }
  }

  void check_heads(const Sentence& s, const std::vector<std::size_t>& token_lines,
                   std::vector<ParseError>& errors, bool& ok) const {
    const int n = static_cast<int>(s.tokens.size());
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (s.tokens[i].head > n) {
        errors.push_back({token_lines[i], "E_HEAD_RANGE",
                          "head " + std::to_string(s.tokens[i].head) + " out of range 0.." +
                              std::to_string(n)});
        ok = false;
      }
    }
  }

  std::istream& in_;
  std::size_t line_no_ = 0;
};

inline ParseResult parse_treebank(std::istream& in, ParseOptions opts = {}) {
  ParseResult result;
  SentenceReader reader(in);
  Sentence s;
  bool ok = false;
  while (reader.next(s, result.errors, ok)) {
    if (ok) {
      result.treebank.sentences.push_back(std::move(s));
    } else if (opts.strict) {
      break;
    }
  }
  return result;
}

inline ParseResult parse_treebank_text(std::string_view text, ParseOptions opts = {}) {
  std::istringstream in{std::string(text)};
  return parse_treebank(in, opts);
}

// ---------------------------------------------------------------------------
// Serialization

inline void serialize_sentence(std::ostream& out, const Sentence& s) {
  const auto has_meta_comment = [&](std::string_view key) {
    for (const auto& c : s.comments) {
      std::string_view body(c);
      body.remove_prefix(1);
      const auto eq = body.find('=');
      if (eq != std::string_view::npos && str::trim(body.substr(0, eq)) == key) return true;
    }
    return false;
  };
  if (!s.sent_id.empty() && !has_meta_comment("sent_id")) {
    out << "# sent_id = " << s.sent_id << '\n';
  }
  if (!s.text.empty() && !has_meta_comment("text")) {
    out << "# text = " << s.text << '\n';
  }
  for (const auto& c : s.comments) out << c << '\n';

  std::size_t raw_idx = 0;
  const auto flush_raw = [&](std::size_t upto) {
    while (raw_idx < s.raw_nodes.size() && s.raw_nodes[raw_idx].after_token <= upto) {
      out << s.raw_nodes[raw_idx].line << '\n';
      ++raw_idx;
    }
  };
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    flush_raw(i);
    const Token& t = s.tokens[i];
    out << t.id << '\t' << t.form << '\t' << (t.lemma.empty() ? "_" : t.lemma) << '\t'
        << (t.pos.empty() ? "_" : t.pos) << '\t' << (t.pos_sub.empty() ? "_" : t.pos_sub)
        << '\t' << serialize_feats(t.feats) << '\t' << t.head << '\t'
        << (t.deprel.empty() ? "_" : t.deprel) << '\t' << (t.deps.empty() ? "_" : t.deps)
        << '\t' << serialize_misc(t) << '\n';
  }
  flush_raw(s.tokens.size());
  out << '\n';
}

inline std::string serialize_treebank(const Treebank& tb) {
  std::ostringstream out;
  for (const auto& s : tb.sentences) serialize_sentence(out, s);
  return out.str();
}

// ---------------------------------------------------------------------------
// Tree view

// Children adjacency over token ids; index 0 is the virtual root.
struct DependencyTree {
  int root = 0;
  std::vector<std::vector<int>> children;  // children[h] in surface order

  const std::vector<int>& children_of(int id) const {
    return children[static_cast<std::size_t>(id)];
  }
};

// Throws E_CYCLE when any head path fails to reach the virtual root (cycles
// take precedence: a zero-root sentence always contains one), E_ROOT_COUNT
// when the root count is not exactly one.
inline DependencyTree build_tree(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  for (const Token& t : s.tokens) {
    if (t.head < 0 || t.head > n) {
      throw Error("E_HEAD_RANGE", "head " + std::to_string(t.head) + " out of range");
    }
  }
  // walk head links upward; revisiting a node of the current walk is a cycle
  std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 walking, 2 done
  for (const Token& t : s.tokens) {
    std::vector<int> path;
    int cur = t.id;
    while (cur != 0 && state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = s.tokens[static_cast<std::size_t>(cur) - 1].head;
    }
    if (cur != 0 && state[static_cast<std::size_t>(cur)] == 1) {
      throw Error("E_CYCLE", "dependency cycle through token " + std::to_string(cur));
    }
    for (int node : path) state[static_cast<std::size_t>(node)] = 2;
  }

  DependencyTree tree;
  tree.children.assign(static_cast<std::size_t>(n) + 1, {});
  int roots = 0;
  for (const Token& t : s.tokens) {
    if (t.head == 0) {
      ++roots;
      tree.root = t.id;
    }
    tree.children[static_cast<std::size_t>(t.head)].push_back(t.id);
  }
  if (roots != 1) {
    throw Error("E_ROOT_COUNT", "expected exactly one root, found " + std::to_string(roots));
  }
  return tree;
}

}  // namespace mudt

#endif  // MUDT_CONLLU_HPP
