// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_SCHEMA_HPP
#define MUDT_SCHEMA_HPP

#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mudt/common.hpp"
#include "mudt/conllu.hpp"
#include "mudt/diagnostic.hpp"

namespace mudt {

struct PosTag {
  std::string code;
  std::string name;
};

enum class RelationKind { core_argument, modifier, function, structural };

struct RelationLabel {
  std::string label;
  std::string main_category;
  RelationKind kind = RelationKind::modifier;

  bool operator==(const RelationLabel& o) const { return label == o.label; }
};

// Registry of the MUDT POS tagset (13 tags), the 26-label relation inventory,
// the feature vocabulary, label aliases, and the fixed-expression lexicon.
// Immutable once built; safe to share across threads.
class SchemaRegistry {
 public:
  // The standard scheme: 13 POS tags, 26 relations, the attested feature
  // values, the instr:* spelling aliases, and the three attested fixed
  // expressions (sewr qil-, həyran bol-, jaxfi kör-).
  static SchemaRegistry mudt() {
    SchemaRegistry reg;
    reg.pos_tags_ = {
        {"N", "Noun"},           {"A", "Adjective"},  {"Num", "Numeral"},
        {"M", "Measure"},        {"Adv", "Adverb"},   {"Pron", "Pronoun"},
        {"Onom", "Onomatopoeia"},{"V", "Verb"},       {"Post", "Postposition"},
        {"Conj", "Conjunction"}, {"Part", "Particle"},{"Intj", "Interjection"},
        {"Aux", "Auxiliary Verb"},
    };

    const auto add = [&](std::string_view label, std::string_view cat, RelationKind kind) {
      reg.relations_.emplace(std::string(label),
                             RelationLabel{std::string(label), std::string(cat), kind});
    };
    add("advcl", "advcl", RelationKind::modifier);
    add("appos", "appos", RelationKind::modifier);
    add("aux", "aux", RelationKind::function);
    add("case:abl", "case", RelationKind::modifier);
    add("case:loc", "case", RelationKind::modifier);
    add("case:dat", "case", RelationKind::modifier);
    add("case:poss", "case", RelationKind::modifier);
    add("cc", "cc", RelationKind::function);
    add("conj", "conj", RelationKind::modifier);
    add("cop", "cop", RelationKind::function);
    add("cop:zero", "cop", RelationKind::function);
    add("det", "det", RelationKind::modifier);
    add("discourse", "discourse", RelationKind::modifier);
    add("fixed", "fixed", RelationKind::modifier);
    add("instr:case=loc", "instr", RelationKind::modifier);
    add("instr:case=dat", "instr", RelationKind::modifier);
    add("instr:case=post", "instr", RelationKind::modifier);
    add("advmod", "advmod", RelationKind::modifier);
    add("amod", "amod", RelationKind::modifier);
    add("nmod", "nmod", RelationKind::modifier);
    add("nsubj", "nsubj", RelationKind::core_argument);
    add("nummod", "nummod", RelationKind::modifier);
    add("obj", "obj", RelationKind::core_argument);
    add("post", "post", RelationKind::function);
    add("punct", "punct", RelationKind::structural);
    add("root", "root", RelationKind::structural);

    // the instrumental subtypes circulate in two spellings; both resolve
    reg.aliases_ = {
        {"instr:post", "instr:case=post"},
        {"instr:loc", "instr:case=loc"},
        {"instr:dat", "instr:case=dat"},
        {"case:gen", "case:poss"},
    };

    reg.feat_vocab_ = {
        {"Case", {"ABL", "LOC", "DAT", "POSS", "GEN"}},
        {"Tense", {"Past", "Pres", "Fut"}},
        {"Number", {"Sing", "Plur"}},
        {"Person", {"1", "2", "3"}},
    };

    reg.fixed_lexicon_ = {{"sewr", "qil"}, {"həyran", "bol"}, {"jaxfi", "kör"}};
    reg.instrumental_postpositions_ = {"bilən", "bilen", "arqiliq"};
    return reg;
  }

  const std::vector<PosTag>& pos_tags() const { return pos_tags_; }
  const std::map<std::string, RelationLabel>& relations() const { return relations_; }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }
  const std::map<std::string, std::set<std::string>>& feat_vocab() const { return feat_vocab_; }
  const std::vector<std::pair<std::string, std::string>>& fixed_lexicon() const {
    return fixed_lexicon_;
  }
  const std::set<std::string>& instrumental_postpositions() const {
    return instrumental_postpositions_;
  }

  bool is_pos(std::string_view code) const {
    for (const auto& t : pos_tags_) {
      if (t.code == code) return true;
    }
    return false;
  }

  // Punctuation carries the structural tag "Punct", outside the 13-tag set.
  bool is_known_pos(std::string_view code) const {
    return code == "Punct" || is_pos(code);
  }

  const RelationLabel* find_relation(std::string_view label) const {
    auto it = relations_.find(std::string(label));
    return it == relations_.end() ? nullptr : &it->second;
  }

  bool is_fixed_pair(std::string_view first_lemma, std::string_view second_lemma) const {
    for (const auto& [a, b] : fixed_lexicon_) {
      if (a == first_lemma && b == second_lemma) return true;
    }
    return false;
  }

  bool is_instrumental_post(const Token& t) const {
    return instrumental_postpositions_.count(t.lemma) > 0 ||
           instrumental_postpositions_.count(t.form) > 0;
  }

  // Plain-text config: [aliases] / [features] / [fixed] / [instrumental]
  // sections with key<TAB>value lines (value-less for [instrumental]).
  // Entries extend the built-in registry; aliases may override.
  void load_config(std::istream& in) {
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto trimmed = str::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      if (trimmed.front() == '[' && trimmed.back() == ']') {
        section = std::string(trimmed.substr(1, trimmed.size() - 2));
        continue;
      }
      const auto tab = line.find('\t');
      const std::string key(str::trim(tab == std::string::npos ? line : line.substr(0, tab)));
      const std::string value(
          tab == std::string::npos ? "" : str::trim(line.substr(tab + 1)));
      if (section == "aliases") {
        if (value.empty() || !relations_.count(value)) {
          throw Error("E_CONFIG", "line " + std::to_string(line_no) +
                                      ": alias target '" + value + "' is not a registered label");
        }
        aliases_[key] = value;
      } else if (section == "features") {
        if (value.empty()) {
          throw Error("E_CONFIG",
                      "line " + std::to_string(line_no) + ": feature entry needs key<TAB>value");
        }
        feat_vocab_[canonical_feat_key(key)].insert(canonical_feat_value(key, value));
      } else if (section == "fixed") {
        if (key.empty() || value.empty()) {
          throw Error("E_CONFIG",
                      "line " + std::to_string(line_no) + ": fixed entry needs two lemmas");
        }
        fixed_lexicon_.emplace_back(strip_stem_hyphen(key), strip_stem_hyphen(value));
      } else if (section == "instrumental") {
        instrumental_postpositions_.insert(key);
      } else if (section.rfind("mlas-", 0) == 0) {
        // consumed by MetricConfig::load_config
      } else {
        throw Error("E_CONFIG",
                    "line " + std::to_string(line_no) + ": unknown section '" + section + "'");
      }
    }
  }

  void load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("E_CONFIG", "cannot open registry config '" + path + "'");
    load_config(in);
  }

 private:
  // lexicon entries may be written verb-stem style ("qil-")
  static std::string strip_stem_hyphen(std::string s) {
    if (!s.empty() && s.back() == '-') s.pop_back();
    return s;
  }

  std::vector<PosTag> pos_tags_;
  std::map<std::string, RelationLabel> relations_;
  std::map<std::string, std::string> aliases_;
  std::map<std::string, std::set<std::string>> feat_vocab_;
  std::vector<std::pair<std::string, std::string>> fixed_lexicon_;
  std::set<std::string> instrumental_postpositions_;
};

// Alias-resolving label lookup; nullopt for labels outside the inventory.
inline std::optional<std::string> try_normalize_label(std::string_view raw,
                                                      const SchemaRegistry& reg) {
  const std::string lowered = str::lower(str::trim(raw));
  if (reg.find_relation(lowered)) return lowered;
  auto it = reg.aliases().find(lowered);
  if (it != reg.aliases().end()) return it->second;
  return std::nullopt;
}

inline RelationLabel normalize_label(std::string_view raw, const SchemaRegistry& reg) {
  if (auto canon = try_normalize_label(raw, reg)) {
    return *reg.find_relation(*canon);
  }
  throw Error("E_UNKNOWN_LABEL", "unknown relation label '" + std::string(raw) + "'");
}

// Tag/label/feature assignment checks for a single token. Diagnostics, not
// failures: unknown POS, unregistered relation, out-of-vocabulary features,
// and noun-specific subcategory markers on non-noun tags.
inline std::vector<Diagnostic> validate_assignment(const Token& tok, const SchemaRegistry& reg) {
  std::vector<Diagnostic> out;
  const auto emit = [&](std::string code, Severity sev, std::string msg) {
    out.push_back({std::move(code), sev, {tok.id}, std::move(msg)});
  };

  if (!tok.pos.empty() && !reg.is_known_pos(tok.pos)) {
    emit("E_POS_UNKNOWN", Severity::error, "POS tag '" + tok.pos + "' is not in the tagset");
  }
  if (!tok.deprel.empty() && !try_normalize_label(tok.deprel, reg)) {
    emit("E_REL_UNKNOWN", Severity::error,
         "relation '" + tok.deprel + "' is not in the inventory");
  }
  for (const auto& [key, value] : tok.feats) {
    auto it = reg.feat_vocab().find(key);
    if (it == reg.feat_vocab().end()) {
      emit("E_FEAT_KEY", Severity::warning, "feature key '" + key + "' is not in the vocabulary");
    } else if (!it->second.count(value)) {
      emit("E_FEAT_VALUE", Severity::error,
           "value '" + value + "' is not allowed for feature '" + key + "'");
    }
  }
  if (!tok.pos_sub.empty() && tok.pos != "N") {
    static constexpr std::array<std::string_view, 4> noun_markers = {"+pern", "+job", "+date",
                                                                     "+state"};
    for (auto marker : noun_markers) {
      if (tok.pos_sub.find(marker) != std::string::npos) {
        emit("E_POS_SUB", Severity::error,
             "noun subcategory '" + tok.pos_sub + "' on POS '" + tok.pos + "'");
        break;
      }
    }
  }
  return out;
}

}  // namespace mudt

#endif  // MUDT_SCHEMA_HPP
