// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_VALIDATOR_HPP
#define MUDT_VALIDATOR_HPP

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mudt/conllu.hpp"
#include "mudt/diagnostic.hpp"
#include "mudt/schema.hpp"

// Principle and construction checks over a sentence.
//
//   P1  no isolated nodes          P5  directed, well-formed head fields
//   P2  exactly one root           P6  main predicate as root
//   P3  single head (DEPS unused)  P7  whole-word arcs only
//   P4  non-crossing arcs          P8  lexical verb heads the auxiliary
//   P9  semantics-driven (informational note, attached when C-checks fire)
//
//   C1  cop:zero heads             C4  case/postposition agreement
//   C2  conj chains run rightward  C5  postposition headedness
//   C3  punctuation attachment     C6  fixed precedes its head
//
// Structural defects suppress downstream checks (a malformed head field
// would otherwise cascade into P1/P2/P4/P6 at once), so each failing input
// reports the check that actually identifies it.

namespace mudt {

struct Arc {
  int head = 0;
  int dep = 0;

  bool operator==(const Arc&) const = default;
};

namespace detail {

// Arcs properly interleave when one endpoint of the second lies strictly
// inside the first span and the other strictly outside. Shared endpoints do
// not cross. Root attachments (head 0) are excluded by the callers.
inline bool arcs_cross(const Arc& a, const Arc& b) {
  const int l1 = std::min(a.head, a.dep), r1 = std::max(a.head, a.dep);
  const int l2 = std::min(b.head, b.dep), r2 = std::max(b.head, b.dep);
  return (l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1);
}

inline std::vector<std::pair<Arc, Arc>> crossing_pairs(const Sentence& s) {
  std::vector<Arc> arcs;
  for (const Token& t : s.tokens) {
    if (t.head > 0) arcs.push_back({t.head, t.id});
  }
  std::vector<std::pair<Arc, Arc>> out;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (std::size_t j = i + 1; j < arcs.size(); ++j) {
      if (arcs_cross(arcs[i], arcs[j])) out.emplace_back(arcs[i], arcs[j]);
    }
  }
  return out;
}

inline std::string normalized_or_raw(const Token& t, const SchemaRegistry& reg) {
  if (auto canon = try_normalize_label(t.deprel, reg)) return *canon;
  return t.deprel;
}

inline bool is_verbal_pos(std::string_view pos) { return pos == "V" || pos == "Aux"; }

inline bool is_nominal_pos(std::string_view pos) {
  return pos == "N" || pos == "Pron" || pos == "Num";
}

}  // namespace detail

// Every unordered pair of properly interleaving arcs; empty means projective.
// Requires a well-formed tree (propagates E_ROOT_COUNT / E_CYCLE).
inline std::vector<std::pair<Arc, Arc>> check_projectivity(const Sentence& s) {
  build_tree(s);
  return detail::crossing_pairs(s);
}

inline ValidationReport validate_sentence(const Sentence& s, const SchemaRegistry& reg) {
  ValidationReport report;
  report.sent_id = s.sent_id;
  const int n = static_cast<int>(s.tokens.size());
  auto& diags = report.diagnostics;
  const auto add = [&](std::string code, Severity sev, std::vector<int> ids, std::string msg) {
    diags.push_back({std::move(code), sev, std::move(ids), std::move(msg)});
  };
  const auto nd = [&](const Token& t) { return detail::normalized_or_raw(t, reg); };

  // P5: head fields must be directed arcs into the sentence.
  bool p5_ok = true;
  for (const Token& t : s.tokens) {
    if (t.head == t.id) {
      add("P5", Severity::error, {t.id}, "token '" + t.form + "' is its own head");
      p5_ok = false;
    } else if (t.head < 0 || t.head > n) {
      add("P5", Severity::error, {t.id},
          "head " + std::to_string(t.head) + " of '" + t.form + "' is out of range");
      p5_ok = false;
    }
  }

  // P2: exactly one root.
  int root_id = -1;
  bool p2_ok = p5_ok;
  if (p5_ok) {
    std::vector<int> roots;
    for (const Token& t : s.tokens) {
      if (t.head == 0) roots.push_back(t.id);
    }
    if (roots.size() == 1) {
      root_id = roots.front();
    } else {
      add("P2", Severity::error, roots,
          "expected exactly one root, found " + std::to_string(roots.size()));
      p2_ok = false;
    }
  }

  // P1: every token reachable from the root (cycles surface here).
  bool p1_ok = p2_ok;
  if (p2_ok) {
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n) + 1);
    for (const Token& t : s.tokens) children[static_cast<std::size_t>(t.head)].push_back(t.id);
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<int> stack{root_id};
    seen[static_cast<std::size_t>(root_id)] = true;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (int c : children[static_cast<std::size_t>(cur)]) {
        if (!seen[static_cast<std::size_t>(c)]) {
          seen[static_cast<std::size_t>(c)] = true;
          stack.push_back(c);
        }
      }
    }
    std::vector<int> isolated;
    for (const Token& t : s.tokens) {
      if (!seen[static_cast<std::size_t>(t.id)]) isolated.push_back(t.id);
    }
    if (!isolated.empty()) {
      add("P1", Severity::error, isolated,
          std::to_string(isolated.size()) + " token(s) not attached to the tree");
      p1_ok = false;
    }
  }

  // P4: non-crossing arcs.
  if (p1_ok) {
    for (const auto& [a, b] : detail::crossing_pairs(s)) {
      add("P4", Severity::error, {a.head, a.dep, b.head, b.dep},
          "arcs (" + std::to_string(a.head) + "," + std::to_string(a.dep) + ") and (" +
              std::to_string(b.head) + "," + std::to_string(b.dep) + ") cross");
    }
  }

  // P3: DEPS must not carry a second basic head.
  for (const Token& t : s.tokens) {
    if (!t.deps.empty() && t.deps != "_") {
      add("P3", Severity::error, {t.id},
          "DEPS column of '" + t.form + "' carries a secondary head");
    }
  }

  // P6: the root must be a main-predicate category.
  if (p2_ok && root_id > 0) {
    static const std::set<std::string_view> whitelist = {"V",   "Aux",  "N",  "A",
                                                         "Num", "Pron", "Adv"};
    const Token& root = *s.find(root_id);
    if (!whitelist.count(root.pos)) {
      add("P6", Severity::error, {root_id},
          "root '" + root.form + "' has POS '" + (root.pos.empty() ? "_" : root.pos) +
              "', not a predicate category");
    }
  }

  // P7: range lines and empty nodes must not carry basic arcs.
  for (const RawNode& rn : s.raw_nodes) {
    const auto cols = str::split(rn.line, '\t');
    if (cols.size() >= 8 && cols[6] != "_") {
      add("P7", Severity::error, {},
          "sub/super-word line '" + cols[0] + "' declares a dependency head");
    }
  }

  // P8: aux attaches an auxiliary to the lexical verb.
  for (const Token& t : s.tokens) {
    if (nd(t) != "aux") continue;
    if (!detail::is_verbal_pos(t.pos)) {
      add("P8", Severity::error, {t.id},
          "aux token '" + t.form + "' has non-verbal POS '" + t.pos + "'");
    }
    if (const Token* h = s.find(t.head); h && !detail::is_verbal_pos(h->pos)) {
      add("P8", Severity::error, {t.id, h->id},
          "aux token '" + t.form + "' attaches to non-verbal '" + h->form + "'");
    }
  }

  // C1: cop:zero hangs the subject off a non-verbal root predicate.
  for (const Token& t : s.tokens) {
    if (nd(t) != "cop:zero") continue;
    const Token* h = s.find(t.head);
    if (!h) continue;
    if (h->head != 0) {
      add("C1", Severity::error, {t.id, h->id},
          "cop:zero head '" + h->form + "' is not the sentence root");
    } else if (!(h->pos == "N" || h->pos == "A" || h->pos == "Num" || h->pos == "Pron")) {
      add("C1", Severity::error, {t.id, h->id},
          "cop:zero head '" + h->form + "' has POS '" + h->pos + "', expected a non-verbal predicate");
    }
  }

  // C2: each conjunct depends on the one that follows it.
  for (const Token& t : s.tokens) {
    if (nd(t) == "conj" && t.id >= t.head) {
      add("C2", Severity::error, {t.id, t.head},
          "conj dependent '" + t.form + "' does not precede its head");
    }
  }

  // C3: sentence-final punct on the root; coordination commas on the
  // following conjunct.
  if (!s.tokens.empty()) {
    const Token& last = s.tokens.back();
    if (nd(last) == "punct" && p2_ok && root_id > 0 && last.id != root_id &&
        last.head != root_id) {
      add("C3", Severity::error, {last.id},
          "sentence-final punctuation does not attach to the root");
    }
  }
  for (const Token& p : s.tokens) {
    if (nd(p) != "punct" || p.id == static_cast<int>(s.tokens.size())) continue;
    int following_conjunct = 0;
    for (const Token& d : s.tokens) {
      if (nd(d) == "conj" && d.id < d.head && d.id < p.id && p.id < d.head) {
        if (following_conjunct == 0 || d.head < following_conjunct) following_conjunct = d.head;
      }
    }
    if (following_conjunct != 0 && p.head != following_conjunct) {
      add("C3", Severity::error, {p.id, following_conjunct},
          "punctuation inside a coordination must attach to the following conjunct");
    }
  }

  // C4: case-marked relations agree with the Case feature; postpositional
  // relations require POS Post.
  for (const Token& t : s.tokens) {
    const std::string label = nd(t);
    std::vector<std::string> wanted;
    if (label == "case:abl") wanted = {"ABL"};
    else if (label == "case:loc" || label == "instr:case=loc") wanted = {"LOC"};
    else if (label == "case:dat" || label == "instr:case=dat") wanted = {"DAT"};
    else if (label == "case:poss") wanted = {"POSS", "GEN"};
    if (!wanted.empty()) {
      const auto value = t.feat("Case");
      if (!value) {
        add("C4", Severity::warning, {t.id},
            "'" + t.form + "' (" + label + ") carries no Case feature");
      } else if (std::find(wanted.begin(), wanted.end(), *value) == wanted.end()) {
        add("C4", Severity::error, {t.id},
            "'" + t.form + "' (" + label + ") has Case=" + *value + ", expected " +
                str::join(wanted, "/"));
      }
    }
    if ((label == "post" || label == "instr:case=post") && t.pos != "Post") {
      add("C4", Severity::error, {t.id},
          "'" + t.form + "' (" + label + ") must have POS Post, has '" + t.pos + "'");
    }
  }

  // C5: a postposition heads its nominal complement via obj and attaches to
  // a predicate.
  for (const Token& post : s.tokens) {
    if (post.pos != "Post") continue;
    bool phrasal_head = false;
    for (const Token& d : s.tokens) {
      if (d.head != post.id || !detail::is_nominal_pos(d.pos)) continue;
      phrasal_head = true;
      if (nd(d) != "obj") {
        add("C5", Severity::error, {d.id, post.id},
            "nominal '" + d.form + "' under postposition '" + post.form + "' must attach via obj");
      }
    }
    if (phrasal_head && post.head > 0) {
      const Token* h = s.find(post.head);
      const bool predicate = h && (detail::is_verbal_pos(h->pos) || h->head == 0);
      if (!predicate) {
        add("C5", Severity::error, {post.id, post.head},
            "postposition '" + post.form + "' does not attach to a predicate");
      }
    }
  }

  // C6: fixed-expression dependents precede their head.
  for (const Token& t : s.tokens) {
    if (nd(t) == "fixed" && t.id >= t.head) {
      add("C6", Severity::error, {t.id, t.head},
          "fixed dependent '" + t.form + "' does not precede its head");
    }
  }

  // Discourse elements depend on the root (error only off-root AND
  // off-predicate).
  for (const Token& t : s.tokens) {
    if (nd(t) != "discourse" || t.head == 0) continue;
    const Token* h = s.find(t.head);
    if (!h) continue;
    const bool on_root = p2_ok && h->id == root_id;
    if (!on_root && !detail::is_verbal_pos(h->pos)) {
      add("E_DISCOURSE", Severity::error, {t.id, h->id},
          "discourse element '" + t.form + "' attaches below the root");
    }
  }

  // Tag/label/feature assignment diagnostics.
  for (const Token& t : s.tokens) {
    for (auto& d : validate_assignment(t, reg)) diags.push_back(std::move(d));
  }

  // P9 is not mechanically checkable; note it when construction checks fire.
  const bool c_fired = std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.code.size() == 2 && d.code[0] == 'C';
  });
  if (c_fired) {
    add("P9", Severity::warning, {},
        "construction checks fired; review lexical semantics of the flagged relations");
  }

  report.passed = std::none_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::error;
  });
  return report;
}

// ---------------------------------------------------------------------------
// Report rendering

// sent_id<TAB>code<TAB>severity<TAB>token_ids<TAB>message, one line per
// diagnostic.
inline std::string report_tsv(const ValidationReport& report) {
  std::string out;
  for (const auto& d : report.diagnostics) {
    std::vector<std::string> ids;
    ids.reserve(d.token_ids.size());
    for (int id : d.token_ids) ids.push_back(std::to_string(id));
    out += report.sent_id.empty() ? "-" : report.sent_id;
    out += '\t';
    out += d.code;
    out += '\t';
    out += severity_name(d.severity);
    out += '\t';
    out += ids.empty() ? "-" : str::join(ids, ",");
    out += '\t';
    out += d.message;
    out += '\n';
  }
  return out;
}

}  // namespace mudt

#endif  // MUDT_VALIDATOR_HPP
