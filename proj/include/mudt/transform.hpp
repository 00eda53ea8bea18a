// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_TRANSFORM_HPP
#define MUDT_TRANSFORM_HPP

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mudt/conllu.hpp"
#include "mudt/schema.hpp"
#include "mudt/validator.hpp"

// Deterministic UD-style -> MUDT conversion.
//
//   R1  refine_case            obl + Case feature -> case:dat/loc/abl/poss
//   R2  reroot_compound        lexical converb replaces the auxiliary root
//   R3  lexicalize_fixed       lexicon pairs rebound via fixed (second heads)
//   R4  restructure_quotative  quoted clause becomes obj of the dəp marker
//   R5  rehead_postposition    inverted Post arcs flipped; Post heads the noun
//   R6  relabel_zero_copula    nsubj under a verbless nominal root -> cop:zero
//   R7  chain_coordination     conj bouquet -> rightward chain
//
// apply_all runs R7, R5, R2, R4, R3, R1, R6: structural inversions first,
// then re-rooting, then relabelings, so later rules see stabilized heads.
// Rules never add, delete, or reorder tokens; only head/deprel change, and
// every change lands in the TransformTrace.

namespace mudt {

struct RuleInfo {
  std::string id;
  std::string name;
  std::string description;
};

inline const std::vector<RuleInfo>& rewrite_rules() {
  static const std::vector<RuleInfo> rules = {
      {"R1", "refine_case", "relabel obl by the dependent's Case feature"},
      {"R2", "reroot_compound", "make the lexical converb head of a compound predicate"},
      {"R3", "lexicalize_fixed", "bind lexicon word pairs with fixed"},
      {"R4", "restructure_quotative", "quoted clause attaches as obj of the quotative marker"},
      {"R5", "rehead_postposition", "postposition heads its nominal complement"},
      {"R6", "relabel_zero_copula", "subject of a verbless nominal predicate -> cop:zero"},
      {"R7", "chain_coordination", "rewrite conj bouquets as rightward chains"},
  };
  return rules;
}

struct TraceEntry {
  std::string rule;
  int token_id = 0;
  int old_head = 0;
  std::string old_rel;
  int new_head = 0;
  std::string new_rel;
  std::string note;  // set on skip/warning entries

  bool changed() const { return old_head != new_head || old_rel != new_rel; }
};

struct TransformTrace {
  std::string sent_id;
  std::vector<TraceEntry> applications;
  std::vector<std::string> residual_codes;  // validator errors left after apply_all

  bool empty() const { return applications.empty(); }
};

struct RuleSet {
  bool r1 = true, r2 = true, r3 = true, r4 = true, r5 = true, r6 = true, r7 = true;

  // "R1,R4" style toggle list; everything not named is disabled.
  static RuleSet only(std::string_view list) {
    RuleSet rs{false, false, false, false, false, false, false};
    for (const auto& item : str::split(list, ',')) {
      const std::string id = str::upper(str::trim(item));
      if (id == "R1") rs.r1 = true;
      else if (id == "R2") rs.r2 = true;
      else if (id == "R3") rs.r3 = true;
      else if (id == "R4") rs.r4 = true;
      else if (id == "R5") rs.r5 = true;
      else if (id == "R6") rs.r6 = true;
      else if (id == "R7") rs.r7 = true;
      else if (!id.empty()) throw Error("E_RULESET", "unknown rule id '" + id + "'");
    }
    return rs;
  }
};

namespace detail {

inline void set_arc(Sentence& s, TransformTrace* trace, std::string_view rule, int token_id,
                    int new_head, std::string_view new_rel) {
  Token* t = s.find(token_id);
  if (!t) return;
  if (t->head == new_head && t->deprel == new_rel) return;
  if (trace) {
    trace->applications.push_back({std::string(rule), token_id, t->head, t->deprel, new_head,
                                   std::string(new_rel), ""});
  }
  t->head = new_head;
  t->deprel = std::string(new_rel);
}

inline void note(TransformTrace* trace, std::string_view rule, const Token& t,
                 std::string_view message) {
  if (!trace) return;
  trace->applications.push_back(
      {std::string(rule), t.id, t.head, t.deprel, t.head, t.deprel, std::string(message)});
}

inline bool is_quotative(const Token& t) {
  return t.lemma == "de" || t.form == "dəp" || t.form == "dep";
}

// true when `anc` lies on the head path of `node` (node itself included)
inline bool is_ancestor(const Sentence& s, int anc, int node) {
  int cur = node;
  for (std::size_t steps = 0; steps <= s.tokens.size() && cur != 0; ++steps) {
    if (cur == anc) return true;
    const Token* t = s.find(cur);
    if (!t) return false;
    cur = t->head;
  }
  return false;
}

inline Token* unique_root(Sentence& s) {
  Token* root = nullptr;
  for (Token& t : s.tokens) {
    if (t.head == 0) {
      if (root) return nullptr;
      root = &t;
    }
  }
  return root;
}

// R1.
inline void refine_case_impl(Sentence& s, TransformTrace* trace) {
  for (Token& t : s.tokens) {
    if (t.deprel != "obl") continue;
    const auto value = t.feat("Case");
    if (!value) {
      note(trace, "R1", t, "skipped: obl without Case feature");
      continue;
    }
    std::string_view label;
    if (*value == "DAT") label = "case:dat";
    else if (*value == "LOC") label = "case:loc";
    else if (*value == "ABL") label = "case:abl";
    else if (*value == "GEN" || *value == "POSS") label = "case:poss";
    else {
      note(trace, "R1", t, "skipped: no case relation for Case=" + *value);
      continue;
    }
    set_arc(s, trace, "R1", t.id, t.head, label);
  }
}

// R2. Descends the advcl chain from an auxiliary root down to the lexical
// converb, innermost-first; the converb becomes root, the auxiliaries attach
// via aux, and the root's core dependents follow the new root.
inline void reroot_compound_impl(Sentence& s, TransformTrace* trace) {
  Token* root = unique_root(s);
  if (!root || root->pos != "Aux") return;

  std::vector<int> aux_chain;
  const Token* cur = root;
  while (cur->pos == "Aux") {
    const Token* next = nullptr;
    for (const Token& d : s.tokens) {
      if (d.head == cur->id && d.deprel == "advcl" && d.id < cur->id &&
          (d.pos == "V" || d.pos == "Aux")) {
        if (!next || d.id > next->id) next = &d;
      }
    }
    if (!next) break;
    aux_chain.push_back(cur->id);
    cur = next;
  }
  if (aux_chain.empty() || cur->pos != "V") return;

  const int new_root = cur->id;
  const int last = static_cast<int>(s.tokens.size());
  set_arc(s, trace, "R2", new_root, 0, "root");
  for (int aux_id : aux_chain) set_arc(s, trace, "R2", aux_id, new_root, "aux");

  static const std::set<std::string_view> core = {"nsubj", "advmod", "obj", "discourse"};
  const std::set<int> chain_ids(aux_chain.begin(), aux_chain.end());
  for (Token& d : s.tokens) {
    if (!chain_ids.count(d.head) || d.id == new_root || chain_ids.count(d.id)) continue;
    if (core.count(d.deprel) || (d.deprel == "punct" && d.id == last)) {
      set_arc(s, trace, "R2", d.id, new_root, d.deprel);
    }
  }
}

// R3.
inline void lexicalize_fixed_impl(Sentence& s, const SchemaRegistry& reg,
                                  TransformTrace* trace) {
  for (std::size_t i = 0; i + 1 < s.tokens.size(); ++i) {
    Token& first = s.tokens[i];
    Token& second = s.tokens[i + 1];
    if (!reg.is_fixed_pair(first.lemma, second.lemma)) continue;
    if (is_ancestor(s, first.id, second.id)) {
      // untangle an inverted pair so the rebind keeps the tree acyclic
      set_arc(s, trace, "R3", second.id, first.head, first.deprel);
    }
    set_arc(s, trace, "R3", first.id, second.id, "fixed");
  }
}

// R4.
inline void restructure_quotative_impl(Sentence& s, TransformTrace* trace) {
  std::set<int> used;
  // a quotative already heading a clausal obj is converted material
  for (const Token& q : s.tokens) {
    if (!is_quotative(q)) continue;
    for (const Token& d : s.tokens) {
      if (d.head == q.id && d.deprel == "obj" && d.pos == "V") {
        used.insert(q.id);
        break;
      }
    }
  }
  for (Token& clause : s.tokens) {
    if (clause.deprel != "advcl" || clause.pos != "V" || is_quotative(clause)) continue;
    const Token* verb = s.find(clause.head);
    if (!verb || clause.id >= verb->id) continue;
    const Token* marker = nullptr;
    for (const Token& q : s.tokens) {
      if (is_quotative(q) && !used.count(q.id) && q.id > clause.id && q.id < verb->id) {
        marker = &q;
        break;
      }
    }
    if (!marker) continue;
    const int verb_id = verb->id;
    // a marker dominating the speech verb is not the quotative configuration
    if (is_ancestor(s, marker->id, verb_id)) continue;
    set_arc(s, trace, "R4", clause.id, marker->id, "obj");
    set_arc(s, trace, "R4", marker->id, verb_id, "advcl");
    used.insert(marker->id);
  }
  for (const Token& q : s.tokens) {
    if (!is_quotative(q) || used.count(q.id) || q.deprel == "advcl") continue;
    const bool heads_clause = std::any_of(s.tokens.begin(), s.tokens.end(), [&](const Token& d) {
      return d.head == q.id && d.deprel == "obj";
    });
    if (!heads_clause) note(trace, "R4", q, "quotative marker without a clausal dependent");
  }
}

// R5.
inline void rehead_postposition_impl(Sentence& s, const SchemaRegistry& reg,
                                     TransformTrace* trace) {
  for (Token& post : s.tokens) {
    if (post.pos != "Post") continue;
    if (post.deprel != "nmod" && post.deprel != "case") continue;
    Token* noun = s.find(post.head);
    if (!noun || !(noun->pos == "N" || noun->pos == "Pron" || noun->pos == "Num")) continue;
    const int old_head = noun->head;
    const std::string old_rel = noun->deprel;
    set_arc(s, trace, "R5", noun->id, post.id, "obj");
    if (old_head == 0) {
      set_arc(s, trace, "R5", post.id, 0, old_rel);
    } else {
      set_arc(s, trace, "R5", post.id, old_head,
              reg.is_instrumental_post(post) ? "instr:case=post" : "post");
    }
  }
}

// R6.
inline void relabel_zero_copula_impl(Sentence& s, TransformTrace* trace) {
  Token* root = unique_root(s);
  if (!root) return;
  if (!(root->pos == "N" || root->pos == "A" || root->pos == "Num" || root->pos == "Pron"))
    return;
  const bool overt_copula = std::any_of(s.tokens.begin(), s.tokens.end(), [&](const Token& d) {
    return d.head == root->id && d.deprel == "cop";
  });
  if (overt_copula) return;
  for (Token& d : s.tokens) {
    if (d.head == root->id && d.deprel == "nsubj") {
      set_arc(s, trace, "R6", d.id, root->id, "cop:zero");
    }
  }
}

// R7. A bouquet is any set of conj dependents hanging rightward off one head.
inline bool chain_coordination_pass(Sentence& s, TransformTrace* trace) {
  bool changed = false;
  for (std::size_t hi = 0; hi < s.tokens.size(); ++hi) {
    const int h = s.tokens[hi].id;
    std::vector<int> members{h};
    for (const Token& d : s.tokens) {
      if (d.head == h && d.deprel == "conj" && d.id > h) members.push_back(d.id);
    }
    if (members.size() < 2) continue;
    changed = true;
    std::sort(members.begin(), members.end());

    const Token& first = s.tokens[hi];
    const int ext_head = first.head;
    const std::string ext_rel = first.deprel;
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      set_arc(s, trace, "R7", members[i], members[i + 1], "conj");
    }
    const int chain_final = members.back();
    set_arc(s, trace, "R7", chain_final, ext_head, ext_rel);

    const std::set<int> member_set(members.begin(), members.end());
    for (const Token& p : s.tokens) {
      if (member_set.count(p.id) || !member_set.count(p.head)) continue;
      if (p.deprel != "cc" && p.deprel != "punct") continue;
      int following = 0;
      for (int m : members) {
        if (m > p.id) {
          following = m;
          break;
        }
      }
      if (following != 0) {
        set_arc(s, trace, "R7", p.id, following, p.deprel);
      } else if (p.deprel == "punct") {
        // trailing punctuation follows the chain-final conjunct
        set_arc(s, trace, "R7", p.id, chain_final, "punct");
      }
    }
  }
  return changed;
}

// Rewriting one bouquet can expose another (the chain-final conjunct inherits
// its head's external conj arc when coordinations nest), so run to fixpoint.
inline void chain_coordination_impl(Sentence& s, TransformTrace* trace) {
  for (std::size_t pass = 0; pass <= s.tokens.size(); ++pass) {
    if (!chain_coordination_pass(s, trace)) return;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public rule wrappers (pure: input sentence is never mutated)

inline Sentence refine_case(const Sentence& s, TransformTrace* trace = nullptr) {
  Sentence out = s;
  detail::refine_case_impl(out, trace);
  return out;
}

inline Sentence reroot_compound(const Sentence& s, TransformTrace* trace = nullptr) {
  Sentence out = s;
  detail::reroot_compound_impl(out, trace);
  return out;
}

inline Sentence lexicalize_fixed(const Sentence& s, const SchemaRegistry& reg,
                                 TransformTrace* trace = nullptr) {
  Sentence out = s;
  detail::lexicalize_fixed_impl(out, reg, trace);
  return out;
}

inline Sentence restructure_quotative(const Sentence& s, TransformTrace* trace = nullptr) {
  Sentence out = s;
  detail::restructure_quotative_impl(out, trace);
  return out;
}

inline Sentence rehead_postposition(const Sentence& s, const SchemaRegistry& reg,
                                    TransformTrace* trace = nullptr) {
  Sentence out = s;
  detail::rehead_postposition_impl(out, reg, trace);
  return out;
}

inline Sentence relabel_zero_copula(const Sentence& s, TransformTrace* trace = nullptr) {
  Sentence out = s;
  detail::relabel_zero_copula_impl(out, trace);
  return out;
}

inline Sentence chain_coordination(const Sentence& s, TransformTrace* trace = nullptr) {
  Sentence out = s;
  detail::chain_coordination_impl(out, trace);
  return out;
}

// All enabled rules in fixed order; throws E_TREE on malformed input trees.
inline std::pair<Sentence, TransformTrace> apply_all(const Sentence& s,
                                                     const SchemaRegistry& reg,
                                                     RuleSet rules = {}) {
  try {
    build_tree(s);
  } catch (const Error& e) {
    throw Error("E_TREE", "cannot convert '" + s.sent_id + "': " + e.what());
  }
  TransformTrace trace;
  trace.sent_id = s.sent_id;
  Sentence out = s;
  if (rules.r7) detail::chain_coordination_impl(out, &trace);
  if (rules.r5) detail::rehead_postposition_impl(out, reg, &trace);
  if (rules.r2) detail::reroot_compound_impl(out, &trace);
  if (rules.r4) detail::restructure_quotative_impl(out, &trace);
  if (rules.r3) detail::lexicalize_fixed_impl(out, reg, &trace);
  if (rules.r1) detail::refine_case_impl(out, &trace);
  if (rules.r6) detail::relabel_zero_copula_impl(out, &trace);

  const ValidationReport report = validate_sentence(out, reg);
  for (const auto& d : report.diagnostics) {
    if (d.severity == Severity::error) trace.residual_codes.push_back(d.code);
  }
  return {std::move(out), std::move(trace)};
}

// sent_id<TAB>rule<TAB>token<TAB>old_head:old_rel<TAB>new_head:new_rel, with
// a trailing note column on skip/warning entries.
inline std::string trace_tsv(const TransformTrace& trace) {
  std::string out;
  for (const auto& e : trace.applications) {
    out += trace.sent_id.empty() ? "-" : trace.sent_id;
    out += '\t';
    out += e.rule;
    out += '\t';
    out += std::to_string(e.token_id);
    out += '\t';
    out += std::to_string(e.old_head) + ":" + (e.old_rel.empty() ? "_" : e.old_rel);
    out += '\t';
    out += std::to_string(e.new_head) + ":" + (e.new_rel.empty() ? "_" : e.new_rel);
    if (!e.note.empty()) {
      out += '\t';
      out += e.note;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mudt

#endif  // MUDT_TRANSFORM_HPP
