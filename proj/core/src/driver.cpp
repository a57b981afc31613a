#include "gc2/driver.hpp"

#include <memory>
#include <optional>
#include <sstream>

#include "gc2/constraints.hpp"
#include "gc2/horn.hpp"
#include "gc2/model_builder.hpp"
#include "gc2/normalizer.hpp"
#include "gc2/solver_nat.hpp"
#include "gc2/structure.hpp"

namespace gc2 {

const char* input_kind_name(InputKind k) {
  switch (k) {
    case InputKind::Formula:
      return "formula";
    case InputKind::NormalForm:
      return "normal-form";
    case InputKind::Constraints:
      return "constraints";
    case InputKind::Structure:
      return "structure";
  }
  return "?";
}

InputKind detect_input(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string w;
    if (!(ls >> w) || w[0] == ';') continue;
    if (w == "gc2-constraints") return InputKind::Constraints;
    if (w == "domain") return InputKind::Structure;
    if (w == "alpha" || w == "guard" || w == "count" || w == "end") return InputKind::NormalForm;
    if (w == "unary" || w == "binary") continue;
    return InputKind::Formula;
  }
  throw InvalidInput("empty input");
}

namespace {

struct Loaded {
  InputKind kind = InputKind::Formula;
  ParsedFormula formula;
  std::vector<NormalizedBranch> branches;
  std::optional<ConstraintSet> cs;
};

Loaded load(std::string_view text, const RunConfig& cfg, bool allow_structure = false) {
  Loaded l;
  l.kind = detect_input(text);
  switch (l.kind) {
    case InputKind::Formula:
      l.formula = parse_formula(text);
      l.branches = normalize(l.formula.formula, l.formula.sig, cfg.caps);
      break;
    case InputKind::NormalForm: {
      NormalizedBranch b;
      NormalFormProblem p = parse_normal_form(text);
      b.trivially_false = p.alpha->op == Op::False;
      b.problem = pad_signature(std::move(p), cfg.caps);
      l.branches.push_back(std::move(b));
      break;
    }
    case InputKind::Constraints:
      l.cs = load_constraints(text, cfg.caps);
      break;
    case InputKind::Structure:
      if (!allow_structure) throw InvalidInput("a structure file is not a problem");
      break;
  }
  return l;
}

std::string assignment_text(const std::vector<std::pair<std::string, bool>>& a) {
  std::string s;
  for (const auto& [n, v] : a) s += (s.empty() ? "" : " ") + n + "=" + (v ? "true" : "false");
  return s.empty() ? "-" : s;
}

template <class F>
Outcome guarded(F&& body) {
  Outcome o;
  try {
    body(o);
  } catch (const ParseError& e) {
    o.exit_code = kExitInput;
    o.err += std::string("parse error: ") + e.what() + "\n";
  } catch (const GuardViolation& e) {
    o.exit_code = kExitInput;
    o.err += std::string("not in GC2: ") + e.what() + "\n";
  } catch (const InvalidInput& e) {
    o.exit_code = kExitInput;
    o.err += std::string("invalid input: ") + e.what() + "\n";
  } catch (const CapExceeded& e) {
    o.exit_code = kExitCap;
    o.err += std::string("cap exceeded: ") + e.what() + "\n";
  } catch (const InternalError& e) {
    o.exit_code = kExitInternal;
    o.err += std::string("internal error: ") + e.what() + "\n";
  }
  return o;
}

// The verdicts of one constraint set.
struct Decision {
  std::optional<bool> sat;
  std::optional<bool> finsat;
  std::uint64_t zero_count = 0;
  FinsatVerdict fv;
  std::string cap_note;
};

Decision decide(const ConstraintSet& cs, Mode mode, const Caps& caps) {
  Decision d;
  if (mode != Mode::Finsat) {
    SatVerdict sv = decide_sat(cs);
    d.sat = sv.yes;
    d.zero_count = sv.zero_count;
  }
  if (mode != Mode::Sat) {
    if (d.sat == false) {
      d.finsat = false;
      d.fv.verdict = Verdict::No;
      d.fv.method = "horn";
    } else {
      FinsatOptions opt;
      opt.caps = caps;
      d.fv = decide_finsat(cs, opt);
      if (d.fv.verdict == Verdict::ResourceExceeded) d.cap_note = d.fv.note;
      else d.finsat = d.fv.verdict == Verdict::Yes;
    }
  }
  if (d.finsat == true && d.sat == false) throw InternalError("finite witness for a problem decided unsatisfiable");
  return d;
}

struct Problem {
  std::unique_ptr<TypeSpace> ts;
  ConstraintSet cs;
};

Problem compile(const NormalFormProblem& p, const Caps& caps) {
  Problem pr;
  pr.ts = std::make_unique<TypeSpace>(p, caps);
  pr.cs = generate_E(*pr.ts, caps);
  return pr;
}

std::string problem_line(const Problem& pr) {
  const TypeSpace& ts = *pr.ts;
  return "|sig|=" + std::to_string(ts.p()) + " P=" + std::to_string(ts.P()) + " m=" + std::to_string(ts.m()) +
         " C=" + render_vector(ts.range().bounds()) + " |V|=" + std::to_string(pr.cs.num_vars()) +
         " |E|=" + std::to_string(pr.cs.size());
}

std::string decision_line(const Decision& d) {
  std::string s;
  if (d.sat) s += std::string(" sat=") + (*d.sat ? "yes" : "no") + "(zero=" + std::to_string(d.zero_count) + ")";
  if (d.finsat || !d.cap_note.empty()) {
    s += " finsat=";
    s += d.finsat ? (*d.finsat ? "yes" : "no") : "unknown";
    s += "(" + d.fv.method + ")";
  }
  return s;
}

// Original formula signature plus the problem's predicates; nullary values from the branch.
Structure lift_model(const Structure& st, const Signature& original, const NormalizedBranch& b) {
  Signature sig = st.sig();
  sig.nullary = original.nullary;
  Structure out(sig, st.size());
  for (std::size_t k = 0; k < sig.nullary.size(); ++k)
    for (const auto& [n, v] : b.assignment)
      if (n == sig.nullary[k]) out.set_nullary(k, v);
  for (std::size_t u = 0; u < sig.unary.size(); ++u)
    for (Element a = 0; a < st.size(); ++a)
      if (st.unary(u, a)) out.set_unary(u, a);
  for (std::size_t r = 0; r < sig.binary.size(); ++r)
    for (Element a = 0; a < st.size(); ++a)
      for (Element c : st.out(r, a)) out.add_edge(r, a, c);
  return out;
}

// Builds and re-verifies the model of a FINSAT branch.
Structure make_model(const Loaded& l, const NormalizedBranch& b, const Problem& pr, const NatSolution& w,
                     const Caps& caps) {
  Structure st = build_model(*pr.ts, pr.cs, w, caps.max_witness);
  Structure again = parse_structure(dump_structure(st));
  NormalFormReport rep = check_normal_form(*pr.ts, again);
  if (!rep.ok()) throw InternalError("written model fails the checker: " + rep.describe());
  if (l.kind == InputKind::Formula) {
    Structure lifted = lift_model(again, l.formula.sig, b);
    if (!evaluate(*l.formula.formula, lifted)) throw InternalError("model of the normal form falsifies the formula");
    return lifted;
  }
  return again;
}

std::string branch_path(const std::string& path, std::size_t i, std::size_t n) {
  return n == 1 ? path : path + "." + std::to_string(i);
}

}  // namespace

Outcome cmd_check(std::string_view input, const RunConfig& cfg) {
  return guarded([&](Outcome& o) {
    Loaded l = load(input, cfg);
    std::string info;
    std::optional<bool> sat, finsat;
    bool sat_unknown = false, fin_unknown = false;
    std::string unknown_note;
    auto merge = [&](std::optional<bool>& acc, bool& unknown, const std::optional<bool>& v, bool wanted) {
      if (!wanted) return;
      if (!v) unknown = true;
      else if (*v) acc = true;
      else if (!acc) acc = false;
    };
    const bool want_sat = cfg.mode != Mode::Finsat, want_fin = cfg.mode != Mode::Sat;

    if (l.cs) {
      info += "# input: constraints |V|=" + std::to_string(l.cs->num_vars()) + " |E|=" + std::to_string(l.cs->size()) + "\n";
      Decision d = decide(*l.cs, cfg.mode, cfg.caps);
      info += "# decision:" + decision_line(d) + "\n";
      merge(sat, sat_unknown, d.sat, want_sat);
      merge(finsat, fin_unknown, d.finsat, want_fin);
      if (!d.cap_note.empty()) unknown_note = d.cap_note;
      if (!cfg.witness_path.empty() && d.fv.witness)
        o.err += "note: a constraints file carries no problem; no model written\n";
    } else {
      info += std::string("# input: ") + input_kind_name(l.kind) + ", " + std::to_string(l.branches.size()) +
              (l.branches.size() == 1 ? " branch\n" : " branches\n");
      bool model_done = false;
      for (std::size_t i = 0; i < l.branches.size(); ++i) {
        const NormalizedBranch& b = l.branches[i];
        bool need_sat = want_sat && sat != true, need_fin = want_fin && finsat != true;
        std::string head = "# branch " + std::to_string(i) + " [" + assignment_text(b.assignment) + "]";
        if (!need_sat && !need_fin) {
          info += head + " skipped\n";
          continue;
        }
        if (b.trivially_false) {
          info += head + " alpha=false\n";
          merge(sat, sat_unknown, false, want_sat);
          merge(finsat, fin_unknown, false, want_fin);
          continue;
        }
        Problem pr;
        try {
          pr = compile(b.problem, cfg.caps);
        } catch (const CapExceeded& e) {
          info += head + " cap\n";
          unknown_note = e.what();
          merge(sat, sat_unknown, std::nullopt, want_sat);
          merge(finsat, fin_unknown, std::nullopt, want_fin);
          continue;
        }
        if (!cfg.dump_constraints_path.empty())
          o.files.emplace_back(branch_path(cfg.dump_constraints_path, i, l.branches.size()), dump_constraints(pr.cs));
        Decision d = decide(pr.cs, cfg.mode, cfg.caps);
        std::string dl = decision_line(d);
        if (d.fv.witness) dl += " witness-domain=" + witness_domain_size(pr.cs, d.fv.witness->value).get_str();
        info += head + " " + problem_line(pr) + dl + "\n";
        if (!d.cap_note.empty()) unknown_note = d.cap_note;
        merge(sat, sat_unknown, d.sat, want_sat);
        merge(finsat, fin_unknown, d.finsat, want_fin);
        if (d.finsat == true && !model_done && !cfg.witness_path.empty()) {
          model_done = true;
          if (d.fv.witness && !d.fv.witness_too_large) {
            Structure st = make_model(l, b, pr, *d.fv.witness, cfg.caps);
            o.files.emplace_back(cfg.witness_path, dump_structure(st));
            info += "# model: " + std::to_string(st.size()) + " elements, verified\n";
          } else {
            o.err += "note: witness exceeds --max-witness; no model written\n";
          }
        }
      }
    }
    if (want_sat) {
      if (sat == true) o.out += "SAT\n";
      else if (!sat_unknown && sat == false) o.out += "UNSAT\n";
    }
    if (want_fin) {
      if (finsat == true) o.out += "FINSAT\n";
      else if (!fin_unknown && finsat == false) o.out += "NOT-FINSAT\n";
    }
    o.out += info;
    bool undecided = (want_sat && sat != true && sat_unknown) || (want_fin && finsat != true && fin_unknown);
    if (undecided) {
      o.exit_code = kExitCap;
      o.err += "cap exceeded: " + (unknown_note.empty() ? std::string("resource limit") : unknown_note) + "\n";
    }
  });
}

Outcome cmd_normalize(std::string_view input, const RunConfig& cfg) {
  return guarded([&](Outcome& o) {
    Loaded l = load(input, cfg);
    if (l.cs) throw InvalidInput("normalize needs a formula or normal-form file");
    for (std::size_t i = 0; i < l.branches.size(); ++i) {
      const NormalizedBranch& b = l.branches[i];
      o.out += "; branch " + std::to_string(i) + " [" + assignment_text(b.assignment) + "]\n";
      const auto& un = b.problem.sig.unary;
      std::string pad;
      for (std::size_t k = un.size() - b.problem.padding; k < un.size(); ++k) pad += " " + un[k];
      o.out += "; padding" + (pad.empty() ? std::string(" -") : pad) + "\n";
      o.out += render_normal_form(b.problem);
    }
  });
}

Outcome cmd_constraints(std::string_view input, const RunConfig& cfg) {
  return guarded([&](Outcome& o) {
    Loaded l = load(input, cfg);
    if (l.cs) throw InvalidInput("input already is a constraint system");
    for (std::size_t i = 0; i < l.branches.size(); ++i) {
      Problem pr = compile(l.branches[i].problem, cfg.caps);
      std::string dump = dump_constraints(pr.cs);
      if (cfg.dump_constraints_path.empty()) {
        o.out += dump;
      } else {
        o.files.emplace_back(branch_path(cfg.dump_constraints_path, i, l.branches.size()), std::move(dump));
        o.out += "branch " + std::to_string(i) + ": " + problem_line(pr) + "\n";
      }
    }
  });
}

Outcome cmd_model(std::string_view input, const RunConfig& cfg) {
  return guarded([&](Outcome& o) {
    Loaded l = load(input, cfg);
    if (l.cs) throw InvalidInput("model needs a formula or normal-form file");
    bool unknown = false, too_large = false;
    std::string note;
    for (std::size_t i = 0; i < l.branches.size(); ++i) {
      const NormalizedBranch& b = l.branches[i];
      if (b.trivially_false) continue;
      Problem pr;
      try {
        pr = compile(b.problem, cfg.caps);
      } catch (const CapExceeded& e) {
        unknown = true;
        note = e.what();
        continue;
      }
      Decision d = decide(pr.cs, Mode::Finsat, cfg.caps);
      if (!d.finsat) {
        unknown = true;
        note = d.cap_note;
        continue;
      }
      if (!*d.finsat) continue;
      if (!d.fv.witness || d.fv.witness_too_large) {
        too_large = true;
        continue;
      }
      Structure st = make_model(l, b, pr, *d.fv.witness, cfg.caps);
      std::string text = dump_structure(st);
      o.out += "; FINSAT\n; model: " + std::to_string(st.size()) + " elements, verified\n";
      if (cfg.witness_path.empty()) o.out += text;
      else o.files.emplace_back(cfg.witness_path, std::move(text));
      return;
    }
    if (unknown || too_large) {
      o.exit_code = kExitCap;
      o.err += too_large ? "cap exceeded: finite model exceeds --max-witness\n" : "cap exceeded: " + note + "\n";
      return;
    }
    o.out += "NOT-FINSAT\n";
  });
}

Outcome cmd_eval(std::string_view input, std::string_view structure, const RunConfig& cfg) {
  return guarded([&](Outcome& o) {
    Structure st = parse_structure(structure);
    InputKind k = detect_input(input);
    if (k == InputKind::Formula) {
      ParsedFormula pf = parse_formula(input);
      validate_gc2(pf.formula, pf.sig);
      o.out += evaluate(*pf.formula, st) ? "true\n" : "false\n";
    } else if (k == InputKind::NormalForm) {
      NormalFormProblem p = parse_normal_form(input);
      TypeSpace ts(p, cfg.caps);
      NormalFormReport rep = check_normal_form(ts, st);
      o.out += rep.ok() ? "true\n" : "false\n# " + rep.describe() + "\n";
    } else {
      throw InvalidInput("eval needs a formula or normal-form file");
    }
  });
}

Outcome cmd_oracle(std::string_view input, const RunConfig& cfg) {
  return guarded([&](Outcome& o) {
    InputKind k = detect_input(input);
    const Element max_n = static_cast<Element>(cfg.caps.oracle_max);
    std::optional<Structure> st;
    if (k == InputKind::Formula) {
      ParsedFormula pf = parse_formula(input);
      validate_gc2(pf.formula, pf.sig);
      st = oracle_formula(pf.sig, *pf.formula, max_n);
    } else if (k == InputKind::NormalForm) {
      NormalFormProblem p = parse_normal_form(input);
      TypeSpace ts(p, cfg.caps);
      st = oracle_finsat(ts, max_n);
    } else {
      throw InvalidInput("oracle needs a formula or normal-form file");
    }
    if (st) o.out += "; model at n=" + std::to_string(st->size()) + "\n" + dump_structure(*st);
    else o.out += "; no model up to n=" + std::to_string(max_n) + "\n";
  });
}

}  // namespace gc2
