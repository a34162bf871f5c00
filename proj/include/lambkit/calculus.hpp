#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambkit/syntax.hpp"

namespace lambkit {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Which fragment or extension of the calculus is active, plus all search
/// budgets. Presets for the systems used throughout are in preset().
struct CalculusConfig {
  // connectives
  bool has_ldiv = true;
  bool has_rdiv = true;
  bool has_mul = true;
  bool has_meet = true;
  // constants
  bool has_zero = true;
  bool has_one = true;

  bool lambek_restriction = false;  // forbids empty antecedents in \R and /R
  bool bc_rule = false;             // the structural rule for the axiom => b.c
  bool bang = false;                // exponential !
  bool iterative = false;           // iterative divisions a*\b, b/a*

  int omega_bound = 8;      // omega rules approximated by premises n = 0..omega_bound
  int max_depth = 64;       // applied only when growth rules are active
  int max_antecedent = 12;  // caps antecedent length under bc / !C / hypothesis cuts
  long long max_nodes = 50'000'000;  // search-node budget; overflow reports Unknown

  std::vector<Sequent> hypotheses;

  bool growth() const { return bc_rule || bang || !hypotheses.empty(); }

  void validate() const {
    if (lambek_restriction && has_one)
      throw ConfigError("constant 1 is incompatible with the non-emptiness restriction");
    if (lambek_restriction && !hypotheses.empty())
      throw ConfigError("hypotheses require the unrestricted calculus");
    if (omega_bound < 0 || max_depth < 1 || max_antecedent < 1)
      throw ConfigError("nonsensical search budget");
  }

  bool allows(const Formula& f) const {
    switch (f.tag()) {
      case Conn::Var: return true;
      case Conn::Zero: return has_zero;
      case Conn::One: return has_one;
      case Conn::LDiv: return has_ldiv && allows(f.left()) && allows(f.right());
      case Conn::RDiv: return has_rdiv && allows(f.left()) && allows(f.right());
      case Conn::Mul: return has_mul && allows(f.left()) && allows(f.right());
      case Conn::Meet: return has_meet && allows(f.left()) && allows(f.right());
      case Conn::Bang: return bang && allows(f.left());
      case Conn::IterLDiv:
      case Conn::IterRDiv:
        return iterative && allows(f.left()) && allows(f.right());
    }
    return false;
  }

  bool allows(const Sequent& s) const {
    for (const auto& f : s.antecedent)
      if (!allows(f)) return false;
    return allows(s.succedent);
  }
};

/// Named presets.
///   L       divisions + product, non-empty antecedents enforced
///   LA      the same allowing empty antecedents
///   Lw      L plus meet
///   LAw     LA plus meet
///   L01     LAw plus constants 0 and 1
///   L01bc   L01 plus the bc structural rule
///   L01bang L01 plus the exponential
///   L01itd  L01 plus iterative divisions
///   L01pf   product-free L01 (divisions, meet, constants)
///   LAwpf   product-free LAw (divisions, meet)
inline CalculusConfig preset(const std::string& name) {
  CalculusConfig c;
  c.has_meet = false;
  c.has_zero = false;
  c.has_one = false;
  if (name == "L") {
    c.lambek_restriction = true;
  } else if (name == "LA") {
  } else if (name == "Lw") {
    c.lambek_restriction = true;
    c.has_meet = true;
  } else if (name == "LAw") {
    c.has_meet = true;
  } else if (name == "L01" || name == "L01bc" || name == "L01bang" || name == "L01itd") {
    c.has_meet = true;
    c.has_zero = true;
    c.has_one = true;
    if (name == "L01bc") c.bc_rule = true;
    if (name == "L01bang") c.bang = true;
    if (name == "L01itd") c.iterative = true;
  } else if (name == "L01pf") {
    c.has_mul = false;
    c.has_meet = true;
    c.has_zero = true;
    c.has_one = true;
  } else if (name == "LAwpf") {
    c.has_mul = false;
    c.has_meet = true;
  } else {
    throw ConfigError("unknown calculus preset: " + name);
  }
  return c;
}

/// Hypotheses are used in empty-antecedent form; this is the normalization
/// applied everywhere before matching.
inline std::vector<Sequent> curried_hypotheses(const CalculusConfig& cfg) {
  std::vector<Sequent> out;
  out.reserve(cfg.hypotheses.size());
  for (const auto& h : cfg.hypotheses) out.push_back(curry(h));
  return out;
}

// -- rules ------------------------------------------------------------------

enum class Rule : std::uint8_t {
  Id, Hyp, ZeroL, OneL, OneR,
  LDivL, LDivR, RDivL, RDivR,
  MulL, MulR, MeetL1, MeetL2, MeetR,
  IterLDivL, IterLDivR, IterRDivL, IterRDivR,
  BangL, BangR, BangW, BangP1, BangP2, BangC,
  Bc, Cut,
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Id: return "Id";
    case Rule::Hyp: return "Hyp";
    case Rule::ZeroL: return "0L";
    case Rule::OneL: return "1L";
    case Rule::OneR: return "1R";
    case Rule::LDivL: return "\\L";
    case Rule::LDivR: return "\\R";
    case Rule::RDivL: return "/L";
    case Rule::RDivR: return "/R";
    case Rule::MulL: return ".L";
    case Rule::MulR: return ".R";
    case Rule::MeetL1: return "&L1";
    case Rule::MeetL2: return "&L2";
    case Rule::MeetR: return "&R";
    case Rule::IterLDivL: return "*\\L";
    case Rule::IterLDivR: return "*\\R";
    case Rule::IterRDivL: return "/*L";
    case Rule::IterRDivR: return "/*R";
    case Rule::BangL: return "!L";
    case Rule::BangR: return "!R";
    case Rule::BangW: return "!W";
    case Rule::BangP1: return "!P1";
    case Rule::BangP2: return "!P2";
    case Rule::BangC: return "!C";
    case Rule::Bc: return "bc";
    case Rule::Cut: return "cut";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Rule::Cut); ++i) {
    Rule r = static_cast<Rule>(i);
    if (s == rule_name(r)) return r;
  }
  return std::nullopt;
}

/// Bookkeeping attached to a rule instance: which antecedent position the
/// principal formula sits at, block/split counts for the iterated rules,
/// hypothesis index, the cut formula for replayed cuts.
struct RuleData {
  std::optional<int> pos;
  std::optional<int> count;  // n of an omega / iterated rule
  std::optional<int> hyp;
  std::optional<Formula> cut;
  bool approximate = false;  // omega rule truncated at omega_bound
};

/// One backward rule application: conclusion is implicit (the sequent the
/// instance was enumerated for), premises are the subgoals.
struct RuleApp {
  Rule rule;
  std::vector<Sequent> premises;
  RuleData data;
};

namespace detail {

inline std::vector<Formula> splice(const std::vector<Formula>& xs, std::size_t from,
                                   std::size_t to, std::vector<Formula> repl) {
  std::vector<Formula> out;
  out.reserve(xs.size() - (to - from) + repl.size());
  out.insert(out.end(), xs.begin(), xs.begin() + from);
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), xs.begin() + to, xs.end());
  return out;
}

inline std::vector<Formula> slice(const std::vector<Formula>& xs, std::size_t from,
                                  std::size_t to) {
  return std::vector<Formula>(xs.begin() + from, xs.begin() + to);
}

// Enumerates the ways of cutting xs[from..to) into n >= 1 non-empty
// contiguous blocks, invoking fn with the list of block boundaries.
template <typename Fn>
void for_each_composition(std::size_t from, std::size_t to, Fn&& fn) {
  const std::size_t len = to - from;
  if (len == 0) return;
  if (len > 24)
    throw ConfigError("antecedent region too long for iterated-division enumeration");
  // Bit k of mask set means a cut after position from+k+1.
  const std::uint64_t top = 1ull << (len - 1);
  for (std::uint64_t mask = 0; mask < top; ++mask) {
    std::vector<std::size_t> bounds;
    bounds.push_back(from);
    for (std::size_t k = 0; k + 1 < len; ++k)
      if (mask & (1ull << k)) bounds.push_back(from + k + 1);
    bounds.push_back(to);
    fn(bounds);
  }
}

}  // namespace detail

/// Enumerates every backward rule application whose conclusion is `s` under
/// the active configuration. Cut is never produced (cut-free search); each
/// hypothesis (in curried form) appears as a zero-premise Hyp instance. The
/// omega rules are truncated at cfg.omega_bound and flagged approximate.
inline std::vector<RuleApp> backward_instances(const Sequent& s, const CalculusConfig& cfg) {
  std::vector<RuleApp> out;
  const auto& ant = s.antecedent;
  const std::size_t len = ant.size();
  const Formula& goal = s.succedent;

  // axioms
  if (len == 1 && ant[0] == goal) out.push_back({Rule::Id, {}, {}});
  if (cfg.has_zero)
    for (std::size_t i = 0; i < len; ++i)
      if (ant[i].tag() == Conn::Zero) {
        RuleData d;
        d.pos = static_cast<int>(i);
        out.push_back({Rule::ZeroL, {}, d});
      }
  if (cfg.has_one && len == 0 && goal.tag() == Conn::One) out.push_back({Rule::OneR, {}, {}});
  {
    int hi = 0;
    for (const auto& h : cfg.hypotheses) {
      if (s == h) {
        RuleData d;
        d.hyp = hi;
        out.push_back({Rule::Hyp, {}, d});
      }
      ++hi;
    }
  }

  // succedent rules
  switch (goal.tag()) {
    case Conn::LDiv:
      if (cfg.has_ldiv && !(cfg.lambek_restriction && len == 0)) {
        std::vector<Formula> a;
        a.reserve(len + 1);
        a.push_back(goal.left());
        a.insert(a.end(), ant.begin(), ant.end());
        out.push_back({Rule::LDivR, {Sequent{std::move(a), goal.right()}}, {}});
      }
      break;
    case Conn::RDiv:
      if (cfg.has_rdiv && !(cfg.lambek_restriction && len == 0)) {
        std::vector<Formula> a = ant;
        a.push_back(goal.right());
        out.push_back({Rule::RDivR, {Sequent{std::move(a), goal.left()}}, {}});
      }
      break;
    case Conn::Mul:
      if (cfg.has_mul) {
        // leftmost-longest split first
        for (std::size_t k = len + 1; k-- > 0;) {
          RuleData d;
          d.pos = static_cast<int>(k);
          out.push_back({Rule::MulR,
                         {Sequent{detail::slice(ant, 0, k), goal.left()},
                          Sequent{detail::slice(ant, k, len), goal.right()}},
                         d});
        }
      }
      break;
    case Conn::Meet:
      if (cfg.has_meet)
        out.push_back(
            {Rule::MeetR, {Sequent{ant, goal.left()}, Sequent{ant, goal.right()}}, {}});
      break;
    case Conn::IterLDiv:
      if (cfg.iterative) {
        RuleApp app{Rule::IterLDivR, {}, {}};
        app.data.approximate = true;
        app.data.count = cfg.omega_bound;
        for (int n = 0; n <= cfg.omega_bound; ++n) {
          std::vector<Formula> a;
          a.reserve(len + n);
          for (int k = 0; k < n; ++k) a.push_back(goal.left());
          a.insert(a.end(), ant.begin(), ant.end());
          app.premises.push_back(Sequent{std::move(a), goal.right()});
        }
        out.push_back(std::move(app));
      }
      break;
    case Conn::IterRDiv:
      if (cfg.iterative) {
        RuleApp app{Rule::IterRDivR, {}, {}};
        app.data.approximate = true;
        app.data.count = cfg.omega_bound;
        for (int n = 0; n <= cfg.omega_bound; ++n) {
          std::vector<Formula> a = ant;
          for (int k = 0; k < n; ++k) a.push_back(goal.right());
          app.premises.push_back(Sequent{std::move(a), goal.left()});
        }
        out.push_back(std::move(app));
      }
      break;
    case Conn::Bang:
      if (cfg.bang) {
        bool all_banged = true;
        for (const auto& f : ant)
          if (f.tag() != Conn::Bang) {
            all_banged = false;
            break;
          }
        if (all_banged) out.push_back({Rule::BangR, {Sequent{ant, goal.left()}}, {}});
      }
      break;
    default:
      break;
  }

  // antecedent rules, position by position
  for (std::size_t i = 0; i < len; ++i) {
    const Formula& f = ant[i];
    RuleData at;
    at.pos = static_cast<int>(i);
    switch (f.tag()) {
      case Conn::LDiv:
        if (cfg.has_ldiv) {
          // conclusion: Gamma, Pi, A\B, Delta -> C  with Pi = ant[j..i)
          for (std::size_t j = 0; j <= i; ++j) {
            RuleData d = at;
            d.count = static_cast<int>(i - j);
            std::vector<Formula> rest = detail::splice(ant, j, i + 1, {f.right()});
            out.push_back({Rule::LDivL,
                           {Sequent{detail::slice(ant, j, i), f.left()},
                            Sequent{std::move(rest), goal}},
                           d});
          }
        }
        break;
      case Conn::RDiv:
        if (cfg.has_rdiv) {
          // conclusion: Gamma, B/A, Pi, Delta -> C  with Pi = ant[i+1..k)
          for (std::size_t k = len; k >= i + 1; --k) {
            RuleData d = at;
            d.count = static_cast<int>(k - i - 1);
            std::vector<Formula> rest = detail::splice(ant, i, k, {f.left()});
            out.push_back({Rule::RDivL,
                           {Sequent{detail::slice(ant, i + 1, k), f.right()},
                            Sequent{std::move(rest), goal}},
                           d});
          }
        }
        break;
      case Conn::Mul:
        if (cfg.has_mul)
          out.push_back(
              {Rule::MulL,
               {Sequent{detail::splice(ant, i, i + 1, {f.left(), f.right()}), goal}},
               at});
        break;
      case Conn::Meet:
        if (cfg.has_meet) {
          out.push_back(
              {Rule::MeetL1, {Sequent{detail::splice(ant, i, i + 1, {f.left()}), goal}}, at});
          out.push_back(
              {Rule::MeetL2, {Sequent{detail::splice(ant, i, i + 1, {f.right()}), goal}}, at});
        }
        break;
      case Conn::One:
        if (cfg.has_one)
          out.push_back({Rule::OneL, {Sequent{detail::splice(ant, i, i + 1, {}), goal}}, at});
        break;
      case Conn::IterLDiv:
        if (cfg.iterative) {
          // blocks sit immediately left of the principal formula
          {
            RuleData d = at;
            d.count = 0;
            out.push_back(
                {Rule::IterLDivL,
                 {Sequent{detail::splice(ant, i, i + 1, {f.right()}), goal}},
                 d});
          }
          for (std::size_t j = 0; j < i; ++j) {
            detail::for_each_composition(j, i, [&](const std::vector<std::size_t>& bounds) {
              RuleApp app{Rule::IterLDivL, {}, at};
              app.data.count = static_cast<int>(bounds.size() - 1);
              for (std::size_t b = 0; b + 1 < bounds.size(); ++b)
                app.premises.push_back(
                    Sequent{detail::slice(ant, bounds[b], bounds[b + 1]), f.left()});
              std::vector<Formula> rest = detail::splice(ant, j, i + 1, {f.right()});
              app.premises.push_back(Sequent{std::move(rest), goal});
              out.push_back(std::move(app));
            });
          }
        }
        break;
      case Conn::IterRDiv:
        if (cfg.iterative) {
          {
            RuleData d = at;
            d.count = 0;
            out.push_back(
                {Rule::IterRDivL,
                 {Sequent{detail::splice(ant, i, i + 1, {f.left()}), goal}},
                 d});
          }
          for (std::size_t k = i + 2; k <= len; ++k) {
            detail::for_each_composition(i + 1, k, [&](const std::vector<std::size_t>& bounds) {
              RuleApp app{Rule::IterRDivL, {}, at};
              app.data.count = static_cast<int>(bounds.size() - 1);
              for (std::size_t b = 0; b + 1 < bounds.size(); ++b)
                app.premises.push_back(
                    Sequent{detail::slice(ant, bounds[b], bounds[b + 1]), f.right()});
              std::vector<Formula> rest = detail::splice(ant, i, k, {f.left()});
              app.premises.push_back(Sequent{std::move(rest), goal});
              out.push_back(std::move(app));
            });
          }
        }
        break;
      case Conn::Bang:
        if (cfg.bang) {
          out.push_back(
              {Rule::BangL, {Sequent{detail::splice(ant, i, i + 1, {f.left()}), goal}}, at});
          out.push_back({Rule::BangW, {Sequent{detail::splice(ant, i, i + 1, {}), goal}}, at});
          // permutations: move the banged formula to any other slot
          {
            std::vector<Formula> without = detail::splice(ant, i, i + 1, {});
            for (std::size_t j = 0; j <= without.size(); ++j) {
              if (j == i) continue;
              std::vector<Formula> moved = without;
              moved.insert(moved.begin() + j, f);
              RuleData d = at;
              d.count = static_cast<int>(j);
              out.push_back({j > i ? Rule::BangP1 : Rule::BangP2,
                             {Sequent{std::move(moved), goal}},
                             d});
            }
          }
          if (static_cast<int>(len) + 1 <= cfg.max_antecedent) {
            std::vector<Formula> dup = ant;
            dup.insert(dup.begin() + i, f);
            out.push_back({Rule::BangC, {Sequent{std::move(dup), goal}}, at});
          }
        }
        break;
      default:
        break;
    }
  }

  if (cfg.bc_rule && static_cast<int>(len) + 2 <= cfg.max_antecedent) {
    for (std::size_t j = 0; j <= len; ++j) {
      std::vector<Formula> grown = ant;
      grown.insert(grown.begin() + j, {var("b"), var("c")});
      RuleData d;
      d.pos = static_cast<int>(j);
      out.push_back({Rule::Bc, {Sequent{std::move(grown), goal}}, d});
    }
  }

  return out;
}

// -- proof objects ------------------------------------------------------------

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Rule rule;
  Sequent conclusion;
  std::vector<Proof> premises;
  RuleData data;
};

inline Proof make_proof(Rule r, Sequent conclusion, std::vector<Proof> premises,
                        RuleData data = {}) {
  auto n = std::make_shared<ProofNode>();
  n->rule = r;
  n->conclusion = std::move(conclusion);
  n->premises = std::move(premises);
  n->data = std::move(data);
  return n;
}

struct CheckReport {
  bool ok = true;
  std::string path;    // path to the first bad node, e.g. "root/2/0"
  std::string reason;
};

namespace detail {

inline bool check_node(const Proof& p, const CalculusConfig& cfg_no_hyps,
                       const std::vector<Sequent>& hyps, const std::string& path,
                       CheckReport& rep) {
  auto fail = [&](const std::string& why) {
    rep.ok = false;
    rep.path = path;
    rep.reason = why;
    return false;
  };
  if (!p) return fail("null proof node");

  if (p->rule == Rule::Cut) {
    // Cut is accepted on replay (never searched): premises Pi -> A and
    // Gamma, A, Delta -> C, conclusion Gamma, Pi, Delta -> C.
    if (p->premises.size() != 2) return fail("cut needs two premises");
    const Sequent& l = p->premises[0]->conclusion;
    const Sequent& r = p->premises[1]->conclusion;
    if (!(r.succedent == p->conclusion.succedent)) return fail("cut succedent mismatch");
    const Formula& a = l.succedent;
    bool matched = false;
    for (std::size_t k = 0; k < r.antecedent.size() && !matched; ++k) {
      if (!(r.antecedent[k] == a)) continue;
      std::vector<Formula> spliced = splice(r.antecedent, k, k + 1, l.antecedent);
      if (spliced == p->conclusion.antecedent) matched = true;
    }
    if (!matched) return fail("cut does not reassemble the conclusion");
  } else if (p->rule == Rule::Hyp) {
    bool found = false;
    for (const auto& h : hyps)
      if (p->conclusion == h) {
        found = true;
        break;
      }
    if (!found) return fail("sequent is not a hypothesis");
    if (!p->premises.empty()) return fail("hypothesis axiom takes no premises");
  } else {
    bool found = false;
    for (const auto& app : backward_instances(p->conclusion, cfg_no_hyps)) {
      if (app.rule != p->rule) continue;
      if (app.premises.size() != p->premises.size()) continue;
      bool same = true;
      for (std::size_t k = 0; k < app.premises.size(); ++k)
        if (!(app.premises[k] == p->premises[k]->conclusion)) {
          same = false;
          break;
        }
      if (same) {
        found = true;
        break;
      }
    }
    if (!found) return fail(std::string("no matching instance of ") + rule_name(p->rule));
  }

  for (std::size_t k = 0; k < p->premises.size(); ++k)
    if (!check_node(p->premises[k], cfg_no_hyps, hyps, path + "/" + std::to_string(k), rep))
      return false;
  return true;
}

}  // namespace detail

/// Re-validates a proof tree independently of the search that produced it.
/// Omega nodes must carry premises for all n = 0..omega_bound and are
/// accepted as approximate. Cut nodes are accepted (replay of external
/// derivations); cut is never searched.
inline CheckReport check_proof_report(const Proof& p, const CalculusConfig& cfg) {
  CheckReport rep;
  CalculusConfig local = cfg;
  local.hypotheses.clear();  // Hyp nodes are matched against the curried forms
  detail::check_node(p, local, curried_hypotheses(cfg), "root", rep);
  return rep;
}

inline bool check_proof(const Proof& p, const CalculusConfig& cfg) {
  return check_proof_report(p, cfg).ok;
}

}  // namespace lambkit
