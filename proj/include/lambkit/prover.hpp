#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lambkit/calculus.hpp"

namespace lambkit {

enum class Outcome {
  Proved,          // finite proof found, no omega approximation involved
  ProvedApprox,    // proof found but some omega rule was truncated at omega_bound
  Refuted,         // search space exhausted, no proof exists
  RefutedBounded,  // no proof within the configured bounds
  Unknown,         // search-node budget exceeded
};

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Proved: return "Proved";
    case Outcome::ProvedApprox: return "ProvedApprox";
    case Outcome::Refuted: return "Refuted";
    case Outcome::RefutedBounded: return "RefutedBounded";
    case Outcome::Unknown: return "Unknown";
  }
  return "?";
}

struct ProofStatus {
  Outcome outcome = Outcome::Unknown;
  Proof proof;           // for Proved / ProvedApprox
  int bound = 0;         // omega bound for ProvedApprox
  int depth_bound = 0;   // for RefutedBounded
  int antecedent_bound = 0;
  std::string reason;    // for Unknown

  bool proved() const {
    return outcome == Outcome::Proved || outcome == Outcome::ProvedApprox;
  }
};

enum class HypRoute { Direct, Bang };

/// !A1, ..., !An, Pi -> B where the Ai are the curried hypotheses in input
/// order and Pi -> B is the goal.
inline Sequent bang_translate(const std::vector<Sequent>& hyps, const Sequent& goal) {
  Sequent out;
  out.antecedent.reserve(hyps.size() + goal.antecedent.size());
  for (const auto& h : hyps) out.antecedent.push_back(bang(curry(h).succedent));
  out.antecedent.insert(out.antecedent.end(), goal.antecedent.begin(),
                        goal.antecedent.end());
  out.succedent = goal.succedent;
  return out;
}

inline bool contains_product(const Formula& f) {
  switch (f.tag()) {
    case Conn::Var:
    case Conn::Zero:
    case Conn::One:
      return false;
    case Conn::Mul:
      return true;
    case Conn::Bang:
      return contains_product(f.left());
    default:
      return contains_product(f.left()) || contains_product(f.right());
  }
}

inline bool contains_product(const Sequent& s) {
  for (const auto& f : s.antecedent)
    if (contains_product(f)) return true;
  return contains_product(s.succedent);
}

/// Exhaustive cut-free backward search. For finitary no-growth fragments the
/// search is a decision procedure (every backward step shrinks the sequent).
/// With bc, ! or hypotheses the search is bounded by max_depth and
/// max_antecedent. Omega rules are truncated at omega_bound: success through
/// one is only ProvedApprox, while a single exactly-refuted omega premise
/// refutes the conclusion outright.
///
/// The memo table persists across calls, so keep one Prover per configuration
/// when issuing many queries.
class Prover {
public:
  explicit Prover(CalculusConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    for (const auto& h : cfg_.hypotheses)
      if (!cfg_.allows(h)) throw ConfigError("hypothesis outside the configured fragment");
    cfg_.hypotheses = curried_hypotheses(cfg_);
    growth_ = cfg_.growth();
  }

  const CalculusConfig& config() const { return cfg_; }

  /// Pure derivability; requires an empty hypothesis set.
  ProofStatus prove(const Sequent& s) {
    if (!cfg_.hypotheses.empty())
      throw ConfigError("prove() requires no hypotheses; use prove_from_hypotheses");
    return run(s);
  }

  /// Derivability from the configured hypotheses.
  ///   Direct: hypotheses double as axioms and as a bounded cut (the curried
  ///           formula may be inserted anywhere in an antecedent).
  ///   Bang:   proves the !-translated sequent in the exponential extension;
  ///           a proof there certifies syntactic consequence.
  ProofStatus prove_from_hypotheses(const Sequent& s, HypRoute route,
                                    bool require_product_free = true) {
    if (cfg_.hypotheses.empty())
      throw ConfigError("prove_from_hypotheses() requires hypotheses");
    if (route == HypRoute::Direct) return run(s);

    if (require_product_free) {
      if (contains_product(s)) throw ConfigError("bang route: goal contains a product");
      for (const auto& h : cfg_.hypotheses)
        if (contains_product(h)) throw ConfigError("bang route: hypothesis contains a product");
    }
    CalculusConfig bcfg = cfg_;
    bcfg.bang = true;
    bcfg.hypotheses.clear();
    Prover sub(bcfg);
    return sub.prove(bang_translate(cfg_.hypotheses, s));
  }

  /// Test hook: explore rule instances in reverse order. The reported status
  /// must not change.
  void set_exploration_reversed(bool r) { reversed_ = r; }

  long long nodes_explored() const { return nodes_; }

private:
  struct Budget {};

  enum class K { PExact, PApprox, RExact, Fail };

  struct Res {
    K kind = K::Fail;
    Proof proof;
    bool depth_limited = false;
    bool loop_tainted = false;
  };

  struct MemoEntry {
    bool has_final = false;
    Res final_res;
    int fail_remaining = -1;  // best remaining depth at which a bounded fail was seen
  };

  ProofStatus run(const Sequent& s) {
    if (!cfg_.allows(s)) throw ConfigError("sequent outside the configured fragment");
    nodes_ = 0;
    Res r;
    try {
      r = search(s, 0);
    } catch (const Budget&) {
      path_.clear();
      return ProofStatus{Outcome::Unknown, {}, 0, 0, 0, "search-node budget exceeded"};
    }
    ProofStatus st;
    switch (r.kind) {
      case K::PExact:
        st.outcome = Outcome::Proved;
        st.proof = r.proof;
        break;
      case K::PApprox:
        st.outcome = Outcome::ProvedApprox;
        st.proof = r.proof;
        st.bound = cfg_.omega_bound;
        break;
      case K::RExact:
        // Exhaustive refutations are only claimed for configurations whose
        // search space is provably complete; bounded searches report bounds.
        st.outcome = growth_ ? Outcome::RefutedBounded : Outcome::Refuted;
        st.depth_bound = cfg_.max_depth;
        st.antecedent_bound = cfg_.max_antecedent;
        break;
      case K::Fail:
        st.outcome = Outcome::RefutedBounded;
        st.depth_bound = cfg_.max_depth;
        st.antecedent_bound = cfg_.max_antecedent;
        break;
    }
    return st;
  }

  static bool grows(Rule r) { return r == Rule::Bc || r == Rule::BangC; }

  Res search(const Sequent& s, int depth) {
    if (++nodes_ > cfg_.max_nodes) throw Budget{};

    if (auto it = memo_.find(s); it != memo_.end()) {
      const MemoEntry& e = it->second;
      if (e.has_final) return e.final_res;
      if (growth_ && e.fail_remaining >= cfg_.max_depth - depth) {
        Res r;
        r.kind = K::Fail;
        r.depth_limited = true;
        return r;
      }
    }

    if (growth_) {
      if (depth >= cfg_.max_depth) {
        Res r;
        r.kind = K::Fail;
        r.depth_limited = true;
        return r;
      }
      if (path_.count(s)) {
        // A sequent repeated on its own search path cannot be part of a
        // minimal proof, so blocking it preserves completeness; the result
        // is path-dependent and therefore never cached.
        Res r;
        r.kind = K::Fail;
        r.loop_tainted = true;
        return r;
      }
      path_.insert(s);
    }

    Res result = expand(s, depth);

    if (growth_) path_.erase(s);

    MemoEntry& e = memo_[s];
    if (result.kind != K::Fail) {
      e.has_final = true;
      e.final_res = result;
    } else if (!result.loop_tainted) {
      if (result.depth_limited) {
        int remaining = cfg_.max_depth - depth;
        if (remaining > e.fail_remaining) e.fail_remaining = remaining;
      } else {
        e.has_final = true;  // bounded only by the antecedent cap: path-free
        e.final_res = result;
      }
    }
    return result;
  }

  Res expand(const Sequent& s, int depth) {
    std::vector<RuleApp> apps = backward_instances(s, cfg_);
    // Direct hypothesis route: a bounded cut whose left premise is a
    // hypothesis axiom. Represented as Cut in the proof tree.
    for (std::size_t hi = 0; hi < cfg_.hypotheses.size(); ++hi) {
      const Formula& a = cfg_.hypotheses[hi].succedent;
      for (std::size_t j = 0; j <= s.antecedent.size(); ++j) {
        std::vector<Formula> grown = s.antecedent;
        grown.insert(grown.begin() + j, a);
        RuleApp app;
        app.rule = Rule::Cut;
        app.data.pos = static_cast<int>(j);
        app.data.hyp = static_cast<int>(hi);
        app.data.cut = a;
        app.premises.push_back(Sequent{std::move(grown), s.succedent});
        apps.push_back(std::move(app));
      }
    }

    Res fail_acc;   // merged failure flags
    fail_acc.kind = K::Fail;
    bool all_exact = true;
    bool shortcut_refuted = false;
    Proof approx_proof;

    const std::size_t count = apps.size();
    for (std::size_t step = 0; step < count; ++step) {
      const std::size_t idx = reversed_ ? count - 1 - step : step;
      const RuleApp& app = apps[idx];

      // Growth caps: bc / !C / hypothesis cut may not push the antecedent
      // beyond max_antecedent.
      if ((grows(app.rule) || app.rule == Rule::Cut) && !app.premises.empty() &&
          static_cast<int>(app.premises[0].antecedent.size()) > cfg_.max_antecedent) {
        all_exact = false;
        continue;
      }

      const bool omega = app.data.approximate;
      bool premise_refuted = false;
      bool premise_failed = false;
      bool premise_approx = false;
      std::vector<Proof> kids;
      kids.reserve(app.premises.size());
      for (const auto& prem : app.premises) {
        Res r = search(prem, depth + 1);
        if (r.kind == K::PExact) {
          kids.push_back(r.proof);
        } else if (r.kind == K::PApprox) {
          premise_approx = true;
          kids.push_back(r.proof);
        } else if (r.kind == K::RExact) {
          premise_refuted = true;
          break;
        } else {
          premise_failed = true;
          fail_acc.depth_limited |= r.depth_limited;
          fail_acc.loop_tainted |= r.loop_tainted;
          break;
        }
      }

      if (premise_refuted) {
        // In a cut-eliminating configuration an exactly refuted omega premise
        // refutes the conclusion: derivability of Pi -> A*\B would give every
        // A^n, Pi -> B by cut.
        if (omega && !growth_) shortcut_refuted = true;
        continue;  // exact instance failure
      }
      if (premise_failed) {
        all_exact = false;
        continue;
      }

      // instance established
      Proof pf;
      if (app.rule == Rule::Cut) {
        const int hi = *app.data.hyp;
        RuleData hd;
        hd.hyp = hi;
        Proof hyp_node = make_proof(Rule::Hyp, cfg_.hypotheses[hi], {}, hd);
        pf = make_proof(Rule::Cut, s, {hyp_node, kids[0]}, app.data);
      } else {
        pf = make_proof(app.rule, s, std::move(kids), app.data);
      }
      if (!omega && !premise_approx) {
        Res r;
        r.kind = K::PExact;
        r.proof = std::move(pf);
        return r;
      }
      if (!approx_proof) approx_proof = std::move(pf);
    }

    if (shortcut_refuted) {
      Res r;
      r.kind = K::RExact;
      return r;
    }
    if (approx_proof) {
      Res r;
      r.kind = K::PApprox;
      r.proof = std::move(approx_proof);
      return r;
    }
    if (all_exact) {
      Res r;
      r.kind = K::RExact;
      return r;
    }
    return fail_acc;
  }

  CalculusConfig cfg_;
  bool growth_ = false;
  bool reversed_ = false;
  long long nodes_ = 0;
  std::unordered_map<Sequent, MemoEntry, SequentHash> memo_;
  std::unordered_set<Sequent, SequentHash> path_;
};

inline ProofStatus prove(const Sequent& s, const CalculusConfig& cfg) {
  Prover p(cfg);
  return p.prove(s);
}

inline ProofStatus prove_from_hypotheses(const Sequent& s, const CalculusConfig& cfg,
                                         HypRoute route = HypRoute::Direct,
                                         bool require_product_free = true) {
  Prover p(cfg);
  return p.prove_from_hypotheses(s, route, require_product_free);
}

}  // namespace lambkit
