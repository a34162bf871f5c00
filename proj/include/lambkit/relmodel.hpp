#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lambkit/relation.hpp"
#include "lambkit/syntax.hpp"

namespace lambkit {

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Relativised relational model: valuations are subrelations of a transitive
/// universal relation U. Square means U is the full relation; constants get
/// their standard reading (0 = empty, 1 = diagonal) only on square models.
struct RModel {
  enum class Constants { Absent, Standard };

  int n = 1;
  Relation u;
  std::map<std::string, Relation> valuation;
  Constants constants = Constants::Absent;

  bool square() const { return u == Relation::full(n); }

  static RModel make_square(int n, std::map<std::string, Relation> val,
                            Constants c = Constants::Standard) {
    RModel m;
    m.n = n;
    m.u = Relation::full(n);
    m.valuation = std::move(val);
    m.constants = c;
    return m;
  }
};

/// Non-standard square model: valuations range over a family of relations
/// closed under the square residuals and meet (and composition, unless the
/// product-free relaxation is in play); 0 and 1 denote the family's own least
/// and neutral elements.
struct NSModel {
  int n = 1;
  std::vector<Relation> family;  // deduplicated, sorted in bit order
  Relation unit;
  Relation zero;
  std::map<std::string, Relation> valuation;
  bool product_closed = true;
};

// -- evaluation ---------------------------------------------------------------

namespace detail {

inline const Relation& lookup_var(const std::map<std::string, Relation>& val,
                                  const std::string& name) {
  auto it = val.find(name);
  if (it == val.end()) throw EvalError("unvaluated variable: " + name);
  return it->second;
}

}  // namespace detail

inline Relation eval(const Formula& f, const RModel& m) {
  switch (f.tag()) {
    case Conn::Var:
      return detail::lookup_var(m.valuation, f.var_name());
    case Conn::Zero:
      if (m.constants != RModel::Constants::Standard)
        throw EvalError("constants are not interpreted in this model");
      return Relation::empty(m.n);
    case Conn::One:
      if (m.constants != RModel::Constants::Standard)
        throw EvalError("constants are not interpreted in this model");
      if (!m.square()) throw EvalError("standard constants require a square model");
      return Relation::identity(m.n);
    case Conn::Mul:
      return compose(eval(f.left(), m), eval(f.right(), m));
    case Conn::Meet:
      return rel_meet(eval(f.left(), m), eval(f.right(), m));
    case Conn::LDiv:
      return residual_left(eval(f.left(), m), eval(f.right(), m), m.u);
    case Conn::RDiv:
      return residual_right(eval(f.left(), m), eval(f.right(), m), m.u);
    case Conn::IterLDiv:
      return residual_left(star(eval(f.left(), m)), eval(f.right(), m), m.u);
    case Conn::IterRDiv:
      return residual_right(eval(f.left(), m), star(eval(f.right(), m)), m.u);
    case Conn::Bang:
      throw EvalError("models do not interpret !");
  }
  throw EvalError("unreachable");
}

struct NsEval {
  Relation rel;
  bool in_family = true;  // false once a product left the family (product-free models)
};

inline NsEval eval_ns(const Formula& f, const NSModel& m) {
  const Relation u = Relation::full(m.n);
  switch (f.tag()) {
    case Conn::Var:
      return {detail::lookup_var(m.valuation, f.var_name()), true};
    case Conn::Zero:
      return {m.zero, true};
    case Conn::One:
      return {m.unit, true};
    case Conn::Mul: {
      NsEval a = eval_ns(f.left(), m), b = eval_ns(f.right(), m);
      bool in = a.in_family && b.in_family && m.product_closed;
      return {compose(a.rel, b.rel), in};
    }
    case Conn::Meet: {
      NsEval a = eval_ns(f.left(), m), b = eval_ns(f.right(), m);
      return {rel_meet(a.rel, b.rel), a.in_family && b.in_family};
    }
    case Conn::LDiv: {
      NsEval a = eval_ns(f.left(), m), b = eval_ns(f.right(), m);
      return {residual_left(a.rel, b.rel, u), a.in_family && b.in_family};
    }
    case Conn::RDiv: {
      NsEval a = eval_ns(f.left(), m), b = eval_ns(f.right(), m);
      return {residual_right(a.rel, b.rel, u), a.in_family && b.in_family};
    }
    case Conn::IterLDiv: {
      NsEval a = eval_ns(f.left(), m), b = eval_ns(f.right(), m);
      return {residual_left(star(a.rel), b.rel, u), a.in_family && b.in_family};
    }
    case Conn::IterRDiv: {
      NsEval a = eval_ns(f.left(), m), b = eval_ns(f.right(), m);
      return {residual_right(a.rel, star(b.rel), u), a.in_family && b.in_family};
    }
    case Conn::Bang:
      throw EvalError("models do not interpret !");
  }
  throw EvalError("unreachable");
}

inline Relation eval(const Formula& f, const NSModel& m) { return eval_ns(f, m).rel; }

// -- truth --------------------------------------------------------------------

namespace detail {

template <typename Model>
Relation antecedent_value(const Sequent& s, const Model& m) {
  Relation acc;
  bool first = true;
  for (const auto& f : s.antecedent) {
    Relation v = eval(f, m);
    acc = first ? v : compose(acc, v);
    first = false;
  }
  return acc;
}

}  // namespace detail

inline bool sequent_true(const Sequent& s, const RModel& m) {
  if (s.antecedent.empty()) {
    if (!m.square()) throw EvalError("empty antecedents need a square model");
    return Relation::identity(m.n).subset_of(eval(s.succedent, m));
  }
  return detail::antecedent_value(s, m).subset_of(eval(s.succedent, m));
}

inline bool sequent_true(const Sequent& s, const NSModel& m) {
  if (s.antecedent.empty())
    return Relation::identity(m.n).subset_of(eval(s.succedent, m));
  return detail::antecedent_value(s, m).subset_of(eval(s.succedent, m));
}

enum class Entailment { HypothesisFails, Holds, CounterexampleFound };

template <typename Model>
Entailment semantic_entails(const Model& m, const std::vector<Sequent>& hyps,
                            const Sequent& goal) {
  for (const auto& h : hyps)
    if (!sequent_true(h, m)) return Entailment::HypothesisFails;
  return sequent_true(goal, m) ? Entailment::Holds : Entailment::CounterexampleFound;
}

// -- families -----------------------------------------------------------------

struct FamilyOps {
  bool compose = true;  // the product-free relaxation drops this one
};

struct CloseResult {
  bool overflow = false;
  std::vector<Relation> family;  // canonical bit order, deduplicated
};

/// Least superset of the seed closed under the square residuals, meet, and
/// (optionally) composition; Overflow is a soft result once the family would
/// exceed `cap`.
inline CloseResult close_family(const std::vector<Relation>& seed, FamilyOps ops, int cap) {
  CloseResult res;
  if (seed.empty()) return res;
  const int n = seed.front().size();
  const Relation u = Relation::full(n);
  std::set<Relation> fam;
  std::vector<Relation> work;
  auto add = [&](const Relation& r) {
    if (fam.insert(r).second) work.push_back(r);
  };
  for (const auto& r : seed) {
    if (r.size() != n) throw RelationError("family seeds must share one world set");
    add(r);
  }
  while (!work.empty()) {
    if (static_cast<int>(fam.size()) > cap) {
      res.overflow = true;
      return res;
    }
    Relation r = work.back();
    work.pop_back();
    // close against everything already present (including r itself)
    std::vector<Relation> present(fam.begin(), fam.end());
    for (const auto& s : present) {
      add(rel_meet(r, s));
      add(residual_left(r, s, u));
      add(residual_left(s, r, u));
      add(residual_right(r, s, u));
      add(residual_right(s, r, u));
      if (ops.compose) {
        add(compose(r, s));
        add(compose(s, r));
      }
    }
    if (static_cast<int>(fam.size()) > cap) {
      res.overflow = true;
      return res;
    }
  }
  res.family.assign(fam.begin(), fam.end());
  return res;
}

/// The unique member neutral for composition against the whole family, if any.
inline std::optional<Relation> find_unit(const std::vector<Relation>& family) {
  for (const auto& e : family) {
    bool ok = true;
    for (const auto& r : family)
      if (!(compose(e, r) == r) || !(compose(r, e) == r)) {
        ok = false;
        break;
      }
    if (ok) return e;
  }
  return std::nullopt;
}

/// The member contained in every member, if any.
inline std::optional<Relation> find_zero(const std::vector<Relation>& family) {
  for (const auto& z : family) {
    bool ok = true;
    for (const auto& r : family)
      if (!z.subset_of(r)) {
        ok = false;
        break;
      }
    if (ok) return z;
  }
  return std::nullopt;
}

struct ModelDiagnostics {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Verifies the family laws of a non-standard model: closure (per the
/// product_closed flag), the unit and zero laws, zero absorption (two-sided
/// equalities when product-closed, one-sided inclusions otherwise), and the
/// unit-membership law (unit <= R iff diagonal <= R).
inline ModelDiagnostics check_model(const NSModel& m) {
  ModelDiagnostics d;
  const Relation u = Relation::full(m.n);
  const Relation delta = Relation::identity(m.n);
  std::set<Relation> fam(m.family.begin(), m.family.end());
  auto member = [&](const Relation& r, const std::string& what) {
    if (!fam.count(r)) d.violations.push_back("family not closed under " + what);
  };

  for (const auto& r : m.family) {
    for (const auto& s : m.family) {
      member(rel_meet(r, s), "meet");
      member(residual_left(r, s, u), "left residual");
      member(residual_right(r, s, u), "right residual");
      if (m.product_closed) member(compose(r, s), "composition");
    }
  }
  if (!fam.count(m.unit)) d.violations.push_back("unit is not a family member");
  if (!fam.count(m.zero)) d.violations.push_back("zero is not a family member");
  for (const auto& [name, r] : m.valuation)
    if (!fam.count(r)) d.violations.push_back("valuation of " + name + " outside the family");

  for (const auto& r : m.family) {
    if (!(compose(m.unit, r) == r) || !(compose(r, m.unit) == r)) {
      d.violations.push_back("unit law fails on " + to_string(r));
      break;
    }
  }
  for (const auto& r : m.family) {
    if (!m.zero.subset_of(r)) {
      d.violations.push_back("zero is not least: " + to_string(r));
      break;
    }
  }
  for (const auto& r : m.family) {
    const Relation zr = compose(m.zero, r);
    const Relation rz = compose(r, m.zero);
    if (m.product_closed) {
      if (!(zr == m.zero) || !(rz == m.zero)) {
        d.violations.push_back("zero absorption fails on " + to_string(r));
        break;
      }
    } else {
      if (!zr.subset_of(m.zero) || !rz.subset_of(m.zero)) {
        d.violations.push_back("one-sided zero absorption fails on " + to_string(r));
        break;
      }
    }
  }
  if (!delta.subset_of(m.unit)) d.violations.push_back("diagonal not below the unit");
  for (const auto& r : m.family) {
    if (m.unit.subset_of(r) != delta.subset_of(r)) {
      d.violations.push_back("unit-membership law fails on " + to_string(r));
      break;
    }
  }
  return d;
}

}  // namespace lambkit
