#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lambkit/relmodel.hpp"
#include "lambkit/rng.hpp"

namespace lambkit {

/// Countermodel search plan. Exhaustive mode walks every model up to max_n
/// (guarded: the space is 2^(n^2) per variable); random mode draws `samples`
/// seeded models per size.
struct SearchSpec {
  enum class Mode { Exhaustive, Random };
  enum class ModelClass { StandardSquare, Relativised, Nonstandard };

  int max_n = 3;
  Mode mode = Mode::Exhaustive;
  long samples = 1000;
  std::uint64_t seed = kDefaultSeed;
  ModelClass model_class = ModelClass::StandardSquare;
  bool product_closed = true;  // nonstandard class only
  int family_cap = 4096;
  int seed_family = 4;
  bool bias_structured = false;  // prefer diagonal/full/singleton draws
  bool override_guard = false;   // allow exhaustive beyond n = 3

  void validate() const {
    if (max_n < 1 || max_n > 64) throw ConfigErrorLike("max_n out of range");
    if (mode == Mode::Exhaustive && max_n > 3 && !override_guard)
      throw ConfigErrorLike("exhaustive search beyond n = 3 needs an explicit override");
    if (mode == Mode::Exhaustive && model_class == ModelClass::Nonstandard)
      throw ConfigErrorLike("nonstandard families are sampled, not enumerated");
  }

  struct ConfigErrorLike : std::runtime_error {
    using std::runtime_error::runtime_error;
  };
};

using ModelVariant = std::variant<RModel, NSModel>;

/// Evaluated relations backing a countermodel claim: one line per sequent
/// with the composed antecedent and the succedent value.
struct Certificate {
  struct Line {
    Sequent sequent;
    std::optional<Relation> lhs;  // empty antecedent: the diagonal is implied
    Relation rhs;
    bool holds = false;
  };
  std::vector<Line> hypotheses;
  Line goal;
};

struct CountermodelResult {
  ModelVariant model;
  Certificate certificate;
};

namespace detail {

inline std::set<std::string> collect_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.tag()) {
    case Conn::Var:
      out.insert(f.var_name());
      break;
    case Conn::Zero:
    case Conn::One:
      break;
    case Conn::Bang:
      collect_vars(f.left(), out);
      break;
    default:
      collect_vars(f.left(), out);
      collect_vars(f.right(), out);
      break;
  }
  return out;
}

inline std::vector<std::string> variables_of(const std::vector<Sequent>& hyps,
                                             const Sequent& goal) {
  std::set<std::string> vars;
  for (const auto& h : hyps) {
    for (const auto& f : h.antecedent) collect_vars(f, vars);
    collect_vars(h.succedent, vars);
  }
  for (const auto& f : goal.antecedent) collect_vars(f, vars);
  collect_vars(goal.succedent, vars);
  return {vars.begin(), vars.end()};
}

inline Relation relation_from_mask(int n, std::uint64_t mask) {
  Relation r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (mask & (1ull << (i * n + j))) r.set(i, j);
  return r;
}

inline Relation random_subrelation(Rng& rng, const Relation& u, bool bias_structured) {
  const int n = u.size();
  if (bias_structured && rng.chance(0.4)) {
    switch (rng.range(0, 3)) {
      case 0: return rel_meet(Relation::identity(n), u);
      case 1: return u;
      case 2: return Relation::empty(n);
      default: {
        Relation r(n);
        auto ps = u.pairs();
        if (!ps.empty()) {
          auto [i, j] = ps[rng.below(ps.size())];
          r.set(i, j);
        }
        return r;
      }
    }
  }
  // uniform over subsets of U, drawn row by row
  Relation r(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t row = rng.next() & u.row(i);
    for (int j = 0; j < n; ++j)
      if ((row >> j) & 1) r.set(i, j);
  }
  return r;
}

}  // namespace detail

/// Deterministic model stream: increasing n; per n, exhaustive valuations in
/// lexicographic bit order or seeded uniform draws. The relativised class
/// enumerates transitive universal relations first, then valuations below
/// them. Nonstandard candidates close a random seed family and are skipped
/// unless the closure is cap-bounded and has both a unit and a zero.
/// `visit` returns false to stop; the function returns false when stopped.
inline bool enumerate_models(const std::vector<std::string>& variables, const SearchSpec& spec,
                             const std::function<bool(const ModelVariant&)>& visit) {
  spec.validate();
  const std::size_t k = variables.size();
  Rng rng(spec.seed);

  auto visit_square = [&](int n, const std::vector<Relation>& vals) {
    RModel m;
    m.n = n;
    m.u = Relation::full(n);
    m.constants = RModel::Constants::Standard;
    for (std::size_t v = 0; v < k; ++v) m.valuation[variables[v]] = vals[v];
    return visit(ModelVariant(std::move(m)));
  };

  for (int n = 1; n <= spec.max_n; ++n) {
    const int bits = n * n;
    switch (spec.model_class) {
      case SearchSpec::ModelClass::StandardSquare: {
        if (spec.mode == SearchSpec::Mode::Exhaustive) {
          // odometer, first variable most significant
          std::vector<std::uint64_t> idx(k, 0);
          const std::uint64_t top = bits >= 64 ? 0 : (1ull << bits);
          for (;;) {
            std::vector<Relation> vals;
            vals.reserve(k);
            for (std::size_t v = 0; v < k; ++v)
              vals.push_back(detail::relation_from_mask(n, idx[v]));
            if (!visit_square(n, vals)) return false;
            std::size_t v = k;
            while (v > 0) {
              --v;
              if (++idx[v] < top) break;
              idx[v] = 0;
              if (v == 0) goto next_size_sq;
            }
            if (k == 0) break;  // single empty valuation
          }
        next_size_sq:;
        } else {
          const Relation full = Relation::full(n);
          for (long t = 0; t < spec.samples; ++t) {
            std::vector<Relation> vals;
            vals.reserve(k);
            for (std::size_t v = 0; v < k; ++v)
              vals.push_back(detail::random_subrelation(rng, full, spec.bias_structured));
            if (!visit_square(n, vals)) return false;
          }
        }
        break;
      }
      case SearchSpec::ModelClass::Relativised: {
        auto visit_rel = [&](const Relation& u, const std::vector<Relation>& vals) {
          RModel m;
          m.n = n;
          m.u = u;
          m.constants = RModel::Constants::Absent;
          for (std::size_t v = 0; v < k; ++v) m.valuation[variables[v]] = vals[v];
          return visit(ModelVariant(std::move(m)));
        };
        if (spec.mode == SearchSpec::Mode::Exhaustive) {
          const std::uint64_t top = bits >= 64 ? 0 : (1ull << bits);
          for (std::uint64_t um = 0; um < top; ++um) {
            Relation u = detail::relation_from_mask(n, um);
            if (!u.is_transitive()) continue;
            // valuations are submasks of U, walked in decreasing submask
            // order plus the empty mask, then reversed into lexicographic
            // order per variable via odometer on indexed lists
            std::vector<std::uint64_t> subs;
            std::uint64_t sm = um;
            for (;;) {
              subs.push_back(sm);
              if (sm == 0) break;
              sm = (sm - 1) & um;
            }
            std::sort(subs.begin(), subs.end());
            std::vector<std::size_t> idx(k, 0);
            for (;;) {
              std::vector<Relation> vals;
              vals.reserve(k);
              for (std::size_t v = 0; v < k; ++v)
                vals.push_back(detail::relation_from_mask(n, subs[idx[v]]));
              if (!visit_rel(u, vals)) return false;
              std::size_t v = k;
              bool done = k == 0;
              while (v > 0) {
                --v;
                if (++idx[v] < subs.size()) break;
                idx[v] = 0;
                if (v == 0) done = true;
              }
              if (done) break;
            }
          }
        } else {
          for (long t = 0; t < spec.samples; ++t) {
            Relation raw = detail::random_subrelation(rng, Relation::full(n), false);
            Relation u = rng.chance(0.2) ? Relation::full(n) : plus_closure(raw);
            std::vector<Relation> vals;
            vals.reserve(k);
            for (std::size_t v = 0; v < k; ++v)
              vals.push_back(detail::random_subrelation(rng, u, spec.bias_structured));
            if (!visit_rel(u, vals)) return false;
          }
        }
        break;
      }
      case SearchSpec::ModelClass::Nonstandard: {
        for (long t = 0; t < spec.samples; ++t) {
          std::vector<Relation> seeds;
          seeds.push_back(Relation::identity(n));  // guarantees a unit
          const int extra = rng.range(1, spec.seed_family);
          const Relation full = Relation::full(n);
          for (int e = 0; e < extra; ++e)
            seeds.push_back(detail::random_subrelation(rng, full, true));
          CloseResult cr =
              close_family(seeds, FamilyOps{spec.product_closed}, spec.family_cap);
          if (cr.overflow) continue;
          auto unit = find_unit(cr.family);
          auto zero = find_zero(cr.family);
          if (!unit || !zero) continue;
          NSModel m;
          m.n = n;
          m.family = cr.family;
          m.unit = *unit;
          m.zero = *zero;
          m.product_closed = spec.product_closed;
          for (std::size_t v = 0; v < k; ++v)
            m.valuation[variables[v]] = cr.family[rng.below(cr.family.size())];
          if (!visit(ModelVariant(std::move(m)))) return false;
        }
        break;
      }
    }
  }
  return true;
}

/// A model where every hypothesis holds and the goal fails, or nothing once
/// the spec's space is exhausted/sampled. The certificate carries the
/// evaluated relations; re-validate it with sequent_true.
inline std::optional<CountermodelResult> find_countermodel(const std::vector<Sequent>& hyps,
                                                           const Sequent& goal,
                                                           const SearchSpec& spec) {
  std::optional<CountermodelResult> found;
  auto vars = detail::variables_of(hyps, goal);

  auto line = [](const Sequent& s, const auto& m) {
    Certificate::Line ln;
    ln.sequent = s;
    if (!s.antecedent.empty()) ln.lhs = detail::antecedent_value(s, m);
    ln.rhs = eval(s.succedent, m);
    ln.holds = sequent_true(s, m);
    return ln;
  };

  enumerate_models(vars, spec, [&](const ModelVariant& mv) {
    bool counter = std::visit(
        [&](const auto& m) {
          return semantic_entails(m, hyps, goal) == Entailment::CounterexampleFound;
        },
        mv);
    if (!counter) return true;
    CountermodelResult res;
    res.model = mv;
    std::visit(
        [&](const auto& m) {
          for (const auto& h : hyps) res.certificate.hypotheses.push_back(line(h, m));
          res.certificate.goal = line(goal, m);
        },
        mv);
    found = std::move(res);
    return false;
  });
  return found;
}

}  // namespace lambkit
