#pragma once

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lambkit/gen.hpp"
#include "lambkit/io.hpp"
#include "lambkit/modelgen.hpp"

namespace lambkit::verify {

enum class ClaimKind {
  Derivable,
  NonDerivable,
  BoundedNonDerivable,
  NoCountermodelUpTo,
  EntailmentSample,
  InvariantSuite,
};

inline const char* kind_name(ClaimKind k) {
  switch (k) {
    case ClaimKind::Derivable: return "derivable";
    case ClaimKind::NonDerivable: return "non-derivable";
    case ClaimKind::BoundedNonDerivable: return "bounded-non-derivable";
    case ClaimKind::NoCountermodelUpTo: return "no-countermodel-up-to";
    case ClaimKind::EntailmentSample: return "entailment-sample";
    case ClaimKind::InvariantSuite: return "invariant-suite";
  }
  return "?";
}

struct ClaimResult {
  std::string id;
  std::string description;
  ClaimKind kind = ClaimKind::InvariantSuite;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = default_seed();
  std::string only;  // substring filter on claim ids; empty runs everything
};

namespace detail2 {

class Check {
public:
  void expect(bool cond, const std::string& what) {
    ++total_;
    if (!cond) {
      ++failed_;
      if (failures_.size() < 6) failures_.push_back(what);
    }
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream out;
    out << (total_ - failed_) << "/" << total_ << " checks";
    for (const auto& f : failures_) out << "; FAIL: " << f;
    return out.str();
  }
  void note(const std::string& s) { note_ = s; }
  const std::string& note() const { return note_; }

private:
  int total_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
  std::string note_;
};

inline Outcome outcome_of(const std::string& sequent, const std::string& preset_name) {
  Prover p(preset(preset_name));
  return p.prove(parse_sequent(sequent)).outcome;
}

}  // namespace detail2

// -- the individual claims ------------------------------------------------------

inline void claim_decision(detail2::Check& c, std::uint64_t) {
  using detail2::outcome_of;
  c.expect(outcome_of("(p\\p)\\q => q", "LA") == Outcome::Proved,
           "(p\\p)\\q => q provable once empty antecedents are allowed");
  c.expect(outcome_of("(p\\p)\\q => q", "L") == Outcome::Refuted,
           "(p\\p)\\q => q refuted under the non-emptiness restriction");
  c.expect(outcome_of("0/(0/p), 0/(0/q) => (0/(0/q)).(0/(0/p))", "L01") == Outcome::Refuted,
           "double-0-division commutation refuted");
  c.expect(outcome_of("1&p&q => (1&p).(1&q)", "L01") == Outcome::Refuted,
           "1&p&q => (1&p).(1&q) refuted");
  c.expect(outcome_of("1/(p/p) => (1/(p/p)).(1/(p/p))", "L01") == Outcome::Refuted,
           "1/(p/p) contraction refuted");
  c.expect(outcome_of("=> 1", "L01") == Outcome::Proved, "=> 1");
  c.expect(outcome_of("0 => p", "L01") == Outcome::Proved, "0 => p");
  c.expect(outcome_of("a.1 => a", "L01") == Outcome::Proved, "a.1 => a");
  c.expect(outcome_of("a => a.1", "L01") == Outcome::Proved, "a => a.1");
  {
    CalculusConfig cfg = preset("L01");
    cfg.hypotheses.push_back(parse_sequent("=> b.c"));
    Prover p(cfg);
    c.expect(p.prove_from_hypotheses(parse_sequent("1\\1 => b.c"), HypRoute::Direct).outcome ==
                 Outcome::Proved,
             "1\\1 => b.c from hypothesis => b.c");
  }
}

inline void claim_entailment(detail2::Check& c, std::uint64_t seed) {
  const Sequent hyp = parse_sequent("a\\a => b.c");
  const Sequent goal = parse_sequent("d => d.b.((c.b)&(a\\a)).c");
  const std::vector<Sequent> hyps{hyp};
  const std::vector<std::string> vars{"a", "b", "c", "d"};

  Rng rng(seed);
  int counterexamples = 0;
  for (int t = 0; t < 1000; ++t) {
    RModel m = random_square_model(rng, rng.range(1, 5), vars, t % 3 == 0);
    if (semantic_entails(m, hyps, goal) == Entailment::CounterexampleFound) ++counterexamples;
  }
  c.expect(counterexamples == 0, "no counterexample among 1000 random square models");

  SearchSpec spec;
  spec.max_n = 2;
  spec.mode = SearchSpec::Mode::Exhaustive;
  spec.model_class = SearchSpec::ModelClass::StandardSquare;
  long violations = 0, seen = 0;
  enumerate_models(vars, spec, [&](const ModelVariant& mv) {
    ++seen;
    if (semantic_entails(std::get<RModel>(mv), hyps, goal) ==
        Entailment::CounterexampleFound)
      ++violations;
    return true;
  });
  c.expect(violations == 0, "no counterexample in the exhaustive n <= 2 sweep");
  c.expect(seen == 16 + 65536, "exhaustive sweep visits every model once");
}

inline void claim_bc_bound(detail2::Check& c, std::uint64_t) {
  CalculusConfig cfg = preset("L01bc");
  cfg.max_antecedent = 8;
  cfg.max_depth = 20;
  Prover p(cfg);
  ProofStatus st = p.prove(parse_sequent("=> b.((c.b)&1).c"));
  c.expect(st.outcome == Outcome::RefutedBounded,
           "goal with the bc rule exhausts the bounded search without a proof");
}

inline void claim_zero_square(detail2::Check& c, std::uint64_t seed) {
  const Sequent goal = parse_sequent("0/(0/p), 0/(0/q) => (0/(0/q)).(0/(0/p))");

  SearchSpec ex;
  ex.max_n = 2;
  ex.mode = SearchSpec::Mode::Exhaustive;
  ex.model_class = SearchSpec::ModelClass::StandardSquare;
  c.expect(!find_countermodel({}, goal, ex).has_value(),
           "no countermodel in the exhaustive n <= 2 sweep");

  SearchSpec rnd;
  rnd.max_n = 4;
  rnd.mode = SearchSpec::Mode::Random;
  rnd.samples = 125;  // 125 per size, 500 total
  rnd.seed = seed;
  rnd.model_class = SearchSpec::ModelClass::StandardSquare;
  c.expect(!find_countermodel({}, goal, rnd).has_value(),
           "no countermodel among 500 random models up to n = 4");

  for (int n = 1; n <= 3; ++n) {
    const Relation empty = Relation::empty(n), full = Relation::full(n);
    const std::uint64_t top = 1ull << (n * n);
    bool dichotomy = true;
    for (std::uint64_t mask = 0; mask < top; ++mask) {
      Relation r(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (mask & (1ull << (i * n + j))) r.set(i, j);
      Relation v = residual_right(empty, residual_right(empty, r, full), full);
      if (!(v == empty) && !(v == full)) dichotomy = false;
    }
    c.expect(dichotomy, "0/(0/R) is empty or full at n = " + std::to_string(n));
  }
}

inline void claim_algebra(detail2::Check& c, std::uint64_t seed) {
  Rng rng(seed);

  int galois_bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const int n = rng.range(1, 6);
    const Relation full = Relation::full(n);
    Relation r = detail::random_subrelation(rng, full, false);
    Relation s = detail::random_subrelation(rng, full, false);
    Relation x = detail::random_subrelation(rng, full, false);
    const bool lhs1 = x.subset_of(residual_left(r, s, full));
    const bool rhs1 = compose(r, x).subset_of(s);
    const bool lhs2 = r.subset_of(residual_right(s, x, full));
    const bool rhs2 = compose(r, x).subset_of(s);
    if (lhs1 != rhs1 || lhs2 != rhs2) ++galois_bad;
  }
  c.expect(galois_bad == 0, "residuation is a Galois connection (10^4 cases)");

  int star_bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const int n = rng.range(1, 6);
    Relation r = detail::random_subrelation(rng, Relation::full(n), false);
    Relation st = star(r);
    if (!(st == rel_union(Relation::identity(n), compose(r, st)))) ++star_bad;
  }
  c.expect(star_bad == 0, "star fixpoint R* = id + R R* (10^4 cases)");

  int iter_bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const int n = rng.range(1, 5);
    const Relation full = Relation::full(n);
    Relation a = detail::random_subrelation(rng, full, false);
    Relation b = detail::random_subrelation(rng, full, false);
    // b / a*: stabilizing intersection of b, b/a, (b/a)/a, ...
    Relation term = b, acc = b;
    for (int k = 0; k < n * n + 1; ++k) {
      term = residual_right(term, a, full);
      Relation next = rel_meet(acc, term);
      if (next == acc) break;
      acc = next;
    }
    if (!(acc == residual_right(b, star(a), full))) ++iter_bad;
    // a* \ b symmetrically
    term = b;
    acc = b;
    for (int k = 0; k < n * n + 1; ++k) {
      term = residual_left(a, term, full);
      Relation next = rel_meet(acc, term);
      if (next == acc) break;
      acc = next;
    }
    if (!(acc == residual_left(star(a), b, full))) ++iter_bad;
  }
  c.expect(iter_bad == 0, "iterative division = stabilized intersection (10^4 cases)");

  int unit_bad = 0, zero_bad = 0, families = 0;
  while (families < 50) {
    const bool closed = families % 2 == 0;
    const bool lifted = families % 3 == 0;
    std::optional<NSModel> m =
        lifted ? lifted_ns_model(rng, rng.range(1, 2), {}, closed)
               : random_ns_model(rng, rng.range(2, 4), {}, closed);
    if (!m) continue;
    ++families;
    const Relation delta = Relation::identity(m->n);
    for (const auto& r : m->family) {
      if (m->unit.subset_of(r) != delta.subset_of(r)) ++unit_bad;
      const Relation zr = compose(m->zero, r), rz = compose(r, m->zero);
      if (closed) {
        if (!(zr == m->zero) || !(rz == m->zero)) ++zero_bad;
      } else {
        if (!zr.subset_of(m->zero) || !rz.subset_of(m->zero)) ++zero_bad;
      }
    }
  }
  c.expect(unit_bad == 0, "unit-membership law on 50 closed families");
  c.expect(zero_bad == 0, "zero absorption laws on 50 closed families");
  (void)dummy;
}

inline void claim_soundness(detail2::Check& c, std::uint64_t seed) {
  struct Leg {
    const char* preset_name;
    enum { Relativised, Square, Ns, NsProductFree } models;
  };
  const Leg legs[] = {
      {"L", Leg::Relativised},
      {"LAw", Leg::Square},
      {"L01", Leg::Ns},
      {"L01pf", Leg::NsProductFree},
  };
  int leg_index = 0;
  for (const Leg& leg : legs) {
    ForwardGenerator gen(preset(leg.preset_name), seed + 17 * leg_index);
    gen.grow(6000);
    auto sequents = gen.harvest(500);
    Prover prover(preset(leg.preset_name));
    Rng rng(seed + 1000 + leg_index);
    int not_proved = 0, violations = 0;
    for (const auto& s : sequents) {
      if (prover.prove(s).outcome != Outcome::Proved) {
        ++not_proved;
        continue;
      }
      for (int t = 0; t < 10; ++t) {
        std::vector<std::string> vars;
        {
          std::set<std::string> vs;
          for (const auto& f : s.antecedent) detail::collect_vars(f, vs);
          detail::collect_vars(s.succedent, vs);
          vars.assign(vs.begin(), vs.end());
        }
        switch (leg.models) {
          case Leg::Relativised: {
            RModel m = random_relativised_model(rng, rng.range(1, 4), vars);
            if (!sequent_true(s, m)) ++violations;
            break;
          }
          case Leg::Square: {
            RModel m = random_square_model(rng, rng.range(1, 4), vars);
            if (!sequent_true(s, m)) ++violations;
            break;
          }
          case Leg::Ns:
          case Leg::NsProductFree: {
            const bool closed = leg.models == Leg::Ns;
            std::optional<NSModel> m;
            for (int tries = 0; tries < 10 && !m; ++tries)
              m = (t % 3 == 0) ? lifted_ns_model(rng, rng.range(1, 2), vars, closed)
                               : random_ns_model(rng, rng.range(2, 3), vars, closed);
            if (m && !sequent_true(s, *m)) ++violations;
            break;
          }
        }
      }
    }
    c.expect(not_proved == 0, std::string(leg.preset_name) +
                                  ": every forward-generated sequent re-proves");
    c.expect(violations == 0,
             std::string(leg.preset_name) + ": zero violations on sampled models");
    ++leg_index;
  }
}

inline void claim_cut(detail2::Check& c, std::uint64_t seed) {
  ForwardGenerator gen(preset("L01"), seed);
  gen.grow(8000);
  auto pairs = gen.cut_pairs(200);
  int rounds = 0;
  while (static_cast<int>(pairs.size()) < 200 && rounds++ < 5) {
    gen.grow(4000);
    pairs = gen.cut_pairs(200);
  }
  c.expect(static_cast<int>(pairs.size()) == 200, "harvested 200 composable proved pairs");
  Prover prover(preset("L01"));
  int bad = 0;
  for (const auto& cp : pairs)
    if (prover.prove(cp.recombined).outcome != Outcome::Proved) ++bad;
  c.expect(bad == 0, "all 200 recombined sequents prove exactly");
}

inline void claim_graph(detail2::Check& c, std::uint64_t) {
  std::vector<Formula> universe{var("a"), var("b"), ldiv(var("a"), var("b"))};
  GraphBuilder b(universe, GraphVariant::Full, {}, preset("L01"));
  bool stages_ok = true;
  int first_bad = -1;
  for (int s = 0; s < 30; ++s) {
    b.step();
    GraphReport rep = check_graph(b.graph(), b.prover());
    if (!rep.maintained_ok() || rep.indeterminate != 0) {
      stages_ok = false;
      if (first_bad < 0) first_bad = s;
    }
  }
  c.expect(stages_ok, first_bad < 0
                          ? "maintained invariants hold at every stage"
                          : "maintained invariants fail at stage " + std::to_string(first_bad));
  GraphReport final_rep = check_graph(b.graph(), b.prover());
  c.expect(final_rep.ok(), "horizon-limited witnesses verified on the final stage");
  c.expect(b.graph().vertex_count > 10, "construction actually grows");

  // The doubled-world family: the unit is the lifted diagonal, a strict
  // superset of the true diagonal.
  const Relation delta_lift = lift_relation(Relation::identity(1));
  CloseResult cr = close_family({Relation::empty(2), delta_lift}, FamilyOps{true}, 4096);
  c.expect(!cr.overflow, "doubled-world family closes");
  auto unit = find_unit(cr.family);
  c.expect(unit.has_value() && *unit == delta_lift, "family unit is the lifted diagonal");
  c.expect(!(delta_lift == Relation::identity(2)), "the lifted diagonal is not the diagonal");
  if (unit) {
    NSModel m;
    m.n = 2;
    m.family = cr.family;
    m.unit = *unit;
    m.zero = *find_zero(cr.family);
    m.product_closed = true;
    c.expect(check_model(m).ok(), "doubled-world family passes the model laws");
  }
}

inline void claim_hyp_roundtrip(detail2::Check& c, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> vars{"p", "q", "r"};
  int unknowns = 0, proved_pairs = 0;
  CalculusConfig pf = preset("L01pf");
  for (int t = 0; t < 50; ++t) {
    std::vector<Sequent> hyps;
    const int nh = rng.range(1, 2);
    for (int h = 0; h < nh; ++h) {
      std::vector<Formula> ant;
      const int na = rng.range(0, 2);
      for (int k = 0; k < na; ++k) ant.push_back(random_formula(rng, pf, 1, vars));
      hyps.push_back(Sequent{std::move(ant), random_formula(rng, pf, 2, vars)});
    }
    Sequent goal;
    if (rng.chance(0.66)) {
      ForwardGenerator gen(pf, rng.next());
      for (const auto& h : hyps) gen.add_axiom(h);
      gen.grow(600);
      auto got = gen.harvest(1);
      goal = got.empty() ? Sequent{{var("p")}, var("q")} : got[0];
    } else {
      std::vector<Formula> ant{random_formula(rng, pf, 1, vars)};
      goal = Sequent{std::move(ant), random_formula(rng, pf, 2, vars)};
    }

    CalculusConfig cfg = pf;
    cfg.hypotheses = hyps;
    Prover prover(cfg);
    ProofStatus direct = prover.prove_from_hypotheses(goal, HypRoute::Direct);
    ProofStatus banged = prover.prove_from_hypotheses(goal, HypRoute::Bang);
    if (direct.outcome == Outcome::Unknown || banged.outcome == Outcome::Unknown) {
      ++unknowns;
      continue;
    }
    const bool dp = direct.proved(), bp = banged.proved();
    if (dp && bp) ++proved_pairs;
    if (dp != bp) ++unknowns;  // a route missed a proof within budget
  }
  c.expect(unknowns < 5, "route disagreements stay under 10%");
  c.expect(proved_pairs >= 20, "enough derivable samples to make the comparison meaningful");
  c.note("agreeing proved pairs: " + std::to_string(proved_pairs) +
         ", unknowns: " + std::to_string(unknowns));
}

// -- the registry ---------------------------------------------------------------

inline std::vector<ClaimResult> run_claims(const VerifyOptions& opt = {}) {
  struct Entry {
    const char* id;
    const char* description;
    ClaimKind kind;
    std::function<void(detail2::Check&, std::uint64_t)> run;
  };
  const Entry entries[] = {
      {"decision", "exact decisions on the fixture sequents", ClaimKind::Derivable,
       claim_decision},
      {"entailment", "hypothesis a\\a => b.c semantically entails the long goal",
       ClaimKind::EntailmentSample, claim_entailment},
      {"bc-bound", "goal with the bc rule is refuted within bounds",
       ClaimKind::BoundedNonDerivable, claim_bc_bound},
      {"zero-square", "double-0-division goal has no square countermodel",
       ClaimKind::NoCountermodelUpTo, claim_zero_square},
      {"algebra", "residuation, star and family laws (randomized)",
       ClaimKind::InvariantSuite, claim_algebra},
      {"soundness", "harvested proofs hold in sampled models", ClaimKind::InvariantSuite,
       claim_soundness},
      {"cut", "composable proved pairs recombine to proved", ClaimKind::InvariantSuite,
       claim_cut},
      {"graph", "staged construction invariants and the doubled-world family",
       ClaimKind::InvariantSuite, claim_graph},
      {"hyp-roundtrip", "direct and !-translated hypothesis routes agree",
       ClaimKind::InvariantSuite, claim_hyp_roundtrip},
  };

  std::vector<ClaimResult> results;
  double total = 0.0;
  bool all_ok = true;
  for (const Entry& e : entries) {
    if (!opt.only.empty() && std::string(e.id).find(opt.only) == std::string::npos) continue;
    ClaimResult r;
    r.id = e.id;
    r.description = e.description;
    r.kind = e.kind;
    detail2::Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(check, opt.seed);
      r.passed = check.ok();
      r.detail = check.summary();
      if (!check.note().empty()) r.detail += " (" + check.note() + ")";
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    total += r.seconds;
    all_ok = all_ok && r.passed;
    results.push_back(std::move(r));
  }

  if (opt.only.empty() || std::string("runtime").find(opt.only) != std::string::npos) {
    ClaimResult r;
    r.id = "runtime";
    r.description = "the whole suite finishes within the minute budget";
    r.kind = ClaimKind::InvariantSuite;
    r.passed = all_ok && total < 60.0;
    r.seconds = total;
    std::ostringstream d;
    d << "total " << total << " s, budget 60 s";
    if (!all_ok) d << "; earlier claims failed";
    r.detail = d.str();
    results.push_back(std::move(r));
  }
  return results;
}

inline bool all_passed(const std::vector<ClaimResult>& rs) {
  for (const auto& r : rs)
    if (!r.passed) return false;
  return true;
}

}  // namespace lambkit::verify
