#pragma once

#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lambkit/calculus.hpp"
#include "lambkit/rng.hpp"

namespace lambkit {

/// Random formula within the configured fragment, for round-trip and
/// enumeration tests.
inline Formula random_formula(Rng& rng, const CalculusConfig& cfg, int depth,
                              const std::vector<std::string>& vars) {
  if (depth <= 0 || rng.chance(0.3)) {
    int atoms = static_cast<int>(vars.size());
    if (cfg.has_zero) ++atoms;
    if (cfg.has_one) ++atoms;
    int pick = rng.range(0, atoms - 1);
    if (pick < static_cast<int>(vars.size())) return var(vars[pick]);
    pick -= static_cast<int>(vars.size());
    if (cfg.has_zero && pick == 0) return zero();
    return one();
  }
  std::vector<Conn> conns;
  if (cfg.has_ldiv) conns.push_back(Conn::LDiv);
  if (cfg.has_rdiv) conns.push_back(Conn::RDiv);
  if (cfg.has_mul) conns.push_back(Conn::Mul);
  if (cfg.has_meet) conns.push_back(Conn::Meet);
  if (cfg.bang) conns.push_back(Conn::Bang);
  if (cfg.iterative) {
    conns.push_back(Conn::IterLDiv);
    conns.push_back(Conn::IterRDiv);
  }
  if (conns.empty()) return var(vars[rng.below(vars.size())]);
  Conn c = conns[rng.below(conns.size())];
  if (c == Conn::Bang) return bang(random_formula(rng, cfg, depth - 1, vars));
  Formula l = random_formula(rng, cfg, depth - 1, vars);
  Formula r = random_formula(rng, cfg, depth - 1, vars);
  return Formula::make(c, {}, std::move(l), std::move(r));
}

struct GenOptions {
  int max_sequent_size = 14;
  int max_antecedent = 5;
  int formula_depth = 2;
  std::vector<std::string> vars = {"p", "q", "r"};
};

/// Derivable sequents by forward rule application: everything in the pool is
/// derivable by construction, independently of the backward prover. Used as
/// the oracle side of the soundness and cut-recombination harnesses.
class ForwardGenerator {
public:
  ForwardGenerator(CalculusConfig cfg, std::uint64_t seed, GenOptions opt = {})
      : cfg_(std::move(cfg)), rng_(seed), opt_(std::move(opt)) {
    cfg_.validate();
    seed_pool();
  }

  /// Extra zero-premise axioms (hypotheses) to generate consequences of.
  void add_axiom(const Sequent& s) { push(s); }

  const std::vector<Sequent>& pool() const { return pool_; }

  void grow(int steps) {
    for (int i = 0; i < steps; ++i) step();
  }

  /// Harvests `want` pool sequents (uniform with replacement).
  std::vector<Sequent> harvest(int want) {
    std::vector<Sequent> out;
    if (pool_.empty()) return out;
    out.reserve(want);
    for (int i = 0; i < want; ++i) out.push_back(pick());
    return out;
  }

  struct CutPair {
    Sequent left;        // Pi -> A
    Sequent right;       // Gamma, A, Delta -> C
    std::size_t pos;     // index of A in right's antecedent
    Sequent recombined;  // Gamma, Pi, Delta -> C
  };

  /// Composable derivable pairs for the cut-admissibility harness.
  std::vector<CutPair> cut_pairs(int want, int max_recombined_size = 40) {
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_succ;
    for (std::size_t i = 0; i < pool_.size(); ++i)
      by_succ[pool_[i].succedent.hash()].push_back(i);
    std::vector<CutPair> out;
    std::unordered_set<std::size_t> seen;
    int attempts = want * 200;
    while (static_cast<int>(out.size()) < want && attempts-- > 0) {
      const Sequent& right = pick();
      if (right.antecedent.empty()) continue;
      const std::size_t pos = rng_.below(right.antecedent.size());
      const Formula& a = right.antecedent[pos];
      auto it = by_succ.find(a.hash());
      if (it == by_succ.end()) continue;
      const auto& cands = it->second;
      const Sequent& left = pool_[cands[rng_.below(cands.size())]];
      if (!(left.succedent == a)) continue;
      CutPair cp;
      cp.left = left;
      cp.right = right;
      cp.pos = pos;
      cp.recombined.antecedent.assign(right.antecedent.begin(),
                                      right.antecedent.begin() + pos);
      cp.recombined.antecedent.insert(cp.recombined.antecedent.end(),
                                      left.antecedent.begin(), left.antecedent.end());
      cp.recombined.antecedent.insert(cp.recombined.antecedent.end(),
                                      right.antecedent.begin() + pos + 1,
                                      right.antecedent.end());
      cp.recombined.succedent = right.succedent;
      if (cp.recombined.total_size() > max_recombined_size) continue;
      if (cfg_.lambek_restriction && cp.recombined.antecedent.empty()) continue;
      if (!seen.insert(cp.recombined.hash() ^ cp.left.hash()).second) continue;
      out.push_back(std::move(cp));
    }
    return out;
  }

  Rng& rng() { return rng_; }

private:
  void seed_pool() {
    for (int i = 0; i < 6; ++i) {
      Formula f = random_formula(rng_, cfg_, opt_.formula_depth, opt_.vars);
      push(Sequent{{f}, f});
    }
    for (const auto& v : opt_.vars) push(Sequent{{var(v)}, var(v)});
    if (cfg_.has_one && !cfg_.lambek_restriction) push(Sequent{{}, one()});
    if (cfg_.has_zero)
      for (int i = 0; i < 4; ++i) {
        std::vector<Formula> ant;
        const int before = rng_.range(0, 1), after = rng_.range(0, 1);
        for (int k = 0; k < before; ++k)
          ant.push_back(random_formula(rng_, cfg_, 1, opt_.vars));
        ant.push_back(zero());
        for (int k = 0; k < after; ++k)
          ant.push_back(random_formula(rng_, cfg_, 1, opt_.vars));
        push(Sequent{std::move(ant), random_formula(rng_, cfg_, opt_.formula_depth, opt_.vars)});
      }
  }

  const Sequent& pick() { return pool_[rng_.below(pool_.size())]; }

  void push(const Sequent& s) {
    if (s.total_size() > opt_.max_sequent_size) return;
    if (static_cast<int>(s.antecedent.size()) > opt_.max_antecedent) return;
    if (cfg_.lambek_restriction && s.antecedent.empty()) return;
    if (!cfg_.allows(s)) return;
    if (!dedupe_.insert(s).second) return;
    pool_.push_back(s);
  }

  void step() {
    switch (rng_.range(0, 8)) {
      case 0: {  // \R
        if (!cfg_.has_ldiv) return;
        const Sequent& s = pick();
        const std::size_t min_len = cfg_.lambek_restriction ? 2 : 1;
        if (s.antecedent.size() < min_len) return;
        Sequent t;
        t.antecedent.assign(s.antecedent.begin() + 1, s.antecedent.end());
        t.succedent = ldiv(s.antecedent.front(), s.succedent);
        push(t);
        return;
      }
      case 1: {  // /R
        if (!cfg_.has_rdiv) return;
        const Sequent& s = pick();
        const std::size_t min_len = cfg_.lambek_restriction ? 2 : 1;
        if (s.antecedent.size() < min_len) return;
        Sequent t;
        t.antecedent.assign(s.antecedent.begin(), s.antecedent.end() - 1);
        t.succedent = rdiv(s.succedent, s.antecedent.back());
        push(t);
        return;
      }
      case 2: {  // .R
        if (!cfg_.has_mul) return;
        const Sequent a = pick(), b = pick();
        Sequent t;
        t.antecedent = a.antecedent;
        t.antecedent.insert(t.antecedent.end(), b.antecedent.begin(), b.antecedent.end());
        t.succedent = mul(a.succedent, b.succedent);
        push(t);
        return;
      }
      case 3: {  // &R (with itself when no antecedent twin is at hand)
        if (!cfg_.has_meet) return;
        const Sequent a = pick();
        for (int tries = 0; tries < 4; ++tries) {
          const Sequent& b = pick();
          if (b.antecedent == a.antecedent) {
            push(Sequent{a.antecedent, meet(a.succedent, b.succedent)});
            return;
          }
        }
        push(Sequent{a.antecedent, meet(a.succedent, a.succedent)});
        return;
      }
      case 4: {  // \L
        if (!cfg_.has_ldiv) return;
        const Sequent a = pick(), c = pick();
        if (c.antecedent.empty()) return;
        const std::size_t pos = rng_.below(c.antecedent.size());
        Sequent t;
        t.antecedent.assign(c.antecedent.begin(), c.antecedent.begin() + pos);
        t.antecedent.insert(t.antecedent.end(), a.antecedent.begin(), a.antecedent.end());
        t.antecedent.push_back(ldiv(a.succedent, c.antecedent[pos]));
        t.antecedent.insert(t.antecedent.end(), c.antecedent.begin() + pos + 1,
                            c.antecedent.end());
        t.succedent = c.succedent;
        push(t);
        return;
      }
      case 5: {  // /L
        if (!cfg_.has_rdiv) return;
        const Sequent a = pick(), c = pick();
        if (c.antecedent.empty()) return;
        const std::size_t pos = rng_.below(c.antecedent.size());
        Sequent t;
        t.antecedent.assign(c.antecedent.begin(), c.antecedent.begin() + pos);
        t.antecedent.push_back(rdiv(c.antecedent[pos], a.succedent));
        t.antecedent.insert(t.antecedent.end(), a.antecedent.begin(), a.antecedent.end());
        t.antecedent.insert(t.antecedent.end(), c.antecedent.begin() + pos + 1,
                            c.antecedent.end());
        t.succedent = c.succedent;
        push(t);
        return;
      }
      case 6: {  // .L
        if (!cfg_.has_mul) return;
        const Sequent s = pick();
        if (s.antecedent.size() < 2) return;
        const std::size_t pos = rng_.below(s.antecedent.size() - 1);
        Sequent t;
        t.antecedent.assign(s.antecedent.begin(), s.antecedent.begin() + pos);
        t.antecedent.push_back(mul(s.antecedent[pos], s.antecedent[pos + 1]));
        t.antecedent.insert(t.antecedent.end(), s.antecedent.begin() + pos + 2,
                            s.antecedent.end());
        t.succedent = s.succedent;
        push(t);
        return;
      }
      case 7: {  // &L
        if (!cfg_.has_meet) return;
        const Sequent s = pick();
        if (s.antecedent.empty()) return;
        const std::size_t pos = rng_.below(s.antecedent.size());
        Formula g = random_formula(rng_, cfg_, 1, opt_.vars);
        Sequent t = s;
        t.antecedent[pos] = rng_.chance(0.5) ? meet(s.antecedent[pos], g)
                                             : meet(g, s.antecedent[pos]);
        push(t);
        return;
      }
      default: {  // 1L
        if (!cfg_.has_one) return;
        const Sequent s = pick();
        const std::size_t pos = rng_.below(s.antecedent.size() + 1);
        Sequent t = s;
        t.antecedent.insert(t.antecedent.begin() + pos, one());
        push(t);
        return;
      }
    }
  }

  CalculusConfig cfg_;
  Rng rng_;
  GenOptions opt_;
  std::vector<Sequent> pool_;
  std::unordered_set<Sequent, SequentHash> dedupe_;
};

}  // namespace lambkit
