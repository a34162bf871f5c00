#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lambkit/prover.hpp"

namespace lambkit {

class GraphError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class GraphVariant { Full, ProductFree };

/// One scheduled transition, kept for the horizon-limited property checks.
struct RoundRecord {
  int stage = 0;  // transforms stage -> stage+1
  int type = 0;   // 0: new predecessor, 1: new successor, 2: midpoint
  std::uint64_t slot_a = 0, slot_b = 0;  // vertex slots (type 2 uses both)
  std::uint64_t fa = 0, fb = 0;          // universe indices (type 2 uses both)
  std::uint64_t rep = 0;                 // repetition counter of the schedule
  bool fired = false;
  std::string skip_reason;
  int created = -1;
};

/// Finite stage of the labelled-graph construction. Vertices are 0..count-1
/// (0 is the initial reflexive point); every edge carries a formula label and
/// the stage at which it appeared.
struct LabeledGraph {
  struct Edge {
    Formula label;
    int stage_added = 0;
  };

  int stage = 0;
  int vertex_count = 1;
  std::map<std::pair<int, int>, Edge> edges;

  std::vector<Formula> universe;    // enumeration base, grows with new labels
  std::vector<RoundRecord> rounds;  // transition log

  bool has_edge(int x, int y) const { return edges.count({x, y}) != 0; }
  const Formula& label(int x, int y) const { return edges.at({x, y}).label; }

  static LabeledGraph initial(std::vector<Formula> universe) {
    LabeledGraph g;
    g.edges[{0, 0}] = Edge{one(), 0};
    g.universe = std::move(universe);
    return g;
  }
};

/// Cantor unpairing: the inverse of z = (a+b)(a+b+1)/2 + b.
inline std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  std::uint64_t s =
      static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while ((s + 1) * (s + 2) / 2 <= z) ++s;
  while (s * (s + 1) / 2 > z) --s;
  const std::uint64_t b = z - s * (s + 1) / 2;
  return {s - b, b};
}

/// sigma: round |-> ((vertex slot, formula index), repetition)
inline std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> schedule_sigma(std::uint64_t i) {
  auto [p, k] = cantor_unpair(i);
  auto [slot, fidx] = cantor_unpair(p);
  return {slot, fidx, k};
}

/// varsigma: round |-> ((slot, slot, formula, formula), repetition)
inline std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>
schedule_varsigma(std::uint64_t i) {
  auto [p, k] = cantor_unpair(i);
  auto [q, fc] = cantor_unpair(p);
  auto [r, fb] = cantor_unpair(q);
  auto [sx, sz] = cantor_unpair(r);
  return {sx, sz, fb, fc, k};
}

/// Stage-by-stage construction. The full variant cycles transition types
/// 0/1/2 per round; the product-free variant alternates types 0/1 only.
/// Skipped transitions (missing vertex, failed side condition, x = z) still
/// consume a stage.
class GraphBuilder {
public:
  GraphBuilder(std::vector<Formula> universe, GraphVariant variant,
               std::vector<Sequent> hypotheses, CalculusConfig cfg)
      : variant_(variant) {
    if (universe.empty()) throw GraphError("empty formula universe");
    if (!cfg.has_mul || !cfg.has_one)
      throw GraphError("graph labels need product and unit in the fragment");
    if (variant == GraphVariant::ProductFree)
      for (const auto& h : hypotheses)
        if (contains_product(h))
          throw GraphError("product-free variant needs product-free hypotheses");
    cfg.hypotheses = std::move(hypotheses);
    for (const auto& f : universe)
      if (!cfg.allows(f)) throw GraphError("universe formula outside the fragment");
    prover_ = std::make_unique<Prover>(std::move(cfg));
    std::vector<Formula> uni;
    for (auto& f : universe) push_unique(uni, f);
    g_ = LabeledGraph::initial(std::move(uni));
  }

  const LabeledGraph& graph() const { return g_; }
  Prover& prover() { return *prover_; }

  /// Applies the next scheduled transition; returns whether it fired.
  bool step() {
    const int s = g_.stage;
    int type, round;
    if (variant_ == GraphVariant::Full) {
      type = s % 3;
      round = s / 3;
    } else {
      type = s % 2;
      round = s / 2;
    }

    RoundRecord rec;
    rec.stage = s;
    rec.type = type;

    if (type == 0 || type == 1) {
      auto [slot, fidx, k] = schedule_sigma(static_cast<std::uint64_t>(round));
      rec.slot_a = slot;
      rec.fa = fidx;
      rec.rep = k;
      if (slot >= static_cast<std::uint64_t>(g_.vertex_count)) {
        rec.skip_reason = "vertex not created yet";
      } else if (fidx >= g_.universe.size()) {
        rec.skip_reason = "formula not enumerated yet";
      } else {
        const int y = static_cast<int>(slot);
        const Formula a = g_.universe[fidx];
        const int nv = g_.vertex_count++;
        rec.fired = true;
        rec.created = nv;
        add_edge(nv, nv, one(), s + 1);
        if (type == 0) {
          // new left extension: edges (nv, z) labelled A . l(y, z)
          for (const auto& [e, info] : snapshot(s))
            if (e.first == y) add_edge(nv, e.second, mul(a, info.label), s + 1);
        } else {
          // new right extension: edges (x, nv) labelled l(x, y) . A
          for (const auto& [e, info] : snapshot(s))
            if (e.second == y) add_edge(e.first, nv, mul(info.label, a), s + 1);
        }
      }
    } else {
      auto [sx, sz, fb, fc, k] = schedule_varsigma(static_cast<std::uint64_t>(round));
      rec.slot_a = sx;
      rec.slot_b = sz;
      rec.fa = fb;
      rec.fb = fc;
      rec.rep = k;
      const auto vc = static_cast<std::uint64_t>(g_.vertex_count);
      if (sx >= vc || sz >= vc) {
        rec.skip_reason = "vertex not created yet";
      } else if (fb >= g_.universe.size() || fc >= g_.universe.size()) {
        rec.skip_reason = "formula not enumerated yet";
      } else if (sx == sz) {
        rec.skip_reason = "same vertex";
      } else if (!g_.has_edge(static_cast<int>(sx), static_cast<int>(sz))) {
        rec.skip_reason = "no edge";
      } else {
        const int x = static_cast<int>(sx), z = static_cast<int>(sz);
        const Formula b = g_.universe[fb], c = g_.universe[fc];
        if (!derivable(Sequent{{g_.label(x, z)}, mul(b, c)})) {
          rec.skip_reason = "label does not decompose";
        } else {
          const int y = g_.vertex_count++;
          rec.fired = true;
          rec.created = y;
          add_edge(y, y, one(), s + 1);
          for (const auto& [e, info] : snapshot(s)) {
            if (e.second == x) add_edge(e.first, y, mul(info.label, b), s + 1);
            if (e.first == z) add_edge(y, e.second, mul(c, info.label), s + 1);
          }
        }
      }
    }

    g_.stage = s + 1;
    g_.rounds.push_back(std::move(rec));
    return g_.rounds.back().fired;
  }

  void run(int steps) {
    for (int i = 0; i < steps; ++i) step();
  }

  /// Proved or ProvedApprox counts as derivable; a bounded non-result under
  /// hypotheses skips conservatively, Unknown aborts.
  bool derivable(const Sequent& s) {
    ProofStatus st = prover_->config().hypotheses.empty()
                         ? prover_->prove(s)
                         : prover_->prove_from_hypotheses(s, HypRoute::Direct);
    if (st.outcome == Outcome::Unknown)
      throw GraphError("prover budget exhausted while checking " + render_sequent(s));
    return st.proved();
  }

private:
  static void push_unique(std::vector<Formula>& xs, const Formula& f) {
    for (const auto& g : xs)
      if (g == f) return;
    xs.push_back(f);
  }

  void add_edge(int x, int y, Formula label, int stage) {
    g_.edges[{x, y}] = LabeledGraph::Edge{label, stage};
    push_unique(g_.universe, label);
  }

  // Edges present before the current transition.
  std::vector<std::pair<std::pair<int, int>, LabeledGraph::Edge>> snapshot(int stage) const {
    std::vector<std::pair<std::pair<int, int>, LabeledGraph::Edge>> out;
    for (const auto& [e, info] : g_.edges)
      if (info.stage_added <= stage) out.emplace_back(e, info);
    return out;
  }

  GraphVariant variant_;
  std::unique_ptr<Prover> prover_;
  LabeledGraph g_;
};

inline LabeledGraph build_graph(int steps, std::vector<Formula> universe, GraphVariant variant,
                                std::vector<Sequent> hypotheses, const CalculusConfig& cfg) {
  GraphBuilder b(std::move(universe), variant, std::move(hypotheses), cfg);
  b.run(steps);
  return b.graph();
}

// -- property checking --------------------------------------------------------

struct GraphReport {
  // maintained at every stage
  bool transitive = true;
  bool reflexive_unit = true;
  bool antisymmetric = true;
  bool label_decomposition = true;  // l(x,z) -> l(x,y) . l(y,z) derivable
  // horizon-limited: witnesses for the transitions already processed
  bool midpoint_witnesses = true;
  bool left_extension = true;
  bool right_extension = true;

  int indeterminate = 0;  // bounded prover could not decide an instance
  std::vector<std::string> failures;

  bool maintained_ok() const {
    return transitive && reflexive_unit && antisymmetric && label_decomposition;
  }
  bool ok() const {
    return maintained_ok() && midpoint_witnesses && left_extension && right_extension;
  }
};

/// Validates the construction invariants on the current stage, using `prover`
/// for the derivability side conditions. Pass the builder's own prover to
/// share its memo table.
inline GraphReport check_graph(const LabeledGraph& g, Prover& prover) {
  GraphReport rep;
  auto fail = [&](bool GraphReport::* flag, const std::string& why) {
    rep.*flag = false;
    rep.failures.push_back(why);
  };

  const bool with_hyps = !prover.config().hypotheses.empty();
  auto derivability = [&](const Sequent& s) -> std::optional<bool> {
    ProofStatus st =
        with_hyps ? prover.prove_from_hypotheses(s, HypRoute::Direct) : prover.prove(s);
    if (st.proved()) return true;
    if (st.outcome == Outcome::Refuted) return false;
    ++rep.indeterminate;
    return std::nullopt;
  };

  for (int x = 0; x < g.vertex_count; ++x) {
    if (!g.has_edge(x, x))
      fail(&GraphReport::reflexive_unit, "missing loop at " + std::to_string(x));
    else if (!(g.label(x, x) == one()))
      fail(&GraphReport::reflexive_unit, "loop label is not 1 at " + std::to_string(x));
  }

  for (const auto& [e, info] : g.edges) {
    auto [x, y] = e;
    if (x != y && g.has_edge(y, x))
      fail(&GraphReport::antisymmetric,
           "both (" + std::to_string(x) + "," + std::to_string(y) + ") and its reverse");
  }

  for (const auto& [e1, i1] : g.edges)
    for (const auto& [e2, i2] : g.edges) {
      if (e1.second != e2.first) continue;
      const int x = e1.first, y = e1.second, z = e2.second;
      if (!g.has_edge(x, z)) {
        fail(&GraphReport::transitive,
             "missing (" + std::to_string(x) + "," + std::to_string(z) + ")");
        continue;
      }
      Sequent claim{{g.label(x, z)}, mul(i1.label, i2.label)};
      auto d = derivability(claim);
      if (!d)
        fail(&GraphReport::label_decomposition, "undecided: " + render_sequent(claim));
      else if (!*d)
        fail(&GraphReport::label_decomposition, "not derivable: " + render_sequent(claim));
    }

  for (const auto& rec : g.rounds) {
    if (rec.type == 2) {
      if (rec.fired) {
        const int x = static_cast<int>(rec.slot_a), z = static_cast<int>(rec.slot_b);
        const int y = rec.created;
        const Formula b = g.universe[rec.fa], c = g.universe[rec.fb];
        if (!g.has_edge(x, y) || !g.has_edge(y, z)) {
          fail(&GraphReport::midpoint_witnesses, "midpoint edges missing");
          continue;
        }
        auto db = derivability(Sequent{{g.label(x, y)}, b});
        auto dc = derivability(Sequent{{g.label(y, z)}, c});
        if (db && dc && (!*db || !*dc))
          fail(&GraphReport::midpoint_witnesses,
               "midpoint labels do not prove the factors at stage " +
                   std::to_string(rec.stage));
      } else if (rec.skip_reason == "same vertex" && !with_hyps &&
                 rec.slot_a < static_cast<std::uint64_t>(g.vertex_count) &&
                 rec.fa < g.universe.size() && rec.fb < g.universe.size()) {
        // x = z skip: if 1 -> B . C is derivable, pure cut-free derivability
        // must split it into => B and => C (the loop itself is the witness).
        const Formula b = g.universe[rec.fa], c = g.universe[rec.fb];
        auto whole = derivability(Sequent{{one()}, mul(b, c)});
        if (whole && *whole) {
          auto db = derivability(Sequent{{}, b});
          auto dc = derivability(Sequent{{}, c});
          if (db && dc && (!*db || !*dc))
            fail(&GraphReport::midpoint_witnesses,
                 "unit label fails to witness the split at stage " + std::to_string(rec.stage));
        }
      }
      continue;
    }

    if (!rec.fired) continue;
    const int y = static_cast<int>(rec.slot_a);
    const Formula a = g.universe[rec.fa];
    const int nv = rec.created;
    if (rec.type == 0) {
      for (const auto& [e, info] : g.edges) {
        if (e.first != y || info.stage_added > rec.stage) continue;
        if (!g.has_edge(nv, e.second) ||
            !(g.label(nv, e.second) == mul(a, info.label)))
          fail(&GraphReport::left_extension,
               "stage " + std::to_string(rec.stage) + ": bad label on (" +
                   std::to_string(nv) + "," + std::to_string(e.second) + ")");
      }
    } else {
      for (const auto& [e, info] : g.edges) {
        if (e.second != y || info.stage_added > rec.stage) continue;
        if (!g.has_edge(e.first, nv) ||
            !(g.label(e.first, nv) == mul(info.label, a)))
          fail(&GraphReport::right_extension,
               "stage " + std::to_string(rec.stage) + ": bad label on (" +
                   std::to_string(e.first) + "," + std::to_string(nv) + ")");
      }
    }
  }

  return rep;
}

/// The graph-induced valuation: the edges whose label derives `f`.
struct GraphValuation {
  Relation rel;
  std::vector<std::pair<int, int>> indeterminate;
};

inline GraphValuation graph_valuation(const LabeledGraph& g, const Formula& f, Prover& prover) {
  GraphValuation out{Relation(g.vertex_count), {}};
  const bool with_hyps = !prover.config().hypotheses.empty();
  for (const auto& [e, info] : g.edges) {
    Sequent s{{info.label}, f};
    ProofStatus st =
        with_hyps ? prover.prove_from_hypotheses(s, HypRoute::Direct) : prover.prove(s);
    if (st.proved())
      out.rel.set(e.first, e.second);
    else if (st.outcome != Outcome::Refuted)
      out.indeterminate.push_back(e);
  }
  return out;
}

}  // namespace lambkit
