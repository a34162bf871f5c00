#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lambkit/countermodel.hpp"
#include "lambkit/rng.hpp"

namespace lambkit {

inline RModel random_square_model(Rng& rng, int n, const std::vector<std::string>& vars,
                                  bool bias = false) {
  RModel m;
  m.n = n;
  m.u = Relation::full(n);
  m.constants = RModel::Constants::Standard;
  for (const auto& v : vars)
    m.valuation[v] = detail::random_subrelation(rng, m.u, bias);
  return m;
}

inline RModel random_relativised_model(Rng& rng, int n, const std::vector<std::string>& vars,
                                       bool bias = false) {
  RModel m;
  m.n = n;
  Relation raw = detail::random_subrelation(rng, Relation::full(n), false);
  m.u = rng.chance(0.2) ? Relation::full(n) : plus_closure(raw);
  m.constants = RModel::Constants::Absent;
  for (const auto& v : vars)
    m.valuation[v] = detail::random_subrelation(rng, m.u, bias);
  return m;
}

/// Family closure of a diagonal-seeded random family. The diagonal guarantees
/// a unit; the total intersection is the zero.
inline std::optional<NSModel> random_ns_model(Rng& rng, int n,
                                              const std::vector<std::string>& vars,
                                              bool product_closed, int cap = 4096) {
  std::vector<Relation> seeds;
  seeds.push_back(Relation::identity(n));
  const int extra = rng.range(1, 3);
  for (int e = 0; e < extra; ++e)
    seeds.push_back(detail::random_subrelation(rng, Relation::full(n), true));
  CloseResult cr = close_family(seeds, FamilyOps{product_closed}, cap);
  if (cr.overflow) return std::nullopt;
  auto unit = find_unit(cr.family);
  auto zero = find_zero(cr.family);
  if (!unit || !zero) return std::nullopt;
  NSModel m;
  m.n = n;
  m.family = cr.family;
  m.unit = *unit;
  m.zero = *zero;
  m.product_closed = product_closed;
  for (const auto& v : vars) m.valuation[v] = m.family[rng.below(m.family.size())];
  return m;
}

/// Doubling construction: worlds (w, i) for i in {1, 2}; a base relation R
/// lifts to (x,i) R' (y,j) iff x R y and i <= j. The lifted diagonal is the
/// family unit and properly contains the true diagonal, so these families are
/// genuinely non-standard.
inline Relation lift_relation(const Relation& base) {
  const int bn = base.size();
  Relation out(2 * bn);
  for (int x = 0; x < bn; ++x)
    for (int y = 0; y < bn; ++y)
      if (base.get(x, y)) {
        out.set(2 * x, 2 * y);
        out.set(2 * x, 2 * y + 1);
        out.set(2 * x + 1, 2 * y + 1);
      }
  return out;
}

inline std::optional<NSModel> lifted_ns_model(Rng& rng, int base_n,
                                              const std::vector<std::string>& vars,
                                              bool product_closed, int cap = 4096) {
  std::vector<Relation> seeds;
  seeds.push_back(lift_relation(Relation::identity(base_n)));
  const int extra = rng.range(1, 2);
  for (int e = 0; e < extra; ++e)
    seeds.push_back(
        lift_relation(detail::random_subrelation(rng, Relation::full(base_n), true)));
  CloseResult cr = close_family(seeds, FamilyOps{product_closed}, cap);
  if (cr.overflow) return std::nullopt;
  auto unit = find_unit(cr.family);
  auto zero = find_zero(cr.family);
  if (!unit || !zero) return std::nullopt;
  NSModel m;
  m.n = 2 * base_n;
  m.family = cr.family;
  m.unit = *unit;
  m.zero = *zero;
  m.product_closed = product_closed;
  for (const auto& v : vars) m.valuation[v] = m.family[rng.below(m.family.size())];
  return m;
}

}  // namespace lambkit
