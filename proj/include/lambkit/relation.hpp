#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lambkit {

class RelationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Binary relation on {0..n-1} as a bit matrix, one 64-bit word per row.
/// Immutable-by-convention value type; all operations are pure.
class Relation {
public:
  Relation() = default;
  explicit Relation(int n) : n_(check_size(n)), rows_(static_cast<std::size_t>(n), 0) {}

  static Relation empty(int n) { return Relation(n); }

  static Relation identity(int n) {
    Relation r(n);
    for (int i = 0; i < n; ++i) r.rows_[i] = 1ull << i;
    return r;
  }

  static Relation full(int n) {
    Relation r(n);
    const std::uint64_t row = n == 64 ? ~0ull : (1ull << n) - 1;
    for (int i = 0; i < n; ++i) r.rows_[i] = row;
    return r;
  }

  int size() const { return n_; }

  bool get(int i, int j) const { return (rows_[i] >> j) & 1; }
  void set(int i, int j, bool v = true) {
    if (v)
      rows_[i] |= 1ull << j;
    else
      rows_[i] &= ~(1ull << j);
  }

  std::uint64_t row(int i) const { return rows_[i]; }
  std::uint64_t column(int j) const {
    std::uint64_t c = 0;
    for (int i = 0; i < n_; ++i) c |= ((rows_[i] >> j) & 1) << i;
    return c;
  }

  bool operator==(const Relation& o) const { return n_ == o.n_ && rows_ == o.rows_; }
  bool operator!=(const Relation& o) const { return !(*this == o); }
  // lexicographic on the row-major bit string; the canonical family order
  bool operator<(const Relation& o) const { return rows_ < o.rows_; }

  bool subset_of(const Relation& o) const {
    for (int i = 0; i < n_; ++i)
      if (rows_[i] & ~o.rows_[i]) return false;
    return true;
  }

  bool is_empty() const {
    for (auto w : rows_)
      if (w) return false;
    return true;
  }

  int popcount() const {
    int c = 0;
    for (auto w : rows_) c += __builtin_popcountll(w);
    return c;
  }

  bool is_transitive() const;

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (get(i, j)) out.emplace_back(i, j);
    return out;
  }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(n_);
    for (auto w : rows_) h = h * 0x100000001b3ULL ^ w;
    return h;
  }

private:
  static int check_size(int n) {
    if (n < 1 || n > 64) throw RelationError("relation size must be in 1..64");
    return n;
  }
  int n_ = 0;
  std::vector<std::uint64_t> rows_;

  friend Relation rel_union(const Relation&, const Relation&);
  friend Relation rel_meet(const Relation&, const Relation&);
  friend Relation compose(const Relation&, const Relation&);
};

namespace detail {
inline void require_same(const Relation& a, const Relation& b) {
  if (a.size() != b.size()) throw RelationError("relation dimension mismatch");
}
}  // namespace detail

inline Relation rel_union(const Relation& a, const Relation& b) {
  detail::require_same(a, b);
  Relation out = a;
  for (int i = 0; i < a.size(); ++i) out.rows_[i] |= b.rows_[i];
  return out;
}

inline Relation rel_meet(const Relation& a, const Relation& b) {
  detail::require_same(a, b);
  Relation out = a;
  for (int i = 0; i < a.size(); ++i) out.rows_[i] &= b.rows_[i];
  return out;
}

/// Relation composition: (i,k) iff some j with (i,j) in a and (j,k) in b.
inline Relation compose(const Relation& a, const Relation& b) {
  detail::require_same(a, b);
  const int n = a.size();
  Relation out(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t w = a.rows_[i];
    std::uint64_t acc = 0;
    while (w) {
      const int j = __builtin_ctzll(w);
      w &= w - 1;
      acc |= b.rows_[j];
    }
    out.rows_[i] = acc;
  }
  return out;
}

inline bool Relation::is_transitive() const {
  return compose(*this, *this).subset_of(*this);
}

/// Relativised left residual R \_U S:
///   { (y,z) in U | for all x, (x,y) in R implies (x,z) in S }.
inline Relation residual_left(const Relation& r, const Relation& s, const Relation& u) {
  detail::require_same(r, s);
  detail::require_same(r, u);
  const int n = r.size();
  std::vector<std::uint64_t> rcol(n), scol(n);
  for (int j = 0; j < n; ++j) {
    rcol[j] = r.column(j);
    scol[j] = s.column(j);
  }
  Relation out(n);
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z)
      if (u.get(y, z) && !(rcol[y] & ~scol[z])) out.set(y, z);
  return out;
}

/// Relativised right residual S /_U R:
///   { (x,y) in U | for all z, (y,z) in R implies (x,z) in S }.
inline Relation residual_right(const Relation& s, const Relation& r, const Relation& u) {
  detail::require_same(r, s);
  detail::require_same(r, u);
  const int n = r.size();
  Relation out(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (u.get(x, y) && !(r.row(y) & ~s.row(x))) out.set(x, y);
  return out;
}

/// Least reflexive-transitive superset (Kleene star).
inline Relation star(const Relation& r) {
  Relation out = rel_union(Relation::identity(r.size()), r);
  for (;;) {
    Relation next = rel_union(out, compose(out, out));
    if (next == out) return out;
    out = next;
  }
}

/// Least transitive superset (one or more steps).
inline Relation plus_closure(const Relation& r) {
  Relation out = r;
  for (;;) {
    Relation next = rel_union(out, compose(out, out));
    if (next == out) return out;
    out = next;
  }
}

inline std::string to_string(const Relation& r) {
  std::string out = "{";
  bool first = true;
  for (auto [i, j] : r.pairs()) {
    if (!first) out += ", ";
    first = false;
    out += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  out += "}";
  return out;
}

}  // namespace lambkit
