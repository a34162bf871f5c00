#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lambkit {

/// Connective tags. For divisions the stored operands follow the textual
/// form: LDiv(a, b) prints "a \ b" (a is the denominator), RDiv(b, a) prints
/// "b / a" (b is the numerator). Iterative divisions star their denominator:
/// IterLDiv(a, b) prints "a* \ b", IterRDiv(b, a) prints "b / a*".
enum class Conn : std::uint8_t {
  Var,
  Zero,
  One,
  LDiv,
  RDiv,
  Mul,
  Meet,
  Bang,
  IterLDiv,
  IterRDiv,
};

class FormulaNode;

/// Immutable formula handle with structural equality. Cheap to copy.
class Formula {
public:
  Formula() = default;

  Conn tag() const;
  const std::string& var_name() const;
  const Formula& left() const;
  const Formula& right() const;
  /// Number of atom and connective occurrences; the star of an iterative
  /// division counts as one extra connective.
  int size() const;
  std::size_t hash() const;

  bool is_atom() const;  // Var, 0 or 1

  explicit operator bool() const { return node_ != nullptr; }
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  static Formula make(Conn tag, std::string name, Formula l, Formula r);

private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

class FormulaNode {
public:
  Conn tag;
  std::string name;  // Var only
  Formula left;      // also the operand of Bang
  Formula right;
  int size = 1;
  std::size_t hash = 0;
};

namespace detail {
inline std::size_t mix_hash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace detail

inline Formula Formula::make(Conn tag, std::string name, Formula l, Formula r) {
  auto n = std::make_shared<FormulaNode>();
  n->tag = tag;
  n->name = std::move(name);
  n->left = std::move(l);
  n->right = std::move(r);
  switch (tag) {
    case Conn::Var:
    case Conn::Zero:
    case Conn::One:
      n->size = 1;
      break;
    case Conn::Bang:
      if (!n->left) throw std::invalid_argument("bang: missing operand");
      n->size = 1 + n->left.size();
      break;
    case Conn::IterLDiv:
    case Conn::IterRDiv:
      if (!n->left || !n->right) throw std::invalid_argument("division: missing operand");
      n->size = 2 + n->left.size() + n->right.size();
      break;
    default:
      if (!n->left || !n->right) throw std::invalid_argument("connective: missing operand");
      n->size = 1 + n->left.size() + n->right.size();
      break;
  }
  std::size_t h = static_cast<std::size_t>(tag) * 0x9e3779b97f4a7c15ULL + 1;
  for (char c : n->name) h = detail::mix_hash(h, static_cast<unsigned char>(c));
  if (n->left) h = detail::mix_hash(h, n->left.hash());
  if (n->right) h = detail::mix_hash(h, n->right.hash());
  n->hash = h;
  return Formula(std::move(n));
}

inline Conn Formula::tag() const { return node_->tag; }
inline const std::string& Formula::var_name() const { return node_->name; }
inline const Formula& Formula::left() const { return node_->left; }
inline const Formula& Formula::right() const { return node_->right; }
inline int Formula::size() const { return node_->size; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline bool Formula::is_atom() const {
  return node_->tag == Conn::Var || node_->tag == Conn::Zero || node_->tag == Conn::One;
}

inline bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->hash != other.node_->hash || node_->tag != other.node_->tag ||
      node_->size != other.node_->size)
    return false;
  if (node_->tag == Conn::Var) return node_->name == other.node_->name;
  if (node_->left != other.node_->left) return false;
  if (node_->tag == Conn::Bang) return true;
  return node_->right == other.node_->right;
}

// -- constructors -----------------------------------------------------------

inline Formula var(std::string name) { return Formula::make(Conn::Var, std::move(name), {}, {}); }
inline Formula zero() { return Formula::make(Conn::Zero, {}, {}, {}); }
inline Formula one() { return Formula::make(Conn::One, {}, {}, {}); }
/// a \ b
inline Formula ldiv(Formula den, Formula num) {
  return Formula::make(Conn::LDiv, {}, std::move(den), std::move(num));
}
/// b / a
inline Formula rdiv(Formula num, Formula den) {
  return Formula::make(Conn::RDiv, {}, std::move(num), std::move(den));
}
inline Formula mul(Formula a, Formula b) {
  return Formula::make(Conn::Mul, {}, std::move(a), std::move(b));
}
inline Formula meet(Formula a, Formula b) {
  return Formula::make(Conn::Meet, {}, std::move(a), std::move(b));
}
inline Formula bang(Formula a) { return Formula::make(Conn::Bang, {}, std::move(a), {}); }
/// a* \ b
inline Formula iter_ldiv(Formula den, Formula num) {
  return Formula::make(Conn::IterLDiv, {}, std::move(den), std::move(num));
}
/// b / a*
inline Formula iter_rdiv(Formula num, Formula den) {
  return Formula::make(Conn::IterRDiv, {}, std::move(num), std::move(den));
}

// -- sequents ---------------------------------------------------------------

/// An ordered antecedent (possibly empty) and a succedent.
struct Sequent {
  std::vector<Formula> antecedent;
  Formula succedent;

  bool operator==(const Sequent& other) const {
    if (!(succedent == other.succedent)) return false;
    if (antecedent.size() != other.antecedent.size()) return false;
    for (std::size_t i = 0; i < antecedent.size(); ++i)
      if (!(antecedent[i] == other.antecedent[i])) return false;
    return true;
  }
  bool operator!=(const Sequent& other) const { return !(*this == other); }

  std::size_t hash() const {
    std::size_t h = 0x51a3ac9c;
    for (const auto& f : antecedent) h = detail::mix_hash(h, f.hash());
    h = detail::mix_hash(h, succedent.hash() + antecedent.size());
    return h;
  }

  int total_size() const {
    int s = succedent.size();
    for (const auto& f : antecedent) s += f.size();
    return s;
  }
};

struct SequentHash {
  std::size_t operator()(const Sequent& s) const { return s.hash(); }
};

// -- substitution and currying ----------------------------------------------

inline Formula substitute(const Formula& f, const std::string& name, const Formula& repl) {
  switch (f.tag()) {
    case Conn::Var:
      return f.var_name() == name ? repl : f;
    case Conn::Zero:
    case Conn::One:
      return f;
    case Conn::Bang: {
      Formula in = substitute(f.left(), name, repl);
      return in == f.left() ? f : bang(in);
    }
    default: {
      Formula l = substitute(f.left(), name, repl);
      Formula r = substitute(f.right(), name, repl);
      if (l == f.left() && r == f.right()) return f;
      return Formula::make(f.tag(), {}, std::move(l), std::move(r));
    }
  }
}

inline Sequent substitute(const Sequent& s, const std::string& name, const Formula& repl) {
  Sequent out;
  out.antecedent.reserve(s.antecedent.size());
  for (const auto& f : s.antecedent) out.antecedent.push_back(substitute(f, name, repl));
  out.succedent = substitute(s.succedent, name, repl);
  return out;
}

/// A1, ..., An -> B  becomes  -> An \ (A(n-1) \ ... \ (A1 \ B)...); the
/// leftmost antecedent formula ends up innermost. Identity on empty
/// antecedents.
inline Sequent curry(const Sequent& s) {
  Formula f = s.succedent;
  for (const auto& a : s.antecedent) f = ldiv(a, f);
  return Sequent{{}, std::move(f)};
}

// -- printing ---------------------------------------------------------------

namespace detail {

// Precedence levels, loosest first: divisions, meet, product, unary.
enum : int { kDiv = 0, kMeet = 1, kMul = 2, kUnary = 3 };

inline int precedence(const Formula& f) {
  switch (f.tag()) {
    case Conn::LDiv:
    case Conn::RDiv:
    case Conn::IterLDiv:
    case Conn::IterRDiv:
      return kDiv;
    case Conn::Meet:
      return kMeet;
    case Conn::Mul:
      return kMul;
    default:
      return kUnary;
  }
}

inline void render(const Formula& f, int min_level, std::string& out) {
  const bool parens = precedence(f) < min_level;
  if (parens) out += '(';
  switch (f.tag()) {
    case Conn::Var:
      out += f.var_name();
      break;
    case Conn::Zero:
      out += '0';
      break;
    case Conn::One:
      out += '1';
      break;
    case Conn::Bang:
      out += '!';
      render(f.left(), kUnary, out);
      break;
    case Conn::Mul:
      render(f.left(), kMul, out);
      out += " . ";
      render(f.right(), kMul + 1, out);
      break;
    case Conn::Meet:
      render(f.left(), kMeet, out);
      out += " & ";
      render(f.right(), kMeet + 1, out);
      break;
    case Conn::LDiv: {
      render(f.left(), kMeet, out);
      out += " \\ ";
      // Right-associative chain: a \ b \ c, but never mixed with /.
      const Conn rt = f.right().tag();
      const bool chain = rt == Conn::LDiv || rt == Conn::IterLDiv;
      render(f.right(), chain ? kDiv : kMeet, out);
      break;
    }
    case Conn::RDiv: {
      const Conn lt = f.left().tag();
      const bool chain = lt == Conn::RDiv || lt == Conn::IterRDiv;
      render(f.left(), chain ? kDiv : kMeet, out);
      out += " / ";
      render(f.right(), kMeet, out);
      break;
    }
    case Conn::IterLDiv: {
      // The star marks the whole denominator, so anything non-atomic gets
      // parenthesized.
      render(f.left(), kUnary, out);
      out += "* \\ ";
      const Conn rt = f.right().tag();
      const bool chain = rt == Conn::LDiv || rt == Conn::IterLDiv;
      render(f.right(), chain ? kDiv : kMeet, out);
      break;
    }
    case Conn::IterRDiv: {
      const Conn lt = f.left().tag();
      const bool chain = lt == Conn::RDiv || lt == Conn::IterRDiv;
      render(f.left(), chain ? kDiv : kMeet, out);
      out += " / ";
      render(f.right(), kUnary, out);
      out += '*';
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string render_formula(const Formula& f) {
  std::string out;
  detail::render(f, detail::kDiv, out);
  return out;
}

inline std::string render_sequent(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) out += ", ";
    detail::render(s.antecedent[i], detail::kDiv, out);
  }
  if (!s.antecedent.empty()) out += ' ';
  out += "=> ";
  detail::render(s.succedent, detail::kDiv, out);
  return out;
}

}  // namespace lambkit
