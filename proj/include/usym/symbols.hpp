#pragma once

// Candidate symbols F: R -> C as immutable expression trees.
//
// Trees share structure through shared_ptr<const ...>, so copies are cheap and
// a SymbolExpr may be evaluated concurrently from several threads.

#include "usym/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace usym {

/// Highest polynomial degree stored densely; larger powers stay as Pow nodes.
inline constexpr std::size_t kMaxPolyDegree = 32;

struct SymbolNode;

class SymbolExpr {
 public:
  static SymbolExpr constant(Complex c);
  /// Dense ascending coefficients; trailing zeros are trimmed.
  static SymbolExpr polynomial(std::vector<Complex> ascending);
  static SymbolExpr variable();
  /// c * exp(i * alpha * x)
  static SymbolExpr cexp(Complex c, double alpha);
  static SymbolExpr conj(SymbolExpr inner);
  static SymbolExpr sum(SymbolExpr left, SymbolExpr right);
  static SymbolExpr prod(SymbolExpr left, SymbolExpr right);
  static SymbolExpr pow(SymbolExpr inner, unsigned n);
  /// x -> inner(alpha * x + beta)
  static SymbolExpr affine(SymbolExpr inner, double alpha, double beta);

  const SymbolNode& node() const { return *node_; }
  Complex operator()(double x) const;

  friend bool operator==(const SymbolExpr& a, const SymbolExpr& b);

 private:
  explicit SymbolExpr(std::shared_ptr<const SymbolNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const SymbolNode> node_;
};

namespace node {
struct Const { Complex c; };
struct Poly { std::vector<Complex> coeffs; };
struct CExp { Complex c; double alpha; };
struct Conj { SymbolExpr inner; };
struct Sum { SymbolExpr left, right; };
struct Prod { SymbolExpr left, right; };
struct Pow { SymbolExpr inner; unsigned n; };
struct Affine { SymbolExpr inner; double alpha, beta; };
} // namespace node

struct SymbolNode {
  std::variant<node::Const, node::Poly, node::CExp, node::Conj, node::Sum, node::Prod,
               node::Pow, node::Affine>
      v;
};

/// Syntax error in symbol text; `position` is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

Complex eval(const SymbolExpr& f, double x);
Eigen::VectorXcd eval(const SymbolExpr& f, const Eigen::VectorXd& xs);

/// Parses the infix grammar
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := base ('^' uint)?
///   base   := number | 'i' | 'x' | '(' expr ')' | 'exp' '(' expr ')' | 'conj' '(' expr ')'
/// Polynomial subexpressions fold into a single Poly; constant factors fold
/// into exponentials. The result is the canonical form that to_string prints
/// back losslessly.
SymbolExpr parse_symbol(std::string_view text);

/// Canonical text; parse_symbol(to_string(f)) == f for parser-produced trees.
std::string to_string(const SymbolExpr& f);

/// Dense ascending coefficients when `f` is a polynomial of degree at most
/// kMaxPolyDegree (Conj and Affine of polynomials included).
std::optional<std::vector<Complex>> polynomial_coefficients(const SymbolExpr& f);

/// The symbol x -> conj(f(x)) on the real line, pushed down to the leaves.
SymbolExpr conjugate(const SymbolExpr& f);

/// [conj F, F^n, |F|^(2n), c F, F(alpha x + beta)].
std::vector<SymbolExpr> closure_variants(const SymbolExpr& f, unsigned n, Complex c,
                                         double alpha, double beta);

} // namespace usym
