#include "usym/symbols.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace usym {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void require_finite(Complex c, const char* what) {
  if (!finite(c)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

std::vector<Complex> trimmed(std::vector<Complex> c) {
  while (!c.empty() && c.back() == Complex(0)) c.pop_back();
  return c;
}

Complex horner(const std::vector<Complex>& c, Complex x) {
  Complex acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex ipow(Complex base, unsigned n) {
  Complex acc(1);
  for (unsigned k = 0; k < n; ++k) acc *= base;
  return acc;
}

// ---- dense polynomial arithmetic ----------------------------------------

using Coeffs = std::vector<Complex>;

Coeffs poly_add(const Coeffs& a, const Coeffs& b) {
  Coeffs out(std::max(a.size(), b.size()), Complex(0));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return trimmed(std::move(out));
}

std::optional<Coeffs> poly_mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return Coeffs{};
  if (a.size() + b.size() - 2 > kMaxPolyDegree) return std::nullopt;
  // Constant factors scale coefficient-wise, which keeps printing exact.
  if (a.size() == 1 || b.size() == 1) {
    const Complex s = a.size() == 1 ? a[0] : b[0];
    const Coeffs& p = a.size() == 1 ? b : a;
    Coeffs out(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) out[k] = s * p[k];
    return trimmed(std::move(out));
  }
  Coeffs out(a.size() + b.size() - 1, Complex(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return trimmed(std::move(out));
}

std::optional<Coeffs> poly_pow(const Coeffs& a, unsigned n) {
  Coeffs acc{Complex(1)};
  for (unsigned k = 0; k < n; ++k) {
    auto next = poly_mul(acc, a);
    if (!next) return std::nullopt;
    acc = std::move(*next);
  }
  return acc;
}

// p(alpha x + beta)
std::optional<Coeffs> poly_compose_affine(const Coeffs& p, double alpha, double beta) {
  const Coeffs lin = trimmed({Complex(beta), Complex(alpha)});
  Coeffs acc;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    auto prod = poly_mul(acc, lin);
    if (!prod) return std::nullopt;
    acc = poly_add(*prod, Coeffs{*it});
  }
  return acc;
}

// ---- canonical folding used by the parser ---------------------------------

std::optional<Coeffs> poly_like(const SymbolExpr& e) {
  if (auto* c = std::get_if<node::Const>(&e.node().v)) return trimmed({c->c});
  if (auto* p = std::get_if<node::Poly>(&e.node().v)) return p->coeffs;
  return std::nullopt;
}

SymbolExpr from_coeffs(Coeffs c) {
  c = trimmed(std::move(c));
  if (c.size() <= 1) return SymbolExpr::constant(c.empty() ? Complex(0) : c[0]);
  return SymbolExpr::polynomial(std::move(c));
}

SymbolExpr fold_add(const SymbolExpr& a, const SymbolExpr& b) {
  auto pa = poly_like(a);
  auto pb = poly_like(b);
  if (pa && pb) return from_coeffs(poly_add(*pa, *pb));
  return SymbolExpr::sum(a, b);
}

SymbolExpr fold_mul(const SymbolExpr& a, const SymbolExpr& b) {
  auto pa = poly_like(a);
  auto pb = poly_like(b);
  if (pa && pb) {
    if (auto prod = poly_mul(*pa, *pb)) return from_coeffs(std::move(*prod));
    return SymbolExpr::prod(a, b);
  }
  const auto* ea = std::get_if<node::CExp>(&a.node().v);
  const auto* eb = std::get_if<node::CExp>(&b.node().v);
  const auto* ca = std::get_if<node::Const>(&a.node().v);
  const auto* cb = std::get_if<node::Const>(&b.node().v);
  if (ca && eb) return SymbolExpr::cexp(ca->c * eb->c, eb->alpha);
  if (ea && cb) return SymbolExpr::cexp(ea->c * cb->c, ea->alpha);
  if (ea && eb) return SymbolExpr::cexp(ea->c * eb->c, ea->alpha + eb->alpha);
  return SymbolExpr::prod(a, b);
}

SymbolExpr fold_neg(const SymbolExpr& a) { return fold_mul(SymbolExpr::constant(-1.0), a); }

SymbolExpr fold_pow(const SymbolExpr& a, unsigned n) {
  if (n == 0) return SymbolExpr::constant(1.0);
  if (n == 1) return a;
  if (auto p = poly_like(a)) {
    if (auto pw = poly_pow(*p, n)) return from_coeffs(std::move(*pw));
    return SymbolExpr::pow(a, n);
  }
  if (const auto* e = std::get_if<node::CExp>(&a.node().v))
    return SymbolExpr::cexp(ipow(e->c, n), e->alpha * n);
  return SymbolExpr::pow(a, n);
}

// ---- parser ----------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  SymbolExpr parse() {
    SymbolExpr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  SymbolExpr expr() {
    SymbolExpr acc = accept('-') ? fold_neg(term()) : (accept('+'), term());
    for (;;) {
      if (accept('+'))
        acc = fold_add(acc, term());
      else if (accept('-'))
        acc = fold_add(acc, fold_neg(term()));
      else
        return acc;
    }
  }

  SymbolExpr term() {
    SymbolExpr acc = factor();
    while (accept('*')) acc = fold_mul(acc, factor());
    return acc;
  }

  SymbolExpr factor() {
    SymbolExpr b = base();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      unsigned n = 0;
      auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), n);
      if (ec != std::errc() || ptr == s_.data() + start) fail("expected unsigned integer exponent");
      pos_ = static_cast<std::size_t>(ptr - s_.data());
      if (n > 4096) {
        pos_ = start;
        fail("exponent too large");
      }
      return fold_pow(b, n);
    }
    return b;
  }

  SymbolExpr base() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      SymbolExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view word = s_.substr(start, pos_ - start);
      if (word == "x") return SymbolExpr::variable();
      if (word == "i") return SymbolExpr::constant(Complex(0, 1));
      if (word == "exp") return exponential(start);
      if (word == "conj") {
        expect('(');
        SymbolExpr inner = expr();
        expect(')');
        return SymbolExpr::conj(std::move(inner));
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  SymbolExpr exponential(std::size_t start) {
    expect('(');
    const std::size_t arg_pos = pos_;
    SymbolExpr arg = expr();
    expect(')');
    auto coeffs = poly_like(arg);
    if (!coeffs || coeffs->size() > 2) {
      pos_ = arg_pos;
      fail("exp() argument must be affine in x");
    }
    coeffs->resize(2, Complex(0));
    const Complex a0 = (*coeffs)[0];
    const Complex a1 = (*coeffs)[1];
    if (a1.real() != 0.0) {
      pos_ = start;
      fail("non-real frequency in exp(): the coefficient of x must be purely imaginary");
    }
    const Complex c = a0 == Complex(0) ? Complex(1) : std::exp(a0);
    if (a1 == Complex(0)) return SymbolExpr::constant(c);
    return SymbolExpr::cexp(c, a1.imag());
  }

  SymbolExpr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        pos_ = p;
      }
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    if (!std::isfinite(value)) {
      pos_ = start;
      fail("number out of range");
    }
    // Imaginary suffix: 'i' not followed by further letters.
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return SymbolExpr::constant(Complex(0, value));
    }
    return SymbolExpr::constant(value);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// ---- printer ---------------------------------------------------------------

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// Parenthesised complex literal that re-parses to the identical value.
std::string format_complex(Complex c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) return "(" + format_real(re) + ")";
  if (re == 0.0) return "(" + format_real(im) + "i)";
  const std::string sign = std::signbit(im) ? "-" : "+";
  return "(" + format_real(re) + sign + format_real(std::abs(im)) + "i)";
}

std::string print(const SymbolExpr& f, const std::string& var) {
  return std::visit(
      overloaded{
          [&](const node::Const& n) { return format_complex(n.c); },
          [&](const node::Poly& n) {
            std::string out;
            for (std::size_t k = 0; k < n.coeffs.size(); ++k) {
              if (n.coeffs[k] == Complex(0)) continue;
              if (!out.empty()) out += "+";
              out += format_complex(n.coeffs[k]);
              if (k >= 1) out += "*(" + var + ")";
              if (k >= 2) out += "^" + std::to_string(k);
            }
            return "(" + (out.empty() ? std::string("(0)") : out) + ")";
          },
          [&](const node::CExp& n) {
            return "(" + format_complex(n.c) + "*exp((" + format_real(n.alpha) + "i)*(" + var +
                   ")))";
          },
          [&](const node::Conj& n) { return "conj(" + print(n.inner, var) + ")"; },
          [&](const node::Sum& n) {
            return "(" + print(n.left, var) + "+" + print(n.right, var) + ")";
          },
          [&](const node::Prod& n) {
            return "(" + print(n.left, var) + "*" + print(n.right, var) + ")";
          },
          [&](const node::Pow& n) {
            return "(" + print(n.inner, var) + "^" + std::to_string(n.n) + ")";
          },
          [&](const node::Affine& n) {
            const std::string sub =
                "(" + format_complex(n.alpha) + "*(" + var + ")+" + format_complex(n.beta) + ")";
            return print(n.inner, sub);
          },
      },
      f.node().v);
}

bool nodes_equal(const SymbolNode& a, const SymbolNode& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      overloaded{
          [&](const node::Const& n) { return n.c == std::get<node::Const>(b.v).c; },
          [&](const node::Poly& n) { return n.coeffs == std::get<node::Poly>(b.v).coeffs; },
          [&](const node::CExp& n) {
            const auto& o = std::get<node::CExp>(b.v);
            return n.c == o.c && n.alpha == o.alpha;
          },
          [&](const node::Conj& n) { return n.inner == std::get<node::Conj>(b.v).inner; },
          [&](const node::Sum& n) {
            const auto& o = std::get<node::Sum>(b.v);
            return n.left == o.left && n.right == o.right;
          },
          [&](const node::Prod& n) {
            const auto& o = std::get<node::Prod>(b.v);
            return n.left == o.left && n.right == o.right;
          },
          [&](const node::Pow& n) {
            const auto& o = std::get<node::Pow>(b.v);
            return n.n == o.n && n.inner == o.inner;
          },
          [&](const node::Affine& n) {
            const auto& o = std::get<node::Affine>(b.v);
            return n.alpha == o.alpha && n.beta == o.beta && n.inner == o.inner;
          },
      },
      a.v);
}

} // namespace

// ---- SymbolExpr ------------------------------------------------------------

SymbolExpr SymbolExpr::constant(Complex c) {
  require_finite(c, "Const");
  return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{node::Const{c}}));
}

SymbolExpr SymbolExpr::polynomial(std::vector<Complex> ascending) {
  for (Complex c : ascending) require_finite(c, "Poly");
  ascending = trimmed(std::move(ascending));
  if (ascending.empty()) ascending.push_back(Complex(0));
  if (ascending.size() - 1 > kMaxPolyDegree)
    throw std::invalid_argument("Poly: degree exceeds " + std::to_string(kMaxPolyDegree));
  return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{node::Poly{std::move(ascending)}}));
}

SymbolExpr SymbolExpr::variable() { return polynomial({Complex(0), Complex(1)}); }

SymbolExpr SymbolExpr::cexp(Complex c, double alpha) {
  require_finite(c, "CExp");
  require_finite(alpha, "CExp frequency");
  return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{node::CExp{c, alpha}}));
}

SymbolExpr SymbolExpr::conj(SymbolExpr inner) {
  return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{node::Conj{std::move(inner)}}));
}

SymbolExpr SymbolExpr::sum(SymbolExpr left, SymbolExpr right) {
  return SymbolExpr(
      std::make_shared<const SymbolNode>(SymbolNode{node::Sum{std::move(left), std::move(right)}}));
}

SymbolExpr SymbolExpr::prod(SymbolExpr left, SymbolExpr right) {
  return SymbolExpr(std::make_shared<const SymbolNode>(
      SymbolNode{node::Prod{std::move(left), std::move(right)}}));
}

SymbolExpr SymbolExpr::pow(SymbolExpr inner, unsigned n) {
  return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{node::Pow{std::move(inner), n}}));
}

SymbolExpr SymbolExpr::affine(SymbolExpr inner, double alpha, double beta) {
  require_finite(alpha, "Affine alpha");
  require_finite(beta, "Affine beta");
  return SymbolExpr(
      std::make_shared<const SymbolNode>(SymbolNode{node::Affine{std::move(inner), alpha, beta}}));
}

Complex SymbolExpr::operator()(double x) const { return eval(*this, x); }

bool operator==(const SymbolExpr& a, const SymbolExpr& b) {
  return a.node_ == b.node_ || nodes_equal(*a.node_, *b.node_);
}

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what), position_(position) {}

// ---- evaluation ------------------------------------------------------------

Complex eval(const SymbolExpr& f, double x) {
  return std::visit(
      overloaded{
          [&](const node::Const& n) { return n.c; },
          [&](const node::Poly& n) { return horner(n.coeffs, Complex(x)); },
          [&](const node::CExp& n) { return n.c * std::polar(1.0, n.alpha * x); },
          [&](const node::Conj& n) { return std::conj(eval(n.inner, x)); },
          [&](const node::Sum& n) { return eval(n.left, x) + eval(n.right, x); },
          [&](const node::Prod& n) { return eval(n.left, x) * eval(n.right, x); },
          [&](const node::Pow& n) { return ipow(eval(n.inner, x), n.n); },
          [&](const node::Affine& n) { return eval(n.inner, n.alpha * x + n.beta); },
      },
      f.node().v);
}

Eigen::VectorXcd eval(const SymbolExpr& f, const Eigen::VectorXd& xs) {
  Eigen::VectorXcd out(xs.size());
  for (Eigen::Index k = 0; k < xs.size(); ++k) out(k) = eval(f, xs(k));
  return out;
}

SymbolExpr parse_symbol(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const SymbolExpr& f) { return print(f, "x"); }

std::optional<std::vector<Complex>> polynomial_coefficients(const SymbolExpr& f) {
  return std::visit(
      overloaded{
          [&](const node::Const& n) -> std::optional<Coeffs> { return trimmed({n.c}); },
          [&](const node::Poly& n) -> std::optional<Coeffs> { return n.coeffs; },
          [&](const node::CExp& n) -> std::optional<Coeffs> {
            if (n.alpha == 0.0) return trimmed({n.c});
            return std::nullopt;
          },
          [&](const node::Conj& n) -> std::optional<Coeffs> {
            auto p = polynomial_coefficients(n.inner);
            if (p)
              for (auto& c : *p) c = std::conj(c);
            return p;
          },
          [&](const node::Sum& n) -> std::optional<Coeffs> {
            auto l = polynomial_coefficients(n.left);
            auto r = polynomial_coefficients(n.right);
            if (!l || !r) return std::nullopt;
            return poly_add(*l, *r);
          },
          [&](const node::Prod& n) -> std::optional<Coeffs> {
            auto l = polynomial_coefficients(n.left);
            auto r = polynomial_coefficients(n.right);
            if (!l || !r) return std::nullopt;
            return poly_mul(*l, *r);
          },
          [&](const node::Pow& n) -> std::optional<Coeffs> {
            auto p = polynomial_coefficients(n.inner);
            if (!p) return std::nullopt;
            return poly_pow(*p, n.n);
          },
          [&](const node::Affine& n) -> std::optional<Coeffs> {
            auto p = polynomial_coefficients(n.inner);
            if (!p) return std::nullopt;
            return poly_compose_affine(*p, n.alpha, n.beta);
          },
      },
      f.node().v);
}

SymbolExpr conjugate(const SymbolExpr& f) {
  return std::visit(
      overloaded{
          [&](const node::Const& n) { return SymbolExpr::constant(std::conj(n.c)); },
          [&](const node::Poly& n) {
            Coeffs c = n.coeffs;
            for (auto& v : c) v = std::conj(v);
            return SymbolExpr::polynomial(std::move(c));
          },
          [&](const node::CExp& n) { return SymbolExpr::cexp(std::conj(n.c), -n.alpha); },
          [&](const node::Conj& n) { return n.inner; },
          [&](const node::Sum& n) { return SymbolExpr::sum(conjugate(n.left), conjugate(n.right)); },
          [&](const node::Prod& n) {
            return SymbolExpr::prod(conjugate(n.left), conjugate(n.right));
          },
          [&](const node::Pow& n) { return SymbolExpr::pow(conjugate(n.inner), n.n); },
          [&](const node::Affine& n) {
            return SymbolExpr::affine(conjugate(n.inner), n.alpha, n.beta);
          },
      },
      f.node().v);
}

std::vector<SymbolExpr> closure_variants(const SymbolExpr& f, unsigned n, Complex c,
                                         double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("closure_variants: n must be >= 1");
  return {
      SymbolExpr::conj(f),
      SymbolExpr::pow(f, n),
      SymbolExpr::pow(SymbolExpr::prod(f, SymbolExpr::conj(f)), n),
      SymbolExpr::prod(SymbolExpr::constant(c), f),
      SymbolExpr::affine(f, alpha, beta),
  };
}

} // namespace usym
