#include "usym/symbols.hpp"

#include <doctest.h>

#include <cmath>

using namespace usym;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol * (1 + std::abs(b)); }

} // namespace

TEST_CASE("polynomials fold and evaluate") {
  const SymbolExpr f = parse_symbol("-x^2+2i*x+1");
  auto c = polynomial_coefficients(f);
  REQUIRE(c);
  REQUIRE(c->size() == 3);
  CHECK(close((*c)[0], 1.0));
  CHECK(close((*c)[1], Complex(0, 2)));
  CHECK(close((*c)[2], -1.0));
  for (double x : {-3.0, -0.5, 0.0, 1.25, 7.0}) CHECK(close(eval(f, x), Complex(1 - x * x, 2 * x)));
}

TEST_CASE("exponentials absorb constant factors") {
  const SymbolExpr f = parse_symbol("3*exp(2i*x)");
  const auto* e = std::get_if<node::CExp>(&f.node().v);
  REQUIRE(e);
  CHECK(close(e->c, 3.0));
  CHECK(e->alpha == doctest::Approx(2.0));
  CHECK(close(eval(f, 0.3), 3.0 * std::exp(Complex(0, 0.6))));
}

TEST_CASE("exp with a constant offset") {
  const SymbolExpr f = parse_symbol("exp(i*x+1)");
  CHECK(close(eval(f, 0.7), std::exp(Complex(1, 0.7))));
}

TEST_CASE("conj of a product equals |x^3|^2") {
  const SymbolExpr f = parse_symbol("conj(x^3)*x^3");
  for (double x : {-1.5, 0.0, 0.4, 2.0}) CHECK(close(eval(f, x), std::pow(std::abs(x), 6)));
}

TEST_CASE("to_string round trips") {
  for (const char* text : {"x", "x^2+1", "-x^2+2i*x+1.99", "exp(2i*x)", "5", "conj(x^3)*x^3",
                           "(exp(i*x)+exp(-i*x))*0.5", "(x+i)^40", "exp(i*(x+1))"}) {
    CAPTURE(text);
    const SymbolExpr f = parse_symbol(text);
    const SymbolExpr g = parse_symbol(to_string(f));
    CHECK(f == g);
    for (double x : {-2.0, 0.1, 1.7}) CHECK(close(eval(f, x), eval(g, x), 1e-9));
  }
}

TEST_CASE("high powers stay symbolic") {
  const SymbolExpr f = parse_symbol("(x+1)^40");
  CHECK_FALSE(polynomial_coefficients(f));
  CHECK(close(eval(f, 0.5), std::pow(1.5, 40), 1e-12));
}

TEST_CASE("parse errors report a position") {
  struct Bad {
    const char* text;
    std::size_t pos;
  };
  for (const Bad b : {Bad{"x+(", 3}, Bad{"x**2", 2}, Bad{"y", 0}, Bad{"exp(x)", 0}, Bad{"exp(x^2)", 4},
                      Bad{"x^", 2}, Bad{"x)", 1}, Bad{"", 0}}) {
    CAPTURE(b.text);
    try {
      parse_symbol(b.text);
      FAIL("accepted");
    } catch (const ParseError& e) {
      CHECK(e.position() == b.pos);
    }
  }
}

TEST_CASE("conjugate matches pointwise conj") {
  for (const char* text : {"-x^2+2i*x+1", "3i*exp(2i*x)", "conj(x)*(x+i)", "(x+i)^3"}) {
    const SymbolExpr f = parse_symbol(text);
    const SymbolExpr g = conjugate(f);
    for (double x : {-1.0, 0.25, 3.0}) CHECK(close(eval(g, x), std::conj(eval(f, x))));
  }
}

TEST_CASE("closure variants evaluate as their definitions") {
  const SymbolExpr f = parse_symbol("x^2+i*x");
  const Complex c(2, -1);
  const auto v = closure_variants(f, 2, c, 2.0, 0.5);
  REQUIRE(v.size() == 5);
  for (double x : {-1.2, 0.0, 0.9}) {
    const Complex fx = eval(f, x);
    CHECK(close(eval(v[0], x), std::conj(fx)));
    CHECK(close(eval(v[1], x), fx * fx));
    CHECK(close(eval(v[2], x), std::pow(std::norm(fx), 2)));
    CHECK(close(eval(v[3], x), c * fx));
    CHECK(close(eval(v[4], x), eval(f, 2.0 * x + 0.5)));
  }
}

TEST_CASE("vector evaluation agrees with scalar") {
  const SymbolExpr f = parse_symbol("exp(i*x)*(x+1)");
  Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(11, -2, 2);
  const Eigen::VectorXcd ys = eval(f, xs);
  for (Eigen::Index k = 0; k < xs.size(); ++k) CHECK(close(ys(k), eval(f, xs(k))));
}
