#include "usym/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace usym {

Measure::Measure(std::vector<Atom> atoms) {
  for (const auto& a : atoms)
    if (!std::isfinite(a.t) || !std::isfinite(a.w.real()) || !std::isfinite(a.w.imag()))
      throw std::invalid_argument("measure: non-finite atom");
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& l, const Atom& r) { return l.t < r.t; });
  for (const auto& a : atoms) {
    if (!atoms_.empty() && a.t - atoms_.back().t <= 1e-12) atoms_.back().w += a.w;
    else atoms_.push_back(a);
  }
  for (const auto& a : atoms_) tv_ += std::abs(a.w);
}

Measure Measure::dirac(double t, Complex w) { return Measure({{t, w}}); }

Complex Measure::transform(double x) const {
  Complex s = 0;
  for (const auto& a : atoms_) s += a.w * std::polar(1.0, a.t * x);
  return s;
}

Measure Measure::shifted(double s) const {
  std::vector<Atom> out = atoms_;
  for (auto& a : out) a.w *= std::polar(1.0, a.t * s);
  return Measure(std::move(out));
}

Measure Measure::scaled(Complex c) const {
  std::vector<Atom> out = atoms_;
  for (auto& a : out) a.w *= c;
  return Measure(std::move(out));
}

Measure operator+(const Measure& a, const Measure& b) {
  std::vector<Atom> all = a.atoms_;
  all.insert(all.end(), b.atoms_.begin(), b.atoms_.end());
  return Measure(std::move(all));
}

Measure convolve(const Measure& a, const Measure& b) {
  std::vector<Atom> all;
  all.reserve(a.atoms().size() * b.atoms().size());
  for (const auto& x : a.atoms())
    for (const auto& y : b.atoms()) all.push_back({x.t + y.t, x.w * y.w});
  return Measure(std::move(all));
}

Measure linear_symbol_measure(double L, int K) {
  if (!(L > 0)) throw std::invalid_argument("linear_symbol_measure: L must be positive");
  if (K < 1 || K % 2 == 0) throw std::invalid_argument("linear_symbol_measure: K must be odd and >= 1");
  const double pi = std::numbers::pi;
  std::vector<Atom> atoms;
  for (int k = 1; k <= K; k += 2) {
    const double w = 4.0 / (pi * pi * double(k) * k);
    const double t = k * pi / (2 * L);
    atoms.push_back({-t, w});
    atoms.push_back({t, w});
  }
  return Measure(std::move(atoms));
}

double triangle_tail(int K) {
  // sum over odd k > K of 1/k^2, summed far out plus an integral remainder.
  const double pi = std::numbers::pi;
  double s = 0;
  const int stop = K + 2000001;
  for (int k = K + 2; k < stop; k += 2) s += 1.0 / (double(k) * k);
  s += 1.0 / (2.0 * stop);
  return 8.0 / (pi * pi) * s;
}

AlgebraElement bochner_apply(const Measure& mu, const AlgebraElement& a) {
  switch (a.kind) {
    case AlgebraElement::Kind::diag_lp:
    case AlgebraElement::Kind::multiplier: {
      AlgebraElement out = a;
      out.values.setZero();
      for (const auto& atom : mu.atoms())
        for (Eigen::Index k = 0; k < a.values.size(); ++k)
          out.values(k) += atom.w * std::exp(Complex(0, atom.t) * a.values(k).real());
      return out;
    }
    case AlgebraElement::Kind::self_adjoint_l2:
    case AlgebraElement::Kind::general: {
      Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(a.matrix.rows(), a.matrix.cols());
      for (const auto& atom : mu.atoms()) sum += atom.w * linalg::matrix_exp(a.matrix, atom.t);
      return AlgebraElement::general(sum, a.norm);
    }
  }
  throw std::logic_error("bochner_apply: unknown kind");
}

AlgebraElement holomorphic_apply(const SymbolExpr& f, const AlgebraElement& a) {
  const auto coeffs = polynomial_coefficients(f);
  if (!coeffs) throw std::invalid_argument("holomorphic_apply: symbol is not a polynomial");
  const std::vector<Complex>& c = *coeffs;
  switch (a.kind) {
    case AlgebraElement::Kind::diag_lp:
    case AlgebraElement::Kind::multiplier: {
      AlgebraElement out = a;
      for (Eigen::Index k = 0; k < a.values.size(); ++k) {
        const double x = a.values(k).real();
        Complex r = 0;
        for (std::size_t j = c.size(); j-- > 0;) r = r * x + c[j];
        out.values(k) = r;
      }
      return out;
    }
    case AlgebraElement::Kind::self_adjoint_l2:
    case AlgebraElement::Kind::general: {
      const Eigen::Index n = a.matrix.rows();
      Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
      for (std::size_t j = c.size(); j-- > 0;) {
        r = r * a.matrix;
        r.diagonal().array() += c[j];
      }
      return AlgebraElement::general(r, a.norm);
    }
  }
  throw std::logic_error("holomorphic_apply: unknown kind");
}

double norm_bound_check(const Measure& mu, const AlgebraElement& a) {
  return mu.tv() - op_norm(bochner_apply(mu, a)).upper;
}

double spectral_mapping_check(const SymbolExpr& f, const AlgebraElement& a) {
  if (a.kind != AlgebraElement::Kind::diag_lp && a.kind != AlgebraElement::Kind::multiplier)
    throw std::invalid_argument("spectral_mapping_check: needs a diagonal or multiplier element");
  const AlgebraElement fa = apply_symbol(f, a);
  std::vector<Complex> lhs(fa.values.data(), fa.values.data() + fa.values.size());
  std::vector<Complex> rhs;
  for (Eigen::Index k = 0; k < a.values.size(); ++k) rhs.push_back(eval(f, a.values(k).real()));
  auto directed = [](const std::vector<Complex>& p, const std::vector<Complex>& q) {
    double worst = 0;
    for (const auto& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : q) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(lhs, rhs), directed(rhs, lhs));
}

AlgebraElement linear_route(const Measure& mu, double L, const AlgebraElement& a) {
  AlgebraElement out = bochner_apply(mu.shifted(L), a);
  if (out.kind == AlgebraElement::Kind::general) out.matrix *= -L;
  else out.values *= -L;
  return out;
}

AlgebraElement quadratic_route(const Measure& mu, double L, const AlgebraElement& a) {
  AlgebraElement out = bochner_apply(convolve(mu, mu).shifted(L), a);
  if (out.kind == AlgebraElement::Kind::general) out.matrix *= L * L;
  else out.values *= L * L;
  return out;
}

std::vector<CalculusRow> calculus_experiment(int dim, double L, int K, std::uint64_t seed,
                                             int count, bool quadratic) {
  const Measure mu = linear_symbol_measure(L, K);
  const Measure shifted = mu.shifted(L);
  const double pi = std::numbers::pi;
  const double tail = triangle_tail(K);
  const SymbolExpr x = SymbolExpr::variable();
  const SymbolExpr x2 = SymbolExpr::polynomial({0.0, 0.0, 1.0});

  std::vector<CalculusRow> rows;
  for (int r = 0; r < count; ++r) {
    CalculusRow row;
    row.seed = seed + static_cast<std::uint64_t>(r);
    const AlgebraElement a = AlgebraElement::self_adjoint(random_self_adjoint(dim, L, row.seed));
    const Eigen::MatrixXcd holo = holomorphic_apply(x, a).matrix;
    const Eigen::MatrixXcd boch = linear_route(mu, L, a).matrix;
    row.route_gap = linalg::largest_singular_value(Eigen::MatrixXcd(holo - boch)).value;
    row.route_bound = L * 8.0 / (pi * pi * K);
    row.slack = norm_bound_check(shifted, a);
    if (quadratic) {
      const Eigen::MatrixXcd h2 = holomorphic_apply(x2, a).matrix;
      const Eigen::MatrixXcd b2 = quadratic_route(mu, L, a).matrix;
      row.quadratic_gap = linalg::largest_singular_value(Eigen::MatrixXcd(h2 - b2)).value;
      row.quadratic_bound = 2 * L * L * tail;
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace usym
