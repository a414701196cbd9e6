#include "usym/algebras.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace usym {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTwoPi = 2 * std::numbers::pi;

double l2_norm_value(const Eigen::MatrixXcd& m, bool& converged) {
  const auto p = linalg::largest_singular_value(m);
  converged = p.converged;
  return p.value;
}

NormValue exact(double v) {
  NormValue out;
  out.lower = out.upper = v;
  out.exact = true;
  return out;
}

NormValue matrix_norm(const Eigen::MatrixXcd& m, NormTag tag) {
  switch (tag) {
    case NormTag::op_l1: return exact(linalg::op_norm_l1(m));
    case NormTag::op_linf: return exact(linalg::op_norm_linf(m));
    case NormTag::op_l2: {
      bool ok = false;
      const double v = l2_norm_value(m, ok);
      if (ok) return exact(v);
      NormValue out;
      out.lower = v;
      out.upper = std::max(v, std::sqrt(linalg::op_norm_l1(m) * linalg::op_norm_linf(m)));
      out.inconclusive = true;
      return out;
    }
    case NormTag::trig_sup: break;
  }
  throw std::invalid_argument("trig_sup norm applies to multipliers only");
}

// Uniform grid for trigonometric polynomials of degree n, stored as e^{i x_j}.
std::vector<Complex> unit_grid(int m) {
  std::vector<Complex> z(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) z[static_cast<std::size_t>(j)] = std::polar(1.0, kTwoPi * j / m);
  return z;
}

// max_j |sum_{k=-N..N} a_k e^{ik x_j}|, by Horner in z = e^{ix} (the factor
// e^{-iNx} has modulus one).
double grid_sup(const Eigen::VectorXcd& a, const std::vector<Complex>& z) {
  const Eigen::Index top = a.size() - 1;
  double best = 0;
  for (const Complex& zj : z) {
    Complex s = a(top);
    for (Eigen::Index k = top - 1; k >= 0; --k) s = s * zj + a(k);
    best = std::max(best, std::abs(s));
  }
  return best;
}

int grid_points(int n, int factor) { return std::max(256, factor * n); }

} // namespace

std::string to_string(NormKind k) {
  switch (k.tag) {
    case NormTag::op_l1: return "op_l1";
    case NormTag::op_l2: return "op_l2";
    case NormTag::op_linf: return "op_linf";
    case NormTag::trig_sup: return "trig_sup(" + std::to_string(k.degree) + ")";
  }
  return "?";
}

AlgebraElement AlgebraElement::diag_lp(int p, const Eigen::VectorXcd& diag) {
  AlgebraElement a;
  a.kind = Kind::diag_lp;
  switch (p) {
    case 1: a.norm.tag = NormTag::op_l1; break;
    case 2: a.norm.tag = NormTag::op_l2; break;
    case 0: a.norm.tag = NormTag::op_linf; break;
    default: throw std::invalid_argument("diag_lp: p must be 1, 2 or 0 (infinity)");
  }
  if (diag.size() == 0) throw std::invalid_argument("diag_lp: empty diagonal");
  if (!diag.allFinite()) throw std::invalid_argument("diag_lp: non-finite entry");
  a.values = diag;
  return a;
}

AlgebraElement AlgebraElement::self_adjoint(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("self_adjoint: need a nonempty square matrix");
  if (!m.allFinite()) throw std::invalid_argument("self_adjoint: non-finite entry");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("self_adjoint: matrix is not Hermitian within 1e-12");
  AlgebraElement a;
  a.kind = Kind::self_adjoint_l2;
  a.norm.tag = NormTag::op_l2;
  a.matrix = m;
  return a;
}

AlgebraElement AlgebraElement::multiplier(const Eigen::VectorXcd& m) {
  if (m.size() < 3 || m.size() % 2 == 0)
    throw std::invalid_argument("multiplier: need 2N + 1 values with N >= 1");
  if (!m.allFinite()) throw std::invalid_argument("multiplier: non-finite value");
  AlgebraElement a;
  a.kind = Kind::multiplier;
  a.values = m;
  a.norm = {NormTag::trig_sup, static_cast<int>(m.size() - 1) / 2};
  return a;
}

AlgebraElement AlgebraElement::general(const Eigen::MatrixXcd& m, NormKind norm) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("general: need a nonempty square matrix");
  if (norm.tag == NormTag::trig_sup) throw std::invalid_argument("general: trig_sup not allowed");
  AlgebraElement a;
  a.kind = Kind::general;
  a.norm = norm;
  a.matrix = m;
  return a;
}

AlgebraElement AlgebraElement::generator(int n, double s) {
  if (n < 1) throw std::invalid_argument("generator: N must be >= 1");
  Eigen::VectorXcd m(2 * n + 1);
  for (int k = -n; k <= n; ++k) m(k + n) = s * k;
  return multiplier(m);
}

int AlgebraElement::dim() const {
  return (kind == Kind::diag_lp || kind == Kind::multiplier) ? static_cast<int>(values.size())
                                                             : static_cast<int>(matrix.rows());
}

Eigen::MatrixXcd AlgebraElement::dense() const {
  if (kind == Kind::diag_lp || kind == Kind::multiplier) return values.asDiagonal();
  return matrix;
}

NormValue trig_sup_lower(const Eigen::VectorXcd& m, const TrigSupOptions& trig) {
  const int n = static_cast<int>(m.size() - 1) / 2;
  const int points = grid_points(n, trig.grid_factor);
  const auto z = unit_grid(points);
  // Grid sups of degree-n polynomials undershoot the true sup by at most this
  // factor: near its maximum, Re(e^{-i theta} f) stays above ||f|| cos(n (x - x*)).
  const double rigor = std::cos(std::numbers::pi * n / points);

  NormValue out;
  auto consider = [&](double ratio, const std::string& name) {
    if (ratio > out.lower) {
      out.lower = ratio;
      out.witness = name;
    }
  };

  // Monomials: |m_k| exactly.
  for (int k = -n; k <= n; ++k) consider(std::abs(m(k + n)), "exp(" + std::to_string(k) + "ix)");

  // cos(Nx) and sin(Nx) have sup exactly 1.
  {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(m.size());
    a(0) = 0.5;
    a(2 * n) = 0.5;
    consider(grid_sup(m.cwiseProduct(a), z), "cos(Nx)");
    a(0) = Complex(0, 0.5);
    a(2 * n) = Complex(0, -0.5);
    consider(grid_sup(m.cwiseProduct(a), z), "sin(Nx)");
  }

  auto general = [&](const Eigen::VectorXcd& a, const std::string& name) {
    const double den = grid_sup(a, z);
    if (den == 0 || rigor == 0) return;
    consider(grid_sup(m.cwiseProduct(a), z) * rigor / den, name);
  };

  std::mt19937_64 rng(trig.seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  for (int r = 0; r < trig.random_tests; ++r) {
    Eigen::VectorXcd a(m.size());
    for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = std::polar(1.0, phase(rng));
    general(a, "random#" + std::to_string(r));
  }

  // Unimodular sign pattern of the kernel K(x) = sum m_k e^{ikx}, reflected,
  // projected to degree n with plain, Fejer and de la Vallee Poussin weights.
  std::vector<Complex> g(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    const Complex zr = std::conj(z[static_cast<std::size_t>(j)]); // e^{-i x_j}
    Complex s = m(2 * n);
    for (int k = 2 * n - 1; k >= 0; --k) s = s * zr + m(k);
    s *= std::pow(z[static_cast<std::size_t>(j)], n);
    const double mod = std::abs(s);
    g[static_cast<std::size_t>(j)] = mod > 0 ? std::conj(s) / mod : Complex(1);
  }
  Eigen::VectorXcd ghat(m.size());
  for (int k = -n; k <= n; ++k) {
    Complex acc = 0;
    for (int j = 0; j < points; ++j)
      acc += g[static_cast<std::size_t>(j)] *
             z[static_cast<std::size_t>(((-static_cast<long long>(k) * j) % points + points) % points)];
    ghat(k + n) = acc / double(points);
  }
  const int half = std::max(1, n / 2);
  for (int variant = 0; variant < 3; ++variant) {
    Eigen::VectorXcd a(m.size());
    for (int k = -n; k <= n; ++k) {
      const int ak = std::abs(k);
      double w = 1;
      if (variant == 1) w = 1 - double(ak) / (n + 1);
      if (variant == 2) w = ak <= half ? 1.0 : double(n + 1 - ak) / (n + 1 - half);
      a(k + n) = w * ghat(k + n);
    }
    static const char* names[] = {"kernel-sign", "kernel-sign-fejer", "kernel-sign-vp"};
    general(a, names[variant]);
  }
  out.upper = out.lower;
  return out;
}

double trig_sup_ratio(const Eigen::VectorXcd& m, const Eigen::VectorXcd& a, bool unit_sup,
                      int grid_factor) {
  if (a.size() != m.size()) throw std::invalid_argument("trig_sup_ratio: size mismatch");
  const int n = static_cast<int>(m.size() - 1) / 2;
  const int points = grid_points(n, grid_factor);
  const auto z = unit_grid(points);
  const double num = grid_sup(m.cwiseProduct(a), z);
  if (unit_sup) return num;
  const double den = grid_sup(a, z) / std::cos(std::numbers::pi * n / points);
  return den > 0 ? num / den : 0.0;
}

double trig_sup_upper(const Eigen::VectorXcd& m, int grid_factor) {
  const int n = static_cast<int>(m.size() - 1) / 2;
  Eigen::VectorXcd taper(4 * n + 1);
  for (int k = -2 * n; k <= 2 * n; ++k) {
    const int ak = std::abs(k);
    Complex v;
    if (ak <= n) v = m(k + n);
    else v = m(k > 0 ? 2 * n : 0) * (double(2 * n - ak) / n);
    taper(k + 2 * n) = v;
  }
  const int points = 2 * grid_points(n, grid_factor);
  const auto z = unit_grid(points);
  double l1 = 0;
  for (const Complex& zj : z) {
    Complex s = taper(4 * n);
    for (int k = 4 * n - 1; k >= 0; --k) s = s * zj + taper(k);
    l1 += std::abs(s);
  }
  return l1 / points;
}

NormValue op_norm(const AlgebraElement& a, const TrigSupOptions& trig) {
  switch (a.kind) {
    case AlgebraElement::Kind::diag_lp: return exact(a.values.cwiseAbs().maxCoeff());
    case AlgebraElement::Kind::multiplier: {
      NormValue out = trig_sup_lower(a.values, trig);
      out.upper = std::max(out.lower, trig_sup_upper(a.values, trig.grid_factor));
      return out;
    }
    case AlgebraElement::Kind::self_adjoint_l2:
    case AlgebraElement::Kind::general: return matrix_norm(a.matrix, a.norm.tag);
  }
  throw std::logic_error("op_norm: unknown kind");
}

SpectralRadius spectral_radius(const AlgebraElement& a) {
  SpectralRadius out;
  switch (a.kind) {
    case AlgebraElement::Kind::diag_lp:
    case AlgebraElement::Kind::multiplier:
      out.value = out.gelfand = a.values.cwiseAbs().maxCoeff();
      return out;
    case AlgebraElement::Kind::self_adjoint_l2: {
      const auto eig = linalg::jacobi_eigen(a.matrix);
      const auto& v = eig.values;
      out.value = out.gelfand = std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
      out.inconclusive = !eig.converged;
      return out;
    }
    case AlgebraElement::Kind::general: break;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.matrix, false);
  if (es.info() != Eigen::Success) {
    out.inconclusive = true;
    return out;
  }
  out.value = es.eigenvalues().cwiseAbs().maxCoeff();
  const NormTag tag = a.norm.tag;
  out.gelfand = linalg::gelfand_estimate(a.matrix, [tag](const Eigen::MatrixXcd& m) {
    return matrix_norm(m, tag).lower;
  });
  out.inconclusive =
      std::abs(out.value - out.gelfand) > 0.05 * std::max(out.value, out.gelfand) + 1e-12;
  return out;
}

std::vector<double> default_t_grid(std::uint64_t seed) {
  std::vector<double> t;
  for (int j = 0; j <= 200; ++j) t.push_back(-10.0 + 0.1 * j);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> far(-100.0, 100.0);
  for (int j = 0; j < 20; ++j) t.push_back(far(rng));
  return t;
}

AlgebraElement element_exp(const AlgebraElement& a, double t) {
  switch (a.kind) {
    case AlgebraElement::Kind::diag_lp:
    case AlgebraElement::Kind::multiplier: {
      AlgebraElement out = a;
      for (Eigen::Index k = 0; k < out.values.size(); ++k)
        out.values(k) = std::exp(Complex(0, t) * a.values(k));
      return out;
    }
    case AlgebraElement::Kind::self_adjoint_l2:
    case AlgebraElement::Kind::general:
      return AlgebraElement::general(linalg::matrix_exp(a.matrix, t), a.norm);
  }
  throw std::logic_error("element_exp: unknown kind");
}

HermitianCheck hermitian_check(const AlgebraElement& a, const std::vector<double>& t_grid,
                               double herm_tol) {
  HermitianCheck out;
  if (a.kind == AlgebraElement::Kind::multiplier) {
    // Real m_k = c + s k: exp(itM) is e^{itc} times translation by t s.
    const int n = a.degree();
    const double c = a.values(n).real();
    const double s = (a.values(2 * n).real() - a.values(0).real()) / (2 * n);
    bool affine = true;
    for (int k = -n; k <= n; ++k) {
      const Complex m = a.multiplier_value(k);
      affine = affine && std::abs(m.imag()) <= 1e-12 &&
               std::abs(m.real() - (c + s * k)) <= 1e-12 * (1 + std::abs(m.real()));
    }
    if (affine) {
      out.is_hermitian = true;
      return out;
    }
  }
  for (const double t : t_grid) {
    const AlgebraElement e = element_exp(a, t);
    const NormValue nv = op_norm(e);
    // Brackets: the lower bound is the only sound evidence of norm growth.
    const double dev = nv.exact ? std::abs(nv.lower - 1) : std::max(0.0, nv.lower - 1);
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.worst_t = t;
    }
  }
  out.is_hermitian = out.max_deviation <= herm_tol;
  return out;
}

AlgebraElement multiplier_apply(const SymbolExpr& f, int n, double s) {
  if (n < 1) throw std::invalid_argument("multiplier_apply: N must be >= 1");
  if (!(s > 0)) throw std::invalid_argument("multiplier_apply: scale must be positive");
  Eigen::VectorXcd m(2 * n + 1);
  for (int k = -n; k <= n; ++k) m(k + n) = eval(f, s * k);
  return AlgebraElement::multiplier(m);
}

namespace {

Eigen::MatrixXcd walk(const SymbolExpr& f, const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  return std::visit(
      overloaded{
          [&](const node::Const& c) -> Eigen::MatrixXcd { return c.c * id; },
          [&](const node::Poly& p) -> Eigen::MatrixXcd {
            if (p.coeffs.empty()) return Eigen::MatrixXcd::Zero(n, n);
            Eigen::MatrixXcd r = p.coeffs.back() * id;
            for (std::size_t k = p.coeffs.size() - 1; k-- > 0;) {
              r = r * a;
              r.diagonal().array() += p.coeffs[k];
            }
            return r;
          },
          [&](const node::CExp& e) -> Eigen::MatrixXcd {
            return e.c * linalg::matrix_exp(a, e.alpha);
          },
          [&](const node::Conj& c) -> Eigen::MatrixXcd { return walk(conjugate(c.inner), a); },
          [&](const node::Sum& s) -> Eigen::MatrixXcd { return walk(s.left, a) + walk(s.right, a); },
          [&](const node::Prod& p) -> Eigen::MatrixXcd { return walk(p.left, a) * walk(p.right, a); },
          [&](const node::Pow& p) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd base = walk(p.inner, a);
            Eigen::MatrixXcd r = id;
            for (unsigned e = p.n; e > 0; e >>= 1) {
              if (e & 1u) r = r * base;
              if (e > 1) base = base * base;
            }
            return r;
          },
          [&](const node::Affine& af) -> Eigen::MatrixXcd {
            return walk(af.inner, af.alpha * a + af.beta * id);
          },
      },
      f.node().v);
}

} // namespace

AlgebraElement apply_symbol(const SymbolExpr& f, const AlgebraElement& a) {
  switch (a.kind) {
    case AlgebraElement::Kind::diag_lp:
    case AlgebraElement::Kind::multiplier: {
      AlgebraElement out = a;
      for (Eigen::Index k = 0; k < a.values.size(); ++k) out.values(k) = eval(f, a.values(k).real());
      return out;
    }
    case AlgebraElement::Kind::self_adjoint_l2:
    case AlgebraElement::Kind::general:
      return AlgebraElement::general(walk(f, a.matrix), a.norm);
  }
  throw std::logic_error("apply_symbol: unknown kind");
}

Eigen::MatrixXcd random_self_adjoint(int n, double radius, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_self_adjoint: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd x(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) x(j, k) = Complex(gauss(rng), gauss(rng));
  Eigen::MatrixXcd h = (x + x.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  h *= radius / rho;
  // Restore exact Hermitian symmetry after scaling.
  return (h + h.adjoint()) / 2.0;
}

} // namespace usym
