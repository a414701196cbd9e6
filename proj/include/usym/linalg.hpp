#pragma once

// Dense kernels shared by the Gram-matrix engine and the concrete algebras.
// Everything here is a template over the Eigen scalar so the same code runs on
// real symmetric and complex Hermitian input.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

namespace usym::linalg {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Induced l1 operator norm (maximum absolute column sum).
template <typename Derived>
typename Derived::RealScalar op_norm_l1(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

/// Induced l-infinity operator norm (maximum absolute row sum).
template <typename Derived>
typename Derived::RealScalar op_norm_linf(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Real>
struct PowerIteration {
  Real value = 0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value of `a` by power iteration on A^* A.
///
/// Stops once the Rayleigh quotient ||A v||^2 changes by less than `rel_tol`
/// (relative) between sweeps. The start vector is deterministic.
template <typename Derived>
PowerIteration<typename Derived::RealScalar> largest_singular_value(
    const Eigen::MatrixBase<Derived>& a,
    typename Derived::RealScalar rel_tol = 1e-15, int max_iter = 50000) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  const Eigen::Index n = a.cols();
  if (n == 0 || a.isZero(0)) return {Real(0), 0, true};

  VectorX<Scalar> v(n);
  for (Eigen::Index k = 0; k < n; ++k)
    v(k) = Scalar(Real(1) + Real(0.5) * std::sin(Real(1.7) * Real(k + 1)));
  v.normalize();

  Real theta = (a * v).squaredNorm();
  for (int it = 1; it <= max_iter; ++it) {
    VectorX<Scalar> w = a.adjoint() * (a * v);
    const Real wn = w.norm();
    if (wn == Real(0)) return {Real(0), it, true};
    v = w / wn;
    const Real next = (a * v).squaredNorm();
    if (std::abs(next - theta) <= rel_tol * next) return {std::sqrt(next), it, true};
    theta = next;
  }
  return {std::sqrt(theta), max_iter, false};
}

template <typename Scalar>
struct HermitianEigen {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  VectorX<Real> values;    // ascending
  MatrixX<Scalar> vectors; // columns match `values`
  int sweeps = 0;
  bool converged = false;
};

/// Full eigendecomposition of a Hermitian (or real symmetric) matrix by cyclic
/// Jacobi sweeps. Only the upper triangle's off-diagonal mass is tracked.
template <typename Derived>
HermitianEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& a,
                                                      int max_sweeps = 64) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  const Eigen::Index n = a.rows();

  MatrixX<Scalar> m = a;
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Real scale = m.norm();
  const Real target = Real(4) * std::numeric_limits<Real>::epsilon() * scale;

  HermitianEigen<Scalar> out;
  for (; out.sweeps < max_sweeps; ++out.sweeps) {
    Real off = 0;
    for (Eigen::Index q = 1; q < n; ++q) off += m.col(q).head(q).squaredNorm();
    if (std::sqrt(off) <= target) {
      out.converged = true;
      break;
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (m(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(m, p, q);
        m.applyOnTheLeft(p, q, rot.adjoint());
        m.applyOnTheRight(p, q, rot);
        m(p, q) = Scalar(0);
        m(q, p) = Scalar(0);
        v.applyOnTheRight(p, q, rot);
      }
    }
  }
  if (n <= 1) out.converged = true;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return std::real(m(l, l)) < std::real(m(r, r));
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = std::real(m(order[k], order[k]));
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

enum class EigenMethod { cyclic_jacobi, tridiagonal_qr };

template <typename Scalar>
struct MinEigenpair {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Real value = 0;
  VectorX<Scalar> vector; // unit norm; empty when not requested
  Real residual = 0;      // ||G v - value v||
  Real scale = 0;         // spectral-norm estimate of G
  EigenMethod method = EigenMethod::cyclic_jacobi;
  bool converged = false;
};

/// Smallest eigenpair of a Hermitian matrix.
///
/// Up to `jacobi_limit` rows the cyclic Jacobi solver is used. Larger matrices
/// go through Householder tridiagonalisation (eigenvalues only); the
/// eigenvector, when requested, comes from inverse iteration shifted just
/// below the computed minimum, where G - shift*I is positive definite.
template <typename Derived>
MinEigenpair<typename Derived::Scalar> hermitian_min_eigenpair(
    const Eigen::MatrixBase<Derived>& g, bool want_vector = true,
    Eigen::Index jacobi_limit = 128) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  const Eigen::Index n = g.rows();
  MinEigenpair<Scalar> out;
  if (n == 0) {
    out.converged = true;
    return out;
  }

  if (n <= jacobi_limit) {
    auto eig = jacobi_eigen(g);
    out.method = EigenMethod::cyclic_jacobi;
    out.value = eig.values(0);
    out.scale = std::max(std::abs(eig.values(0)), std::abs(eig.values(n - 1)));
    out.vector = eig.vectors.col(0);
    out.residual = (g * out.vector - out.value * out.vector).norm();
    out.converged = eig.converged;
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(g, Eigen::EigenvaluesOnly);
    out.method = EigenMethod::tridiagonal_qr;
    if (es.info() != Eigen::Success) return out;
    const auto& ev = es.eigenvalues();
    out.value = ev(0);
    out.scale = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    out.converged = true;
    if (!want_vector) return out;

    const Real unit = std::max(out.scale, Real(1));
    Real delta = Real(1e-9) * unit;
    MatrixX<Scalar> shifted = g;
    Eigen::LLT<MatrixX<Scalar>> llt;
    for (int attempt = 0; attempt < 8; ++attempt, delta *= Real(10)) {
      shifted = g;
      shifted.diagonal().array() -= Scalar(out.value - delta);
      llt.compute(shifted);
      if (llt.info() == Eigen::Success) break;
    }
    if (llt.info() != Eigen::Success) {
      out.converged = false;
      return out;
    }
    VectorX<Scalar> v(n);
    for (Eigen::Index k = 0; k < n; ++k)
      v(k) = Scalar(Real(1) + Real(0.25) * std::cos(Real(0.9) * Real(k)));
    v.normalize();
    for (int it = 0; it < 6; ++it) {
      v = llt.solve(v);
      v.normalize();
    }
    out.vector = v;
    out.value = std::real(v.dot(g * v));
    out.residual = (g * v - out.value * v).norm();
  }
  out.converged = out.converged &&
                  out.residual <= Real(1e-10) * std::max(out.scale, Real(1));
  return out;
}

/// exp(i t A) by scaling and squaring of a truncated Taylor series.
///
/// The scaled argument satisfies ||i t A / 2^s||_1 <= 1/2 before the series is
/// summed; terms are added until they drop below machine precision.
template <typename Derived>
MatrixX<std::complex<typename Derived::RealScalar>> matrix_exp(
    const Eigen::MatrixBase<Derived>& a, typename Derived::RealScalar t) {
  using Real = typename Derived::RealScalar;
  using C = std::complex<Real>;
  const Eigen::Index n = a.rows();

  MatrixX<C> m = C(Real(0), t) * a.template cast<C>();
  const Real norm = op_norm_l1(m);
  int squarings = 0;
  if (norm > Real(0.5)) squarings = static_cast<int>(std::ceil(std::log2(norm / Real(0.5))));
  m /= std::ldexp(Real(1), squarings);

  MatrixX<C> result = MatrixX<C>::Identity(n, n);
  MatrixX<C> term = MatrixX<C>::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * m) / Real(k);
    result += term;
    if (op_norm_l1(term) <= std::numeric_limits<Real>::epsilon() * op_norm_l1(result) / 4) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// ||A^k||^(1/k) for k = 2^doublings, computed on A/||A|| to avoid overflow.
template <typename Derived, typename NormFn>
typename Derived::RealScalar gelfand_estimate(const Eigen::MatrixBase<Derived>& a,
                                              NormFn&& norm, int doublings = 6) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  const Real base = norm(a);
  if (base == Real(0)) return Real(0);
  MatrixX<Scalar> p = a / base;
  Real log_scale = 0; // log of the scale factored out of p, per unit power
  for (int d = 0; d < doublings; ++d) {
    p = p * p;
    const Real pn = norm(p);
    if (pn == Real(0)) return Real(0);
    p /= pn;
    log_scale = Real(2) * log_scale + std::log(pn);
  }
  const Real k = std::ldexp(Real(1), doublings);
  return base * std::exp(log_scale / k);
}

} // namespace usym::linalg
