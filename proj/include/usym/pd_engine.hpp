#pragma once

// Positive-definite extension tests on intervals.
//
// A symbol F restricted to [a, b] admits a positive-definite extension only
// with the base point at a maximum of |F|, which for admissible F is an
// endpoint. Normalising there gives psi(d) = F(base +/- d) / F(base) on
// [0, b - a]; the finite sections of the kernel psi(x_j - x_k) must then be
// positive semidefinite. A negative eigenvalue yields a finite certificate.

#include "usym/linalg.hpp"
#include "usym/shape.hpp"
#include "usym/symbols.hpp"
#include "usym/types.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace usym {

/// Left: base at the left endpoint, psi(d) = F(a + d) / F(a).
/// Right: interval mirrored, psi(d) = F(b - d) / F(b).
enum class Orientation { left, right };

struct ToeplitzSamples {
  double base = 0; // point of F where psi(0) = 1
  double lo = 0, hi = 0;
  double step = 0;
  Orientation orientation = Orientation::left;
  Eigen::VectorXcd first_row; // psi(j * step), j = 0..n; first_row(0) == 1

  int cells() const { return static_cast<int>(first_row.size()) - 1; }
  /// psi(m * step) for m in [-n, n], using psi(-d) = conj(psi(d)).
  Complex at(int m) const;

  static ToeplitzSamples from_samples(double step, Eigen::VectorXcd first_row);
};

/// G_jk = psi((j - k) h): Hermitian by construction.
Eigen::MatrixXcd gram_matrix(const ToeplitzSamples& t);

struct NormalizeOutcome {
  enum class Status { ok, zero_maximum, interior_maximum };
  Status status = Status::ok;
  std::optional<ToeplitzSamples> samples;
  bool tie = false;          // |F(a)| and |F(b)| agree within tie_rel
  double interior_argmax = 0; // set for interior_maximum
};

/// Samples psi at a fixed base orientation, no maximum checks.
ToeplitzSamples normalize_at(const SymbolExpr& f, double lo, double hi, int cells,
                             Orientation orientation);

/// Chooses the endpoint attaining the grid maximum of |F| (ties go left).
NormalizeOutcome normalize_at_max(const SymbolExpr& f, double lo, double hi, int cells,
                                  double tie_rel = 1e-9);

struct GramEigen {
  double min_eig = 0;
  Eigen::VectorXcd eigvec;
  double residual = 0;
  double scale = 0;
  linalg::EigenMethod method = linalg::EigenMethod::cyclic_jacobi;
  bool converged = false;
};

GramEigen gram_min_eig(const ToeplitzSamples& t, bool want_vector = true);

/// Finite violation of positive definiteness for the normalised symbol:
/// sum_jk psi(x_j - x_k) c_j conj(c_k) = form_value < 0.
struct GramCertificate {
  double base = 0;
  int direction = 1; // psi(d) = F(base + direction * d) / F(base) for d >= 0
  std::vector<double> points;
  std::vector<Complex> coeffs;
  double form_value = 0;
};

/// Re-evaluates the quadratic form from F directly (not from stored samples).
double replay_certificate(const GramCertificate& cert, const SymbolExpr& f);

/// max over pairs of |psi(x1) - psi(x2)|^2 - 2 |1 - Re psi(x1 - x2)|.
double necessary_inequality_check(const ToeplitzSamples& t,
                                  std::span<const std::pair<int, int>> pairs);
/// Same, over all index pairs.
double necessary_inequality_check(const ToeplitzSamples& t);

struct CharacterViolation {
  double x = 0, y = 0;
  double deviation = 0;
};

/// Wherever |psi(x)| reaches 1, psi(x + y) must equal psi(x) psi(y).
std::vector<CharacterViolation> character_check(const ToeplitzSamples& t,
                                                double char_tol = 1e-9);

/// Real, nonnegative, nonincreasing and convex samples: a sufficient
/// condition for a positive-definite extension.
bool polya_certificate(const ToeplitzSamples& t);

struct PdOptions {
  double cert_tol = 1e-8;       // reject when min_eig < -cert_tol * (n + 1)
  double coeff_floor = 1e-6;    // certificate coefficients kept above this modulus
  double tie_rel = 1e-9;
  double ineq_tol = 1e-9;
  double char_tol = 1e-9;
  bool polya_shortcut = false;  // skip eigen work when the Polya test passes
  bool shape_gate = true;       // run the shape stage before any Gram work
  ShapeTolerances shape;
};

struct PdStage {
  Window window;
  int resolution = 0; // cells of the tested grid: n or 2n
  Orientation orientation = Orientation::left;
  bool tie = false;
  double min_eig = 0;
  double threshold = 0;
  bool eigen_skipped = false;
  double ineq_violation = 0;
  std::size_t char_violations = 0;
  bool polya = false;
  bool passed = true;
};

struct PdVerdict {
  enum class Outcome { accept_up_to, reject, inconclusive };
  enum class Stage { none, shape, gram };

  Outcome outcome = Outcome::inconclusive;
  Stage stage = Stage::none;
  Window accepted_up_to;
  std::optional<Window> rejecting_window;
  std::optional<GramCertificate> certificate;
  std::string reason;
  std::vector<PdStage> stages;
};

/// Runs the shape stage (reusing `precomputed_shape` when given), then the Gram
/// test on [-W, W] at step sizes 2W/n and 2W/(2n) for each scheduled window.
/// The first rejection in schedule order wins.
PdVerdict pd_interval_verdict(const SymbolExpr& f, std::span<const Window> schedule,
                              const PdOptions& options = {},
                              const ShapeVerdict* precomputed_shape = nullptr);

/// W in {0.5, 1, 2, 4, 8, 16}, n in {32, 64, 128, 256, 512, 512}.
Schedule default_schedule();
/// W = 0.25 * 2^k up to 32, n = min(1024, 32 * 2^k).
Schedule escalation_schedule();
/// Pairs widths and cell counts; W strictly increasing, n nondecreasing.
Schedule make_schedule(std::span<const double> widths, std::span<const int> cells);

} // namespace usym
