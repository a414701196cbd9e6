#include "usym/pd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace usym {

Complex ToeplitzSamples::at(int m) const {
  if (m >= 0) return first_row(m);
  return std::conj(first_row(-m));
}

ToeplitzSamples ToeplitzSamples::from_samples(double step, Eigen::VectorXcd first_row) {
  if (first_row.size() < 1) throw std::invalid_argument("ToeplitzSamples: empty first row");
  ToeplitzSamples t;
  t.step = step;
  t.first_row = std::move(first_row);
  t.hi = step * static_cast<double>(t.first_row.size() - 1);
  return t;
}

Eigen::MatrixXcd gram_matrix(const ToeplitzSamples& t) {
  const int n = t.cells() + 1;
  Eigen::MatrixXcd g(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) g(j, k) = t.at(j - k);
  return g;
}

ToeplitzSamples normalize_at(const SymbolExpr& f, double lo, double hi, int cells,
                             Orientation orientation) {
  if (!(hi > lo) || cells < 1) throw std::invalid_argument("normalize_at: need hi > lo, cells >= 1");
  ToeplitzSamples t;
  t.lo = lo;
  t.hi = hi;
  t.step = (hi - lo) / cells;
  t.orientation = orientation;
  t.base = orientation == Orientation::left ? lo : hi;
  const double dir = orientation == Orientation::left ? 1.0 : -1.0;
  const Complex f0 = eval(f, t.base);
  t.first_row.resize(cells + 1);
  t.first_row(0) = 1.0;
  for (int j = 1; j <= cells; ++j) {
    // The far endpoint is hit exactly rather than through accumulated steps.
    const double x = j == cells ? (orientation == Orientation::left ? hi : lo)
                                : t.base + dir * (j * (hi - lo) / cells);
    t.first_row(j) = eval(f, x) / f0;
  }
  return t;
}

NormalizeOutcome normalize_at_max(const SymbolExpr& f, double lo, double hi, int cells,
                                  double tie_rel) {
  if (!(hi > lo) || cells < 1) throw std::invalid_argument("normalize_at_max: need hi > lo, cells >= 1");
  NormalizeOutcome out;
  double gmax = 0;
  int argmax = 0;
  for (int j = 0; j <= cells; ++j) {
    const double x = j == cells ? hi : lo + j * (hi - lo) / cells;
    const double a = std::abs(eval(f, x));
    if (a > gmax) {
      gmax = a;
      argmax = j;
    }
  }
  if (gmax == 0) {
    out.status = NormalizeOutcome::Status::zero_maximum;
    return out;
  }
  const double a_lo = std::abs(eval(f, lo));
  const double a_hi = std::abs(eval(f, hi));
  const double end_max = std::max(a_lo, a_hi);
  if (gmax - end_max > tie_rel * gmax) {
    out.status = NormalizeOutcome::Status::interior_maximum;
    out.interior_argmax = lo + argmax * (hi - lo) / cells;
    return out;
  }
  out.tie = std::abs(a_lo - a_hi) <= tie_rel * gmax;
  const Orientation o = (out.tie || a_lo > a_hi) ? Orientation::left : Orientation::right;
  out.samples = normalize_at(f, lo, hi, cells, o);
  return out;
}

GramEigen gram_min_eig(const ToeplitzSamples& t, bool want_vector) {
  if (t.cells() < 1) throw std::invalid_argument("gram_min_eig: need at least two samples");
  const auto pair = linalg::hermitian_min_eigenpair(gram_matrix(t), want_vector);
  GramEigen out;
  out.min_eig = pair.value;
  out.eigvec = pair.vector;
  out.residual = pair.residual;
  out.scale = pair.scale;
  out.method = pair.method;
  out.converged = pair.converged;
  return out;
}

namespace {

Complex psi_from_f(const SymbolExpr& f, double base, int direction, Complex f0, double d) {
  if (d == 0) return 1.0;
  const Complex v = eval(f, base + direction * std::abs(d)) / f0;
  return d > 0 ? v : std::conj(v);
}

double replay_form(const std::vector<double>& points, const std::vector<Complex>& coeffs,
                   const SymbolExpr& f, double base, int direction) {
  const Complex f0 = eval(f, base);
  Complex form = 0;
  for (std::size_t j = 0; j < points.size(); ++j)
    for (std::size_t k = 0; k < points.size(); ++k)
      form += psi_from_f(f, base, direction, f0, points[j] - points[k]) * coeffs[j] *
              std::conj(coeffs[k]);
  return form.real();
}

// Certificate from eigenvector coefficients (c = conj(v), so that
// sum psi(x_j - x_k) c_j conj(c_k) = v^* G v) over the given index set.
std::optional<GramCertificate> certificate_from(const ToeplitzSamples& t, const SymbolExpr& f,
                                                const std::vector<int>& idx,
                                                const Eigen::VectorXcd& v, double floor,
                                                double cert_tol) {
  const int direction = t.orientation == Orientation::left ? 1 : -1;
  auto attempt = [&](double keep_above) -> std::optional<GramCertificate> {
    GramCertificate c;
    c.base = t.base;
    c.direction = direction;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Complex ck = std::conj(v(static_cast<Eigen::Index>(k)));
      if (std::abs(ck) <= keep_above) continue;
      c.points.push_back(idx[k] * t.step);
      c.coeffs.push_back(ck);
    }
    if (c.points.empty()) return std::nullopt;
    double mass = 0;
    for (const auto& ck : c.coeffs) mass += std::norm(ck);
    c.form_value = replay_form(c.points, c.coeffs, f, c.base, c.direction);
    if (c.form_value < -cert_tol * mass) return c;
    return std::nullopt;
  };
  if (auto c = attempt(floor)) return c;
  return attempt(-1.0);
}

struct OrientationResult {
  bool failed = false;
  bool inconclusive = false;
  double min_eig = 0;
  double threshold = 0;
  double ineq = 0;
  std::size_t char_violations = 0;
  bool polya = false;
  bool eigen_skipped = false;
  std::optional<GramCertificate> certificate;
};

OrientationResult test_orientation(const ToeplitzSamples& t, const SymbolExpr& f,
                                   const PdOptions& opt) {
  OrientationResult r;
  const int n = t.cells();
  r.threshold = -opt.cert_tol * (n + 1);
  r.polya = polya_certificate(t);
  r.char_violations = character_check(t, opt.char_tol).size();

  // Necessary filter (3x3 principal minors through the origin).
  int worst_a = 0, worst_b = 0;
  r.ineq = -std::numeric_limits<double>::infinity();
  for (int a = 0; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const double v = std::norm(t.at(a) - t.at(b)) - 2 * std::abs(1.0 - t.at(a - b).real());
      if (v > r.ineq) {
        r.ineq = v;
        worst_a = a;
        worst_b = b;
      }
    }
  }
  if (n < 1) r.ineq = 0;

  if (r.ineq > opt.ineq_tol) {
    r.failed = true;
    const std::vector<int> idx{0, worst_a, worst_b};
    Eigen::Matrix3cd g;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) g(j, k) = t.at(idx[j] - idx[k]);
    const auto eig = linalg::jacobi_eigen(g);
    r.certificate = certificate_from(t, f, idx, eig.vectors.col(0), opt.coeff_floor, opt.cert_tol);
  }

  if (opt.polya_shortcut && r.polya && !r.failed) {
    r.eigen_skipped = true;
    return r;
  }

  const GramEigen ge = gram_min_eig(t, false);
  if (!ge.converged) {
    r.inconclusive = true;
    return r;
  }
  r.min_eig = ge.min_eig;
  if (ge.min_eig < r.threshold) r.failed = true;
  if (r.failed && !r.certificate) {
    const GramEigen gv = gram_min_eig(t, true);
    if (gv.eigvec.size() == n + 1) {
      std::vector<int> idx(static_cast<std::size_t>(n) + 1);
      for (int j = 0; j <= n; ++j) idx[static_cast<std::size_t>(j)] = j;
      r.certificate = certificate_from(t, f, idx, gv.eigvec, opt.coeff_floor, opt.cert_tol);
    }
  }
  return r;
}

PdStage stage_record(const Window& w, int resolution, const ToeplitzSamples& t, bool tie,
                     const OrientationResult& r) {
  PdStage s;
  s.window = w;
  s.resolution = resolution;
  s.orientation = t.orientation;
  s.tie = tie;
  s.min_eig = r.min_eig;
  s.threshold = r.threshold;
  s.eigen_skipped = r.eigen_skipped;
  s.ineq_violation = r.ineq;
  s.char_violations = r.char_violations;
  s.polya = r.polya;
  s.passed = !r.failed && !r.inconclusive;
  return s;
}

} // namespace

double replay_certificate(const GramCertificate& cert, const SymbolExpr& f) {
  if (cert.points.size() != cert.coeffs.size())
    throw std::invalid_argument("certificate: points and coefficients differ in length");
  if (cert.direction != 1 && cert.direction != -1)
    throw std::invalid_argument("certificate: direction must be +1 or -1");
  return replay_form(cert.points, cert.coeffs, f, cert.base, cert.direction);
}

double necessary_inequality_check(const ToeplitzSamples& t,
                                  std::span<const std::pair<int, int>> pairs) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pairs) {
    const double v = std::norm(t.at(a) - t.at(b)) - 2 * std::abs(1.0 - t.at(a - b).real());
    worst = std::max(worst, v);
  }
  return pairs.empty() ? 0.0 : worst;
}

double necessary_inequality_check(const ToeplitzSamples& t) {
  std::vector<std::pair<int, int>> pairs;
  const int n = t.cells();
  for (int a = 0; a <= n; ++a)
    for (int b = a; b <= n; ++b) pairs.emplace_back(a, b);
  return necessary_inequality_check(t, pairs);
}

std::vector<CharacterViolation> character_check(const ToeplitzSamples& t, double char_tol) {
  std::vector<CharacterViolation> out;
  const int n = t.cells();
  // psi(-x) = conj psi(x), so x > 0 covers the negative side as well.
  for (int m = 1; m <= n; ++m) {
    if (std::abs(t.at(m)) < 1 - char_tol) continue;
    for (int k = -n; k + m <= n; ++k) {
      const double dev = std::abs(t.at(m + k) - t.at(m) * t.at(k));
      if (dev > char_tol) out.push_back({m * t.step, k * t.step, dev});
    }
  }
  return out;
}

bool polya_certificate(const ToeplitzSamples& t) {
  const auto& r = t.first_row;
  const Eigen::Index n = r.size();
  constexpr double tol = 1e-10;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(r(j).imag()) > tol) return false;
    if (r(j).real() < -tol) return false;
    if (j > 0 && r(j).real() > r(j - 1).real() + tol) return false;
    if (j > 0 && j + 1 < n && r(j + 1).real() - 2 * r(j).real() + r(j - 1).real() < -tol)
      return false;
  }
  return true;
}

PdVerdict pd_interval_verdict(const SymbolExpr& f, std::span<const Window> schedule,
                              const PdOptions& options, const ShapeVerdict* precomputed_shape) {
  if (schedule.empty()) throw std::invalid_argument("pd_interval_verdict: empty schedule");
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (!(schedule[k].half_width > schedule[k - 1].half_width) ||
        schedule[k].cells < schedule[k - 1].cells)
      throw std::invalid_argument("pd_interval_verdict: schedule must increase in W and n");

  PdVerdict v;
  if (options.shape_gate) {
    ShapeVerdict local;
    if (!precomputed_shape) local = shape_verdict(f, schedule, options.shape);
    const ShapeVerdict& shape = precomputed_shape ? *precomputed_shape : local;
    if (shape.rejected()) {
      v.outcome = PdVerdict::Outcome::reject;
      v.stage = PdVerdict::Stage::shape;
      v.reason = shape.reason();
      return v;
    }
  }

  for (const Window& w : schedule) {
    for (const int res : {w.cells, 2 * w.cells}) {
      const auto norm = normalize_at_max(f, -w.half_width, w.half_width, res, options.tie_rel);
      if (norm.status == NormalizeOutcome::Status::zero_maximum) continue;
      if (norm.status == NormalizeOutcome::Status::interior_maximum) {
        v.outcome = PdVerdict::Outcome::reject;
        v.stage = PdVerdict::Stage::shape;
        v.rejecting_window = Window{w.half_width, res};
        v.reason = "interior maximum of |F| on [-W, W] at x = " + std::to_string(norm.interior_argmax);
        return v;
      }
      const ToeplitzSamples& t = *norm.samples;
      const OrientationResult r = test_orientation(t, f, options);
      v.stages.push_back(stage_record(w, res, t, norm.tie, r));
      if (r.inconclusive) {
        v.outcome = PdVerdict::Outcome::inconclusive;
        v.reason = "Hermitian eigensolver did not reach the residual bound";
        return v;
      }
      if (!r.failed) continue;

      if (norm.tie) {
        // Equal endpoint moduli: both bases must fail before rejecting.
        const ToeplitzSamples other =
            normalize_at(f, -w.half_width, w.half_width, res, Orientation::right);
        const OrientationResult r2 = test_orientation(other, f, options);
        v.stages.push_back(stage_record(w, res, other, true, r2));
        if (r2.inconclusive) {
          v.outcome = PdVerdict::Outcome::inconclusive;
          v.reason = "Hermitian eigensolver did not reach the residual bound";
          return v;
        }
        if (!r2.failed) continue;
      }
      if (!r.certificate) {
        v.outcome = PdVerdict::Outcome::inconclusive;
        v.rejecting_window = Window{w.half_width, res};
        v.reason = "negative Gram eigenvalue but no certificate survived replay";
        return v;
      }
      v.outcome = PdVerdict::Outcome::reject;
      v.stage = PdVerdict::Stage::gram;
      v.rejecting_window = Window{w.half_width, res};
      v.certificate = r.certificate;
      v.reason = "Gram matrix not positive semidefinite";
      return v;
    }
  }
  v.outcome = PdVerdict::Outcome::accept_up_to;
  v.accepted_up_to = schedule.back();
  return v;
}

Schedule make_schedule(std::span<const double> widths, std::span<const int> cells) {
  if (widths.size() != cells.size() || widths.empty())
    throw std::invalid_argument("schedule: widths and cell counts must be nonempty and paired");
  Schedule s;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    if (!(widths[k] > 0) || cells[k] < 16)
      throw std::invalid_argument("schedule: need W > 0 and n >= 16");
    if (k > 0 && (!(widths[k] > widths[k - 1]) || cells[k] < cells[k - 1]))
      throw std::invalid_argument("schedule: W must increase strictly and n must not decrease");
    s.push_back({widths[k], cells[k]});
  }
  return s;
}

Schedule default_schedule() {
  const double w[] = {0.5, 1, 2, 4, 8, 16};
  const int n[] = {32, 64, 128, 256, 512, 512};
  return make_schedule(w, n);
}

Schedule escalation_schedule() {
  Schedule s;
  for (int k = 0; k <= 7; ++k) s.push_back({0.25 * (1 << k), std::min(1024, 32 << k)});
  return s;
}

} // namespace usym
