#include "usym/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace usym {

namespace {

std::vector<double> grid_abs(const SymbolExpr& f, const Window& w) {
  std::vector<double> a(static_cast<std::size_t>(w.cells) + 1);
  for (int j = 0; j <= w.cells; ++j) a[static_cast<std::size_t>(j)] = std::abs(eval(f, w.point(j)));
  return a;
}

std::vector<bool> min_membership(const std::vector<double>& a, double grid_min, double min_tol) {
  const std::size_t n = a.size();
  std::vector<bool> in(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    double step = 0;
    if (j > 0) step = std::max(step, std::abs(a[j] - a[j - 1]));
    if (j + 1 < n) step = std::max(step, std::abs(a[j + 1] - a[j]));
    in[j] = a[j] <= grid_min + min_tol || a[j] - step <= grid_min + min_tol;
  }
  return in;
}

// Interior relative maxima (including flat-topped ones) outside the minimum set.
bool has_interior_peak(const std::vector<double>& a, const std::vector<bool>& in_min,
                       double peak_rel) {
  const std::size_t n = a.size();
  auto same = [&](double u, double v) { return std::abs(u - v) <= peak_rel * (1 + std::max(u, v)); };
  std::size_t j = 1;
  while (j + 1 < n) {
    std::size_t end = j;
    while (end + 1 < n && same(a[end + 1], a[j])) ++end;
    if (end + 1 < n) {
      bool excluded = false;
      for (std::size_t k = j; k <= end; ++k) excluded = excluded || in_min[k];
      const double v = a[j];
      const bool above_left = v - a[j - 1] > peak_rel * (1 + v);
      const bool above_right = v - a[end + 1] > peak_rel * (1 + v);
      if (!excluded && above_left && above_right) return true;
    }
    j = end + 1;
  }
  return false;
}

} // namespace

MinSetApprox min_set(const SymbolExpr& f, const Window& window, const ShapeTolerances& tol) {
  if (!(window.half_width > 0) || window.cells < 16)
    throw std::invalid_argument("min_set: need W > 0 and n >= 16");
  const auto a = grid_abs(f, window);
  MinSetApprox out;
  out.window = window;
  out.grid_min = *std::min_element(a.begin(), a.end());
  const auto in = min_membership(a, out.grid_min, tol.min_rel * (1 + out.grid_min));

  for (int j = 0; j <= window.cells;) {
    if (!in[static_cast<std::size_t>(j)]) {
      ++j;
      continue;
    }
    int end = j;
    while (end + 1 <= window.cells && in[static_cast<std::size_t>(end + 1)]) ++end;
    out.components.push_back({window.point(j), window.point(end)});
    j = end + 1;
  }
  return out;
}

std::optional<ExponentialFit> exponential_detector(const SymbolExpr& f, const Window& window,
                                                   const ShapeTolerances& tol) {
  const auto a = grid_abs(f, window);
  const double amax = *std::max_element(a.begin(), a.end());
  const double amin = *std::min_element(a.begin(), a.end());
  const Complex f0 = eval(f, 0.0);

  if (f0 == Complex(0)) {
    if (amax == 0.0) return ExponentialFit{Complex(0), 0.0, 0.0};
    return std::nullopt;
  }
  if (amax - amin > tol.flat_rel * amax) return std::nullopt;

  const int n = window.cells;
  std::vector<Complex> g(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) g[static_cast<std::size_t>(j)] = eval(f, window.point(j)) / f0;

  // Multiplicativity on a strided subset of pairs with x + y inside the window.
  const int stride = std::max(1, n / 64);
  double residual = 0;
  for (int i = 0; i <= n; i += stride) {
    for (int j = 0; j <= n; j += stride) {
      const double s = window.point(i) + window.point(j);
      if (std::abs(s) > window.half_width) continue;
      const Complex lhs = eval(f, s) / f0;
      residual = std::max(residual, std::abs(lhs - g[static_cast<std::size_t>(i)] *
                                                       g[static_cast<std::size_t>(j)]));
    }
  }
  if (residual > tol.mult_abs) return std::nullopt;

  // Nearest-branch phase continuation, then a least-squares line.
  std::vector<double> phase(g.size());
  phase[0] = std::arg(g[0]);
  for (std::size_t j = 1; j < g.size(); ++j) {
    double p = std::arg(g[j]);
    const double prev = phase[j - 1];
    p += 2 * std::numbers::pi * std::round((prev - p) / (2 * std::numbers::pi));
    phase[j] = p;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(g.size());
  for (int j = 0; j <= n; ++j) {
    const double x = window.point(j);
    const double y = phase[static_cast<std::size_t>(j)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double alpha = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return ExponentialFit{f0, alpha, residual};
}

ShapeVerdict shape_verdict(const SymbolExpr& f, std::span<const Window> schedule,
                           const ShapeTolerances& tol) {
  if (schedule.empty()) throw std::invalid_argument("shape_verdict: empty schedule");
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (!(schedule[k].half_width > schedule[k - 1].half_width))
      throw std::invalid_argument("shape_verdict: schedule must be strictly increasing in W");

  ShapeVerdict v;
  v.strictly_monotone_off_min = true;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const Window& w = schedule[k];
    v.windows.push_back(min_set(f, w, tol));
    const auto a = grid_abs(f, w);
    const auto in = min_membership(a, v.windows.back().grid_min,
                                   tol.min_rel * (1 + v.windows.back().grid_min));
    if (has_interior_peak(a, in, tol.peak_rel)) v.strictly_monotone_off_min = false;
    const double amax = *std::max_element(a.begin(), a.end());
    if (k == 0) v.max_abs_first = amax;
    v.max_abs_last = amax;
  }

  // Connectivity is judged on the two finest windows only.
  const std::size_t first_judged = schedule.size() >= 2 ? schedule.size() - 2 : 0;
  v.connected = true;
  for (std::size_t k = first_judged; k < v.windows.size(); ++k)
    if (v.windows[k].components.size() > 1) v.connected = false;

  v.growth_witnessed = schedule.size() >= 2 && v.max_abs_last >= tol.growth_factor * v.max_abs_first;
  v.bounded_exponential = exponential_detector(f, schedule.back(), tol);
  return v;
}

bool ShapeVerdict::rejected() const {
  if (bounded_exponential) return false;
  return !connected || !strictly_monotone_off_min || !growth_witnessed;
}

std::string ShapeVerdict::reason() const {
  if (!rejected()) return {};
  std::string out;
  auto add = [&](const char* s) {
    if (!out.empty()) out += "; ";
    out += s;
  };
  if (!connected) add("disconnected minimum set of |F|");
  if (!strictly_monotone_off_min) add("relative maximum of |F| outside the minimum set");
  if (!growth_witnessed) add("|F| bounded on the schedule without exponential-character form");
  return out;
}

} // namespace usym
