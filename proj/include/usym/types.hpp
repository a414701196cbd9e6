#pragma once

#include <complex>
#include <vector>

namespace usym {

using Complex = std::complex<double>;

/// One stage of an escalation schedule: the window [-half_width, half_width]
/// sampled with `cells` equal steps (cells + 1 grid points).
struct Window {
  double half_width = 0;
  int cells = 0;

  double step() const { return 2.0 * half_width / cells; }
  /// j-th grid point, j = 0..cells.
  double point(int j) const { return (2.0 * half_width * j) / cells - half_width; }

  friend bool operator==(const Window&, const Window&) = default;
};

using Schedule = std::vector<Window>;

} // namespace usym
