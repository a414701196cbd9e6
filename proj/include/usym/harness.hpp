#pragma once

// Verdict orchestration: shape, Gram and equality tracks; the quadratic
// family threshold; witness scans over scaled multipliers; reports.

#include "usym/algebras.hpp"
#include "usym/pd_engine.hpp"
#include "usym/shape.hpp"
#include "usym/symbols.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace usym {

struct ThresholdResult {
  double lambda0 = 0;
  double t0 = 0;
  int iterations = 0;
  double residual = 0; // |1 - lambda0 cot(lambda0) - lambda0^2|
};

/// Root of 1 - l cot l = l^2 in (0, pi) by bisection, and t0 = (2 l^2 - 1) / l^2.
ThresholdResult quadratic_threshold();

struct SuiteEntry {
  std::string id;
  AlgebraElement element;
};
using Suite = std::vector<SuiteEntry>;

/// Diagonal l1/l2/l-infinity elements, seeded self-adjoint 4x4 and 6x6 with
/// spectral radius 2, D_8 and 0.25 D_8.
Suite default_suite(std::uint64_t seed = 42);

struct EqualityReport {
  std::string symbol_id;
  std::string element_id;
  NormValue norm;
  double rho = 0;
  double gap = 0; // norm lower bound - rho
  double tol = 0;
  bool passed = false;
  bool inconclusive = false;
  std::string note;
};

/// One row per element: F(a) through apply_symbol, its norm and spectral radius.
std::vector<EqualityReport> verify_equality(const SymbolExpr& f, const Suite& suite,
                                            const std::string& symbol_id, double eq_tol = 1e-7,
                                            std::uint64_t seed = 42);

enum class Outcome { accept_up_to, reject, inconclusive };

std::string to_string(Outcome o);
/// 0 accept, 2 reject, 3 inconclusive.
int exit_code(Outcome o);

struct RunConfig {
  Schedule schedule = default_schedule();
  Suite suite = default_suite();
  PdOptions pd;
  double eq_tol = 1e-7;
  bool fail_fast = false;
  std::uint64_t seed = 42;
};

struct UniversalityVerdict {
  std::string symbol_id;
  std::string expr;
  Outcome outcome = Outcome::inconclusive;
  std::string stage; // "shape", "gram" or "equality" when rejected
  std::string reason;
  Window accepted_up_to;
  ShapeVerdict shape;
  std::optional<PdVerdict> pd;
  std::vector<EqualityReport> equality;
  std::optional<GramCertificate> certificate;
};

/// All three tracks run unless `fail_fast`; any rejecting track rejects.
UniversalityVerdict run_universality(const SymbolExpr& f, const RunConfig& config,
                                     const std::string& symbol_id = "F");

struct ScaleRange {
  double lo = 0.1;
  double hi = 3.0;
  double step = 0.05;

  std::vector<double> values() const;
};

/// Parses "lo:hi:step".
ScaleRange parse_scale_range(const std::string& text);

struct WitnessResult {
  double best_margin = 0;
  double best_scale = 0;
  std::vector<EqualityReport> rows;
};

/// margin(s) = TrigSup lower bound of ||F(s D_N)|| - max_k |F(s k)|.
WitnessResult witness_scan(const SymbolExpr& f, int n, const ScaleRange& scales,
                           std::uint64_t seed = 42);

/// One JSON object per line, schema "usym.report.v1", keys sorted.
std::string report_jsonl(const std::vector<UniversalityVerdict>& verdicts);
std::string report_csv(const std::vector<UniversalityVerdict>& verdicts);

/// Writes `jsonl_path` and, when nonempty, `csv_path`; throws
/// std::runtime_error naming the path on I/O failure.
void report_emit(const std::vector<UniversalityVerdict>& verdicts, const std::string& jsonl_path,
                 const std::string& csv_path = "");

} // namespace usym
