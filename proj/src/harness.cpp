#include "usym/harness.hpp"

#include "usym/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace usym {

ThresholdResult quadratic_threshold() {
  auto g = [](double l) { return 1 - l / std::tan(l) - l * l; };
  double lo = 0.1, hi = std::numbers::pi - 1e-6;
  double glo = g(lo);
  if (!(glo < 0) || !(g(hi) > 0)) throw std::logic_error("quadratic_threshold: no sign change");
  ThresholdResult r;
  while (r.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++r.iterations;
    const double gm = g(mid);
    if (gm == 0) {
      lo = hi = mid;
      break;
    }
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  r.lambda0 = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
  r.residual = std::abs(g(r.lambda0));
  r.t0 = (2 * r.lambda0 * r.lambda0 - 1) / (r.lambda0 * r.lambda0);
  return r;
}

Suite default_suite(std::uint64_t seed) {
  Suite s;
  Eigen::VectorXcd d1(5), d2(3), dinf(4);
  d1 << -2.0, -0.5, 0.0, 1.0, 1.5;
  d2 << -1.25, 0.3, 2.0;
  dinf << -3.0, -1.0, 1.0, 3.0;
  s.push_back({"diag_l1", AlgebraElement::diag_lp(1, d1)});
  s.push_back({"diag_l2", AlgebraElement::diag_lp(2, d2)});
  s.push_back({"diag_linf", AlgebraElement::diag_lp(0, dinf)});
  s.push_back({"sa4", AlgebraElement::self_adjoint(random_self_adjoint(4, 2.0, seed))});
  s.push_back({"sa6", AlgebraElement::self_adjoint(random_self_adjoint(6, 2.0, seed + 1))});
  s.push_back({"D8", AlgebraElement::generator(8)});
  s.push_back({"D8_s0.25", AlgebraElement::generator(8, 0.25)});
  return s;
}

std::vector<EqualityReport> verify_equality(const SymbolExpr& f, const Suite& suite,
                                            const std::string& symbol_id, double eq_tol,
                                            std::uint64_t seed) {
  const auto t_grid = default_t_grid(seed);
  TrigSupOptions trig;
  trig.seed = seed;
  std::vector<EqualityReport> out;
  for (const auto& entry : suite) {
    EqualityReport r;
    r.symbol_id = symbol_id;
    r.element_id = entry.id;
    r.tol = eq_tol;
    const HermitianCheck h = hermitian_check(entry.element, t_grid);
    if (!h.is_hermitian) {
      r.inconclusive = true;
      r.note = "element fails the Hermitian check";
      out.push_back(r);
      continue;
    }
    const AlgebraElement fa = apply_symbol(f, entry.element);
    r.norm = op_norm(fa, trig);
    const SpectralRadius sr = spectral_radius(fa);
    r.rho = sr.value;
    r.gap = r.norm.lower - r.rho;
    r.passed = r.norm.exact ? std::abs(r.gap) <= eq_tol : r.gap <= eq_tol;
    if (r.norm.inconclusive || sr.inconclusive) {
      r.inconclusive = true;
      r.note = sr.inconclusive ? "spectral radius methods disagree" : "norm iteration did not converge";
    }
    if (r.gap < -eq_tol) {
      r.inconclusive = true;
      r.note = "spectral radius exceeds the norm bound";
    }
    out.push_back(r);
  }
  return out;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::accept_up_to: return "accept_up_to";
    case Outcome::reject: return "reject";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::accept_up_to: return 0;
    case Outcome::reject: return 2;
    case Outcome::inconclusive: return 3;
  }
  return 1;
}

UniversalityVerdict run_universality(const SymbolExpr& f, const RunConfig& config,
                                     const std::string& symbol_id) {
  UniversalityVerdict v;
  v.symbol_id = symbol_id;
  v.expr = to_string(f);
  v.accepted_up_to = config.schedule.back();

  bool rejected = false, inconclusive = false;
  auto reject = [&](const std::string& stage, const std::string& reason) {
    if (rejected) return;
    rejected = true;
    v.stage = stage;
    v.reason = reason;
  };

  v.shape = shape_verdict(f, config.schedule, config.pd.shape);
  if (v.shape.rejected()) reject("shape", v.shape.reason());

  if (!(rejected && config.fail_fast)) {
    // The shape track already ran; the Gram track records its own evidence.
    PdOptions pd = config.pd;
    pd.shape_gate = false;
    v.pd = pd_interval_verdict(f, config.schedule, pd);
    if (v.pd->outcome == PdVerdict::Outcome::reject) {
      v.certificate = v.pd->certificate;
      reject(v.pd->stage == PdVerdict::Stage::gram ? "gram" : "shape", v.pd->reason);
    } else if (v.pd->outcome == PdVerdict::Outcome::inconclusive) {
      inconclusive = true;
      if (v.reason.empty()) v.reason = v.pd->reason;
    }
  }

  if (!(rejected && config.fail_fast)) {
    v.equality = verify_equality(f, config.suite, symbol_id, config.eq_tol, config.seed);
    for (const auto& r : v.equality) {
      if (!r.inconclusive && !r.passed) {
        reject("equality", "||F(a)|| exceeds |F(a)| on " + r.element_id);
        break;
      }
    }
  }

  if (rejected) v.outcome = Outcome::reject;
  else if (inconclusive) v.outcome = Outcome::inconclusive;
  else v.outcome = Outcome::accept_up_to;
  return v;
}

std::vector<double> ScaleRange::values() const {
  if (!(step > 0) || hi < lo) throw std::invalid_argument("scale range: need step > 0 and hi >= lo");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

ScaleRange parse_scale_range(const std::string& text) {
  ScaleRange r;
  std::stringstream ss(text);
  std::string part;
  std::vector<double> v;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw std::invalid_argument("scale range: bad number '" + part + "'");
    }
  }
  if (v.size() != 3) throw std::invalid_argument("scale range: expected lo:hi:step");
  r.lo = v[0];
  r.hi = v[1];
  r.step = v[2];
  r.values(); // validates
  return r;
}

WitnessResult witness_scan(const SymbolExpr& f, int n, const ScaleRange& scales,
                           std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("witness_scan: N must be >= 4");
  TrigSupOptions trig;
  trig.seed = seed;
  trig.grid_factor = 32;
  WitnessResult out;
  bool first = true;
  for (const double s : scales.values()) {
    const AlgebraElement m = multiplier_apply(f, n, s);
    EqualityReport r;
    r.symbol_id = to_string(f);
    r.element_id = "D" + std::to_string(n) + "*" + std::to_string(s);
    r.norm = trig_sup_lower(m.values, trig);
    r.rho = spectral_radius(m).value;
    r.gap = r.norm.lower - r.rho;
    r.tol = 1e-7;
    r.passed = r.gap <= r.tol;
    r.note = r.norm.witness;
    if (first || r.gap > out.best_margin) {
      out.best_margin = r.gap;
      out.best_scale = s;
      first = false;
    }
    out.rows.push_back(r);
  }
  return out;
}

std::string report_jsonl(const std::vector<UniversalityVerdict>& verdicts) {
  std::string out;
  for (const auto& v : verdicts) {
    out += verdict_to_json(v).dump();
    out += '\n';
  }
  return out;
}

std::string report_csv(const std::vector<UniversalityVerdict>& verdicts) {
  std::ostringstream os;
  os.precision(17);
  os << "symbol,expr,outcome,stage,W,n,min_gram_eig,max_equality_gap\n";
  for (const auto& v : verdicts) {
    double min_eig = 0, max_gap = 0;
    bool any = false;
    if (v.pd)
      for (const auto& s : v.pd->stages) {
        min_eig = any ? std::min(min_eig, s.min_eig) : s.min_eig;
        any = true;
      }
    for (const auto& r : v.equality) max_gap = std::max(max_gap, r.gap);
    Window w = v.accepted_up_to;
    if (v.pd && v.pd->rejecting_window) w = *v.pd->rejecting_window;
    std::string expr = v.expr;
    std::replace(expr.begin(), expr.end(), '"', '\'');
    os << v.symbol_id << ",\"" << expr << "\"," << to_string(v.outcome) << ',' << v.stage << ','
       << w.half_width << ',' << w.cells << ',' << min_eig << ',' << max_gap << '\n';
  }
  return os.str();
}

void report_emit(const std::vector<UniversalityVerdict>& verdicts, const std::string& jsonl_path,
                 const std::string& csv_path) {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
  };
  write(jsonl_path, report_jsonl(verdicts));
  if (!csv_path.empty()) write(csv_path, report_csv(verdicts));
}

} // namespace usym
