// usym: command-line front end for the universal-symbol laboratory.

#include "usym/calculus.hpp"
#include "usym/harness.hpp"
#include "usym/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace usym;

template <typename T>
std::vector<T> split_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      if constexpr (std::is_same_v<T, int>) out.push_back(std::stoi(item, &used));
      else out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument(std::string(what) + ": bad entry '" + item + "'");
  }
  return out;
}

SymbolExpr parse_or_explain(const std::string& text) {
  try {
    return parse_symbol(text);
  } catch (const ParseError& e) {
    std::ostringstream os;
    os << e.what() << "\n  " << text << "\n  " << std::string(e.position(), ' ') << '^';
    throw std::invalid_argument(os.str());
  }
}

std::string csv_path_for(const std::string& jsonl) {
  const std::string ext = ".jsonl";
  if (jsonl.size() > ext.size() && jsonl.compare(jsonl.size() - ext.size(), ext.size(), ext) == 0)
    return jsonl.substr(0, jsonl.size() - ext.size()) + ".csv";
  return jsonl + ".csv";
}

void print_verdict(const UniversalityVerdict& v) {
  std::printf("symbol   %s\n", v.expr.c_str());
  std::printf("outcome  %s\n", to_string(v.outcome).c_str());
  if (!v.stage.empty()) std::printf("stage    %s\n", v.stage.c_str());
  if (!v.reason.empty()) std::printf("reason   %s\n", v.reason.c_str());
  if (v.outcome == Outcome::accept_up_to)
    std::printf("window   W=%g n=%d\n", v.accepted_up_to.half_width, v.accepted_up_to.cells);
  if (v.pd && v.pd->rejecting_window)
    std::printf("rejected at W=%g n=%d\n", v.pd->rejecting_window->half_width,
                v.pd->rejecting_window->cells);
  if (v.pd && !v.pd->stages.empty()) {
    double worst = v.pd->stages.front().min_eig;
    for (const auto& s : v.pd->stages) worst = std::min(worst, s.min_eig);
    std::printf("min Gram eigenvalue over stages  %.3e\n", worst);
  }
  if (v.certificate)
    std::printf("certificate  %zu points, form %.6e\n", v.certificate->points.size(),
                v.certificate->form_value);
  for (const auto& r : v.equality)
    std::printf("  %-10s norm [%.10g, %.10g] rho %.10g gap %+.3e %s%s\n", r.element_id.c_str(),
                r.norm.lower, r.norm.upper, r.rho, r.gap, r.inconclusive ? "inconclusive" : r.passed ? "ok" : "FAIL",
                r.inconclusive ? (" (" + r.note + ")").c_str() : "");
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Expands `--config FILE` into the flags it lists. Keys given explicitly on
// the command line win over the file.
std::vector<std::string> with_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--") {
      rest.insert(rest.end(), args.begin() + static_cast<long>(k), args.end());
      break;
    }
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const bool explicit_key = std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == key || a.rfind(key + "=", 0) == 0;
    });
    if (explicit_key) continue;
    const bool is_flag = key == "--fail-fast" || key == "--polya-shortcut";
    if (is_flag) {
      if (truthy(value)) extra.push_back(key);
    } else {
      extra.push_back(key + "=" + value);
    }
  }
  // Config flags go right after the subcommand name.
  if (!rest.empty()) rest.insert(rest.begin() + 1, extra.begin(), extra.end());
  return rest;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal symbol laboratory"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "Run the shape, Gram and equality tracks on a symbol");
  std::string config_path;
  check->add_option("--config", config_path, "Flat key=value file mirroring the flags");
  std::string expr, windows = "0.5,1,2,4,8,16", grids = "32,64,128,256,512,512";
  std::string suite_arg = "default", out_path, cert_out, symbol_id = "F";
  double tol = 1e-8;
  std::uint64_t seed = 42;
  bool fail_fast = false, polya = false;
  check->add_option("expr", expr, "Symbol, e.g. \"-x^2+2i*x+1\"")->required();
  check->add_option("--window-schedule", windows, "Comma-separated half-widths W")->capture_default_str();
  check->add_option("--grid-schedule", grids, "Comma-separated cell counts n")->capture_default_str();
  check->add_option("--tol", tol, "Gram rejection tolerance per matrix row")->capture_default_str();
  check->add_option("--suite", suite_arg, "default, or a suite JSON file")->capture_default_str();
  check->add_option("--seed", seed, "Seed for random elements and test functions")->capture_default_str();
  check->add_option("--out", out_path, "JSONL report path (CSV summary written alongside)");
  check->add_option("--cert-out", cert_out, "Write the rejection certificate here");
  check->add_option("--id", symbol_id, "Symbol id used in reports")->capture_default_str();
  check->add_flag("--fail-fast", fail_fast, "Stop after the first rejecting track");
  check->add_flag("--polya-shortcut", polya, "Skip eigen work on Polya-certified samples");

  // threshold
  auto* threshold = app.add_subcommand("threshold", "Gorin threshold t0 of -x^2+2ix+t");

  // calculus
  auto* calc = app.add_subcommand("calculus", "Holomorphic versus Bochner route for F = x");
  int dim = 6, K = 999, count = 10;
  double L = 2;
  bool quadratic = false;
  calc->add_option("--dim", dim, "Matrix size")->capture_default_str();
  calc->add_option("--L", L, "Spectral bound L")->capture_default_str();
  calc->add_option("--K", K, "Odd truncation of the triangle measure")->capture_default_str();
  calc->add_option("--seed", seed, "First seed")->capture_default_str();
  calc->add_option("--count", count, "Number of seeded elements")->capture_default_str();
  calc->add_flag("--quadratic", quadratic, "Also run F = x^2 through the convolved measure");

  // witness
  auto* witness = app.add_subcommand("witness", "Scan scaled multipliers for ||F(sD_N)|| > |F(sD_N)|");
  int wn = 64;
  std::string scales = "0.1:3.0:0.05";
  witness->add_option("expr", expr, "Symbol")->required();
  witness->add_option("--N", wn, "Multiplier degree")->capture_default_str();
  witness->add_option("--scales", scales, "lo:hi:step")->capture_default_str();
  witness->add_option("--seed", seed, "Seed for random test functions")->capture_default_str();

  // verify-cert
  auto* verify = app.add_subcommand("verify-cert", "Replay a Gram certificate against a symbol");
  std::string cert_path;
  verify->add_option("cert", cert_path, "Certificate JSON")->required();
  verify->add_option("expr", expr, "Symbol")->required();

  std::vector<std::string> args;
  try {
    args = with_config(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "usym: %s\n", e.what());
    return 1;
  }
  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*check) {
      const SymbolExpr f = parse_or_explain(expr);
      RunConfig cfg;
      cfg.schedule = make_schedule(split_list<double>(windows, "--window-schedule"),
                                   split_list<int>(grids, "--grid-schedule"));
      cfg.suite = suite_arg == "default" ? default_suite(seed) : load_suite(suite_arg);
      cfg.pd.cert_tol = tol;
      cfg.pd.polya_shortcut = polya;
      cfg.fail_fast = fail_fast;
      cfg.seed = seed;
      const UniversalityVerdict v = run_universality(f, cfg, symbol_id);
      print_verdict(v);
      if (!out_path.empty()) report_emit({v}, out_path, csv_path_for(out_path));
      if (!cert_out.empty() && v.certificate) {
        std::ofstream cf(cert_out);
        if (!cf) throw std::runtime_error("cannot open '" + cert_out + "' for writing");
        cf << certificate_to_json(*v.certificate).dump(2) << '\n';
        if (!cf) throw std::runtime_error("write to '" + cert_out + "' failed");
      }
      return exit_code(v.outcome);
    }

    if (*threshold) {
      const auto start = std::chrono::steady_clock::now();
      const ThresholdResult r = quadratic_threshold();
      const double us =
          std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
      const double identity = std::abs(r.t0 - (2 - 1 / (r.lambda0 * r.lambda0)));
      std::printf("lambda0   %.17g\n", r.lambda0);
      std::printf("t0        %.17g\n", r.t0);
      std::printf("residual  %.3e\n", r.residual);
      std::printf("identity  |t0 - (2 - 1/lambda0^2)| = %.3e\n", identity);
      std::printf("bisection %d steps, %.1f us\n", r.iterations, us);
      return r.residual <= 1e-12 && identity <= 1e-12 ? 0 : 3;
    }

    if (*calc) {
      const auto rows = calculus_experiment(dim, L, K, seed, count, quadratic);
      bool ok = true;
      std::printf("%-6s %-12s %-12s %-12s%s\n", "seed", "route_gap", "bound", "slack",
                  quadratic ? "  quad_gap     quad_bound" : "");
      for (const auto& r : rows) {
        std::printf("%-6llu %-12.4e %-12.4e %-12.4e", static_cast<unsigned long long>(r.seed),
                    r.route_gap, r.route_bound, r.slack);
        if (quadratic) std::printf("  %-12.4e %-12.4e", r.quadratic_gap, r.quadratic_bound);
        std::printf("\n");
        ok = ok && r.route_gap <= r.route_bound && r.slack >= -1e-8 &&
             (!quadratic || r.quadratic_gap <= r.quadratic_bound);
      }
      std::printf("%s\n", ok ? "consistent" : "INCONSISTENT");
      return ok ? 0 : 2;
    }

    if (*witness) {
      const SymbolExpr f = parse_or_explain(expr);
      const WitnessResult w = witness_scan(f, wn, parse_scale_range(scales), seed);
      std::printf("symbol       %s\n", to_string(f).c_str());
      std::printf("best margin  %.6e at s = %g\n", w.best_margin, w.best_scale);
      std::printf("%s\n", w.best_margin > 1e-7 ? "positive margin: ||F(sD_N)|| > |F(sD_N)|"
                                               : "no violation found");
      return 0;
    }

    if (*verify) {
      const SymbolExpr f = parse_or_explain(expr);
      std::ifstream in(cert_path);
      if (!in) throw std::runtime_error("cannot open certificate '" + cert_path + "'");
      const GramCertificate c = certificate_from_json(Json::parse(in));
      const double form = replay_certificate(c, f);
      const double rel = std::abs(form - c.form_value) / std::max(std::abs(c.form_value), 1e-300);
      std::printf("replayed form  %.17g\nstored form    %.17g\nrelative diff  %.3e\n", form,
                  c.form_value, rel);
      const bool ok = form < 0 && rel <= 1e-10;
      std::printf("%s\n", ok ? "certificate confirmed" : "certificate NOT confirmed");
      return ok ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "usym: %s\n", e.what());
    return 1;
  }
  return 1;
}
