// Property suites; runs standalone (the acceptance binary calls it too).

#include "usym/calculus.hpp"
#include "usym/harness.hpp"
#include "usym/json_io.hpp"
#include "usym/pd_engine.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

using namespace usym;

namespace {

SymbolExpr random_polynomial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Complex> c(2 + rng() % 4);
  for (auto& v : c) v = Complex(u(rng), u(rng));
  return SymbolExpr::polynomial(c);
}

ToeplitzSamples sample_transform(const Measure& mu, double h, int n) {
  Eigen::VectorXcd row(n + 1);
  for (int j = 0; j <= n; ++j) row(j) = mu.transform(j * h);
  return ToeplitzSamples::from_samples(h, row);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("Gram matrices are exactly Hermitian") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const SymbolExpr f = trial % 4 == 3 ? SymbolExpr::cexp(Complex(u(rng), u(rng)), u(rng)) : random_polynomial(rng);
    double lo = u(rng), hi = u(rng);
    if (hi < lo) std::swap(lo, hi);
    if (hi - lo < 0.1) hi = lo + 0.1;
    const int n = 8 + static_cast<int>(rng() % 60);
    for (auto o : {Orientation::left, Orientation::right}) {
      const auto t = normalize_at(f, lo, hi, n, o);
      const auto g = gram_matrix(t);
      CHECK(g.rows() == n + 1);
      CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(t.at(0) == Complex(1, 0));
    }
  }
}

TEST_CASE("inequality filter is non-negative on PD mixtures") {
  {
    Eigen::VectorXcd row(33);
    const double h = 0.1;
    for (int j = 0; j <= 32; ++j) row(j) = 0.5 * std::exp(Complex(0, j * h)) + 0.5 * std::exp(Complex(0, -2 * j * h));
    CHECK(necessary_inequality_check(ToeplitzSamples::from_samples(h, row)) <= 1e-12);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1), freq(-5, 5);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Atom> atoms;
    double total = 0;
    const int k = 1 + static_cast<int>(rng() % 6);
    for (int j = 0; j < k; ++j) {
      const double w = u(rng) + 1e-3;
      atoms.push_back({freq(rng), w});
      total += w;
    }
    for (auto& a : atoms) a.w /= total;
    const auto t = sample_transform(Measure(atoms), 0.05 + u(rng), 24);
    CHECK(necessary_inequality_check(t) <= 1e-12);
    CHECK(gram_min_eig(t, false).min_eig >= -1e-10);
  }
  // triangle measure, normalised to mass one
  const Measure tri = linear_symbol_measure(2, 99);
  const auto t = sample_transform(tri.scaled(1 / tri.tv()), 0.125, 32);
  CHECK(necessary_inequality_check(t) <= 1e-12);
}

TEST_CASE("character check on exp(i a x), cos and the triangle wave") {
  for (double alpha : {-1.7, 0.0, 0.4, 3.0}) {
    Eigen::VectorXcd row(41);
    for (int j = 0; j <= 40; ++j) row(j) = std::exp(Complex(0, alpha * j * 0.15));
    CHECK(character_check(ToeplitzSamples::from_samples(0.15, row)).empty());
  }
  {
    const double h = std::numbers::pi / 8;
    Eigen::VectorXcd row(33);
    for (int j = 0; j <= 32; ++j) row(j) = std::cos(j * h);
    CHECK(character_check(ToeplitzSamples::from_samples(h, row)).empty());
  }
  {
    // 1 - x/L on [0, 2L], extended by psi(x + 2L) = -psi(x)
    const double L = 2, h = L / 8;
    Eigen::VectorXcd row(33);
    for (int j = 0; j <= 32; ++j) {
      const double x = j * h;
      const double r = std::fmod(x, 2 * L);
      const double s = static_cast<int>(std::floor(x / (2 * L))) % 2 == 0 ? 1 : -1;
      row(j) = s * (1 - r / L);
    }
    CHECK(character_check(ToeplitzSamples::from_samples(h, row)).empty());
    // the F = x normalisation on [-L, L] gives the first period exactly
    const auto t = normalize_at(parse_symbol("x"), -L, L, 16, Orientation::right);
    for (int j = 0; j <= 16; ++j) CHECK(std::abs(t.first_row(j) - row(j)) < 1e-15);
  }
  {
    // a plateau of |psi| = 1 that is not a character is caught
    Eigen::VectorXcd row(17);
    for (int j = 0; j <= 16; ++j) row(j) = j == 4 ? Complex(1, 0) : Complex(std::exp(-0.1 * j), 0);
    CHECK_FALSE(character_check(ToeplitzSamples::from_samples(0.1, row)).empty());
  }
}

TEST_CASE("closure variants keep the verdict") {
  RunConfig cfg;
  cfg.schedule = {{1, 32}, {2, 64}, {4, 128}};
  for (const char* text : {"x", "x^2", "x^2+1", "exp(2i*x)"}) {
    const SymbolExpr f = parse_symbol(text);
    const Outcome base = run_universality(f, cfg).outcome;
    CHECK(base == Outcome::accept_up_to);
    for (const auto& g : closure_variants(f, 2, Complex(2, -1), 2.0, 0.5)) {
      CAPTURE(text);
      CAPTURE(to_string(g));
      CHECK(run_universality(g, cfg).outcome == base);
    }
  }
}

TEST_CASE("JSONL is byte-identical under a fixed seed") {
  RunConfig cfg;
  cfg.schedule = {{0.5, 32}, {1, 64}};
  cfg.seed = 1234;
  cfg.suite = default_suite(cfg.seed);
  const auto dir = std::filesystem::temp_directory_path() / "usym_props";
  std::filesystem::create_directories(dir);
  std::string first;
  for (int run = 0; run < 2; ++run) {
    std::vector<UniversalityVerdict> vs;
    for (const char* text : {"x^2+1", "-x^2+2i*x+1.99", "x^2-1"}) vs.push_back(run_universality(parse_symbol(text), cfg, text));
    const auto path = dir / ("run" + std::to_string(run) + ".jsonl");
    report_emit(vs, path.string());
    const std::string bytes = read_file(path);
    CHECK_FALSE(bytes.empty());
    if (run == 0) first = bytes;
    else CHECK(bytes == first);
  }
  std::filesystem::remove_all(dir);
}
