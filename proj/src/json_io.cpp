#include "usym/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace usym {

namespace {

Json complex_rows(const Eigen::MatrixXcd& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(row);
  }
  return rows;
}

Json complex_list(const Eigen::VectorXcd& v, bool imag) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(imag ? v(k).imag() : v(k).real());
  return out;
}

Eigen::VectorXcd read_list(const Json& j, const char* re_key, const char* im_key) {
  const auto re = j.at(re_key).get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (j.contains(im_key)) im = j.at(im_key).get<std::vector<double>>();
  if (im.size() != re.size()) throw std::invalid_argument("element: re/im length mismatch");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = Complex(re[k], im[k]);
  return v;
}

Eigen::MatrixXcd read_matrix(const Json& j) {
  const auto re = j.at("re").get<std::vector<std::vector<double>>>();
  const std::size_t n = re.size();
  std::vector<std::vector<double>> im(n, std::vector<double>(n, 0.0));
  if (j.contains("im")) im = j.at("im").get<std::vector<std::vector<double>>>();
  if (im.size() != n) throw std::invalid_argument("element: re/im row count mismatch");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (re[r].size() != n || im[r].size() != n) throw std::invalid_argument("element: matrix not square");
    for (std::size_t c = 0; c < n; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re[r][c], im[r][c]);
  }
  return m;
}

NormKind norm_from_string(const std::string& s) {
  if (s == "op_l1") return {NormTag::op_l1, 0};
  if (s == "op_l2") return {NormTag::op_l2, 0};
  if (s == "op_linf") return {NormTag::op_linf, 0};
  throw std::invalid_argument("element: unknown norm '" + s + "'");
}

Json window_json(const Window& w) { return Json{{"W", w.half_width}, {"n", w.cells}}; }

Json norm_value_json(const NormValue& v) {
  return Json{{"lower", v.lower},
              {"upper", v.upper},
              {"exact", v.exact},
              {"inconclusive", v.inconclusive},
              {"witness", v.witness}};
}

const char* pd_outcome(PdVerdict::Outcome o) {
  switch (o) {
    case PdVerdict::Outcome::accept_up_to: return "accept_up_to";
    case PdVerdict::Outcome::reject: return "reject";
    case PdVerdict::Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* pd_stage(PdVerdict::Stage s) {
  switch (s) {
    case PdVerdict::Stage::none: return "";
    case PdVerdict::Stage::shape: return "shape";
    case PdVerdict::Stage::gram: return "gram";
  }
  return "?";
}

} // namespace

Json certificate_to_json(const GramCertificate& c) {
  Json re = Json::array(), im = Json::array();
  for (const auto& v : c.coeffs) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return Json{{"base", c.base},
              {"direction", c.direction},
              {"points", c.points},
              {"coeffs_re", re},
              {"coeffs_im", im},
              {"form_value", c.form_value}};
}

GramCertificate certificate_from_json(const Json& j) {
  GramCertificate c;
  c.base = j.value("base", 0.0);
  c.direction = j.value("direction", 1);
  c.points = j.at("points").get<std::vector<double>>();
  const auto re = j.at("coeffs_re").get<std::vector<double>>();
  const auto im = j.at("coeffs_im").get<std::vector<double>>();
  if (re.size() != im.size() || re.size() != c.points.size())
    throw std::invalid_argument("certificate: points, coeffs_re and coeffs_im differ in length");
  for (std::size_t k = 0; k < re.size(); ++k) c.coeffs.emplace_back(re[k], im[k]);
  c.form_value = j.at("form_value").get<double>();
  return c;
}

Json element_to_json(const AlgebraElement& a) {
  Json j;
  j["norm"] = to_string(a.norm);
  switch (a.kind) {
    case AlgebraElement::Kind::diag_lp:
      j["kind"] = "diag_lp";
      j["p"] = a.norm.tag == NormTag::op_l1 ? Json(1) : a.norm.tag == NormTag::op_l2 ? Json(2) : Json("inf");
      j["re"] = complex_list(a.values, false);
      j["im"] = complex_list(a.values, true);
      break;
    case AlgebraElement::Kind::multiplier:
      j["kind"] = "multiplier";
      j["re"] = complex_list(a.values, false);
      j["im"] = complex_list(a.values, true);
      break;
    case AlgebraElement::Kind::self_adjoint_l2:
      j["kind"] = "self_adjoint";
      j["re"] = complex_rows(a.matrix, false);
      j["im"] = complex_rows(a.matrix, true);
      break;
    case AlgebraElement::Kind::general:
      j["kind"] = "general";
      j["re"] = complex_rows(a.matrix, false);
      j["im"] = complex_rows(a.matrix, true);
      break;
  }
  return j;
}

AlgebraElement element_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "diag_lp") {
    const Json& p = j.at("p");
    int pv = 0;
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") throw std::invalid_argument("element: p must be 1, 2 or \"inf\"");
    } else {
      pv = p.get<int>();
    }
    return AlgebraElement::diag_lp(pv, read_list(j, "re", "im"));
  }
  if (kind == "multiplier") return AlgebraElement::multiplier(read_list(j, "re", "im"));
  if (kind == "self_adjoint") return AlgebraElement::self_adjoint(read_matrix(j));
  if (kind == "general") return AlgebraElement::general(read_matrix(j), norm_from_string(j.at("norm")));
  throw std::invalid_argument("element: unknown kind '" + kind + "'");
}

Json measure_to_json(const Measure& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) atoms.push_back(Json::array({a.t, a.w.real(), a.w.imag()}));
  return Json{{"atoms", atoms}, {"tv", m.tv()}};
}

Measure measure_from_json(const Json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    const auto v = a.get<std::vector<double>>();
    if (v.size() != 3) throw std::invalid_argument("measure: atoms are [t, re, im]");
    atoms.push_back({v[0], Complex(v[1], v[2])});
  }
  return Measure(std::move(atoms));
}

Suite suite_from_json(const Json& j) {
  Suite s;
  for (const auto& e : j.at("elements")) s.push_back({e.at("id").get<std::string>(), element_from_json(e)});
  if (s.empty()) throw std::invalid_argument("suite: no elements");
  return s;
}

Suite load_suite(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open suite file '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::exception& e) {
    throw std::runtime_error("suite file '" + path + "': " + e.what());
  }
  return suite_from_json(j);
}

Json equality_to_json(const EqualityReport& r) {
  return Json{{"symbol", r.symbol_id}, {"element", r.element_id}, {"norm", norm_value_json(r.norm)},
              {"rho", r.rho},          {"gap", r.gap},            {"tol", r.tol},
              {"passed", r.passed},    {"inconclusive", r.inconclusive}, {"note", r.note}};
}

Json verdict_to_json(const UniversalityVerdict& v) {
  Json j;
  j["schema"] = "usym.report.v1";
  j["type"] = "verdict";
  j["symbol"] = v.symbol_id;
  j["expr"] = v.expr;
  j["outcome"] = to_string(v.outcome);
  j["stage"] = v.stage;
  j["reason"] = v.reason;
  j["accepted_up_to"] = window_json(v.accepted_up_to);

  Json shape{{"connected", v.shape.connected},
             {"strictly_monotone_off_min", v.shape.strictly_monotone_off_min},
             {"growth_witnessed", v.shape.growth_witnessed},
             {"max_abs_first", v.shape.max_abs_first},
             {"max_abs_last", v.shape.max_abs_last},
             {"rejected", v.shape.rejected()}};
  if (v.shape.bounded_exponential) {
    const auto& e = *v.shape.bounded_exponential;
    shape["bounded_exponential"] = Json{{"c_re", e.c.real()}, {"c_im", e.c.imag()}, {"alpha", e.alpha}};
  } else {
    shape["bounded_exponential"] = nullptr;
  }
  Json comps = Json::array();
  for (const auto& w : v.shape.windows) comps.push_back(w.components.size());
  shape["min_set_components"] = comps;
  j["shape"] = shape;

  if (v.pd) {
    Json pd{{"outcome", pd_outcome(v.pd->outcome)}, {"stage", pd_stage(v.pd->stage)}, {"reason", v.pd->reason}};
    pd["rejecting_window"] = v.pd->rejecting_window ? window_json(*v.pd->rejecting_window) : Json(nullptr);
    Json stages = Json::array();
    for (const auto& s : v.pd->stages) {
      stages.push_back(Json{{"W", s.window.half_width},
                            {"n", s.window.cells},
                            {"resolution", s.resolution},
                            {"orientation", s.orientation == Orientation::left ? "left" : "right"},
                            {"tie", s.tie},
                            {"min_eig", s.min_eig},
                            {"threshold", s.threshold},
                            {"eigen_skipped", s.eigen_skipped},
                            {"ineq_violation", s.ineq_violation},
                            {"char_violations", s.char_violations},
                            {"polya", s.polya},
                            {"passed", s.passed}});
    }
    pd["stages"] = stages;
    j["pd"] = pd;
  } else {
    j["pd"] = nullptr;
  }
  j["certificate"] = v.certificate ? certificate_to_json(*v.certificate) : Json(nullptr);
  Json eq = Json::array();
  for (const auto& r : v.equality) eq.push_back(equality_to_json(r));
  j["equality"] = eq;
  return j;
}

} // namespace usym
