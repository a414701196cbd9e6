#pragma once

// JSON forms of certificates, algebra elements, measures, suites and verdicts.

#include "usym/algebras.hpp"
#include "usym/calculus.hpp"
#include "usym/harness.hpp"
#include "usym/pd_engine.hpp"

#include <json.hpp>

#include <string>

namespace usym {

using Json = nlohmann::json;

/// {base, direction, points, coeffs_re, coeffs_im, form_value}
Json certificate_to_json(const GramCertificate& c);
/// `base` defaults to 0 and `direction` to +1 when absent.
GramCertificate certificate_from_json(const Json& j);

/// {kind, norm, p?, re, im} with matrices as row arrays.
Json element_to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const Json& j);

/// {atoms: [[t, re, im], ...], tv}
Json measure_to_json(const Measure& m);
Measure measure_from_json(const Json& j);

/// {"elements": [{"id": ..., "kind": ..., ...}, ...]}
Suite suite_from_json(const Json& j);
Suite load_suite(const std::string& path);

Json equality_to_json(const EqualityReport& r);
Json verdict_to_json(const UniversalityVerdict& v);

} // namespace usym
