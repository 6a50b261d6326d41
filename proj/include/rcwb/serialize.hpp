#pragma once

// JSON (and CSV where fixed) encodings of the library's value types.
// Big integers are written as JSON numbers when they fit in 64 bits and as
// decimal strings otherwise; readers accept either. Rationals are always
// "p/q" strings.

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "rcwb/ah_system.hpp"
#include "rcwb/bundles.hpp"
#include "rcwb/certificate_verify.hpp"
#include "rcwb/certificates.hpp"
#include "rcwb/matrix_model.hpp"
#include "rcwb/sequences.hpp"

namespace rcwb::io {

using nlohmann::json;

/// Bott sets up to this size are written index by index.
inline constexpr std::size_t kExplicitBottLimit = 4096;

inline json bigint_to_json(const BigInt& value) {
  if (fits_u64(value)) return value.convert_to<std::uint64_t>();
  return value.str();
}

inline BigInt bigint_from_json(const json& j) {
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  throw Error(ErrorCode::ParseError, "expected an integer, got " + j.dump());
}

inline unsigned index_from_json(const json& j) {
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() > std::numeric_limits<unsigned>::max()) {
    throw Error(ErrorCode::ParseError, "expected a nonnegative index, got " + j.dump());
  }
  return j.get<unsigned>();
}

inline json rational_to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const json& j) {
  if (!j.is_string()) throw Error(ErrorCode::ParseError, "expected a \"p/q\" string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing key '") + key + "'");
  return j.at(key);
}

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
      throw Error(ErrorCode::ParseError, "unexpected key '" + it.key() + "'");
    }
  }
}

// --- sequences -------------------------------------------------------------

inline json to_json(const sequences::SeqTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"n", row.n},
                    {"d", row.d.str()},
                    {"l", row.l.str()},
                    {"r", row.r.str()},
                    {"s", row.s.str()},
                    {"t", row.t.str()},
                    {"u", to_string(row.u)}});
  }
  return {{"rows", rows}};
}

inline sequences::SeqTable seq_table_from_json(const json& j) {
  sequences::SeqTable table;
  for (const auto& row : require(j, "rows")) {
    table.rows.push_back({index_from_json(require(row, "n")), parse_bigint(require(row, "d").get<std::string>()),
                          parse_bigint(require(row, "l").get<std::string>()), parse_bigint(require(row, "r").get<std::string>()),
                          parse_bigint(require(row, "s").get<std::string>()), parse_bigint(require(row, "t").get<std::string>()),
                          rational_from_json(require(row, "u"))});
  }
  return table;
}

inline json to_json(const sequences::KappaInterval& k) {
  return {{"terms", k.terms}, {"lower", to_string(k.lower)}, {"upper", to_string(k.upper)}, {"width", to_string(k.width())}};
}

inline sequences::KappaInterval kappa_from_json(const json& j) {
  reject_unknown_keys(j, {"terms", "lower", "upper", "width"});
  sequences::KappaInterval k{rational_from_json(require(j, "lower")), rational_from_json(require(j, "upper")),
                             index_from_json(require(j, "terms"))};
  if (j.contains("width") && rational_from_json(j.at("width")) != k.width()) {
    throw Error(ErrorCode::ParseError, "width does not match the endpoints");
  }
  return k;
}

inline json to_json(const sequences::IdentityReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"n", c.n}, {"name", c.name}, {"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}, {"passed", c.passed}});
  }
  return {{"passed", report.passed()}, {"checks", checks}};
}

// --- bundles ---------------------------------------------------------------

inline json to_json(const bundles::KClass& c) {
  json bott = json::array();
  if (c.bott.size() <= kExplicitBottLimit) {
    for (const auto& x : c.bott.enumerate(kExplicitBottLimit)) bott.push_back(bigint_to_json(x));
  } else {
    for (const auto& iv : c.bott.intervals()) bott.push_back(json::array({bigint_to_json(iv.lo), bigint_to_json(iv.hi)}));
  }
  return {{"coords", bigint_to_json(c.coords)}, {"trivial", bigint_to_json(c.trivial)}, {"bott", bott}};
}

/// Entries of "bott" are single indices or inclusive [lo, hi] ranges.
inline bundles::KClass kclass_from_json(const json& j) {
  reject_unknown_keys(j, {"coords", "trivial", "bott"});
  bundles::KClass c;
  c.coords = bigint_from_json(require(j, "coords"));
  c.trivial = bigint_from_json(require(j, "trivial"));
  const json& bott = require(j, "bott");
  if (!bott.is_array()) throw Error(ErrorCode::ParseError, "'bott' must be an array");
  for (const auto& entry : bott) {
    if (entry.is_array()) {
      if (entry.size() != 2) throw Error(ErrorCode::ParseError, "Bott range must be [lo, hi]");
      c.bott.insert(bigint_from_json(entry[0]), bigint_from_json(entry[1]));
    } else {
      const BigInt x = bigint_from_json(entry);
      if (c.bott.contains(x)) throw Error(ErrorCode::OverlappingBott, "repeated Bott coordinate " + x.str());
      c.bott.insert(x);
    }
  }
  c.validate();
  return c;
}

inline json to_json(const bundles::CompareVerdict& v) {
  json out = {{"verdict", std::string(bundles::to_string(v.verdict))},
              {"reason", v.reason},
              {"relation", std::string(bundles::kComparisonRelation)}};
  if (v.obstruction) {
    out["obstruction"] = {{"required_rank", v.obstruction->required_rank.str()},
                          {"available_rank", v.obstruction->available_rank.str()}};
  }
  return out;
}

// --- AH systems ------------------------------------------------------------

inline ah::Preset preset_from_string(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (name == "paper-a") return ah::Preset::PaperA;
  if (name == "paper-b") return ah::Preset::PaperB;
  if (name == "custom") return ah::Preset::Custom;
  throw Error(ErrorCode::ParseError, "unknown system '" + name + "'");
}

inline json to_json(const ah::StageClassPair& x) {
  json classes = json::array();
  for (const auto& c : x.classes) classes.push_back(to_json(c));
  return {{"stage", x.stage},
          {"matrix_size", bigint_to_json(x.matrix_size)},
          {"amplification", bigint_to_json(x.amplification)},
          {"classes", classes}};
}

inline json to_json(const ah::DiagonalSystemSpec& spec) {
  json out = {{"preset", ah::to_string(spec.preset())}};
  if (spec.preset() != ah::Preset::Custom) return out;
  json stages = json::array();
  for (const auto& st : spec.custom_stages()) {
    json coords = json::array();
    for (const auto& c : st.coords) coords.push_back(bigint_to_json(c));
    stages.push_back({{"n", st.n}, {"size", bigint_to_json(st.matrix_size)}, {"coords", coords}});
  }
  json maps = json::array();
  for (const auto& m : spec.custom_maps()) {
    maps.push_back({{"stage", m.stage},
                    {"target", m.target},
                    {"source", m.source},
                    {"pullbacks", bigint_to_json(m.pullbacks)},
                    {"evals", bigint_to_json(m.point_evals)}});
  }
  out["stages"] = stages;
  out["maps"] = maps;
  return out;
}

/// {"preset": "paper-A"} or {"preset": "custom", "stages": [...], "maps": [...]}.
inline ah::DiagonalSystemSpec system_from_json(const json& j) {
  const ah::Preset preset = preset_from_string(require(j, "preset").get<std::string>());
  if (preset == ah::Preset::PaperA) return ah::DiagonalSystemSpec::paper_a();
  if (preset == ah::Preset::PaperB) return ah::DiagonalSystemSpec::paper_b();
  std::vector<ah::StageDescriptor> stages;
  for (const auto& st : require(j, "stages")) {
    ah::StageDescriptor d;
    d.n = st.contains("n") ? index_from_json(st.at("n")) : static_cast<unsigned>(stages.size());
    d.matrix_size = bigint_from_json(require(st, "size"));
    for (const auto& c : require(st, "coords")) d.coords.push_back(bigint_from_json(c));
    stages.push_back(std::move(d));
  }
  std::vector<ah::MapEntry> maps;
  for (const auto& m : require(j, "maps")) {
    maps.push_back({index_from_json(require(m, "stage")), index_from_json(require(m, "target")),
                    index_from_json(require(m, "source")), bigint_from_json(require(m, "pullbacks")),
                    bigint_from_json(require(m, "evals"))});
  }
  return ah::DiagonalSystemSpec::custom(std::move(stages), std::move(maps));
}

inline json to_json(const ah::TrackReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"system", c.system}, {"track", c.track}, {"stage", c.stage}, {"passed", c.passed}});
  }
  return {{"passed", report.passed()}, {"checks", checks}};
}

// --- certificates ----------------------------------------------------------

inline json to_json(const certificates::RcCertificate& cert) {
  json window = json::array();
  for (unsigned m : cert.window) window.push_back(m);
  return {{"system", ah::to_string(cert.system)},
          {"rho", to_string(cert.rho)},
          {"kappa_lb", to_string(cert.kappa_lb)},
          {"kappa_ub", to_string(cert.kappa_ub)},
          {"terms", cert.terms},
          {"n", cert.n},
          {"M", bigint_to_json(cert.M)},
          {"window", window}};
}

/// Reads exactly the keys written by to_json. The tail argument is part of
/// every certificate in this format, so monotone_tail is set.
inline certificates::RcCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "certificate must be a JSON object");
  reject_unknown_keys(j, {"system", "rho", "kappa_lb", "kappa_ub", "terms", "n", "M", "window"});
  certificates::RcCertificate cert;
  const json& system = require(j, "system");
  if (!system.is_string()) throw Error(ErrorCode::ParseError, "'system' must be a string");
  cert.system = preset_from_string(system.get<std::string>());
  cert.rho = rational_from_json(require(j, "rho"));
  cert.kappa_lb = rational_from_json(require(j, "kappa_lb"));
  cert.kappa_ub = rational_from_json(require(j, "kappa_ub"));
  cert.terms = index_from_json(require(j, "terms"));
  cert.n = index_from_json(require(j, "n"));
  cert.M = bigint_from_json(require(j, "M"));
  const json& window = require(j, "window");
  if (!window.is_array()) throw Error(ErrorCode::ParseError, "'window' must be an array");
  for (const auto& m : window) cert.window.push_back(index_from_json(m));
  cert.monotone_tail = true;
  return cert;
}

inline json to_json(const certificates::RcInterval& rc) {
  return {{"lower", to_string(rc.lower)}, {"upper", to_string(rc.upper)}, {"provenance", rc.provenance}};
}

inline certificates::RcInterval rc_interval_from_json(const json& j) {
  reject_unknown_keys(j, {"lower", "upper", "provenance"});
  certificates::RcInterval rc{rational_from_json(require(j, "lower")), rational_from_json(require(j, "upper")), {}};
  if (j.contains("provenance")) rc.provenance = j.at("provenance").get<std::vector<std::string>>();
  return rc;
}

inline json to_json(const certificates::VerifyReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    json entry = {{"step", s.step}, {"check", s.check}, {"passed", s.passed}};
    if (s.stage) entry["m"] = *s.stage;
    if (!s.detail.empty()) entry["detail"] = s.detail;
    steps.push_back(entry);
  }
  return {{"verified", report.verified()}, {"steps", steps}};
}

// --- matrix model ----------------------------------------------------------

inline json to_json(const matrix::SuiteReport& report) {
  json checks = json::object();
  for (const auto& [name, c] : report.checks) {
    checks[name] = {{"trials", c.trials}, {"passes", c.passes}, {"failures", c.failures}, {"failing_seeds", c.failing_seeds}};
  }
  json probes = json::array();
  for (const auto& p : report.probes) {
    probes.push_back({{"eps", p.eps}, {"samples", p.samples}, {"mean_delta", p.mean_delta}, {"min_delta", p.min_delta}});
  }
  return {{"checks", checks}, {"total_failures", report.total_failures()}, {"delta_probes", probes}};
}

}  // namespace rcwb::io
