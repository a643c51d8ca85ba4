#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "topsing/invariants.hpp"
#include "topsing/jets.hpp"
#include "topsing/mld.hpp"
#include "topsing/pairs.hpp"
#include "topsing/parser.hpp"

namespace topsing {

using Json = nlohmann::json;  // std::map objects, so keys serialize sorted

inline constexpr int kSchemaVersion = 1;

inline Json order_json(const Order& o) {
  if (o.is_finite()) return o.value();
  return o.str();
}

inline Json optional_order_json(const std::optional<Order>& o) { return o ? order_json(*o) : Json(nullptr); }

inline Json chain_json(const InvariantChain& c) {
  Json j;
  j["mult"] = c.mult;
  j["tau"] = c.tau;
  j["m2"] = optional_order_json(c.m2);
  j["tau2"] = c.tau2 ? Json(*c.tau2) : Json(nullptr);
  j["mu3"] = optional_order_json(c.mu3);
  j["mu4"] = optional_order_json(c.mu4);
  j["m3"] = optional_order_json(c.m3);
  return j;
}

inline Json prediction_json(const MldPrediction& p) {
  Json j;
  if (p.value) {
    j["value"] = *p.value;
  } else {
    j["at_most"] = p.at_most.value_or(0);
    j["minus_infinity_possible"] = p.minus_infinity_possible;
  }
  return j;
}

inline Json colength_json(const Colength& c) {
  return Json{{"value", c.value}, {"exact", c.exact}, {"cap", c.cap}};
}

inline Json report_json(const SingularityReport& r) {
  Json j;
  j["dim"] = r.d;
  j["class"] = class_name(r.cls);
  j["label"] = r.label();
  j["is_top"] = r.is_top;
  j["predicted_mld_hat"] = prediction_json(r.predicted);
  j["chain"] = r.chain ? chain_json(*r.chain) : Json(nullptr);
  j["duval"] = r.duval ? Json(r.duval->str()) : Json(nullptr);
  j["milnor"] = r.milnor ? colength_json(*r.milnor) : Json(nullptr);
  j["reason"] = r.reason.empty() ? Json(nullptr) : Json(r.reason);
  j["caveats"] = r.caveats;
  return j;
}

inline Json estimate_json(const MldEstimate& e, bool timing) {
  Json j;
  j["d"] = e.d;
  j["m_max"] = e.m_max;
  Json levels = Json::array();
  for (const auto& l : e.levels) {
    Json lj;
    lj["m"] = l.m;
    lj["dim"] = l.dim ? Json(*l.dim) : Json(nullptr);
    lj["value"] = l.value ? Json(*l.value) : Json(nullptr);
    lj["order"] = l.order.empty() ? Json(nullptr) : Json(l.order);
    lj["expected_top_dim"] = l.m * e.d + 1;
    if (l.error) lj["error"] = *l.error;
    if (timing) lj["seconds"] = l.seconds;
    levels.push_back(lj);
  }
  j["levels"] = levels;
  j["min_value"] = e.min_value ? Json(*e.min_value) : Json(nullptr);
  j["top_certified_up_to_m_max"] = e.top_certified_up_to_m_max;
  j["minus_infinity_flag"] = e.minus_infinity_flag;
  j["levels_truncated"] = e.levels_truncated;
  j["annotation"] = e.annotation ? Json(*e.annotation) : Json(nullptr);
  return j;
}

inline std::string jet_polynomial_text(const SparseSeries& g, std::size_t base_vars) {
  return format_polynomial(g, [base_vars](std::size_t i) { return origin_jet_name(base_vars, i); });
}

inline Json jet_ideal_json(const JetIdeal& ideal) {
  Json j;
  j["level"] = ideal.level;
  j["base_vars"] = ideal.base_vars;
  j["num_jet_vars"] = ideal.num_vars();
  Json gens = Json::array();
  for (std::size_t k = 0; k < ideal.generators.size(); ++k)
    gens.push_back(Json{{"n", ideal.generator_levels[k]},
                        {"equation", jet_polynomial_text(ideal.generators[k], ideal.base_vars)}});
  j["generators"] = gens;
  return j;
}

inline Json divisor_json(const DivisorSpec& b) {
  Json comps = Json::array();
  for (const auto& c : b.components)
    comps.push_back(Json{{"coeff", to_string(c.coeff)}, {"equation", format_polynomial(c.equation)}});
  return Json{{"components", comps}};
}

inline Json pair_json(const PairVerdict& v) {
  Json j;
  j["ambient_smooth"] = v.ambient_smooth;
  j["dim"] = v.d;
  j["multiplicity"] = to_string(v.multiplicity);
  j["top"] = v.top;
  j["value"] = v.value ? Json(to_string(*v.value)) : Json(nullptr);
  j["witness"] = v.witness.empty() ? Json(nullptr) : Json(v.witness);
  j["reason"] = v.reason.empty() ? Json(nullptr) : Json(v.reason);
  j["mld_equals_d"] = v.mld_equals_d;
  j["mld_equals_d_minus_one"] = v.mld_equals_d_minus_one;
  j["singularity"] = v.report ? report_json(*v.report) : Json(nullptr);
  return j;
}

inline Json audit_json(const AuditResult& a, unsigned bound) {
  return Json{{"minimum", to_string(a.minimum)},
              {"argmin", a.argmin.weights},
              {"weight_bound", bound},
              {"enumerated", a.enumerated}};
}

inline Json config_json(const AnalysisOptions& o, unsigned m_max) {
  return Json{{"precision", o.precision.value()},
              {"seed", o.seed},
              {"trials", o.trials},
              {"colength_cap", o.colength_cap},
              {"spair_degree_cap", o.limits.spair_degree_cap},
              {"pair_queue_cap", o.limits.pair_queue_cap},
              {"m_max", m_max}};
}

/// Deterministic serialization: sorted keys, two-space indent, final newline.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// ---- text rendering ----

inline std::string chain_text(const InvariantChain& c) {
  auto o = [](const std::optional<Order>& x) { return x ? x->str() : std::string("-"); };
  std::ostringstream os;
  os << "mult=" << c.mult << " tau=" << c.tau << " m2=" << o(c.m2)
     << " tau2=" << (c.tau2 ? std::to_string(*c.tau2) : "-") << " mu3=" << o(c.mu3) << " mu4=" << o(c.mu4)
     << " m3=" << o(c.m3);
  return os.str();
}

inline std::string report_text(const SingularityReport& r) {
  std::ostringstream os;
  os << "class: " << r.label() << "\n";
  os << "is_top: " << (r.is_top ? "true" : "false") << "\n";
  os << "predicted mld: " << r.predicted.str() << "\n";
  if (r.chain) os << "chain: " << chain_text(*r.chain) << "\n";
  if (r.milnor) os << "milnor number: " << r.milnor->str() << "\n";
  for (const auto& c : r.caveats) os << "caveat: " << c << "\n";
  return os.str();
}

inline std::string estimate_text(const MldEstimate& e, bool timing) {
  std::ostringstream os;
  for (const auto& l : e.levels) {
    os << "m=" << l.m << ": ";
    if (l.dim)
      os << "dim=" << *l.dim << " value=" << *l.value << " (" << l.order << ")";
    else
      os << "error: " << l.error.value_or("unknown");
    if (timing) os << " " << l.seconds << "s";
    os << "\n";
  }
  os << "min value: " << (e.min_value ? std::to_string(*e.min_value) : "none") << "\n";
  os << "top certified up to m=" << e.m_max << ": " << (e.top_certified_up_to_m_max ? "true" : "false") << "\n";
  os << "minus infinity flag: " << (e.minus_infinity_flag ? "true" : "false") << "\n";
  if (e.annotation) os << "note: " << *e.annotation << "\n";
  return os.str();
}

inline std::string pair_text(const PairVerdict& v) {
  std::ostringstream os;
  os << "multiplicity: " << to_string(v.multiplicity) << "\n";
  os << "mld >= d-1: " << (v.top ? "yes" : "no") << "\n";
  if (v.value) os << "value: " << to_string(*v.value) << "\n";
  if (!v.witness.empty()) os << "witness: " << v.witness << "\n";
  if (!v.reason.empty()) os << "reason: " << v.reason << "\n";
  if (v.report) os << "singularity: " << v.report->label() << "\n";
  return os.str();
}

inline std::string audit_text(const AuditResult& a) {
  std::ostringstream os;
  os << "minimum: " << to_string(a.minimum) << "\n";
  os << "argmin weights:";
  for (unsigned w : a.argmin.weights) os << " " << w;
  os << "\nenumerated: " << a.enumerated << "\n";
  return os.str();
}

// ---- fixtures ----

/// fixtures/<name>/input.txt holds the equation and a "# dim: d" directive;
/// expected.json is the golden classify report.
struct Fixture {
  std::string name;
  std::string equation;
  unsigned dim = 0;
  std::filesystem::path directory;

  SparseSeries polynomial() const { return parse_polynomial(equation, dim + 1); }
  std::filesystem::path expected_path() const { return directory / "expected.json"; }
};

inline Fixture parse_fixture_input(const std::string& name, const std::string& content) {
  Fixture f;
  f.name = name;
  std::istringstream in(content);
  std::string line;
  bool have_dim = false;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::string body = line.substr(first);
    if (body[0] == '#') {
      std::string rest = body.substr(1);
      auto k = rest.find("dim:");
      if (k != std::string::npos) {
        try {
          f.dim = static_cast<unsigned>(std::stoul(rest.substr(k + 4)));
          have_dim = true;
        } catch (const std::exception&) {
          throw UsageError("fixture " + name + ": malformed dim directive");
        }
      }
      continue;
    }
    if (!f.equation.empty()) f.equation += " ";
    f.equation += body;
  }
  while (!f.equation.empty() && (f.equation.back() == '\r' || f.equation.back() == ' ')) f.equation.pop_back();
  if (!have_dim) throw UsageError("fixture " + name + ": missing '# dim: d' directive");
  if (f.equation.empty()) throw UsageError("fixture " + name + ": missing equation");
  return f;
}

inline std::vector<Fixture> load_fixtures(const std::filesystem::path& root) {
  std::vector<Fixture> out;
  if (!std::filesystem::is_directory(root)) throw UsageError("fixture directory not found: " + root.string());
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    auto input = entry.path() / "input.txt";
    if (!std::filesystem::exists(input)) continue;
    std::ifstream in(input);
    std::stringstream buf;
    buf << in.rdbuf();
    Fixture f = parse_fixture_input(entry.path().filename().string(), buf.str());
    f.directory = entry.path();
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
  return out;
}

inline Json classify_document(const std::string& equation, unsigned d, const SingularityReport& r,
                              const AnalysisOptions& opts, unsigned m_max) {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["mode"] = "classify";
  doc["input"] = Json{{"equation", equation}, {"dim", d}};
  doc["config"] = config_json(opts, m_max);
  doc["report"] = report_json(r);
  return doc;
}

}  // namespace topsing
