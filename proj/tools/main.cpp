#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "topsing/report.hpp"
#include "topsing/selftest.hpp"

namespace {

using namespace topsing;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;  // selftest found a mismatch
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct Config {
  std::string equation;
  unsigned dim = 0;
  unsigned precision = 12;
  unsigned m_max = 5;
  unsigned m = 3;
  std::uint64_t seed = 0;
  unsigned trials = 3;
  unsigned degree_cap = 14;
  unsigned spair_degree_cap = GbLimits{}.spair_degree_cap;
  std::size_t pair_queue_cap = GbLimits{}.pair_queue_cap;
  std::string format = "text";
  bool timing = false;
  unsigned smooth_dim = 0;
  std::string divisor;
  unsigned bound = 4;

  AnalysisOptions analysis() const {
    AnalysisOptions o;
    o.precision = Precision(precision);
    o.seed = seed;
    o.trials = trials;
    o.colength_cap = degree_cap;
    o.limits.spair_degree_cap = spair_degree_cap;
    o.limits.pair_queue_cap = pair_queue_cap;
    o.validate();
    return o;
  }

  JetDimensionOptions jet_options() const {
    JetDimensionOptions o;
    o.limits.spair_degree_cap = spair_degree_cap;
    o.limits.pair_queue_cap = pair_queue_cap;
    return o;
  }

  bool json() const { return format == "json"; }

  SparseSeries hypersurface() const {
    if (dim == 0) throw UsageError("--dim must be at least 1");
    if (equation.empty()) throw UsageError("--equation is required");
    return parse_polynomial(equation, dim + 1);
  }

  DivisorSpec boundary(std::size_t num_vars) const {
    if (divisor.empty()) return {};
    std::string text = divisor;
    if (text[0] == '@') {
      std::ifstream in(text.substr(1));
      if (!in) throw UsageError("cannot read divisor file " + text.substr(1));
      std::stringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    return parse_divisor_json(text, num_vars);
  }
};

void add_equation_options(CLI::App* sub, Config& c) {
  sub->add_option("-e,--equation", c.equation, "hypersurface equation in x1..x(d+1)");
  sub->add_option("-d,--dim", c.dim, "dimension d of the germ");
}

void add_common_options(CLI::App* sub, Config& c) {
  sub->add_option("--precision", c.precision, "series truncation order")->capture_default_str();
  sub->add_option("--seed", c.seed, "seed for random coordinate choices")->capture_default_str();
  sub->add_option("--trials", c.trials, "random sections per verdict")->capture_default_str();
  sub->add_option("--degree-cap", c.degree_cap, "degree cap for Milnor-number colengths")->capture_default_str();
  sub->add_option("--spair-degree-cap", c.spair_degree_cap, "Groebner S-pair degree cap")->capture_default_str();
  sub->add_option("--pair-queue-cap", c.pair_queue_cap, "Groebner pair queue cap")->capture_default_str();
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  sub->add_flag("--timing", c.timing, "include wall-clock timings in the report");
}

Json base_document(const std::string& mode) {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["mode"] = mode;
  return doc;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_classify(const Config& c, std::ostream& out) {
  auto start = std::chrono::steady_clock::now();
  AnalysisOptions opts = c.analysis();
  SparseSeries f = c.hypersurface();
  SingularityReport r = classify(f, c.dim, opts);
  if (c.json()) {
    Json doc = classify_document(c.equation, c.dim, r, opts, c.m_max);
    if (c.timing) doc["timing"] = Json{{"seconds", seconds_since(start)}};
    out << dump_json(doc);
  } else {
    out << report_text(r);
    if (c.timing) out << "seconds: " << seconds_since(start) << "\n";
  }
  return kExitOk;
}

int cmd_jets(const Config& c, std::ostream& out) {
  auto start = std::chrono::steady_clock::now();
  if (c.m == 0) throw UsageError("--m must be at least 1");
  AnalysisOptions opts = c.analysis();
  SparseSeries f = c.hypersurface();
  JetIdeal ideal = jet_ideal_at_origin({f}, c.m);
  std::vector<JetLevel> levels;
  bool capped = false;
  for (unsigned m = 1; m <= c.m; ++m) {
    levels.push_back(jet_dimension(f, c.dim, m, c.jet_options()));
    capped = capped || levels.back().error.has_value();
  }
  if (c.json()) {
    Json doc = base_document("jets");
    doc["input"] = Json{{"equation", c.equation}, {"dim", c.dim}};
    doc["config"] = config_json(opts, c.m);
    doc["jet_ideal"] = jet_ideal_json(ideal);
    Json lv = Json::array();
    for (const auto& l : levels) {
      Json j;
      j["m"] = l.m;
      j["dim"] = l.dim ? Json(*l.dim) : Json(nullptr);
      j["expected_top_dim"] = l.m * c.dim + 1;
      j["order"] = l.order.empty() ? Json(nullptr) : Json(l.order);
      if (l.error) j["error"] = *l.error;
      if (c.timing) j["seconds"] = l.seconds;
      lv.push_back(j);
    }
    doc["levels"] = lv;
    if (c.timing) doc["timing"] = Json{{"seconds", seconds_since(start)}};
    out << dump_json(doc);
  } else {
    out << "jet ideal at level " << c.m << " in " << ideal.num_vars() << " variables\n";
    for (std::size_t k = 0; k < ideal.generators.size(); ++k)
      out << "F_" << ideal.generator_levels[k] << " = " << jet_polynomial_text(ideal.generators[k], ideal.base_vars)
          << "\n";
    for (const auto& l : levels) {
      out << "dim X_" << l.m << " = ";
      if (l.dim)
        out << *l.dim;
      else
        out << "unknown (" << l.error.value_or("") << ")";
      out << " (top: " << l.m * c.dim + 1 << ")";
      if (c.timing) out << " " << l.seconds << "s";
      out << "\n";
    }
  }
  return capped ? kExitCap : kExitOk;
}

int cmd_mld_hat(const Config& c, std::ostream& out) {
  auto start = std::chrono::steady_clock::now();
  AnalysisOptions opts = c.analysis();
  SparseSeries f = c.hypersurface();
  MldEstimate e = mather_mld_jet(f, c.dim, c.m_max, c.jet_options());
  if (c.json()) {
    Json doc = base_document("mld-hat");
    doc["input"] = Json{{"equation", c.equation}, {"dim", c.dim}};
    doc["config"] = config_json(opts, c.m_max);
    doc["estimate"] = estimate_json(e, c.timing);
    if (c.timing) doc["timing"] = Json{{"seconds", seconds_since(start)}};
    out << dump_json(doc);
  } else {
    out << estimate_text(e, c.timing);
  }
  return e.levels_truncated ? kExitCap : kExitOk;
}

int cmd_pair(const Config& c, std::ostream& out) {
  AnalysisOptions opts = c.analysis();
  PairVerdict v;
  Json input;
  if (c.smooth_dim > 0) {
    if (!c.equation.empty()) throw UsageError("give either --smooth-dim or -e/-d, not both");
    v = pair_verdict_smooth(c.smooth_dim, c.boundary(c.smooth_dim));
    input = Json{{"smooth_dim", c.smooth_dim}};
  } else {
    SparseSeries f = c.hypersurface();
    v = pair_verdict_hypersurface(f, c.dim, c.boundary(c.dim + 1), opts);
    input = Json{{"equation", c.equation}, {"dim", c.dim}};
  }
  if (c.json()) {
    Json doc = base_document("pair");
    input["divisor"] = c.divisor.empty() ? Json(nullptr) : Json(c.divisor);
    doc["input"] = input;
    doc["config"] = config_json(opts, c.m_max);
    doc["pair"] = pair_json(v);
    out << dump_json(doc);
  } else {
    out << pair_text(v);
  }
  return kExitOk;
}

int cmd_audit(const Config& c, std::ostream& out) {
  if (c.dim == 0) throw UsageError("--dim must be at least 1");
  DivisorSpec b = c.boundary(c.dim);
  AuditResult a = monomial_audit(c.dim, b, c.bound);
  if (c.json()) {
    Json doc = base_document("audit");
    doc["input"] = Json{{"dim", c.dim}, {"divisor", c.divisor.empty() ? Json(nullptr) : Json(c.divisor)}};
    doc["divisor"] = divisor_json(b);
    doc["audit"] = audit_json(a, c.bound);
    doc["multiplicity"] = to_string(divisor_multiplicity(b));
    out << dump_json(doc);
  } else {
    out << audit_text(a);
  }
  return kExitOk;
}

int cmd_selftest(const Config& c, std::ostream& out) {
  auto results = run_selftest();
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  if (c.json()) {
    Json doc = base_document("selftest");
    Json cases = Json::array();
    for (const auto& r : results) {
      Json j{{"name", r.name}, {"passed", r.passed}};
      if (!r.error.empty()) j["error"] = r.error;
      cases.push_back(j);
    }
    doc["cases"] = cases;
    doc["failed"] = failed;
    out << dump_json(doc);
  } else {
    for (const auto& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << r.name;
      if (!r.error.empty()) out << " (" << r.error << ")";
      out << "\n";
    }
    out << results.size() - failed << "/" << results.size() << " passed\n";
  }
  return failed == 0 ? kExitOk : kExitFailed;
}

int run(int argc, char** argv) {
  CLI::App app{"Top singularity toolkit: jet dimensions and invariant-chain classification of hypersurface germs"};
  app.require_subcommand(1);
  Config c;

  auto* classify_cmd = app.add_subcommand("classify", "classify a hypersurface germ at the origin");
  add_equation_options(classify_cmd, c);
  classify_cmd->add_option("--m-max", c.m_max, "recorded in the configuration")->capture_default_str();
  add_common_options(classify_cmd, c);

  auto* jets_cmd = app.add_subcommand("jets", "jet ideal at the origin and per-level dimensions");
  add_equation_options(jets_cmd, c);
  jets_cmd->add_option("--m", c.m, "jet level")->capture_default_str();
  add_common_options(jets_cmd, c);

  auto* mld_cmd = app.add_subcommand("mld-hat", "jet-formula upper bound for the Mather mld");
  add_equation_options(mld_cmd, c);
  mld_cmd->add_option("--m-max", c.m_max, "highest jet level")->capture_default_str();
  add_common_options(mld_cmd, c);

  auto* pair_cmd = app.add_subcommand("pair", "verdict for a pair with a Q-divisor boundary");
  add_equation_options(pair_cmd, c);
  pair_cmd->add_option("--smooth-dim", c.smooth_dim, "smooth ambient germ of this dimension");
  pair_cmd->add_option("--divisor", c.divisor, "divisor JSON, or @file");
  add_common_options(pair_cmd, c);

  auto* audit_cmd = app.add_subcommand("audit", "monomial valuation audit on a smooth germ");
  audit_cmd->add_option("-d,--dim", c.dim, "dimension of the smooth germ");
  audit_cmd->add_option("--divisor", c.divisor, "divisor JSON, or @file");
  audit_cmd->add_option("--bound", c.bound, "largest weight enumerated")->capture_default_str();
  add_common_options(audit_cmd, c);

  auto* selftest_cmd = app.add_subcommand("selftest", "run the reference example suite");
  selftest_cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(c, std::cout);
    if (*jets_cmd) return cmd_jets(c, std::cout);
    if (*mld_cmd) return cmd_mld_hat(c, std::cout);
    if (*pair_cmd) return cmd_pair(c, std::cout);
    if (*audit_cmd) return cmd_audit(c, std::cout);
    if (*selftest_cmd) return cmd_selftest(c, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return kExitCap;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
