// Python module: JSON text in, plain Python values out.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resmatch/audit.hpp"
#include "resmatch/audit_suite.hpp"
#include "resmatch/generator.hpp"
#include "resmatch/instance_io.hpp"

namespace py = pybind11;
using namespace resmatch;

namespace {

ChoicePolicy policy_of(const std::string& name) {
  const auto p = parse_policy(name);
  if (!p) throw py::value_error("unknown policy '" + name + "'");
  return *p;
}

std::vector<std::pair<std::string, std::string>> violations(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& v : validate_market(parse_market(text)).violations) out.emplace_back(v.kind, v.detail);
  return out;
}

py::dict run(const std::string& text, const std::string& policy, bool break_ties) {
  Market market = parse_market(text);
  if (break_ties) market = break_score_ties(std::move(market));
  const auto report = validate_market(market);
  if (!report.ok()) throw py::value_error("invalid market: " + report.violations.front().detail);
  const ChoicePolicy p = policy_of(policy);
  const CopResult result = cumulative_offer(market, p, default_order(market));
  py::list matching;
  for (const auto& c : result.matching)
    matching.append(py::make_tuple(market.individuals[c.individual].id,
                                   market.institutions[c.institution].id, std::string(to_string(c.category))));
  py::dict out;
  out["matching"] = matching;
  out["trace"] = serialize_trace(market, p, result);
  return out;
}

std::string generate(std::uint64_t seed, std::size_t individuals, std::size_t institutions) {
  GeneratorParams params;
  params.individuals = individuals;
  params.institutions = institutions;
  return serialize_market(generate_market(params, seed));
}

std::string audit(std::uint64_t seed, std::size_t markets, std::size_t order_markets, std::size_t probes,
                  const std::vector<std::string>& policies, bool skip_removal, bool obc_first,
                  bool exclude_declared, std::optional<std::size_t> ignore_reserve) {
  AuditConfig config;
  config.seed = seed;
  config.markets = markets;
  config.order_markets = order_markets;
  config.property_probes = probes;
  if (!policies.empty()) {
    config.policies.clear();
    for (const auto& name : policies) config.policies.push_back(policy_of(name));
  }
  config.faults.keep_open_selections = skip_removal;
  config.faults.obc_before_open = obc_first;
  config.faults.open_excludes_declared = exclude_declared;
  config.faults.ignored_reservation = ignore_reserve;
  py::gil_scoped_release release;
  return run_audit(config).to_json();
}

}  // namespace

PYBIND11_MODULE(_resmatch, m) {
  m.doc() = "Matching with vertical and horizontal reservations";
  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);

  m.def("policies", [] {
    std::vector<std::string> out;
    for (ChoicePolicy p : kAllPolicies) out.emplace_back(to_string(p));
    return out;
  });
  m.def("violations", &violations, py::arg("instance"),
        "(kind, detail) pairs for every rule the instance breaks.");
  m.def("run", &run, py::arg("instance"), py::arg("policy") = "no-transfer", py::arg("break_ties") = false,
        "Cumulative offer outcome as (individual, institution, category) triples plus the JSON trace.");
  m.def("generate", &generate, py::arg("seed"), py::arg("individuals") = 5, py::arg("institutions") = 2,
        "A random valid instance as JSON text.");
  m.def("audit", &audit, py::arg("seed") = 20240917, py::arg("markets") = 200, py::arg("order_markets") = 200,
        py::arg("probes") = 10000, py::arg("policies") = std::vector<std::string>{},
        py::arg("skip_removal") = false, py::arg("obc_first") = false, py::arg("exclude_declared") = false,
        py::arg("ignore_reserve") = std::nullopt, "Audit report as JSON text.");
  m.def("independence_summary",
        [](const std::string& policy, bool swap) {
          return independence_counterexample(policy_of(policy), swap).summary();
        },
        py::arg("policy") = "no-transfer", py::arg("swap_scores") = false);
}
