#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "resmatch/audit.hpp"
#include "resmatch/audit_suite.hpp"
#include "resmatch/cop.hpp"
#include "resmatch/generator.hpp"
#include "resmatch/instance_io.hpp"

namespace resmatch::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240917;

struct Options {
  std::string instance;
  std::string policy = "no-transfer";
  std::string trace;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool break_ties = false;

  std::size_t individuals = 5;
  std::size_t institutions = 2;

  std::string audit_policy = "all";
  std::size_t markets = 200;
  std::size_t order_markets = 200;
  std::size_t probes = 10000;
  bool exhaustive_blocks = false;
  bool independence = false;
  std::vector<std::string> faults;
};

std::uint64_t seed_of(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("RESMATCH_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("RESMATCH_SEED", std::string("not a number: ") + env);
    }
  }
  return kDefaultSeed;
}

ChoicePolicy policy_of(const std::string& text) {
  auto p = parse_policy(text);
  if (!p) throw CLI::ValidationError("--policy", "unknown policy '" + text + "'");
  return *p;
}

ChoiceFaults faults_of(const std::vector<std::string>& names) {
  ChoiceFaults f;
  for (const auto& name : names) {
    if (name == "skip-removal") {
      f.keep_open_selections = true;
    } else if (name == "obc-first") {
      f.obc_before_open = true;
    } else if (name == "exclude-declared") {
      f.open_excludes_declared = true;
    } else if (name.rfind("ignore-reserve:", 0) == 0) {
      try {
        f.ignored_reservation = std::stoul(name.substr(15));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--inject-fault", "bad type index in '" + name + "'");
      }
    } else {
      throw CLI::ValidationError("--inject-fault", "unknown fault '" + name + "'");
    }
  }
  return f;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f || !(f << text)) throw InstanceError("cannot write " + path);
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Market market = load_market(o.instance);
  const ValidationReport report = validate_market(market);
  for (const auto& v : report.violations) out << v.kind << ": " << v.detail << "\n";
  if (report.ok()) out << "ok\n";
  return report.ok() ? kOk : kDomainFailure;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  Market market = load_market(o.instance);
  if (o.break_ties) market = break_score_ties(std::move(market));
  const ValidationReport report = validate_market(market);
  if (!report.ok()) {
    for (const auto& v : report.violations) err << v.kind << ": " << v.detail << "\n";
    return kDomainFailure;
  }
  const ChoicePolicy policy = policy_of(o.policy);
  const CopResult result = cumulative_offer(market, policy, default_order(market));

  std::vector<Contract> sorted = result.matching;
  std::sort(sorted.begin(), sorted.end(), [&](const Contract& a, const Contract& b) {
    return market.individuals[a.individual].id < market.individuals[b.individual].id;
  });
  for (const auto& c : sorted) out << describe(market, c) << "\n";
  if (!o.out.empty()) write_file(o.out, serialize_matching(market, result.matching));
  if (!o.trace.empty()) write_file(o.trace, serialize_trace(market, policy, result));
  return kOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
  GeneratorParams params;
  params.individuals = o.individuals;
  params.institutions = o.institutions;
  std::string text;
  try {
    text = serialize_market(generate_market(params, seed_of(o)));
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("sizes", e.what());
  }
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
  return kOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
  std::vector<ChoicePolicy> policies;
  if (o.audit_policy == "all")
    policies.assign(kAllPolicies.begin(), kAllPolicies.end());
  else
    policies.push_back(policy_of(o.audit_policy));

  if (o.independence) {
    bool ok = true;
    for (ChoicePolicy p : policies)
      for (bool swap : {false, true}) {
        const IndependenceReport r = independence_counterexample(p, swap);
        out << r.summary() << "\n";
        ok = ok && r.holds();
      }
    return ok ? kOk : kDomainFailure;
  }

  AuditConfig config;
  config.seed = seed_of(o);
  config.policies = policies;
  config.markets = o.markets;
  config.order_markets = o.order_markets;
  config.property_probes = o.probes;
  config.exhaustive_blocks = o.exhaustive_blocks;
  config.faults = faults_of(o.faults);

  out << "seed " << config.seed << ", faults " << to_string(config.faults) << "\n";
  out << "generator " << config.generator.describe() << "\n";
  AuditReport report;
  report.config = config;
  for (auto* check : {check_subchoice_oracle, check_subchoice_properties, check_choice_fairness,
                      check_matching_fairness, check_stability, check_strategy_proofness,
                      check_improvements, check_declarations, check_order_invariance,
                      check_transfer_monotonicity, check_independence}) {
    report.checks.push_back(check(config));
    const CheckResult& c = report.checks.back();
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << ": " << c.cases << " cases, "
        << c.failures << " failures, " << c.skipped << " skipped (" << c.seconds << " s)\n";
    for (const auto& ce : c.counterexamples) {
      out << "  counterexample: " << ce.what << "\n";
      if (!ce.market.empty()) out << ce.market;
    }
    out.flush();
  }
  if (!o.out.empty()) write_file(o.out, report.to_json());
  out << (report.passed() ? "all checks passed" : "audit FAILED") << "\n";
  return report.passed() ? kOk : kDomainFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matching with vertical and hierarchical horizontal reservations"};
  app.require_subcommand(1);
  Options o;
  auto seed_option = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { o.seed = s; },
                                            "Random seed (default: $RESMATCH_SEED or " +
                                                std::to_string(kDefaultSeed) + ")");
  };

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("instance", o.instance, "Instance JSON")->required();

  auto* run_cmd = app.add_subcommand("run", "Run the cumulative offer process on an instance");
  run_cmd->add_option("instance", o.instance, "Instance JSON")->required();
  run_cmd->add_option("--policy", o.policy, "no-transfer, transfer-gc or transfer-merit")
      ->capture_default_str();
  run_cmd->add_option("--trace", o.trace, "Write the per-step log as JSON");
  run_cmd->add_option("--out", o.out, "Write the matching as JSON");
  run_cmd->add_flag("--break-ties", o.break_ties, "Break equal scores by individual id first");

  auto* generate = app.add_subcommand("generate", "Write a seeded random instance");
  seed_option(generate);
  generate->add_option("--individuals", o.individuals)->capture_default_str();
  generate->add_option("--institutions", o.institutions)->capture_default_str();
  generate->add_option("--out", o.out, "Output file (default: stdout)");

  auto* audit = app.add_subcommand("audit", "Run the property checks on seeded markets");
  seed_option(audit);
  audit->add_option("--policy", o.audit_policy, "A policy or 'all'")->capture_default_str();
  audit->add_option("--markets", o.markets, "Random markets per market-level check")
      ->capture_default_str();
  audit->add_option("--order-markets", o.order_markets, "Markets for the proposal-order check")
      ->capture_default_str();
  audit->add_option("--probes", o.probes, "Random sub-choice probes")->capture_default_str();
  audit->add_flag("--exhaustive-blocks", o.exhaustive_blocks,
                  "Search every blocking set when there are at most 12 candidates");
  audit->add_flag("--independence", o.independence, "Only print the fairness/stability independence report");
  audit->add_option("--inject-fault", o.faults,
                    "skip-removal, obc-first, exclude-declared or ignore-reserve:<type index>");
  audit->add_option("--out", o.out, "Write the report as JSON");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();
  try {
    app.parse(argv);
    if (*validate) return cmd_validate(o, out);
    if (*run_cmd) return cmd_run(o, out, err);
    if (*generate) return cmd_generate(o, out);
    return cmd_audit(o, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
}

}  // namespace resmatch::cli
