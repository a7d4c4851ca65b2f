#include "coverage_miqp/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "coverage_miqp/lp_format.h"
#include "coverage_miqp/model.h"
#include "coverage_miqp/planner.h"
#include "coverage_miqp/scenario.h"

namespace coverage_miqp::cli {

unsigned learning_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("COVERAGE_MIQP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v > 0) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

namespace {

struct Flags {
  std::string scenario;
  std::string out;
  std::string table;
  std::string plan;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

ScenarioSpec load_with_overrides(const Flags& f) {
  nlohmann::json doc;
  if (f.scenario.empty()) {
    doc = to_json(default_spec());
  } else {
    std::ifstream in(f.scenario);
    if (!in) throw std::invalid_argument("cannot read scenario " + f.scenario);
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("scenario " + f.scenario + ": " + e.what());
    }
  }
  for (const auto& o : f.overrides) apply_override(doc, o);
  if (f.seed) apply_override(doc, "visibility.seed=" + std::to_string(*f.seed));
  return spec_from_json(doc);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw std::invalid_argument(std::string("missing ") + flag);
}

PlanOptions plan_options(const Flags& f) {
  PlanOptions o;
  if (!f.table.empty()) o.table_cache = f.table;
  o.threads = learning_threads();
  return o;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int status_code(PlanStatus s) {
  switch (s) {
    case PlanStatus::OptimalOverGrid: return kOk;
    case PlanStatus::Infeasible: return kInfeasible;
    case PlanStatus::Feasible:
    case PlanStatus::Limit: return kLimit;
  }
  return kInputError;
}

int cmd_init(const Flags& f, std::ostream& out) {
  const std::string path = f.out.empty() ? "scenario.json" : f.out;
  const auto spec = load_with_overrides(f);
  build_scenario(spec);
  save_spec(spec, path);
  out << "wrote " << path << '\n';
  return kOk;
}

int cmd_visibility(const Flags& f, std::ostream& out) {
  require(f.scenario, "--scenario");
  const std::string path = !f.table.empty() ? f.table : f.out;
  require(path, "--table or --out");
  const auto s = build_scenario(load_with_overrides(f));
  const auto table = s.traversable ? VisibilityTable::all_visible(expected_meta(s))
                                   : learn_table(s, s.configs, learning_threads());
  save_table(table, path);
  std::size_t ones = 0;
  for (std::size_t c = 0; c < table.n_cells(); ++c) ones += table.row_count(c);
  out << "cells " << table.n_cells() << " points " << table.n_points() << " visible pairs " << ones << '\n';
  out << "wrote " << path << '\n';
  return kOk;
}

int cmd_plan(const Flags& f, std::ostream& out) {
  require(f.scenario, "--scenario");
  const auto spec = load_with_overrides(f);
  const auto s = build_scenario(spec);
  const auto result = plan(s, plan_options(f));
  const std::filesystem::path path = f.out.empty() ? "plan.json" : f.out;
  save_plan(result.result, scenario_hash(spec), path);
  auto csv = path;
  csv.replace_extension(".csv");
  write_text(csv, plan_csv(result.result));
  out << "status " << to_string(result.result.status) << '\n';
  if (result.result.has_plan()) out << "objective " << result.result.objective << '\n';
  out << "nodes " << result.result.nodes << '\n';
  out << "wrote " << path.string() << " and " << csv.string() << '\n';
  return status_code(result.result.status);
}

PlanResult load_matching_plan(const Flags& f, const ScenarioSpec& spec) {
  require(f.plan, "--plan");
  std::string hash;
  auto p = load_plan(f.plan, &hash);
  if (hash != scenario_hash(spec)) {
    throw std::invalid_argument("plan " + f.plan + " was made for scenario " + hash + ", not " +
                                scenario_hash(spec));
  }
  return p;
}

int cmd_check(const Flags& f, std::ostream& out) {
  require(f.scenario, "--scenario");
  const auto spec = load_with_overrides(f);
  const auto s = build_scenario(spec);
  const auto p = load_matching_plan(f, spec);
  if (!p.has_plan()) {
    out << "status " << to_string(p.status) << ": nothing to check\n";
    return p.status == PlanStatus::Infeasible ? kInfeasible : kLimit;
  }
  const auto table = obtain_table(s, plan_options(f));
  const auto r = validate(s, p, table);
  out << "dynamics_residual " << r.dynamics_residual << '\n';
  for (const auto& b : r.bound_violations) {
    out << "violation bound " << to_string(b.kind) << " t=" << b.t << " axis=" << b.axis << " value=" << b.value
        << '\n';
  }
  for (int t : r.obstacle_violations) out << "violation obstacle t=" << t << '\n';
  for (std::size_t i = 0; i < r.coverage.size(); ++i) {
    const auto& c = r.coverage[i];
    out << "point " << i << " covered_at=" << (c.covered_at ? std::to_string(*c.covered_at) : "-")
        << " table_covered_at=" << (c.table_covered_at ? std::to_string(*c.table_covered_at) : "-") << '\n';
  }
  for (const auto& d : r.disagreements) {
    out << "disagreement t=" << d.t << " point=" << d.point << " table=" << d.table << " raycast=" << d.raycast
        << '\n';
  }
  out << "fully_covered " << (r.fully_covered ? "true" : "false") << '\n';
  if (r.dynamics_residual > 1e-9) out << "violation dynamics residual " << r.dynamics_residual << '\n';
  return r.ok() ? kOk : kInputError;
}

int cmd_objectives(const Flags& f, std::ostream& out) {
  require(f.scenario, "--scenario");
  const auto spec = load_with_overrides(f);
  const auto s = build_scenario(spec);
  const auto p = load_matching_plan(f, spec);
  if (!p.has_plan()) {
    out << "status " << to_string(p.status) << ": no objective\n";
    return p.status == PlanStatus::Infeasible ? kInfeasible : kLimit;
  }
  const auto table = obtain_table(s, plan_options(f));
  const auto o = objectives(s, p, table);
  const auto e = objectives(s, p, table, ControlNorm::Euclidean);
  out << "J1 " << o.j1 << '\n'
      << "J2 " << o.j2 << '\n'
      << "J3 " << o.j3 << '\n'
      << "weighted " << o.weighted << '\n'
      << "J2_euclidean " << e.j2 << '\n'
      << "weighted_euclidean " << e.weighted << '\n';
  return kOk;
}

int cmd_export_lp(const Flags& f, std::ostream& out) {
  require(f.scenario, "--scenario");
  const auto s = build_scenario(load_with_overrides(f));
  const auto table = obtain_table(s, plan_options(f));
  const std::string path = f.out.empty() ? "model.lp" : f.out;
  const auto model = build_model(s, table);
  export_lp(model, path);
  out << "variables " << model.vars.size() << " binaries " << model.vars.n_binaries() << " rows "
      << model.rows.size() << '\n';
  out << "wrote " << path << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverage planning with a learned visibility table and a mixed-integer model"};
  app.name("coverage_miqp");
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", f.scenario, "scenario JSON file");
    sub->add_option("--out", f.out, "output file");
    sub->add_option("--table", f.table, "visibility table cache");
    sub->add_option("--set", f.overrides, "override a scenario field, key=value")->take_all();
    sub->add_option("--seed", f.seed, "visibility sampling seed");
  };
  auto* init = app.add_subcommand("init", "write a scenario with the default setup");
  auto* vis = app.add_subcommand("visibility", "learn and store the visibility table");
  auto* pl = app.add_subcommand("plan", "solve and write plan JSON and CSV");
  auto* chk = app.add_subcommand("check", "validate a plan by direct ray casting");
  auto* obj = app.add_subcommand("objectives", "print the objective breakdown of a plan");
  auto* lp = app.add_subcommand("export-lp", "write the mixed-integer model as LP text");
  for (auto* sub : {init, vis, pl, chk, obj, lp}) add_common(sub);
  for (auto* sub : {chk, obj}) sub->add_option("--plan", f.plan, "plan JSON file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  try {
    if (init->parsed()) return cmd_init(f, out);
    if (vis->parsed()) return cmd_visibility(f, out);
    if (pl->parsed()) return cmd_plan(f, out);
    if (chk->parsed()) return cmd_check(f, out);
    if (obj->parsed()) return cmd_objectives(f, out);
    if (lp->parsed()) return cmd_export_lp(f, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace coverage_miqp::cli
