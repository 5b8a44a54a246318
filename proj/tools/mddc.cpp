#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mddc/build.hpp"
#include "mddc/problem_file.hpp"
#include "mddc/search.hpp"

using namespace mddc;

namespace {

enum Exit { kOk = 0, kParse = 2, kEmpty = 3, kNodeLimit = 4 };

struct RunConfig {
  std::string propagator = "dynamic", reduce = "off", edges = "long";
  std::uint64_t seed = 0x5eed;
  bool nogoods = false, delta_cutoff = false, entail_skip = true;
};

// Flags given on the command line win over options in the problem file.
struct Flags {
  std::string propagator, reduce, edges;
  std::uint64_t seed = 0;
  bool seed_set = false, nogoods = false, delta_cutoff = false, no_entail_skip = false;
};

const std::map<std::string, PropagatorKind> kPropagators = {
    {"scan", PropagatorKind::scan}, {"dynamic", PropagatorKind::dynamic}, {"interval", PropagatorKind::interval}};
const std::map<std::string, ReduceMode> kReduce = {
    {"off", ReduceMode::off}, {"uniqueness", ReduceMode::uniqueness}, {"full", ReduceMode::full}};
const std::map<std::string, EdgeMode> kEdges = {
    {"plain", EdgeMode::plain}, {"long", EdgeMode::long_edges}, {"wildcard", EdgeMode::wildcard}};

RunConfig resolve(const Problem& p, const Flags& f) {
  RunConfig c;
  auto pick = [&](const char* key, const std::string& flag, std::string& slot, const auto& table) {
    if (!flag.empty())
      slot = flag;
    else if (p.options.count(key))
      slot = p.options.at(key);
    if (!table.count(slot)) throw ParseError(0, std::string("bad value '") + slot + "' for " + key);
  };
  pick("propagator", f.propagator, c.propagator, kPropagators);
  pick("reduce", f.reduce, c.reduce, kReduce);
  pick("edges", f.edges, c.edges, kEdges);
  if (f.seed_set) {
    c.seed = f.seed;
  } else if (p.options.count("seed")) {
    try {
      c.seed = std::stoull(p.options.at("seed"));
    } catch (const std::exception&) {
      throw ParseError(0, "bad value '" + p.options.at("seed") + "' for seed");
    }
  }
  if (p.options.count("branching") && p.options.at("branching") != "lex")
    throw ParseError(0, "only lex branching is supported");
  c.nogoods = f.nogoods || (p.options.count("nogoods") && p.options.at("nogoods") == "on");
  c.delta_cutoff = f.delta_cutoff;
  c.entail_skip = !f.no_entail_skip;
  return c;
}

std::string size_report(const Mdd& m) {
  const LiveCounts lc = live_counts(m);
  return "nodes=" + std::to_string(lc.total_nodes()) + " edges=" + std::to_string(lc.edges) +
         " longEdges=" + std::to_string(count_long_edges(m));
}

std::unique_ptr<Search> make_search(const Problem& p, const RunConfig& cfg, NoGoodStore* store) {
  const DomainStore dom = p.domains();
  auto s = std::make_unique<Search>(dom, SearchOptions{cfg.entail_skip, true});
  MddConstraintOptions o;
  o.propagator = kPropagators.at(cfg.propagator);
  o.dynamic.reduce = kReduce.at(cfg.reduce);
  o.dynamic.seed = cfg.seed;
  const EdgeMode mode = kEdges.at(cfg.edges);
  o.dynamic.collapse_to_wildcard = mode == EdgeMode::wildcard;
  o.scan.delta_cutoff = cfg.delta_cutoff;
  o.scan.nogoods = cfg.nogoods ? store : nullptr;
  o.scan.problem_vars = p.num_vars();
  for (const ProblemConstraint& c : p.constraints) {
    if (c.kind == ConstraintKind::alldifferent) {
      s->add(make_alldifferent(c.scope, dom));
    } else if (c.kind == ConstraintKind::interval_tuples && o.propagator == PropagatorKind::interval) {
      s->add(make_interval_constraint(constraint_interval_dag(p, c), c.scope, dom, o.interval));
    } else {
      std::vector<int> scope;
      const Mdd m = constraint_mdd(p, c, scope);
      s->add(make_mdd_constraint(with_edge_mode(m, scope_domains(dom, scope), mode), scope, dom, o));
    }
  }
  return s;
}

std::string solution_line(const Problem& p, const std::vector<int>& sol) {
  std::string out;
  for (int i = 0; i < p.num_vars(); ++i) out += (i ? " " : "") + p.names[i] + "=" + std::to_string(sol[i]);
  return out;
}

std::string domain_text(const DomainStore& d, int var) {
  std::string out = "{";
  bool first = true;
  for (int v : d.current_values(var)) {
    out += (first ? "" : ",") + std::to_string(v);
    first = false;
  }
  return out + "}";
}

int cmd_build(const std::string& input, const std::string& out, int max_nodes) {
  const Problem p = parse_problem_file(input);
  const DomainStore dom = p.domains();
  std::vector<int> all(p.num_vars());
  for (int i = 0; i < p.num_vars(); ++i) all[i] = i;
  bool have = false;
  Mdd combined;
  int stage = 0;
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const ProblemConstraint& c = p.constraints[k];
    std::cout << "constraint=" << k + 1 << " kind=" << c.label();
    if (c.kind == ConstraintKind::alldifferent) {
      std::cout << " skipped\n";
      continue;
    }
    std::vector<int> scope;
    const Mdd m = constraint_mdd(p, c, scope);
    std::cout << ' ' << size_report(m) << '\n';
    const Mdd lifted = scope == all ? m : lift_to_scope(m, scope, p.num_vars());
    combined = have ? conjoin(combined, lifted, dom) : lifted;
    have = true;
    std::cout << "stage=" << ++stage << ' ' << size_report(combined) << '\n';
    if (max_nodes > 0 && live_counts(combined).total_nodes() > max_nodes) {
      std::cerr << "node limit " << max_nodes << " exceeded at stage " << stage << '\n';
      return kNodeLimit;
    }
  }
  if (!have) throw ParseError(0, "no diagram constraints to build");
  std::cout << size_report(combined) << '\n';
  if (!out.empty()) {
    std::ofstream f(out);
    write_mdd(f, combined);
    if (!f) {
      std::cerr << "cannot write " << out << '\n';
      return 1;
    }
  }
  return kOk;
}

int cmd_solve(const std::string& input, const Flags& flags, SolveMode mode, bool stats, bool trace) {
  const Problem p = parse_problem_file(input);
  const RunConfig cfg = resolve(p, flags);
  NoGoodStore store(cfg.seed);
  auto search = make_search(p, cfg, &store);
  const SolveResult r = search->solve(mode);
  if (mode != SolveMode::count)
    for (const auto& sol : r.solutions) std::cout << solution_line(p, sol) << '\n';
  if (r.count == 0)
    std::cout << "UNSAT\n";
  else
    std::cout << "solutions=" << r.count << '\n';
  if (trace)
    for (const PhaseRecord& ph : search->trace())
      std::cout << "phase=" << ph.phase << " var=" << (ph.var < 0 ? "-" : p.names[ph.var])
                << " value=" << ph.value << " steps=" << ph.steps << " failed=" << ph.failed << '\n';
  if (stats) {
    const ConstraintTotals t = search->totals();
    std::cout << "phases=" << r.phases << '\n'
              << "failures=" << r.failures << '\n'
              << "steps=" << t.steps << '\n'
              << "edgesTraversedScan=" << t.edges_traversed_scan << '\n'
              << "removeEdgeCalls=" << t.remove_edge_calls << '\n'
              << "nodesMerged=" << t.nodes_merged << '\n'
              << "nodesCollapsed=" << t.nodes_collapsed << '\n'
              << "intervalDecrements=" << t.interval_decrements << '\n'
              << "directionViolations=" << t.direction_violations << '\n'
              << "nogoodHits=" << t.nogood_hits << '\n'
              << "nogoods=" << store.size() << '\n'
              << "entailmentEvents=" << t.entailment_events << '\n';
  }
  return kOk;
}

void print_state(const Problem& p, const Search& s) {
  for (int i = 0; i < p.num_vars(); ++i) std::cout << p.names[i] << " in " << domain_text(s.domains(), i) << '\n';
  for (int k = 0; k < s.num_constraints(); ++k)
    std::cout << "constraint " << k + 1 << (s.constraint(k).entailed() ? " entailed" : " not entailed") << '\n';
}

int cmd_repl(const std::string& input, const Flags& flags, std::istream& in) {
  const Problem p = parse_problem_file(input);
  const RunConfig cfg = resolve(p, flags);
  NoGoodStore store(cfg.seed);
  auto search = make_search(p, cfg, &store);
  if (search->initialize() == Status::failed) {
    std::cout << "UNSAT\n";
    return kOk;
  }
  print_state(p, *search);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string cmd, name, value;
    ss >> cmd;
    if (cmd.empty()) continue;
    if (cmd == "quit") break;
    if (cmd == "domains" || cmd == "entailed") {
      print_state(p, *search);
    } else if (cmd == "undo") {
      if (search->depth() == 0) {
        std::cout << "nothing to undo\n";
        continue;
      }
      search->backtrack();
      print_state(p, *search);
    } else if (cmd == "assign" || cmd == "remove") {
      if (!(ss >> name >> value)) {
        std::cout << "usage: " << cmd << " <var> <value>\n";
        continue;
      }
      const int var = p.var_index(name);
      if (var < 0) {
        std::cout << "unknown variable " << name << '\n';
        continue;
      }
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        std::cout << "value " << value << " not in domain of " << name << '\n';
        continue;
      }
      if (!search->domains().contains(var, v)) {
        std::cout << "value " << v << " not in domain of " << name << '\n';
        continue;
      }
      Deltas r;
      if (cmd == "remove") {
        r.push_back({var, v});
      } else {
        for (int w : search->domains().current_values(var))
          if (w != v) r.push_back({var, w});
      }
      search->checkpoint();
      if (search->propagate(r) == Status::failed) {
        const int k = search->failed_constraint();
        search->backtrack();
        std::cout << "conflict";
        if (k >= 0) std::cout << " in constraint " << k + 1;
        std::cout << "; change undone\n";
        continue;
      }
      print_state(p, *search);
    } else {
      std::cout << "unknown command " << cmd << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and solve problems over MDD constraints"};
  app.require_subcommand(1);

  std::string input, out;
  int max_nodes = 0;
  Flags flags;
  bool count = false, first = false, all = false, stats = false, trace = false;

  auto add_engine_flags = [&](CLI::App* sub) {
    sub->add_option("--propagator", flags.propagator, "scan, dynamic or interval")
        ->check(CLI::IsMember({"scan", "dynamic", "interval"}));
    sub->add_option("--reduce", flags.reduce, "off, uniqueness or full")
        ->check(CLI::IsMember({"off", "uniqueness", "full"}));
    sub->add_option("--edges", flags.edges, "plain, long or wildcard")
        ->check(CLI::IsMember({"plain", "long", "wildcard"}));
    sub->add_option("--seed", flags.seed, "hash seed")->each([&](const std::string&) { flags.seed_set = true; });
    sub->add_flag("--nogoods", flags.nogoods, "record no-goods in the scan propagator");
    sub->add_flag("--delta-cutoff", flags.delta_cutoff, "stop scans early once every layer is supported");
    sub->add_flag("--no-entail-skip", flags.no_entail_skip, "keep propagating entailed constraints");
  };

  CLI::App* build = app.add_subcommand("build", "build and conjoin the diagram constraints");
  build->add_option("input", input, "problem file")->required();
  build->add_option("-o,--out", out, "write the combined diagram here");
  build->add_option("--max-nodes", max_nodes, "fail when a stage exceeds this many nodes");

  CLI::App* solve = app.add_subcommand("solve", "search for solutions");
  solve->add_option("input", input, "problem file")->required();
  add_engine_flags(solve);
  auto* g = solve->add_option_group("mode");
  g->add_flag("--count", count, "count solutions (default)");
  g->add_flag("--first", first, "print the first solution");
  g->add_flag("--all", all, "print every solution");
  g->require_option(0, 1);
  solve->add_flag("--stats", stats, "print work counters");
  solve->add_flag("--trace", trace, "print one line per phase");

  CLI::App* repl = app.add_subcommand("repl", "interactive propagation on stdin");
  repl->add_option("input", input, "problem file")->required();
  add_engine_flags(repl);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(input, out, max_nodes);
    if (solve->parsed())
      return cmd_solve(input, flags, first ? SolveMode::first : all ? SolveMode::all : SolveMode::count, stats,
                       trace);
    return cmd_repl(input, flags, std::cin);
  } catch (const ParseError& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kParse;
  } catch (const EmptyConstraint& e) {
    std::cerr << "empty constraint: " << e.what() << '\n';
    return kEmpty;
  }
}
