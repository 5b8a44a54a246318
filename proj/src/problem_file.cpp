#include "mddc/problem_file.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "mddc/build.hpp"

namespace mddc {

namespace {

const std::set<std::string> kOptionKeys = {"propagator", "reduce", "edges", "seed", "branching", "nogoods"};

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

int to_int(const std::string& s, int line) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ParseError(line, "expected an integer, got '" + s + "'");
  return v;
}

// "a" or "a..b".
std::pair<int, int> to_range(const std::string& s, int line) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const int v = to_int(s, line);
    return {v, v};
  }
  const int lo = to_int(s.substr(0, dots), line), hi = to_int(s.substr(dots + 2), line);
  if (lo > hi) throw ParseError(line, "empty interval '" + s + "'");
  return {lo, hi};
}

}  // namespace

std::string ProblemConstraint::label() const {
  switch (kind) {
    case ConstraintKind::tuples: return "tuples";
    case ConstraintKind::interval_tuples: return "interval-tuples";
    case ConstraintKind::mdd_ref: return "mdd-ref";
    case ConstraintKind::alldifferent: return "alldifferent";
  }
  return "?";
}

int Problem::var_index(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

Problem parse_problem(std::istream& in, const std::string& base_dir) {
  Problem p;
  std::string raw;
  int lineno = 0;
  ProblemConstraint* open = nullptr;  // table waiting for its end line
  int open_line = 0;

  auto scope_of = [&](const std::vector<std::string>& words, std::size_t from, int line) {
    std::vector<int> scope;
    for (std::size_t k = from; k < words.size(); ++k) {
      const int x = p.var_index(words[k]);
      if (x < 0) throw ParseError(line, "unknown variable '" + words[k] + "'");
      if (std::find(scope.begin(), scope.end(), x) != scope.end())
        throw ParseError(line, "variable '" + words[k] + "' repeated in scope");
      scope.push_back(x);
    }
    if (scope.empty()) throw ParseError(line, "empty scope");
    return scope;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto w = split(raw);
    if (w.empty()) continue;

    if (open) {
      if (w[0] == "end") {
        if (w.size() != 1) throw ParseError(lineno, "unexpected text after 'end'");
        open = nullptr;
        continue;
      }
      if (w.size() != open->scope.size())
        throw ParseError(lineno, "row has " + std::to_string(w.size()) + " values, scope has " +
                                     std::to_string(open->scope.size()));
      if (open->kind == ConstraintKind::tuples) {
        std::vector<int> row;
        for (std::size_t k = 0; k < w.size(); ++k) {
          const int v = to_int(w[k], lineno);
          const auto& dom = p.values[open->scope[k]];
          if (!std::binary_search(dom.begin(), dom.end(), v))
            throw ParseError(lineno, "value " + std::to_string(v) + " not in domain of " + p.names[open->scope[k]]);
          row.push_back(v);
        }
        open->rows.push_back(row);
      } else {
        std::vector<std::pair<int, int>> row;
        for (std::size_t k = 0; k < w.size(); ++k) {
          const auto r = to_range(w[k], lineno);
          const auto& dom = p.values[open->scope[k]];
          if (std::lower_bound(dom.begin(), dom.end(), r.first) == std::upper_bound(dom.begin(), dom.end(), r.second))
            throw ParseError(lineno, "interval " + w[k] + " holds no value of " + p.names[open->scope[k]]);
          row.push_back(r);
        }
        open->interval_rows.push_back(row);
      }
      continue;
    }

    const std::string& kw = w[0];
    if (kw == "var") {
      if (w.size() < 3) throw ParseError(lineno, "var needs a name and at least one value");
      if (p.var_index(w[1]) >= 0) throw ParseError(lineno, "variable '" + w[1] + "' declared twice");
      std::set<int> vals;
      for (std::size_t k = 2; k < w.size(); ++k) {
        const auto [lo, hi] = to_range(w[k], lineno);
        if (static_cast<long long>(hi) - lo > 1000000) throw ParseError(lineno, "domain too large");
        for (int v = lo; v <= hi; ++v) vals.insert(v);
      }
      p.names.push_back(w[1]);
      p.values.emplace_back(vals.begin(), vals.end());
    } else if (kw == "tuples" || kw == "interval-tuples") {
      ProblemConstraint c;
      c.kind = kw == "tuples" ? ConstraintKind::tuples : ConstraintKind::interval_tuples;
      c.line = lineno;
      c.scope = scope_of(w, 1, lineno);
      p.constraints.push_back(std::move(c));
      open = &p.constraints.back();
      open_line = lineno;
    } else if (kw == "mdd-ref") {
      if (w.size() < 3) throw ParseError(lineno, "mdd-ref needs a path and a scope");
      ProblemConstraint c;
      c.kind = ConstraintKind::mdd_ref;
      c.line = lineno;
      c.scope = scope_of(w, 2, lineno);
      if (!std::is_sorted(c.scope.begin(), c.scope.end()))
        throw ParseError(lineno, "mdd-ref scope must follow declaration order");
      std::filesystem::path path(w[1]);
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      c.path = path.string();
      std::ifstream f(c.path);
      if (!f) throw ParseError(lineno, "cannot open '" + c.path + "'");
      try {
        c.mdd = read_mdd(f);
      } catch (const std::exception& e) {
        throw ParseError(lineno, "bad diagram in '" + c.path + "': " + e.what());
      }
      if (c.mdd.num_vars() != static_cast<int>(c.scope.size()))
        throw ParseError(lineno, "diagram has " + std::to_string(c.mdd.num_vars()) + " layers, scope has " +
                                     std::to_string(c.scope.size()));
      for (EdgeId e = 0; e < c.mdd.edge_capacity(); ++e) {
        const Edge& ed = c.mdd.edge(e);
        if (!ed.alive || ed.label == kWildcard) continue;
        const auto& dom = p.values[c.scope[c.mdd.layer(ed.source)]];
        if (!std::binary_search(dom.begin(), dom.end(), ed.label))
          throw ParseError(lineno, "diagram label " + std::to_string(ed.label) + " not in domain of " +
                                       p.names[c.scope[c.mdd.layer(ed.source)]]);
      }
      p.constraints.push_back(std::move(c));
    } else if (kw == "alldifferent") {
      ProblemConstraint c;
      c.kind = ConstraintKind::alldifferent;
      c.line = lineno;
      c.scope = scope_of(w, 1, lineno);
      p.constraints.push_back(std::move(c));
    } else if (kw == "option") {
      if (w.size() != 3) throw ParseError(lineno, "option needs a key and a value");
      if (!kOptionKeys.count(w[1])) throw ParseError(lineno, "unknown option '" + w[1] + "'");
      p.options[w[1]] = w[2];
    } else if (kw == "end") {
      throw ParseError(lineno, "'end' without an open table");
    } else {
      throw ParseError(lineno, "unknown keyword '" + kw + "'");
    }
  }
  if (open) throw ParseError(open_line, "table is missing its 'end' line");
  return p;
}

Problem parse_problem_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(0, "cannot open '" + path + "'");
  return parse_problem(f, std::filesystem::path(path).parent_path().string());
}

namespace {

DomainStore domains_of(const Problem& p, const std::vector<int>& scope) {
  std::vector<std::vector<int>> v;
  for (int x : scope) v.push_back(p.values[x]);
  return DomainStore(v);
}

}  // namespace

Mdd constraint_mdd(const Problem& p, const ProblemConstraint& c, std::vector<int>& scope) {
  if (c.kind == ConstraintKind::mdd_ref) {
    scope = c.scope;
    return c.mdd;
  }
  if (c.kind == ConstraintKind::alldifferent) throw std::invalid_argument("alldifferent has no diagram");
  std::vector<int> order(c.scope.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return c.scope[a] < c.scope[b]; });
  scope.clear();
  for (int k : order) scope.push_back(c.scope[k]);
  const DomainStore dom = domains_of(p, scope);
  std::vector<int> layers(scope.size());
  std::iota(layers.begin(), layers.end(), 0);
  if (c.kind == ConstraintKind::tuples) {
    TupleTable t{layers, {}};
    for (const auto& row : c.rows) {
      std::vector<int> r;
      for (int k : order) r.push_back(row[k]);
      t.rows.push_back(r);
    }
    return build_from_tuples(t, dom);
  }
  IntervalTable t{layers, {}};
  for (const auto& row : c.interval_rows) {
    std::vector<std::pair<int, int>> r;
    for (int k : order) r.push_back(row[k]);
    t.rows.push_back(r);
  }
  if (t.rows.empty()) throw EmptyConstraint("interval table has no rows");
  return reduce_static(expand_to_mdd(build_interval_dag(t, dom), dom), dom, ReduceMode::full);
}

IntervalDag constraint_interval_dag(const Problem& p, const ProblemConstraint& c) {
  if (c.kind != ConstraintKind::interval_tuples) throw std::invalid_argument("not an interval table");
  if (c.interval_rows.empty()) throw EmptyConstraint("interval table has no rows");
  std::vector<int> layers(c.scope.size());
  std::iota(layers.begin(), layers.end(), 0);
  return build_interval_dag({layers, c.interval_rows}, domains_of(p, c.scope));
}

}  // namespace mddc
