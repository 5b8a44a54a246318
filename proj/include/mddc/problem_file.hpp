#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mddc/domain_store.hpp"
#include "mddc/interval_mdd.hpp"
#include "mddc/mdd.hpp"

namespace mddc {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class ConstraintKind { tuples, interval_tuples, mdd_ref, alldifferent };

struct ProblemConstraint {
  ConstraintKind kind = ConstraintKind::tuples;
  int line = 0;
  std::vector<int> scope;  // problem variable indices, as written
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<std::pair<int, int>>> interval_rows;
  std::string path;  // mdd-ref, resolved against the problem file's directory
  Mdd mdd;           // mdd-ref, loaded
  std::string label() const;
};

struct Problem {
  std::vector<std::string> names;
  std::vector<std::vector<int>> values;
  std::vector<ProblemConstraint> constraints;
  std::map<std::string, std::string> options;

  int num_vars() const { return static_cast<int>(names.size()); }
  int var_index(const std::string& name) const;  // -1 when unknown
  DomainStore domains() const { return DomainStore(values); }
};

// Line-oriented format; see README for the grammar. base_dir resolves
// relative mdd-ref paths.
Problem parse_problem(std::istream& in, const std::string& base_dir = ".");
Problem parse_problem_file(const std::string& path);

// Fully reduced diagram of a tuples, interval-tuples or mdd-ref constraint.
// Tables are rebuilt over their scope in ascending variable order, which is
// returned in scope; an mdd-ref keeps its written order.
Mdd constraint_mdd(const Problem& p, const ProblemConstraint& c, std::vector<int>& scope);
// interval-tuples rows over the written scope.
IntervalDag constraint_interval_dag(const Problem& p, const ProblemConstraint& c);

}  // namespace mddc
