#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "mddc/problem_file.hpp"

using namespace mddc;
using namespace testing_support;

namespace {

Problem parse(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("problem file grammar") {
  const Problem p = parse(
      "# comment\n"
      "var x1 1..4\n"
      "var x2 3 1 2 2\n"
      "tuples x2 x1   # columns in any order\n"
      "3 1\n1 2\n3 3\n1 4\n2 4\n3 4\n"
      "end\n"
      "interval-tuples x1 x2\n1..2 1..3\nend\n"
      "alldifferent x1 x2\n"
      "option propagator scan\n");
  CHECK(p.names == std::vector<std::string>{"x1", "x2"});
  CHECK(p.values[1] == std::vector<int>{1, 2, 3});
  REQUIRE(p.constraints.size() == 3);
  CHECK(p.constraints[0].scope == std::vector<int>{1, 0});
  CHECK(p.constraints[1].interval_rows[0][1] == std::pair<int, int>{1, 3});
  CHECK(p.options.at("propagator") == "scan");
  std::vector<int> scope;
  const Mdd m = constraint_mdd(p, p.constraints[0], scope);
  CHECK(scope == std::vector<int>{0, 1});
  CHECK(isomorphic(m, pairs_reduced()));
  CHECK(enumerate_solutions(constraint_mdd(p, p.constraints[1], scope), p.domains()).size() == 6);
}

TEST_CASE("problem file diagnostics carry the line") {
  CHECK(error_line("var x 1 2\nfoo x\n") == 2);
  CHECK(error_line("var x 1 2\nvar y 1\ntuples x y\n1\nend\n") == 4);
  CHECK(error_line("var x 1 2\ntuples x\n\n5\nend\n") == 4);
  CHECK(error_line("var x 1 2\ntuples z\nend\n") == 2);
  CHECK(error_line("var x 1 2\nvar x 3\n") == 2);
  CHECK(error_line("var x 1 2\ntuples x\n1\n") == 2);
  CHECK(error_line("var x 1 2\noption colour red\n") == 2);
  CHECK(error_line("var x 1 2\ninterval-tuples x\n5..9\nend\n") == 3);
  CHECK(error_line("var x 1 2\nmdd-ref /nonexistent/file x\n") == 2);
  CHECK(error_line("var x 1 2\n") == -1);
}
