#include "doctest.h"
#include "locality_sched/simplex.hpp"

#include <stdexcept>

using namespace locsched;

namespace {

LinearConstraint le(std::vector<double> coeffs, double rhs) {
  return {std::move(coeffs), LinearConstraint::Relation::LessEqual, rhs};
}

LinearConstraint eq(std::vector<double> coeffs, double rhs) {
  return {std::move(coeffs), LinearConstraint::Relation::Equal, rhs};
}

}  // namespace

TEST_CASE("simplex solves a basic inequality program") {
  // min -x - 2y  s.t.  x + y <= 4, y <= 3  ->  x=1, y=3, objective -7
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {-1.0, -2.0};
  lp.constraints = {le({1.0, 1.0}, 4.0), le({0.0, 1.0}, 3.0)};
  auto sol = solve_simplex(lp);
  CHECK(sol.objective == doctest::Approx(-7.0).epsilon(1e-9));
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(3.0));
}

TEST_CASE("simplex handles equality constraints via phase 1") {
  // min x + y  s.t.  x + 2y = 4, x <= 3  ->  x=0, y=2
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {1.0, 1.0};
  lp.constraints = {eq({1.0, 2.0}, 4.0), le({1.0, 0.0}, 3.0)};
  auto sol = solve_simplex(lp);
  CHECK(sol.objective == doctest::Approx(2.0));
  CHECK(sol.x[1] == doctest::Approx(2.0));
}

TEST_CASE("simplex detects infeasible programs") {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.objective = {1.0};
  lp.constraints = {eq({1.0}, 2.0), le({1.0}, 1.0)};
  CHECK_THROWS_AS(solve_simplex(lp), std::runtime_error);
}

TEST_CASE("simplex detects unbounded programs") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {-1.0, 0.0};
  lp.constraints = {le({-1.0, 1.0}, 1.0)};
  CHECK_THROWS_AS(solve_simplex(lp), std::runtime_error);
}

TEST_CASE("simplex normalizes negative right-hand sides") {
  // x >= 2 written as -x <= -2; min x  ->  2
  LinearProgram lp;
  lp.num_vars = 1;
  lp.objective = {1.0};
  lp.constraints = {le({-1.0}, -2.0)};
  auto sol = solve_simplex(lp);
  CHECK(sol.objective == doctest::Approx(2.0));
}

TEST_CASE("simplex survives a classic degenerate program") {
  // Beale's cycling example; Bland's rule must terminate.
  LinearProgram lp;
  lp.num_vars = 4;
  lp.objective = {-0.75, 150.0, -0.02, 6.0};
  lp.constraints = {le({0.25, -60.0, -1.0 / 25.0, 9.0}, 0.0),
                    le({0.5, -90.0, -1.0 / 50.0, 3.0}, 0.0), le({0.0, 0.0, 1.0, 0.0}, 1.0)};
  auto sol = solve_simplex(lp);
  CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("simplex handles redundant equality rows") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {1.0, 1.0};
  lp.constraints = {eq({1.0, 1.0}, 2.0), eq({2.0, 2.0}, 4.0)};
  auto sol = solve_simplex(lp);
  CHECK(sol.objective == doctest::Approx(2.0));
}
