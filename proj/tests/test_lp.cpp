#include "doctest.h"

#include "fmg/lp.hpp"

#include <cmath>

using namespace fmg;

TEST_SUITE_BEGIN("lp");

TEST_CASE("simple maximization with inequalities") {
  // max x + y  s.t. x + 2y <= 4, 3x + y <= 6
  LinearProgramD lp(2);
  lp.setObjective({1.0, 1.0});
  lp.addRow({1.0, 2.0}, LinearProgramD::Rel::Le, 4.0);
  lp.addRow({3.0, 1.0}, LinearProgramD::Rel::Le, 6.0);
  auto res = lp.maximize();
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(2.8));
  CHECK(res.x[0] == doctest::Approx(1.6));
  CHECK(res.x[1] == doctest::Approx(1.2));
}

TEST_CASE("equality constraints and minimization") {
  // min 2x + 3y  s.t. x + y = 5, x >= 1 (as -x <= -1)
  LinearProgramD lp(2);
  lp.setObjective({2.0, 3.0});
  lp.addRow({1.0, 1.0}, LinearProgramD::Rel::Eq, 5.0);
  lp.addRow({1.0, 0.0}, LinearProgramD::Rel::Ge, 1.0);
  auto res = lp.minimize();
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(10.0));  // x = 5, y = 0
  CHECK(res.x[0] == doctest::Approx(5.0));
}

TEST_CASE("detects infeasibility and unboundedness") {
  LinearProgramD bad(1);
  bad.addRow({1.0}, LinearProgramD::Rel::Ge, 2.0);
  bad.addRow({1.0}, LinearProgramD::Rel::Le, 1.0);
  CHECK(bad.maximize().status == LpStatus::Infeasible);

  LinearProgramD open(1);
  open.setObjective({1.0});
  open.addRow({-1.0}, LinearProgramD::Rel::Le, 0.0);
  CHECK(open.maximize().status == LpStatus::Unbounded);
}

TEST_CASE("negative rhs rows are handled") {
  // max -x - y s.t. -x - 2y <= -4 (i.e. x + 2y >= 4), y <= 3
  LinearProgramD lp(2);
  lp.setObjective({-1.0, -1.0});
  lp.addRow({-1.0, -2.0}, LinearProgramD::Rel::Le, -4.0);
  lp.addRow({0.0, 1.0}, LinearProgramD::Rel::Le, 3.0);
  auto res = lp.maximize();
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-2.0));  // x = 0, y = 2
}

TEST_CASE("dual certificate matches the optimum") {
  LinearProgramD lp(2);
  lp.setObjective({3.0, 5.0});
  lp.addRow({1.0, 0.0}, LinearProgramD::Rel::Le, 4.0);
  lp.addRow({0.0, 2.0}, LinearProgramD::Rel::Le, 12.0);
  lp.addRow({3.0, 2.0}, LinearProgramD::Rel::Le, 18.0);
  auto res = lp.maximize();
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(36.0));
  // strong duality: y.b equals the optimum, duals feasible
  double yb = res.dual[0] * 4 + res.dual[1] * 12 + res.dual[2] * 18;
  CHECK(yb == doctest::Approx(res.objective).epsilon(1e-9));
  CHECK(res.dual[0] >= -1e-9);
  // reduced costs: c_j - y.A_j <= 0
  CHECK(3.0 - (res.dual[0] + 3 * res.dual[2]) <= 1e-9);
  CHECK(5.0 - (2 * res.dual[1] + 2 * res.dual[2]) <= 1e-9);
}

TEST_CASE("exact rational solve") {
  // max x + y s.t. 3x + y <= 7/2, x + 2y <= 9/4
  LinearProgramQ lp(2);
  lp.setObjective({Rat(1), Rat(1)});
  lp.addRow({Rat(3), Rat(1)}, LinearProgramQ::Rel::Le, Rat(7, 2));
  lp.addRow({Rat(1), Rat(2)}, LinearProgramQ::Rel::Le, Rat(9, 4));
  auto res = lp.maximize();
  REQUIRE(res.status == LpStatus::Optimal);
  // intersection of the two lines: x = 19/20, y = 13/20
  CHECK(res.x[0] == Rat(19, 20));
  CHECK(res.x[1] == Rat(13, 20));
  CHECK(res.objective == Rat(32, 20));
}

TEST_CASE("degenerate transportation system solves exactly") {
  // flows on a 4-cycle: rows (1/2,1/2), cols (1/20, 19/20)
  LinearProgramQ lp(4);  // f11 f12 f21 f22
  lp.addRow({Rat(1), Rat(1), Rat(0), Rat(0)}, LinearProgramQ::Rel::Eq, Rat(1, 2));
  lp.addRow({Rat(0), Rat(0), Rat(1), Rat(1)}, LinearProgramQ::Rel::Eq, Rat(1, 2));
  lp.addRow({Rat(1), Rat(0), Rat(1), Rat(0)}, LinearProgramQ::Rel::Eq, Rat(1, 20));
  lp.addRow({Rat(0), Rat(1), Rat(0), Rat(1)}, LinearProgramQ::Rel::Eq, Rat(19, 20));
  lp.setObjective({Rat(1), Rat(0), Rat(0), Rat(0)});
  auto res = lp.maximize();
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == Rat(1, 20));  // f11 can absorb all of good 1
  auto low = lp.minimize();
  CHECK(low.objective == Rat(0));
}

TEST_SUITE_END();
