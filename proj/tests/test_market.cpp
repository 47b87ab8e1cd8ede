#include "doctest.h"

#include "fmg/market.hpp"

#include <cmath>

using namespace fmg;

namespace {

Market exampleOneMarket() {
  return Market::fromOriginal(Mat{{10, 3}, {3, 10}}, Vec{10, 10});
}

}  // namespace

TEST_SUITE_BEGIN("market");

TEST_CASE("normalization rescales rows and money") {
  Market mk = exampleOneMarket();
  CHECK(mk.utilityRat()[0][0] == Rat(10, 13));
  CHECK(mk.utilityRat()[0][1] == Rat(3, 13));
  CHECK(mk.utilityRat()[1][0] == Rat(3, 13));
  CHECK(mk.utilityRat()[1][1] == Rat(10, 13));
  CHECK(mk.moneyRat()[0] == Rat(1, 2));
  CHECK(mk.moneyRat()[1] == Rat(1, 2));
  CHECK(mk.moneyScaleRat() == Rat(20));
  CHECK(mk.originalUtilityRat(0, 0) == Rat(10));
}

TEST_CASE("already-normalized row is unchanged") {
  Market mk = Market::fromOriginal(RatMat{{Rat(1), Rat(0), Rat(0)}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)}},
                                   RatVec{Rat(1, 2), Rat(1, 2)});
  CHECK(mk.utilityRat()[0][0] == Rat(1));
  CHECK(mk.utilityRat()[0][1] == Rat(0));
  CHECK(mk.utilityScaleRat(0) == Rat(1));
}

TEST_CASE("money normalization from the three-good market") {
  // endowments <7,3> scale to (7/10, 3/10)
  Market mk = Market::fromOriginal(Mat{{6, 2, 2}, {0.5, 2.5, 7}}, Vec{7, 3});
  CHECK(mk.moneyRat()[0] == Rat(7, 10));
  CHECK(mk.moneyRat()[1] == Rat(3, 10));
}

TEST_CASE("normalization rejects bad inputs") {
  CHECK_THROWS_AS((void)Market::fromOriginal(Mat{{0, 0}, {1, 1}}, Vec{1, 1}), Error);
  CHECK_THROWS_AS((void)Market::fromOriginal(Mat{{1, 1}, {1, 1}}, Vec{1, 0}), Error);
  CHECK_THROWS_AS((void)Market::fromOriginal(Mat{{1, 1}, {1, 1}}, Vec{1, -2}), Error);
  CHECK_THROWS_AS((void)Market::fromOriginal(Mat{{1, 1}}, Vec{1}), Error);
}

TEST_CASE("strategy profiles normalize rows and detect symmetry") {
  StrategyProfile p = StrategyProfile::fromRows(Mat{{1, 19}, {1, 19}});
  CHECK(p.rowRat(0)[0] == Rat(1, 20));
  CHECK(p.rowRat(1)[1] == Rat(19, 20));
  CHECK(p.symmetric());
  StrategyProfile q = StrategyProfile::fromRows(Mat{{1, 19}, {2, 19}});
  CHECK(!q.symmetric());
  // positive row scaling lands on the same normalized point
  StrategyProfile r = StrategyProfile::fromRows(Mat{{5, 95}, {1, 19}});
  CHECK(r.rowRat(0) == p.rowRat(0));
  CHECK_THROWS_AS((void)StrategyProfile::fromRows(Mat{{0, 0}, {1, 1}}), Error);
}

TEST_CASE("truthful equilibrium of the opening example") {
  Market mk = exampleOneMarket();
  auto out = solveEquilibrium(mk, StrategyProfile::truthful(mk));
  Vec p = out.originalPrices(mk);
  CHECK(p[0] == doctest::Approx(10.0).epsilon(1e-7));
  CHECK(p[1] == doctest::Approx(10.0).epsilon(1e-7));
  CHECK(out.residual <= 1e-9);
  // each buyer pinned to her own good
  CHECK(out.graph.hasEdge(0, 0));
  CHECK(out.graph.hasEdge(1, 1));
  CHECK(!out.graph.hasEdge(0, 1));
  CHECK(!out.graph.hasEdge(1, 0));
}

TEST_CASE("feigned row moves prices to (5,15)") {
  Market mk = exampleOneMarket();
  auto profile = StrategyProfile::fromRows(Mat{{5, 15}, {3, 10}});
  auto out = solveEquilibrium(mk, profile);
  Vec p = out.originalPrices(mk);
  CHECK(p[0] == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(p[1] == doctest::Approx(15.0).epsilon(1e-7));
}

TEST_CASE("symmetric profile prices follow the common row") {
  Market mk = exampleOneMarket();
  auto profile = StrategyProfile::fromRows(Mat{{1, 19}, {1, 19}});
  auto out = solveEquilibrium(mk, profile);
  Vec p = out.originalPrices(mk);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(19.0).epsilon(1e-9));
  // complete bipartite tight graph: a 4-cycle
  CHECK(out.graph.edges.size() == 4);
  CHECK(out.graph.buyerOnCycle(0));
  CHECK(out.graph.edgeOnCycle(0, 0));
  CHECK(!out.graph.isForest());
}

TEST_CASE("perturbed profile breaks the cycle into a tree") {
  Market mk = exampleOneMarket();
  auto profile = StrategyProfile::fromRows(Mat{{1.1, 18.9}, {1, 19}});
  auto out = solveEquilibrium(mk, profile);
  Vec p = out.originalPrices(mk);
  CHECK(p[0] == doctest::Approx(1.1).epsilon(1e-7));
  CHECK(p[1] == doctest::Approx(18.9).epsilon(1e-7));
  CHECK(out.graph.isForest());
  CHECK(out.graph.edges.size() == 3);  // buyer 2 only tight on good 2
  CHECK(!out.graph.hasEdge(1, 0));
}

TEST_CASE("three-buyer truthful market settles at the split prices") {
  Market mk = Market::fromOriginal(Mat{{2, 0.1}, {4, 9}, {0.1, 2}}, Vec{50, 100, 50});
  auto out = solveEquilibrium(mk, StrategyProfile::truthful(mk));
  Vec p = out.originalPrices(mk);
  CHECK(p[0] == doctest::Approx(800.0 / 13).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(1800.0 / 13).epsilon(1e-6));
  CHECK(out.graph.minGoodDegree() == 2);
}

TEST_CASE("solution graph obeys the relaxed bang-per-buck rule") {
  SolutionGraph g = solutionGraph(Mat{{1, 0}}, Vec{1, 1}, 1e-6);
  CHECK(g.edges.size() == 1);
  CHECK(g.hasEdge(0, 0));
  CHECK(!g.hasEdge(0, 1));

  // single shared good between the two rows
  SolutionGraph h = solutionGraph(Mat{{0.5, 0.5}, {0.5, 0.5}}, Vec{0.5, 0.5}, 1e-6);
  CHECK(h.edges.size() == 4);
  CHECK(h.minGoodDegree() == 2);

  CHECK_THROWS_AS((void)solutionGraph(Mat{{1, 0}}, Vec{1, 0}, 1e-6), Error);
}

TEST_CASE("row scaling leaves prices and tight edges unchanged") {
  Market mk = Market::fromOriginal(Mat{{4, 3, 2}, {1, 2, 5}}, Vec{6, 4});
  auto base = StrategyProfile::fromRows(Mat{{2, 1, 1}, {1, 3, 4}});
  auto scaled = StrategyProfile::fromRows(Mat{{6, 3, 3}, {1, 3, 4}});
  auto a = solveEquilibrium(mk, base);
  auto b = solveEquilibrium(mk, scaled);
  for (int j = 0; j < 3; ++j) CHECK(a.prices[j] == doctest::Approx(b.prices[j]).epsilon(1e-9));
  CHECK(a.graph.edges == b.graph.edges);
}

TEST_CASE("two seeds agree on prices") {
  Market mk = Market::fromOriginal(Mat{{3, 5, 1}, {2, 2, 6}, {7, 1, 1}}, Vec{2, 3, 4});
  auto p1 = solveEquilibrium(mk, StrategyProfile::truthful(mk), {}, SolverSeed::ProportionalBids);
  auto p2 = solveEquilibrium(mk, StrategyProfile::truthful(mk), {}, SolverSeed::UniformBids);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(p1.prices[j] - p2.prices[j]) <= 10 * 1e-9);
}

TEST_CASE("goods nobody reports are a price collapse") {
  Market mk = Market::fromOriginal(Mat{{1, 1}, {1, 1}}, Vec{1, 1});
  auto profile = StrategyProfile::fromRows(Mat{{1, 0}, {1, 0}});
  CHECK_THROWS_AS((void)solveEquilibrium(mk, profile), Error);
}

TEST_CASE("tolerance overrides are sanity-checked") {
  Tolerances t;
  t.tauTight = 1e-12;  // would sit under the solver residual
  CHECK_THROWS_AS(t.validate(), Error);
  Tolerances ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_SUITE_END();
