#pragma once

#include "fmg/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fmg {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

// Error taxonomy shared by all layers.
enum class ErrorCode {
  ZeroUtilityRow,
  NonpositiveMoney,
  ConvergenceFailure,
  PriceCollapse,
  InfeasiblePolytope,
  DegenerateAlphaCap,
  IterationOverrun,
  SearchBudgetExceeded,
  RatioIntervalEmpty,
  PointOffCurve,
  InvalidInput,
  ToleranceBreach,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* errorCodeName(ErrorCode code);

// Numeric knobs. Defaults are in normalized units (row sums and total money
// scaled to one); epsDev is measured on original-unit payoffs.
struct Tolerances {
  double epsEq = 1e-9;      // equilibrium flow residual
  double tauTight = 1e-6;   // relative slack for tight-edge membership
  double epsPrice = 1e-12;  // below this a price counts as collapsed
  double epsPay = 1e-8;     // payoff comparisons / product-maximizer stop
  double epsPoly = 1e-9;    // float fallback for polyhedral membership
  double epsDev = 1e-4;     // best-response gap below which a buyer is content
  double epsLp = 1e-7;      // dual certificate slack
  long maxSolverIterations = 1000000;

  void validate() const;  // throws InvalidInput on inconsistent overrides
};

// A linear Fisher market held in normalized form (each true-utility row sums
// to one, money sums to one) with the original scales kept for reporting.
// Quantities are fixed at one unit of each good. Immutable after build.
class Market {
 public:
  static Market fromOriginal(const RatMat& utilities, const RatVec& money);
  static Market fromOriginal(const Mat& utilities, const Vec& money);

  int numBuyers() const { return m_; }
  int numGoods() const { return n_; }

  const Mat& utility() const { return util_; }             // normalized rows
  const Vec& money() const { return money_; }              // normalized
  const RatMat& utilityRat() const { return utilRat_; }    // normalized, exact
  const RatVec& moneyRat() const { return moneyRat_; }

  // Per-buyer original row sum; normalized payoff * scale = original payoff.
  double utilityScale(int buyer) const { return utilScale_[buyer]; }
  const Rat& utilityScaleRat(int buyer) const { return utilScaleRat_[buyer]; }
  double moneyScale() const { return moneyScale_; }
  const Rat& moneyScaleRat() const { return moneyScaleRat_; }

  Rat originalUtilityRat(int buyer, int good) const {
    return utilRat_[buyer][good] * utilScaleRat_[buyer];
  }
  double originalUtility(int buyer, int good) const {
    return toDouble(originalUtilityRat(buyer, good));
  }
  Rat originalMoneyRat(int buyer) const { return moneyRat_[buyer] * moneyScaleRat_; }

 private:
  Market() = default;
  int m_ = 0, n_ = 0;
  Mat util_;
  Vec money_;
  RatMat utilRat_;
  RatVec moneyRat_;
  Vec utilScale_;
  RatVec utilScaleRat_;
  double moneyScale_ = 1.0;
  Rat moneyScaleRat_ = 1;
};

// One reported utility row per buyer, stored normalized (rows sum to one).
class StrategyProfile {
 public:
  static StrategyProfile fromRows(const RatMat& rows);
  static StrategyProfile fromRows(const Mat& rows);
  static StrategyProfile truthful(const Market& market);
  // All rows equal to the given row.
  static StrategyProfile symmetric(const RatVec& row, int numBuyers);

  int numBuyers() const { return static_cast<int>(rows_.size()); }
  int numGoods() const { return rows_.empty() ? 0 : static_cast<int>(rows_[0].size()); }

  const Mat& rows() const { return rowsD_; }
  const RatMat& rowsRat() const { return rows_; }
  const Vec& row(int buyer) const { return rowsD_[buyer]; }
  const RatVec& rowRat(int buyer) const { return rows_[buyer]; }

  bool symmetric() const;

  StrategyProfile withRow(int buyer, const RatVec& newRow) const;

 private:
  RatMat rows_;
  Mat rowsD_;
};

// Bipartite tight-edge structure between buyer and good nodes.
struct SolutionGraph {
  int numBuyers = 0;
  int numGoods = 0;
  std::vector<std::pair<int, int>> edges;      // (buyer, good), sorted
  std::vector<std::vector<int>> buyerAdj;      // goods tight for each buyer
  std::vector<std::vector<int>> goodAdj;       // buyers tight for each good

  bool hasEdge(int buyer, int good) const;
  int edgeIndex(int buyer, int good) const;    // -1 if absent
  int minGoodDegree() const;
  // True when the edge lies on some cycle (i.e. it is not a bridge).
  bool edgeOnCycle(int buyer, int good) const;
  bool buyerOnCycle(int buyer) const;
  bool isForest() const;
};

// Equilibrium prices plus the tight-edge graph for one strategy profile.
struct EquilibriumOutcome {
  Vec prices;               // normalized units (sums to one)
  SolutionGraph graph;
  double residual = 0.0;    // accepted flow residual
  long iterations = 0;

  Vec originalPrices(const Market& market) const;
};

// Row-normalizes utilities and money; the public construction path for raw
// inputs. Throws ZeroUtilityRow / NonpositiveMoney.
Market normalizeMarket(const RatMat& utilities, const RatVec& money);

// Tight-edge graph under the tolerance-relaxed bang-per-buck rule; a total
// function of (reported rows, positive prices).
SolutionGraph solutionGraph(const Mat& reportedRows, const Vec& prices, double tauTight);

enum class SolverSeed { ProportionalBids, UniformBids };

// Equilibrium prices for the Fisher market induced by (profile, money) via
// proportional-response iteration on money bids. Prices are accepted once a
// nonnegative flow supported on the tight edges matches budgets and prices
// within tol.epsEq.
EquilibriumOutcome solveEquilibrium(const Market& market, const StrategyProfile& profile,
                                    const Tolerances& tol = {},
                                    SolverSeed seed = SolverSeed::ProportionalBids);

}  // namespace fmg
