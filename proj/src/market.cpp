#include "fmg/market.hpp"

#include "fmg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace fmg {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroUtilityRow: return "ZeroUtilityRow";
    case ErrorCode::NonpositiveMoney: return "NonpositiveMoney";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::PriceCollapse: return "PriceCollapse";
    case ErrorCode::InfeasiblePolytope: return "InfeasiblePolytope";
    case ErrorCode::DegenerateAlphaCap: return "DegenerateAlphaCap";
    case ErrorCode::IterationOverrun: return "IterationOverrun";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::RatioIntervalEmpty: return "RatioIntervalEmpty";
    case ErrorCode::PointOffCurve: return "PointOffCurve";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ToleranceBreach: return "ToleranceBreach";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  if (epsEq <= 0 || tauTight <= 0 || epsPrice <= 0 || epsPay <= 0 || epsPoly <= 0 ||
      epsDev <= 0 || epsLp <= 0 || maxSolverIterations <= 0)
    throw Error(ErrorCode::InvalidInput, "tolerances must be positive");
  if (!(epsEq < tauTight))
    throw Error(ErrorCode::InvalidInput, "tolerance ordering violated: require epsEq < tauTight");
  if (!(epsPrice <= epsEq))
    throw Error(ErrorCode::InvalidInput, "tolerance ordering violated: require epsPrice <= epsEq");
}

Market Market::fromOriginal(const RatMat& utilities, const RatVec& money) {
  if (utilities.size() < 2) throw Error(ErrorCode::InvalidInput, "need at least two buyers");
  if (money.size() != utilities.size())
    throw Error(ErrorCode::InvalidInput, "money vector length must match buyer count");
  const std::size_t n = utilities[0].size();
  if (n < 1) throw Error(ErrorCode::InvalidInput, "need at least one good");

  Market mk;
  mk.m_ = static_cast<int>(utilities.size());
  mk.n_ = static_cast<int>(n);
  mk.utilRat_.resize(mk.m_);
  mk.utilScaleRat_.resize(mk.m_);
  for (int i = 0; i < mk.m_; ++i) {
    if (utilities[i].size() != n)
      throw Error(ErrorCode::InvalidInput, "ragged utility matrix");
    Rat rowSum = 0;
    for (const Rat& u : utilities[i]) {
      if (u < 0) throw Error(ErrorCode::InvalidInput, "negative utility entry");
      rowSum += u;
    }
    if (rowSum == 0)
      throw Error(ErrorCode::ZeroUtilityRow, "buyer " + std::to_string(i) + " values nothing");
    mk.utilScaleRat_[i] = rowSum;
    mk.utilRat_[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) mk.utilRat_[i][j] = utilities[i][j] / rowSum;
  }

  Rat moneySum = 0;
  for (const Rat& v : money) {
    if (v <= 0) throw Error(ErrorCode::NonpositiveMoney, "all endowments must be positive");
    moneySum += v;
  }
  mk.moneyScaleRat_ = moneySum;
  mk.moneyRat_.resize(mk.m_);
  for (int i = 0; i < mk.m_; ++i) mk.moneyRat_[i] = money[i] / moneySum;

  mk.util_.resize(mk.m_, Vec(n));
  mk.utilScale_.resize(mk.m_);
  mk.money_.resize(mk.m_);
  for (int i = 0; i < mk.m_; ++i) {
    mk.utilScale_[i] = toDouble(mk.utilScaleRat_[i]);
    mk.money_[i] = toDouble(mk.moneyRat_[i]);
    for (std::size_t j = 0; j < n; ++j) mk.util_[i][j] = toDouble(mk.utilRat_[i][j]);
  }
  mk.moneyScale_ = toDouble(moneySum);
  return mk;
}

Market Market::fromOriginal(const Mat& utilities, const Vec& money) {
  RatMat u(utilities.size());
  for (std::size_t i = 0; i < utilities.size(); ++i)
    u[i] = RatVec(utilities[i].begin(), utilities[i].end());
  RatVec m(money.begin(), money.end());
  return fromOriginal(u, m);
}

Market normalizeMarket(const RatMat& utilities, const RatVec& money) {
  return Market::fromOriginal(utilities, money);
}

StrategyProfile StrategyProfile::fromRows(const RatMat& rows) {
  if (rows.empty()) throw Error(ErrorCode::InvalidInput, "empty profile");
  StrategyProfile p;
  const std::size_t n = rows[0].size();
  p.rows_.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw Error(ErrorCode::InvalidInput, "ragged profile");
    Rat sum = 0;
    for (const Rat& s : rows[i]) {
      if (s < 0) throw Error(ErrorCode::InvalidInput, "negative strategy entry");
      sum += s;
    }
    if (sum == 0)
      throw Error(ErrorCode::InvalidInput,
                  "strategy row " + std::to_string(i) + " sums to zero");
    p.rows_[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) p.rows_[i][j] = rows[i][j] / sum;
  }
  p.rowsD_.resize(rows.size(), Vec(n));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) p.rowsD_[i][j] = toDouble(p.rows_[i][j]);
  return p;
}

StrategyProfile StrategyProfile::fromRows(const Mat& rows) {
  RatMat r(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    r[i] = RatVec(rows[i].begin(), rows[i].end());
  return fromRows(r);
}

StrategyProfile StrategyProfile::truthful(const Market& market) {
  return fromRows(market.utilityRat());
}

StrategyProfile StrategyProfile::symmetric(const RatVec& row, int numBuyers) {
  return fromRows(RatMat(numBuyers, row));
}

bool StrategyProfile::symmetric() const {
  for (std::size_t i = 1; i < rows_.size(); ++i)
    if (rows_[i] != rows_[0]) return false;
  return true;
}

StrategyProfile StrategyProfile::withRow(int buyer, const RatVec& newRow) const {
  RatMat rows = rows_;
  rows.at(buyer) = newRow;
  return fromRows(rows);
}

bool SolutionGraph::hasEdge(int buyer, int good) const { return edgeIndex(buyer, good) >= 0; }

int SolutionGraph::edgeIndex(int buyer, int good) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(buyer, good));
  if (it != edges.end() && *it == std::make_pair(buyer, good))
    return static_cast<int>(it - edges.begin());
  return -1;
}

int SolutionGraph::minGoodDegree() const {
  int d = numBuyers + 1;
  for (const auto& adj : goodAdj) d = std::min(d, static_cast<int>(adj.size()));
  return d;
}

namespace {

// Connectivity probe: are buyer node `from` and good node `to` connected when
// one edge is dropped? Nodes: buyers 0..m-1, goods m..m+n-1.
bool connectedWithout(const SolutionGraph& g, int fromBuyer, int toGood, int skipEdge) {
  const int total = g.numBuyers + g.numGoods;
  std::vector<char> seen(total, 0);
  std::deque<int> queue{fromBuyer};
  seen[fromBuyer] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == g.numBuyers + toGood) return true;
    if (v < g.numBuyers) {
      for (int j : g.buyerAdj[v]) {
        if (g.edgeIndex(v, j) == skipEdge) continue;
        int node = g.numBuyers + j;
        if (!seen[node]) { seen[node] = 1; queue.push_back(node); }
      }
    } else {
      int j = v - g.numBuyers;
      for (int i : g.goodAdj[j]) {
        if (g.edgeIndex(i, j) == skipEdge) continue;
        if (!seen[i]) { seen[i] = 1; queue.push_back(i); }
      }
    }
  }
  return false;
}

}  // namespace

bool SolutionGraph::edgeOnCycle(int buyer, int good) const {
  int idx = edgeIndex(buyer, good);
  if (idx < 0) return false;
  return connectedWithout(*this, buyer, good, idx);
}

bool SolutionGraph::buyerOnCycle(int buyer) const {
  for (int good : buyerAdj[buyer])
    if (edgeOnCycle(buyer, good)) return true;
  return false;
}

bool SolutionGraph::isForest() const {
  for (const auto& [buyer, good] : edges)
    if (edgeOnCycle(buyer, good)) return false;
  return true;
}

Vec EquilibriumOutcome::originalPrices(const Market& market) const {
  Vec p = prices;
  for (double& v : p) v *= market.moneyScale();
  return p;
}

SolutionGraph solutionGraph(const Mat& reportedRows, const Vec& prices, double tauTight) {
  const int m = static_cast<int>(reportedRows.size());
  const int n = static_cast<int>(prices.size());
  for (double p : prices)
    if (!(p > 0)) throw Error(ErrorCode::InvalidInput, "solution graph needs positive prices");

  SolutionGraph g;
  g.numBuyers = m;
  g.numGoods = n;
  g.buyerAdj.resize(m);
  g.goodAdj.resize(n);
  for (int i = 0; i < m; ++i) {
    double best = 0;
    for (int j = 0; j < n; ++j) best = std::max(best, reportedRows[i][j] / prices[j]);
    if (best <= 0) throw Error(ErrorCode::InvalidInput, "buyer with all-zero reported row");
    for (int j = 0; j < n; ++j) {
      if (reportedRows[i][j] / prices[j] >= (1.0 - tauTight) * best) {
        g.edges.emplace_back(i, j);
        g.buyerAdj[i].push_back(j);
        g.goodAdj[j].push_back(i);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

namespace {

// Least total violation of a transportation system on the given edges:
// row sums should hit budgets, column sums should hit prices.
double flowResidualOnGraph(const SolutionGraph& g, const Vec& money, const Vec& prices,
                           Vec* flowOut) {
  const int m = g.numBuyers, n = g.numGoods;
  const std::size_t e = g.edges.size();
  // variables: flows on edges, then (plus,minus) slack per row constraint
  const std::size_t nv = e + 2 * static_cast<std::size_t>(m + n);
  LinearProgramD lp(nv);
  std::vector<double> obj(nv, 0.0);
  for (std::size_t k = e; k < nv; ++k) obj[k] = -1.0;  // maximize -(sum of slacks)
  lp.setObjective(obj);

  for (int i = 0; i < m; ++i) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t k = 0; k < e; ++k)
      if (g.edges[k].first == i) row[k] = 1.0;
    row[e + 2 * i] = 1.0;
    row[e + 2 * i + 1] = -1.0;
    lp.addRow(std::move(row), LinearProgramD::Rel::Eq, money[i]);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t k = 0; k < e; ++k)
      if (g.edges[k].second == j) row[k] = 1.0;
    row[e + 2 * (m + j)] = 1.0;
    row[e + 2 * (m + j) + 1] = -1.0;
    lp.addRow(std::move(row), LinearProgramD::Rel::Eq, prices[j]);
  }

  auto res = lp.maximize();
  if (res.status != LpStatus::Optimal) return 1e30;
  if (flowOut) flowOut->assign(res.x.begin(), res.x.begin() + e);
  return -res.objective;
}

}  // namespace

EquilibriumOutcome solveEquilibrium(const Market& market, const StrategyProfile& profile,
                                    const Tolerances& tol, SolverSeed seed) {
  tol.validate();
  const int m = market.numBuyers(), n = market.numGoods();
  if (profile.numBuyers() != m || profile.numGoods() != n)
    throw Error(ErrorCode::InvalidInput, "profile shape does not match market");

  const Mat& s = profile.rows();
  const Vec& money = market.money();

  for (int j = 0; j < n; ++j) {
    double top = 0;
    for (int i = 0; i < m; ++i) top = std::max(top, s[i][j]);
    if (top <= 0)
      throw Error(ErrorCode::PriceCollapse,
                  "good " + std::to_string(j) + " is valued by no reported row");
  }

  // Money bids; proportional-response update multiplies each bid by its
  // realized bang-per-buck and renormalizes to the budget.
  Mat bids(m, Vec(n, 0.0));
  for (int i = 0; i < m; ++i) {
    if (seed == SolverSeed::ProportionalBids) {
      for (int j = 0; j < n; ++j) bids[i][j] = money[i] * s[i][j];
    } else {
      int support = 0;
      for (int j = 0; j < n; ++j)
        if (s[i][j] > 0) ++support;
      for (int j = 0; j < n; ++j) bids[i][j] = s[i][j] > 0 ? money[i] / support : 0.0;
    }
  }

  // Acceptance runs against a near-exact tight graph so the reported prices
  // are equilibrium-accurate at the epsEq scale; tauTight only widens the
  // *reported* graph per the inclusive edge rule.
  const double tauAccept = 10 * tol.epsEq;
  const int lpCheckEvery = 512;

  Vec prices(n, 0.0);
  EquilibriumOutcome out;
  for (long iter = 0; iter < tol.maxSolverIterations; ++iter) {
    for (int j = 0; j < n; ++j) {
      double p = 0;
      for (int i = 0; i < m; ++i) p += bids[i][j];
      prices[j] = p;
    }
    for (int j = 0; j < n; ++j)
      if (prices[j] < tol.epsPrice)
        throw Error(ErrorCode::PriceCollapse, "price of good " + std::to_string(j) +
                                                  " collapsed below epsPrice");

    // Bid mass resting on non-tight edges. The bids themselves are a flow
    // with exact marginals, so once the stray mass is inside budget the
    // restriction to tight edges witnesses acceptance without an LP.
    double stray = 0;
    for (int i = 0; i < m; ++i) {
      double best = 0;
      for (int j = 0; j < n; ++j) best = std::max(best, s[i][j] / prices[j]);
      for (int j = 0; j < n; ++j)
        if (bids[i][j] > 0 && s[i][j] / prices[j] < (1.0 - tauAccept) * best)
          stray += bids[i][j];
    }
    bool accepted = stray <= 0.5 * tol.epsEq;
    double residual = stray;
    if (!accepted && iter > 0 && iter % lpCheckEvery == 0) {
      SolutionGraph g = solutionGraph(s, prices, tauAccept);
      residual = flowResidualOnGraph(g, money, prices, nullptr);
      accepted = residual <= tol.epsEq;
    }
    if (accepted) {
      out.prices = prices;
      out.graph = solutionGraph(s, prices, tol.tauTight);
      out.residual = residual;
      out.iterations = iter;
      return out;
    }

    for (int i = 0; i < m; ++i) {
      double value = 0;
      for (int j = 0; j < n; ++j)
        if (bids[i][j] > 0) value += s[i][j] * bids[i][j] / prices[j];
      for (int j = 0; j < n; ++j)
        if (bids[i][j] > 0) bids[i][j] = money[i] * (s[i][j] * bids[i][j] / prices[j]) / value;
    }
  }

  SolutionGraph g = solutionGraph(s, prices, tauAccept);
  double residual = flowResidualOnGraph(g, money, prices, nullptr);
  throw Error(ErrorCode::ConvergenceFailure,
              "equilibrium solver stalled after " + std::to_string(tol.maxSolverIterations) +
                  " iterations, residual " + std::to_string(residual));
}

}  // namespace fmg
