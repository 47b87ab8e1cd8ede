#include "fmg/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fmg {

Mat MoneyFlowAllocation::fractions() const {
  Mat x(flow.size(), Vec(prices.size(), 0.0));
  for (std::size_t i = 0; i < flow.size(); ++i)
    for (std::size_t j = 0; j < prices.size(); ++j) x[i][j] = flow[i][j] / prices[j];
  return x;
}

double MoneyFlowAllocation::payoff(const Market& market, int buyer) const {
  double v = 0;
  for (std::size_t j = 0; j < prices.size(); ++j)
    v += market.utility()[buyer][j] * flow[buyer][j] / prices[j];
  return v * market.utilityScale(buyer);
}

Vec MoneyFlowAllocation::payoffs(const Market& market) const {
  Vec out(flow.size());
  for (std::size_t i = 0; i < flow.size(); ++i) out[i] = payoff(market, static_cast<int>(i));
  return out;
}

AllocationSet::AllocationSet(const Market& market, const EquilibriumOutcome& outcome,
                             const Tolerances& tol)
    : market_(&market), outcome_(&outcome), tol_(tol) {}

LinearProgramD AllocationSet::baseProgram() const {
  const auto& g = outcome_->graph;
  const std::size_t e = g.edges.size();
  LinearProgramD lp(e);
  for (int i = 0; i < g.numBuyers; ++i) {
    std::vector<double> row(e, 0.0);
    for (std::size_t k = 0; k < e; ++k)
      if (g.edges[k].first == i) row[k] = 1.0;
    lp.addRow(std::move(row), LinearProgramD::Rel::Eq, market_->money()[i]);
  }
  for (int j = 0; j < g.numGoods; ++j) {
    std::vector<double> row(e, 0.0);
    for (std::size_t k = 0; k < e; ++k)
      if (g.edges[k].second == j) row[k] = 1.0;
    lp.addRow(std::move(row), LinearProgramD::Rel::Eq, outcome_->prices[j]);
  }
  return lp;
}

MoneyFlowAllocation AllocationSet::toAllocation(const std::vector<double>& edgeFlows) const {
  const auto& g = outcome_->graph;
  MoneyFlowAllocation a;
  a.flow.assign(g.numBuyers, Vec(g.numGoods, 0.0));
  a.prices = outcome_->prices;
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    a.flow[g.edges[k].first][g.edges[k].second] = std::max(0.0, edgeFlows[k]);
  return a;
}

double AllocationSet::payoffCoeff(std::size_t k) const {
  const auto [i, j] = outcome_->graph.edges[k];
  return market_->utility()[i][j] / outcome_->prices[j];
}

double AllocationSet::normalizedMaxPayoff(int buyer) const {
  LinearProgramD lp = baseProgram();
  const auto& g = outcome_->graph;
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (g.edges[k].first == buyer) lp.setObjectiveCoeff(k, payoffCoeff(k));
  auto res = lp.maximize();
  if (res.status != LpStatus::Optimal)
    throw Error(ErrorCode::InfeasiblePolytope, "allocation polytope is empty or unbounded");
  return res.objective;
}

double AllocationSet::maxBuyerPayoff(int buyer) const {
  return normalizedMaxPayoff(buyer) * market_->utilityScale(buyer);
}

double AllocationSet::minBuyerPayoff(int buyer) const {
  LinearProgramD lp = baseProgram();
  const auto& g = outcome_->graph;
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (g.edges[k].first == buyer) lp.setObjectiveCoeff(k, payoffCoeff(k));
  auto res = lp.minimize();
  if (res.status != LpStatus::Optimal)
    throw Error(ErrorCode::InfeasiblePolytope, "allocation polytope is empty or unbounded");
  return res.objective * market_->utilityScale(buyer);
}

MoneyFlowAllocation AllocationSet::argmaxBuyerPayoff(int buyer) const {
  LinearProgramD lp = baseProgram();
  const auto& g = outcome_->graph;
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (g.edges[k].first == buyer) lp.setObjectiveCoeff(k, payoffCoeff(k));
  auto res = lp.maximize();
  if (res.status != LpStatus::Optimal)
    throw Error(ErrorCode::InfeasiblePolytope, "allocation polytope is empty or unbounded");
  return toAllocation(res.x);
}

std::optional<MoneyFlowAllocation> AllocationSet::conflictFreeWitness() const {
  const auto& g = outcome_->graph;
  const std::size_t e = g.edges.size();
  std::vector<double> best(g.numBuyers);
  for (int i = 0; i < g.numBuyers; ++i) best[i] = normalizedMaxPayoff(i);

  LinearProgramD lp = baseProgram();
  for (int i = 0; i < g.numBuyers; ++i) {
    std::vector<double> row(e, 0.0);
    for (std::size_t k = 0; k < e; ++k)
      if (g.edges[k].first == i) row[k] = payoffCoeff(k);
    lp.addRow(std::move(row), LinearProgramD::Rel::Ge, best[i] - tol_.epsPay);
  }
  auto res = lp.findFeasible();
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return toAllocation(res.x);
}

bool AllocationSet::isConflictFree() const { return conflictFreeWitness().has_value(); }

MoneyFlowAllocation AllocationSet::anyAllocation() const {
  auto res = baseProgram().findFeasible();
  if (res.status != LpStatus::Optimal)
    throw Error(ErrorCode::InfeasiblePolytope, "allocation polytope is empty");
  return toAllocation(res.x);
}

MoneyFlowAllocation AllocationSet::selectPayoffAllocation(
    std::vector<int>* zeroPayoffBuyers) const {
  const auto& g = outcome_->graph;
  const std::size_t e = g.edges.size();
  const int m = g.numBuyers;

  std::vector<double> best(m);
  for (int i = 0; i < m; ++i) best[i] = normalizedMaxPayoff(i);

  // Buyers whose payoff is identically zero over the polytope drop out of the
  // product objective; the caller learns about them through the report.
  std::vector<char> active(m, 1);
  for (int i = 0; i < m; ++i) {
    if (best[i] <= tol_.epsPay) {
      active[i] = 0;
      if (zeroPayoffBuyers) zeroPayoffBuyers->push_back(i);
    }
  }

  // Payoffs never exceed the per-buyer best, so when one allocation attains
  // all of them at once it also maximizes the product. Only conflicted sets
  // need the iterative maximizer.
  if (auto witness = conflictFreeWitness()) return *witness;

  // Start point: average of the per-edge maximizers and the per-buyer
  // maximizers. Every active buyer has positive payoff there, so the log
  // objective starts finite.
  std::vector<std::vector<double>> starts;
  for (std::size_t k = 0; k < e; ++k) {
    LinearProgramD lp = baseProgram();
    lp.setObjectiveCoeff(k, 1.0);
    auto res = lp.maximize();
    if (res.status == LpStatus::Optimal) starts.push_back(res.x);
  }
  for (int i = 0; i < m; ++i) {
    LinearProgramD lp = baseProgram();
    for (std::size_t k = 0; k < e; ++k)
      if (g.edges[k].first == i) lp.setObjectiveCoeff(k, payoffCoeff(k));
    auto res = lp.maximize();
    if (res.status == LpStatus::Optimal) starts.push_back(res.x);
  }
  if (starts.empty())
    throw Error(ErrorCode::InfeasiblePolytope, "allocation polytope is empty");
  std::vector<double> f(e, 0.0);
  for (const auto& s : starts)
    for (std::size_t k = 0; k < e; ++k) f[k] += s[k] / starts.size();

  auto buyerValue = [&](const std::vector<double>& flows, int buyer) {
    double v = 0;
    for (std::size_t k = 0; k < e; ++k)
      if (g.edges[k].first == buyer) v += payoffCoeff(k) * flows[k];
    return v;
  };

  // Frank-Wolfe with exact line search on the concave log-sum objective;
  // every step solves one LP over the polytope.
  const int maxIters = 4000;
  for (int it = 0; it < maxIters; ++it) {
    std::vector<double> value(m);
    for (int i = 0; i < m; ++i) value[i] = buyerValue(f, i);

    LinearProgramD lp = baseProgram();
    for (std::size_t k = 0; k < e; ++k) {
      const int i = g.edges[k].first;
      if (!active[i]) continue;
      lp.setObjectiveCoeff(k, payoffCoeff(k) / std::max(value[i], 1e-300));
    }
    auto res = lp.maximize();
    if (res.status != LpStatus::Optimal)
      throw Error(ErrorCode::InfeasiblePolytope, "allocation polytope is empty");

    double gap = 0;  // <grad, v - f>
    for (std::size_t k = 0; k < e; ++k) {
      const int i = g.edges[k].first;
      if (!active[i]) continue;
      gap += payoffCoeff(k) / std::max(value[i], 1e-300) * (res.x[k] - f[k]);
    }
    if (gap <= tol_.epsPay) break;

    // Line search over f + t (v - f): maximize sum_i log(a_i + t d_i),
    // derivative sum d_i / (a_i + t d_i) is decreasing; bisect on its sign.
    std::vector<double> a(m), d(m);
    for (int i = 0; i < m; ++i) {
      a[i] = value[i];
      d[i] = buyerValue(res.x, i) - value[i];
    }
    auto deriv = [&](double t) {
      double s = 0;
      for (int i = 0; i < m; ++i)
        if (active[i]) s += d[i] / std::max(a[i] + t * d[i], 1e-300);
      return s;
    };
    double t = 1.0;
    if (deriv(1.0) < 0) {
      double lo = 0.0, hi = 1.0;
      for (int b = 0; b < 80; ++b) {
        double mid = 0.5 * (lo + hi);
        (deriv(mid) > 0 ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
    }
    if (t <= 0) break;
    double move = 0;
    for (std::size_t k = 0; k < e; ++k) {
      double nf = f[k] + t * (res.x[k] - f[k]);
      move += std::abs(nf - f[k]);
      f[k] = nf;
    }
    if (move < 1e-15) break;
  }
  return toAllocation(f);
}

MoneyFlowAllocation AllocationSet::maximizeEdgeSubjectToBest(int buyer, int good) const {
  const auto& g = outcome_->graph;
  const std::size_t e = g.edges.size();
  int edgeIdx = g.edgeIndex(buyer, good);
  if (edgeIdx < 0)
    throw Error(ErrorCode::InvalidInput, "maximizeEdgeSubjectToBest wants a tight edge");

  const double best = normalizedMaxPayoff(buyer);
  LinearProgramD lp = baseProgram();
  std::vector<double> row(e, 0.0);
  for (std::size_t k = 0; k < e; ++k)
    if (g.edges[k].first == buyer) row[k] = payoffCoeff(k);
  lp.addRow(std::move(row), LinearProgramD::Rel::Ge, best - tol_.epsPay);
  lp.setObjectiveCoeff(edgeIdx, 1.0);
  auto res = lp.maximize();
  if (res.status != LpStatus::Optimal)
    throw Error(ErrorCode::InfeasiblePolytope,
                "no allocation keeps the buyer at her best payoff");
  return toAllocation(res.x);
}

PayoffReport AllocationSet::payoffReport() const {
  PayoffReport rep;
  const int m = outcome_->graph.numBuyers;
  rep.perBuyerBest.resize(m);
  for (int i = 0; i < m; ++i) rep.perBuyerBest[i] = maxBuyerPayoff(i);
  rep.conflictFree = isConflictFree();
  rep.selected = selectPayoffAllocation(&rep.zeroPayoffBuyers);
  rep.selectedPayoffs = rep.selected.payoffs(*market_);
  return rep;
}

}  // namespace fmg
