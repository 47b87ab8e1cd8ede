#pragma once

#include "fmg/lp.hpp"
#include "fmg/market.hpp"

#include <optional>
#include <vector>

namespace fmg {

// An equilibrium allocation expressed as money flows on tight edges.
// flow[i][j] is normalized money spent by buyer i on good j; the goods-space
// allocation is x_ij = flow_ij / p_j.
struct MoneyFlowAllocation {
  Mat flow;                 // m x n, zero off the tight edges
  Vec prices;               // normalized prices it was built against

  double fraction(int buyer, int good) const { return flow[buyer][good] / prices[good]; }
  Mat fractions() const;
  // Payoff of one buyer in original utility units.
  double payoff(const Market& market, int buyer) const;
  Vec payoffs(const Market& market) const;
};

struct PayoffReport {
  Vec perBuyerBest;             // w_i, original units
  MoneyFlowAllocation selected; // product-fair selection
  Vec selectedPayoffs;          // original units
  bool conflictFree = false;
  std::vector<int> zeroPayoffBuyers;  // buyers whose payoff is zero over the whole set
};

// Query layer over the convex set of equilibrium allocations of one outcome.
// All optimization runs on the tight-edge transportation polytope with the
// in-house simplex; results are reported in original utility units.
class AllocationSet {
 public:
  AllocationSet(const Market& market, const EquilibriumOutcome& outcome,
                const Tolerances& tol = {});

  const EquilibriumOutcome& outcome() const { return *outcome_; }
  int numEdges() const { return static_cast<int>(edges().size()); }
  const std::vector<std::pair<int, int>>& edges() const { return outcome_->graph.edges; }

  // Highest payoff buyer i can get over the whole allocation set (w_i).
  double maxBuyerPayoff(int buyer) const;
  double minBuyerPayoff(int buyer) const;
  MoneyFlowAllocation argmaxBuyerPayoff(int buyer) const;

  // Does one allocation give every buyer her best payoff simultaneously?
  bool isConflictFree() const;
  std::optional<MoneyFlowAllocation> conflictFreeWitness() const;

  // The product-fair selection: maximizes sum of log payoffs (equivalently
  // the product) over the polytope. Buyers stuck at zero payoff are dropped
  // from the objective and reported.
  MoneyFlowAllocation selectPayoffAllocation(std::vector<int>* zeroPayoffBuyers = nullptr) const;

  // Two-stage query used by the cycle-breaking procedure: among allocations
  // giving buyer a her best payoff, maximize the flow on edge (a, b).
  MoneyFlowAllocation maximizeEdgeSubjectToBest(int buyer, int good) const;

  PayoffReport payoffReport() const;

  // Any feasible point of the polytope.
  MoneyFlowAllocation anyAllocation() const;

 private:
  LinearProgramD baseProgram() const;
  MoneyFlowAllocation toAllocation(const std::vector<double>& edgeFlows) const;
  // normalized-unit payoff coefficient of edge k for its buyer
  double payoffCoeff(std::size_t k) const;
  double normalizedMaxPayoff(int buyer) const;

  const Market* market_;
  const EquilibriumOutcome* outcome_;
  Tolerances tol_;
};

}  // namespace fmg
