#pragma once

#include "fmg/rational.hpp"

#include <cassert>
#include <cstddef>
#include <optional>
#include <vector>

namespace fmg {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<T> x;          // primal solution (original variables only)
  T objective{};             // c.x at optimum
  std::vector<T> dual;       // one multiplier per constraint row
};

// Small dense LP in row form:  maximize c.x  subject to the stated rows,
// x >= 0.  Rows may be <=, >= or ==; slacks are added internally and the
// problem is solved with a two-phase tableau simplex under Bland's rule, so
// pivoting is deterministic and cycling-free for both double and exact
// rational scalars.  Everything here is tiny (tens of variables), clarity
// over speed.
template <class T>
class LinearProgram {
 public:
  enum class Rel { Le, Ge, Eq };

  explicit LinearProgram(std::size_t numVars) : n_(numVars), c_(numVars, T(0)) {}

  std::size_t numVars() const { return n_; }
  std::size_t numRows() const { return rows_.size(); }

  void setObjective(std::vector<T> c) {
    assert(c.size() == n_);
    c_ = std::move(c);
  }
  void setObjectiveCoeff(std::size_t j, const T& v) { c_[j] = v; }

  void addRow(std::vector<T> coeffs, Rel rel, T rhs) {
    assert(coeffs.size() == n_);
    rows_.push_back({std::move(coeffs), rel, std::move(rhs)});
  }

  LpResult<T> maximize() const { return solve(c_, false); }
  LpResult<T> minimize() const {
    std::vector<T> negc(c_);
    for (auto& v : negc) v = -v;
    LpResult<T> res = solve(negc, false);
    if (res.status == LpStatus::Optimal) {
      res.objective = -res.objective;
      for (auto& d : res.dual) d = -d;
    }
    return res;
  }

  // Pure feasibility probe: ignores the objective.
  LpResult<T> findFeasible() const { return solve(std::vector<T>(n_, T(0)), true); }

 private:
  struct Row {
    std::vector<T> a;
    Rel rel;
    T b;
  };

  static bool isNeg(const T& v) { return v < -NumTraits<T>::pivotEps(); }
  static bool isPos(const T& v) { return v > NumTraits<T>::pivotEps(); }

  LpResult<T> solve(const std::vector<T>& cIn, bool feasibilityOnly) const {
    const std::size_t m = rows_.size();
    // Standard form: one slack per inequality, then one artificial per row.
    std::size_t nSlack = 0;
    for (const auto& r : rows_)
      if (r.rel != Rel::Eq) ++nSlack;
    const std::size_t nTotal = n_ + nSlack;

    // tableau: m rows, columns [vars | slacks | artificials | rhs]
    const std::size_t width = nTotal + m + 1;
    std::vector<std::vector<T>> tab(m, std::vector<T>(width, T(0)));
    std::vector<std::size_t> basis(m);

    std::size_t slackAt = n_;
    for (std::size_t i = 0; i < m; ++i) {
      const Row& r = rows_[i];
      // Keep rhs nonnegative so the artificial start is basic feasible.
      const bool flip = r.b < T(0);
      for (std::size_t j = 0; j < n_; ++j) tab[i][j] = flip ? T(-r.a[j]) : r.a[j];
      tab[i][width - 1] = flip ? T(-r.b) : r.b;
      if (r.rel != Rel::Eq) {
        T s = (r.rel == Rel::Le) ? T(1) : T(-1);
        tab[i][slackAt] = flip ? T(-s) : s;
        ++slackAt;
      }
      tab[i][nTotal + i] = T(1);
      basis[i] = nTotal + i;
    }

    // Phase 1: minimize the sum of artificials (maximize the negated sum).
    std::vector<T> z(width, T(0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < width; ++j) z[j] += tab[i][j];
    // reduced costs relative to artificial basis: z_j - c_j with c = -sum(artificials)
    // We run with objective row obj[j] = sum of tableau column j over rows
    // (artificial columns start at zero reduced cost handled below).
    auto runSimplex = [&](std::vector<T>& obj, T& objVal, bool allowArtificial) -> bool {
      // obj holds current reduced-cost row (to be driven nonpositive... we
      // maximize, pick entering with positive reduced cost, Bland: smallest
      // index).
      for (;;) {
        std::size_t enter = width;  // sentinel
        std::size_t limit = allowArtificial ? nTotal + m : nTotal;
        for (std::size_t j = 0; j < limit; ++j) {
          if (isPos(obj[j])) { enter = j; break; }
        }
        if (enter == width) return true;  // optimal
        // ratio test, Bland ties by smallest basis index
        std::size_t leave = m;
        for (std::size_t i = 0; i < m; ++i) {
          if (!isPos(tab[i][enter])) continue;
          if (leave == m) { leave = i; continue; }
          const T lhs = tab[i][width - 1] * tab[leave][enter];
          const T rhs = tab[leave][width - 1] * tab[i][enter];
          if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
        }
        if (leave == m) return false;  // unbounded direction
        pivot(tab, basis, obj, objVal, leave, enter);
      }
    };

    // Phase-1 objective: maximize -(sum of artificials). Reduced-cost row for
    // the artificial basis: row sums over constraint rows for original+slack
    // columns, zero for artificial columns.
    std::vector<T> obj1(width, T(0));
    T obj1Val = T(0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < nTotal; ++j) obj1[j] += tab[i][j];
      obj1Val -= tab[i][width - 1];
    }
    runSimplex(obj1, obj1Val, false);

    LpResult<T> result;
    T infeasibility = T(0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] >= nTotal) infeasibility += tab[i][width - 1];
    // Inputs from the double pipeline carry equilibrium residue around 1e-10,
    // so feasibility for doubles is judged at 1e-9; the exact path is strict.
    const T feasTol = NumTraits<T>::exact ? T(0) : T(1e-9);
    if (infeasibility > feasTol) {
      result.status = LpStatus::Infeasible;
      return result;
    }

    // Drive any remaining (degenerate, zero-valued) artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < nTotal) continue;
      std::size_t enter = width;
      for (std::size_t j = 0; j < nTotal; ++j)
        if (NumTraits<T>::abs(tab[i][j]) > NumTraits<T>::pivotEps()) { enter = j; break; }
      if (enter == width) continue;  // redundant row, harmless to leave
      T dummy = T(0);
      std::vector<T> dummyRow(width, T(0));
      pivot(tab, basis, dummyRow, dummy, i, enter);
    }

    // Phase 2 on the real objective.
    std::vector<T> cFull(width, T(0));
    for (std::size_t j = 0; j < n_; ++j) cFull[j] = cIn[j];
    std::vector<T> obj2(width, T(0));
    T obj2Val = T(0);
    for (std::size_t j = 0; j < width; ++j) obj2[j] = cFull[j];
    for (std::size_t i = 0; i < m; ++i) {
      const T cb = cFull[basis[i]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j < width; ++j) obj2[j] -= cb * tab[i][j];
      obj2Val += cb * tab[i][width - 1];
    }
    // obj2 currently holds c_j - z_j; entering rule above expects that.
    if (!feasibilityOnly) {
      if (!runSimplex(obj2, obj2Val, false)) {
        result.status = LpStatus::Unbounded;
        return result;
      }
    }

    result.status = LpStatus::Optimal;
    result.x.assign(n_, T(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n_) result.x[basis[i]] = tab[i][width - 1];
    result.objective = T(0);
    for (std::size_t j = 0; j < n_; ++j) result.objective += cIn[j] * result.x[j];

    // Duals from the artificial columns: y = c_B B^{-1}, and the artificial
    // block of the final tableau is exactly B^{-1} (modulo the rhs sign flips
    // applied on input).
    result.dual.assign(m, T(0));
    for (std::size_t k = 0; k < m; ++k) {
      T y = T(0);
      for (std::size_t i = 0; i < m; ++i) {
        const T cb = cFull[basis[i]];
        if (cb != T(0)) y += cb * tab[i][nTotal + k];
      }
      const bool flipped = rows_[k].b < T(0);
      result.dual[k] = flipped ? T(-y) : y;
    }
    return result;
  }

  static void pivot(std::vector<std::vector<T>>& tab, std::vector<std::size_t>& basis,
                    std::vector<T>& obj, T& objVal, std::size_t r, std::size_t s) {
    const std::size_t m = tab.size();
    const std::size_t width = tab[r].size();
    const T inv = T(1) / tab[r][s];
    for (std::size_t j = 0; j < width; ++j) tab[r][j] *= inv;
    tab[r][s] = T(1);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const T f = tab[i][s];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < width; ++j) tab[i][j] -= f * tab[r][j];
      tab[i][s] = T(0);
    }
    const T fz = obj[s];
    if (fz != T(0)) {
      for (std::size_t j = 0; j < width; ++j) obj[j] -= fz * tab[r][j];
      obj[s] = T(0);
      objVal += fz * tab[r][width - 1];
    }
    basis[r] = s;
  }

  std::size_t n_;
  std::vector<T> c_;
  std::vector<Row> rows_;
};

using LinearProgramD = LinearProgram<double>;
using LinearProgramQ = LinearProgram<Rat>;

}  // namespace fmg
