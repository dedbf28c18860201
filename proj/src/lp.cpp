#include "sposs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sposs/error.hpp"
#include "sposs/stochastic.hpp"

namespace sposs {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const DenseLp& lp) {
  const std::size_t n = lp.variables();
  if (lp.upper.size() != n) {
    throw InvalidArgumentError("LP needs one upper bound per variable");
  }
  if (lp.rows.size() != lp.rhs.size()) {
    throw InvalidArgumentError("LP needs one right-hand side per row");
  }
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw InvalidArgumentError("LP row has wrong width");
  }
  for (double b : lp.rhs) {
    if (!(b >= 0.0)) throw InvalidArgumentError("LP right-hand sides must be >= 0");
  }
  for (double u : lp.upper) {
    if (!(u >= 0.0)) throw InvalidArgumentError("LP upper bounds must be >= 0");
  }
}

}  // namespace

std::string DenseLp::dump() const {
  auto name = [&](std::size_t j) {
    return j < names.size() ? names[j] : "v" + std::to_string(j);
  };
  auto linear = [&](const std::vector<double>& coef) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < coef.size(); ++j) {
      if (coef[j] == 0.0) continue;
      double c = coef[j];
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      if (std::fabs(c) != 1.0) os << std::fabs(c) << " ";
      os << name(j);
      first = false;
    }
    if (first) os << "0";
    return os.str();
  };
  std::ostringstream os;
  os << "maximize " << linear(objective) << "\n";
  os << "subject to\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << "  c" << i << ": " << linear(rows[i]) << " <= " << rhs[i] << "\n";
  }
  os << "bounds\n";
  for (std::size_t j = 0; j < upper.size(); ++j) {
    os << "  0 <= " << name(j) << " <= ";
    if (std::isinf(upper[j])) os << "inf";
    else os << upper[j];
    os << "\n";
  }
  return os.str();
}

double lp_max_residual(const DenseLp& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += lp.rows[i][j] * x[j];
    worst = std::max(worst, lhs - lp.rhs[i]);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, -x[j]);
    if (!std::isinf(lp.upper[j])) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

LpSolution solve(const DenseLp& lp, std::size_t max_iterations) {
  validate(lp);
  const std::size_t n = lp.variables();
  const std::size_t m = lp.rows.size();
  const std::size_t cols = n + m;

  // Tableau B^{-1}[A | I], starting from the slack basis.
  std::vector<std::vector<double>> tab(m, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    std::copy(lp.rows[i].begin(), lp.rows[i].end(), tab[i].begin());
    tab[i][n + i] = 1.0;
  }
  std::vector<double> upper(cols, kInf);
  std::copy(lp.upper.begin(), lp.upper.end(), upper.begin());
  std::vector<double> cost(cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());

  std::vector<std::size_t> basis(m);
  std::vector<long> row_of(cols, -1);
  std::vector<double> value(cols, 0.0);
  std::vector<char> at_upper(cols, 0);
  for (std::size_t i = 0; i < m; ++i) {
    basis[i] = n + i;
    row_of[n + i] = static_cast<long>(i);
    value[n + i] = lp.rhs[i];
  }
  std::vector<double> reduced = cost;  // slack basis has zero cost

  LpSolution sol;
  sol.status = LpStatus::kIterationLimit;
  std::size_t it = 0;
  for (; it < max_iterations; ++it) {
    // Bland: lowest-index improving nonbasic variable.
    long enter = -1;
    for (std::size_t j = 0; j < cols; ++j) {
      if (row_of[j] >= 0) continue;
      if ((!at_upper[j] && reduced[j] > kCostTol && upper[j] > 0.0) ||
          (at_upper[j] && reduced[j] < -kCostTol)) {
        enter = static_cast<long>(j);
        break;
      }
    }
    if (enter < 0) {
      sol.status = LpStatus::kOptimal;
      break;
    }
    const std::size_t j = static_cast<std::size_t>(enter);
    const double dir = at_upper[j] ? -1.0 : 1.0;

    double step = upper[j];  // bound flip
    long leave = -1;
    bool leave_to_upper = false;
    for (std::size_t i = 0; i < m; ++i) {
      const double alpha = tab[i][j] * dir;
      const std::size_t b = basis[i];
      double lim;
      bool to_upper;
      if (alpha > kPivotTol) {
        lim = std::max(0.0, value[b]) / alpha;
        to_upper = false;
      } else if (alpha < -kPivotTol && !std::isinf(upper[b])) {
        lim = std::max(0.0, upper[b] - value[b]) / -alpha;
        to_upper = true;
      } else {
        continue;
      }
      // Ties between rows go to the lowest variable index; a tie with the
      // bound flip keeps the flip.
      bool better = lim < step - 1e-13;
      if (!better && leave >= 0 && std::fabs(lim - step) <= 1e-13 &&
          b < basis[static_cast<std::size_t>(leave)]) {
        better = true;
      }
      if (better) {
        step = lim;
        leave = static_cast<long>(i);
        leave_to_upper = to_upper;
      }
    }
    if (std::isinf(step)) throw InvariantError("LP is unbounded");

    for (std::size_t i = 0; i < m; ++i) {
      value[basis[i]] -= step * dir * tab[i][j];
    }
    value[j] += step * dir;

    if (leave < 0) {
      at_upper[j] = !at_upper[j];
      value[j] = at_upper[j] ? upper[j] : 0.0;
      continue;
    }

    const std::size_t r = static_cast<std::size_t>(leave);
    const std::size_t out = basis[r];
    value[out] = leave_to_upper ? upper[out] : 0.0;
    at_upper[out] = leave_to_upper ? 1 : 0;
    row_of[out] = -1;

    const double piv = tab[r][j];
    for (double& v : tab[r]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = tab[i][j];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < cols; ++k) tab[i][k] -= f * tab[r][k];
    }
    const double f = reduced[j];
    for (std::size_t k = 0; k < cols; ++k) reduced[k] -= f * tab[r][k];
    basis[r] = j;
    row_of[j] = static_cast<long>(r);
    at_upper[j] = 0;
  }
  sol.iterations = it;

  sol.x.assign(value.begin(), value.begin() + static_cast<long>(n));
  for (std::size_t k = 0; k < n; ++k) {
    // Snap round-off at the bounds.
    if (std::fabs(sol.x[k]) < 1e-12) sol.x[k] = 0.0;
    if (!std::isinf(upper[k]) && std::fabs(sol.x[k] - upper[k]) < 1e-12) {
      sol.x[k] = upper[k];
    }
  }
  sol.value = 0.0;
  for (std::size_t k = 0; k < n; ++k) sol.value += lp.objective[k] * sol.x[k];
  sol.max_residual = lp_max_residual(lp, sol.x);
  if (sol.max_residual > kLpTolerance) {
    throw InvariantError("LP solution violates a constraint by " +
                         std::to_string(sol.max_residual));
  }
  return sol;
}

CoverageLp build_coverage_lp(const SppInstance& inst) {
  const Objective& obj = inst.objective;
  if (obj.is_additive()) {
    throw KindError("coverage LP needs a coverage objective");
  }
  const SetSystem& sys = inst.system;
  const std::size_t n = obj.size();
  const std::size_t u = obj.universe();

  // Matroid polytope rows, each as a list of member elements and a cap.
  std::vector<std::pair<std::vector<ElementId>, double>> poly;
  if (sys.kind() == SetSystem::Kind::kRank1) {
    poly.push_back({sys.ground().ids(), 1.0});
  } else if (sys.kind() == SetSystem::Kind::kSingleMatroid) {
    const MatroidOracle& m = sys.matroids().front();
    if (!m.view_stack().empty()) {
      throw KindError("coverage LP does not support matroid views");
    }
    if (const auto* uni = std::get_if<UniformFamily>(&m.family())) {
      poly.push_back({m.ground().ids(), static_cast<double>(uni->r)});
    } else if (const auto* part = std::get_if<PartitionFamily>(&m.family())) {
      for (std::size_t b = 0; b < part->blocks.size(); ++b) {
        poly.push_back(
            {part->blocks[b], static_cast<double>(part->caps[b])});
      }
    } else {
      throw KindError("coverage LP supports uniform and partition matroids, not " +
                      m.family_name());
    }
  } else {
    throw KindError("coverage LP does not support " + sys.kind_name() +
                    " systems");
  }

  CoverageLp out;
  out.elements = n;
  out.points = u;
  DenseLp& lp = out.lp;
  const std::size_t vars = n + u;
  lp.objective.assign(vars, 0.0);
  lp.upper.assign(vars, 0.0);
  lp.names.resize(vars);
  for (std::size_t i = 0; i < n; ++i) {
    lp.upper[i] = inst.p;
    lp.names[i] = "x" + std::to_string(i);
  }
  for (std::size_t j = 0; j < u; ++j) {
    lp.objective[n + j] = obj.point_value();
    lp.upper[n + j] = 1.0;
    lp.names[n + j] = "y" + std::to_string(j);
  }
  for (std::size_t j = 0; j < u; ++j) {
    std::vector<double> row(vars, 0.0);
    row[n + j] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (obj.bitmap(static_cast<ElementId>(i))[j / 64] >> (j % 64) & 1u) {
        row[i] = -1.0;
      }
    }
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(0.0);
  }
  for (const auto& [members, cap] : poly) {
    std::vector<double> row(vars, 0.0);
    for (ElementId e : members) row[e] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(cap);
  }
  return out;
}

CoverageLpSolution solve_coverage_lp(const SppInstance& inst) {
  CoverageLp clp = build_coverage_lp(inst);
  LpSolution sol = solve(clp.lp);
  CoverageLpSolution out;
  out.x.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(clp.elements));
  out.y.assign(sol.x.begin() + static_cast<long>(clp.elements), sol.x.end());
  out.value = sol.value;
  out.status = sol.status;
  return out;
}

}  // namespace sposs
