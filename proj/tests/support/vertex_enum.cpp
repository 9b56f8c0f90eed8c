#include "support/vertex_enum.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace savsddp::testing {

namespace {

/// Solves the m x m system B x = rhs with Gaussian elimination; false when
/// singular.
bool solve_square(std::vector<double> a, std::vector<double> rhs, int m,
                  std::vector<double>& x) {
  for (int c = 0; c < m; ++c) {
    int piv = -1;
    double best = 1e-9;
    for (int r = c; r < m; ++r) {
      if (std::abs(a[r * m + c]) > best) {
        best = std::abs(a[r * m + c]);
        piv = r;
      }
    }
    if (piv < 0) return false;
    if (piv != c) {
      for (int k = 0; k < m; ++k) std::swap(a[piv * m + k], a[c * m + k]);
      std::swap(rhs[piv], rhs[c]);
    }
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[r * m + c] / a[c * m + c];
      if (f == 0.0) continue;
      for (int k = c; k < m; ++k) a[r * m + k] -= f * a[c * m + k];
      rhs[r] -= f * rhs[c];
    }
  }
  x.resize(m);
  for (int c = 0; c < m; ++c) x[c] = rhs[c] / a[c * m + c];
  return true;
}

}  // namespace

std::optional<double> enumerate_optimum(const lp::LpProblem& p) {
  const int n = p.num_vars();
  const int m = p.num_rows();
  std::vector<std::vector<double>> cols(n, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, a] : p.row(i).coeffs) cols[j][i] += a;
  }

  std::optional<double> best;
  std::vector<int> basis(m);
  std::vector<int> choose(m);

  // Iterate subsets of size m via combination indices.
  std::vector<int> comb(m);
  for (int i = 0; i < m; ++i) comb[i] = i;
  const auto consider = [&](const std::vector<int>& basic) {
    std::vector<std::uint8_t> is_basic(n, 0);
    for (int j : basic) is_basic[j] = 1;
    std::vector<int> nonbasic;
    for (int j = 0; j < n; ++j) {
      if (!is_basic[j]) nonbasic.push_back(j);
    }
    const int nn = static_cast<int>(nonbasic.size());
    for (long long mask = 0; mask < (1LL << nn); ++mask) {
      std::vector<double> x(n, 0.0);
      for (int q = 0; q < nn; ++q) {
        const int j = nonbasic[q];
        x[j] = (mask >> q) & 1 ? p.upper()[j] : p.lower()[j];
      }
      std::vector<double> rhs(m);
      for (int i = 0; i < m; ++i) rhs[i] = p.row(i).rhs;
      for (int q = 0; q < nn; ++q) {
        const int j = nonbasic[q];
        if (x[j] == 0.0) continue;
        for (int i = 0; i < m; ++i) rhs[i] -= cols[j][i] * x[j];
      }
      if (m > 0) {
        std::vector<double> bmat(m * m);
        for (int c = 0; c < m; ++c) {
          for (int i = 0; i < m; ++i) bmat[i * m + c] = cols[basic[c]][i];
        }
        std::vector<double> xb;
        if (!solve_square(bmat, rhs, m, xb)) continue;
        bool ok = true;
        for (int c = 0; c < m && ok; ++c) {
          const int j = basic[c];
          if (xb[c] < p.lower()[j] - 1e-9 || xb[c] > p.upper()[j] + 1e-9) ok = false;
          x[j] = xb[c];
        }
        if (!ok) continue;
      }
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += p.cost()[j] * x[j];
      if (!best || obj < *best) best = obj;
    }
  };

  if (m == 0) {
    consider({});
    return best;
  }
  if (m > n) return std::nullopt;
  while (true) {
    for (int i = 0; i < m; ++i) basis[i] = comb[i];
    consider(basis);
    int i = m - 1;
    while (i >= 0 && comb[i] == n - m + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int k = i + 1; k < m; ++k) comb[k] = comb[k - 1] + 1;
  }
  return best;
}

lp::LpProblem random_feasible_lp(Rng& rng, int max_vars, int max_rows) {
  const int n = 1 + static_cast<int>(rng.uniform_int(max_vars));
  const int m = static_cast<int>(rng.uniform_int(std::min(max_rows, n) + 1));
  lp::LpProblem p;
  std::vector<double> point(n);
  for (int j = 0; j < n; ++j) {
    const double lo = rng.uniform01() < 0.3 ? -rng.uniform(0.0, 3.0) : 0.0;
    const double up = lo + rng.uniform(0.5, 5.0);
    const double cost = rng.uniform(-5.0, 5.0);
    p.add_variable(lo, up, cost);
    point[j] = rng.uniform(lo, up);
  }
  for (int i = 0; i < m; ++i) {
    // Row i always carries variable i with a strong coefficient so the row
    // set stays full rank and the enumeration oracle applies.
    std::vector<std::pair<int, double>> coeffs;
    double rhs = 0.0;
    for (int j = 0; j < n; ++j) {
      double a;
      if (j == i) {
        a = rng.uniform(1.0, 3.0);
      } else if (rng.uniform01() < 0.6) {
        a = rng.uniform(-3.0, 3.0);
      } else {
        continue;
      }
      coeffs.emplace_back(j, a);
      rhs += a * point[j];
    }
    p.add_row("r" + std::to_string(i), std::move(coeffs), rhs);
  }
  return p;
}

}  // namespace savsddp::testing
