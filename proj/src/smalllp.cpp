#include "mwumech/smalllp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mwumech {
namespace {

// Solves the square system M·x = r in place; returns false when singular.
bool solve_square(std::vector<Vec> M, Vec r, Vec &out) {
  const int d = (int)r.size();
  for (int col = 0; col < d; ++col) {
    int pivot = col;
    double best = std::abs(M[col][col]);
    for (int row = col + 1; row < d; ++row) {
      double v = std::abs(M[row][col]);
      if (v > best) {
        best = v;
        pivot = row;
      }
    }
    if (best < 1e-10) return false;
    std::swap(M[pivot], M[col]);
    std::swap(r[pivot], r[col]);
    for (int row = col + 1; row < d; ++row) {
      double f = M[row][col] / M[col][col];
      if (f == 0.0) continue;
      for (int k = col; k < d; ++k) M[row][k] -= f * M[col][k];
      r[row] -= f * r[col];
    }
  }
  out.assign(d, 0.0);
  for (int i = d - 1; i >= 0; --i) {
    double acc = r[i];
    for (int k = i + 1; k < d; ++k) acc -= M[i][k] * out[k];
    out[i] = acc / M[i][i];
  }
  return true;
}

// Enumerates feasible basic solutions of {x : cons·x ≤ rhs}, where the
// constraint list already includes the nonnegativity rows, and calls `visit`
// on each one found.
template <typename Visit>
void enumerate_basic_solutions(const std::vector<Vec> &cons, const Vec &rhs, int d,
                               Visit &&visit) {
  const int n = (int)cons.size();
  if (d == 0) {
    Vec empty;
    visit(empty);
    return;
  }
  if (d > kLpMaxVars) fail(errc::capacity, "LP exceeds the vertex-enumeration variable cap");
  double bases = 1.0;
  for (int i = 0; i < d; ++i) bases = bases * double(n - i) / double(i + 1);
  if (bases > (double)kLpMaxBases) {
    fail(errc::capacity, "LP exceeds the vertex-enumeration basis cap");
  }

  std::vector<int> pick(d);
  for (int i = 0; i < d; ++i) pick[i] = i;
  std::vector<Vec> M(d);
  Vec r(d);
  Vec x;
  while (true) {
    for (int i = 0; i < d; ++i) {
      M[i] = cons[pick[i]];
      r[i] = rhs[pick[i]];
    }
    if (solve_square(M, r, x)) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        double lhs = 0.0, mag = 0.0;
        for (int j = 0; j < d; ++j) {
          lhs += cons[i][j] * x[j];
          mag += std::abs(cons[i][j] * x[j]);
        }
        if (rhs[i] - lhs < -1e-7 * (1.0 + std::abs(rhs[i]) + mag)) ok = false;
      }
      if (ok) visit(x);
    }
    // advance to the next d-combination of [0, n)
    int i = d - 1;
    while (i >= 0 && pick[i] == n - d + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < d; ++k) pick[k] = pick[k - 1] + 1;
  }
}

// Lexicographic comparison with a per-coordinate tolerance, so float dust on a
// tie never makes the ordering depend on enumeration order.
bool lex_less(const Vec &a, const Vec &b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    double diff = a[j] - b[j];
    if (std::abs(diff) <= kFeasTol * (1.0 + std::abs(a[j]) + std::abs(b[j]))) continue;
    return diff < 0.0;
  }
  return false;
}

void check_shape(const std::vector<Vec> &rows, const Vec &rhs, const Vec &c) {
  if (rows.size() != rhs.size()) fail(errc::argument, "LP rows/rhs size mismatch");
  for (const Vec &row : rows) {
    if (row.size() != c.size()) fail(errc::argument, "LP row/objective size mismatch");
  }
}

std::vector<Vec> with_nonneg_rows(const std::vector<Vec> &rows, int d, int sign) {
  std::vector<Vec> cons;
  cons.reserve(rows.size() + d);
  for (const Vec &row : rows) {
    Vec r = row;
    if (sign < 0) {
      for (double &v : r) v = -v;
    }
    cons.push_back(std::move(r));
  }
  for (int j = 0; j < d; ++j) {
    Vec r(d, 0.0);
    r[j] = -1.0;  // -x_j ≤ 0
    cons.push_back(std::move(r));
  }
  return cons;
}

Vec snap_zeros(const Vec &x) {
  Vec clean = x;
  for (double &v : clean) {
    if (std::abs(v) < 1e-11) v = 0.0;
  }
  return clean;
}

}  // namespace

LpResult lp_max_vertex(const std::vector<Vec> &rows, const Vec &rhs, const Vec &c) {
  check_shape(rows, rhs, c);
  const int d = (int)c.size();
  std::vector<Vec> cons = with_nonneg_rows(rows, d, +1);
  Vec full_rhs = rhs;
  full_rhs.resize(cons.size(), 0.0);

  LpResult best;
  enumerate_basic_solutions(cons, full_rhs, d, [&](const Vec &x) {
    Vec clean = snap_zeros(x);
    double obj = dot(c, clean);
    if (!best.feasible || obj > best.objective + kFeasTol * (1.0 + std::abs(best.objective))) {
      best = {true, obj, clean};
    } else if (std::abs(obj - best.objective) <= kFeasTol * (1.0 + std::abs(best.objective)) &&
               lex_less(clean, best.x)) {
      best = {true, obj, clean};
    }
  });
  return best;
}

LpResult lp_min_cover_vertex(const std::vector<Vec> &rows, const Vec &rhs, const Vec &c) {
  check_shape(rows, rhs, c);
  for (double cj : c) {
    if (cj < 0.0) fail(errc::argument, "covering reference requires non-negative costs");
  }
  const int d = (int)c.size();
  // rows·x ≥ rhs  ⇔  (−rows)·x ≤ −rhs
  std::vector<Vec> cons = with_nonneg_rows(rows, d, -1);
  Vec full_rhs(cons.size(), 0.0);
  for (std::size_t i = 0; i < rhs.size(); ++i) full_rhs[i] = -rhs[i];

  LpResult best;
  enumerate_basic_solutions(cons, full_rhs, d, [&](const Vec &x) {
    Vec clean = snap_zeros(x);
    double obj = dot(c, clean);
    if (!best.feasible || obj < best.objective - kFeasTol * (1.0 + std::abs(best.objective))) {
      best = {true, obj, clean};
    } else if (std::abs(obj - best.objective) <= kFeasTol * (1.0 + std::abs(best.objective)) &&
               lex_less(clean, best.x)) {
      best = {true, obj, clean};
    }
  });
  return best;
}

std::vector<Vec> enumerate_vertices(const std::vector<Vec> &rows, const Vec &rhs) {
  if (rows.size() != rhs.size()) fail(errc::argument, "LP rows/rhs size mismatch");
  const int d = rows.empty() ? 0 : (int)rows.front().size();
  std::vector<Vec> cons = with_nonneg_rows(rows, d, +1);
  Vec full_rhs = rhs;
  full_rhs.resize(cons.size(), 0.0);

  std::set<std::vector<long long>> seen;
  std::vector<Vec> out;
  enumerate_basic_solutions(cons, full_rhs, d, [&](const Vec &x) {
    Vec clean = snap_zeros(x);
    std::vector<long long> key(clean.size());
    for (std::size_t j = 0; j < clean.size(); ++j) key[j] = std::llround(clean[j] * 1e8);
    if (seen.insert(key).second) out.push_back(clean);
  });
  std::sort(out.begin(), out.end());
  return out;
}

LpResult lp_max_simplex(const std::vector<Vec> &rows, const Vec &rhs, const Vec &c) {
  check_shape(rows, rhs, c);
  const int m = (int)rows.size();
  const int n = (int)c.size();
  for (double b : rhs) {
    if (b < 0.0) fail(errc::argument, "simplex requires non-negative right-hand sides");
  }
  if (n == 0) return {true, 0.0, {}};

  // Tableau over structural + slack columns; last column is the rhs, the extra
  // row is the objective (stored as -c so optimality is "no negative entry").
  std::vector<Vec> T(m + 1, Vec(n + m + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) T[i][j] = rows[i][j];
    T[i][n + i] = 1.0;
    T[i].back() = rhs[i];
  }
  for (int j = 0; j < n; ++j) T[m][j] = -c[j];

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const long long cap = 20000LL * (m + n + 1);
  for (long long iter = 0;; ++iter) {
    if (iter > cap) fail(errc::tripwire, "simplex iteration cap exceeded");
    // Bland's rule: entering = smallest column with a negative objective entry.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (T[m][j] < -1e-11) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double a = T[i][enter];
      if (a > 1e-11) {
        double ratio = T[i].back() / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) fail(errc::argument, "simplex: objective unbounded above");
    double piv = T[leave][enter];
    for (double &v : T[leave]) v /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = T[i][enter];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < T[i].size(); ++k) T[i][k] -= f * T[leave][k];
    }
    basis[leave] = enter;
  }

  LpResult res;
  res.feasible = true;
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = T[i].back();
  }
  res.objective = T[m].back();
  return res;
}

}  // namespace mwumech
