#include "iwk1/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace iwk1 {

SmithZ smith_over_z(std::vector<std::vector<i64>> rows, unsigned d) {
  SmithZ out;
  out.d = d;
  out.V.assign(d * d, 0);
  for (unsigned i = 0; i < d; ++i) out.V[i * d + i] = 1;
  out.diag.assign(d, 0);
  if (rows.empty()) return out;

  size_t m = rows.size();
  auto& V = out.V;
  auto colop_swap = [&](unsigned a, unsigned b) {
    for (auto& r : rows) std::swap(r[a], r[b]);
    for (unsigned i = 0; i < d; ++i) std::swap(V[i * d + a], V[i * d + b]);
  };
  auto colop_addmul = [&](unsigned dst, unsigned src, i64 c) {
    for (auto& r : rows) r[dst] += c * r[src];
    for (unsigned i = 0; i < d; ++i) V[i * d + dst] += c * V[i * d + src];
  };
  auto colop_neg = [&](unsigned a) {
    for (auto& r : rows) r[a] = -r[a];
    for (unsigned i = 0; i < d; ++i) V[i * d + a] = -V[i * d + a];
  };

  unsigned t = 0;
  while (t < d) {
    // find a nonzero entry in the submatrix rows[t..m) x cols[t..d)
    size_t pi = m;
    unsigned pj = d;
    i64 best = 0;
    for (size_t i = t; i < m; ++i)
      for (unsigned j = t; j < d; ++j)
        if (rows[i][j] != 0 && (best == 0 || std::abs(rows[i][j]) < std::abs(best))) {
          best = rows[i][j];
          pi = i;
          pj = j;
        }
    if (pi == m) break;
    std::swap(rows[t], rows[pi]);
    if (pj != t) colop_swap(t, pj);
    // clear row t and column t alternately until both clean
    for (;;) {
      bool dirty = false;
      for (size_t i = t + 1; i < m; ++i) {
        if (rows[i][t] == 0) continue;
        i64 q = rows[i][t] / rows[t][t];
        for (unsigned j = t; j < d; ++j) rows[i][j] -= q * rows[t][j];
        if (rows[i][t] != 0) {  // remainder smaller than pivot: swap up
          std::swap(rows[i], rows[t]);
          dirty = true;
        }
      }
      for (unsigned j = t + 1; j < d; ++j) {
        if (rows[t][j] == 0) continue;
        i64 q = rows[t][j] / rows[t][t];
        colop_addmul(j, t, -q);
        if (rows[t][j] != 0) {
          colop_swap(t, j);
          dirty = true;
        }
      }
      if (!dirty) break;
    }
    if (rows[t][t] < 0) colop_neg(t);
    ++t;
  }
  // divisibility chain
  for (unsigned i = 0; i + 1 < t; ++i) {
    for (unsigned j = i + 1; j < t; ++j) {
      if (rows[i][i] == 0) continue;
      if (rows[j][j] % rows[i][i] == 0) continue;
      // standard 2x2 fixup: bring gcd to position i
      colop_addmul(i, j, 1);
      // re-clear the 2x2 block via euclid on rows i, j
      for (;;) {
        if (rows[j][i] != 0) {
          i64 q = rows[j][i] / rows[i][i];
          for (unsigned c2 = 0; c2 < d; ++c2) rows[j][c2] -= q * rows[i][c2];
          if (rows[j][i] != 0) std::swap(rows[i], rows[j]);
          continue;
        }
        if (rows[i][j] != 0) {
          i64 q = rows[i][j] / rows[i][i];
          colop_addmul(j, i, -q);
          if (rows[i][j] != 0) colop_swap(i, j);
          continue;
        }
        break;
      }
      if (rows[i][i] < 0) colop_neg(i);
      if (rows[j][j] < 0) colop_neg(j);
    }
  }
  for (unsigned i = 0; i < d; ++i) out.diag[i] = (i < t) ? rows[i][i] : 0;
  return out;
}

void EchelonPK::addmul_combo(std::vector<std::pair<int, u64>>& dst,
                             const std::vector<std::pair<int, u64>>& src, u64 c) const {
  if (!c) return;
  std::map<int, u64> acc;
  for (auto& [i, x] : dst) acc[i] = x;
  for (auto& [i, x] : src) acc[i] = mod_.add(acc.count(i) ? acc[i] : 0, mod_.mul(c, x));
  dst.clear();
  for (auto& [i, x] : acc)
    if (x) dst.emplace_back(i, x);
}

void EchelonPK::insert(std::vector<u64> row, int gen_index) {
  for (auto& x : row) x = mod_.red(x);
  Row r;
  r.v = std::move(row);
  if (gen_index >= 0) r.combo = {{gen_index, 1}};
  insert_row(std::move(r));
}

void EchelonPK::insert_row(Row r) {
  for (;;) {
    unsigned col = dim_;
    for (unsigned j = 0; j < dim_; ++j)
      if (r.v[j]) { col = j; break; }
    if (col == dim_) return;  // reduced to zero
    unsigned v = mod_.v(r.v[col]);
    int pr = pivot_[col];
    if (pr >= 0 && rows_[pr].pivval <= v) {
      // eliminate against the existing pivot p^pv
      u64 c = r.v[col] / ipow(mod_.p, rows_[pr].pivval);
      for (unsigned j = 0; j < dim_; ++j) r.v[j] = mod_.sub(r.v[j], mod_.mul(c, rows_[pr].v[j]));
      addmul_combo(r.combo, rows_[pr].combo, mod_.neg(c));
      continue;
    }
    // normalize so the leading entry is exactly p^v
    u64 u = r.v[col] / ipow(mod_.p, v);
    u64 ui = mod_.inv(u % mod_.m);
    for (unsigned j = 0; j < dim_; ++j) r.v[j] = mod_.mul(r.v[j], ui);
    for (auto& [i, x] : r.combo) x = mod_.mul(x, ui);
    r.pivcol = col;
    r.pivval = v;
    if (pr >= 0) {
      // strictly better valuation: take over the pivot slot, reprocess old row
      std::swap(rows_[pr], r);
      if (v > 0 && mod_.K > v) {
        Row sh;
        sh.v.assign(dim_, 0);
        u64 s = ipow(mod_.p, mod_.K - v) % mod_.m;
        for (unsigned j = 0; j < dim_; ++j) sh.v[j] = mod_.mul(rows_[pr].v[j], s);
        sh.combo = rows_[pr].combo;
        for (auto& [i, x] : sh.combo) x = mod_.mul(x, s);
        insert_row(std::move(sh));
      }
      continue;
    }
    rows_.push_back(r);
    pivot_[col] = (int)rows_.size() - 1;
    // Howell shadow: p^(K-v) * row lies in the span with a deeper pivot
    if (v > 0 && mod_.K > v) {
      Row sh;
      sh.v.assign(dim_, 0);
      u64 s = ipow(mod_.p, mod_.K - v) % mod_.m;
      for (unsigned j = 0; j < dim_; ++j) sh.v[j] = mod_.mul(r.v[j], s);
      sh.combo = r.combo;
      for (auto& [i, x] : sh.combo) x = mod_.mul(x, s);
      insert_row(std::move(sh));
    }
    return;
  }
}

EchelonPK::Reduction EchelonPK::reduce(std::vector<u64> v) const {
  Reduction red;
  for (auto& x : v) x = mod_.red(x);
  for (unsigned col = 0; col < dim_; ++col) {
    if (!v[col]) continue;
    int pr = pivot_[col];
    if (pr < 0) continue;
    unsigned pv = rows_[pr].pivval;
    u64 q = ipow(mod_.p, pv);
    if (v[col] % q) continue;  // cannot eliminate; residual stays
    u64 c = v[col] / q;
    for (unsigned j = 0; j < dim_; ++j) v[j] = mod_.sub(v[j], mod_.mul(c, rows_[pr].v[j]));
    addmul_combo(red.combo, rows_[pr].combo, c);
  }
  red.member = std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
  red.residual = std::move(v);
  return red;
}

std::vector<std::vector<u64>> EchelonPK::canonical() const {
  // back-reduce entries above each pivot modulo p^pivval, then sort by pivot
  std::vector<Row> rs = rows_;
  std::vector<int> order;
  for (unsigned c = 0; c < dim_; ++c)
    if (pivot_[c] >= 0) order.push_back(pivot_[c]);
  // reduce later pivots out of earlier rows
  for (size_t a = 0; a < order.size(); ++a)
    for (size_t b = a + 1; b < order.size(); ++b) {
      Row& ra = rs[order[a]];
      const Row& rb = rs[order[b]];
      u64 q = ipow(mod_.p, rb.pivval);
      u64 e = ra.v[rb.pivcol];
      u64 c = e / q;
      if (!c) continue;
      for (unsigned j = 0; j < dim_; ++j) ra.v[j] = mod_.sub(ra.v[j], mod_.mul(c, rb.v[j]));
    }
  std::vector<std::vector<u64>> out;
  for (int i : order) out.push_back(rs[i].v);
  return out;
}

}  // namespace iwk1
