#pragma once

#include <optional>
#include <vector>

#include "iwk1/base.hpp"

namespace iwk1 {

// Smith normal form over Z for small matrices.  Returns the diagonal and the
// right transform V (unimodular, d x d) such that the residue class of x in
// Z^d / rowspan(A) has canonical coordinates (x V) mod diag.
struct SmithZ {
  std::vector<i64> diag;  // length d, nonnegative
  std::vector<i64> V;     // d x d row-major
  unsigned d = 0;
};
SmithZ smith_over_z(std::vector<std::vector<i64>> rows, unsigned d);

// Echelon/Howell form over Z/p^K with combination tracking.  Rows are
// normalized so each pivot entry is exactly p^v; shadow rows p^(K-v)*row are
// inserted so that reduction from the left decides span membership.
class EchelonPK {
 public:
  EchelonPK(const Mod& mod, unsigned dim) : mod_(mod), dim_(dim), pivot_(dim, -1) {}

  // insert a generator row; gen_index labels it for witnesses (< 0: internal)
  void insert(std::vector<u64> row, int gen_index);

  unsigned dim() const { return dim_; }
  size_t nrows() const { return rows_.size(); }

  struct Reduction {
    std::vector<u64> residual;                 // what is left after reduction
    std::vector<std::pair<int, u64>> combo;    // generator index -> coefficient
    bool member = false;                       // residual == 0
  };
  Reduction reduce(std::vector<u64> v) const;

  // canonical (Howell) row list, suitable for span equality tests
  std::vector<std::vector<u64>> canonical() const;

 private:
  struct Row {
    std::vector<u64> v;
    std::vector<std::pair<int, u64>> combo;  // over generator indices
    unsigned pivcol = 0, pivval = 0;
  };
  const Mod mod_;
  unsigned dim_;
  std::vector<int> pivot_;  // column -> row index or -1
  std::vector<Row> rows_;

  void insert_row(Row r);
  void addmul_combo(std::vector<std::pair<int, u64>>& dst,
                    const std::vector<std::pair<int, u64>>& src, u64 c) const;
};

}  // namespace iwk1
