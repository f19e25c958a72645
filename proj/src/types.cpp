#include "scoreinf/types.hpp"

#include <algorithm>
#include <iterator>

namespace scoreinf {

IndexSet set_union(const IndexSet& lhs, const IndexSet& rhs) {
  IndexSet out;
  std::set_union(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& lhs, const IndexSet& rhs) {
  IndexSet out;
  std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

IndexSet nonzero_support(const Vector& v) {
  IndexSet out;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) out.push_back(i);
  return out;
}

Matrix submatrix(const Matrix& m, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < rows.size(); ++i)
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  return out;
}

Vector subvector(const Vector& v, const IndexSet& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out[static_cast<Index>(i)] = v[idx[i]];
  return out;
}

}  // namespace scoreinf
