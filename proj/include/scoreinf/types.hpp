#pragma once

#include <Eigen/Dense>
#include <vector>

namespace scoreinf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Sorted, duplicate-free list of coordinate positions.
using IndexSet = std::vector<Index>;

IndexSet set_union(const IndexSet& lhs, const IndexSet& rhs);
IndexSet set_difference(const IndexSet& lhs, const IndexSet& rhs);
IndexSet nonzero_support(const Vector& v);

Matrix submatrix(const Matrix& m, const IndexSet& rows, const IndexSet& cols);
Vector subvector(const Vector& v, const IndexSet& idx);

}  // namespace scoreinf
