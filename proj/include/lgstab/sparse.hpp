#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

namespace lgstab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Symmetric sparse matrix stored as its upper half.
///
/// Entries are collected as (row <= col) triplets; finalize() sorts them and
/// sums duplicates in sorted order, so the compressed result does not depend
/// on insertion order of distinct entries.
class SparseSymMatrix {
 public:
  explicit SparseSymMatrix(int dim = 0) : dim_(dim) {}

  int dim() const { return dim_; }
  /// Adds v at (i, j); (j, i) is implied. Lower-half input is mirrored.
  void add(int i, int j, double v);
  void reserve(std::size_t n) { triplets_.reserve(n); }
  void finalize();
  bool finalized() const { return finalized_; }

  const SparseMatrix& upper() const { return upper_; }
  /// Full symmetric matrix.
  SparseMatrix full() const;
  double quadratic_form(const Eigen::VectorXd& x) const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  /// "row col value" lines, 0-based, %.17g, upper half only.
  void write(std::ostream& os) const;

 private:
  struct Entry {
    int row, col;
    double value;
  };
  int dim_;
  std::vector<Entry> triplets_;
  SparseMatrix upper_;
  bool finalized_ = false;
};

void write_coordinate(std::ostream& os, const SparseMatrix& a);

}  // namespace lgstab
