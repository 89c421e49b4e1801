#include "lgstab/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "lgstab/errors.hpp"

namespace lgstab {

void SparseSymMatrix::add(int i, int j, double v) {
  LGSTAB_REQUIRE(!finalized_, InvalidArgument, "matrix already finalized");
  if (i > j) std::swap(i, j);
  triplets_.push_back({i, j, v});
}

void SparseSymMatrix::finalize() {
  std::stable_sort(triplets_.begin(), triplets_.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  std::vector<Eigen::Triplet<double>> merged;
  merged.reserve(triplets_.size());
  for (std::size_t k = 0; k < triplets_.size();) {
    double s = 0.0;
    std::size_t l = k;
    for (; l < triplets_.size() && triplets_[l].row == triplets_[k].row &&
           triplets_[l].col == triplets_[k].col;
         ++l) {
      s += triplets_[l].value;
    }
    merged.emplace_back(triplets_[k].row, triplets_[k].col, s);
    k = l;
  }
  upper_.resize(dim_, dim_);
  upper_.setFromTriplets(merged.begin(), merged.end());
  upper_.makeCompressed();
  triplets_.clear();
  triplets_.shrink_to_fit();
  finalized_ = true;
}

SparseMatrix SparseSymMatrix::full() const {
  SparseMatrix f = upper_.selfadjointView<Eigen::Upper>();
  f.makeCompressed();
  return f;
}

Eigen::VectorXd SparseSymMatrix::multiply(const Eigen::VectorXd& x) const {
  return upper_.selfadjointView<Eigen::Upper>() * x;
}

double SparseSymMatrix::quadratic_form(const Eigen::VectorXd& x) const {
  return x.dot(multiply(x));
}

void SparseSymMatrix::write(std::ostream& os) const { write_coordinate(os, upper_); }

void write_coordinate(std::ostream& os, const SparseMatrix& a) {
  char buf[96];
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", static_cast<int>(it.row()),
                    static_cast<int>(it.col()), it.value());
      os << buf;
    }
  }
}

}  // namespace lgstab
