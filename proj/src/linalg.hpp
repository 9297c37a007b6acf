#ifndef HAWKES_LINALG_HPP
#define HAWKES_LINALG_HPP

#include <vector>

namespace hawkes {

// Dense row-major matrix sized for process dimensions (d is small, typically
// single digits). Entry (i, j) uses 0-based indices.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Mat identity(int n);

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
std::vector<double> operator*(const Mat& a, const std::vector<double>& x);

double max_abs(const Mat& a);

// Solves a x = b for x (b may have several columns) by Gaussian elimination
// with partial pivoting. Throws on singular a.
Mat solve(const Mat& a, const Mat& b);

// Largest eigenvalue magnitude of an entrywise non-negative matrix.
// Plain power iteration from the all-ones vector; if that stalls (reducible
// or periodic structure) falls back to the maximum over strongly connected
// diagonal blocks, each handled with a diagonal shift.
double spectral_radius(const Mat& m, double tol = 1e-12);

}  // namespace hawkes

#endif
