#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "errors.hpp"

namespace hawkes {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), ErrorCode::invalid_argument, "matrix shape mismatch");
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  Mat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  Mat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

std::vector<double> operator*(const Mat& a, const std::vector<double>& x) {
  require(a.cols() == static_cast<int>(x.size()), ErrorCode::invalid_argument,
          "matrix/vector shape mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::fabs(v));
  return m;
}

Mat solve(const Mat& a, const Mat& b) {
  require(a.rows() == a.cols() && a.rows() == b.rows(), ErrorCode::invalid_argument,
          "solve expects square a and matching b");
  const int n = a.rows();
  Mat lu = a;
  Mat x = b;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(lu(r, col)) > std::fabs(lu(pivot, col))) pivot = r;
    require(std::fabs(lu(pivot, col)) > 1e-14, ErrorCode::invalid_argument,
            "singular matrix in solve");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot, j));
      for (int j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(pivot, j));
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = lu(r, col) / lu(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
      for (int j = 0; j < x.cols(); ++j) x(r, j) -= f * x(col, j);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    for (int j = 0; j < x.cols(); ++j) {
      double s = x(col, j);
      for (int k = col + 1; k < n; ++k) s -= lu(col, k) * x(k, j);
      x(col, j) = s / lu(col, col);
    }
  }
  return x;
}

namespace {

// Power iteration; returns negative if the ratio estimate failed to settle.
double power_iterate(const Mat& m, double shift, double tol, int max_iter) {
  const int n = m.rows();
  std::vector<double> x(n, 1.0 / n);
  double prev = -1.0;
  int stable = 0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) y[i] += m(i, j) * x[j];
      y[i] += shift * x[i];
    }
    double norm = 0.0;
    for (double v : y) norm += std::fabs(v);
    if (norm < 1e-300) return shift > 0.0 ? -1.0 : 0.0;  // m^k x vanished: nilpotent
    const double est = norm;  // ||x||_1 == 1 each step
    for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
    if (prev >= 0.0 && std::fabs(est - prev) <= tol * std::max(1.0, est)) {
      if (++stable >= 4) return est - shift;
    } else {
      stable = 0;
    }
    prev = est;
  }
  return -1.0;
}

// Tarjan strongly connected components of the digraph with an edge j -> i
// whenever m(i, j) > 0. SCCs are direction-symmetric, so the convention
// does not matter for the block decomposition.
struct Tarjan {
  const Mat& m;
  int n;
  std::vector<int> index, low, stack;
  std::vector<bool> on_stack;
  std::vector<std::vector<int>> comps;
  int counter = 0;

  explicit Tarjan(const Mat& mat) : m(mat), n(mat.rows()), index(n, -1), low(n, 0), on_stack(n, false) {
    for (int v = 0; v < n; ++v)
      if (index[v] < 0) visit(v);
  }

  void visit(int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w = 0; w < n; ++w) {
      if (m(w, v) <= 0.0) continue;  // edge v -> w
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      comps.push_back(std::move(comp));
    }
  }
};

}  // namespace

double spectral_radius(const Mat& m, double tol) {
  require(m.rows() == m.cols(), ErrorCode::invalid_argument, "spectral_radius expects square matrix");
  const int n = m.rows();
  if (n == 0) return 0.0;
  for (double v : m.data())
    require(v >= 0.0, ErrorCode::invalid_argument, "spectral_radius expects non-negative entries");

  const double direct = power_iterate(m, 0.0, 0.1 * tol, 200 * n + 2000);
  if (direct >= 0.0) return direct;

  // Reducible or periodic: decompose into strongly connected blocks. The
  // matrix is block-triangular in the component order, so the spectral
  // radius is the maximum over diagonal blocks. A unit diagonal shift makes
  // each irreducible block primitive, guaranteeing convergence.
  Tarjan scc(m);
  double best = 0.0;
  for (const auto& comp : scc.comps) {
    if (comp.size() == 1) {
      best = std::max(best, m(comp[0], comp[0]));
      continue;
    }
    Mat block(static_cast<int>(comp.size()), static_cast<int>(comp.size()));
    for (size_t a = 0; a < comp.size(); ++a)
      for (size_t b = 0; b < comp.size(); ++b) block(static_cast<int>(a), static_cast<int>(b)) = m(comp[a], comp[b]);
    const double r = power_iterate(block, 1.0, 0.1 * tol, 200 * n + 20000);
    require(r >= 0.0, ErrorCode::convergence, "spectral radius iteration failed on an irreducible block");
    best = std::max(best, r);
  }
  return best;
}

}  // namespace hawkes
