#include "model.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <mutex>

#include "errors.hpp"

namespace hawkes {

namespace {

uint64_t fnv1a_accumulate(uint64_t h, const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t fnv1a_double(uint64_t h, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return fnv1a_accumulate(h, &bits, sizeof bits);
}

}  // namespace

HawkesModel::HawkesModel(std::vector<double> mu, std::vector<Kernel> kernels,
                         double stability_margin)
    : d_(static_cast<int>(mu.size())), mu_(std::move(mu)), kernels_(std::move(kernels)) {
  require(d_ >= 1, ErrorCode::degenerate, "model needs at least one component");
  require(kernels_.size() == static_cast<size_t>(d_) * d_, ErrorCode::invalid_argument,
          "kernel matrix must be d x d");
  for (double m : mu_)
    require(m > 0.0 && std::isfinite(m), ErrorCode::degenerate,
            "base rates must be strictly positive");

  gbar_ = Mat(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) gbar_(i, j) = kernel(i, j).integral();
  rho_ = spectral_radius(gbar_);
  require(rho_ < 1.0 - stability_margin, ErrorCode::stability,
          "integrated kernel spectral radius " + std::to_string(rho_) +
              " is at or above the criticality margin");

  uint64_t h = 1469598103934665603ull;
  h = fnv1a_double(h, static_cast<double>(d_));
  for (double m : mu_) h = fnv1a_double(h, m);
  for (const Kernel& k : kernels_) {
    h = fnv1a_double(h, static_cast<double>(static_cast<int>(k.type())));
    switch (k.type()) {
      case Kernel::Type::zero:
        break;
      case Kernel::Type::exponential:
        h = fnv1a_double(h, k.alpha());
        h = fnv1a_double(h, k.beta());
        break;
      case Kernel::Type::grid:
        h = fnv1a_double(h, k.grid_dt());
        for (double v : k.grid_values()) h = fnv1a_double(h, v);
        break;
    }
  }
  hash_ = h;
}

double HawkesModel::max_timescale() const {
  double s = 0.0;
  for (const Kernel& k : kernels_) s = std::max(s, k.timescale());
  return s;
}

double HawkesModel::correlation_horizon(double tail) const {
  const double scale = max_timescale();
  if (scale == 0.0) return 0.0;
  return std::log(1.0 / tail) * scale / (1.0 - rho_);
}

BranchingSummary build_summary(const HawkesModel& model, double tol, double stability_margin) {
  BranchingSummary s;
  s.dim = model.dim();
  s.gbar = model.gbar();
  s.rho = spectral_radius(s.gbar, tol);
  require(s.rho < 1.0 - stability_margin, ErrorCode::stability,
          "spectral radius " + std::to_string(s.rho) + " too close to criticality");
  Mat lhs = Mat::identity(s.dim) - s.gbar;
  s.resolvent = solve(lhs, Mat::identity(s.dim));
  s.psi = s.resolvent - Mat::identity(s.dim);
  s.lambda = s.resolvent * model.mu();
  for (double l : s.lambda)
    require(l > 0.0 && std::isfinite(l), ErrorCode::degenerate, "non-positive stationary rate");
  return s;
}

double RenewalDensity::value(int i, int j, double t) const {
  if (t < 0.0 || t > horizon) return 0.0;
  const auto& row = entry(i, j);
  const double pos = t / dt;
  auto idx = static_cast<size_t>(pos);
  if (idx >= row.size() - 1) return row.back();
  const double frac = pos - static_cast<double>(idx);
  return row[idx] + frac * (row[idx + 1] - row[idx]);
}

Mat RenewalDensity::integral_with_atom() const {
  Mat out(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const auto& row = entry(i, j);
      double s = 0.5 * (row.front() + row.back());
      for (int k = 1; k + 1 < len; ++k) s += row[k];
      out(i, j) = s * dt + (i == j && identity_atom ? 1.0 : 0.0);
    }
  return out;
}

namespace {

std::mutex g_fftw_planner_mutex;

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Zero-padded real FFT workspace for linear convolutions of length-n
// sequences. Plans are bound to the internal buffers and reused.
class ConvWorkspace {
 public:
  explicit ConvWorkspace(int n) : n_(n), padded_(next_pow2(2 * static_cast<size_t>(n))) {
    spec_len_ = padded_ / 2 + 1;
    real_ = fftw_alloc_real(padded_);
    cplx_ = fftw_alloc_complex(spec_len_);
    std::lock_guard<std::mutex> lock(g_fftw_planner_mutex);
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(padded_), real_, cplx_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(padded_), cplx_, real_, FFTW_ESTIMATE);
  }

  ~ConvWorkspace() {
    std::lock_guard<std::mutex> lock(g_fftw_planner_mutex);
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(cplx_);
  }

  ConvWorkspace(const ConvWorkspace&) = delete;
  ConvWorkspace& operator=(const ConvWorkspace&) = delete;

  std::vector<std::complex<double>> forward(const std::vector<double>& x) {
    std::memset(real_, 0, sizeof(double) * padded_);
    std::memcpy(real_, x.data(), sizeof(double) * x.size());
    fftw_execute(fwd_);
    std::vector<std::complex<double>> out(spec_len_);
    for (size_t s = 0; s < spec_len_; ++s) out[s] = {cplx_[s][0], cplx_[s][1]};
    return out;
  }

  // Inverse transform of spec, truncated to the first n samples and scaled.
  std::vector<double> backward(const std::vector<std::complex<double>>& spec) {
    for (size_t s = 0; s < spec_len_; ++s) {
      cplx_[s][0] = spec[s].real();
      cplx_[s][1] = spec[s].imag();
    }
    fftw_execute(bwd_);
    std::vector<double> out(n_);
    const double scale = 1.0 / static_cast<double>(padded_);
    for (int k = 0; k < n_; ++k) out[k] = real_[k] * scale;
    return out;
  }

  size_t spec_len() const { return spec_len_; }

 private:
  int n_;
  size_t padded_;
  size_t spec_len_;
  double* real_;
  fftw_complex* cplx_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace

RenewalDensity renewal_density(const HawkesModel& model, double dt, double horizon, double tol) {
  require(dt > 0.0, ErrorCode::invalid_argument, "renewal grid step must be positive");
  require(horizon > 0.0, ErrorCode::invalid_argument, "renewal horizon must be positive");
  const double steps = horizon / dt;
  require(std::fabs(steps - std::round(steps)) < 1e-6, ErrorCode::invalid_argument,
          "renewal horizon must be a multiple of the grid step");
  require(tol > 0.0, ErrorCode::invalid_argument, "tolerance must be positive");

  const int d = model.dim();
  const int len = static_cast<int>(std::round(steps)) + 1;

  RenewalDensity out;
  out.dim = d;
  out.dt = dt;
  out.horizon = horizon;
  out.len = len;
  out.phi.assign(static_cast<size_t>(d) * d, std::vector<double>(len, 0.0));

  // kernel samples on the grid
  std::vector<std::vector<double>> g(static_cast<size_t>(d) * d, std::vector<double>(len, 0.0));
  bool any = false;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Kernel& k = model.kernel(i, j);
      if (k.is_zero()) continue;
      any = true;
      auto& row = g[static_cast<size_t>(i) * d + j];
      for (int s = 0; s < len; ++s) row[s] = k(s * dt);
    }
  if (!any) return out;  // Poisson model: atom only

  const double rho = model.rho();
  int max_iter = 16;
  if (rho > 1e-9) {
    const double nstar = std::ceil(std::log(tol * (1.0 - rho)) / std::log(rho));
    max_iter = static_cast<int>(nstar) + 20;
  }

  ConvWorkspace ws(len);
  std::vector<std::vector<std::complex<double>>> g_spec(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g_spec[static_cast<size_t>(i) * d + j] = ws.forward(g[static_cast<size_t>(i) * d + j]);

  auto& phi = out.phi;
  phi = g;  // first Neumann term

  std::vector<std::vector<std::complex<double>>> phi_spec(static_cast<size_t>(d) * d);
  for (int iter = 0;; ++iter) {
    require(iter < max_iter, ErrorCode::convergence,
            "renewal iteration exceeded its bound (" + std::to_string(max_iter) + ")");
    for (int m = 0; m < d; ++m)
      for (int j = 0; j < d; ++j) phi_spec[static_cast<size_t>(m) * d + j] = ws.forward(phi[static_cast<size_t>(m) * d + j]);

    double delta = 0.0;
    std::vector<std::vector<double>> next(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        std::vector<std::complex<double>> acc(ws.spec_len(), {0.0, 0.0});
        for (int m = 0; m < d; ++m) {
          const auto& a = g_spec[static_cast<size_t>(i) * d + m];
          const auto& b = phi_spec[static_cast<size_t>(m) * d + j];
          for (size_t s = 0; s < acc.size(); ++s) acc[s] += a[s] * b[s];
        }
        std::vector<double> conv = ws.backward(acc);
        // trapezoid endpoint correction of the plain convolution sum
        for (int k = 0; k < len; ++k) {
          double corr = 0.0;
          for (int m = 0; m < d; ++m) {
            const auto& a = g[static_cast<size_t>(i) * d + m];
            const auto& b = phi[static_cast<size_t>(m) * d + j];
            corr += a[k] * b[0] + a[0] * b[k];
          }
          conv[k] = dt * (conv[k] - 0.5 * corr);
        }
        auto& row = next[static_cast<size_t>(i) * d + j];
        row.resize(len);
        const auto& base = g[static_cast<size_t>(i) * d + j];
        const auto& old = phi[static_cast<size_t>(i) * d + j];
        for (int k = 0; k < len; ++k) {
          row[k] = base[k] + conv[k];
          delta = std::max(delta, std::fabs(row[k] - old[k]));
        }
      }
    phi = std::move(next);
    if (delta < tol) break;
  }

  // clip tiny negative ringing from the spectral round trip
  for (auto& row : phi)
    for (double& v : row)
      if (v < 0.0 && v > -1e-12) v = 0.0;
  for (auto& row : phi)
    for (double v : row)
      require(v >= 0.0, ErrorCode::convergence, "renewal density developed a negative value");

  return out;
}

double default_renewal_dt(const HawkesModel& model) {
  double fastest = 0.0;
  for (int i = 0; i < model.dim(); ++i)
    for (int j = 0; j < model.dim(); ++j) {
      const Kernel& k = model.kernel(i, j);
      if (!k.is_zero()) fastest = fastest == 0.0 ? k.timescale() : std::min(fastest, k.timescale());
    }
  if (fastest == 0.0) return 0.02;
  return std::clamp(fastest / 50.0, 1e-4, 0.05);
}

double default_renewal_horizon(const HawkesModel& model, double tail) {
  const double dt = default_renewal_dt(model);
  const double h = std::max(model.correlation_horizon(tail), 10.0 * dt);
  return std::ceil(h / dt) * dt;
}

}  // namespace hawkes
