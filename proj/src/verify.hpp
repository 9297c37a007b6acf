#ifndef HAWKES_VERIFY_HPP
#define HAWKES_VERIFY_HPP

#include <string>
#include <vector>

#include "model.hpp"

namespace hawkes {

struct VerifyCheck {
  std::string name;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  bool pass = false;
};

struct WSweepPoint {
  double bin_width = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct VerificationReport {
  std::vector<VerifyCheck> checks;
  std::vector<WSweepPoint> w_sweep;  // window-robustness diagnostic for k^{11}
  bool all_pass = false;
  double t_obs = 0.0;
  uint64_t seed = 0;
};

struct VerifyOptions {
  double t_obs = 1e4;
  uint64_t seed = 1;
  double bin_width = -1.0;  // negative: derived from the kernel scales
  double lag_step = 0.5;
  int lag_bins = 6;
};

// Simulates the model, runs every estimator against its analytic
// counterpart and scores each comparison at three standard errors.
VerificationReport run_verify(const HawkesModel& model, const VerifyOptions& opts = {});

std::string report_to_json(const VerificationReport& report);

}  // namespace hawkes

#endif
