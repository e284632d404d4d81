#pragma once

#include <vector>

#include "sdirac/forward.hpp"

namespace sdirac {

struct CharDeviation {
  cplx lambda{};
  cplx d12{};
  cplx d12_principal{};
  double scaled_difference = 0.0;  // |d12 - d12_principal| e^{-pi |Im lambda|}
};

/// Delta_12 against its principal part along lambda = m + shift + i imag, m = m0..m1.
std::vector<CharDeviation> char_deviation(const ProblemSpec& spec, int m0, int m1, double shift = 0.4,
                                          double imag = 0.0, const ForwardOptions& options = {});

struct EigenDeviation {
  int k = 0;
  cplx lambda{};
  cplx lambda_principal{};
  double deviation = 0.0;
};

/// |lambda_k - lambda^0_k| for every index that has a seed.
std::vector<EigenDeviation> eigen_deviation(const ProblemSpec& spec, int K, const EigenOptions& options = {});

/// y ~ C t^{-exponent}, fitted by least squares in log-log coordinates.
struct PowerFit {
  double exponent = 0.0;
  double log_constant = 0.0;
  std::size_t points = 0;
};

/// Pairs with non-positive t or y are skipped; throws ValidationError with fewer than two left.
PowerFit fit_power_decay(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace sdirac
