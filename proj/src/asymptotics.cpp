#include "sdirac/asymptotics.hpp"

#include <cmath>
#include <map>

#include "sdirac/error.hpp"
#include "sdirac/parallel.hpp"

namespace sdirac {

std::vector<CharDeviation> char_deviation(const ProblemSpec& spec, int m0, int m1, double shift, double imag,
                                          const ForwardOptions& options) {
  if (m1 < m0) throw ValidationError("char_deviation: empty range");
  std::vector<CharDeviation> out(static_cast<std::size_t>(m1 - m0 + 1));
  parallel_for(out.size(), [&](std::size_t i) {
    const cplx lambda{m0 + static_cast<double>(i) + shift, imag};
    CharDeviation& row = out[i];
    row.lambda = lambda;
    row.d12 = char_fn(spec, lambda, false, options).d12();
    row.d12_principal = char_fn_asymptotic(spec, lambda);
    row.scaled_difference = std::abs(row.d12 - row.d12_principal) * std::exp(-kPi * std::abs(imag));
  });
  return out;
}

std::vector<EigenDeviation> eigen_deviation(const ProblemSpec& spec, int K, const EigenOptions& options) {
  const SeedResult seeds = seed_zeros(spec, K);
  const EigenResult eig = find_eigenvalues(spec, K, options);
  std::map<int, cplx> by_index;
  for (const auto& e : eig.eigenvalues) by_index[e.k] = e.lambda;
  std::vector<EigenDeviation> out;
  for (const auto& [k, seed] : seeds.seeds) {
    const auto it = by_index.find(k);
    if (it == by_index.end()) continue;
    out.push_back({k, it->second, seed, std::abs(it->second - seed)});
  }
  return out;
}

PowerFit fit_power_decay(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw ValidationError("fit_power_decay: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(t[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw ValidationError("fit_power_decay: need at least two positive samples");
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) throw ValidationError("fit_power_decay: abscissae coincide");
  const double slope = (dn * sxy - sx * sy) / denom;
  return {-slope, (sy - slope * sx) / dn, n};
}

}  // namespace sdirac
