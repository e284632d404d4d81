#include "sdirac/types.hpp"

#include <cmath>
#include <string>

#include "sdirac/error.hpp"

namespace sdirac {

Mat2 rotation(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {c, -s, s, c};
}

SectorIndex sector_of(cplx lambda) {
  if (lambda == cplx{0.0, 0.0}) throw ValidationError("sector_of: undefined sector at origin");
  const double arg = std::arg(lambda);  // (-pi, pi]
  const double half = 0.5 * kPi;
  if (arg > -half && arg <= half) return {-1, 0};
  if (arg > half) return {1, 1};
  return {1, -1};
}

double nu_exponent(const std::vector<Singularity>& singularities) {
  double nu = 1.0;
  for (const auto& s : singularities) nu = std::min(nu, 2.0 * s.mu.real());
  return nu;
}

SpectralData::SpectralData(std::vector<SpectralDatum> data) : data_(std::move(data)) {
  if (data_.empty() || data_.size() % 2 == 0)
    throw ValidationError("spectral data: index range must be [-K, K] (odd number of entries)");
  const int K = static_cast<int>(data_.size() / 2);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const int expected = static_cast<int>(i) - K;
    if (data_[i].k != expected)
      throw ValidationError("spectral data: index " + std::to_string(data_[i].k) + " at position " +
                            std::to_string(i) + ", expected " + std::to_string(expected));
    if (data_[i].a == cplx{0.0, 0.0})
      throw ValidationError("spectral data: vanishing residue a at index " + std::to_string(data_[i].k));
    if (!std::isfinite(data_[i].lambda.real()) || !std::isfinite(data_[i].lambda.imag()) ||
        !std::isfinite(data_[i].a.real()) || !std::isfinite(data_[i].a.imag()))
      throw ValidationError("spectral data: non-finite entry at index " + std::to_string(data_[i].k));
  }
  for (std::size_t i = 0; i < data_.size(); ++i)
    for (std::size_t j = i + 1; j < data_.size(); ++j)
      if (data_[i].lambda == data_[j].lambda)
        throw ValidationError("spectral data: repeated eigenvalue at indices " + std::to_string(data_[i].k) +
                              " and " + std::to_string(data_[j].k));
}

double SpectralData::max_imag() const {
  double h = 0.0;
  for (const auto& d : data_) h = std::max(h, std::abs(d.lambda.imag()));
  return h;
}

void SpectralData::check_strip(double h) const {
  for (const auto& d : data_)
    if (std::abs(d.lambda.imag()) > h)
      throw ValidationError("spectral data: eigenvalue at index " + std::to_string(d.k) +
                            " lies outside the strip |Im lambda| <= " + std::to_string(h));
}

}  // namespace sdirac
