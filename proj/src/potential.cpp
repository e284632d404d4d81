#include "sdirac/potential.hpp"

#include <cmath>

#include "sdirac/error.hpp"

namespace sdirac {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr int kChebyshevNodes = 17;

// Monomial coefficients (in u on [-1, 1]) of the Chebyshev interpolant of f.
template <class F>
std::vector<cplx> chebyshev_monomials(F&& f, int n) {
  std::vector<cplx> values(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) values[j] = f(std::cos(kPi * (j + 0.5) / n));

  std::vector<cplx> cheb(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) sum += values[j] * std::cos(kPi * m * (j + 0.5) / n);
    cheb[m] = (m == 0 ? 1.0 : 2.0) * sum / static_cast<double>(n);
  }

  // T_{m+1} = 2u T_m - T_{m-1}, tracked as monomial coefficient rows.
  std::vector<cplx> mono(static_cast<std::size_t>(n), 0.0);
  std::vector<double> prev(static_cast<std::size_t>(n), 0.0), cur(static_cast<std::size_t>(n), 0.0);
  prev[0] = 1.0;
  if (n > 1) cur[1] = 1.0;
  mono[0] += cheb[0];
  for (int m = 1; m < n; ++m) {
    for (int i = 0; i < n; ++i) mono[i] += cheb[m] * cur[i];
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i + 1 < n; ++i) next[i + 1] += 2.0 * cur[i];
    for (int i = 0; i < n; ++i) next[i] -= prev[i];
    prev.swap(cur);
    cur.swap(next);
  }
  return mono;
}

}  // namespace

SampledPotential::SampledPotential(double x0, double step, std::vector<cplx> q1, std::vector<cplx> q2)
    : x0_(x0), step_(step), q1_(std::move(q1)), q2_(std::move(q2)) {
  if (q1_.size() != q2_.size()) throw ValidationError("potential.samples: q1 and q2 differ in length");
  if (q1_.size() < 5) throw ValidationError("potential.samples: need at least 5 samples");
  if (!(step_ > 0.0)) throw ValidationError("potential.samples: step must be positive");
  const double end = x0_ + step_ * static_cast<double>(q1_.size() - 1);
  if (x0_ > 1e-12 || end < kPi - 1e-9)
    throw ValidationError("potential.samples: samples must cover [0, pi]");
  for (std::size_t i = 0; i < q1_.size(); ++i)
    if (!std::isfinite(std::abs(q1_[i])) || !std::isfinite(std::abs(q2_[i])))
      throw ValidationError("potential.samples: non-finite sample at position " + std::to_string(i));

  auto make = [&](const std::vector<cplx>& src, bool imag) {
    std::vector<double> part(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) part[i] = imag ? src[i].imag() : src[i].real();
    return Spline(part.data(), part.size(), x0_, step_);
  };
  splines_ = {make(q1_, false), make(q1_, true), make(q2_, false), make(q2_, true)};
}

PotentialValue SampledPotential::at(double x) const {
  return {{splines_[0](x), splines_[1](x)}, {splines_[2](x), splines_[3](x)}};
}

std::string Potential::kind() const {
  return std::visit(Overloaded{[](const ZeroPotential&) { return std::string("zero"); },
                               [](const ConstantPotential&) { return std::string("constant"); },
                               [](const TrigPotential&) { return std::string("trig"); },
                               [](const SampledPotential&) { return std::string("samples"); }},
                    impl_);
}

PotentialValue Potential::at(double x) const {
  return std::visit(Overloaded{[](const ZeroPotential&) { return PotentialValue{}; },
                               [](const ConstantPotential& c) { return PotentialValue{c.q1, c.q2}; },
                               [x](const TrigPotential& t) {
                                 const double th = t.frequency * x + t.phase;
                                 return PotentialValue{t.amplitude * std::sin(th), t.amplitude * std::cos(th)};
                               },
                               [x](const SampledPotential& s) { return s.at(x); }},
                    impl_);
}

std::optional<PotentialValue> Potential::at_complex(cplx x) const {
  return std::visit(Overloaded{[](const ZeroPotential&) -> std::optional<PotentialValue> { return PotentialValue{}; },
                               [](const ConstantPotential& c) -> std::optional<PotentialValue> {
                                 return PotentialValue{c.q1, c.q2};
                               },
                               [x](const TrigPotential& t) -> std::optional<PotentialValue> {
                                 const cplx th = t.frequency * x + t.phase;
                                 return PotentialValue{t.amplitude * std::sin(th), t.amplitude * std::cos(th)};
                               },
                               [](const SampledPotential&) -> std::optional<PotentialValue> { return std::nullopt; }},
                    impl_);
}

std::vector<Mat2> Potential::taylor(double center, double radius, int order) const {
  std::vector<Mat2> out(static_cast<std::size_t>(std::max(order, 0)), Mat2::zero());
  if (order <= 0) return out;
  std::visit(Overloaded{[](const ZeroPotential&) {},
                        [&](const ConstantPotential& c) { out[0] = PotentialValue{c.q1, c.q2}.matrix(); },
                        [&](const TrigPotential& t) {
                          const double th = t.frequency * center + t.phase;
                          double scale = t.amplitude;  // A w^n / n!
                          for (int n = 0; n < order; ++n) {
                            const double phase = th + 0.5 * kPi * n;
                            out[n] = PotentialValue{scale * std::sin(phase), scale * std::cos(phase)}.matrix();
                            scale *= t.frequency / (n + 1);
                            if (scale == 0.0) break;
                          }
                        },
                        [&](const SampledPotential& s) {
                          const int n = kChebyshevNodes;
                          auto q1 = chebyshev_monomials([&](double u) { return s.at(center + radius * u).q1; }, n);
                          auto q2 = chebyshev_monomials([&](double u) { return s.at(center + radius * u).q2; }, n);
                          double rpow = 1.0;
                          for (int i = 0; i < std::min(order, n); ++i) {
                            out[i] = PotentialValue{q1[i] / rpow, q2[i] / rpow}.matrix();
                            rpow *= radius;
                          }
                        }},
             impl_);
  return out;
}

}  // namespace sdirac
