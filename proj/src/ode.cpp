#include "sdirac/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <sstream>
#include <utility>

#include <boost/numeric/odeint.hpp>

#include "sdirac/error.hpp"

namespace sdirac {

namespace {

namespace odeint = boost::numeric::odeint;

// Complex 2x2 matrices stored as interleaved (re, im) doubles, row-major.
template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N, std::size_t offset>
Mat2 unpack(const State<N>& s) {
  static_assert(offset + 8 <= N);
  return {{s[offset + 0], s[offset + 1]},
          {s[offset + 2], s[offset + 3]},
          {s[offset + 4], s[offset + 5]},
          {s[offset + 6], s[offset + 7]}};
}

template <std::size_t N, std::size_t offset>
void pack(const Mat2& m, State<N>& s) {
  static_assert(offset + 8 <= N);
  const cplx v[4] = {m.a11, m.a12, m.a21, m.a22};
  for (std::size_t i = 0; i < 4; ++i) {
    s[offset + 2 * i] = v[i].real();
    s[offset + 2 * i + 1] = v[i].imag();
  }
}

template <std::size_t N>
struct System {
  const ProblemSpec* spec;
  cplx lambda;
  int region;  // singularity whose Q_omega term is active, -1 for none

  void operator()(const State<N>& s, State<N>& ds, double x) const {
    Mat2 coeff = spec->q(x);
    if (region >= 0) coeff += spec->q_omega(static_cast<std::size_t>(region), x);
    const Mat2 A = kB * coeff - lambda * kB;
    const Mat2 Y = unpack<N, 0>(s);
    pack<N, 0>(A * Y, ds);
    if constexpr (N == 16) pack<N, 8>(A * unpack<N, 8>(s) - kB * Y, ds);
  }
};

struct Piece {
  double begin, end;
  int region;
};

std::vector<Piece> split(const ProblemSpec& spec, double x0, double x1) {
  const double lo = std::min(x0, x1), hi = std::max(x0, x1);
  for (const auto& s : spec.singularities)
    if (s.gamma >= lo && s.gamma <= hi && lo != hi) {
      std::ostringstream msg;
      msg << "integrate_system: segment [" << lo << ", " << hi << "] contains the singularity at " << s.gamma;
      throw NumericalError(msg.str());
    }
  std::vector<double> cuts{x0};
  if (spec.size() > 1) {
    std::vector<double> inner;
    for (std::size_t k = 0; k + 1 < spec.size(); ++k) {
      const double b = spec.region_end(k);
      if (b > lo && b < hi) inner.push_back(b);
    }
    if (x1 < x0) std::reverse(inner.begin(), inner.end());
    cuts.insert(cuts.end(), inner.begin(), inner.end());
  }
  cuts.push_back(x1);
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    pieces.push_back({cuts[i], cuts[i + 1], spec.region_of(0.5 * (cuts[i] + cuts[i + 1]))});
  return pieces;
}

template <std::size_t N>
std::vector<Jet2> run(const ProblemSpec& spec, cplx lambda, double x0, const Jet2& y0, const std::vector<double>& xs,
                      const OdeOptions& options) {
  std::vector<Jet2> out(xs.size());
  if (xs.empty()) return out;
  const double dir = xs.back() >= x0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double prev = i == 0 ? x0 : xs[i - 1];
    if ((xs[i] - prev) * dir < 0.0) throw ValidationError("integrate_system: evaluation points must be monotone");
  }

  State<N> state{};
  pack<N, 0>(y0.value, state);
  if constexpr (N == 16) pack<N, 8>(y0.deriv, state);

  auto stepper = odeint::make_controlled(options.atol, options.rtol, odeint::runge_kutta_fehlberg78<State<N>>());
  std::size_t next = 0;
  for (const Piece& p : split(spec, x0, xs.back())) {
    std::vector<double> times{p.begin};
    std::vector<std::pair<std::size_t, std::size_t>> hits;  // (point index, time index)
    while (next < xs.size() && (xs[next] - p.end) * dir <= 0.0) {
      if (xs[next] != times.back()) times.push_back(xs[next]);
      hits.emplace_back(next, times.size() - 1);
      ++next;
    }
    if (times.back() != p.end) times.push_back(p.end);

    std::vector<Jet2> seen;
    seen.reserve(times.size());
    auto observer = [&](const State<N>& s, double) {
      Jet2 j{unpack<N, 0>(s), Mat2::zero()};
      if constexpr (N == 16) j.deriv = unpack<N, 8>(s);
      seen.push_back(j);
    };
    const double span = std::abs(p.end - p.begin);
    if (span == 0.0) {
      for (std::size_t i = 0; i < times.size(); ++i) observer(state, times[i]);
    } else {
      const double dt = dir * std::min(0.02, span);
      try {
        odeint::integrate_times(stepper, System<N>{&spec, lambda, p.region}, state, times.begin(), times.end(), dt,
                                observer);
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "integrate_system: integrator failure on [" << std::min(p.begin, p.end) << ", "
            << std::max(p.begin, p.end) << "] at lambda = " << lambda << ": " << e.what();
        throw NumericalError(msg.str());
      }
    }
    // Carry the last observed state into the next piece.
    pack<N, 0>(seen.back().value, state);
    if constexpr (N == 16) pack<N, 8>(seen.back().deriv, state);
    for (const auto& [point, time] : hits) out[point] = seen[time];
  }
  for (const auto& j : out)
    if (!std::isfinite(j.value.max_abs()))
      throw NumericalError("integrate_system: non-finite solution at lambda = " + std::to_string(lambda.real()) +
                           (lambda.imag() < 0 ? "" : "+") + std::to_string(lambda.imag()) + "i");
  return out;
}

}  // namespace

std::vector<Jet2> integrate_system(const ProblemSpec& spec, cplx lambda, double x0, const Jet2& y0,
                                   const std::vector<double>& xs, bool with_derivative, const OdeOptions& options) {
  return with_derivative ? run<16>(spec, lambda, x0, y0, xs, options) : run<8>(spec, lambda, x0, y0, xs, options);
}

Jet2 integrate_to(const ProblemSpec& spec, cplx lambda, double x0, const Jet2& y0, double x1, bool with_derivative,
                  const OdeOptions& options) {
  return integrate_system(spec, lambda, x0, y0, {x1}, with_derivative, options).front();
}

}  // namespace sdirac
