#include "sdirac/forward.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "sdirac/contour.hpp"
#include "sdirac/error.hpp"
#include "sdirac/frobenius.hpp"
#include "sdirac/parallel.hpp"

namespace sdirac {

namespace {

std::string format(cplx z) {
  std::ostringstream s;
  s.precision(10);
  s << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return s.str();
}

void check_point(const ProblemSpec& spec, double x) {
  if (!(x >= 0.0 && x <= kPi)) throw ValidationError("global_S: x = " + std::to_string(x) + " outside [0, pi]");
  for (std::size_t k = 0; k < spec.size(); ++k)
    if (x == spec.singularity(k).gamma)
      throw ValidationError("global_S: x coincides with singularity " + std::to_string(k));
}

std::vector<double> matching_points(const ProblemSpec& spec, const ForwardOptions& options) {
  const std::size_t N = spec.size();
  if (N < 2) return {};
  if (options.matching_points.empty()) {
    std::vector<double> mid(N - 1);
    for (std::size_t j = 0; j + 1 < N; ++j) mid[j] = spec.region_end(j);
    return mid;
  }
  if (options.matching_points.size() != N - 1)
    throw ValidationError("global_S: expected " + std::to_string(N - 1) + " matching points");
  for (std::size_t j = 0; j + 1 < N; ++j) {
    const double a = options.matching_points[j];
    if (!(a > spec.singularity(j).gamma && a < spec.singularity(j + 1).gamma))
      throw ValidationError("global_S: matching point " + std::to_string(j) + " outside its interval");
  }
  return options.matching_points;
}

}  // namespace

std::vector<Jet2> sweep_S(const ProblemSpec& spec, cplx lambda, const std::vector<double>& xs, bool with_derivative,
                          const ForwardOptions& options) {
  for (double x : xs) check_point(spec, x);
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::vector<Jet2> out(xs.size());
  const std::size_t N = spec.size();
  const Jet2 identity = Jet2::constant(Mat2::identity());

  auto run_group = [&](const std::vector<std::size_t>& idx, double x0, const Jet2& y0) {
    if (idx.empty()) return;
    std::vector<double> pts(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) pts[i] = xs[idx[i]];
    const auto res = integrate_system(spec, lambda, x0, y0, pts, with_derivative, options.ode);
    for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = res[i];
  };

  if (N == 0) {
    run_group(order, 0.0, identity);
  } else {
    std::vector<FrobeniusBasis> bases;
    bases.reserve(N);
    for (std::size_t k = 0; k < N; ++k) bases.push_back(build_frobenius_basis(spec, k, lambda));

    // S^(k) at y, by the series inside the disk and by integration from its edge outside.
    auto local = [&](std::size_t k, double y) {
      const FrobeniusBasis& b = bases[k];
      if (std::abs(y - b.gamma) <= b.radius) return eval_local_jet(b, y);
      const double edge = y > b.gamma ? b.gamma + b.radius : b.gamma - b.radius;
      return integrate_to(spec, lambda, edge, eval_local_jet(b, edge), y, true, options.ode);
    };

    std::vector<Jet2> C(N);
    C[0] = local(0, 0.0).inverse();
    const auto match = matching_points(spec, options);
    for (std::size_t j = 0; j + 1 < N; ++j) C[j + 1] = local(j + 1, match[j]).inverse() * local(j, match[j]) * C[j];

    std::vector<std::vector<std::size_t>> groups(N + 1);
    for (std::size_t i : order) {
      const double x = xs[i];
      bool in_disk = false;
      for (std::size_t k = 0; k < N && !in_disk; ++k)
        if (std::abs(x - bases[k].gamma) <= bases[k].radius) {
          out[i] = eval_local_jet(bases[k], x) * C[k];
          in_disk = true;
        }
      if (!in_disk) groups[spec.interval_of(x)].push_back(i);
    }
    run_group(groups[0], 0.0, identity);
    for (std::size_t j = 1; j <= N; ++j) {
      const FrobeniusBasis& b = bases[j - 1];
      const double start = b.gamma + b.radius;
      run_group(groups[j], start, eval_local_jet(b, start) * C[j - 1]);
    }
  }

  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) out[i] = identity;
    if (!with_derivative) out[i].deriv = Mat2::zero();
  }
  return out;
}

FundamentalMatrix global_S(const ProblemSpec& spec, double x, cplx lambda, bool with_derivative,
                           const ForwardOptions& options) {
  const Jet2 j = sweep_S(spec, lambda, {x}, with_derivative, options).front();
  FundamentalMatrix out;
  out.value = j.value;
  if (with_derivative) out.dvalue = j.deriv;
  out.x = x;
  out.lambda = lambda;
  return out;
}

Mat2 phi(const ProblemSpec& spec, double x, cplx lambda, const ForwardOptions& options) {
  return global_S(spec, x, lambda, false, options).value * rotation(spec.alpha);
}

Mat2 psi(const ProblemSpec& spec, double x, cplx lambda, const ForwardOptions& options) {
  const auto s = sweep_S(spec, lambda, {x, kPi}, false, options);
  return s[0].value * s[1].value.inverse() * rotation(spec.beta);
}

CharMatrix char_fn(const ProblemSpec& spec, cplx lambda, bool with_derivative, const ForwardOptions& options) {
  const Jet2 s = sweep_S(spec, lambda, {kPi}, with_derivative, options).front();
  const Mat2 left = rotation(spec.beta).transpose(), right = rotation(spec.alpha);
  CharMatrix out;
  out.delta = left * s.value * right;
  if (with_derivative) out.ddelta = left * s.deriv * right;
  out.lambda = lambda;
  return out;
}

cplx char_fn_asymptotic(const ProblemSpec& spec, cplx lambda) {
  const double l = sector_of(lambda).l;
  const cplx w = lambda * kPi + (spec.alpha - spec.beta);
  cplx value = (std::exp(-kI * w) - std::exp(kI * w)) / (2.0 * kI);
  for (const auto& s : spec.singularities)
    value += l * std::sin(kPi * s.mu) *
             std::exp(-kI * l * lambda * (kPi - 2.0 * s.gamma) + kI * l * (2.0 * s.eta - spec.alpha - spec.beta));
  return value;
}

double lattice_shift(const ProblemSpec& spec) { return -(spec.alpha - spec.beta) / kPi; }

namespace {

// Delta^0_12 and its derivative with the sector sign l frozen.
std::pair<cplx, cplx> asymptotic_with_derivative(const ProblemSpec& spec, cplx lambda, double l) {
  const cplx w = lambda * kPi + (spec.alpha - spec.beta);
  cplx f = (std::exp(-kI * w) - std::exp(kI * w)) / (2.0 * kI);
  cplx df = -0.5 * kPi * (std::exp(-kI * w) + std::exp(kI * w));
  for (const auto& s : spec.singularities) {
    const double span = kPi - 2.0 * s.gamma;
    const cplx e = l * std::sin(kPi * s.mu) *
                   std::exp(-kI * l * lambda * span + kI * l * (2.0 * s.eta - spec.alpha - spec.beta));
    f += e;
    df += -kI * l * span * e;
  }
  return {f, df};
}

}  // namespace

SeedResult seed_zeros(const ProblemSpec& spec, int K) {
  if (K < 1) throw ValidationError("seed_zeros: K must be at least 1");
  SeedResult out;
  const double c = lattice_shift(spec);
  for (int k = -K; k <= K; ++k) {
    cplx z{k + c, 0.0};
    if (std::abs(z) < 1e-3) z = {1e-3, 0.0};
    const double l = sector_of(z).l;
    bool converged = false;
    for (int it = 0; it < 60 && !converged; ++it) {
      const auto [f, df] = asymptotic_with_derivative(spec, z, l);
      if (df == cplx{}) break;
      cplx step = f / df;
      if (std::abs(step) > 0.25) step *= 0.25 / std::abs(step);
      z -= step;
      converged = std::abs(step) < 1e-13 * (1.0 + std::abs(z));
    }
    std::string reason;
    if (!converged) {
      reason = "Newton did not converge";
    } else if (z != cplx{} && sector_of(z).l != l) {
      reason = "Newton left the sector of its start point";
    } else {
      for (const auto& [j, s] : out.seeds)
        if (std::abs(s - z) < 1e-6) reason = "duplicate of index " + std::to_string(j);
    }
    if (reason.empty())
      out.seeds.emplace_back(k, z);
    else
      out.warnings.push_back("seed_zeros: index " + std::to_string(k) + " skipped (" + reason + ")");
  }
  return out;
}

double strip_height(const SeedResult& seeds) {
  double h = 0.0;
  for (const auto& s : seeds.seeds) h = std::max(h, std::abs(s.second.imag()));
  return 1.0 + h;
}

namespace {

constexpr double kEdgeThreshold = 1e-2;
constexpr double kNudge = 0.05;
constexpr int kMaxNudges = 4;

struct NewtonResult {
  bool ok = false;
  cplx z{};
  cplx df{};
  double residual = 0.0;
};

NewtonResult newton_d12(const ProblemSpec& spec, cplx z, const EigenOptions& options, double re0, double re1,
                        double h) {
  NewtonResult r;
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    const CharMatrix cm = char_fn(spec, z, true, options.forward);
    const cplx f = cm.d12(), df = cm.ddelta->a12;
    r.df = df;
    r.residual = std::abs(f);
    if (df == cplx{}) return r;
    cplx step = f / df;
    if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
    z -= step;
    last = std::abs(step);
    if (z.real() < re0 - 1.0 || z.real() > re1 + 1.0 || std::abs(z.imag()) > h + 1.0) return r;
    if (last < options.newton_tol * (1.0 + std::abs(z))) break;
  }
  if (last > 1e-8 * (1.0 + std::abs(z))) return r;
  const CharMatrix cm = char_fn(spec, z, true, options.forward);
  r.ok = true;
  r.z = z;
  r.df = cm.ddelta->a12;
  r.residual = std::abs(cm.d12());
  return r;
}

}  // namespace

EigenResult find_eigenvalues(const ProblemSpec& spec, int K, const EigenOptions& options) {
  const SeedResult seeds = seed_zeros(spec, K);
  EigenResult result;
  result.warnings = seeds.warnings;
  double h = strip_height(seeds);
  const double c = lattice_shift(spec);
  const ScalarFn f = [&](cplx z) { return char_fn(spec, z, false, options.forward).d12(); };

  // Vertical cuts v_0 < ... < v_{2K+1}; rectangle m lies between v_m and v_{m+1}.
  const int cuts = 2 * K + 2;
  std::vector<double> v(static_cast<std::size_t>(cuts));
  std::vector<double> vert(static_cast<std::size_t>(cuts));
  for (int m = 0; m < cuts; ++m) v[m] = c - K - 0.5 + m;

  std::vector<double> bottom, top;
  for (int attempt = 0;; ++attempt) {
    parallel_for(static_cast<std::size_t>(cuts), [&](std::size_t m) {
      const double base = v[m];
      for (int n = 0;; ++n) {
        const double shift = n == 0 ? 0.0 : kNudge * ((n + 1) / 2) * (n % 2 ? 1.0 : -1.0);
        double lowest = 0.0;
        const double inc = arg_increment(f, {base + shift, -h}, {base + shift, h}, 0.25, &lowest);
        if (lowest >= kEdgeThreshold || n == 2 * kMaxNudges) {
          v[m] = base + shift;
          vert[m] = inc;
          return;
        }
      }
    });
    bottom.assign(static_cast<std::size_t>(cuts - 1), 0.0);
    top.assign(static_cast<std::size_t>(cuts - 1), 0.0);
    std::vector<double> low(static_cast<std::size_t>(2 * (cuts - 1)), 0.0);
    parallel_for(static_cast<std::size_t>(2 * (cuts - 1)), [&](std::size_t i) {
      const std::size_t m = i / 2;
      if (i % 2 == 0)
        bottom[m] = arg_increment(f, {v[m], -h}, {v[m + 1], -h}, 0.25, &low[i]);
      else
        top[m] = arg_increment(f, {v[m + 1], h}, {v[m], h}, 0.25, &low[i]);
    });
    if (*std::min_element(low.begin(), low.end()) >= kEdgeThreshold || attempt == kMaxNudges) break;
    h += 0.25;
    for (int m = 0; m < cuts; ++m) v[m] = c - K - 0.5 + m;
  }
  result.strip_height = h;
  result.window_left = v.front();
  result.window_right = v.back();

  std::vector<int> counts(static_cast<std::size_t>(cuts - 1));
  double total = 0.0;
  for (int m = 0; m + 1 < cuts; ++m) {
    const double w = (bottom[m] + vert[m + 1] + top[m] - vert[m]) / (2.0 * kPi);
    total += w;
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.1) {
      std::ostringstream msg;
      msg << "find_eigenvalues: non-integer zero count " << w << " on Re in [" << v[m] << ", " << v[m + 1] << "]";
      throw NumericalError(msg.str());
    }
    counts[m] = static_cast<int>(rounded);
  }
  result.contour_count = static_cast<int>(std::lround(total));

  // Localize the zeros of each rectangle.
  std::vector<std::vector<NewtonResult>> found(static_cast<std::size_t>(cuts - 1));
  parallel_for(static_cast<std::size_t>(cuts - 1), [&](std::size_t m) {
    const double re0 = v[m], re1 = v[m + 1];
    auto& roots = found[m];

    auto try_start = [&](cplx z, double a0, double a1, double b0, double b1, int need) {
      if (static_cast<int>(roots.size()) >= need) return;
      NewtonResult r = newton_d12(spec, z, options, re0, re1, h);
      if (!r.ok) return;
      if (!(r.z.real() > a0 && r.z.real() < a1 && r.z.imag() > b0 && r.z.imag() < b1)) return;
      for (const auto& o : roots)
        if (std::abs(o.z - r.z) < 1e-6) return;
      roots.push_back(r);
    };

    std::function<void(double, double, double, double, int, int)> localize =
        [&](double a0, double a1, double b0, double b1, int need, int depth) {
          const std::size_t before = roots.size();
          auto have = [&] { return static_cast<int>(roots.size() - before); };
          for (const auto& [k, s] : seeds.seeds)
            if (s.real() > a0 && s.real() < a1 && s.imag() > b0 && s.imag() < b1) try_start(s, a0, a1, b0, b1, static_cast<int>(before) + need);
          try_start({0.5 * (a0 + a1), 0.5 * (b0 + b1)}, a0, a1, b0, b1, static_cast<int>(before) + need);
          for (int i = 1; i <= 5 && have() < need; ++i)
            for (int j = 1; j <= 3 && have() < need; ++j)
              try_start({a0 + (a1 - a0) * i / 6.0, b0 + (b1 - b0) * j / 4.0}, a0, a1, b0, b1,
                        static_cast<int>(before) + need);
          if (have() >= need) return;
          if (depth >= options.max_subdivision) {
            std::ostringstream msg;
            msg << "find_eigenvalues: count mismatch on [" << a0 << ", " << a1 << "] x [" << b0 << ", " << b1
                << "] (expected " << need << ", localized " << have()
                << "); multiple eigenvalue - outside simple-spectrum scope";
            throw NumericalError(msg.str());
          }
          // Discard partial finds here and bisect along the longer side.
          roots.resize(before);
          const bool split_re = (a1 - a0) >= (b1 - b0);
          const double cut = split_re ? 0.5 * (a0 + a1) : 0.5 * (b0 + b1);
          const double s0 = split_re ? a0 : b0, s1 = split_re ? a1 : b1;
          double pos = cut;
          int n1 = 0;
          for (int attempt = 0; attempt < 5; ++attempt) {
            pos = cut + (s1 - s0) * 0.07 * attempt;
            try {
              n1 = split_re ? count_zeros(f, a0, pos, b0, b1) : count_zeros(f, a0, a1, b0, pos);
              break;
            } catch (const NumericalError&) {
              if (attempt == 4) throw;
            }
          }
          if (n1 > 0) {
            if (split_re)
              localize(a0, pos, b0, b1, n1, depth + 1);
            else
              localize(a0, a1, b0, pos, n1, depth + 1);
          }
          if (need - n1 > 0) {
            if (split_re)
              localize(pos, a1, b0, b1, need - n1, depth + 1);
            else
              localize(a0, a1, pos, b1, need - n1, depth + 1);
          }
        };
    if (counts[m] > 0) localize(re0, re1, -h, h, counts[m], 0);
  });

  std::vector<NewtonResult> all;
  for (const auto& roots : found) all.insert(all.end(), roots.begin(), roots.end());
  std::sort(all.begin(), all.end(), [](const NewtonResult& a, const NewtonResult& b) {
    return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
  });

  if (result.contour_count != 2 * K + 1 || static_cast<int>(all.size()) != 2 * K + 1) {
    std::ostringstream msg;
    msg << "find_eigenvalues: count mismatch, argument principle gives " << result.contour_count << " and "
        << all.size() << " zeros were localized in [" << v.front() << ", " << v.back() << "] x [" << -h << ", " << h
        << "], expected " << 2 * K + 1;
    throw NumericalError(msg.str());
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(all[i].z - all[j].z) <= 1e-8)
        throw NumericalError("find_eigenvalues: multiple eigenvalue - outside simple-spectrum scope (lambda = " +
                             format(all[i].z) + ")");
    if (std::abs(all[i].df) <= 1e-10)
      throw NumericalError("find_eigenvalues: multiple eigenvalue - outside simple-spectrum scope (lambda = " +
                           format(all[i].z) + ", |dDelta_12| = " + std::to_string(std::abs(all[i].df)) + ")");
    result.eigenvalues.push_back({static_cast<int>(i) - K, all[i].z, all[i].df, all[i].residual});
  }
  return result;
}

cplx weyl_function(const ProblemSpec& spec, cplx lambda, const ForwardOptions& options) {
  const CharMatrix cm = char_fn(spec, lambda, false, options);
  if (std::abs(cm.d12()) < 1e-13) throw NumericalError("weyl_function: pole at lambda = " + format(lambda));
  return -cm.d11() / cm.d12();
}

cplx weyl_residue(const ProblemSpec& spec, cplx lambda_k, const ForwardOptions& options) {
  const CharMatrix cm = char_fn(spec, lambda_k, true, options);
  const cplx d = cm.ddelta->a12;
  if (std::abs(d) < 1e-10) throw NumericalError("weyl_residue: non-simple zero at lambda = " + format(lambda_k));
  return -cm.d11() / d;
}

ForwardResult compute_spectral_data(const ProblemSpec& spec, int K, const EigenOptions& options) {
  ForwardResult out;
  out.eigen = find_eigenvalues(spec, K, options);
  std::vector<SpectralDatum> data(out.eigen.eigenvalues.size());
  parallel_for(data.size(), [&](std::size_t i) {
    const Eigenvalue& e = out.eigen.eigenvalues[i];
    data[i] = {e.k, e.lambda, weyl_residue(spec, e.lambda, options.forward)};
  });
  out.data = SpectralData(std::move(data));
  return out;
}

cplx weyl_partial_sum(const SpectralData& data, const SpectralData& model, cplx lambda) {
  if (data.K() != model.K()) throw ValidationError("weyl_partial_sum: index ranges differ");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const SpectralDatum &d = data.data()[i], &m = model.data()[i];
    sum += d.a / (lambda - d.lambda) - m.a / (lambda - m.lambda);
  }
  return sum;
}

}  // namespace sdirac
