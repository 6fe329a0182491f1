#pragma once

// Randomized property suite for the resonance score, run by `resonancedb
// verify` and by the acceptance tests.
//
// The score under test is supplied as a function so a faulty kernel can be
// injected; by default it is the unclamped compact form of the scalar
// kernel, so the bounds check sees rounding excursions instead of the clamp.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "resonance/core_types.hpp"
#include "resonance/kernel.hpp"
#include "resonance/mapping.hpp"
#include "resonance/operators.hpp"

namespace resonance {

using ScoreFn = std::function<double(const WavePattern&, const WavePattern&)>;

[[nodiscard]] inline ScoreFn scalar_score_fn() {
  return [](const WavePattern& p, const WavePattern& q) {
    return raw_score(resonance_terms(p, q, KernelKind::Scalar));
  };
}

/// Interference form evaluated on materialized complex values: half the
/// energy of psi1 + psi2 over the summed energies, times the scale-alignment
/// factor 2 sqrt(E1 E2) / (E1 + E2). Independent of the kernel's compact form.
[[nodiscard]] inline double resonance_direct(const WavePattern& p, const WavePattern& q) {
  double plus = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const std::complex<double> z1 = std::polar(p.amplitude()[x], p.phase()[x]);
    const std::complex<double> z2 = std::polar(q.amplitude()[x], q.phase()[x]);
    plus += std::norm(z1 + z2);
    e1 += std::norm(z1);
    e2 += std::norm(z2);
  }
  if (e1 + e2 == 0.0) return 0.0;
  const double r = 2.0 * std::sqrt(e1 * e2) / (e1 + e2);
  return 0.5 * plus / (e1 + e2) * r;
}

struct PropertyResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;      // largest observed deviation
  double tolerance = 0.0;
  std::size_t cases = 0;
};

struct VerifyConfig {
  std::uint64_t seed = 42;
  std::size_t cases = 10000;
  std::vector<std::size_t> dims = {1, 2, 8, 512};
  double max_amplitude = 10.0;
  bool check_vectorized = kVectorizedAvailable;
};

struct VerifyReport {
  std::vector<PropertyResult> results;

  [[nodiscard]] bool all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  }
};

namespace detail {

class PropertyTracker {
 public:
  PropertyTracker(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void observe(double deviation) {
    ++result_.cases;
    if (!(deviation <= result_.tolerance)) result_.passed = false;
    if (std::isnan(deviation)) {
      result_.worst = deviation;
    } else if (!std::isnan(result_.worst)) {
      result_.worst = std::max(result_.worst, deviation);
    }
  }

  [[nodiscard]] const PropertyResult& result() const noexcept { return result_; }

 private:
  PropertyResult result_;
};

inline WavePattern random_pattern(std::mt19937_64& rng, std::size_t dim, double max_amp) {
  std::uniform_real_distribution<double> amp(0.0, max_amp);
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  std::vector<double> a(dim);
  std::vector<double> f(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    a[x] = amp(rng);
    f[x] = ph(rng);
  }
  return WavePattern::validate(a, f);
}

inline std::vector<double> random_real(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = d(rng);
  return v;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

[[nodiscard]] inline VerifyReport run_property_suite(const VerifyConfig& cfg,
                                                     const ScoreFn& score = scalar_score_fn()) {
  if (cfg.dims.empty()) throw Error(ErrorCode::InvalidArgument, "no dimensions to test");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);

  detail::PropertyTracker bounds("bounds", 1e-12);
  detail::PropertyTracker symmetry("symmetry", 1e-12);
  detail::PropertyTracker self_match("self-match", 1e-9);
  detail::PropertyTracker self_only("self-match-only", 0.0);  // S must stay below 1 - 1e-9
  detail::PropertyTracker global_phase("global-phase-invariance", 1e-9);
  detail::PropertyTracker anti_phase("anti-phase", 1e-9);
  detail::PropertyTracker compact("compact-form-equivalence", 1e-9);
  detail::PropertyTracker cos_reduction("cosine-reduction", 1e-6);
  detail::PropertyTracker imbalance("energy-imbalance", 1e-9);
  detail::PropertyTracker kernels("kernel-equivalence", 1e-6);

  for (std::size_t i = 0; i < cfg.cases; ++i) {
    const std::size_t dim = cfg.dims[i % cfg.dims.size()];
    const WavePattern p = detail::random_pattern(rng, dim, cfg.max_amplitude);
    const WavePattern q = detail::random_pattern(rng, dim, cfg.max_amplitude);
    const double s = score(p, q);

    bounds.observe(std::max({0.0, -s, s - 1.0}));
    symmetry.observe(std::fabs(s - score(q, p)));
    if (energy(p) > 0.0) {
      self_match.observe(std::fabs(score(p, p) - 1.0));
      anti_phase.observe(std::max(0.0, score(p, rotate_phase(p, kPi))));
    }
    // p and q are drawn independently, so they differ as complex vectors.
    self_only.observe(std::max(0.0, s - (1.0 - 1e-9)));

    const double delta = angle(rng);
    global_phase.observe(std::fabs(score(rotate_phase(p, delta), rotate_phase(q, delta)) - s));
    compact.observe(std::fabs(s - resonance_direct(p, q)));

    if (cfg.check_vectorized && kVectorizedAvailable) {
      kernels.observe(std::fabs(resonance(p, q, KernelKind::Scalar) - resonance(p, q, KernelKind::Vectorized)));
    }
  }

  // Real vectors at equal norms, sign-phase mapped.
  const std::size_t real_cases = std::max<std::size_t>(1, cfg.cases / 10);
  for (std::size_t i = 0; i < real_cases; ++i) {
    const std::size_t dim = cfg.dims[i % cfg.dims.size()];
    std::vector<double> u = detail::random_real(rng, dim);
    std::vector<double> v = detail::random_real(rng, dim);
    const double nu = detail::norm2(u);
    const double nv = detail::norm2(v);
    if (nu == 0.0 || nv == 0.0) continue;
    for (double& x : v) x *= nu / nv;
    const RealVector ru(u);
    const RealVector rv(v);
    const double expected = (1.0 + cosine(ru, rv)) / 2.0;
    cos_reduction.observe(std::fabs(score(sign_phase(ru), sign_phase(rv)) - expected));
  }

  // q = c * p with equal phases: S = c (1 + c)^2 / (1 + c^2)^2.
  for (double c : {0.5, 2.0, 10.0}) {
    const WavePattern p = detail::random_pattern(rng, cfg.dims.back(), cfg.max_amplitude);
    std::vector<double> scaled(p.amplitude().begin(), p.amplitude().end());
    for (double& a : scaled) a *= c;
    const WavePattern q = WavePattern::validate(scaled, p.phase());
    const double expected = c * (1.0 + c) * (1.0 + c) / ((1.0 + c * c) * (1.0 + c * c));
    imbalance.observe(std::fabs(score(p, q) - expected));
  }

  VerifyReport report;
  for (const auto* t : {&bounds, &symmetry, &self_match, &self_only, &global_phase, &anti_phase, &compact,
                        &cos_reduction, &imbalance}) {
    report.results.push_back(t->result());
  }
  if (cfg.check_vectorized && kVectorizedAvailable) report.results.push_back(kernels.result());
  return report;
}

}  // namespace resonance
