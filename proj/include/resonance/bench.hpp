#pragma once

// Synthetic corpora, latency measurement and the operator-retrieval
// experiment, with CSV writers for external plotting.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "resonance/core_types.hpp"
#include "resonance/error.hpp"
#include "resonance/kernel.hpp"
#include "resonance/mapping.hpp"
#include "resonance/operators.hpp"
#include "resonance/query.hpp"
#include "resonance/store.hpp"

namespace resonance {

// ---------------------------------------------------------------------------
// Synthetic patterns: A(x) ~ U[0, 1), phi(x) ~ U[-pi, pi), drawn from
// std::mt19937_64 seeded with `seed`, amplitude then phase per dimension.

class SyntheticGenerator {
 public:
  SyntheticGenerator(std::size_t dim, std::uint64_t seed) : dim_(dim), rng_(seed) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  }

  [[nodiscard]] WavePattern next() {
    std::uniform_real_distribution<double> amp_dist(0.0, 1.0);
    std::uniform_real_distribution<double> phase_dist(-kPi, kPi);
    std::vector<double> amp(dim_);
    std::vector<double> ph(dim_);
    for (std::size_t x = 0; x < dim_; ++x) {
      amp[x] = amp_dist(rng_);
      ph[x] = phase_dist(rng_);
    }
    return WavePattern::validate(amp, ph);
  }

 private:
  std::size_t dim_;
  std::mt19937_64 rng_;
};

[[nodiscard]] inline std::vector<WavePattern> gen_synthetic(std::size_t n, std::size_t dim,
                                                            std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  SyntheticGenerator gen(dim, seed);
  std::vector<WavePattern> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
  return out;
}

/// Appends `n` synthetic patterns with counter ids starting at `first_id`.
inline void populate_synthetic(Store& store, std::size_t n, std::uint64_t seed,
                               std::uint64_t first_id = 0) {
  SyntheticGenerator gen(store.dim(), seed);
  for (std::size_t i = 0; i < n; ++i) {
    store.insert(PatternId::from_counter(first_id + i), gen.next());
  }
}

// ---------------------------------------------------------------------------
// Latency

struct LatencySummary {
  double avg_ms = 0.0;
  double p95_ms = 0.0;
};

/// Nearest-rank percentile: the ceil(p * n)-th smallest sample.
[[nodiscard]] inline double nearest_rank_percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no samples");
  std::sort(samples.begin(), samples.end());
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(samples.size())));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  return samples[rank - 1];
}

[[nodiscard]] inline LatencySummary summarize_latencies(std::span<const double> samples_ms) {
  if (samples_ms.empty()) throw Error(ErrorCode::InvalidArgument, "no samples");
  const double sum = std::accumulate(samples_ms.begin(), samples_ms.end(), 0.0);
  return {sum / static_cast<double>(samples_ms.size()),
          nearest_rank_percentile({samples_ms.begin(), samples_ms.end()}, 0.95)};
}

struct LatencyReport {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t k = 0;
  std::size_t repetitions = 0;
  double avg_ms = 0.0;
  double p95_ms = 0.0;
  std::size_t workers = 0;
  KernelKind kernel = KernelKind::Scalar;
};

/// Runs every query `repetitions` times, one at a time, and reports the mean
/// and nearest-rank p95 over all per-query wall-clock samples. With
/// `cold_cache`, page cache is dropped and the store reopened before each
/// query, and the reopen is part of the sample.
inline LatencyReport measure_latency(const Store& store, std::span<const WavePattern> queries,
                                     const QueryConfig& cfg, std::size_t repetitions,
                                     bool cold_cache = false) {
  if (store.size() == 0) throw Error(ErrorCode::EmptyStore, "nothing to scan in '" + store.dir().string() + "'");
  if (queries.empty()) throw Error(ErrorCode::InvalidArgument, "no queries");
  if (repetitions == 0) throw Error(ErrorCode::InvalidArgument, "repetitions must be at least 1");
  using Clock = std::chrono::steady_clock;
  std::vector<double> samples;
  samples.reserve(repetitions * queries.size());
  std::size_t sink = 0;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    for (const auto& q : queries) {
      if (cold_cache) {
        store.drop_page_cache();
        const auto t0 = Clock::now();
        const Store reopened(store.dir());
        sink += top_k(reopened, q, cfg).size();
        const auto t1 = Clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      } else {
        const auto t0 = Clock::now();
        sink += top_k(store, q, cfg).size();
        const auto t1 = Clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
    }
  }
  (void)sink;
  const LatencySummary s = summarize_latencies(samples);
  return {store.size(), store.dim(), cfg.k, repetitions, s.avg_ms, s.p95_ms, cfg.workers, cfg.kernel};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
[[nodiscard]] inline LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two (x, y) points");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

// ---------------------------------------------------------------------------
// Operator retrieval.
//
// Protocol: draw `bases` synthetic patterns. The corpus holds every base
// followed by op(b) for each operator and base, with counter ids in that
// order, so a base always precedes its variants. Each base also gets one
// perturbed copy b' (amplitudes + N(0, jitter), clamped at 0). For every
// (op, b) the query op(b') must retrieve the stored op(b) at rank 1.
// Resonance ranks on full patterns; the cosine baseline ranks on amplitude
// projections only, which cannot see phase. Ties go to the lower id.
//
// Histogram pairs are (b, op(b')): one distance per base and operator.

struct OperatorEvalConfig {
  std::size_t bases = 50;
  std::size_t dim = 512;
  std::uint64_t seed = 1;
  std::vector<OperatorSpec> ops = default_operators();
  double jitter = 0.01;
};

struct OperatorSummary {
  OperatorSpec op;
  double p1_res = 0.0;
  double p1_cos = 0.0;
  double mean_dres = 0.0;
  double std_dres = 0.0;
  double mean_dcos = 0.0;
  double std_dcos = 0.0;
  std::size_t pairs = 0;
};

struct OperatorHistEntry {
  std::size_t op_index = 0;
  std::size_t pair_index = 0;
  double d_res = 0.0;
  double d_cos = 0.0;
};

struct OperatorEvalReport {
  std::vector<OperatorSummary> summaries;
  std::vector<OperatorHistEntry> histogram;
  std::vector<PatternId> item_ids;
  std::vector<std::vector<double>> heatmap_res;  // d_res between corpus items
  std::vector<std::vector<double>> heatmap_cos;  // d_cos between amplitude projections
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Index of the best-ranked item; items are in id order so ties keep the first.
template <class Score>
std::size_t argbest(std::size_t n, Score&& score) {
  std::size_t best = 0;
  double best_score = score(0);
  for (std::size_t i = 1; i < n; ++i) {
    const double s = score(i);
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

}  // namespace detail

[[nodiscard]] inline OperatorEvalReport operator_eval(const OperatorEvalConfig& cfg) {
  for (const auto& op : cfg.ops) validate_operator(op);
  OperatorEvalReport report;
  if (cfg.ops.empty()) return report;
  if (cfg.bases < 2) throw Error(ErrorCode::InvalidArgument, "operator evaluation needs at least 2 bases");
  if (!(cfg.jitter >= 0.0)) throw Error(ErrorCode::InvalidArgument, "jitter must be non-negative");

  const std::vector<WavePattern> bases = gen_synthetic(cfg.bases, cfg.dim, cfg.seed);

  std::vector<WavePattern> items = bases;
  for (const auto& op : cfg.ops) {
    for (const auto& b : bases) items.push_back(apply(op, b));
  }
  std::vector<RealVector> item_amps;
  item_amps.reserve(items.size());
  for (const auto& p : items) item_amps.push_back(amplitude_vector(p));
  for (std::size_t i = 0; i < items.size(); ++i) report.item_ids.push_back(PatternId::from_counter(i));

  std::mt19937_64 jitter_rng(cfg.seed ^ 0x6a09e667f3bcc908ULL);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<WavePattern> perturbed;
  perturbed.reserve(bases.size());
  for (const auto& b : bases) {
    std::vector<double> amp(b.amplitude().begin(), b.amplitude().end());
    for (double& a : amp) a = std::max(0.0, a + cfg.jitter * noise(jitter_rng));
    perturbed.push_back(WavePattern::validate(amp, b.phase()));
  }

  const std::size_t nb = bases.size();
  for (std::size_t j = 0; j < cfg.ops.size(); ++j) {
    OperatorSummary row;
    row.op = cfg.ops[j];
    std::vector<double> dres;
    std::vector<double> dcos;
    std::size_t hits_res = 0;
    std::size_t hits_cos = 0;
    for (std::size_t i = 0; i < nb; ++i) {
      const WavePattern query = apply(cfg.ops[j], perturbed[i]);
      const RealVector query_amp = amplitude_vector(query);
      const std::size_t target = nb + j * nb + i;

      const std::size_t best_res =
          detail::argbest(items.size(), [&](std::size_t c) { return resonance(query, items[c]); });
      const std::size_t best_cos =
          detail::argbest(items.size(), [&](std::size_t c) { return cosine(query_amp, item_amps[c]); });
      hits_res += best_res == target ? 1 : 0;
      hits_cos += best_cos == target ? 1 : 0;

      const DistancePair d = to_distances(cosine(item_amps[i], query_amp), resonance(bases[i], query));
      dres.push_back(d.d_res);
      dcos.push_back(d.d_cos);
      report.histogram.push_back({j, i, d.d_res, d.d_cos});
    }
    row.pairs = nb;
    row.p1_res = static_cast<double>(hits_res) / static_cast<double>(nb);
    row.p1_cos = static_cast<double>(hits_cos) / static_cast<double>(nb);
    row.mean_dres = detail::mean_of(dres);
    row.std_dres = detail::sample_std(dres);
    row.mean_dcos = detail::mean_of(dcos);
    row.std_dcos = detail::sample_std(dcos);
    report.summaries.push_back(row);
  }

  const std::size_t n = items.size();
  report.heatmap_res.assign(n, std::vector<double>(n, 0.0));
  report.heatmap_cos.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const DistancePair d = to_distances(cosine(item_amps[a], item_amps[b]), resonance(items[a], items[b]));
      report.heatmap_res[a][b] = report.heatmap_res[b][a] = d.d_res;
      report.heatmap_cos[a][b] = report.heatmap_cos[b][a] = d.d_cos;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// CSV

[[nodiscard]] inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline void write_latency_csv(std::ostream& os, std::span<const LatencyReport> rows) {
  os << "n,L,k,workers,avg_ms,p95_ms\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.dim << ',' << r.k << ',' << r.workers << ',' << format_number(r.avg_ms) << ','
       << format_number(r.p95_ms) << '\n';
  }
}

inline void write_operator_summary_csv(std::ostream& os, const OperatorEvalReport& r) {
  os << "operator,p1_res,p1_cos,mean_dres,std_dres,mean_dcos,std_dcos\n";
  for (const auto& s : r.summaries) {
    os << to_string(s.op) << ',' << format_number(s.p1_res) << ',' << format_number(s.p1_cos) << ','
       << format_number(s.mean_dres) << ',' << format_number(s.std_dres) << ','
       << format_number(s.mean_dcos) << ',' << format_number(s.std_dcos) << '\n';
  }
}

inline void write_operator_hist_csv(std::ostream& os, const OperatorEvalReport& r) {
  os << "operator,pair_index,d_res,d_cos\n";
  for (const auto& h : r.histogram) {
    os << to_string(r.summaries[h.op_index].op) << ',' << h.pair_index << ',' << format_number(h.d_res)
       << ',' << format_number(h.d_cos) << '\n';
  }
}

inline void write_heatmap_csv(std::ostream& os, const std::vector<PatternId>& ids,
                              const std::vector<std::vector<double>>& m) {
  os << "id";
  for (const auto& id : ids) os << ',' << id.to_hex();
  os << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << ids[i].to_hex();
    for (double v : m[i]) os << ',' << format_number(v);
    os << '\n';
  }
}

}  // namespace resonance
