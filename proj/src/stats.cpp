#include "rhino/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "rhino/errors.hpp"

namespace rhino::stats {

namespace {

std::vector<double> midranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return pooled[l] < pooled[r]; });
  std::vector<double> ranks(pooled.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && pooled[order[j]] == pooled[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

void require_samples(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::InvalidArgument, "Mann-Whitney needs at least one value per sample");
  }
}

std::vector<double> pooled_of(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  return pooled;
}

double u_of_first(const std::vector<double>& ranks, std::size_t n_a) {
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n_a; ++i) rank_sum += ranks[i];
  return rank_sum - 0.5 * static_cast<double>(n_a * (n_a + 1));
}

}  // namespace

int reverse_item(int score) {
  if (score < 1 || score > 5) {
    throw Error(ErrorCode::OutOfRange, "Likert score must lie in 1..5, got " + std::to_string(score));
  }
  return 6 - score;
}

SampleSummary summarize(std::span<const double> samples) {
  SampleSummary s;
  s.n = static_cast<int>(samples.size());
  if (samples.empty()) return s;
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

double student_t_two_sided(double t, double df) {
  if (t == 0.0) return 1.0;
  // P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  const double x = df / (df + t * t);
  return std::clamp(boost::math::ibeta(0.5 * df, 0.5, x), 0.0, 1.0);
}

TestResult one_sample_t(double mean, double sd, int n, double mu0) {
  if (n < 2 || !(sd > 0.0)) {
    throw Error(ErrorCode::DegenerateSample, "t-test needs n >= 2 and sd > 0");
  }
  TestResult r{mean, sd, n, 0.0, 1.0};
  r.t = (mean - mu0) / (sd / std::sqrt(static_cast<double>(n)));
  r.p_two_sided = student_t_two_sided(r.t, n - 1);
  return r;
}

TestResult one_sample_t(std::span<const double> samples, double mu0) {
  const SampleSummary s = summarize(samples);
  return one_sample_t(s.mean, s.sd, s.n, mu0);
}

double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const std::vector<double> pooled = pooled_of(a, b);
  const std::vector<double> ranks = midranks(pooled);
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const double u = u_of_first(ranks, a.size());
  const double mu = 0.5 * n1 * n2;

  std::map<double, int> ties;
  for (double v : pooled) ++ties[v];
  double tie_term = 0.0;
  for (const auto& [_, t] : ties) tie_term += static_cast<double>(t) * t * t - t;
  const double variance =
      n > 1.0 ? n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0))) : 0.0;
  if (!(variance > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const std::vector<double> ranks = midranks(pooled_of(a, b));
  const std::size_t n = ranks.size();
  const std::size_t k = a.size();
  const double mu = 0.5 * static_cast<double>(a.size() * b.size());
  const double observed = std::abs(u_of_first(ranks, k) - mu);
  const double offset = 0.5 * static_cast<double>(k * (k + 1));

  // Walk every k-subset of positions in lexicographic order.
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  std::size_t total = 0;
  std::size_t extreme = 0;
  while (true) {
    double rank_sum = 0.0;
    for (std::size_t i : pick) rank_sum += ranks[i];
    ++total;
    // U values are multiples of 0.5, so a small slack absorbs rounding only.
    if (std::abs(rank_sum - offset - mu) >= observed - 1e-9) ++extreme;

    std::size_t pos = k;
    while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t i = pos; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const std::vector<double> ranks = midranks(pooled_of(a, b));
  MannWhitneyResult r;
  r.u_a = u_of_first(ranks, a.size());
  r.u = std::min(r.u_a, static_cast<double>(a.size() * b.size()) - r.u_a);
  r.p_normal = mann_whitney_normal_p(a, b);
  if (a.size() + b.size() <= kExactEnumerationLimit) {
    r.p_exact = mann_whitney_exact_p(a, b);
    r.p_two_sided = *r.p_exact;
  } else {
    r.p_two_sided = r.p_normal;
  }
  return r;
}

double understanding_score(std::span<const double> per_participant) {
  if (per_participant.empty()) throw Error(ErrorCode::EmptyInput, "no participants");
  for (double f : per_participant) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::OutOfRange, "correctness fraction must lie in [0, 1]");
    }
  }
  return std::accumulate(per_participant.begin(), per_participant.end(), 0.0) /
         static_cast<double>(per_participant.size());
}

}  // namespace rhino::stats
