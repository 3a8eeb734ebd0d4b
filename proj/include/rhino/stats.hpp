#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rhino::stats {

enum class Day { Day1, Day2 };

struct LikertResponse {
  std::string participant_id;
  std::string question_id;
  int score = 3;
  Day day = Day::Day1;
};

struct TestResult {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  int n = 0;
  double t = 0.0;
  double p_two_sided = 1.0;
};

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  int n = 0;
};

/// 6 - score for a 5-point item. Throws Error(OutOfRange) outside 1..5.
int reverse_item(int score);

SampleSummary summarize(std::span<const double> samples);

/// Two-sided one-sample Student t-test from summary statistics.
/// Throws Error(DegenerateSample) when n < 2 or sd <= 0.
TestResult one_sample_t(double mean, double sd, int n, double mu0 = 3.0);
TestResult one_sample_t(std::span<const double> samples, double mu0 = 3.0);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// Pooled sizes up to this bound use exact permutation enumeration.
inline constexpr std::size_t kExactEnumerationLimit = 12;

struct MannWhitneyResult {
  double u = 0.0;    // min(U_a, U_b)
  double u_a = 0.0;  // rank sum of `a` minus n_a(n_a+1)/2
  double p_two_sided = 1.0;
  double p_normal = 1.0;
  std::optional<double> p_exact;
};

/// Midrank U statistic. p_two_sided is exact when |a|+|b| <= kExactEnumerationLimit,
/// otherwise the tie-corrected normal approximation with continuity correction.
/// Throws Error(InvalidArgument) when either sample is empty.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Normal approximation with tie-corrected variance and continuity correction.
double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b);

/// Exact permutation p over all assignments of the pooled midranks.
double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b);

/// Mean of per-participant correctness fractions. Throws EmptyInput or OutOfRange.
double understanding_score(std::span<const double> per_participant);

}  // namespace rhino::stats
