#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rhino/stats.hpp"

namespace rhino::stats {

/// One row of the item-wise t-test table.
struct TableRow {
  std::string category;
  std::string question_id;
  TestResult result;
};

struct SummaryRow {
  std::string category;
  std::string question_id;
  double mean = 0.0;
  double sd = 0.0;
  int n = 0;
};

/// Minimal comma-separated reader: first line is the header, fields are trimmed,
/// no quoting. Each record maps header name to field text.
std::vector<std::map<std::string, std::string>> read_csv(std::istream& in);
std::vector<std::map<std::string, std::string>> read_csv_file(const std::filesystem::path& path);

/// Rows with columns question_id, mean, sd, n and an optional category.
std::vector<SummaryRow> parse_summary(const std::vector<std::map<std::string, std::string>>& rows);

/// Rows with columns participant_id, day, question_id, score.
std::vector<LikertResponse> parse_responses(
    const std::vector<std::map<std::string, std::string>>& rows);

/// Per-participant correctness fractions: either a `fraction` column, or a
/// `correct` column (0/1) averaged per participant_id.
std::vector<double> parse_understanding(
    const std::vector<std::map<std::string, std::string>>& rows);

/// Default grouping of the 14 AR questionnaire items.
std::string default_category(const std::string& question_id);

/// Negatively phrased items of the AR questionnaire.
const std::set<std::string>& default_reversed_items();

/// Orders question ids like Q2 < Q10 (numeric suffix), then lexicographically.
bool question_less(const std::string& a, const std::string& b);

std::vector<TableRow> t_tests_from_summary(const std::vector<SummaryRow>& rows, double mu0 = 3.0);

/// Groups responses by question, reverses `reversed` items, runs the t-test per question.
std::vector<TableRow> t_tests_from_responses(const std::vector<LikertResponse>& responses,
                                             const std::set<std::string>& reversed,
                                             double mu0 = 3.0);

/// "<0.0001" below 1e-4, otherwise four decimals.
std::string format_p(double p);

struct RenderedTable {
  std::string text;
  std::string csv;
};

/// Category | Question | Mean +- SD | t | p, categories kept in first-seen order.
RenderedTable render_tables(const std::vector<TableRow>& rows);

struct MannWhitneyRow {
  std::string question_id;
  std::size_t n_day1 = 0;
  std::size_t n_day2 = 0;
  MannWhitneyResult result;
};

std::vector<MannWhitneyRow> mann_whitney_by_day(const std::vector<LikertResponse>& responses);
RenderedTable render_mann_whitney(const std::vector<MannWhitneyRow>& rows);

struct Distribution {
  std::string question_id;
  int levels = 5;               // number of response categories
  std::vector<int> counts;      // counts[level - 1]
  int total = 0;
};

/// Per-question response counts. Items listed in `three_way` have levels 1..3.
std::vector<Distribution> render_distributions(const std::vector<LikertResponse>& responses,
                                               const std::set<std::string>& three_way);

/// Preference items Q15..Q23.
std::set<std::string> default_three_way_items();

std::string distributions_csv(const std::vector<Distribution>& distributions);

/// Horizontal stacked bars, one per question, normalised to respondent count.
std::string distributions_svg(const std::vector<Distribution>& distributions,
                              const std::string& title);

}  // namespace rhino::stats
