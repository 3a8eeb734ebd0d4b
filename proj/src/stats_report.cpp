#include "rhino/stats_report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rhino/errors.hpp"

namespace rhino::stats {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

const std::string& field(const std::map<std::string, std::string>& row, const std::string& name,
                         std::size_t record) {
  const auto it = row.find(name);
  if (it == row.end() || it->second.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "record " + std::to_string(record) + ": missing column '" + name + "'");
  }
  return it->second;
}

double to_double(const std::string& text, std::size_t record) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument,
              "record " + std::to_string(record) + ": not a number '" + text + "'");
}

int to_int(const std::string& text, std::size_t record) {
  const double v = to_double(text, record);
  if (v != std::floor(v)) {
    throw Error(ErrorCode::InvalidArgument,
                "record " + std::to_string(record) + ": not an integer '" + text + "'");
  }
  return static_cast<int>(v);
}

Day parse_day(const std::string& text, std::size_t record) {
  if (text == "1" || text == "Day1" || text == "day1") return Day::Day1;
  if (text == "2" || text == "Day2" || text == "day2") return Day::Day2;
  throw Error(ErrorCode::InvalidArgument,
              "record " + std::to_string(record) + ": day must be 1 or 2, got '" + text + "'");
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::vector<std::map<std::string, std::string>> read_csv(std::istream& in) {
  std::vector<std::map<std::string, std::string>> rows;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::InvalidArgument, "csv record has " + std::to_string(fields.size()) +
                                                  " fields, header has " +
                                                  std::to_string(header.size()));
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::map<std::string, std::string>> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return read_csv(in);
}

std::vector<SummaryRow> parse_summary(const std::vector<std::map<std::string, std::string>>& rows) {
  std::vector<SummaryRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    SummaryRow s;
    s.question_id = field(row, "question_id", i + 1);
    const auto cat = row.find("category");
    s.category = cat != row.end() && !cat->second.empty() ? cat->second
                                                          : default_category(s.question_id);
    s.mean = to_double(field(row, "mean", i + 1), i + 1);
    s.sd = to_double(field(row, "sd", i + 1), i + 1);
    s.n = to_int(field(row, "n", i + 1), i + 1);
    out.push_back(s);
  }
  return out;
}

std::vector<LikertResponse> parse_responses(
    const std::vector<std::map<std::string, std::string>>& rows) {
  std::vector<LikertResponse> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    LikertResponse r;
    r.participant_id = field(row, "participant_id", i + 1);
    r.question_id = field(row, "question_id", i + 1);
    r.day = parse_day(field(row, "day", i + 1), i + 1);
    r.score = to_int(field(row, "score", i + 1), i + 1);
    if (r.score < 1 || r.score > 5) {
      throw Error(ErrorCode::OutOfRange, "record " + std::to_string(i + 1) +
                                             ": score must lie in 1..5");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<double> parse_understanding(
    const std::vector<std::map<std::string, std::string>>& rows) {
  if (rows.empty()) return {};
  if (rows.front().contains("fraction")) {
    std::vector<double> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.push_back(to_double(field(rows[i], "fraction", i + 1), i + 1));
    }
    return out;
  }
  std::map<std::string, std::pair<double, int>> per;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string& pid = field(rows[i], "participant_id", i + 1);
    const double correct = to_double(field(rows[i], "correct", i + 1), i + 1);
    if (correct != 0.0 && correct != 1.0) {
      throw Error(ErrorCode::OutOfRange, "record " + std::to_string(i + 1) + ": correct must be 0 or 1");
    }
    if (!per.contains(pid)) order.push_back(pid);
    per[pid].first += correct;
    per[pid].second += 1;
  }
  std::vector<double> out;
  for (const std::string& pid : order) out.push_back(per[pid].first / per[pid].second);
  return out;
}

std::string default_category(const std::string& question_id) {
  static const std::map<std::string, std::string> kGroups = [] {
    std::map<std::string, std::string> m;
    for (int q = 1; q <= 3; ++q) m["Q" + std::to_string(q)] = "Usability & Comprehensibility";
    for (int q = 4; q <= 8; ++q) m["Q" + std::to_string(q)] = "Technical Performance";
    for (int q = 9; q <= 14; ++q) m["Q" + std::to_string(q)] = "Satisfaction";
    return m;
  }();
  const auto it = kGroups.find(question_id);
  return it == kGroups.end() ? "Other" : it->second;
}

const std::set<std::string>& default_reversed_items() {
  static const std::set<std::string> kItems{"Q1", "Q13"};
  return kItems;
}

std::set<std::string> default_three_way_items() {
  std::set<std::string> items;
  for (int q = 15; q <= 23; ++q) items.insert("Q" + std::to_string(q));
  return items;
}

bool question_less(const std::string& a, const std::string& b) {
  const auto split_id = [](const std::string& s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    const long long num = i < s.size() ? std::stoll(s.substr(i)) : -1;
    return std::make_pair(s.substr(0, i), num);
  };
  const auto ka = split_id(a);
  const auto kb = split_id(b);
  if (ka != kb) return ka < kb;
  return a < b;
}

std::vector<TableRow> t_tests_from_summary(const std::vector<SummaryRow>& rows, double mu0) {
  std::vector<TableRow> out;
  out.reserve(rows.size());
  for (const SummaryRow& r : rows) {
    out.push_back({r.category, r.question_id, one_sample_t(r.mean, r.sd, r.n, mu0)});
  }
  return out;
}

std::vector<TableRow> t_tests_from_responses(const std::vector<LikertResponse>& responses,
                                             const std::set<std::string>& reversed, double mu0) {
  std::map<std::string, std::vector<double>> by_question;
  for (const LikertResponse& r : responses) {
    const int score = reversed.contains(r.question_id) ? reverse_item(r.score) : r.score;
    by_question[r.question_id].push_back(score);
  }
  std::vector<std::string> ids;
  for (const auto& [id, _] : by_question) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), question_less);
  std::vector<TableRow> out;
  for (const std::string& id : ids) {
    out.push_back({default_category(id), id, one_sample_t(by_question[id], mu0)});
  }
  return out;
}

std::string format_p(double p) { return p < 1e-4 ? "<0.0001" : fixed(p, 4); }

RenderedTable render_tables(const std::vector<TableRow>& rows) {
  RenderedTable out;
  std::ostringstream text;
  std::ostringstream csv;
  csv << "category,question_id,mean,sd,n,t,p\n";
  text << pad("Category", 32) << pad("Question", 10) << pad("Mean +- SD", 16) << pad("t", 8)
       << "p\n";
  text << std::string(72, '-') << "\n";

  std::vector<std::string> categories;
  for (const TableRow& r : rows) {
    if (std::find(categories.begin(), categories.end(), r.category) == categories.end()) {
      categories.push_back(r.category);
    }
  }
  for (const std::string& category : categories) {
    bool first = true;
    for (const TableRow& r : rows) {
      if (r.category != category) continue;
      const TestResult& t = r.result;
      text << pad(first ? category : "", 32) << pad(r.question_id, 10)
           << pad(fixed(t.mean, 2) + " +- " + fixed(t.sd, 2), 16) << pad(fixed(t.t, 2), 8)
           << format_p(t.p_two_sided) << "\n";
      csv << r.category << "," << r.question_id << "," << fixed(t.mean, 4) << ","
          << fixed(t.sd, 4) << "," << t.n << "," << fixed(t.t, 4) << ","
          << fixed(t.p_two_sided, 8) << "\n";
      first = false;
    }
  }
  out.text = text.str();
  out.csv = csv.str();
  return out;
}

std::vector<MannWhitneyRow> mann_whitney_by_day(const std::vector<LikertResponse>& responses) {
  std::map<std::string, std::array<std::vector<double>, 2>> by_question;
  for (const LikertResponse& r : responses) {
    by_question[r.question_id][r.day == Day::Day1 ? 0 : 1].push_back(r.score);
  }
  std::vector<std::string> ids;
  for (const auto& [id, _] : by_question) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), question_less);
  std::vector<MannWhitneyRow> out;
  for (const std::string& id : ids) {
    const auto& [d1, d2] = by_question[id];
    if (d1.empty() || d2.empty()) continue;
    out.push_back({id, d1.size(), d2.size(), mann_whitney_u(d1, d2)});
  }
  return out;
}

RenderedTable render_mann_whitney(const std::vector<MannWhitneyRow>& rows) {
  RenderedTable out;
  std::ostringstream text;
  std::ostringstream csv;
  csv << "question_id,n_day1,n_day2,u,p,method\n";
  text << pad("Question", 10) << pad("n1", 5) << pad("n2", 5) << pad("U", 8) << pad("p", 10)
       << "method\n";
  for (const MannWhitneyRow& r : rows) {
    const char* method = r.result.p_exact ? "exact" : "normal";
    text << pad(r.question_id, 10) << pad(std::to_string(r.n_day1), 5)
         << pad(std::to_string(r.n_day2), 5) << pad(fixed(r.result.u, 1), 8)
         << pad(fixed(r.result.p_two_sided, 4), 10) << method << "\n";
    csv << r.question_id << "," << r.n_day1 << "," << r.n_day2 << "," << fixed(r.result.u, 1)
        << "," << fixed(r.result.p_two_sided, 8) << "," << method << "\n";
  }
  out.text = text.str();
  out.csv = csv.str();
  return out;
}

std::vector<Distribution> render_distributions(const std::vector<LikertResponse>& responses,
                                               const std::set<std::string>& three_way) {
  std::map<std::string, Distribution> by_question;
  for (const LikertResponse& r : responses) {
    Distribution& d = by_question[r.question_id];
    if (d.counts.empty()) {
      d.question_id = r.question_id;
      d.levels = three_way.contains(r.question_id) ? 3 : 5;
      d.counts.assign(d.levels, 0);
    }
    if (r.score < 1 || r.score > d.levels) {
      throw Error(ErrorCode::OutOfRange, r.question_id + ": score " + std::to_string(r.score) +
                                             " outside 1.." + std::to_string(d.levels));
    }
    ++d.counts[r.score - 1];
    ++d.total;
  }
  std::vector<Distribution> out;
  for (auto& [_, d] : by_question) out.push_back(std::move(d));
  std::sort(out.begin(), out.end(), [](const Distribution& a, const Distribution& b) {
    return question_less(a.question_id, b.question_id);
  });
  return out;
}

std::string distributions_csv(const std::vector<Distribution>& distributions) {
  std::ostringstream csv;
  csv << "question_id,levels,level,count,total\n";
  for (const Distribution& d : distributions) {
    for (int level = 1; level <= d.levels; ++level) {
      csv << d.question_id << "," << d.levels << "," << level << "," << d.counts[level - 1] << ","
          << d.total << "\n";
    }
  }
  return csv.str();
}

std::string distributions_svg(const std::vector<Distribution>& distributions,
                              const std::string& title) {
  static constexpr std::array<const char*, 5> kFive{"#ca0020", "#f4a582", "#d9d9d9", "#92c5de",
                                                    "#0571b0"};
  static constexpr std::array<const char*, 3> kThree{"#7b3294", "#c2a5cf", "#d9d9d9"};
  constexpr int kLeft = 60;
  constexpr int kBarWidth = 500;
  constexpr int kRow = 24;
  constexpr int kTop = 40;
  const int height = kTop + kRow * static_cast<int>(distributions.size()) + 20;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kBarWidth + 20
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  for (std::size_t row = 0; row < distributions.size(); ++row) {
    const Distribution& d = distributions[row];
    const int y = kTop + static_cast<int>(row) * kRow;
    svg << "<text x=\"4\" y=\"" << y + 15 << "\">" << d.question_id << "</text>\n";
    double x = kLeft;
    for (int level = 1; level <= d.levels; ++level) {
      const int count = d.counts[level - 1];
      if (count == 0 || d.total == 0) continue;
      const double w = kBarWidth * static_cast<double>(count) / d.total;
      const char* color = d.levels == 3 ? kThree[level - 1] : kFive[level - 1];
      svg << "<rect x=\"" << fixed(x, 2) << "\" y=\"" << y << "\" width=\"" << fixed(w, 2)
          << "\" height=\"18\" fill=\"" << color << "\" data-level=\"" << level
          << "\" data-count=\"" << count << "\"/>\n";
      x += w;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rhino::stats
