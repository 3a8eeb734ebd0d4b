// rhino: session server, deterministic replay and the questionnaire statistics tool.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rhino/errors.hpp"
#include "rhino/protocol.hpp"
#include "rhino/scene_io.hpp"
#include "rhino/server.hpp"
#include "rhino/stats_report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kScenario = 2;
constexpr int kRuntime = 3;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

std::set<std::string> split_items(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

bool is_input_error(rhino::ErrorCode code) {
  using rhino::ErrorCode;
  return code == ErrorCode::ScenarioFormat || code == ErrorCode::SceneFormat ||
         code == ErrorCode::EmptyChunk || code == ErrorCode::InvalidArgument ||
         code == ErrorCode::OutOfRange || code == ErrorCode::EmptyInput;
}

rhino::Scenario scenario_with_seed(const std::string& path, std::optional<std::uint64_t> seed) {
  rhino::Scenario s = rhino::load_scenario(path);
  if (seed) {
    s.seed = *seed;
    s.discovery.seed = *seed;
  }
  return s;
}

int run_serve(const std::string& scenario_path, std::string bind, std::int64_t ticks) {
  if (const char* env = std::getenv("RHINO_BIND"); env && *env) bind = env;
  rhino::Scenario scenario = rhino::load_scenario(scenario_path);
  rhino::Session session(std::move(scenario));
  rhino::Server server(session, rhino::parse_bind_address(bind));
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on port " << server.port() << "\n";
  server.run(ticks, &g_interrupted);
  return kOk;
}

int run_replay(const std::string& scenario_path, std::int64_t ticks, const std::string& out_path,
               std::optional<std::uint64_t> seed) {
  rhino::Session session(scenario_with_seed(scenario_path, seed));
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw rhino::Error(rhino::ErrorCode::InvalidArgument, "cannot write " + out_path);
  out << rhino::protocol::canonical(session.snapshot()) << '\n';
  for (std::int64_t i = 0; i < ticks; ++i) out << rhino::protocol::canonical(session.run_tick()) << '\n';
  return kOk;
}

int run_verify(const std::vector<std::string>& logs) {
  std::vector<std::uint64_t> hashes;
  for (const std::string& path : logs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::cerr << "cannot read " << path << "\n";
      return kRuntime;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    hashes.push_back(rhino::protocol::fnv1a64(buffer.str()));
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hashes.back()));
    std::cout << hex << "  " << path << "\n";
  }
  for (std::uint64_t h : hashes) {
    if (h != hashes.front()) {
      std::cout << "MISMATCH\n";
      return kRuntime;
    }
  }
  std::cout << "OK\n";
  return kOk;
}

int run_t_test(const std::string& summary, const std::string& raw, const std::string& reverse,
               const std::string& csv_out) {
  namespace st = rhino::stats;
  std::vector<st::TableRow> rows;
  if (!summary.empty()) {
    auto parsed = st::parse_summary(st::read_csv_file(summary));
    // Summary means are taken as printed; --reverse flips listed items first.
    for (auto& r : parsed) {
      if (split_items(reverse).contains(r.question_id)) r.mean = 6.0 - r.mean;
    }
    rows = st::t_tests_from_summary(parsed);
  } else {
    const std::set<std::string> reversed =
        reverse.empty() ? st::default_reversed_items() : split_items(reverse);
    rows = st::t_tests_from_responses(st::parse_responses(st::read_csv_file(raw)), reversed);
  }
  const st::RenderedTable table = st::render_tables(rows);
  if (csv_out.empty() || csv_out == "-") {
    std::cout << (csv_out == "-" ? table.csv : table.text);
  } else {
    std::cout << table.text;
    std::ofstream(csv_out) << table.csv;
  }
  return kOk;
}

int run_mwu(const std::string& raw) {
  namespace st = rhino::stats;
  const auto rows = st::mann_whitney_by_day(st::parse_responses(st::read_csv_file(raw)));
  std::cout << st::render_mann_whitney(rows).text;
  return kOk;
}

int run_understanding(const std::string& raw) {
  namespace st = rhino::stats;
  const auto fractions = st::parse_understanding(st::read_csv_file(raw));
  const double score = st::understanding_score(fractions);
  std::printf("participants %zu\nmean %.4f (%.2f)\n", fractions.size(), score, score);
  return kOk;
}

int run_plot(const std::string& raw, const std::string& out_dir) {
  namespace st = rhino::stats;
  const auto responses = st::parse_responses(st::read_csv_file(raw));
  const auto three_way = st::default_three_way_items();
  const auto all = st::render_distributions(responses, three_way);
  std::vector<st::Distribution> likert, preference;
  for (const auto& d : all) (three_way.contains(d.question_id) ? preference : likert).push_back(d);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::ofstream(dir / "likert.svg") << st::distributions_svg(likert, "Likert items");
  std::ofstream(dir / "preference.svg") << st::distributions_svg(preference, "Preference items");
  std::ofstream(dir / "distributions.csv") << st::distributions_csv(all);
  std::cout << "wrote " << all.size() << " distributions to " << out_dir << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RHINO AR exhibit simulation"};
  app.require_subcommand(1);

  std::string scenario_path, bind, out_path, summary_csv, raw_csv, reverse, csv_out, out_dir;
  std::int64_t ticks = -1;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> logs;

  auto* serve = app.add_subcommand("serve", "Run the session server");
  serve->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  serve->add_option("--bind", bind, "host:port (RHINO_BIND overrides)")->default_val("127.0.0.1:7420");
  serve->add_option("--ticks", ticks, "Stop after N ticks");

  auto* replay = app.add_subcommand("replay", "Run a scenario headless and log canonical snapshots");
  replay->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  replay->add_option("--ticks", ticks, "Tick count")->required()->check(CLI::NonNegativeNumber);
  replay->add_option("--out", out_path, "Snapshot log")->required();
  replay->add_option("--seed", seed, "Override the scenario seed");

  auto* verify = app.add_subcommand("verify", "Compare snapshot logs by hash");
  verify->add_option("--log", logs, "Log file (twice)")->required();

  auto* stats = app.add_subcommand("stats", "Questionnaire statistics");
  stats->require_subcommand(1);
  auto* ttest = stats->add_subcommand("t-test", "One-sample t-tests against the midpoint 3");
  auto* summary_opt = ttest->add_option("--summary", summary_csv, "question_id,mean,sd,n[,category]");
  auto* raw_opt = ttest->add_option("--raw", raw_csv, "participant_id,day,question_id,score");
  summary_opt->excludes(raw_opt);
  ttest->add_option("--reverse", reverse, "Comma-separated items to reverse");
  ttest->add_option("--csv", csv_out, "Also write the table as CSV ('-' prints CSV only)");
  auto* mwu = stats->add_subcommand("mwu", "Mann-Whitney U between study days");
  mwu->add_option("--raw", raw_csv)->required();
  auto* understanding = stats->add_subcommand("understanding", "Mean understanding score");
  understanding->add_option("--raw", raw_csv)->required();
  auto* plot = stats->add_subcommand("plot", "Response distributions as SVG");
  plot->add_option("--raw", raw_csv)->required();
  plot->add_option("--out", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (verify->parsed() && logs.size() < 2) {
    std::cerr << "verify: give --log at least twice\n";
    return kUsage;
  }
  if (ttest->parsed() && summary_csv.empty() && raw_csv.empty()) {
    std::cerr << "stats t-test: one of --summary or --raw is required\n";
    return kUsage;
  }

  try {
    if (serve->parsed()) return run_serve(scenario_path, bind, ticks);
    if (replay->parsed()) return run_replay(scenario_path, ticks, out_path, seed);
    if (verify->parsed()) return run_verify(logs);
    if (ttest->parsed()) return run_t_test(summary_csv, raw_csv, reverse, csv_out);
    if (mwu->parsed()) return run_mwu(raw_csv);
    if (understanding->parsed()) return run_understanding(raw_csv);
    if (plot->parsed()) return run_plot(raw_csv, out_dir);
  } catch (const rhino::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == rhino::ErrorCode::BindFailure) return kRuntime;
    return is_input_error(e.code()) ? kScenario : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
