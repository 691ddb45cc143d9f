#pragma once

// Command-line front end. `run_cli` is the whole program minus process exit,
// so tests can drive it with string streams.
//
// Exit codes: 0 success, 1 input error, 2 internal invariant violation.

#include <cstdio>
#include <exception>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "airoyalties/embedstore.hpp"
#include "airoyalties/error.hpp"
#include "airoyalties/metric.hpp"
#include "airoyalties/rulings.hpp"
#include "airoyalties/scenario.hpp"

namespace airoyalties::cli {

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  return s == "-0.000" ? "0.000" : s;
}

struct Inputs {
  std::string store_path;
  std::string cases_path;
  std::string source = "stored";
  double safe_max = Thresholds{}.safe_max;
  double fairuse_max = Thresholds{}.fair_use_max;
  double bin_width = 0.05;
  std::string config_path;
  std::string format = "table";
  std::string id_a;
  std::string id_b;
};

/// Contested pairs from the cases file plus, when a store is supplied, every
/// uncontested cross pair of the referenced works (metric always computed).
struct Population {
  std::vector<CasePair> pairs;
  std::vector<double> values;
};

inline Population collect(const Inputs& in) {
  const auto source = in.source == "computed" ? MetricSource::Computed : MetricSource::Stored;
  std::optional<EmbeddingStore> store;
  if (!in.store_path.empty()) store = load_store(in.store_path);
  if (source == MetricSource::Computed && !store) {
    throw Error(ErrorCode::MissingParam, "--source computed needs --store");
  }
  const EmbeddingStore empty;
  const EmbeddingStore& s = store ? *store : empty;

  Population pop;
  const auto cases = load_cases(in.cases_path);
  for (const auto& p : cases) {
    const bool compute = source == MetricSource::Computed ||
                         (p.label == RulingLabel::Uncontested && !p.reported_metric && store);
    if (p.label == RulingLabel::Uncontested && !p.reported_metric && !store) continue;
    pop.values.push_back(metric_for_pair(p, s, compute ? MetricSource::Computed : MetricSource::Stored));
    pop.pairs.push_back(p);
  }
  if (store) {
    for (auto& p : uncontested_pairs(cases)) {
      pop.values.push_back(metric_for_pair(p, s, MetricSource::Computed));
      pop.pairs.push_back(std::move(p));
    }
  }
  return pop;
}

inline Thresholds thresholds(const Inputs& in) {
  Thresholds t{in.safe_max, in.fairuse_max};
  t.validate();
  return t;
}

inline void cmd_ingest(const Inputs& in, std::ostream& out) {
  const auto store = load_store(in.store_path);
  out << "records," << store.size() << '\n';
  out << "model_id," << store.model_id() << '\n';
  out << "dim," << store.dim() << '\n';
  if (in.cases_path.empty()) return;
  const auto cases = load_cases(in.cases_path);
  for (const auto& p : cases) {
    for (const auto* id : {&p.original_id, &p.derivative_id}) {
      if (!store.contains(*id)) throw Error(ErrorCode::UnknownWorkId, "'" + *id + "' (case " + p.case_id + ")");
    }
  }
  out << "pairs," << cases.size() << '\n';
}

inline void cmd_stats(const Inputs& in, std::ostream& out) {
  const auto pop = collect(in);
  out << "label,count,mean,std_dev\n";
  for (const auto& s : class_stats(pop.pairs, pop.values)) {
    out << to_token(s.label) << ',' << s.count << ',' << fixed3(s.mean) << ','
        << (s.std_dev ? fixed3(*s.std_dev) : "") << '\n';
  }
}

inline void cmd_classify(const Inputs& in, std::ostream& out) {
  const auto t = thresholds(in);
  const auto store = load_store(in.store_path);
  const double v = clip_metric(store.get(in.id_a), store.get(in.id_b));
  out << fixed3(v) << ' ' << to_token(classify(v, t)) << '\n';
}

inline void cmd_calibrate(const Inputs& in, std::ostream& out) {
  const auto pop = collect(in);
  const auto t = calibrate(pop.pairs, pop.values);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f,%.2f", t.safe_max, t.fair_use_max);
  out << "safe_max,fair_use_max\n" << buf << '\n';
}

inline void cmd_evaluate(const Inputs& in, std::ostream& out) {
  const auto t = thresholds(in);
  const auto pop = collect(in);
  const auto summary = evaluate(pop.pairs, pop.values, t);
  out << "label,copyright_safe,likely_fair_use,likely_infringement\n";
  for (auto label : kAllLabels) {
    out << to_token(label);
    for (auto v : {Verdict::CopyrightSafe, Verdict::LikelyFairUse, Verdict::LikelyInfringement}) {
      out << ',' << summary.count(label, v);
    }
    out << '\n';
  }
  out << "consistent," << summary.consistent << '/' << summary.scored << ','
      << (summary.accuracy() ? fixed3(*summary.accuracy()) : "") << '\n';
}

inline void cmd_histogram(const Inputs& in, std::ostream& out) {
  if (!(in.bin_width > 0.0)) throw Error(ErrorCode::InvalidParam, "--bin-width must be positive");
  const auto pop = collect(in);
  out << "bin_lo,bin_hi";
  for (auto label : kAllLabels) out << ',' << to_token(label);
  out << '\n';
  for (const auto& b : histogram(pop.pairs, pop.values, in.bin_width)) {
    out << fixed3(b.lo) << ',' << fixed3(b.hi);
    for (auto c : b.counts) out << ',' << c;
    out << '\n';
  }
}

inline void cmd_simulate(const Inputs& in, std::ostream& out) {
  const auto reports = run_scenario(load_scenario(in.config_path));
  if (in.format == "csv") {
    write_report_csv(out, reports);
  } else {
    write_report_table(out, reports);
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Copyright-similarity metrics and AI compensation simulations", "airoyalties"};
  app.require_subcommand(1);
  Inputs in;
  const std::vector<std::string> sources = {"stored", "computed"};

  auto store_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--store", in.store_path, "Embedding store (line-delimited JSON)");
    if (required) o->required();
  };
  auto cases_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--cases", in.cases_path, "Rulings CSV");
    if (required) o->required();
  };
  auto source_opt = [&](CLI::App* sub) {
    sub->add_option("--source", in.source, "Metric source")->check(CLI::IsMember(sources));
  };
  auto threshold_opts = [&](CLI::App* sub) {
    sub->add_option("--safe-max", in.safe_max, "Upper bound of the copyright-safe band");
    sub->add_option("--fairuse-max", in.fairuse_max, "Upper bound of the likely-fair-use band");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate an embedding store (and optional cases file)");
  store_opt(ingest, true);
  cases_opt(ingest, false);

  auto* stats = app.add_subcommand("stats", "Per-label metric statistics");
  store_opt(stats, false);
  cases_opt(stats, true);
  source_opt(stats);

  auto* classify_cmd = app.add_subcommand("classify", "Metric and verdict for two works");
  store_opt(classify_cmd, true);
  classify_cmd->add_option("work_a", in.id_a, "First work id")->required();
  classify_cmd->add_option("work_b", in.id_b, "Second work id")->required();
  threshold_opts(classify_cmd);

  auto* calibrate_cmd = app.add_subcommand("calibrate", "Midpoint thresholds from labeled pairs");
  store_opt(calibrate_cmd, false);
  cases_opt(calibrate_cmd, true);
  source_opt(calibrate_cmd);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Verdict counts per ruling label");
  store_opt(evaluate_cmd, false);
  cases_opt(evaluate_cmd, true);
  source_opt(evaluate_cmd);
  threshold_opts(evaluate_cmd);

  auto* histogram_cmd = app.add_subcommand("histogram", "Binned metric counts per label");
  store_opt(histogram_cmd, false);
  cases_opt(histogram_cmd, true);
  source_opt(histogram_cmd);
  histogram_cmd->add_option("--bin-width", in.bin_width, "Bin width");

  auto* simulate = app.add_subcommand("simulate", "Run a compensation scenario");
  simulate->add_option("--config", in.config_path, "Scenario config")->required();
  simulate->add_option("--format", in.format, "Output format")->check(CLI::IsMember({"csv", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    // Buffer so a failing command leaves stdout empty.
    std::ostringstream buf;
    if (*ingest) cmd_ingest(in, buf);
    if (*stats) cmd_stats(in, buf);
    if (*classify_cmd) cmd_classify(in, buf);
    if (*calibrate_cmd) cmd_calibrate(in, buf);
    if (*evaluate_cmd) cmd_evaluate(in, buf);
    if (*histogram_cmd) cmd_histogram(in, buf);
    if (*simulate) cmd_simulate(in, buf);
    out << buf.str();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvariantViolation ? 2 : 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace airoyalties::cli
