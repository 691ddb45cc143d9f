#pragma once

// Copyright-ruling pairs, per-class statistics of their metric values, and the
// three-band verdict classifier with its calibration.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/tokenizer.hpp>

#include "airoyalties/embedstore.hpp"
#include "airoyalties/error.hpp"
#include "airoyalties/metric.hpp"
#include "airoyalties/text.hpp"

namespace airoyalties {

enum class RulingLabel { FairUse, NotFairUse, ProbablyNotFairUse, Uncontested };

inline constexpr std::array<RulingLabel, 4> kAllLabels = {RulingLabel::FairUse, RulingLabel::NotFairUse,
                                                          RulingLabel::ProbablyNotFairUse, RulingLabel::Uncontested};

inline std::string_view to_token(RulingLabel label) {
  switch (label) {
    case RulingLabel::FairUse: return "fair_use";
    case RulingLabel::NotFairUse: return "not_fair_use";
    case RulingLabel::ProbablyNotFairUse: return "probably_not_fair_use";
    case RulingLabel::Uncontested: return "uncontested";
  }
  return "";
}

inline RulingLabel parse_label(std::string_view token) {
  for (auto label : kAllLabels) {
    if (to_token(label) == token) return label;
  }
  throw Error(ErrorCode::UnknownLabel, "'" + std::string(token) + "'");
}

struct CasePair {
  std::string case_id;
  std::string case_name;
  std::string original_id;
  std::string derivative_id;
  RulingLabel label = RulingLabel::Uncontested;
  std::optional<double> reported_metric;
  std::optional<int> year;
  std::string notes;
};

inline constexpr std::string_view kCasesHeader =
    "case_id,case_name,original_id,derivative_id,label,reported_metric,year,notes";

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
  using Sep = boost::escaped_list_separator<char>;
  boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
  return {tok.begin(), tok.end()};
}

}  // namespace detail

inline std::vector<CasePair> read_cases(std::istream& in) {
  std::vector<CasePair> pairs;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    if (!header_seen) {
      if (trimmed != kCasesHeader) {
        throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected header '" +
                                                 std::string(kCasesHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    std::vector<std::string> f;
    try {
      f = detail::split_csv_row(std::string(trimmed));
    } catch (const boost::escaped_list_error& e) {
      throw Error(ErrorCode::MalformedRow, where + ": " + e.what());
    }
    if (f.size() != 8) {
      throw Error(ErrorCode::MalformedRow, where + ": expected 8 fields, got " + std::to_string(f.size()));
    }
    CasePair p;
    p.case_id = std::string(detail::trim(f[0]));
    p.case_name = std::string(detail::trim(f[1]));
    p.original_id = std::string(detail::trim(f[2]));
    p.derivative_id = std::string(detail::trim(f[3]));
    if (p.case_id.empty() || p.original_id.empty() || p.derivative_id.empty()) {
      throw Error(ErrorCode::MalformedRow, where + ": case_id, original_id and derivative_id are required");
    }
    if (p.original_id == p.derivative_id) {
      throw Error(ErrorCode::MalformedRow, where + ": original_id equals derivative_id");
    }
    try {
      p.label = parse_label(detail::trim(f[4]));
    } catch (const Error& e) {
      throw Error(ErrorCode::UnknownLabel, where + ": " + e.what());
    }
    if (!detail::trim(f[5]).empty()) {
      auto v = detail::parse_number<double>(f[5]);
      if (!v || !std::isfinite(*v) || *v < -1.0 || *v > 1.0) {
        throw Error(ErrorCode::MalformedRow, where + ": reported_metric must be a number in [-1, 1]");
      }
      p.reported_metric = *v;
    }
    if (!detail::trim(f[6]).empty()) {
      auto y = detail::parse_number<int>(f[6]);
      if (!y) throw Error(ErrorCode::MalformedRow, where + ": year must be an integer");
      p.year = *y;
    }
    p.notes = std::string(detail::trim(f[7]));
    if (!seen.insert(p.case_id).second) throw Error(ErrorCode::DuplicatePairId, where + ": '" + p.case_id + "'");
    pairs.push_back(std::move(p));
  }
  return pairs;
}

inline std::vector<CasePair> load_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  return read_cases(in);
}

/// Every unordered pair of works referenced by `pairs` that is not already
/// listed, labeled Uncontested. Works are taken in order of first appearance.
inline std::vector<CasePair> uncontested_pairs(const std::vector<CasePair>& pairs) {
  std::vector<std::string> works;
  std::set<std::string> known;
  std::set<std::pair<std::string, std::string>> listed;
  for (const auto& p : pairs) {
    for (const auto* id : {&p.original_id, &p.derivative_id}) {
      if (known.insert(*id).second) works.push_back(*id);
    }
    listed.emplace(std::min(p.original_id, p.derivative_id), std::max(p.original_id, p.derivative_id));
  }
  std::vector<CasePair> out;
  for (std::size_t i = 0; i < works.size(); ++i) {
    for (std::size_t j = i + 1; j < works.size(); ++j) {
      const auto& a = works[i];
      const auto& b = works[j];
      if (listed.contains({std::min(a, b), std::max(a, b)})) continue;
      CasePair p;
      p.case_id = "uncontested:" + a + "|" + b;
      p.original_id = a;
      p.derivative_id = b;
      p.label = RulingLabel::Uncontested;
      out.push_back(std::move(p));
    }
  }
  return out;
}

enum class MetricSource { Stored, Computed };

inline double metric_for_pair(const CasePair& pair, const EmbeddingStore& store, MetricSource source) {
  if (source == MetricSource::Stored) {
    if (!pair.reported_metric) throw Error(ErrorCode::MissingReportedMetric, "'" + pair.case_id + "'");
    return *pair.reported_metric;
  }
  return clip_metric(store.get(pair.original_id), store.get(pair.derivative_id));
}

struct ClassStats {
  RulingLabel label = RulingLabel::Uncontested;
  std::size_t count = 0;
  double mean = 0.0;
  std::optional<double> std_dev;  // sample (n-1); absent below two values
  double min = 0.0;
  double max = 0.0;
};

inline void require_parallel(std::size_t pairs, std::size_t values) {
  if (pairs != values) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(pairs) + " pairs vs " + std::to_string(values) + " values");
  }
}

/// One entry per label that occurs, in label order.
inline std::vector<ClassStats> class_stats(const std::vector<CasePair>& pairs, const std::vector<double>& values) {
  require_parallel(pairs.size(), values.size());
  std::vector<ClassStats> out;
  for (auto label : kAllLabels) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].label == label) xs.push_back(values[i]);
    }
    if (xs.empty()) continue;
    ClassStats s;
    s.label = label;
    s.count = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
      double ss = 0.0;
      for (double x : xs) ss += (x - s.mean) * (x - s.mean);
      s.std_dev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    s.min = *lo;
    s.max = *hi;
    out.push_back(s);
  }
  return out;
}

inline std::optional<ClassStats> find_stats(const std::vector<ClassStats>& stats, RulingLabel label) {
  for (const auto& s : stats) {
    if (s.label == label) return s;
  }
  return std::nullopt;
}

/// Band boundaries: value <= safe_max is safe, value <= fair_use_max is likely
/// fair use, anything above is likely infringement.
struct Thresholds {
  double safe_max = 0.6;
  double fair_use_max = 0.7;

  void validate() const {
    if (!(safe_max >= -1.0 && safe_max < fair_use_max && fair_use_max <= 1.0)) {
      throw Error(ErrorCode::InvalidParam, "thresholds must satisfy -1 <= safe_max < fair_use_max <= 1");
    }
  }
};

enum class Verdict { CopyrightSafe, LikelyFairUse, LikelyInfringement };

inline std::string_view to_token(Verdict v) {
  switch (v) {
    case Verdict::CopyrightSafe: return "copyright_safe";
    case Verdict::LikelyFairUse: return "likely_fair_use";
    case Verdict::LikelyInfringement: return "likely_infringement";
  }
  return "";
}

inline Verdict classify(double value, const Thresholds& t = {}) {
  if (!(value >= -1.0 && value <= 1.0)) throw Error(ErrorCode::OutOfRange, std::to_string(value));
  t.validate();
  if (value <= t.safe_max) return Verdict::CopyrightSafe;
  if (value <= t.fair_use_max) return Verdict::LikelyFairUse;
  return Verdict::LikelyInfringement;
}

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

/// Midpoint calibration: safe_max between the uncontested and fair-use means,
/// fair_use_max between the fair-use and not-fair-use means, both to 2 dp.
inline Thresholds calibrate(const std::vector<CasePair>& pairs, const std::vector<double>& values) {
  const auto stats = class_stats(pairs, values);
  const auto fair = find_stats(stats, RulingLabel::FairUse);
  const auto unfair = find_stats(stats, RulingLabel::NotFairUse);
  const auto background = find_stats(stats, RulingLabel::Uncontested);
  if (!fair || !unfair) throw Error(ErrorCode::InsufficientClasses, "need fair_use and not_fair_use pairs");
  if (!background) throw Error(ErrorCode::InsufficientClasses, "need uncontested pairs for safe_max");
  if (fair->mean == unfair->mean) throw Error(ErrorCode::InsufficientClasses, "class means coincide");

  Thresholds t;
  t.safe_max = round2((background->mean + fair->mean) / 2.0);
  t.fair_use_max = round2((fair->mean + unfair->mean) / 2.0);
  if (!(t.safe_max >= -1.0 && t.safe_max < t.fair_use_max && t.fair_use_max <= 1.0)) {
    throw Error(ErrorCode::InsufficientClasses, "class means do not separate into ordered bands");
  }
  return t;
}

/// Whether a verdict agrees with the ruling. Uncontested pairs are not scored.
inline std::optional<bool> consistent_with_ruling(RulingLabel label, Verdict v) {
  switch (label) {
    case RulingLabel::FairUse: return v != Verdict::LikelyInfringement;
    case RulingLabel::NotFairUse:
    case RulingLabel::ProbablyNotFairUse: return v == Verdict::LikelyInfringement;
    case RulingLabel::Uncontested: return std::nullopt;
  }
  return std::nullopt;
}

struct EvaluationSummary {
  // counts[label][verdict]
  std::array<std::array<std::size_t, 3>, 4> counts{};
  std::size_t scored = 0;
  std::size_t consistent = 0;

  std::optional<double> accuracy() const {
    if (scored == 0) return std::nullopt;
    return static_cast<double>(consistent) / static_cast<double>(scored);
  }
  std::size_t count(RulingLabel l, Verdict v) const {
    return counts[static_cast<std::size_t>(l)][static_cast<std::size_t>(v)];
  }
};

inline EvaluationSummary evaluate(const std::vector<CasePair>& pairs, const std::vector<double>& values,
                                  const Thresholds& t = {}) {
  require_parallel(pairs.size(), values.size());
  if (pairs.empty()) throw Error(ErrorCode::LengthMismatch, "nothing to evaluate");
  EvaluationSummary s;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto v = classify(values[i], t);
    ++s.counts[static_cast<std::size_t>(pairs[i].label)][static_cast<std::size_t>(v)];
    if (auto ok = consistent_with_ruling(pairs[i].label, v)) {
      ++s.scored;
      if (*ok) ++s.consistent;
    }
  }
  return s;
}

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::array<std::size_t, 4> counts{};  // indexed by RulingLabel
};

/// Bins of width `bin_width` aligned to multiples of the width, covering the
/// observed [min, max]. A value on a bin edge belongs to the upper bin.
inline std::vector<HistogramBin> histogram(const std::vector<CasePair>& pairs, const std::vector<double>& values,
                                           double bin_width) {
  require_parallel(pairs.size(), values.size());
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw Error(ErrorCode::InvalidParam, "bin width must be positive");
  }
  if (values.empty()) return {};
  auto index = [&](double v) { return static_cast<long long>(std::floor(v / bin_width + 1e-9)); };
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const long long first = index(*lo_it);
  const long long last = index(*hi_it);
  std::vector<HistogramBin> bins(static_cast<std::size_t>(last - first + 1));
  for (std::size_t k = 0; k < bins.size(); ++k) {
    bins[k].lo = static_cast<double>(first + static_cast<long long>(k)) * bin_width;
    bins[k].hi = static_cast<double>(first + static_cast<long long>(k) + 1) * bin_width;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& bin = bins[static_cast<std::size_t>(index(values[i]) - first)];
    ++bin.counts[static_cast<std::size_t>(pairs[i].label)];
  }
  return bins;
}

}  // namespace airoyalties
