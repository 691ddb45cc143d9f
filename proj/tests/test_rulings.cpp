#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <random>
#include <sstream>

#include "airoyalties/rulings.hpp"
#include "support.hpp"

using namespace airoyalties;

namespace {

const std::string kHeader = std::string(kCasesHeader) + "\n";

std::vector<CasePair> parse(const std::string& body) {
  std::istringstream in(kHeader + body);
  return read_cases(in);
}

ErrorCode parse_error(const std::string& body) {
  try {
    parse(body);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvariantViolation;
}

CasePair pair_with(RulingLabel label, const std::string& id = "p") {
  CasePair p;
  p.case_id = id;
  p.original_id = id + "_o";
  p.derivative_id = id + "_d";
  p.label = label;
  return p;
}

const CasePair& find_case(const std::vector<CasePair>& cases, const std::string& id) {
  return *std::find_if(cases.begin(), cases.end(), [&](const CasePair& p) { return p.case_id == id; });
}

}  // namespace

TEST(LoadCases, ShippedDatasetHasTwentyPairs) {
  const auto cases = load_cases(testing_support::data("rulings.csv"));
  EXPECT_EQ(cases.size(), 20u);
  std::set<std::string> originals, names;
  for (const auto& p : cases) {
    originals.insert(p.original_id);
    names.insert(p.case_name);
  }
  EXPECT_EQ(originals.size(), 14u);
  EXPECT_EQ(names.size(), 10u);
}

TEST(LoadCases, ParsesQuotedFieldsAndOptionals) {
  const auto cases = parse("c1,\"Smith v. Jones, Inc.\",o1,d1,fair_use,0.5,1999,note\nc2,n,o2,d2,uncontested,,,\n");
  ASSERT_EQ(cases.size(), 2u);
  EXPECT_EQ(cases[0].case_name, "Smith v. Jones, Inc.");
  EXPECT_EQ(cases[0].reported_metric, 0.5);
  EXPECT_EQ(cases[0].year, 1999);
  EXPECT_FALSE(cases[1].reported_metric);
  EXPECT_FALSE(cases[1].year);
  EXPECT_EQ(cases[1].label, RulingLabel::Uncontested);
}

TEST(LoadCases, HeaderOnlyIsEmpty) { EXPECT_TRUE(parse("").empty()); }

TEST(LoadCases, Errors) {
  EXPECT_EQ(parse_error("c1,n,o,d,maybe,0.5,,\n"), ErrorCode::UnknownLabel);
  EXPECT_EQ(parse_error("c1,n,o,d,fair_use,0.5,,\nc1,n,o2,d2,fair_use,0.5,,\n"), ErrorCode::DuplicatePairId);
  EXPECT_EQ(parse_error("c1,n,o,d,fair_use,0.5\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(parse_error("c1,n,o,o,fair_use,0.5,,\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(parse_error("c1,n,o,d,fair_use,1.5,,\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(parse_error("c1,n,o,d,fair_use,abc,,\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(parse_error("c1,n,o,d,fair_use,0.5,199x,\n"), ErrorCode::MalformedRow);
  std::istringstream bad_header("id,name\n");
  EXPECT_THROW(read_cases(bad_header), Error);
  EXPECT_THROW(load_cases("/nonexistent.csv"), Error);
}

TEST(MetricForPair, StoredValuesForPublishedPairs) {
  const auto cases = load_cases(testing_support::data("rulings.csv"));
  const EmbeddingStore none;
  EXPECT_EQ(metric_for_pair(find_case(cases, "warhol_1"), none, MetricSource::Stored), 0.852);
  EXPECT_EQ(metric_for_pair(find_case(cases, "cariou_1"), none, MetricSource::Stored), 0.776);
  EXPECT_EQ(metric_for_pair(find_case(cases, "kienitz_1"), none, MetricSource::Stored), 0.479);
  EXPECT_EQ(metric_for_pair(find_case(cases, "seuss_1"), none, MetricSource::Stored), 0.723);
}

TEST(MetricForPair, MissingReportedMetricAndUnknownWork) {
  const EmbeddingStore none;
  try {
    metric_for_pair(pair_with(RulingLabel::FairUse), none, MetricSource::Stored);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingReportedMetric);
  }
  try {
    metric_for_pair(pair_with(RulingLabel::FairUse), none, MetricSource::Computed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownWorkId);
  }
}

TEST(MetricForPair, ComputedOnSyntheticStoreMatchesStored) {
  const auto cases = load_cases(testing_support::data("rulings.csv"));
  const auto store = load_store(testing_support::data("embeddings.jsonl"));
  for (const auto& p : cases) {
    EXPECT_NEAR(metric_for_pair(p, store, MetricSource::Computed), *p.reported_metric, 1e-6) << p.case_id;
  }
}

TEST(UncontestedPairs, AllRemainingCrossCombinations) {
  const auto cases = load_cases(testing_support::data("rulings.csv"));
  const auto background = uncontested_pairs(cases);
  EXPECT_EQ(background.size(), 34u * 33u / 2u - 20u);
  for (const auto& p : background) EXPECT_EQ(p.label, RulingLabel::Uncontested);

  const auto store = load_store(testing_support::data("embeddings.jsonl"));
  double sum = 0.0;
  for (const auto& p : background) sum += metric_for_pair(p, store, MetricSource::Computed);
  EXPECT_NEAR(sum / static_cast<double>(background.size()), 0.5, 0.1);
}

TEST(ClassStats, SingleValueHasNoStdDev) {
  const auto s = class_stats({pair_with(RulingLabel::FairUse)}, {0.5});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].count, 1u);
  EXPECT_EQ(s[0].mean, 0.5);
  EXPECT_FALSE(s[0].std_dev);
}

TEST(ClassStats, SampleStandardDeviation) {
  // values 1, 2, 3, 4: mean 2.5, sample variance 5/3
  std::vector<CasePair> pairs(4, pair_with(RulingLabel::NotFairUse));
  const auto s = class_stats(pairs, {1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s[0].mean, 2.5);
  EXPECT_NEAR(*s[0].std_dev, std::sqrt(5.0 / 3.0), 1e-15);
}

TEST(ClassStats, LengthMismatch) {
  try {
    class_stats({pair_with(RulingLabel::FairUse)}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

// Properties: mean lies within [min, max]; statistics do not depend on row order.
TEST(ClassStats, Properties) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<CasePair> pairs;
    std::vector<double> values;
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back(pair_with(kAllLabels[rng() % 4], "p" + std::to_string(i)));
      values.push_back(u(rng));
    }
    const auto stats = class_stats(pairs, values);
    for (const auto& s : stats) {
      ASSERT_GE(s.mean, s.min - 1e-15);
      ASSERT_LE(s.mean, s.max + 1e-15);
      if (s.std_dev) {
        ASSERT_GE(*s.std_dev, 0.0);
      }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<CasePair> p2;
    std::vector<double> v2;
    for (auto k : order) {
      p2.push_back(pairs[k]);
      v2.push_back(values[k]);
    }
    const auto shuffled = class_stats(p2, v2);
    ASSERT_EQ(shuffled.size(), stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
      ASSERT_EQ(shuffled[k].count, stats[k].count);
      ASSERT_NEAR(shuffled[k].mean, stats[k].mean, 1e-12);
      if (stats[k].std_dev) {
        ASSERT_NEAR(*shuffled[k].std_dev, *stats[k].std_dev, 1e-12);
      }
    }
  }
}

TEST(Classify, DefaultBands) {
  EXPECT_EQ(classify(0.479), Verdict::CopyrightSafe);
  EXPECT_EQ(classify(0.6), Verdict::CopyrightSafe);
  EXPECT_EQ(classify(0.65), Verdict::LikelyFairUse);
  EXPECT_EQ(classify(0.7), Verdict::LikelyFairUse);
  EXPECT_EQ(classify(0.723), Verdict::LikelyInfringement);
  EXPECT_EQ(classify(0.776), Verdict::LikelyInfringement);
  EXPECT_EQ(classify(0.852), Verdict::LikelyInfringement);
  EXPECT_EQ(classify(-1.0), Verdict::CopyrightSafe);
  EXPECT_EQ(classify(1.0), Verdict::LikelyInfringement);
}

TEST(Classify, OutOfRange) {
  for (double v : {1.0001, -1.5, std::nan("")}) {
    try {
      classify(v);
      FAIL() << v;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
  }
}

// Monotone and total on [-1, 1] for random valid thresholds.
TEST(Classify, MonotoneAndTotal) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    Thresholds t{std::min(a, b), std::max(a, b)};
    double v1 = u(rng), v2 = u(rng);
    if (v1 > v2) std::swap(v1, v2);
    ASSERT_LE(static_cast<int>(classify(v1, t)), static_cast<int>(classify(v2, t)));
    ASSERT_EQ(classify(t.safe_max, t), Verdict::CopyrightSafe);
    ASSERT_EQ(classify(t.fair_use_max, t), Verdict::LikelyFairUse);
  }
}

TEST(Calibrate, MidpointRule) {
  std::vector<CasePair> pairs = {pair_with(RulingLabel::Uncontested, "u"), pair_with(RulingLabel::FairUse, "f"),
                                 pair_with(RulingLabel::NotFairUse, "n")};
  const auto t = calibrate(pairs, {0.5, 0.604, 0.764});
  EXPECT_DOUBLE_EQ(t.safe_max, 0.55);      // (0.5 + 0.604) / 2 = 0.552
  EXPECT_DOUBLE_EQ(t.fair_use_max, 0.68);  // (0.604 + 0.764) / 2 = 0.684
}

TEST(Calibrate, InsufficientClasses) {
  auto code = [](std::vector<CasePair> pairs, std::vector<double> values) {
    try {
      calibrate(pairs, values);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvariantViolation;
  };
  EXPECT_EQ(code({pair_with(RulingLabel::FairUse)}, {0.6}), ErrorCode::InsufficientClasses);
  EXPECT_EQ(code({pair_with(RulingLabel::Uncontested, "u"), pair_with(RulingLabel::FairUse, "f"),
                  pair_with(RulingLabel::NotFairUse, "n")},
                 {0.3, 0.7, 0.7}),
            ErrorCode::InsufficientClasses);
  EXPECT_EQ(code({pair_with(RulingLabel::FairUse, "f"), pair_with(RulingLabel::NotFairUse, "n")}, {0.6, 0.8}),
            ErrorCode::InsufficientClasses);
}

// Ordered, separated class means always yield valid thresholds.
TEST(Calibrate, OutputSatisfiesInvariant) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> gap(0.03, 0.4);
  std::uniform_real_distribution<double> start(-1.0, 0.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double u = start(rng);
    const double f = std::min(u + gap(rng), 0.9);
    const double n = std::min(f + gap(rng), 1.0);
    if (n - f < 0.03 || f - u < 0.03) continue;
    const auto t = calibrate({pair_with(RulingLabel::Uncontested, "u"), pair_with(RulingLabel::FairUse, "f"),
                              pair_with(RulingLabel::NotFairUse, "n")},
                             {u, f, n});
    ASSERT_NO_THROW(t.validate());
  }
}

TEST(Evaluate, PublishedPairsAreConsistent) {
  const std::vector<CasePair> pairs = {pair_with(RulingLabel::FairUse, "a"), pair_with(RulingLabel::ProbablyNotFairUse, "b"),
                                       pair_with(RulingLabel::NotFairUse, "c"), pair_with(RulingLabel::NotFairUse, "d")};
  const auto s = evaluate(pairs, {0.479, 0.776, 0.723, 0.852});
  EXPECT_EQ(s.scored, 4u);
  EXPECT_EQ(s.consistent, 4u);
  EXPECT_EQ(*s.accuracy(), 1.0);
}

TEST(Evaluate, AllZeroValuesAreSafe) {
  const std::vector<CasePair> pairs = {pair_with(RulingLabel::FairUse, "a"), pair_with(RulingLabel::NotFairUse, "b"),
                                       pair_with(RulingLabel::Uncontested, "c")};
  const auto s = evaluate(pairs, {0.0, 0.0, 0.0});
  EXPECT_EQ(s.count(RulingLabel::FairUse, Verdict::CopyrightSafe), 1u);
  EXPECT_EQ(s.count(RulingLabel::NotFairUse, Verdict::CopyrightSafe), 1u);
  EXPECT_EQ(s.count(RulingLabel::Uncontested, Verdict::CopyrightSafe), 1u);
  EXPECT_EQ(s.scored, 2u);
  EXPECT_EQ(s.consistent, 1u);
}

TEST(Evaluate, EmptyInput) { EXPECT_THROW(evaluate({}, {}), Error); }

TEST(Histogram, SinglePairSingleBin) {
  const auto bins = histogram({pair_with(RulingLabel::FairUse)}, {0.479}, 0.05);
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_NEAR(bins[0].lo, 0.45, 1e-12);
  EXPECT_EQ(bins[0].counts[static_cast<std::size_t>(RulingLabel::FairUse)], 1u);
}

TEST(Histogram, EdgesBelongToUpperBinAndCountsAddUp) {
  std::vector<CasePair> pairs(4, pair_with(RulingLabel::NotFairUse));
  const auto bins = histogram(pairs, {0.6, 0.65, 0.7, 0.62}, 0.05);
  ASSERT_EQ(bins.size(), 3u);
  EXPECT_EQ(bins[0].counts[1], 2u);  // [0.60, 0.65): 0.6, 0.62
  EXPECT_EQ(bins[1].counts[1], 1u);  // [0.65, 0.70)
  EXPECT_EQ(bins[2].counts[1], 1u);  // [0.70, 0.75)
  EXPECT_THROW(histogram(pairs, {0.6, 0.65, 0.7, 0.62}, 0.0), Error);
}
