#pragma once

// Compensation frameworks for AI-generated content:
//   windfall                  displaced workers share a donated slice of AI profits
//   pay_to_train              contributors paid pro rata to dataset volume
//   pay_to_train_and_inspire  contributors paid by influence on revenue-earning outputs
//   ai_royalties              training share plus a fame-weighted dedicated-model share
//
// All money is integer cents; each payout is rounded exactly once.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "airoyalties/error.hpp"
#include "airoyalties/influence.hpp"
#include "airoyalties/money.hpp"

namespace airoyalties {

enum class Scheme { Windfall, PayToTrain, PayToTrainAndInspire, AIRoyalties };

inline std::string_view to_token(Scheme s) {
  switch (s) {
    case Scheme::Windfall: return "windfall";
    case Scheme::PayToTrain: return "pay_to_train";
    case Scheme::PayToTrainAndInspire: return "pay_to_train_and_inspire";
    case Scheme::AIRoyalties: return "ai_royalties";
  }
  return "";
}

inline Scheme parse_scheme(std::string_view token) {
  for (auto s : {Scheme::Windfall, Scheme::PayToTrain, Scheme::PayToTrainAndInspire, Scheme::AIRoyalties}) {
    if (to_token(s) == token) return s;
  }
  throw Error(ErrorCode::UnknownScheme, "'" + std::string(token) + "'");
}

namespace detail {

inline constexpr wide_int kPpb = Fraction::kScale;

inline wide_int checked_mul(wide_int a, wide_int b) {
  wide_int out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::InvalidParam, "amount too large for exact arithmetic");
  return out;
}

inline Cents to_cents(wide_int v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(ErrorCode::InvalidParam, "amount does not fit in cents");
  return Cents(static_cast<std::int64_t>(v));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Windfall clause

/// Marginal donation rate applied to the part of profits falling in
/// [lower, upper), both expressed as fractions of GDP.
struct WindfallBracket {
  Fraction lower;
  Fraction upper;
  Fraction rate;
};

struct WindfallParams {
  Cents gdp;
  Fraction ai_profit_fraction;
  Fraction clause_rate;
  std::int64_t workforce = 0;
  Fraction displacement_rate;
  /// Overrides workforce * displacement_rate when set.
  std::optional<std::int64_t> displaced;
  /// When non-empty, replaces the flat clause_rate with a marginal schedule.
  std::vector<WindfallBracket> brackets;
};

/// Donated amount scaled by 1e18 (cents x ppb x ppb), exact.
inline wide_int windfall_donation_scaled(const WindfallParams& p) {
  if (p.gdp.value() <= 0) throw Error(ErrorCode::InvalidParam, "gdp must be positive");
  const wide_int profit = p.ai_profit_fraction.ppb();
  wide_int rate_times_share = 0;  // ppb x ppb
  if (p.brackets.empty()) {
    rate_times_share = detail::checked_mul(profit, p.clause_rate.ppb());
  } else {
    for (const auto& b : p.brackets) {
      if (b.upper < b.lower) throw Error(ErrorCode::InvalidParam, "windfall bracket upper below lower");
      const wide_int top = std::min<wide_int>(profit, b.upper.ppb());
      const wide_int overlap = std::max<wide_int>(0, top - b.lower.ppb());
      rate_times_share += detail::checked_mul(overlap, b.rate.ppb());
    }
  }
  return detail::checked_mul(p.gdp.value(), rate_times_share);
}

inline Cents windfall_donation(const WindfallParams& p) {
  return detail::to_cents(div_round(windfall_donation_scaled(p), detail::kPpb * detail::kPpb));
}

/// Annual amount per displaced worker.
inline Cents windfall_per_worker(const WindfallParams& p) {
  const wide_int donation = windfall_donation_scaled(p);
  if (p.displaced) {
    if (*p.displaced <= 0) throw Error(ErrorCode::ZeroDisplaced, "no displaced workers");
    return detail::to_cents(div_round(donation, detail::checked_mul(detail::kPpb * detail::kPpb, *p.displaced)));
  }
  if (p.workforce <= 0) throw Error(ErrorCode::InvalidParam, "workforce must be positive");
  if (p.displacement_rate.ppb() == 0) throw Error(ErrorCode::ZeroDisplaced, "displacement rate is zero");
  // displaced = workforce * rate_ppb / 1e9
  const wide_int den = detail::checked_mul(detail::checked_mul(detail::kPpb, p.workforce), p.displacement_rate.ppb());
  return detail::to_cents(div_round(donation, den));
}

// ---------------------------------------------------------------------------
// Holders, outputs, reports

struct Rightsholder {
  std::string holder_id;
  std::vector<std::string> holdings;  // X_A, when enumerated
  std::int64_t work_count = 0;
  double fame_weight = 0.0;

  void validate() const {
    if (holder_id.empty()) throw Error(ErrorCode::InvalidParam, "empty holder id");
    if (work_count < 0) throw Error(ErrorCode::InvalidParam, holder_id + ": negative work count");
    if (!(fame_weight >= 0.0) || !std::isfinite(fame_weight)) {
      throw Error(ErrorCode::InvalidParam, holder_id + ": fame weight must be a non-negative number");
    }
    if (!holdings.empty()) {
      const std::set<std::string> unique(holdings.begin(), holdings.end());
      if (unique.size() != holdings.size()) throw Error(ErrorCode::InvalidParam, holder_id + ": duplicate holdings");
      if (static_cast<std::int64_t>(holdings.size()) != work_count) {
        throw Error(ErrorCode::InvalidParam, holder_id + ": work count disagrees with enumerated holdings");
      }
    }
  }
};

/// A generated output y with its revenue r(y). The condition tag (prompt,
/// constraints) and generating model are carried as opaque identifiers.
struct OutputRecord {
  std::string output_id;
  std::string condition_tag;
  Cents revenue;
  std::string model_id;
};

struct PayoutLine {
  std::string holder_id;
  std::vector<std::pair<std::string, Cents>> components;
  Cents total;
};

struct CompensationReport {
  Scheme scheme = Scheme::Windfall;
  std::string label;  // row name; defaults to the scheme token
  std::vector<PayoutLine> lines;
  Cents total_distributed;

  Cents amount(const std::string& holder_id) const {
    for (const auto& l : lines) {
      if (l.holder_id == holder_id) return l.total;
    }
    throw Error(ErrorCode::UnknownWorkId, "no payout line for holder '" + holder_id + "'");
  }

  Cents component(const std::string& holder_id, std::string_view name) const {
    for (const auto& l : lines) {
      if (l.holder_id != holder_id) continue;
      for (const auto& [n, v] : l.components) {
        if (n == name) return v;
      }
      return Cents(0);
    }
    throw Error(ErrorCode::UnknownWorkId, "no payout line for holder '" + holder_id + "'");
  }

  void validate() const {
    Cents sum;
    for (const auto& l : lines) {
      Cents parts;
      for (const auto& [name, v] : l.components) {
        if (v.value() < 0) throw Error(ErrorCode::InvariantViolation, l.holder_id + ": negative " + name);
        parts += v;
      }
      if (parts != l.total) throw Error(ErrorCode::InvariantViolation, l.holder_id + ": components do not add up");
      sum += l.total;
    }
    if (sum != total_distributed) throw Error(ErrorCode::InvariantViolation, "total does not match payouts");
  }
};

namespace detail {

inline CompensationReport finish(Scheme scheme, std::vector<PayoutLine> lines) {
  CompensationReport r;
  r.scheme = scheme;
  r.label = std::string(to_token(scheme));
  for (auto& l : lines) {
    l.total = Cents(0);
    for (const auto& c : l.components) l.total += c.second;
    r.total_distributed += l.total;
  }
  r.lines = std::move(lines);
  r.validate();
  return r;
}

inline void validate_holders(const std::vector<Rightsholder>& holders) {
  std::set<std::string> ids;
  for (const auto& h : holders) {
    h.validate();
    if (!ids.insert(h.holder_id).second) throw Error(ErrorCode::InvalidParam, "duplicate holder '" + h.holder_id + "'");
  }
}

inline void check_holdings_fit(const std::vector<Rightsholder>& holders, std::int64_t dataset_size) {
  if (dataset_size <= 0) throw Error(ErrorCode::InvalidParam, "dataset size must be positive");
  std::int64_t sum = 0;
  for (const auto& h : holders) {
    if (h.work_count > dataset_size) {
      throw Error(ErrorCode::HoldingsExceedDataset, h.holder_id + " holds " + std::to_string(h.work_count) +
                                                        " works, dataset has " + std::to_string(dataset_size));
    }
    sum += h.work_count;
  }
  if (sum > dataset_size) {
    throw Error(ErrorCode::HoldingsExceedDataset, "holders together hold " + std::to_string(sum) + " works");
  }
}

/// round(pool_scaled * works / (1e18 * dataset_size)) where pool_scaled is cents x ppb x ppb.
inline Cents pro_rata(wide_int pool_scaled, std::int64_t works, std::int64_t dataset_size) {
  return to_cents(div_round(checked_mul(pool_scaled, works), checked_mul(kPpb * kPpb, dataset_size)));
}

}  // namespace detail

inline CompensationReport windfall(const WindfallParams& p, const std::vector<Rightsholder>& holders) {
  detail::validate_holders(holders);
  const Cents each = windfall_per_worker(p);
  std::vector<PayoutLine> lines;
  for (const auto& h : holders) lines.push_back({h.holder_id, {{"windfall", each}}, {}});
  return detail::finish(Scheme::Windfall, std::move(lines));
}

// ---------------------------------------------------------------------------
// Pay to train

struct PayToTrainParams {
  Cents total_revenue;
  Fraction ai_revenue_fraction;
  Fraction d_c;
  std::int64_t dataset_size = 0;

  /// Contributor pool in cents x 1e18.
  wide_int pool_scaled() const {
    return detail::checked_mul(detail::checked_mul(total_revenue.value(), ai_revenue_fraction.ppb()), d_c.ppb());
  }
  Cents pool() const { return detail::to_cents(div_round(pool_scaled(), detail::kPpb * detail::kPpb)); }
  /// Amount owed for `works` images, rounded once.
  Cents payout_for(std::int64_t works) const { return detail::pro_rata(pool_scaled(), works, dataset_size); }
  /// Per-image rate in dollars (presentation only).
  double rate_per_image() const {
    return static_cast<double>(pool_scaled()) / 1e18 / static_cast<double>(dataset_size) / 100.0;
  }
};

inline CompensationReport pay_to_train(const PayToTrainParams& p, const std::vector<Rightsholder>& holders) {
  if (p.total_revenue.value() < 0) throw Error(ErrorCode::InvalidParam, "negative revenue");
  detail::validate_holders(holders);
  detail::check_holdings_fit(holders, p.dataset_size);
  std::vector<PayoutLine> lines;
  for (const auto& h : holders) lines.push_back({h.holder_id, {{"training", p.payout_for(h.work_count)}}, {}});
  return detail::finish(Scheme::PayToTrain, std::move(lines));
}

// ---------------------------------------------------------------------------
// Pay to train and inspire

/// raw_A = sum over outputs y of r(y) * sum over x_i in X_A of f(x_i; y, c), in cents.
inline std::vector<double> inspire_raw_scores(const std::vector<OutputRecord>& outputs, const InfluenceMatrix& infl,
                                              const std::vector<Rightsholder>& holders) {
  infl.validate();
  detail::validate_holders(holders);
  std::map<std::string, std::size_t> row_of;
  for (std::size_t j = 0; j < infl.output_ids.size(); ++j) row_of.emplace(infl.output_ids[j], j);
  std::map<std::string, std::size_t> col_of;
  for (std::size_t i = 0; i < infl.training_ids.size(); ++i) col_of.emplace(infl.training_ids[i], i);

  std::vector<std::size_t> rows;
  for (const auto& y : outputs) {
    if (y.revenue.value() < 0) throw Error(ErrorCode::InvalidParam, y.output_id + ": negative revenue");
    auto it = row_of.find(y.output_id);
    if (it == row_of.end()) throw Error(ErrorCode::InfluenceOutputMismatch, "no influence row for '" + y.output_id + "'");
    rows.push_back(it->second);
  }

  std::set<std::string> claimed;
  std::vector<double> raw;
  for (const auto& h : holders) {
    std::vector<std::size_t> cols;
    for (const auto& x : h.holdings) {
      auto it = col_of.find(x);
      if (it == col_of.end()) throw Error(ErrorCode::InfluenceOutputMismatch, "holding '" + x + "' is not a training item");
      if (!claimed.insert(x).second) throw Error(ErrorCode::InvalidParam, "training item '" + x + "' claimed twice");
      cols.push_back(it->second);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      double share = 0.0;
      for (auto c : cols) share += infl.weights[rows[k]][c];
      total += static_cast<double>(outputs[k].revenue.value()) * share;
    }
    raw.push_back(total);
  }
  return raw;
}

inline CompensationReport pay_to_train_and_inspire(const std::vector<OutputRecord>& outputs,
                                                   const InfluenceMatrix& infl,
                                                   const std::vector<Rightsholder>& holders, Cents payout_pool) {
  if (payout_pool.value() < 0) throw Error(ErrorCode::InvalidParam, "negative payout pool");
  const auto raw = inspire_raw_scores(outputs, infl, holders);
  long double sum = 0.0L;
  for (double r : raw) sum += r;
  if (!(sum > 0.0L)) throw Error(ErrorCode::ZeroTotalRaw, "no holder has influence on any revenue");
  std::vector<PayoutLine> lines;
  for (std::size_t a = 0; a < holders.size(); ++a) {
    const long double share = static_cast<long double>(payout_pool.value()) * raw[a] / sum;
    lines.push_back({holders[a].holder_id, {{"influence", Cents(std::llround(share))}}, {}});
  }
  return detail::finish(Scheme::PayToTrainAndInspire, std::move(lines));
}

// ---------------------------------------------------------------------------
// AI royalties

struct AIRoyaltyParams {
  Cents ai_revenue;
  Fraction training_pool_fraction = Fraction::from_ppb(Fraction::kScale / 2);
  Fraction dedicated_pool_fraction = Fraction::from_ppb(Fraction::kScale / 2);
  Fraction d_c;
  /// Amount of the dedicated pool shared among the modeled holders by fame.
  Cents dedicated_budget;

  void validate() const {
    if (training_pool_fraction.ppb() + dedicated_pool_fraction.ppb() != Fraction::kScale) {
      throw Error(ErrorCode::InvalidParam, "training and dedicated pool fractions must sum to 1");
    }
    if (ai_revenue.value() < 0 || dedicated_budget.value() < 0) {
      throw Error(ErrorCode::InvalidParam, "negative amount in royalty params");
    }
    if (dedicated_budget > dedicated_pool()) {
      throw Error(ErrorCode::InvalidParam, "dedicated budget exceeds the dedicated pool");
    }
  }

  wide_int training_pool_scaled() const {
    return detail::checked_mul(detail::checked_mul(ai_revenue.value(), training_pool_fraction.ppb()), d_c.ppb());
  }
  Cents dedicated_pool() const {
    return detail::to_cents(
        div_round(detail::checked_mul(detail::checked_mul(ai_revenue.value(), dedicated_pool_fraction.ppb()), d_c.ppb()),
                  detail::kPpb * detail::kPpb));
  }
};

inline CompensationReport ai_royalties(const AIRoyaltyParams& p, const std::vector<Rightsholder>& holders,
                                       std::int64_t dataset_size) {
  p.validate();
  detail::validate_holders(holders);
  detail::check_holdings_fit(holders, dataset_size);

  // Sorted summation so the total is independent of holder order.
  std::vector<double> fames;
  for (const auto& h : holders) fames.push_back(h.fame_weight);
  std::sort(fames.begin(), fames.end());
  double fame_total = 0.0;
  for (double f : fames) fame_total += f;
  if (p.dedicated_budget.value() > 0 && !(fame_total > 0.0)) {
    throw Error(ErrorCode::ZeroFameTotal, "dedicated budget set but every fame weight is zero");
  }

  std::vector<PayoutLine> lines;
  const auto training_pool = p.training_pool_scaled();
  for (const auto& h : holders) {
    const Cents training = detail::pro_rata(training_pool, h.work_count, dataset_size);
    Cents fame(0);
    if (h.fame_weight > 0.0) {
      const long double share =
          static_cast<long double>(p.dedicated_budget.value()) * h.fame_weight / static_cast<long double>(fame_total);
      fame = Cents(std::llround(share));
    }
    lines.push_back({h.holder_id, {{"training", training}, {"fame", fame}}, {}});
  }
  return detail::finish(Scheme::AIRoyalties, std::move(lines));
}

}  // namespace airoyalties
