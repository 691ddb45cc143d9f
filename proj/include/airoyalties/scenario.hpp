#pragma once

// Declarative scenario files and report rendering.
//
//   [scheme]
//   name   = windfall, pay_to_train, ai_royalties
//   mirror = monet, rutkowski        ; optional: extra ai_royalties row with these fame weights swapped
//
//   [holders]
//   monet  = 2000, 1000              ; work_count, fame_weight (fame optional)
//
//   [holdings]                       ; optional: enumerated X_A (pay_to_train_and_inspire)
//   alice  = img1 img2
//
//   [outputs]                        ; optional: output_id = revenue_cents[, condition_tag]
//   y1     = 10000, prompt-17
//
//   [params]
//   d_c = 0.55
//
// Money is integer cents, fractions are decimals in [0,1].

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "airoyalties/error.hpp"
#include "airoyalties/influence.hpp"
#include "airoyalties/money.hpp"
#include "airoyalties/schemes.hpp"
#include "airoyalties/text.hpp"

namespace airoyalties {

struct ScenarioConfig {
  std::vector<Scheme> schemes;
  std::optional<std::pair<std::string, std::string>> mirror;
  std::vector<Rightsholder> holders;
  std::vector<OutputRecord> outputs;
  std::map<std::string, std::string> params;
  std::filesystem::path base_dir;  // relative paths in params resolve here

  bool has(const std::string& key) const { return params.contains(key); }

  const std::string& raw(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw Error(ErrorCode::MissingParam, "[params] " + key);
    return it->second;
  }
  Cents cents(const std::string& key) const { return Cents(parse_count(raw(key), key)); }
  std::int64_t count(const std::string& key) const { return parse_count(raw(key), key); }
  Fraction fraction(const std::string& key) const {
    try {
      return Fraction::parse(raw(key));
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidParam, key + ": " + e.what());
    }
  }
  Fraction fraction_or(const std::string& key, Fraction fallback) const { return has(key) ? fraction(key) : fallback; }
};

namespace detail {

inline const std::set<std::string>& known_params() {
  static const std::set<std::string> keys = {
      "gdp_cents",          "ai_profit_fraction",     "clause_rate",         "workforce",
      "displacement_rate",  "displaced",              "windfall_brackets",   "total_revenue_cents",
      "ai_revenue_fraction", "d_c",                   "dataset_size",        "ai_revenue_cents",
      "training_pool_fraction", "dedicated_pool_fraction", "dedicated_budget_cents", "payout_pool_cents",
      "influence_csv",      "model_id",
  };
  return keys;
}

inline std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto t = trim(cur);
    if (!t.empty()) out.emplace_back(t);
    cur.clear();
  };
  for (char c : text) {
    if (c == sep) {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

inline std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidParam, std::string("config: ") + e.what());
  }

  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw Error(ErrorCode::InvalidParam, "config: key '" + section + "' outside a section");
    if (section != "scheme" && section != "holders" && section != "holdings" && section != "outputs" &&
        section != "params") {
      throw Error(ErrorCode::InvalidParam, "config: unknown section [" + section + "]");
    }
  }

  const auto scheme = tree.get_child_optional("scheme");
  if (!scheme || !scheme->get_optional<std::string>("name")) throw Error(ErrorCode::MissingParam, "[scheme] name");
  for (const auto& [key, node] : *scheme) {
    if (key != "name" && key != "mirror") throw Error(ErrorCode::InvalidParam, "config: unknown [scheme] key '" + key + "'");
  }
  for (const auto& token : detail::split_list(scheme->get<std::string>("name"), ',')) {
    cfg.schemes.push_back(parse_scheme(token));
  }
  if (cfg.schemes.empty()) throw Error(ErrorCode::MissingParam, "[scheme] name is empty");
  if (auto m = scheme->get_optional<std::string>("mirror")) {
    const auto ids = detail::split_list(*m, ',');
    if (ids.size() != 2 || ids[0] == ids[1]) {
      throw Error(ErrorCode::InvalidParam, "[scheme] mirror needs two distinct holder ids");
    }
    cfg.mirror = std::make_pair(ids[0], ids[1]);
  }

  if (auto holders = tree.get_child_optional("holders")) {
    for (const auto& [id, node] : *holders) {
      const auto fields = detail::split_list(node.data(), ',');
      if (fields.empty() || fields.size() > 2) {
        throw Error(ErrorCode::InvalidParam, "[holders] " + id + ": expected 'work_count[, fame_weight]'");
      }
      Rightsholder h;
      h.holder_id = id;
      h.work_count = parse_count(fields[0], "[holders] " + id);
      if (fields.size() == 2) {
        auto fame = detail::parse_number<double>(fields[1]);
        if (!fame) throw Error(ErrorCode::InvalidParam, "[holders] " + id + ": bad fame weight '" + fields[1] + "'");
        h.fame_weight = *fame;
      }
      cfg.holders.push_back(std::move(h));
    }
  }
  if (auto holdings = tree.get_child_optional("holdings")) {
    for (const auto& [id, node] : *holdings) {
      auto it = std::find_if(cfg.holders.begin(), cfg.holders.end(), [&](const auto& h) { return h.holder_id == id; });
      if (it == cfg.holders.end()) throw Error(ErrorCode::InvalidParam, "[holdings] " + id + ": not a listed holder");
      it->holdings = detail::split_words(node.data());
    }
  }
  if (auto outputs = tree.get_child_optional("outputs")) {
    for (const auto& [id, node] : *outputs) {
      const auto fields = detail::split_list(node.data(), ',');
      if (fields.empty() || fields.size() > 2) {
        throw Error(ErrorCode::InvalidParam, "[outputs] " + id + ": expected 'revenue_cents[, condition_tag]'");
      }
      OutputRecord y;
      y.output_id = id;
      y.revenue = Cents(parse_count(fields[0], "[outputs] " + id));
      if (fields.size() == 2) y.condition_tag = fields[1];
      cfg.outputs.push_back(std::move(y));
    }
  }
  if (auto params = tree.get_child_optional("params")) {
    for (const auto& [key, node] : *params) {
      if (!detail::known_params().contains(key)) throw Error(ErrorCode::InvalidParam, "unknown [params] key '" + key + "'");
      cfg.params[key] = node.data();
    }
  }
  if (cfg.has("model_id")) {
    for (auto& y : cfg.outputs) y.model_id = cfg.raw("model_id");
  }
  for (auto& h : cfg.holders) h.validate();
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  return parse_scenario(in, std::filesystem::path(path).parent_path());
}

inline WindfallParams windfall_params(const ScenarioConfig& c) {
  WindfallParams p;
  p.gdp = c.cents("gdp_cents");
  p.ai_profit_fraction = c.fraction("ai_profit_fraction");
  if (c.has("windfall_brackets")) {
    // "lower:upper:rate; ..." as fractions of GDP
    for (const auto& item : detail::split_list(c.raw("windfall_brackets"), ';')) {
      const auto parts = detail::split_list(item, ':');
      if (parts.size() != 3) throw Error(ErrorCode::InvalidParam, "windfall_brackets: expected lower:upper:rate");
      p.brackets.push_back({Fraction::parse(parts[0]), Fraction::parse(parts[1]), Fraction::parse(parts[2])});
    }
  } else {
    p.clause_rate = c.fraction("clause_rate");
  }
  if (c.has("displaced")) {
    p.displaced = c.count("displaced");
  } else {
    p.workforce = c.count("workforce");
    p.displacement_rate = c.fraction("displacement_rate");
  }
  return p;
}

inline PayToTrainParams pay_to_train_params(const ScenarioConfig& c) {
  return {c.cents("total_revenue_cents"), c.fraction("ai_revenue_fraction"), c.fraction("d_c"), c.count("dataset_size")};
}

inline AIRoyaltyParams ai_royalty_params(const ScenarioConfig& c) {
  AIRoyaltyParams p;
  if (c.has("ai_revenue_cents")) {
    p.ai_revenue = c.cents("ai_revenue_cents");
  } else {
    const wide_int scaled = detail::checked_mul(c.cents("total_revenue_cents").value(), c.fraction("ai_revenue_fraction").ppb());
    p.ai_revenue = detail::to_cents(div_round(scaled, detail::kPpb));
  }
  p.training_pool_fraction = c.fraction_or("training_pool_fraction", p.training_pool_fraction);
  p.dedicated_pool_fraction = c.fraction_or("dedicated_pool_fraction", p.dedicated_pool_fraction);
  p.d_c = c.fraction("d_c");
  p.dedicated_budget = c.cents("dedicated_budget_cents");
  return p;
}

inline InfluenceMatrix scenario_influence(const ScenarioConfig& c) {
  const std::filesystem::path rel = c.raw("influence_csv");
  const auto path = rel.is_absolute() ? rel : c.base_dir / rel;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  return read_influence_csv(in);
}

inline CompensationReport run_scheme(const ScenarioConfig& c, Scheme scheme, const std::vector<Rightsholder>& holders) {
  switch (scheme) {
    case Scheme::Windfall: return windfall(windfall_params(c), holders);
    case Scheme::PayToTrain: return pay_to_train(pay_to_train_params(c), holders);
    case Scheme::PayToTrainAndInspire:
      return pay_to_train_and_inspire(c.outputs, scenario_influence(c), holders, c.cents("payout_pool_cents"));
    case Scheme::AIRoyalties: return ai_royalties(ai_royalty_params(c), holders, c.count("dataset_size"));
  }
  throw Error(ErrorCode::UnknownScheme, "unhandled scheme");
}

/// One report per configured scheme, plus the fame-swapped royalty row when
/// `mirror` is set.
inline std::vector<CompensationReport> run_scenario(const ScenarioConfig& c) {
  std::vector<CompensationReport> rows;
  for (auto scheme : c.schemes) {
    rows.push_back(run_scheme(c, scheme, c.holders));
    if (scheme != Scheme::AIRoyalties || !c.mirror) continue;
    auto swapped = c.holders;
    auto find = [&](const std::string& id) {
      auto it = std::find_if(swapped.begin(), swapped.end(), [&](const auto& h) { return h.holder_id == id; });
      if (it == swapped.end()) throw Error(ErrorCode::InvalidParam, "mirror names unknown holder '" + id + "'");
      return it;
    };
    std::swap(find(c.mirror->first)->fame_weight, find(c.mirror->second)->fame_weight);
    auto row = run_scheme(c, scheme, swapped);
    row.label += "[" + c.mirror->first + "<->" + c.mirror->second + "]";
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Long form: one line per holder component plus a total line.
inline void write_report_csv(std::ostream& out, const std::vector<CompensationReport>& reports) {
  out << "scheme,holder_id,component,amount_usd\n";
  for (const auto& r : reports) {
    for (const auto& l : r.lines) {
      for (const auto& [name, v] : l.components) {
        out << r.label << ',' << l.holder_id << ',' << name << ',' << v.whole_dollars() << '\n';
      }
      out << r.label << ',' << l.holder_id << ",total," << l.total.whole_dollars() << '\n';
    }
  }
}

/// Pivot: schemes down, holders across, annual totals in whole dollars.
inline void write_report_table(std::ostream& out, const std::vector<CompensationReport>& reports) {
  if (reports.empty()) return;
  std::vector<std::string> holders;
  for (const auto& l : reports.front().lines) holders.push_back(l.holder_id);

  std::vector<std::vector<std::string>> cells;
  cells.push_back({"scheme"});
  for (const auto& h : holders) cells.back().push_back(h);
  for (const auto& r : reports) {
    cells.push_back({r.label});
    for (const auto& h : holders) cells.back().push_back(format_dollars(r.amount(h)) + "/yr");
  }
  std::vector<std::size_t> width(holders.size() + 1, 0);
  for (const auto& row : cells) {
    for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  }
  for (const auto& row : cells) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k == 0) {
        out << std::left << std::setw(static_cast<int>(width[k])) << row[k];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[k])) << row[k];
      }
    }
    out << '\n';
  }
}

}  // namespace airoyalties
