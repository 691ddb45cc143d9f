#pragma once

// Influence providers f(x_i; y, c): for every output y, a row of weights over
// the training items that lies on the probability simplex (entries in [0,1],
// row sum 1).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "airoyalties/embedstore.hpp"
#include "airoyalties/error.hpp"
#include "airoyalties/metric.hpp"

namespace airoyalties {

inline constexpr double kRowSumTolerance = 1e-9;

/// True when `row` is a valid influence row.
inline bool on_simplex(std::span<const double> row, double tol = kRowSumTolerance) {
  if (row.empty()) return false;
  double sum = 0.0;
  for (double w : row) {
    if (!(w >= 0.0 && w <= 1.0)) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tol;
}

struct InfluenceMatrix {
  std::vector<std::string> output_ids;
  std::vector<std::string> training_ids;
  std::vector<std::vector<double>> weights;  // weights[j][i] = f(x_i; y_j, c_j)

  void validate() const {
    if (weights.size() != output_ids.size()) {
      throw Error(ErrorCode::InfluenceOutputMismatch, std::to_string(weights.size()) + " rows for " +
                                                          std::to_string(output_ids.size()) + " outputs");
    }
    for (std::size_t j = 0; j < weights.size(); ++j) {
      if (weights[j].size() != training_ids.size()) {
        throw Error(ErrorCode::InfluenceOutputMismatch, "row for '" + output_ids[j] + "' has " +
                                                            std::to_string(weights[j].size()) + " columns");
      }
      if (!on_simplex(weights[j])) {
        throw Error(ErrorCode::InvalidParam, "row for '" + output_ids[j] + "' is not a normalized influence row");
      }
    }
  }
};

inline std::vector<double> uniform_row(std::size_t n_training) {
  if (n_training == 0) throw Error(ErrorCode::EmptyTrainingSet, "uniform influence over zero items");
  return std::vector<double>(n_training, 1.0 / static_cast<double>(n_training));
}

inline InfluenceMatrix uniform_influence(const std::vector<std::string>& output_ids,
                                         const std::vector<std::string>& training_ids) {
  InfluenceMatrix m{output_ids, training_ids, {}};
  const auto row = uniform_row(training_ids.size());
  m.weights.assign(output_ids.size(), row);
  return m;
}

/// Index-named variant: training items "x0".., outputs "y0"..
inline InfluenceMatrix uniform_influence(std::size_t n_training, std::size_t n_outputs) {
  std::vector<std::string> training, outputs;
  for (std::size_t i = 0; i < n_training; ++i) training.push_back("x" + std::to_string(i));
  for (std::size_t j = 0; j < n_outputs; ++j) outputs.push_back("y" + std::to_string(j));
  return uniform_influence(outputs, training);
}

/// Softmax of raw scores at the given temperature (max-shifted for stability).
inline std::vector<double> softmax(std::span<const double> scores, double temperature) {
  if (scores.empty()) throw Error(ErrorCode::EmptyTrainingSet, "softmax over zero items");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::InvalidParam, "temperature must be positive");
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> w(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp((scores[i] - top) / temperature);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

/// Similarity proxy: weights proportional to exp(metric(output, x_i) / temperature).
inline std::vector<double> similarity_influence(const EmbeddingRecord& output,
                                                const std::vector<EmbeddingRecord>& training, double temperature) {
  if (training.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training items for '" + output.work_id + "'");
  std::vector<double> sims;
  sims.reserve(training.size());
  for (const auto& x : training) sims.push_back(clip_metric(output, x));
  return softmax(sims, temperature);
}

/// Maps signed scores onto the simplex: shift by min(0, smallest), then divide
/// by the sum. An all-zero shifted row falls back to uniform.
inline std::vector<double> normalize_influence(std::span<const double> raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no scores to normalize");
  const double shift = std::min(0.0, *std::min_element(raw.begin(), raw.end()));
  std::vector<double> w(raw.begin(), raw.end());
  double sum = 0.0;
  for (double& x : w) {
    x -= shift;
    sum += x;
  }
  if (sum == 0.0) return uniform_row(raw.size());
  for (double& x : w) x /= sum;
  return w;
}

/// Ridge regression without intercept, plus one query point whose loss the
/// training items influence.
struct RidgeProblem {
  Eigen::MatrixXd design;   // n x d
  Eigen::VectorXd targets;  // n
  double regularizer = 1.0;
  Eigen::VectorXd query_input;  // d
  double query_target = 0.0;

  void validate() const {
    if (design.rows() < 2) throw Error(ErrorCode::InvalidParam, "ridge problem needs at least 2 training points");
    if (targets.size() != design.rows() || query_input.size() != design.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "ridge problem shapes disagree");
    }
    if (!(regularizer > 0.0) || !std::isfinite(regularizer)) {
      throw Error(ErrorCode::InvalidParam, "regularizer must be positive");
    }
    if (!design.allFinite() || !targets.allFinite() || !query_input.allFinite() || !std::isfinite(query_target)) {
      throw Error(ErrorCode::InvalidParam, "ridge problem has non-finite entries");
    }
  }
};

/// Solves (X^T X + lambda I) w = X^T y.
inline Eigen::VectorXd ridge_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda) {
  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw Error(ErrorCode::SingularSystem, "ridge normal equations not positive definite");
  }
  Eigen::VectorXd w = ldlt.solve(x.transpose() * y);
  if (!w.allFinite()) throw Error(ErrorCode::SingularSystem, "ridge solve produced non-finite weights");
  return w;
}

inline double squared_error(const Eigen::VectorXd& w, const Eigen::VectorXd& input, double target) {
  const double r = w.dot(input) - target;
  return r * r;
}

/// Leave-one-out influence by exact retraining: score_i is the query loss of
/// the model trained without item i minus the loss of the full model.
/// Positive means item i helped the query.
inline std::vector<double> loo_influence(const RidgeProblem& p) {
  p.validate();
  const auto n = p.design.rows();
  const auto d = p.design.cols();
  const double full_loss = squared_error(ridge_fit(p.design, p.targets, p.regularizer), p.query_input, p.query_target);

  std::vector<double> scores(static_cast<std::size_t>(n));
  Eigen::MatrixXd x(n - 1, d);
  Eigen::VectorXd y(n - 1);
  for (Eigen::Index drop = 0; drop < n; ++drop) {
    for (Eigen::Index r = 0, k = 0; r < n; ++r) {
      if (r == drop) continue;
      x.row(k) = p.design.row(r);
      y(k) = p.targets(r);
      ++k;
    }
    const auto w = ridge_fit(x, y, p.regularizer);
    scores[static_cast<std::size_t>(drop)] = squared_error(w, p.query_input, p.query_target) - full_loss;
  }
  return scores;
}

inline std::vector<double> loo_influence_row(const RidgeProblem& p) { return normalize_influence(loo_influence(p)); }

inline std::string format_weight(double w) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, end);
}

/// CSV: header `output_id,<training ids>`, one row per output.
inline void write_influence_csv(std::ostream& out, const InfluenceMatrix& m) {
  out << "output_id";
  for (const auto& t : m.training_ids) out << ',' << t;
  out << '\n';
  for (std::size_t j = 0; j < m.output_ids.size(); ++j) {
    out << m.output_ids[j];
    for (double w : m.weights[j]) out << ',' << format_weight(w);
    out << '\n';
  }
}

inline InfluenceMatrix read_influence_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    f.push_back(cur);
    return f;
  };
  InfluenceMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto f = split(line);
    if (!header) {
      if (f.empty() || f[0] != "output_id") {
        throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected 'output_id' header");
      }
      m.training_ids.assign(f.begin() + 1, f.end());
      header = true;
      continue;
    }
    if (f.size() != m.training_ids.size() + 1) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": wrong number of columns");
    }
    m.output_ids.push_back(f[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < f.size(); ++i) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(f[i].data(), f[i].data() + f[i].size(), v);
      if (f[i].empty() || ec != std::errc() || p != f[i].data() + f[i].size()) {
        throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": bad weight '" + f[i] + "'");
      }
      row.push_back(v);
    }
    m.weights.push_back(std::move(row));
  }
  m.validate();
  return m;
}

}  // namespace airoyalties
