#pragma once

// The similarity metric between two works: cosine similarity of their
// embedding vectors. Larger means MORE similar (1 = same direction), so every
// threshold downstream reads "above the bound" as "closer to the original".

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "airoyalties/embedstore.hpp"
#include "airoyalties/error.hpp"

namespace airoyalties {

inline std::vector<double> unit_normalize(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm == 0.0 || !std::isfinite(norm)) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

/// Cosine similarity of two raw vectors, clamped to [-1, 1].
/// Both inputs are normalized first; stored norms are not trusted.
inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  const auto ua = unit_normalize(a);
  const auto ub = unit_normalize(b);
  // Fixed summation order in both directions keeps the result exactly symmetric.
  double dot = 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i) dot += ua[i] * ub[i];
  if (dot > 1.0) dot = 1.0;
  if (dot < -1.0) dot = -1.0;
  return dot;
}

inline double clip_metric(const EmbeddingRecord& a, const EmbeddingRecord& b) {
  if (a.model_id != b.model_id) {
    throw Error(ErrorCode::ModelMismatch, "'" + a.model_id + "' vs '" + b.model_id + "'");
  }
  if (a.dim != b.dim) {
    throw Error(ErrorCode::DimensionMismatch, a.work_id + " has dim " + std::to_string(a.dim) + ", " + b.work_id +
                                                  " has dim " + std::to_string(b.dim));
  }
  return cosine_similarity(a.vector, b.vector);
}

/// Dense symmetric matrix of pairwise metrics, row-major.
class MetricMatrix {
 public:
  explicit MetricMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

inline MetricMatrix pairwise_matrix(const EmbeddingStore& store, const std::vector<std::string>& ids) {
  std::vector<const EmbeddingRecord*> recs;
  recs.reserve(ids.size());
  for (const auto& id : ids) recs.push_back(&store.get(id));

  MetricMatrix m(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const double v = clip_metric(*recs[i], *recs[j]);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

}  // namespace airoyalties
