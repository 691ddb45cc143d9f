#pragma once

// Line-delimited embedding records shared with the extractor:
//   {"work_id": "...", "model_id": "...", "dim": 512, "vector": [...]}
// One record per line, unknown keys ignored, blank lines skipped.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "airoyalties/error.hpp"

namespace airoyalties {

struct EmbeddingRecord {
  std::string work_id;
  std::string model_id;
  std::size_t dim = 0;
  std::vector<double> vector;

  bool operator==(const EmbeddingRecord&) const = default;
};

/// Checks the per-record invariants (nonempty id, dim == vector length, finite components).
inline void validate_record(const EmbeddingRecord& r, const std::string& where) {
  if (r.work_id.empty()) throw Error(ErrorCode::MalformedRecord, where + ": empty work_id");
  if (r.dim == 0) throw Error(ErrorCode::MalformedRecord, where + ": dim must be positive");
  if (r.vector.size() != r.dim) {
    throw Error(ErrorCode::MalformedRecord, where + ": vector has " + std::to_string(r.vector.size()) +
                                                " components, dim says " + std::to_string(r.dim));
  }
  for (double x : r.vector) {
    if (!std::isfinite(x)) throw Error(ErrorCode::MalformedRecord, where + ": non-finite component");
  }
}

class EmbeddingStore {
 public:
  /// Adds a record, enforcing the single model/dim and unique id invariants.
  void add(EmbeddingRecord record) {
    validate_record(record, "work '" + record.work_id + "'");
    if (!records_.empty()) {
      if (record.model_id != model_id_) {
        throw Error(ErrorCode::ModelMismatch, "work '" + record.work_id + "' has model '" + record.model_id +
                                                  "', store holds '" + model_id_ + "'");
      }
      if (record.dim != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "work '" + record.work_id + "' has dim " +
                                                      std::to_string(record.dim) + ", store holds " +
                                                      std::to_string(dim_));
      }
    } else {
      model_id_ = record.model_id;
      dim_ = record.dim;
    }
    if (index_.contains(record.work_id)) throw Error(ErrorCode::DuplicateWorkId, record.work_id);
    index_.emplace(record.work_id, records_.size());
    records_.push_back(std::move(record));
  }

  const EmbeddingRecord& get(const std::string& work_id) const {
    auto it = index_.find(work_id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownWorkId, "'" + work_id + "'");
    return records_[it->second];
  }

  bool contains(const std::string& work_id) const { return index_.contains(work_id); }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::string& model_id() const { return model_id_; }
  std::size_t dim() const { return dim_; }
  /// Records in file order.
  const std::vector<EmbeddingRecord>& records() const { return records_; }

 private:
  std::vector<EmbeddingRecord> records_;
  std::map<std::string, std::size_t> index_;
  std::string model_id_;
  std::size_t dim_ = 0;
};

/// Parses one line. `line_no` is 1-based and only used for messages.
inline EmbeddingRecord parse_record(const std::string& line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, where + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedRecord, where + ": not an object");
  for (const char* key : {"work_id", "model_id", "dim", "vector"}) {
    if (!j.contains(key)) throw Error(ErrorCode::MalformedRecord, where + ": missing key '" + key + "'");
  }
  const auto& id = j["work_id"];
  const auto& model = j["model_id"];
  const auto& dim = j["dim"];
  const auto& vec = j["vector"];
  if (!id.is_string() || !model.is_string()) {
    throw Error(ErrorCode::MalformedRecord, where + ": work_id and model_id must be strings");
  }
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
    throw Error(ErrorCode::MalformedRecord, where + ": dim must be a positive integer");
  }
  if (!vec.is_array()) throw Error(ErrorCode::MalformedRecord, where + ": vector must be an array");

  EmbeddingRecord r;
  r.work_id = id.get<std::string>();
  r.model_id = model.get<std::string>();
  r.dim = dim.get<std::size_t>();
  r.vector.reserve(vec.size());
  for (const auto& x : vec) {
    if (!x.is_number()) throw Error(ErrorCode::MalformedRecord, where + ": non-numeric vector component");
    r.vector.push_back(x.get<double>());
  }
  validate_record(r, where);
  return r;
}

inline EmbeddingStore read_store(std::istream& in) {
  EmbeddingStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto record = parse_record(line, line_no);
    try {
      store.add(std::move(record));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return store;
}

inline EmbeddingStore load_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  return read_store(in);
}

/// Doubles are emitted with round-trip precision, so reloading is exact.
inline void write_store(std::ostream& out, const EmbeddingStore& store) {
  for (const auto& r : store.records()) {
    nlohmann::json j;
    j["work_id"] = r.work_id;
    j["model_id"] = r.model_id;
    j["dim"] = r.dim;
    j["vector"] = r.vector;
    out << j.dump() << '\n';
  }
}

}  // namespace airoyalties
