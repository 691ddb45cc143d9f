#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "airoyalties/embedstore.hpp"
#include "support.hpp"

using namespace airoyalties;

namespace {

std::string line(const std::string& id, const std::string& model, std::size_t dim, double fill = 0.5) {
  nlohmann::json j;
  j["work_id"] = id;
  j["model_id"] = model;
  j["dim"] = dim;
  j["vector"] = std::vector<double>(dim, fill);
  return j.dump() + "\n";
}

ErrorCode load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_store(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvariantViolation;
}

}  // namespace

TEST(EmbedStore, LoadsValidRecords) {
  std::istringstream in(line("a", "m", 512) + line("b", "m", 512));
  const auto store = read_store(in);
  EXPECT_EQ(store.size(), 2u);
  EXPECT_EQ(store.dim(), 512u);
  EXPECT_EQ(store.model_id(), "m");
  EXPECT_EQ(store.get("b").vector.size(), 512u);
}

TEST(EmbedStore, EmptyFileIsAnEmptyStore) {
  std::istringstream in("");
  const auto store = read_store(in);
  EXPECT_TRUE(store.empty());
  EXPECT_THROW(store.get("anything"), Error);
}

TEST(EmbedStore, MixedDimensionsRejected) {
  EXPECT_EQ(load_error(line("a", "m", 512) + line("b", "m", 768)), ErrorCode::DimensionMismatch);
}

TEST(EmbedStore, MixedModelsRejected) {
  EXPECT_EQ(load_error(line("a", "m1", 4) + line("b", "m2", 4)), ErrorCode::ModelMismatch);
}

TEST(EmbedStore, DuplicateWorkIdRejected) {
  EXPECT_EQ(load_error(line("a", "m", 4) + line("a", "m", 4)), ErrorCode::DuplicateWorkId);
}

TEST(EmbedStore, MalformedRecordsReportLineNumber) {
  std::istringstream in(line("a", "m", 3) + "{not json}\n");
  try {
    read_store(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedRecord);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(load_error(R"({"work_id":"a","model_id":"m","dim":3,"vector":[1,2]})"), ErrorCode::MalformedRecord);
  EXPECT_EQ(load_error(R"({"work_id":"a","model_id":"m","dim":0,"vector":[]})"), ErrorCode::MalformedRecord);
  EXPECT_EQ(load_error(R"({"work_id":"","model_id":"m","dim":1,"vector":[1]})"), ErrorCode::MalformedRecord);
  EXPECT_EQ(load_error(R"({"model_id":"m","dim":1,"vector":[1]})"), ErrorCode::MalformedRecord);
  EXPECT_EQ(load_error(R"({"work_id":"a","model_id":"m","dim":1,"vector":["x"]})"), ErrorCode::MalformedRecord);
  EXPECT_EQ(load_error(R"({"work_id":"a","model_id":"m","dim":1,"vector":[1e999]})"), ErrorCode::MalformedRecord);
}

TEST(EmbedStore, UnknownKeysIgnored) {
  std::istringstream in(R"({"work_id":"a","model_id":"m","dim":2,"vector":[1,0],"source":"x.png"})");
  EXPECT_EQ(read_store(in).size(), 1u);
}

TEST(EmbedStore, GetUnknownIdIsAnError) {
  std::istringstream in(line("kienitz_original", "m", 2));
  const auto store = read_store(in);
  EXPECT_EQ(store.get("kienitz_original").work_id, "kienitz_original");
  try {
    store.get("absent");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownWorkId);
  }
}

TEST(EmbedStore, MissingFile) {
  try {
    load_store("/nonexistent/embeddings.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingFile);
  }
}

// Property: write -> read reproduces every component exactly, and reading the
// same bytes twice gives equal stores.
TEST(EmbedStore, RoundTripIsExact) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingStore store;
    const std::size_t dim = 1 + rng() % 64;
    for (int k = 0; k < 5; ++k) {
      store.add({"w" + std::to_string(k), "model", dim, testing_support::random_vector(rng, dim)});
    }
    std::ostringstream out;
    write_store(out, store);
    std::istringstream in1(out.str()), in2(out.str());
    const auto a = read_store(in1);
    const auto b = read_store(in2);
    ASSERT_EQ(a.records(), store.records());
    ASSERT_EQ(a.records(), b.records());
  }
}

TEST(EmbedStore, ShippedStoreLoads) {
  const auto store = load_store(testing_support::data("embeddings.jsonl"));
  EXPECT_EQ(store.size(), 34u);
  EXPECT_EQ(store.dim(), 512u);
}
