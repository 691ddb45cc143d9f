#pragma once

#include <array>
#include <cstdio>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "airoyalties/cli.hpp"

namespace testing_support {

inline std::string data(const std::string& name) { return std::string(AIROYALTIES_DATA_DIR) + "/" + name; }

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

/// Runs the CLI in-process.
inline CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "airoyalties");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = airoyalties::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Runs the built executable and captures stdout.
inline std::string run_binary(const std::string& args) {
  const std::string cmd = std::string(AIROYALTIES_CLI) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace testing_support
