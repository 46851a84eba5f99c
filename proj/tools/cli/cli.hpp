#pragma once

// gzavg command line front-end. Everything except main() lives here so the
// tests can drive subcommands in-process.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "gzavg/arith.hpp"

namespace gzavg::cli {

enum class Command { ClassGroup, Kernel, VerifyAsymptotics, SelftestOldforms, Certify, EffectiveBound };
enum class Format { Csv, Json };
enum class LevelArg { One, P, P2 };

struct Range {
  i64 lo = 1;
  i64 hi = 1;
};

struct RunConfig {
  Command command = Command::ClassGroup;
  int k = 2;
  i64 D = -7;
  std::optional<i64> p;
  std::optional<Range> primes;
  LevelArg level = LevelArg::P2;
  std::size_t class_index = 0;
  Range m{1, 10};
  double tail_tol = 1e-8;
  double relative_tail_tol = 0.01;  // verify-asymptotics only
  Format format = Format::Csv;
  std::optional<std::string> output;
  std::optional<std::string> eigenvalues;
  int draws = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;  // throws ConfigError
};

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitDomain = 5;

// GZAVG_WORKERS if set, else the hardware concurrency (at least 1).
unsigned default_workers();

// Throws gzavg::Error(ConfigError) on bad input; returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out);

Range parse_range(const std::string& text);

struct EigenvalueRow {
  i64 level = 1;
  int weight = 2;  // 2k
  i64 p = 2;
  double a_p = 0.0;
  std::size_t line = 0;
  bool ramanujan_violation = false;
};

struct EigenvalueTable {
  std::vector<EigenvalueRow> rows;
};

// Header `level,weight,p,a_p`, then rows separated by commas and/or
// whitespace. Throws ParseError with the offending line number.
EigenvalueTable ingest_eigenvalues(const std::string& path);
EigenvalueTable parse_eigenvalues(std::istream& in);

using Cell = std::variant<std::monostate, i64, double, std::string, bool>;

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
  bool informational = false;  // reported, does not affect the exit status
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, Cell>> config;

  bool all_passed() const;
};

std::string format_double(double x);  // 17 significant digits
std::string to_csv(const Table& t);
std::string to_json(const Table& t);

Table build_table(const RunConfig& config);

// Writes the table and returns the exit status; maps exceptions to codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Runs fn(i) for i in [0, n) on up to `workers` threads; results in index
// order. The exception from the lowest failing index is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned workers, F&& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace gzavg::cli
