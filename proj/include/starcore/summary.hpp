#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace starcore {

// Locale-independent shortest round-trip formatting; CSV output must be
// byte-identical across runs and platforms.
std::string format_number(double v);
std::string format_number(std::uint64_t v);
std::string format_number(std::int64_t v);
std::string format_number(std::uint32_t v);
std::string format_number(int v);

constexpr int kSchemaVersion = 1;

// Per-trial CSV with a schema comment first, then the header row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return body_; }
  void write_file(const std::string& path) const;

 private:
  std::size_t columns_;
  std::string body_;
};

struct Aggregate {
  double mean = 0;
  double stderr_mean = 0;  // sample stddev / sqrt(count); 0 for count < 2
  std::uint64_t count = 0;
};

Aggregate aggregate(const std::vector<double>& xs);
nlohmann::json aggregate_json(const std::vector<double>& xs);

// fn(trial) for trial in [0, trials), on up to `jobs` threads. Results are
// kept in trial order; the lowest-trial exception is rethrown after join.
template <typename Fn>
auto run_trials(std::uint32_t trials, int jobs, Fn&& fn)
    -> std::vector<decltype(fn(std::uint32_t{}))> {
  using T = decltype(fn(std::uint32_t{}));
  std::vector<std::optional<T>> slots(trials);
  std::vector<std::exception_ptr> errors(trials);
  unsigned workers = jobs < 1 ? 1u : static_cast<unsigned>(jobs);
  if (workers > trials) workers = trials == 0 ? 1u : trials;
  std::atomic<std::uint32_t> next{0};
  auto work = [&] {
    for (;;) {
      std::uint32_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        slots[t].emplace(fn(t));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::uint32_t t = 0; t < trials; ++t)
    if (errors[t]) std::rethrow_exception(errors[t]);
  std::vector<T> out;
  out.reserve(trials);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace starcore
