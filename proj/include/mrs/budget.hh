#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace mrs {

/// Limits for a bounded search. A zero timeout means no deadline.
struct Budget {
  std::int64_t max_nodes = 200'000'000;
  std::chrono::milliseconds timeout{0};
};

/// Counts search nodes against a Budget; throws BudgetExhausted when either
/// limit is crossed.
class BudgetMeter {
 public:
  BudgetMeter(const Budget& budget, std::string what);

  void tick() {
    if (++nodes_ > budget_.max_nodes) exhausted("node limit");
    if ((nodes_ & 0xfff) == 0 && has_deadline_ && std::chrono::steady_clock::now() > deadline_) exhausted("timeout");
  }
  std::int64_t nodes() const { return nodes_; }

 private:
  [[noreturn]] void exhausted(const char* which) const;

  Budget budget_;
  std::string what_;
  std::int64_t nodes_ = 0;
  bool has_deadline_ = false;
  std::chrono::steady_clock::time_point deadline_;
};

}  // namespace mrs
