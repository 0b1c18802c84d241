#include "mrs/budget.hh"

#include "mrs/error.hh"

namespace mrs {

BudgetMeter::BudgetMeter(const Budget& budget, std::string what) : budget_(budget), what_(std::move(what)) {
  if (budget_.timeout.count() > 0) {
    has_deadline_ = true;
    deadline_ = std::chrono::steady_clock::now() + budget_.timeout;
  }
}

void BudgetMeter::exhausted(const char* which) const {
  throw BudgetExhausted(what_ + ": " + which + " reached after " + std::to_string(nodes_) + " nodes");
}

}  // namespace mrs
