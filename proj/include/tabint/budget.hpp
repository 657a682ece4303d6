#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tabint {

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration budgets. `valuations` caps every truth-table sweep,
// `model_bits` caps |sigma|*|W| in model enumeration, the remaining fields
// cap the cover/encoding enumerations.
struct Budgets {
  uint64_t valuations = uint64_t{1} << 20;
  uint64_t model_bits = 24;
  uint64_t cover_trees = 1u << 20;
  uint64_t abstract_models = 1u << 20;

  static Budgets from_env() {
    Budgets b;
    if (const char* s = std::getenv("TABINT_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(s, &end, 10);
      if (end != s && v > 0) b.valuations = v;
    }
    return b;
  }
};

inline const Budgets& default_budgets() {
  static Budgets b = Budgets::from_env();
  return b;
}

}  // namespace tabint
