#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sagr/instance.hpp"

namespace sagr {

inline constexpr int kInstanceSchemaVersion = 1;

Instance parse_instance(std::string_view text);
std::string emit_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

struct Violation {
  std::string code;
  std::string message;
};

std::vector<Violation> validate_instance(const Instance& inst);

// Copy of `inst` with every override of inst.disruption written into the slot
// capacities. Throws RangeError for overrides outside the recovery window.
Instance apply_disruption(const Instance& inst);

}  // namespace sagr
