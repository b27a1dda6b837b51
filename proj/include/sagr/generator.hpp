#pragma once

#include <cstdint>

#include "sagr/instance.hpp"

namespace sagr {

struct GeneratorParams {
  int flights = 8;
  int aircraft = 3;
  int airports = 3;
  int gate_types = 1;
  bool disruption = true;
  bool maintenance = true;
  std::uint64_t seed = 1;
};

// Random desk-scale instance whose planned schedule is valid. Flights of one
// aircraft form a chain; the flight total is spread over the aircraft.
Instance generate_instance(const GeneratorParams& p);

// Parameters drawn from the desk-scale ranges (4-12 flights, 2-4 aircraft,
// 2-5 airports, 1-2 gate types) for run `index` of a family.
GeneratorParams desk_params(std::uint64_t seed, int index);

// Hub-and-spoke family: five or six aircraft rotate spoke -> H -> spoke, the
// hub has exactly the gates the plan needs, and a departure closure at S1
// bunches the hub arrivals.
Instance generate_hub_instance(std::uint64_t seed);

}  // namespace sagr
