#include <CLI11.hpp>

#include <iostream>

#include "sagr/errors.hpp"
#include "sagr/generator.hpp"
#include "sagr/instance_io.hpp"

using namespace sagr;

int main(int argc, char** argv) {
  CLI::App app{"Generate a recovery instance"};
  std::string family = "desk", out;
  std::uint64_t seed = 1;
  int index = -1;
  GeneratorParams p;
  bool no_disruption = false, no_maintenance = false;
  app.add_option("--family", family, "desk or hub")->check(CLI::IsMember({"desk", "hub"}));
  app.add_option("--seed", seed, "random seed");
  app.add_option("--index", index, "draw desk sizes for run INDEX of the seed's family");
  app.add_option("--flights", p.flights)->check(CLI::Range(1, 64));
  app.add_option("--aircraft", p.aircraft)->check(CLI::Range(1, 32));
  app.add_option("--airports", p.airports)->check(CLI::Range(2, 16));
  app.add_option("--gate-types", p.gate_types)->check(CLI::Range(1, 2));
  app.add_flag("--no-disruption", no_disruption);
  app.add_flag("--no-maintenance", no_maintenance);
  app.add_option("--out", out, "output file; stdout when absent");
  CLI11_PARSE(app, argc, argv);

  Instance inst;
  if (family == "hub") {
    inst = generate_hub_instance(seed);
  } else {
    if (index >= 0) {
      p = desk_params(seed, index);
    } else {
      p.seed = seed;
    }
    p.disruption = !no_disruption;
    p.maintenance = !no_maintenance;
    inst = generate_instance(p);
  }
  try {
    if (out.empty())
      std::cout << emit_instance(inst);
    else
      save_instance(inst, out);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 4;
  }
  return 0;
}
