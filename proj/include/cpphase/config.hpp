#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpphase/models.hpp"

namespace cpphase {

// Flat model parameters as they arrive from the command line or a config
// file. Model names: lrp, path (lrp with phi = 1{k=1}), gilbert, wdrcm,
// boolean-lattice, clique-chain.
struct ModelArgs {
  std::string model = "lrp";
  double delta = 2.5;
  std::optional<double> gamma;  // wdrcm: 0.4, boolean-lattice: 0.75
  double mu = 0.1;
  double alpha = 2.0;           // gilbert radius tail, clique-size tail
  int dimension = 2;
  bool augment = false;
  std::string phi_table;        // comma-separated phi(1), phi(2), ...
  std::string points = "unit";  // unit | renewal | poisson
  double radius_scale = 0.25;
  std::string radius = "pareto";  // pareto | constant
  double radius_value = 0.5;
  std::string clique = "constant";  // constant | pareto
  int clique_size = 1;
};

ModelSpec build_model(const ModelArgs& args);
bool is_lattice(const ModelArgs& args);

nlohmann::json model_json(const ModelArgs& args);

// "a,b,c" or "lo:hi:step" (inclusive of hi up to rounding).
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace cpphase
