#include "cpphase/config.hpp"

#include <cmath>
#include <sstream>

#include "cpphase/error.hpp"

namespace cpphase {

namespace {

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw SpecError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw SpecError("not a number: '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

PointProcess make_points(const ModelArgs& a) {
  PointProcess p;
  if (a.points == "unit") p.kind = PointProcess::Kind::unit_lattice;
  else if (a.points == "renewal") p.kind = PointProcess::Kind::renewal;
  else if (a.points == "poisson") p.kind = PointProcess::Kind::poisson;
  else throw SpecError("unknown point process '" + a.points + "'");
  return p;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_real(trim(item)));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
      throw SpecError("range must be lo:hi:step with step > 0 and hi >= lo");
    const auto n = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item)));
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_real_list(text)) {
    if (!(v >= 0.0) || v != std::floor(v)) throw SpecError("expected non-negative integers in '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

bool is_lattice(const ModelArgs& args) { return args.model == "boolean-lattice"; }

ModelSpec build_model(const ModelArgs& a) {
  ModelSpec spec;
  if (a.model == "lrp") {
    LrpSpec s;
    s.augment = a.augment;
    if (!a.phi_table.empty()) s.phi = ConnectionFunction::from_table(parse_real_list(a.phi_table), true);
    else s.phi = ConnectionFunction::power_law(a.delta);
    spec = s;
  } else if (a.model == "path") {
    LrpSpec s;
    s.phi = ConnectionFunction::from_table({1.0}, true);
    spec = s;
  } else if (a.model == "gilbert") {
    GilbertSpec s;
    s.points = make_points(a);
    if (a.radius == "pareto") {
      s.radius.kind = RadiusLaw::Kind::pareto;
      s.radius.alpha = a.alpha;
      s.radius.scale = a.radius_scale;
    } else if (a.radius == "constant") {
      s.radius.kind = RadiusLaw::Kind::constant;
      s.radius.value = a.radius_value;
    } else {
      throw SpecError("unknown radius law '" + a.radius + "'");
    }
    spec = s;
  } else if (a.model == "wdrcm") {
    WdrcmSpec s;
    s.gamma = a.gamma.value_or(0.4);
    s.mu = a.mu;
    s.points = make_points(a);
    s.kernel = WdrcmKernel::product(s.gamma);
    spec = s;
  } else if (a.model == "boolean-lattice") {
    BooleanLatticeSpec s;
    s.dimension = a.dimension;
    s.gamma = a.gamma.value_or(0.75);
    spec = s;
  } else if (a.model == "clique-chain") {
    CliqueChainSpec s;
    if (a.clique == "constant") {
      s.size.kind = CliqueSizeLaw::Kind::constant;
      s.size.value = a.clique_size;
    } else if (a.clique == "pareto") {
      s.size.kind = CliqueSizeLaw::Kind::pareto;
      s.size.alpha = a.alpha;
    } else {
      throw SpecError("unknown clique-size law '" + a.clique + "'");
    }
    spec = s;
  } else {
    throw SpecError("unknown model '" + a.model + "'");
  }
  validate(spec);
  return spec;
}

nlohmann::json model_json(const ModelArgs& a) {
  nlohmann::json j;
  j["model"] = a.model;
  if (a.model == "lrp") {
    if (a.phi_table.empty()) j["delta"] = a.delta;
    else j["phi_table"] = parse_real_list(a.phi_table);
    j["augment"] = a.augment;
  } else if (a.model == "gilbert") {
    j["points"] = a.points;
    j["radius"] = a.radius;
    if (a.radius == "pareto") {
      j["alpha"] = a.alpha;
      j["radius_scale"] = a.radius_scale;
    } else {
      j["radius_value"] = a.radius_value;
    }
  } else if (a.model == "wdrcm") {
    j["gamma"] = a.gamma.value_or(0.4);
    j["mu"] = a.mu;
    j["points"] = a.points;
    j["kernel"] = "product";
  } else if (a.model == "boolean-lattice") {
    j["dimension"] = a.dimension;
    j["gamma"] = a.gamma.value_or(0.75);
  } else if (a.model == "clique-chain") {
    j["clique"] = a.clique;
    if (a.clique == "pareto") j["alpha"] = a.alpha;
    else j["clique_size"] = a.clique_size;
  }
  return j;
}

}  // namespace cpphase
