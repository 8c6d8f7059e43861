#pragma once

#include "trop/coupling.hpp"
#include "trop/diagram.hpp"
#include "trop/homogeneous.hpp"
#include "trop/mixture.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace trop {

using Json = nlohmann::ordered_json;

/// Run-wide knobs shared by the CLI subcommands. TROPICAL_CAP in the
/// environment overrides the default coupling cap.
struct RunConfig {
  CouplingMode mode = CouplingMode::automatic;
  std::size_t coupling_cap = 30;
  unsigned n_max = 4;
  double tolerance = 1e-9;
  std::string format = "json";  // json | csv
  std::uint64_t seed = 0;       // reserved for sampling tooling

  void validate() const;
  static RunConfig from_env();
};

Json rat_to_json(const Rat& value);
Rat rat_from_json(const Json& value);

/// Diagram document: {"category": {objects, arrows}, "spaces": {...},
/// "maps": {"src->dst": [[a,b],...]}}. Rational masses serialize as
/// integer num/den pairs (decimal strings once they outgrow int64), so
/// round-trips are bit-exact.
Json diagram_to_json(const Diagram& diagram);
Diagram diagram_from_json(const Json& doc);

std::string serialize_diagram(const Diagram& diagram);
Diagram parse_diagram(const std::string& text);

/// Family document: {"theta": [atoms], "members": {label: diagram}}.
DiagramFamily family_from_json(const Json& doc);

/// Fan document: {"top", "left", "right", "left_legs": {obj: pairs},
/// "right_legs": {obj: pairs}}.
Json fan_to_json(const TwoFan& fan);
TwoFan fan_from_json(const Json& doc);

/// Homogeneous-construction document: {"category", "degree",
/// "group": [cycles], "subgroups": {obj: [cycles]}}.
struct HomogeneousInput {
  PermGroup group;
  SubgroupDiagram subgroups;
};
HomogeneousInput homogeneous_from_json(const Json& doc);

Json coupling_to_json(const CouplingMatrix& coupling);

}  // namespace trop
