#include "trop/io.hpp"

#include "trop/error.hpp"

#include <cstdlib>
#include <limits>

namespace trop {

void RunConfig::validate() const {
  if (coupling_cap < 1)
    fail(Errc::invalid_argument, "coupling cap must be positive");
  if (!(tolerance > 0.0) || tolerance > 1e-3)
    fail(Errc::invalid_argument, "tolerance must lie in (0, 1e-3]");
  if (format != "json" && format != "csv")
    fail(Errc::invalid_argument, "format must be json or csv");
}

RunConfig RunConfig::from_env() {
  RunConfig config;
  if (const char* cap = std::getenv("TROPICAL_CAP")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(cap, &end, 10);
    if (end == cap || *end != '\0' || value < 1)
      fail(Errc::invalid_argument, "TROPICAL_CAP must be a positive integer");
    config.coupling_cap = value;
  }
  return config;
}

Json rat_to_json(const Rat& value) {
  Json out;
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  auto encode = [&](const BigInt& v) -> Json {
    if (v >= lo && v <= hi) return v.convert_to<std::int64_t>();
    return v.str();
  };
  out["num"] = encode(num);
  out["den"] = encode(den);
  return out;
}

namespace {

BigInt bigint_from_json(const Json& value, const char* what) {
  if (value.is_number_integer()) return BigInt(value.get<std::int64_t>());
  if (value.is_string()) {
    const std::string text = value.get<std::string>();
    try {
      return BigInt(text);
    } catch (const std::exception&) {
      fail(Errc::parse_error, std::string("malformed ") + what + ": " + text);
    }
  }
  fail(Errc::parse_error, std::string(what) + " must be an integer or string");
}

const Json& expect(const Json& doc, const char* key, const char* where) {
  auto it = doc.find(key);
  if (it == doc.end())
    fail(Errc::parse_error,
         std::string("missing '") + key + "' in " + where);
  return *it;
}

}  // namespace

Rat rat_from_json(const Json& value) {
  if (!value.is_object())
    fail(Errc::parse_error, "rational must be an object with num/den");
  const BigInt num = bigint_from_json(expect(value, "num", "rational"), "num");
  const BigInt den = bigint_from_json(expect(value, "den", "rational"), "den");
  if (den == 0) fail(Errc::parse_error, "zero denominator");
  return Rat(num, den);
}

Json diagram_to_json(const Diagram& diagram) {
  const IndexingCategory& shape = diagram.shape();
  Json category;
  category["objects"] = shape.object_names();
  Json arrows = Json::array();
  for (const auto& [src, dst] : shape.covering_arrows())
    arrows.push_back({shape.object_name(src), shape.object_name(dst)});
  category["arrows"] = std::move(arrows);

  Json spaces = Json::object();
  for (std::size_t i = 0; i < shape.size(); ++i) {
    Json atoms = Json::array();
    for (const Atom& a : diagram.space(i).atoms()) {
      Json atom = rat_to_json(a.mass);
      atom["label"] = a.label;
      // Emit label first for readability.
      Json ordered;
      ordered["label"] = atom["label"];
      ordered["num"] = atom["num"];
      ordered["den"] = atom["den"];
      atoms.push_back(std::move(ordered));
    }
    spaces[shape.object_name(i)] = std::move(atoms);
  }

  Json maps = Json::object();
  for (const auto& [src, dst] : shape.covering_arrows()) {
    Json pairs = Json::array();
    const auto& map = diagram.atom_map(src, dst);
    for (std::size_t a = 0; a < map.size(); ++a)
      pairs.push_back({diagram.space(src).atom(a).label,
                       diagram.space(dst).atom(map[a]).label});
    maps[shape.object_name(src) + "->" + shape.object_name(dst)] =
        std::move(pairs);
  }

  Json doc;
  doc["category"] = std::move(category);
  doc["spaces"] = std::move(spaces);
  doc["maps"] = std::move(maps);
  return doc;
}

namespace {

IndexingCategory category_from_json(const Json& doc) {
  if (!doc.is_object())
    fail(Errc::parse_error, "category must be an object");
  const Json& objects = expect(doc, "objects", "category");
  if (!objects.is_array() )
    fail(Errc::parse_error, "category.objects must be an array");
  std::vector<std::string> names;
  for (const Json& name : objects) {
    if (!name.is_string())
      fail(Errc::parse_error, "object names must be strings");
    names.push_back(name.get<std::string>());
  }
  const Json& arrows = expect(doc, "arrows", "category");
  if (!arrows.is_array())
    fail(Errc::parse_error, "category.arrows must be an array");
  std::vector<std::pair<std::string, std::string>> arrow_list;
  for (const Json& arrow : arrows) {
    if (!arrow.is_array() || arrow.size() != 2 || !arrow[0].is_string() ||
        !arrow[1].is_string())
      fail(Errc::parse_error, "arrows must be [src, dst] string pairs");
    arrow_list.emplace_back(arrow[0].get<std::string>(),
                            arrow[1].get<std::string>());
  }
  return IndexingCategory::validate(std::move(names), arrow_list);
}

ProbSpace space_from_json(const Json& atoms, const std::string& object) {
  if (!atoms.is_array() || atoms.empty())
    fail(Errc::parse_error,
         "spaces." + object + " must be a non-empty atom array");
  std::vector<Atom> list;
  for (const Json& atom : atoms) {
    const Json& label = expect(atom, "label", ("spaces." + object).c_str());
    if (!label.is_string())
      fail(Errc::parse_error, "atom labels must be strings");
    list.push_back({label.get<std::string>(), rat_from_json(atom)});
  }
  try {
    return ProbSpace(std::move(list));
  } catch (const Error& e) {
    fail(e.code(), std::string(e.what()) + " (object " + object + ")");
  }
}

Diagram::LabelPairs pairs_from_json(const Json& pairs, const std::string& key) {
  if (!pairs.is_array())
    fail(Errc::parse_error, "maps." + key + " must be an array of pairs");
  Diagram::LabelPairs out;
  for (const Json& pair : pairs) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
        !pair[1].is_string())
      fail(Errc::parse_error,
           "maps." + key + " entries must be [source, target] label pairs");
    out.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  return out;
}

}  // namespace

Diagram diagram_from_json(const Json& doc) {
  if (!doc.is_object()) fail(Errc::parse_error, "diagram must be an object");
  IndexingCategory shape = category_from_json(expect(doc, "category", "diagram"));

  const Json& spaces_doc = expect(doc, "spaces", "diagram");
  std::vector<ProbSpace> spaces;
  spaces.reserve(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const std::string& name = shape.object_name(i);
    auto it = spaces_doc.find(name);
    if (it == spaces_doc.end())
      fail(Errc::parse_error, "missing space for object '" + name + "'");
    spaces.push_back(space_from_json(*it, name));
  }

  const Json& maps_doc = expect(doc, "maps", "diagram");
  std::map<std::pair<std::string, std::string>, Diagram::LabelPairs> maps;
  for (auto it = maps_doc.begin(); it != maps_doc.end(); ++it) {
    const std::string& key = it.key();
    const auto sep = key.find("->");
    if (sep == std::string::npos)
      fail(Errc::parse_error, "map key '" + key + "' is not 'src->dst'");
    maps.emplace(std::make_pair(key.substr(0, sep), key.substr(sep + 2)),
                 pairs_from_json(it.value(), key));
  }
  return Diagram::build(std::move(shape), std::move(spaces), maps);
}

std::string serialize_diagram(const Diagram& diagram) {
  return diagram_to_json(diagram).dump(2) + "\n";
}

Diagram parse_diagram(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  return diagram_from_json(doc);
}

DiagramFamily family_from_json(const Json& doc) {
  if (!doc.is_object()) fail(Errc::parse_error, "family must be an object");
  DiagramFamily family{space_from_json(expect(doc, "theta", "family"), "theta"),
                       {}};
  const Json& members = expect(doc, "members", "family");
  if (!members.is_object())
    fail(Errc::parse_error, "family.members must map labels to diagrams");
  family.members.reserve(family.parameter.size());
  for (std::size_t t = 0; t < family.parameter.size(); ++t) {
    const std::string& label = family.parameter.atom(t).label;
    auto it = members.find(label);
    if (it == members.end())
      fail(Errc::parse_error, "missing member for parameter atom '" + label + "'");
    family.members.push_back(diagram_from_json(*it));
  }
  return family;
}

Json fan_to_json(const TwoFan& fan) {
  Json doc;
  doc["top"] = diagram_to_json(fan.top());
  doc["left"] = diagram_to_json(fan.left());
  doc["right"] = diagram_to_json(fan.right());
  auto legs_to_json = [&](auto leg_of, const Diagram& foot) {
    Json legs = Json::object();
    for (std::size_t i = 0; i < fan.top().size(); ++i) {
      Json pairs = Json::array();
      const auto& leg = leg_of(i);
      for (std::size_t a = 0; a < leg.size(); ++a)
        pairs.push_back({fan.top().space(i).atom(a).label,
                         foot.space(i).atom(leg[a]).label});
      legs[fan.top().shape().object_name(i)] = std::move(pairs);
    }
    return legs;
  };
  doc["left_legs"] = legs_to_json(
      [&](std::size_t i) -> const std::vector<std::size_t>& {
        return fan.left_leg(i);
      },
      fan.left());
  doc["right_legs"] = legs_to_json(
      [&](std::size_t i) -> const std::vector<std::size_t>& {
        return fan.right_leg(i);
      },
      fan.right());
  return doc;
}

TwoFan fan_from_json(const Json& doc) {
  if (!doc.is_object()) fail(Errc::parse_error, "fan must be an object");
  Diagram top = diagram_from_json(expect(doc, "top", "fan"));
  Diagram left = diagram_from_json(expect(doc, "left", "fan"));
  Diagram right = diagram_from_json(expect(doc, "right", "fan"));

  auto legs_from_json = [&](const Json& legs, const Diagram& foot) {
    std::vector<std::vector<std::size_t>> out(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) {
      const std::string& name = top.shape().object_name(i);
      auto it = legs.find(name);
      if (it == legs.end())
        fail(Errc::parse_error, "missing leg for object '" + name + "'");
      const Diagram::LabelPairs pairs = pairs_from_json(*it, name);
      std::vector<std::size_t> leg(top.space(i).size(), top.space(i).size());
      std::vector<bool> assigned(top.space(i).size(), false);
      for (const auto& [a, b] : pairs) {
        auto ai = top.space(i).index_of(a);
        auto bi = foot.space(i).index_of(b);
        if (!ai || !bi)
          fail(Errc::parse_error,
               "unknown atom in leg at object '" + name + "'");
        if (assigned[*ai])
          fail(Errc::parse_error, "atom mapped twice in leg at '" + name + "'");
        assigned[*ai] = true;
        leg[*ai] = *bi;
      }
      for (std::size_t a = 0; a < assigned.size(); ++a)
        if (!assigned[a])
          fail(Errc::parse_error,
               "leg at '" + name + "' misses atom '" +
                   top.space(i).atom(a).label + "'");
      out[i] = std::move(leg);
    }
    return out;
  };
  auto left_legs = legs_from_json(expect(doc, "left_legs", "fan"), left);
  auto right_legs = legs_from_json(expect(doc, "right_legs", "fan"), right);
  return TwoFan::build(std::move(top), std::move(left), std::move(right),
                       std::move(left_legs), std::move(right_legs));
}

HomogeneousInput homogeneous_from_json(const Json& doc) {
  if (!doc.is_object())
    fail(Errc::parse_error, "homogeneous input must be an object");
  IndexingCategory shape =
      category_from_json(expect(doc, "category", "homogeneous input"));
  const Json& degree_doc = expect(doc, "degree", "homogeneous input");
  if (!degree_doc.is_number_unsigned() || degree_doc.get<std::size_t>() < 1)
    fail(Errc::parse_error, "degree must be a positive integer");
  const std::size_t degree = degree_doc.get<std::size_t>();

  auto perms_from = [&](const Json& list, const char* where) {
    if (!list.is_array())
      fail(Errc::parse_error, std::string(where) + " must be an array");
    std::vector<Perm> perms;
    for (const Json& text : list) {
      if (!text.is_string())
        fail(Errc::parse_error,
             std::string(where) + " entries must be cycle strings");
      perms.push_back(parse_cycles(text.get<std::string>(), degree));
    }
    return perms;
  };

  PermGroup group(degree,
                  perms_from(expect(doc, "group", "homogeneous input"), "group"));
  const Json& subgroups = expect(doc, "subgroups", "homogeneous input");
  SubgroupDiagram sub{shape, {}};
  sub.generators.reserve(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const std::string& name = shape.object_name(i);
    auto it = subgroups.find(name);
    if (it == subgroups.end())
      fail(Errc::parse_error, "missing subgroup for object '" + name + "'");
    sub.generators.push_back(perms_from(*it, ("subgroups." + name).c_str()));
  }
  return {std::move(group), std::move(sub)};
}

Json coupling_to_json(const CouplingMatrix& coupling) {
  Json entries = Json::array();
  for (const auto& [i, j, z] : coupling.entries) {
    Json entry;
    entry["left"] = coupling.left.atom(i).label;
    entry["right"] = coupling.right.atom(j).label;
    entry["mass"] = rat_to_json(z);
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace trop
