#include "cli.hpp"

#include "trop/error.hpp"
#include "trop/io.hpp"
#include "trop/tropical.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace trop::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Diagram load_diagram(const std::string& path) {
  try {
    return parse_diagram(read_file(path));
  } catch (const Error& e) {
    fail(e.code(), std::string(e.what()) + " (file " + path + ")");
  }
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error,
         std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

std::string fmt_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CouplingMode parse_mode(const std::string& mode) {
  if (mode == "exact") return CouplingMode::exact;
  if (mode == "greedy") return CouplingMode::greedy;
  return CouplingMode::automatic;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ',')) {
    try {
      values.push_back(std::stod(part));
    } catch (const std::exception&) {
      fail(Errc::invalid_argument, "malformed number '" + part + "'");
    }
  }
  if (values.empty()) fail(Errc::invalid_argument, "empty coordinate list");
  return values;
}

struct CommonOptions {
  RunConfig config = RunConfig::from_env();
  std::string mode = "auto";

  void attach(CLI::App* sub) {
    sub->add_option("--cap", config.coupling_cap,
                    "size cap for exact coupling searches");
    sub->add_option("--tol", config.tolerance, "floating-point tolerance");
    sub->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", config.seed,
                    "seed, reserved for sampling tooling");
    sub->add_option("--mode", mode, "coupling mode")
        ->check(CLI::IsMember({"exact", "greedy", "auto"}));
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Diagrams of finite probability spaces: entropy distances, "
      "mixtures, homogeneous diagrams and tropical invariants"};
  app.name("trop");
  app.require_subcommand(1);

  CommonOptions common;
  int exit_code = 0;

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "validate a diagram document");
  std::string validate_in;
  validate_cmd->add_option("--in", validate_in, "diagram file")->required();
  common.attach(validate_cmd);
  validate_cmd->callback([&] {
    Diagram d = load_diagram(validate_in);
    Json result;
    result["ok"] = true;
    result["objects"] = d.size();
    result["initial"] = d.shape().object_name(d.shape().initial());
    Json sizes = Json::object();
    for (std::size_t i = 0; i < d.size(); ++i)
      sizes[d.shape().object_name(i)] = d.space(i).size();
    result["sizes"] = std::move(sizes);
    result["minimal"] = is_minimal(d).minimal;
    out << result.dump(2) << "\n";
  });

  // entropy
  auto* entropy_cmd =
      app.add_subcommand("entropy", "entropy vector of a diagram");
  std::string entropy_in;
  entropy_cmd->add_option("--in", entropy_in, "diagram file")->required();
  common.attach(entropy_cmd);
  entropy_cmd->callback([&] {
    Diagram d = load_diagram(entropy_in);
    EntropyVector ev = entropy_vector(d);
    Json result;
    result["objects"] = d.shape().object_names();
    result["entropy"] = ev.values;
    result["l1"] = ev.l1();
    out << result.dump(2) << "\n";
  });

  // kd
  auto* kd_cmd = app.add_subcommand("kd", "entropy distance of a two-fan");
  std::string kd_fan;
  kd_cmd->add_option("--fan", kd_fan, "fan file")->required();
  common.attach(kd_cmd);
  kd_cmd->callback([&] {
    TwoFan fan = fan_from_json(load_json(kd_fan));
    Json result;
    result["kd"] = kd(fan);
    out << result.dump(2) << "\n";
  });

  // ikd
  auto* ikd_cmd =
      app.add_subcommand("ikd", "intrinsic entropy distance of two diagrams");
  std::string ikd_left, ikd_right;
  ikd_cmd->add_option("--left", ikd_left, "left diagram")->required();
  ikd_cmd->add_option("--right", ikd_right, "right diagram")->required();
  common.attach(ikd_cmd);
  ikd_cmd->callback([&] {
    common.config.validate();
    Diagram a = load_diagram(ikd_left);
    Diagram b = load_diagram(ikd_right);
    IkdResult r =
        ikd(a, b, parse_mode(common.mode), common.config.coupling_cap);
    Json result;
    result["lower"] = r.bound.lower;
    result["upper"] = r.bound.upper;
    result["exact"] = r.bound.exact;
    result["coupling"] = coupling_to_json(r.coupling);
    out << result.dump(2) << "\n";
  });

  // aikd
  auto* aikd_cmd = app.add_subcommand(
      "aikd", "asymptotic intrinsic distance of linear sequences");
  std::string aikd_left, aikd_right;
  unsigned aikd_n_max = 2;
  aikd_cmd->add_option("--left", aikd_left, "left diagram")->required();
  aikd_cmd->add_option("--right", aikd_right, "right diagram")->required();
  aikd_cmd->add_option("--n-max", aikd_n_max, "largest sampled tensor power");
  common.attach(aikd_cmd);
  aikd_cmd->callback([&] {
    common.config.validate();
    QuasiLinearSequence a = linear_sequence(load_diagram(aikd_left));
    QuasiLinearSequence b = linear_sequence(load_diagram(aikd_right));
    AsymptoticDistanceEstimate estimate =
        asymptotic_distance(a, b, aikd_n_max, common.config.coupling_cap);
    if (common.config.format == "csv") {
      out << "n,value\n";
      for (const DistanceSample& s : estimate.samples)
        out << s.n << "," << fmt_double(s.value) << "\n";
      return;
    }
    Json result;
    result["lower"] = estimate.lower;
    result["upper"] = estimate.upper;
    Json samples = Json::array();
    for (const DistanceSample& s : estimate.samples)
      samples.push_back({{"n", s.n}, {"value", s.value}});
    result["samples"] = std::move(samples);
    out << result.dump(2) << "\n";
  });

  // mix
  auto* mix_cmd = app.add_subcommand("mix", "mixture of a diagram family");
  std::string mix_family;
  mix_cmd->add_option("--family", mix_family, "family file")->required();
  common.attach(mix_cmd);
  mix_cmd->callback([&] {
    DiagramFamily family = family_from_json(load_json(mix_family));
    MixtureResult result = mix(family);
    out << serialize_diagram(result.total);
  });

  // homog
  auto* homog_cmd = app.add_subcommand(
      "homog", "quotient diagram of a subgroup assignment");
  std::string homog_in;
  homog_cmd->add_option("--in", homog_in, "homogeneous input file")->required();
  common.attach(homog_cmd);
  homog_cmd->callback([&] {
    HomogeneousInput input = homogeneous_from_json(load_json(homog_in));
    Diagram d = quotient_diagram(input.group, input.subgroups);
    HomogeneityReport report = check_homogeneous(d);
    Json result;
    result["diagram"] = diagram_to_json(d);
    result["homogeneous"] = report.homogeneous;
    Json orbits = Json::object();
    for (std::size_t i = 0; i < d.size(); ++i)
      orbits[d.shape().object_name(i)] = report.orbit_counts[i];
    result["orbit_counts"] = std::move(orbits);
    result["intersection_closed"] =
        intersection_closure_check(input.group, input.subgroups);
    result["minimal"] = is_minimal(d).minimal;
    out << result.dump(2) << "\n";
  });

  // chain-trop
  auto* chain_trop_cmd = app.add_subcommand(
      "chain-trop", "tropical point of a chain diagram's linear sequence");
  std::string chain_trop_in;
  unsigned chain_trop_n = 1;
  chain_trop_cmd->add_option("--in", chain_trop_in, "chain diagram file")
      ->required();
  chain_trop_cmd->add_option("--n-eval", chain_trop_n,
                             "evaluation index (1 is exact for linear)");
  common.attach(chain_trop_cmd);
  chain_trop_cmd->callback([&] {
    QuasiLinearSequence seq = linear_sequence(load_diagram(chain_trop_in));
    TropicalChainPoint point = chain_tropicalize(seq, chain_trop_n);
    // Finest coordinate first, matching chain-rep --x.
    std::vector<double> display(point.values.rbegin(), point.values.rend());
    Json result;
    result["x"] = display;
    out << result.dump(2) << "\n";
  });

  // chain-rep
  auto* chain_rep_cmd = app.add_subcommand(
      "chain-rep", "dyadic representative of a tropical chain point");
  std::string chain_rep_x;
  unsigned chain_rep_n = 1;
  chain_rep_cmd
      ->add_option("--x", chain_rep_x,
                   "coordinates, finest first, e.g. 1.0,0.5")
      ->required();
  chain_rep_cmd->add_option("--n", chain_rep_n, "scale")->required();
  common.attach(chain_rep_cmd);
  chain_rep_cmd->callback([&] {
    std::vector<double> display = parse_double_list(chain_rep_x);
    std::vector<double> ascending(display.rbegin(), display.rend());
    TropicalChainPoint point = TropicalChainPoint::checked(std::move(ascending));
    out << serialize_diagram(chain_representative(point, chain_rep_n));
  });

  // aep
  auto* aep_cmd = app.add_subcommand(
      "aep", "uniformization bound curve for a binary space");
  std::string aep_p = "1/2";
  unsigned aep_n = 0, aep_from = 0, aep_to = 0, aep_step = 1;
  aep_cmd->add_option("--p", aep_p, "mass of the first atom, e.g. 1/4");
  aep_cmd->add_option("--n", aep_n, "single power to evaluate");
  aep_cmd->add_option("--n-from", aep_from, "curve start");
  aep_cmd->add_option("--n-to", aep_to, "curve end");
  aep_cmd->add_option("--step", aep_step, "curve step");
  common.attach(aep_cmd);
  aep_cmd->callback([&] {
    const Rat p = rat_from_string(aep_p);
    if (p <= 0 || p >= 1)
      fail(Errc::invalid_argument, "--p must lie strictly between 0 and 1");
    ProbSpace binary({{"0", p}, {"1", 1 - p}});
    AepReport report;
    if (aep_n != 0) {
      report.points.push_back(aep_point(binary, aep_n));
      const AepPoint& pt = report.points.back();
      if (pt.reference > 0.0) report.fitted_c = pt.bound / pt.reference;
    } else {
      if (aep_from == 0 || aep_to == 0)
        fail(Errc::invalid_argument, "need --n or --n-from/--n-to");
      report = aep_curve(binary, aep_from, aep_to, aep_step);
    }
    if (common.config.format == "csv") {
      out << "n,bound,reference,best_m\n";
      for (const AepPoint& pt : report.points)
        out << pt.n << "," << fmt_double(pt.bound) << ","
            << fmt_double(pt.reference) << "," << pt.best_m.str() << "\n";
      return;
    }
    Json result;
    Json points = Json::array();
    for (const AepPoint& pt : report.points)
      points.push_back({{"n", pt.n},
                        {"bound", pt.bound},
                        {"reference", pt.reference},
                        {"best_m", pt.best_m.str()}});
    result["points"] = std::move(points);
    result["fitted_c"] = report.fitted_c;
    out << result.dump(2) << "\n";
  });

  // uniform-fan
  auto* uniform_cmd = app.add_subcommand(
      "uniform-fan", "explicit digit-map fan between uniform spaces");
  std::size_t uniform_n = 0, uniform_m = 0;
  uniform_cmd->add_option("--n", uniform_n, "left size")->required();
  uniform_cmd->add_option("--m", uniform_m, "right size")->required();
  common.attach(uniform_cmd);
  uniform_cmd->callback([&] {
    TwoFan fan = uniform_fan(uniform_n, uniform_m);
    Json result;
    result["kd"] = kd(fan);
    result["bound"] = 2.0 * std::log(2.0) +
                      std::abs(std::log(static_cast<double>(uniform_n) /
                                        static_cast<double>(uniform_m)));
    result["fan"] = fan_to_json(fan);
    out << result.dump(2) << "\n";
  });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("trop");
  for (const std::string& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()),
              const_cast<char**>(argv.data()));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help() << "\n";
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    Json record;
    record["error"] = std::string(errc_name(e.code()));
    record["message"] = e.what();
    err << record.dump(2) << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace trop::cli
