#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swdelay/errors.hpp"
#include "swdelay/lclf.hpp"
#include "swdelay/perturb.hpp"
#include "swdelay/radius.hpp"
#include "swdelay/simulate.hpp"
#include "swdelay/system_file.hpp"

namespace swdelay::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Raised for a precondition that is missing from the input rather than violated by the analysis.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string fixed4(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json display_of(const std::optional<double>& v) { return v ? json(fixed4(*v)) : json(nullptr); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw UsageError(what + ": '" + text + "' is not a non-negative integer");
  }
  return v;
}

// 1-based subsystem index on the command line, 0-based in the library.
std::size_t parse_index(const std::string& text, std::size_t count, const std::string& what) {
  const std::uint64_t k = parse_unsigned(text, what);
  if (k < 1 || k > count) {
    throw UsageError(what + ": subsystem " + text + " is out of range 1.." + std::to_string(count));
  }
  return static_cast<std::size_t>(k - 1);
}

std::pair<std::string, std::string> split_kind(const std::string& text, const std::string& what) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(what + ": expected KIND:ARGS, got '" + text + "'");
  return {text.substr(0, colon), text.substr(colon + 1)};
}

SwitchingSignal parse_signal(const std::string& text, std::size_t count) {
  const auto [kind, args] = split_kind(text, "--signal");
  if (kind == "constant") return SwitchingSignal::constant(parse_index(args, count, "--signal constant"));
  if (kind == "periodic") {
    std::vector<SwitchingSignal::Segment> schedule;
    for (const std::string& part : split(args, ',')) {
      const std::vector<std::string> kd = split(part, ':');
      if (kd.size() != 2) throw UsageError("--signal periodic: expected k:duration, got '" + part + "'");
      schedule.push_back({parse_index(kd[0], count, "--signal periodic"),
                          parse_number(kd[1], "--signal periodic duration")});
    }
    return SwitchingSignal::periodic(std::move(schedule));
  }
  if (kind == "random") {
    const std::vector<std::string> p = split(args, ',');
    if (p.size() != 3) throw UsageError("--signal random: expected min,max,seed");
    return SwitchingSignal::random_dwell(parse_number(p[0], "--signal random min"),
                                         parse_number(p[1], "--signal random max"),
                                         parse_unsigned(p[2], "--signal random seed"));
  }
  throw UsageError("--signal: unknown kind '" + kind + "' (constant, periodic, random)");
}

Vector parse_history(const std::string& text, std::size_t n) {
  const auto [kind, args] = split_kind(text, "--history");
  if (kind != "const") throw UsageError("--history: unknown kind '" + kind + "' (const)");
  Vector v;
  for (const std::string& part : split(args, ',')) v.push_back(parse_number(part, "--history"));
  if (v.size() != n) {
    throw UsageError("--history: expected " + std::to_string(n) + " values, got " + std::to_string(v.size()));
  }
  return v;
}

fs::path resolve_beside(const std::string& name, const fs::path& system_path) {
  const fs::path direct(name);
  if (fs::exists(direct) || direct.is_absolute()) return direct;
  const fs::path beside = system_path.parent_path() / direct;
  return fs::exists(beside) ? beside : direct;
}

const PerturbationStructure& require_perturbation(const SystemFile& file) {
  if (!file.perturbation) throw UsageError("the system file has no 'perturbation' section");
  return *file.perturbation;
}

const DelaySubsystem& require_bound(const SystemFile& file) {
  if (!file.bound) throw UsageError("the system file has no 'bound' section");
  return *file.bound;
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

int cmd_certify(const SystemFile& file, std::ostream& out) {
  const LclfSearch search = find_common_lclf(file.system);
  json report;
  if (search.certified()) {
    const LclfCertificate& c = *search.certificate;
    report = {{"status", "certified"},
              {"xi", vector_json(c.xi)},
              {"margin", c.margin},
              {"alpha", c.decay_alpha},
              {"M", c.envelope_gain},
              {"lp_optimum", search.optimum},
              {"display", {{"margin", fixed4(c.margin)}, {"alpha", fixed4(c.decay_alpha)}, {"M", fixed4(c.envelope_gain)}}}};
  } else {
    report = {{"status", "infeasible"},
              {"xi", nullptr},
              {"margin", nullptr},
              {"alpha", nullptr},
              {"M", nullptr},
              {"lp_optimum", search.optimum},
              {"diagnostic", search.diagnostic}};
  }
  out << report.dump(2) << "\n";
  return search.certified() ? kOk : kNegativeResult;
}

json radius_json(const RadiusReport& r) {
  json report = {{"lower", optional_number(r.lower)},
                 {"upper", optional_number(r.upper)},
                 {"lower_method", r.lower_method ? json(to_string(*r.lower_method)) : json(nullptr)},
                 {"upper_method", r.upper_method ? json(to_string(*r.upper_method)) : json(nullptr)},
                 {"xi", r.certificate_xi ? vector_json(*r.certificate_xi) : json(nullptr)},
                 {"display", {{"lower", display_of(r.lower)}, {"upper", display_of(r.upper)}}}};
  return report;
}

int cmd_radius(const SystemFile& file, const std::string& method, std::ostream& out) {
  RadiusReport report;
  if (method == "theorem2") {
    report = radius_bounds_common_lclf(file.system, require_perturbation(file));
  } else if (method == "theorem3") {
    const PerturbationStructure& p = require_perturbation(file);
    const DelaySubsystem& bound = require_bound(file);
    const StructureQuadruple structure = file.bound_perturbation ? *file.bound_perturbation : dominating_structure(p);
    report = radius_bounds_common_lclf(file.system, p);
    report.lower = radius_lower_dominating(file.system, p, bound, structure);
    report.lower_method = BoundMethod::DominatingSystem;
    report.certificate_xi.reset();
  } else {
    report = radius_bounds_unstructured_positive(file.system, require_bound(file));
  }
  out << radius_json(report).dump(2) << "\n";
  return kOk;
}

int cmd_subsystem_radius(const SystemFile& file, std::size_t k, std::ostream& out) {
  const StructureQuadruple q =
      file.perturbation ? (*file.perturbation)[k] : StructureQuadruple::identity(file.system.dim());
  const SubsystemRadius r = subsystem_radius_positive(file.system[k], q);
  const json report = {{"subsystem", k + 1},
                       {"lower", r.lower},
                       {"upper", r.upper},
                       {"exact", r.exact},
                       {"display", {{"lower", fixed4(r.lower)}, {"upper", fixed4(r.upper)}}}};
  out << report.dump(2) << "\n";
  return kOk;
}

struct SimulateArgs {
  std::string signal;
  double horizon = 0.0;
  double dt = 0.0;
  std::string history;
  std::string disturb;
  std::string out;
  std::size_t runs = 1;
  std::size_t workers = 0;
};

fs::path run_path(const fs::path& base, std::size_t run, std::size_t runs) {
  if (runs == 1) return base;
  fs::path p = base;
  p.replace_filename(base.stem().string() + "_" + std::to_string(run + 1) + base.extension().string());
  return p;
}

int cmd_simulate(const SystemFile& file, const fs::path& system_path, const SimulateArgs& a, std::ostream& out) {
  const std::size_t n = file.system.dim();
  const Vector x0 = a.history.empty() ? Vector(n, 1.0) : parse_history(a.history, n);
  if (a.runs < 1) throw UsageError("--runs must be at least 1");

  // Each run r uses seed + r for every seeded ingredient.
  std::vector<SimulationJob> jobs;
  for (std::size_t r = 0; r < a.runs; ++r) {
    SwitchedDelaySystem sys = file.system;
    if (!a.disturb.empty()) {
      const auto [kind, args] = split_kind(a.disturb, "--disturb");
      const PerturbationStructure& p = require_perturbation(file);
      Disturbance d;
      if (kind == "file") {
        d = load_disturbance(resolve_beside(args, system_path));
      } else if (kind == "sample") {
        const std::vector<std::string> parts = split(args, ',');
        if (parts.size() != 2) throw UsageError("--disturb sample: expected norm,seed");
        d = sample_disturbance(sys, p, parse_number(parts[0], "--disturb sample norm"),
                               parse_unsigned(parts[1], "--disturb sample seed") + r);
      } else {
        throw UsageError("--disturb: unknown kind '" + kind + "' (file, sample)");
      }
      sys = apply(sys, p, d);
    }
    SwitchingSignal signal = parse_signal(a.signal, sys.size());
    if (signal.kind() == SwitchingSignal::Kind::RandomDwell) {
      signal = SwitchingSignal::random_dwell(signal.min_dwell(), signal.max_dwell(), signal.seed() + r);
    }
    jobs.push_back({std::move(sys), constant_history(x0), std::move(signal), a.horizon, a.dt});
  }

  const std::vector<Trajectory> trajs = simulate_batch(jobs, a.workers);
  json summaries = json::array();
  for (std::size_t r = 0; r < trajs.size(); ++r) {
    const Trajectory& traj = trajs[r];
    const double phi_norm = history_norm(jobs[r].history, jobs[r].system.h(), a.dt);
    const LclfSearch search = find_common_lclf(jobs[r].system);
    json envelope = nullptr;
    if (search.certified()) envelope = decay_envelope_check(traj, *search.certificate, phi_norm);
    const double final_norm = inf_norm(traj.states.back());
    json summary = {{"final_norm", final_norm},
                    {"initial_norm", phi_norm},
                    {"final_time", traj.times.back()},
                    {"diverged", traj.diverged},
                    {"envelope_ok", envelope},
                    {"display", {{"final_norm", fixed4(final_norm)}}}};
    if (!a.out.empty()) {
      const fs::path path = run_path(a.out, r, a.runs);
      std::ofstream csv(path);
      if (!csv) throw UsageError("cannot write " + path.string());
      write_csv(csv, traj);
      summary["csv"] = path.string();
    }
    summaries.push_back(std::move(summary));
  }
  out << (a.runs == 1 ? summaries.front() : summaries).dump(2) << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability certificates, radius bounds and simulation for switched delay systems"};
  app.require_subcommand(1);

  std::string path;
  auto* certify = app.add_subcommand("certify", "Search for a common linear copositive Lyapunov function");
  certify->add_option("file", path, "System file")->required();

  auto* radius = app.add_subcommand("radius", "Stability radius bounds");
  radius->add_option("file", path, "System file")->required();
  auto* theorem2 = radius->add_flag("--theorem2", "LP lower bound and subsystem-radius upper bound");
  auto* theorem3 = radius->add_flag("--theorem3", "Lower bound from the dominating 'bound' system");
  auto* corollary5 = radius->add_flag("--corollary5", "Unstructured bounds for positive systems under 'bound'");
  theorem2->excludes(theorem3)->excludes(corollary5);
  theorem3->excludes(corollary5);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the switched system and write a CSV trajectory");
  simulate_cmd->add_option("file", path, "System file")->required();
  simulate_cmd->add_option("--signal", sim.signal, "constant:k | periodic:k1:d1,k2:d2,... | random:min,max,seed")
      ->required();
  simulate_cmd->add_option("--horizon", sim.horizon, "Final time")->required();
  simulate_cmd->add_option("--dt", sim.dt, "Step size")->required();
  simulate_cmd->add_option("--history", sim.history, "const:v1,...,vn (default all ones)");
  simulate_cmd->add_option("--disturb", sim.disturb, "file:PATH | sample:norm,seed");
  simulate_cmd->add_option("--out", sim.out, "CSV output path");
  simulate_cmd->add_option("--runs", sim.runs, "Number of runs; run r adds r to every seed");
  simulate_cmd->add_option("--workers", sim.workers, "Worker threads for multiple runs (0 = all cores)");

  std::string k_text;
  auto* subsystem = app.add_subcommand("subsystem-radius", "Radius of one positive subsystem");
  subsystem->add_option("file", path, "System file")->required();
  subsystem->add_option("--k", k_text, "Subsystem index (1-based)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    const SystemFile file = load_system_file(path);
    if (certify->parsed()) return cmd_certify(file, out);
    if (radius->parsed()) {
      if (!*theorem2 && !*theorem3 && !*corollary5) {
        throw UsageError("radius: choose one of --theorem2, --theorem3, --corollary5");
      }
      return cmd_radius(file, *theorem2 ? "theorem2" : *theorem3 ? "theorem3" : "corollary5", out);
    }
    if (simulate_cmd->parsed()) return cmd_simulate(file, path, sim, out);
    return cmd_subsystem_radius(file, parse_index(k_text, file.system.size(), "--k"), out);
  } catch (const NotPositive& e) {
    err << "not positive: " << e.what() << "\n";
    return kNegativeResult;
  } catch (const NotStable& e) {
    err << "not stable: " << e.what() << "\n";
    return kNegativeResult;
  } catch (const NotHurwitzBound& e) {
    err << "bound not Hurwitz: " << e.what() << "\n";
    return kNegativeResult;
  } catch (const StepMismatch& e) {
    err << "step mismatch: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace swdelay::cli
