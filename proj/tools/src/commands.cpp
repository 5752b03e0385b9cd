#include "sepmeas/cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sepmeas/errors.hpp"
#include "sepmeas/io.hpp"
#include "sepmeas/version.hpp"

namespace sepmeas::cli {

namespace {

using io::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

json with_manifest(json payload, const std::string& command, json params, std::vector<std::uint64_t> seeds = {}) {
  io::RunManifest m{command, std::move(params), kVersion, std::move(seeds), io::utc_timestamp()};
  payload["manifest"] = io::manifest_to_json(m);
  return payload;
}

std::string join_dims(const std::vector<std::size_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "x" : "") + std::to_string(dims[i]);
  return s;
}

struct Globals {
  std::optional<double> tol;
  double psd_tol() const { return tol.value_or(kPsdTol); }
  double cone_tol() const { return tol.value_or(kConeResidualTol); }
};

struct GenerateArgs {
  int n = 0;
  std::vector<std::size_t> dims;
  int omit = 1;
  std::string out_path;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = make_instance(a.n, a.dims, a.omit);
  const json params{{"n", a.n}, {"dims", inst.party_dims().dims()}, {"omit", a.omit}};
  const json doc = with_manifest(io::instance_to_json(inst), "generate", params);
  std::ostream& note = a.out_path.empty() ? err : out;
  if (a.out_path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    write_json_file(a.out_path, doc);
    note << "wrote " << a.out_path << '\n';
  }
  note << "dims " << join_dims(std::vector<std::size_t>(inst.party_dims().dims().begin(), inst.party_dims().dims().end()))
       << ", completeness residual " << std::scientific << std::setprecision(3) << completeness_residual(inst) << '\n';
  if (inst.party_dims().parties() == 1) {
    note << "note: single party; the LOCC certifier will report a trivial SATISFIES\n";
  }
  return kExitOk;
}

struct OptimizeArgs {
  std::string instance_path;
  std::string measurement_out;
};

int cmd_optimize(const OptimizeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const Instance inst = io::instance_from_json(read_json(a.instance_path));
  const WeightedMeasurement m = build_measurement(inst, optimal_weights(inst), g.psd_tol());
  const UsdReport rep = failure_probability(m, reciprocal_set(inst));
  if (!a.measurement_out.empty()) {
    write_json_file(a.measurement_out, io::measurement_to_json(multicopy_factors(inst, 1)));
    err << "wrote " << a.measurement_out << '\n';
  }
  const json params{{"instance", a.instance_path}, {"tol", g.psd_tol()}};
  out << with_manifest(io::usd_report_to_json(rep), "optimize", params).dump(2) << '\n';
  return kExitOk;
}

struct CertifyArgs {
  std::string measurement_path;
  std::string instance_path;
  bool no_identity_generators = false;
  bool cross_check = false;
};

int cmd_certify(const CertifyArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.measurement_path.empty() == a.instance_path.empty()) {
    throw InputError("certify: give exactly one of a measurement file or --from-instance");
  }
  std::vector<ProductOperator> ops;
  if (!a.instance_path.empty()) {
    ops = multicopy_factors(io::instance_from_json(read_json(a.instance_path)), 1);
  } else {
    ops = io::measurement_from_json(read_json(a.measurement_path));
  }
  ConeOptions options;
  options.residual_tol = g.cone_tol();
  options.identity_generators = !a.no_identity_generators;
  options.cross_check = a.cross_check;
  const ConeReport rep = certify(ops, ops.size(), options);
  err << "verdict: " << to_string(rep.verdict) << " (total " << rep.total << ", bound " << rep.bound << ")\n";
  const json params{{"measurement", a.measurement_path},
                    {"from_instance", a.instance_path},
                    {"tol", g.cone_tol()},
                    {"identity_generators", options.identity_generators},
                    {"cross_check", a.cross_check}};
  out << with_manifest(io::cone_report_to_json(rep), "certify", params).dump(2) << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string instance_path;
  int n = 0;
  std::vector<std::size_t> dims;
  int omit = 1;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::size_t copies = 1;
  std::vector<double> weights;
};

int cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.instance_path.empty() == (a.n == 0)) {
    throw InputError("simulate: give exactly one of an instance file or --n");
  }
  if (a.trials == 0) throw InputError("simulate: --trials must be positive");
  const Instance inst =
      a.instance_path.empty() ? make_instance(a.n, a.dims, a.omit) : io::instance_from_json(read_json(a.instance_path));
  const ReciprocalSet r = reciprocal_set(inst);
  const SimConfig cfg{a.seed, a.trials, a.copies};
  SimReport rep;
  if (a.copies == 1) {
    const std::vector<double> w = a.weights.empty() ? optimal_weights(inst) : a.weights;
    rep = run_discrimination(inst, r, build_measurement(inst, w, g.psd_tol()), cfg);
  } else {
    if (!a.weights.empty()) throw InputError("simulate: --weights applies to single-copy runs only");
    rep = run_multicopy_discrimination(inst, r, multicopy_measurement(inst, a.copies), cfg);
  }
  json params{{"trials", a.trials}, {"seed", a.seed}, {"copies", a.copies}, {"weights", a.weights}};
  if (a.instance_path.empty()) {
    params["n"] = a.n;
    params["dims"] = inst.party_dims().dims();
    params["omit"] = a.omit;
  } else {
    params["instance"] = a.instance_path;
  }
  out << with_manifest(io::sim_report_to_json(rep), "simulate", params, {a.seed}).dump(2) << '\n';
  if (rep.misidentifications > 0) {
    err << "error: " << rep.misidentifications << " misidentifications in a zero-error measurement\n";
    return kExitInvariant;
  }
  return kExitOk;
}

struct VerifyArgs {
  std::vector<int> ns;
  bool as_json = false;
};

int cmd_verify(const VerifyArgs& a, const Globals& g, std::ostream& out) {
  const std::vector<VerifyRow> rows = verify_all(a.ns, g.cone_tol());
  bool all = true;
  for (const VerifyRow& row : rows) all = all && row.passed();

  if (a.as_json) {
    json list = json::array();
    for (const VerifyRow& row : rows) {
      json checks = json::object();
      for (const CheckResult& c : row.checks) checks[c.name] = {{"passed", c.passed}, {"detail", c.detail}};
      list.push_back({{"n", row.n}, {"dims", row.dims}, {"passed", row.passed()}, {"checks", checks}});
    }
    const json params{{"n", a.ns}, {"tol", g.cone_tol()}};
    out << with_manifest(json{{"rows", list}, {"passed", all}}, "verify", params).dump(2) << '\n';
  } else {
    out << "sepmeas " << kVersion << " verify\n";
    for (const VerifyRow& row : rows) {
      std::ostringstream head;
      head << "N=" << row.n << " dims=" << join_dims(row.dims);
      out << std::left << std::setw(20) << head.str() << (row.passed() ? "PASS" : "FAIL") << '\n';
      for (const CheckResult& c : row.checks) {
        out << "    " << std::setw(22) << c.name << (c.passed ? "pass" : "FAIL");
        if (!c.detail.empty()) out << "  " << c.detail;
        out << '\n';
      }
    }
    out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  }
  return all ? kExitOk : kExitInvariant;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separable unambiguous discrimination of product-state families", "sepmeas"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Override the PSD and cone-residual tolerances")->check(CLI::PositiveNumber);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Build an instance and write it as JSON");
  generate->add_option("--n", gen.n, "Number of states (prime >= 5)")->required();
  generate->add_option("--dims", gen.dims, "Party dimensions, ascending (default: prime factors of n-1)")
      ->delimiter(',');
  generate->add_option("--omit", gen.omit, "Label of the omitted state")->capture_default_str();
  generate->add_option("--out", gen.out_path, "Output path (default: stdout)");

  OptimizeArgs opt;
  CLI::App* optimize = app.add_subcommand("optimize", "Optimal separable measurement and its failure probability");
  optimize->add_option("instance", opt.instance_path, "Instance JSON")->required();
  optimize->add_option("--measurement-out", opt.measurement_out, "Also write the factored measurement here");

  CertifyArgs cert;
  CLI::App* certify_cmd = app.add_subcommand("certify", "Finite-round LOCC extreme-ray test");
  certify_cmd->add_option("measurement", cert.measurement_path, "Factored measurement JSON");
  certify_cmd->add_option("--from-instance", cert.instance_path, "Use the optimal measurement of this instance");
  certify_cmd->add_flag("--no-identity-generators", cert.no_identity_generators,
                        "Drop identity-proportional factors from counted parties' cones");
  certify_cmd->add_flag("--cross-check", cert.cross_check, "Run NNLS on rank-1 rays as well");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo of the discrimination experiment");
  simulate->add_option("instance", sim.instance_path, "Instance JSON");
  simulate->add_option("--n", sim.n, "Build the instance in place instead of loading one");
  simulate->add_option("--dims", sim.dims, "Party dimensions for --n")->delimiter(',');
  simulate->add_option("--omit", sim.omit, "Omitted label for --n")->capture_default_str();
  simulate->add_option("--trials", sim.trials)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--copies", sim.copies)->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--weights", sim.weights, "Measurement weights (default: optimal)")->delimiter(',');

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite over every factorization");
  verify->add_option("--n", ver.ns, "Comma-separated primes")->delimiter(',')->required();
  verify->add_flag("--json", ver.as_json, "Emit JSON instead of a table");

  std::vector<std::string> argv_store{"sepmeas"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out, err);
    if (optimize->parsed()) return cmd_optimize(opt, g, out, err);
    if (certify_cmd->parsed()) return cmd_certify(cert, g, out, err);
    if (simulate->parsed()) return cmd_simulate(sim, g, out, err);
    if (verify->parsed()) return cmd_verify(ver, g, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitInput;
}

}  // namespace sepmeas::cli
