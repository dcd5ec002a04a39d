// Command-line experiment runner: gen, solve, diagnose, classify, compare.

#include "ireg/bidiag.hpp"
#include "ireg/diagnostics.hpp"
#include "ireg/error.hpp"
#include "ireg/matrix_io.hpp"
#include "ireg/noise.hpp"
#include "ireg/problems.hpp"
#include "ireg/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ireg;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string problem;
  Index n = 256;
  double eps = 1e-3;
  std::vector<std::uint64_t> seeds = {1};
  std::string solver = "lsqr";
  Index kmax = 40;
  std::string reorth = "full";
  std::string out = ".";
  std::string format = "csv";
  double k0_threshold = 2.0;
  double breakdown_tol = 1e-13;
};

// Raw flag values; a flag only overrides the config when it was given.
struct Flags {
  std::string config;
  std::string problem;
  Index n = 0;
  double eps = 0.0;
  std::vector<std::uint64_t> seeds;
  std::string solver;
  Index kmax = 0;
  std::string reorth;
  std::string out;
  std::string format;
  double k0_threshold = 0.0;
  double breakdown_tol = 0.0;
};

std::string g_command_line;

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("problem")) c.problem = j["problem"].get<std::string>();
    if (j.contains("n")) c.n = j["n"].get<Index>();
    if (j.contains("eps")) c.eps = j["eps"].get<double>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("seed")) {
      if (j["seed"].is_array()) c.seeds = j["seed"].get<std::vector<std::uint64_t>>();
      else c.seeds = {j["seed"].get<std::uint64_t>()};
    }
    if (j.contains("solver")) c.solver = j["solver"].get<std::string>();
    if (j.contains("kmax")) c.kmax = j["kmax"].get<Index>();
    if (j.contains("reorth")) c.reorth = j["reorth"].get<std::string>();
    if (j.contains("outputs")) c.out = j["outputs"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("k0_threshold")) c.k0_threshold = j["k0_threshold"].get<double>();
    if (j.contains("breakdown_tol")) c.breakdown_tol = j["breakdown_tol"].get<double>();
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  return c;
}

void validate(const ExperimentConfig& c, bool uses_kmax) {
  if (c.problem.empty()) throw UsageError("--problem is required");
  try {
    parse_problem_name(c.problem);
    parse_method(c.solver);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  if (c.reorth != "full" && c.reorth != "none") throw UsageError("--reorth must be 'full' or 'none'");
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be 'csv' or 'json'");
  if (c.seeds.empty()) throw UsageError("at least one seed is required");
  if (c.n < 8) throw PreconditionError("n must be >= 8, got " + std::to_string(c.n));
  if (!(c.eps > 0.0 && c.eps < 1.0)) throw PreconditionError("eps must lie in (0, 1)");
  if (uses_kmax && (c.kmax < 1 || c.kmax > c.n)) throw PreconditionError("kmax must lie in [1, n]");
  if (!(c.k0_threshold > 0.0)) throw PreconditionError("k0 threshold must be positive");
  if (!(c.breakdown_tol >= 0.0)) throw PreconditionError("breakdown tolerance must be >= 0");
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json provenance(const ExperimentConfig& c, const std::string& command) {
  json j;
  j["command"] = command;
  j["problem"] = c.problem;
  j["n"] = c.n;
  j["eps"] = c.eps;
  j["command_line"] = g_command_line;
  j["timestamp"] = utc_timestamp();
  return j;
}

fs::path out_dir(const ExperimentConfig& c) {
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + c.out + "': " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

json trace_json(const SolveTrace& t) {
  json j;
  j["method"] = std::string(to_string(t.method));
  j["param_name"] = t.param_name;
  j["params"] = t.params;
  j["res_norm"] = t.residual_norms;
  j["sol_norm"] = t.solution_norms;
  j["rel_err"] = t.rel_errors;
  return j;
}

SolveTrace run_solver(const ExperimentConfig& c, const Problem& p, const Vector& b, const SvdFactors* s) {
  const Method m = parse_method(c.solver);
  const Reorth reorth = c.reorth == "full" ? Reorth::full : Reorth::none;
  switch (m) {
    case Method::lsqr: return lsqr_run(p.A, b, c.kmax, {reorth, c.breakdown_tol}, &p.x_true);
    case Method::cgls: return cgls_run(p.A, b, c.kmax, &p.x_true);
    case Method::tsvd: return tsvd_run(p.A, *s, b, c.kmax, &p.x_true);
    case Method::tikhonov: return tikhonov_run(p.A, *s, b, tikhonov_grid(s->sigma), &p.x_true);
    case Method::hybrid: {
      const BidiagFactors f = bidiagonalize(p.A, b, c.kmax, {reorth, c.breakdown_tol});
      return hybrid_run(p.A, b, f, f.k, &p.x_true);
    }
  }
  throw UsageError("unknown solver");
}

int cmd_gen(const ExperimentConfig& c) {
  const Problem p = generate(c.problem, c.n);
  const fs::path dir = out_dir(c);
  write_iregmat(dir / "A.iregmat", p.A);
  write_vector_csv(dir / "x_true.csv", p.x_true);
  write_vector_csv(dir / "b_hat.csv", p.b_hat);
  json meta = provenance(c, "gen");
  meta["files"] = {"A.iregmat", "x_true.csv", "b_hat.csv"};
  write_json(dir / "meta.json", meta);
  std::cout << "wrote " << c.problem << " (n=" << c.n << ") to " << dir.string() << "\n";
  return kOk;
}

int cmd_solve(const ExperimentConfig& c) {
  const Problem p = generate(c.problem, c.n);
  const Method m = parse_method(c.solver);
  std::optional<SvdFactors> s;
  if (m == Method::tsvd || m == Method::tikhonov) s = svd(p.A);
  const fs::path dir = out_dir(c);
  for (auto seed : c.seeds) {
    const NoisyProblem np = add_white_noise(p, c.eps, seed);
    const SolveTrace t = run_solver(c, p, np.b, s ? &*s : nullptr);
    const std::string stem = c.problem + "_" + c.solver + "_" + seed_tag(seed);
    json side = provenance(c, "solve");
    side["method"] = c.solver;
    side["seed"] = seed;
    side["kmax"] = c.kmax;
    side["reorth"] = c.reorth;
    side["iterations"] = t.size();
    if (!t.rel_errors.empty()) {
      const Index best = semi_convergence_index(t);
      side["best_index"] = best;
      side["best_param"] = t.params[static_cast<std::size_t>(best - 1)];
      side["best_rel_err"] = t.rel_errors[static_cast<std::size_t>(best - 1)];
    }
    if (c.format == "csv") {
      std::ostringstream os;
      write_trace_csv(os, t);
      write_text(dir / (stem + ".csv"), os.str());
      side["data"] = stem + ".csv";
    } else {
      write_json(dir / (stem + "_trace.json"), trace_json(t));
      side["data"] = stem + "_trace.json";
    }
    write_json(dir / (stem + ".json"), side);
    std::cout << stem << ": " << t.size() << " iterates";
    if (side.contains("best_index")) {
      std::cout << ", best index " << side["best_index"].get<Index>() << ", rel. error "
                << side["best_rel_err"].get<double>();
    }
    std::cout << "\n";
  }
  return kOk;
}

json class_json(const IllPosednessClass& k) {
  json j;
  j["kind"] = std::string(to_string(k.kind));
  if (k.rho) j["rho"] = *k.rho;
  if (k.alpha) j["alpha"] = *k.alpha;
  j["zeta"] = k.zeta;
  j["fit_range"] = {k.fit_range.first, k.fit_range.last};
  j["fit_residual"] = k.fit_residual;
  return j;
}

std::string class_text(const IllPosednessClass& k) {
  std::ostringstream os;
  os << to_string(k.kind);
  if (k.rho) os << " (rho = " << *k.rho << ")";
  if (k.alpha) os << " (alpha = " << *k.alpha << ")";
  return os.str();
}

int cmd_diagnose(const ExperimentConfig& c) {
  const Problem p = generate(c.problem, c.n);
  const SvdFactors s = svd(p.A);
  const fs::path dir = out_dir(c);
  const Reorth reorth = c.reorth == "full" ? Reorth::full : Reorth::none;
  K0Options k0opt;
  k0opt.threshold = c.k0_threshold;
  for (auto seed : c.seeds) {
    const NoisyProblem np = add_white_noise(p, c.eps, seed);
    const BidiagFactors f = bidiagonalize(p.A, np.b, c.kmax, {reorth, c.breakdown_tol});
    const DiagnosticsReport rep = diagnose(p.A, np.b, f, s, c.kmax);
    const Index k0 = estimate_k0(s, np.b, np.eta, k0opt);
    const std::string stem = c.problem + "_diagnostics_" + seed_tag(seed);

    std::ostringstream os;
    write_diagnostics_csv(os, rep);
    write_text(dir / (stem + ".csv"), os.str());
    std::ostringstream es;
    write_entries_csv(es, f);
    write_text(dir / (c.problem + "_entries_" + seed_tag(seed) + ".csv"), es.str());

    json side = provenance(c, "diagnose");
    side["seed"] = seed;
    side["kmax"] = c.kmax;
    side["reorth"] = c.reorth;
    side["k0"] = k0;
    side["eta"] = np.eta;
    side["steps_completed"] = f.k;
    side["terminated_early"] = f.terminated_early;
    side["sigma_1"] = s.sigma(0);
    side["condition_number"] = numerical_condition_number(s.sigma);
    Index near_false = 0, inter_false = 0;
    for (const auto& r : rep.records) {
      if (r.k > k0) break;
      near_false += r.near_best ? 0 : 1;
      inter_false += r.interlace_ok ? 0 : 1;
    }
    side["near_best_false_up_to_k0"] = near_false;
    side["interlace_false_up_to_k0"] = inter_false;
    side["entry_decay_all_ok"] = rep.entry_decay.all_ok();
    if (rep.entry_decay.entry_class) side["entry_class"] = class_json(*rep.entry_decay.entry_class);
    side["data"] = stem + ".csv";
    write_json(dir / (stem + ".json"), side);
    std::cout << stem << ": " << rep.records.size() << " steps, k0 = " << k0 << "\n";
  }
  return kOk;
}

int cmd_classify(const ExperimentConfig& c) {
  const Problem p = generate(c.problem, c.n);
  const Vector sigma = singular_values(p.A);
  const fs::path dir = out_dir(c);
  const Reorth reorth = c.reorth == "full" ? Reorth::full : Reorth::none;
  json side = provenance(c, "classify");
  const IllPosednessClass svd_class = classify_decay(sigma);
  side["svd_class"] = class_json(svd_class);
  std::cout << c.problem << " singular values: " << class_text(svd_class) << "\n";
  json per_seed = json::array();
  for (auto seed : c.seeds) {
    const NoisyProblem np = add_white_noise(p, c.eps, seed);
    const BidiagFactors f = bidiagonalize(p.A, np.b, c.kmax, {reorth, c.breakdown_tol});
    json e;
    e["seed"] = seed;
    e["steps"] = f.k;
    try {
      const IllPosednessClass k = classify_decay(entry_sums(f));
      e["entry_class"] = class_json(k);
      e["agrees_with_svd"] = k.kind == svd_class.kind;
      std::cout << c.problem << " alpha_k + beta_{k+1}, seed " << seed << ": " << class_text(k) << "\n";
    } catch (const Error& err) {
      e["error"] = err.what();
      std::cout << c.problem << " alpha_k + beta_{k+1}, seed " << seed << ": not classifiable (" << err.what()
                << ")\n";
    }
    per_seed.push_back(e);
  }
  side["seeds"] = per_seed;
  write_json(dir / (c.problem + "_classify.json"), side);
  return kOk;
}

template <class T>
T median_of(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int cmd_compare(const ExperimentConfig& c) {
  const Problem p = generate(c.problem, c.n);
  const SvdFactors s = svd(p.A);
  const fs::path dir = out_dir(c);
  const Reorth reorth = c.reorth == "full" ? Reorth::full : Reorth::none;
  json summary = provenance(c, "compare");
  summary["kmax"] = c.kmax;
  json per_seed = json::array();
  std::vector<double> bl_all, bt_all;
  std::vector<Index> kl_all, kt_all;
  for (auto seed : c.seeds) {
    const NoisyProblem np = add_white_noise(p, c.eps, seed);
    const SolveTrace l = lsqr_run(p.A, np.b, c.kmax, {reorth, c.breakdown_tol}, &p.x_true);
    const SolveTrace t = tsvd_run(p.A, s, np.b, c.kmax, &p.x_true);
    const std::string stem = c.problem + "_compare_" + seed_tag(seed);

    std::ostringstream os;
    os << "k,lsqr_rel_err,tsvd_rel_err,lsqr_res_norm,tsvd_res_norm\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      os << (i + 1) << ',';
      if (i < l.size()) os << format_double(l.rel_errors[i]);
      os << ',' << format_double(t.rel_errors[i]) << ',';
      if (i < l.size()) os << format_double(l.residual_norms[i]);
      os << ',' << format_double(t.residual_norms[i]) << '\n';
    }
    write_text(dir / (stem + ".csv"), os.str());

    const Index kl = semi_convergence_index(l);
    const Index kt = semi_convergence_index(t);
    const double bl = l.rel_errors[static_cast<std::size_t>(kl - 1)];
    const double bt = t.rel_errors[static_cast<std::size_t>(kt - 1)];
    json e;
    e["seed"] = seed;
    e["lsqr_best_k"] = kl;
    e["lsqr_best_rel_err"] = bl;
    e["tsvd_best_k"] = kt;
    e["tsvd_best_rel_err"] = bt;
    e["ratio"] = bl / bt;
    e["data"] = stem + ".csv";
    per_seed.push_back(e);
    bl_all.push_back(bl);
    bt_all.push_back(bt);
    kl_all.push_back(kl);
    kt_all.push_back(kt);
    std::cout << stem << ": LSQR best " << bl << " at k=" << kl << ", TSVD best " << bt << " at k=" << kt << "\n";
  }
  summary["seeds"] = per_seed;
  json agg;
  agg["lsqr_best_k"] = {{"median", median_of(kl_all)},
                        {"min", *std::min_element(kl_all.begin(), kl_all.end())},
                        {"max", *std::max_element(kl_all.begin(), kl_all.end())}};
  agg["tsvd_best_k"] = {{"median", median_of(kt_all)},
                        {"min", *std::min_element(kt_all.begin(), kt_all.end())},
                        {"max", *std::max_element(kt_all.begin(), kt_all.end())}};
  agg["lsqr_best_rel_err"] = {{"median", median_of(bl_all)},
                              {"min", *std::min_element(bl_all.begin(), bl_all.end())},
                              {"max", *std::max_element(bl_all.begin(), bl_all.end())}};
  agg["tsvd_best_rel_err"] = {{"median", median_of(bt_all)},
                              {"min", *std::min_element(bt_all.begin(), bt_all.end())},
                              {"max", *std::max_element(bt_all.begin(), bt_all.end())}};
  summary["aggregate"] = agg;
  write_json(dir / (c.problem + "_compare_summary.json"), summary);
  return kOk;
}

void add_common(CLI::App* sub, Flags& fl) {
  sub->add_option("--config", fl.config, "JSON config file; flags override its values");
  sub->add_option("--problem", fl.problem, "shaw, wing, heat, phillips or deriv2");
  sub->add_option("--n", fl.n, "problem size (>= 8)");
  sub->add_option("--eps", fl.eps, "relative noise level ||e||/||b_hat||");
  sub->add_option("--seed", fl.seeds, "noise seed; repeat for several")->delimiter(',');
  sub->add_option("--solver", fl.solver, "lsqr, cgls, tsvd, tikhonov or hybrid");
  sub->add_option("--kmax", fl.kmax, "maximum iterations / truncation index");
  sub->add_option("--reorth", fl.reorth, "full or none");
  sub->add_option("--out", fl.out, "output directory");
  sub->add_option("--format", fl.format, "csv or json (solve traces)");
  sub->add_option("--k0-threshold", fl.k0_threshold, "k0 threshold in units of eta");
  sub->add_option("--breakdown-tol", fl.breakdown_tol, "bidiagonalization breakdown tolerance relative to ||A||");
}

ExperimentConfig merge(const CLI::App* sub, const Flags& fl) {
  ExperimentConfig c = fl.config.empty() ? ExperimentConfig{} : load_config_file(fl.config);
  auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
  if (given("--problem")) c.problem = fl.problem;
  if (given("--n")) c.n = fl.n;
  if (given("--eps")) c.eps = fl.eps;
  if (given("--seed")) c.seeds = fl.seeds;
  if (given("--solver")) c.solver = fl.solver;
  if (given("--kmax")) c.kmax = fl.kmax;
  if (given("--reorth")) c.reorth = fl.reorth;
  if (given("--out")) c.out = fl.out;
  if (given("--format")) c.format = fl.format;
  if (given("--k0-threshold")) c.k0_threshold = fl.k0_threshold;
  if (given("--breakdown-tol")) c.breakdown_tol = fl.breakdown_tol;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (i > 0) g_command_line += ' ';
    g_command_line += argv[i];
  }

  CLI::App app{"Lanczos bidiagonalization regularization experiments"};
  app.require_subcommand(1);
  Flags fl;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const ExperimentConfig&);
  };
  const Entry entries[] = {
      {"gen", "write A, x_true, b_hat and metadata", cmd_gen},
      {"solve", "run one regularization method and write its trace", cmd_solve},
      {"diagnose", "write per-k diagnostics of the bidiagonalization", cmd_diagnose},
      {"classify", "degree of ill-posedness from alpha_k + beta_{k+1} and from the SVD", cmd_classify},
      {"compare", "LSQR against TSVD, per k and best solutions", cmd_compare},
  };
  std::vector<CLI::App*> subs;
  for (const Entry& e : entries) {
    subs.push_back(app.add_subcommand(e.name, e.help));
    add_common(subs.back(), fl);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const ExperimentConfig c = merge(subs[i], fl);
      validate(c, std::string_view(entries[i].name) != "gen");
      return entries[i].run(c);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
