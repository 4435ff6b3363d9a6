#include "hvr2/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "hvr2/element_io.hpp"
#include "hvr2/serialize.hpp"

namespace hvr2 {

namespace {

// Writes via a temporary file plus rename so partial output is never seen.
void write_file_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output file " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, target);
}

Json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  Json j;
  is >> j;
  return j;
}

// Emits report content to --out when given, otherwise to the stream.
void deliver(const std::string& content, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << content;
  else
    write_file_atomically(out_path, content);
}

int run_bracket(const std::string& left, const std::string& right, std::ostream& out) {
  const LieElement x = parse_element(left);
  const LieElement y = parse_element(right);
  out << print_element(bracket(x, y)) << "\n";
  return 0;
}

int run_jacobi_fuzz(int window, long trials, unsigned long seed, std::ostream& out) {
  if (trials < 1) throw std::invalid_argument("jacobi-fuzz: trials must be at least 1");
  if (window < 1) throw std::invalid_argument("jacobi-fuzz: window must be at least 1");
  std::vector<BasisSymbol> pool;
  for (long a = -window; a <= window; ++a)
    for (long b = -window; b <= window; ++b) {
      if (a == 0 && b == 0) continue;
      pool.push_back(BasisSymbol::mkE({a, b}));
      pool.push_back(BasisSymbol::mkT({a, b}));
    }
  for (int i = 1; i <= 4; ++i) pool.push_back(BasisSymbol::mkK(i));
  for (int i = 1; i <= 2; ++i) pool.push_back(BasisSymbol::mkD(i));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (long t = 0; t < trials; ++t) {
    const LieElement x{{pool[pick(rng)], Rational(1)}};
    const LieElement y{{pool[pick(rng)], Rational(1)}};
    const LieElement z{{pool[pick(rng)], Rational(1)}};
    const LieElement defect = jacobi_defect(x, y, z);
    if (print_element(defect) != "0") {
      out << "fail at trial " << t << ": x=" << print_element(x) << " y=" << print_element(y)
          << " z=" << print_element(z) << " defect=" << print_element(defect) << "\n";
      return 1;
    }
  }
  out << "pass trials=" << trials << " window=" << window << " seed=" << seed << "\n";
  return 0;
}

int run_dims(const std::string& config_path, const std::string& out_path,
             const std::string& format, std::ostream& out) {
  const Json cfg = load_config(config_path);
  const ConstructionDescriptor desc =
      construction_from_json(cfg.contains("construction") && cfg["construction"].is_object()
                                 ? cfg["construction"]
                                 : cfg);
  ModulePtr mod = build_construction(desc);
  std::map<WeightKey, int> dims;
  for (WeightKey k : mod->weights()) dims[k] = mod->dim(k);
  std::ostringstream body;
  if (format == "csv")
    dims_to_csv(dims, body);
  else
    body << dims_to_json(*mod, dims).dump(2) << "\n";
  deliver(body.str(), out_path, out);
  return 0;
}

SweepReport run_configured_experiment(const Json& cfg) {
  const std::string name = cfg.contains("experiment")
                               ? cfg["experiment"].get<std::string>()
                               : throw std::invalid_argument("config: missing field \"experiment\"");
  const BasisPair b = cfg.contains("basis") ? basis_from_json(cfg["basis"]) : standard_basis();
  if (!cfg.contains("sweep"))
    throw std::invalid_argument("config: missing field \"sweep\"");
  const std::vector<int> sweep = cfg["sweep"].get<std::vector<int>>();
  if (name == "stabilization") {
    if (!cfg.contains("rho")) throw std::invalid_argument("config: missing field \"rho\"");
    const int levels = cfg.contains("levels") ? cfg["levels"].get<int>() : 2;
    return stabilization_experiment(rho_from_json(cfg["rho"]), b, levels, sweep);
  }
  if (name == "growth") {
    if (!cfg.contains("c")) throw std::invalid_argument("config: missing field \"c\"");
    const Json& c = cfg["c"];
    if (!c.is_array() || c.size() != 4)
      throw std::invalid_argument("config: \"c\" must be an array of four rationals");
    const std::array<Rational, 4> levels{rational_from_json(c[0]), rational_from_json(c[1]),
                                         rational_from_json(c[2]), rational_from_json(c[3])};
    const char eps =
        cfg.contains("epsilon") ? cfg["epsilon"].get<std::string>().at(0) : '+';
    return growth_experiment(levels, eps, b, sweep);
  }
  throw std::invalid_argument("config: experiment must be \"stabilization\" or \"growth\"");
}

int run_experiment(const std::string& config_path, const std::string& out_path,
                   const std::string& format, const std::string& expect, std::ostream& out) {
  const Json cfg = load_config(config_path);
  const SweepReport rep = run_configured_experiment(cfg);
  std::ostringstream body;
  if (format == "csv")
    sweep_to_csv(rep, body);
  else
    body << sweep_to_json(rep).dump(2) << "\n";
  deliver(body.str(), out_path, out);
  if (!out_path.empty()) out << "verdict: " << verdict_name(rep.verdict) << "\n";
  if (!expect.empty() && expect != verdict_name(rep.verdict)) return 1;
  return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with rank-two graded weight modules"};
  app.require_subcommand(1);

  std::string left, right;
  CLI::App* bracket_cmd = app.add_subcommand("bracket", "Bracket two algebra elements");
  bracket_cmd->add_option("left", left, "first element")->required();
  bracket_cmd->add_option("right", right, "second element")->required();

  int window = 5;
  long trials = 0;
  unsigned long seed = 0;
  CLI::App* fuzz_cmd =
      app.add_subcommand("jacobi-fuzz", "Check the Jacobi identity on random symbol triples");
  fuzz_cmd->add_option("--window", window, "degree window for sampled symbols");
  fuzz_cmd->add_option("--trials", trials, "number of triples")->required();
  fuzz_cmd->add_option("--seed", seed, "random seed");

  std::string config_path, out_path, format = "json", expect;
  CLI::App* dims_cmd = app.add_subcommand("dims", "Weight-space dimension table of a construction");
  dims_cmd->add_option("--config", config_path, "JSON construction descriptor")->required();
  dims_cmd->add_option("--out", out_path, "output file (stdout when omitted)");
  dims_cmd->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* exp_cmd = app.add_subcommand("experiment", "Run a window-sweep experiment");
  exp_cmd->add_option("--config", config_path, "JSON experiment config")->required();
  exp_cmd->add_option("--out", out_path, "output file (stdout when omitted)");
  exp_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  exp_cmd->add_option("--expect", expect, "fail (exit 1) unless the verdict matches")
      ->check(CLI::IsMember({"stabilized", "growing", "inconclusive"}));
  exp_cmd->add_option("--seed", seed, "accepted for reproducibility bookkeeping");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(bracket_cmd)) return run_bracket(left, right, out);
    if (app.got_subcommand(fuzz_cmd)) return run_jacobi_fuzz(window, trials, seed, out);
    if (app.got_subcommand(dims_cmd)) return run_dims(config_path, out_path, format, out);
    if (app.got_subcommand(exp_cmd))
      return run_experiment(config_path, out_path, format, expect, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace hvr2
