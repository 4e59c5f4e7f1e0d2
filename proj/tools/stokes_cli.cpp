// stokes_cli: JSON reports on stdout, a one-line summary on stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stokes/cli.hpp"

namespace {

stokes::PrecisionPolicy policy_from(unsigned bits) {
  stokes::PrecisionPolicy p;
  p.initial_bits = bits;
  p.max_bits = std::max<mpfr_prec_t>(512, 4 * static_cast<mpfr_prec_t>(bits));
  return p;
}

int emit(const stokes::Report& rep) {
  std::cout << rep.to_json().dump(2) << '\n';
  if (!rep.summary.empty()) std::cerr << rep.summary << '\n';
  for (const auto& d : rep.diagnostics) std::cerr << "  note: " << d << '\n';
  return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth and formal invariants of exponential polynomials at an irregular singular point"};
  app.require_subcommand(1);
  unsigned bits = 128;
  app.add_option("--precision", bits, "angle evaluation precision in bits")->check(CLI::Range(32u, 4096u));

  std::string expr, expr2;

  auto* analyze = app.add_subcommand("analyze", "Katz invariant, support arcs and Stokes directions");
  analyze->add_option("expr", expr, "exponential polynomial, e.g. \"1/z^2 + i/z\"")->required();

  auto* compare = app.add_subcommand("compare", "distinguishing witness for exp(phi1) vs exp(phi2)");
  std::optional<std::string> omega;
  long ram = 1;
  compare->add_option("expr1", expr)->required();
  compare->add_option("expr2", expr2)->required();
  compare->add_option("--omega", omega, "twist both sides by exp(omega)");
  compare->add_option("--ram", ram, "compose with an inverse branch of z -> z^l first")->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "tempered-solution isomorphism of two good models");
  std::string model1, model2;
  std::vector<std::string> twisted;
  classify->add_option("model1", model1)->required()->check(CLI::ExistingFile);
  classify->add_option("model2", model2)->required()->check(CLI::ExistingFile);
  classify->add_option("--twisted", twisted, "omega k")->expected(2);

  auto* region = app.add_subcommand("region", "trace Re phi = A near 0");
  std::string A;
  stokes::RegionOptions ropt;
  region->add_option("expr", expr)->required();
  region->add_option("A", A, "positive rational level")->required();
  region->add_option("--svg", ropt.svg_path, "write an SVG plot");
  region->add_option("--csv", ropt.csv_path, "write branch,x,y rows");
  region->add_option("--samples", ropt.samples, "points per branch")->check(CLI::Range(2, 1000000));

  auto* verify = app.add_subcommand("verify", "numeric temperedness check of exp(phi) on a region");
  std::string region_arg;
  std::optional<std::string> config_path;
  stokes::VerifyOptions vopt;
  std::optional<std::size_t> budget;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  verify->add_option("expr", expr)->required();
  verify->add_option("--region", region_arg,
                     "builtin:U1 | builtin:U2 | sector:c,eps,r | sublevel:A[,r] | ball:A[,r] | eta:k")
      ->required();
  verify->add_option("--budget", budget, "total samples (default: config samples)");
  verify->add_option("--seed", seed, "sampling seed (default: config seed)");
  verify->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
  verify->add_option("--config", config_path, "key = value oracle settings")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : stokes::kExitInput;
  }

  const auto policy = policy_from(bits);
  if (*analyze) return emit(stokes::cmd_analyze(expr, policy));
  if (*compare) return emit(stokes::cmd_compare(expr, expr2, omega, ram, policy));
  if (*classify) {
    std::optional<std::pair<std::string, long>> tw;
    if (!twisted.empty()) {
      long k = 0;
      try {
        std::size_t used = 0;
        k = std::stol(twisted[1], &used);
        if (used != twisted[1].size()) throw std::invalid_argument("k");
      } catch (const std::exception&) {
        std::cerr << "--twisted: k must be an integer, got '" << twisted[1] << "'\n";
        return stokes::kExitInput;
      }
      tw.emplace(twisted[0], k);
    }
    return emit(stokes::cmd_classify(model1, model2, tw));
  }
  if (*region) return emit(stokes::cmd_region(expr, A, ropt));
  if (*verify) {
    if (config_path) {
      std::ifstream in(*config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        vopt.config = stokes::parse_oracle_config(buf.str());
      } catch (const std::exception& e) {
        std::cerr << *config_path << ": " << e.what() << '\n';
        return stokes::kExitInput;
      }
    }
    vopt.budget = budget.value_or(vopt.config.samples);
    vopt.seed = seed.value_or(vopt.config.seed);
    if (threads) vopt.config.threads = *threads;
    vopt.policy = config_path && app.count("--precision") == 0 ? policy_from(vopt.config.precision_bits) : policy;
    return emit(stokes::cmd_verify(expr, region_arg, vopt));
  }
  return stokes::kExitInput;
}
