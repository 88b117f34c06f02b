#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "bifix/design.hpp"
#include "bifix/exact.hpp"
#include "bifix/io.hpp"
#include "bifix/oracle.hpp"

namespace bifix {
namespace cli {

namespace {

using io::NumericMode;
using io::Provenance;

constexpr const char* kCanonicalPath = "m-sequence-canonical";
constexpr const char* kSinglePath = "single-sequence-closed-form";
constexpr const char* kRecursionPath = "distribution-recursion";
constexpr const char* kChainPath = "absorbing-chain";
constexpr const char* kEnumerationPath = "stream-enumeration";

struct Options {
  std::string problem_path;
  bool exact = false;
  bool free_verdict = false;
  int k_max = -1;  // -1: not given (auto policy where applicable)
  double tail_tol = kDefaultTailTolerance;
  std::string format = "json";
  std::string formula = "canonical";
  std::string engine = "chain";
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  // design
  int alphabet_size = 2;
  int length = 3;
  int set_size = 1;
  std::vector<double> probs;
  std::string objective = "min_T";
  std::string constraint = "cross_bifix_free";
  int top_k = 10;
};

void check_kmax(const Options& opt, bool required) {
  if (opt.k_max == -1 && !required) return;
  if (opt.k_max < 1) {
    throw ValidationError(ValidationCode::BadDistribution, "kmax must be >= 1");
  }
}

NumericMode mode_of(const Options& opt) {
  return opt.exact ? NumericMode::Exact : NumericMode::Float;
}

std::string run_dist(const Options& opt) {
  check_kmax(opt, false);
  const Problem problem = io::load_problem(opt.problem_path, mode_of(opt));
  Provenance prov{kRecursionPath, mode_of(opt), std::nullopt, opt.tail_tol};

  const auto report = [&](const auto& dist) {
    Provenance p = prov;
    p.k_max = dist.k_max;
    return opt.format == "csv" ? io::dist_report_csv(problem, dist)
                               : io::dist_report_json(problem, dist, p);
  };
  if (opt.exact) {
    return report(opt.k_max >= 1 ? distribution<Rational>(problem, opt.k_max, opt.tail_tol)
                                 : distribution_auto<Rational>(problem, opt.tail_tol));
  }
  return report(opt.k_max >= 1 ? distribution<double>(problem, opt.k_max, opt.tail_tol)
                               : distribution_auto<double>(problem, opt.tail_tol));
}

template <typename Scalar>
MomentReport<Scalar> single_path_report(const Problem& problem) {
  if (problem.num_sequences() != 1) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "--formula single requires a single-sequence problem");
  }
  MomentReport<Scalar> report;
  report.T = single_sequence_mean<Scalar>(problem);
  report.second_moment = single_sequence_second_moment<Scalar>(problem);
  report.variance = variance_from_moments(report.second_moment, report.T);
  report.split = {Scalar(1)};
  report.partial_means = {report.T};
  auto coeff = coefficients<Scalar>(problem);
  report.C = std::move(coeff.C);
  report.W = std::move(coeff.W);
  return report;
}

std::string run_moments(const Options& opt) {
  const Problem problem = io::load_problem(opt.problem_path, mode_of(opt));
  const bool single = opt.formula == "single";
  Provenance prov{single ? kSinglePath : kCanonicalPath, mode_of(opt), std::nullopt, std::nullopt};
  if (opt.exact) {
    return io::moments_report(
        single ? single_path_report<Rational>(problem) : moments<Rational>(problem), prov);
  }
  return io::moments_report(
      single ? single_path_report<double>(problem) : moments<double>(problem), prov);
}

std::string run_oracle(const Options& opt) {
  if (opt.engine == "enumerate") {
    check_kmax(opt, true);
    const Problem problem = io::load_problem(opt.problem_path, NumericMode::Exact);
    Provenance prov{kEnumerationPath, NumericMode::Exact, opt.k_max, std::nullopt};
    return io::enumeration_report(problem, oracle::enumerate_first_match(problem, opt.k_max),
                                  prov);
  }
  if (opt.engine == "simulate") {
    const Problem problem = io::load_problem(opt.problem_path, mode_of(opt));
    return io::simulation_report(
        oracle::simulate(problem, opt.trials, opt.seed, std::max(opt.k_max, 0)));
  }
  check_kmax(opt, false);
  const Problem problem = io::load_problem(opt.problem_path, mode_of(opt));
  const auto automaton = oracle::build_automaton(problem);
  const auto report = oracle::chain_moments(automaton, problem);
  Provenance prov{kChainPath, mode_of(opt),
                  opt.k_max >= 1 ? std::optional<int>(opt.k_max) : std::nullopt, opt.tail_tol};
  if (opt.exact) {
    std::optional<SearchDistribution<Rational>> dist;
    if (opt.k_max >= 1) {
      dist = oracle::chain_distribution<Rational>(automaton, problem, opt.k_max, opt.tail_tol);
    }
    return io::oracle_chain_report(problem, report, dist, prov);
  }
  std::optional<SearchDistribution<double>> dist;
  if (opt.k_max >= 1) {
    dist = oracle::chain_distribution<double>(automaton, problem, opt.k_max, opt.tail_tol);
  }
  return io::oracle_chain_report(problem, report, dist, prov);
}

std::string run_simulate(const Options& opt) {
  const Problem problem = io::load_problem(opt.problem_path, NumericMode::Float);
  return io::simulation_report(
      oracle::simulate(problem, opt.trials, opt.seed, std::max(opt.k_max, 0)));
}

std::string run_design(const Options& opt) {
  design::DesignQuery query;
  query.alphabet_size = opt.alphabet_size;
  query.length = opt.length;
  query.set_size = opt.set_size;
  query.top_k = opt.top_k;
  query.probs = opt.probs;
  if (query.probs.empty()) {
    query.probs.assign(opt.alphabet_size, 1.0 / opt.alphabet_size);
  }
  if (opt.objective == "min_T") {
    query.objective = design::Objective::MinMean;
  } else if (opt.objective == "min_variance") {
    query.objective = design::Objective::MinVariance;
  } else {
    query.objective = design::Objective::Lexicographic;
  }
  if (opt.constraint == "none") {
    query.constraint = design::Constraint::None;
  } else if (opt.constraint == "bifix_free") {
    query.constraint = design::Constraint::BifixFree;
  } else {
    query.constraint = design::Constraint::CrossBifixFree;
  }
  return io::design_report(design::run_design(query), design::default_labels(opt.alphabet_size));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact statistics of sliding-window sequence search"};
  app.require_subcommand(1);
  Options opt;

  const auto add_problem = [&](CLI::App* cmd) {
    cmd->add_option("problem", opt.problem_path, "problem JSON file")->required();
  };
  const auto add_exact = [&](CLI::App* cmd) {
    cmd->add_flag("--exact", opt.exact, "exact rational arithmetic");
  };
  const auto add_kmax = [&](CLI::App* cmd) {
    cmd->add_option("--kmax", opt.k_max, "truncation point (tests)");
  };
  const auto add_tail = [&](CLI::App* cmd) {
    cmd->add_option("--tail-tol", opt.tail_tol, "tail mass tolerance");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "cross-bifix matrices and tail vectors");
  add_problem(spectrum);
  add_exact(spectrum);
  spectrum->add_flag("--free", opt.free_verdict, "also print the cross-bifix-free verdict");

  CLI::App* dist = app.add_subcommand("dist", "distribution of the search duration");
  add_problem(dist);
  add_exact(dist);
  add_kmax(dist);
  add_tail(dist);
  dist->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* moments_cmd = app.add_subcommand("moments", "expected duration, variance, split");
  add_problem(moments_cmd);
  add_exact(moments_cmd);
  moments_cmd->add_option("--formula", opt.formula, "moment formula path")
      ->check(CLI::IsMember({"canonical", "single"}));

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "independent ground-truth engines");
  add_problem(oracle_cmd);
  add_exact(oracle_cmd);
  add_kmax(oracle_cmd);
  add_tail(oracle_cmd);
  oracle_cmd->add_option("--engine", opt.engine, "oracle engine")
      ->check(CLI::IsMember({"chain", "enumerate", "simulate"}));
  oracle_cmd->add_option("--trials", opt.trials, "simulation trials");
  oracle_cmd->add_option("--seed", opt.seed, "simulation seed");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "seeded Monte Carlo run");
  add_problem(simulate_cmd);
  add_kmax(simulate_cmd);
  simulate_cmd->add_option("--trials", opt.trials, "simulation trials");
  simulate_cmd->add_option("--seed", opt.seed, "simulation seed");

  CLI::App* design_cmd = app.add_subcommand("design", "search for good sequence sets");
  design_cmd->add_option("--L", opt.alphabet_size, "alphabet size")->required();
  design_cmd->add_option("--N", opt.length, "sequence length")->required();
  design_cmd->add_option("--M", opt.set_size, "set size")->required();
  design_cmd->add_option("--probs", opt.probs, "symbol probabilities (default equiprobable)")
      ->delimiter(',');
  design_cmd->add_option("--objective", opt.objective, "ranking objective")
      ->check(CLI::IsMember({"min_T", "min_variance", "lexicographic"}));
  design_cmd->add_option("--constraint", opt.constraint, "structural constraint")
      ->check(CLI::IsMember({"none", "bifix_free", "cross_bifix_free"}));
  design_cmd->add_option("--top", opt.top_k, "number of sets to keep");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (spectrum->parsed()) {
      const Problem problem = io::load_problem(opt.problem_path, mode_of(opt));
      out << io::spectrum_report(problem, opt.free_verdict, mode_of(opt));
    } else if (dist->parsed()) {
      out << run_dist(opt);
    } else if (moments_cmd->parsed()) {
      out << run_moments(opt);
    } else if (oracle_cmd->parsed()) {
      out << run_oracle(opt);
    } else if (simulate_cmd->parsed()) {
      out << run_simulate(opt);
    } else if (design_cmd->parsed()) {
      out << run_design(opt);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ComputeError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace cli
}  // namespace bifix
