// Command-line front end: instance generation, single solves and the
// experiment sweeps.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "randsel/concentration.hpp"
#include "randsel/errors.hpp"
#include "randsel/experiment.hpp"
#include "randsel/greedy.hpp"
#include "randsel/kalman.hpp"
#include "randsel/optimizer.hpp"
#include "randsel/sampling.hpp"

using namespace randsel;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

ExperimentConfig build_config(const Common& c, const ExperimentConfig& base = {}) {
  ExperimentConfig cfg = c.config_path.empty() ? base : ExperimentConfig::Load(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  app->add_option("--set", c.overrides, "override a config key, key=value");
  app->add_option("-s,--seed", c.seed, "master seed");
  app->add_option("-o,--out", c.out_dir, "output directory");
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw InvalidInputError("cannot write " + path);
  return file;
}

void print_matrix(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
  os << name << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << format_double(m(i, j));
    os << "\n";
  }
}

PsdMatrix warmup_prior(const LtiSystem& sys, int warmup) {
  // Open-loop propagation from Σ₀ = I; the program applies the final
  // prediction step itself.
  const int m = sys.state_dim();
  const PsdMatrix zero = PsdMatrix::Trusted(SymmetricMatrix::Zero(m));
  const PsdMatrix eye = PsdMatrix::Trusted(SymmetricMatrix::Identity(m));
  if (warmup <= 1) return eye;
  return propagate_filtered(eye, zero, sys, warmup - 1).filtered.back();
}

void report(const RunRecord& rec, const std::string& dir) {
  write_run_record(rec, dir);
  std::cout << rec.summary.to_csv();
  std::cerr << "wrote " << dir << "/" << rec.study << "_{trials,summary,timings}.csv and "
            << rec.study << "_meta.json\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized sensor selection with concentration-certified covariance bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kLibraryVersion);

  // gen
  Common gen_c;
  std::string gen_path;
  auto* gen = app.add_subcommand("gen", "generate a random detectable instance");
  add_common(gen, gen_c);
  gen->add_option("--instance-out", gen_path, "instance file (default stdout)");

  // dump
  std::string dump_in, dump_out;
  auto* dump = app.add_subcommand("dump", "parse an instance and write it back canonically");
  dump->add_option("instance", dump_in)->required()->check(CLI::ExistingFile);
  dump->add_option("-o,--out", dump_out, "output file (default stdout)");

  // optimize
  std::string opt_inst, opt_mode = "steady", opt_out = ".";
  int opt_ns = 0, opt_np = 5, opt_warmup = 10, opt_workers = 0;
  double opt_delta = 0.05;
  auto* optimize = app.add_subcommand("optimize", "grid search over (epsilon, rho, p)");
  optimize->add_option("-i,--instance", opt_inst)->required()->check(CLI::ExistingFile);
  optimize->add_option("-n,--n-s", opt_ns, "number of sampled sensors")->required();
  optimize->add_option("--n-p", opt_np, "grid points");
  optimize->add_option("-d,--delta", opt_delta, "failure probability");
  optimize->add_option("--mode", opt_mode)->check(CLI::IsMember({"steady", "time"}));
  optimize->add_option("--warmup", opt_warmup,
                       "time mode: prior is the open-loop prediction after this many steps from I");
  optimize->add_option("-o,--out", opt_out, "directory for grid.csv and distribution.csv");
  optimize->add_option("--workers", opt_workers);

  // sample
  std::string smp_dist;
  int smp_ns = 0, smp_count = 1, smp_ku = 0;
  std::uint64_t smp_seed = 1;
  auto* sample = app.add_subcommand("sample", "draw selections from a distribution");
  sample->add_option("-p,--distribution", smp_dist)->required()->check(CLI::ExistingFile);
  sample->add_option("-n,--n-s", smp_ns)->required();
  sample->add_option("--count", smp_count, "number of selections");
  sample->add_option("--k-u", smp_ku, "uniform cap; enables rejection sampling");
  sample->add_option("-s,--seed", smp_seed);

  // bounds
  std::string bnd_inst, bnd_dist;
  int bnd_ns = 0;
  double bnd_delta = 0.05;
  std::optional<double> bnd_eps;
  auto* bounds = app.add_subcommand("bounds", "steady-state covariance bounds for a distribution");
  bounds->add_option("-i,--instance", bnd_inst)->required()->check(CLI::ExistingFile);
  bounds->add_option("-p,--distribution", bnd_dist, "default: joint certificate")
      ->check(CLI::ExistingFile);
  bounds->add_option("-n,--n-s", bnd_ns)->required();
  bounds->add_option("-d,--delta", bnd_delta);
  bounds->add_option("-e,--epsilon", bnd_eps, "default: midpoint of the admissible interval");

  // alpha
  std::string alp_dist;
  int alp_ns = 0, alp_ku = 0;
  std::vector<int> alp_caps;
  double alp_delta = 0.05;
  auto* alpha_cmd = app.add_subcommand("alpha", "probability floor under sampling caps");
  alpha_cmd->add_option("-p,--distribution", alp_dist)->required()->check(CLI::ExistingFile);
  alpha_cmd->add_option("-n,--n-s", alp_ns)->required();
  auto* ku_opt = alpha_cmd->add_option("--k-u", alp_ku, "uniform cap");
  alpha_cmd->add_option("--caps", alp_caps, "explicit caps, one per candidate")->excludes(ku_opt);
  alpha_cmd->add_option("-d,--delta", alp_delta);

  // greedy
  std::string gr_inst, gr_out;
  int gr_ns = 0, gr_workers = 0;
  double gr_gamma = 1.0;
  std::uint64_t gr_seed = 1;
  auto* greedy = app.add_subcommand("greedy", "greedy selection, per-round scores as CSV");
  greedy->add_option("-i,--instance", gr_inst)->required()->check(CLI::ExistingFile);
  greedy->add_option("-n,--n-s", gr_ns)->required();
  greedy->add_option("-g,--gamma", gr_gamma, "fraction of the pool scored per round");
  greedy->add_option("-s,--seed", gr_seed);
  greedy->add_option("-o,--out", gr_out, "CSV file (default stdout)");
  greedy->add_option("--workers", gr_workers);

  Common cmp_c, het_c, con_c;
  auto* compare = app.add_subcommand("compare", "proposed policy vs greedy and uniform");
  add_common(compare, cmp_c);
  auto* hetero = app.add_subcommand("hetero", "partitioned sampling study");
  add_common(hetero, het_c);
  auto* constrained = app.add_subcommand("constrained", "sampling under per-candidate caps");
  add_common(constrained, con_c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const ExperimentConfig cfg = build_config(gen_c);
      std::ofstream f;
      output(gen_path, f) << format_instance(experiment_instance(cfg));
    } else if (*dump) {
      std::ofstream f;
      output(dump_out, f) << format_instance(load_instance(dump_in));
    } else if (*optimize) {
      const Instance inst = load_instance(opt_inst);
      GridOptions go;
      go.workers = opt_workers;
      if (opt_mode == "time") {
        go.mode = GridMode::kTimeDependent;
        go.prior = warmup_prior(inst.system, opt_warmup);
      }
      const GridSearchResult g =
          grid_search(opt_ns, opt_np, opt_delta, inst.pool, inst.system, go);
      Table t;
      t.columns = {"epsilon", "rho", "lambda_star", "lambda_bar_U", "solve_time_ms", "status"};
      for (const auto& pt : g.points) {
        t.add({cell(pt.epsilon), cell(pt.rho), cell(pt.lambda_star), cell(pt.lambda_bar_upper),
               cell(pt.solve_time_ms), pt.status});
      }
      std::filesystem::create_directories(opt_out);
      std::ofstream(std::filesystem::path(opt_out) / "grid.csv") << t.to_csv();
      std::ofstream(std::filesystem::path(opt_out) / "distribution.csv")
          << format_distribution(g.points[g.chosen].p);
      std::cout << t.to_csv();
      const GridPoint& best = g.points[g.chosen];
      std::cerr << "rho* = " << format_double(g.rho_star) << ", chosen point " << g.chosen + 1
                << ": epsilon = " << format_double(best.epsilon)
                << ", lambda_bar(U) = " << format_double(best.lambda_bar_upper) << "\n";
    } else if (*sample) {
      const Eigen::VectorXd p = load_distribution(smp_dist);
      const CategoricalSampler sampler(p);
      RngStream root(smp_seed);
      for (int i = 0; i < smp_count; ++i) {
        RngStream rng = root.substream(i);
        if (smp_ku > 0) {
          const Selection s =
              draw_constrained(sampler, smp_ns, ConstraintSpec::Uniform(smp_ku, p), rng);
          std::cout << s.to_line() << "\n";
          std::cerr << "attempts: " << *s.rejection_count() << "\n";
        } else {
          std::cout << draw_homogeneous(sampler, smp_ns, rng).to_line() << "\n";
        }
      }
    } else if (*bounds) {
      const Instance inst = load_instance(bnd_inst);
      const EpsilonChoice choice =
          bnd_eps ? EpsilonChoice::Explicit(*bnd_eps) : EpsilonChoice::Midpoint();
      std::optional<Eigen::VectorXd> p;
      if (!bnd_dist.empty()) p = load_distribution(bnd_dist);
      const AwParameters params =
          select_parameters_for_sample_size(inst.pool, bnd_ns, bnd_delta, choice, p);
      const CovarianceBounds b = bounds_steady_state(params, inst.system);
      std::cout << "epsilon " << format_double(params.epsilon()) << "\n"
                << "rho " << format_double(params.rho()) << "\n"
                << "probability_floor " << format_double(b.probability_floor) << "\n"
                << "lambda_bar_L " << format_double(max_eigenvalue(b.lower)) << "\n"
                << "lambda_bar_U " << format_double(max_eigenvalue(b.upper)) << "\n";
      print_matrix(std::cout, "L", b.lower.matrix());
      print_matrix(std::cout, "U", b.upper.matrix());
    } else if (*alpha_cmd) {
      const Eigen::VectorXd p = load_distribution(alp_dist);
      if (alp_caps.empty() && alp_ku <= 0) throw ConfigError("give --k-u or --caps");
      const ConstraintSpec spec =
          alp_caps.empty() ? ConstraintSpec::Uniform(alp_ku, p) : ConstraintSpec(alp_caps);
      const double a = alpha(spec, alp_ns, p);
      const ConstrainedFloors fl = constrained_floors(a, alp_delta);
      std::cout << "alpha " << format_double(a) << "\n"
                << "intersection_floor " << format_double(fl.intersection) << "\n"
                << "conditional_floor " << format_double(fl.conditional) << "\n"
                << "expected_draws_bound " << cell(fl.expected_draws_bound) << "\n";
    } else if (*greedy) {
      const Instance inst = load_instance(gr_inst);
      const GreedyResult r =
          greedy_select(GreedyConfig{gr_gamma, gr_ns, gr_seed, gr_workers}, inst.pool,
                        inst.system);
      Table t;
      t.columns = {"round", "chosen_index", "lambda_bar"};
      for (int i = 0; i < r.selection.size(); ++i) {
        t.add({cell(i + 1), cell(r.selection.indices()[i] + 1), cell(r.lambda_bar[i])});
      }
      std::ofstream f;
      output(gr_out, f) << t.to_csv();
    } else if (*compare) {
      report(run_policy_comparison(build_config(cmp_c)), cmp_c.out_dir);
    } else if (*hetero) {
      // The default sweep must be divisible by every default K.
      ExperimentConfig base;
      base.n_s = {120, 240, 360};
      report(run_heterogeneous_study(build_config(het_c, base)), het_c.out_dir);
    } else if (*constrained) {
      report(run_constrained_study(build_config(con_c)), con_c.out_dir);
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what();
    if (e.minimum_sample_size()) std::cerr << " (minimum n_s " << *e.minimum_sample_size() << ")";
    if (e.candidate()) std::cerr << " (candidate " << *e.candidate() << ")";
    std::cerr << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
