#include "randsel/experiment.hpp"

#include <cctype>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "randsel/concentration.hpp"
#include "randsel/errors.hpp"
#include "randsel/greedy.hpp"
#include "randsel/kalman.hpp"
#include "randsel/optimizer.hpp"
#include "randsel/parallel.hpp"

namespace randsel {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Substream tags under the master seed.
enum Stream : std::uint64_t { kInstanceStream = 0, kTrialStream = 1, kGreedyStream = 2 };

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_number(const std::string& key, const std::string& v) {
  try {
    return parse_double(trim(v));
  } catch (const Error&) {
    throw ConfigError(key + ": '" + v + "' is not a number");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_number(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(d);
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  const std::string s = trim(v);
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError(key + ": ranges are first:last:step");
    const int a = to_int(key, parts[0]), b = to_int(key, parts[1]), step = to_int(key, parts[2]);
    if (step <= 0 || b < a) throw ConfigError(key + ": empty or descending range");
    for (int x = a; x <= b; x += step) out.push_back(x);
    return out;
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) {
    if (!trim(p).empty()) out.push_back(to_int(key, p));
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class F>
double median_time_ms(int repeats, F&& f) {
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    times.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return median(times);
}

RngStream trial_stream(const ExperimentConfig& c, std::uint64_t cell, std::uint64_t trial) {
  return RngStream(c.seed).substream(kTrialStream).substream(cell).substream(trial);
}

bool sandwiched(const CovarianceBounds& b, const PsdMatrix& p) {
  return loewner_leq(b.lower, p) && loewner_leq(p, b.upper);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ExperimentConfig::set(const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  if (key == "m") m = to_int(key, value);
  else if (key == "n_c") n_c = to_int(key, value);
  else if (key == "n_s") n_s = to_int_list(key, value);
  else if (key == "delta") delta = to_number(key, value);
  else if (key == "n_p") n_p = to_int(key, value);
  else if (key == "K") k = to_int_list(key, value);
  else if (key == "gamma") gamma = to_number(key, value);
  else if (key == "greedy_runs") greedy_runs = to_int(key, value);
  else if (key == "k_u") k_u = to_int_list(key, value);
  else if (key == "caps") caps = to_int_list(key, value);
  else if (key == "trials") trials = to_int(key, value);
  else if (key == "seed") {
    const std::string v = trim(value);
    // stoull would silently wrap a leading minus sign.
    if (v.empty() || !std::isdigit(static_cast<unsigned char>(v[0]))) {
      throw ConfigError("seed: '" + v + "' is not an unsigned integer");
    }
    try {
      std::size_t pos = 0;
      seed = std::stoull(v, &pos);
      if (pos != v.size()) throw ConfigError("seed: trailing characters");
    } catch (const std::logic_error&) {
      throw ConfigError("seed: '" + v + "' is not an unsigned integer");
    }
  }
  else if (key == "timing_repeats") timing_repeats = to_int(key, value);
  else if (key == "sigma2") sigma2 = to_number(key, value);
  else if (key == "q") q = to_number(key, value);
  else if (key == "entry_low") entry_low = to_number(key, value);
  else if (key == "entry_high") entry_high = to_number(key, value);
  else if (key == "instance") instance = trim(value);
  else if (key == "workers") workers = to_int(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::Parse(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      c.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

void ExperimentConfig::validate() const {
  if (m < 1 || n_c < 1) throw ConfigError("m and n_c must be positive");
  if (n_s.empty() || k.empty() || k_u.empty()) throw ConfigError("sweeps must be non-empty");
  for (int v : n_s) {
    if (v < 1) throw ConfigError("n_s values must be positive");
  }
  for (int v : k) {
    if (v < 1) throw ConfigError("K values must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (trials < 1 || n_p < 1 || greedy_runs < 1 || timing_repeats < 1) {
    throw ConfigError("trials, n_p, greedy_runs and timing_repeats must be positive");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(sigma2 > 0.0) || !(q > 0.0)) throw ConfigError("sigma2 and q must be positive");
  if (!(entry_low < entry_high)) throw ConfigError("entry_low must be below entry_high");
  if (!caps.empty() && static_cast<int>(caps.size()) != n_c) {
    throw ConfigError("caps needs one entry per candidate");
  }
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv{
      {"m", std::to_string(m)},
      {"n_c", std::to_string(n_c)},
      {"n_s", join(n_s)},
      {"delta", format_double(delta)},
      {"n_p", std::to_string(n_p)},
      {"K", join(k)},
      {"gamma", format_double(gamma)},
      {"greedy_runs", std::to_string(greedy_runs)},
      {"k_u", join(k_u)},
      {"caps", join(caps)},
      {"trials", std::to_string(trials)},
      {"seed", std::to_string(seed)},
      {"timing_repeats", std::to_string(timing_repeats)},
      {"sigma2", format_double(sigma2)},
      {"q", format_double(q)},
      {"entry_low", format_double(entry_low)},
      {"entry_high", format_double(entry_high)},
      {"instance", instance},
  };
  std::string out;
  for (const auto& [key, v] : kv) out += key + " = " + v + "\n";
  return out;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

Instance generate_instance(const ExperimentConfig& config, RngStream& rng) {
  const int m = config.m;
  auto draw = [&] {
    return config.entry_low + (config.entry_high - config.entry_low) * rng.next_uniform();
  };
  for (int attempt = 0; attempt < 100; ++attempt) {
    MatrixXd a(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) a(i, j) = draw();
    }
    std::vector<CandidateSensor> sensors;
    bool ok = true;
    for (int i = 0; i < config.n_c; ++i) {
      CandidateSensor s{VectorXd(m), config.sigma2};
      for (int j = 0; j < m; ++j) s.c(j) = draw();
      ok = ok && pbh_detectable(a, s.c.transpose());
      sensors.push_back(std::move(s));
    }
    if (!ok) continue;
    try {
      return Instance{LtiSystem(a, config.q * SymmetricMatrix::Identity(m)),
                      SensorPool(std::move(sensors))};
    } catch (const InvalidInputError&) {
      // duplicate candidates; draw again
    }
  }
  throw GenerationError("100 consecutive instances had an undetectable candidate");
}

Instance experiment_instance(const ExperimentConfig& config) {
  if (!config.instance.empty()) {
    Instance inst = load_instance(config.instance);
    if (inst.pool.size() != config.n_c || inst.system.state_dim() != config.m) {
      throw ConfigError("instance file does not match m and n_c of the config");
    }
    return inst;
  }
  RngStream rng = RngStream(config.seed).substream(kInstanceStream);
  return generate_instance(config, rng);
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw DimensionError("table row has the wrong width");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const bool quote = v[i].find_first_of(",\"\n") != std::string::npos;
      std::string f = v[i];
      if (quote) {
        std::string esc;
        for (char ch : f) esc += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        f = "\"" + esc + "\"";
      }
      out += (i ? "," : "") + f;
    }
    out += "\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidInputError("no column " + name);
  const std::size_t c = it - columns.begin();
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(parse_double(r[c]));
  return out;
}

std::string cell(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

std::string cell(long v) { return std::to_string(v); }

std::map<std::vector<std::string>, TrialStats> summarize_trials(
    const Table& trials, const std::vector<std::string>& keys) {
  std::vector<std::size_t> key_cols;
  for (const auto& k : keys) {
    const auto it = std::find(trials.columns.begin(), trials.columns.end(), k);
    if (it == trials.columns.end()) throw InvalidInputError("no column " + k);
    key_cols.push_back(it - trials.columns.begin());
  }
  const auto find_col = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = std::find(trials.columns.begin(), trials.columns.end(), name);
    if (it == trials.columns.end()) return std::nullopt;
    return it - trials.columns.begin();
  };
  const auto value_col = find_col("lambda_bar_P");
  const auto cover_col = find_col("covered");
  if (!value_col) throw InvalidInputError("trials table has no lambda_bar_P column");
  std::map<std::vector<std::string>, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : trials.rows) {
    std::vector<std::string> key;
    for (auto c : key_cols) key.push_back(r[c]);
    groups[key].emplace_back(parse_double(r[*value_col]),
                             cover_col ? parse_double(r[*cover_col]) : 0.0);
  }
  std::map<std::vector<std::string>, TrialStats> out;
  for (const auto& [key, v] : groups) {
    TrialStats s;
    s.count = static_cast<int>(v.size());
    double sum = 0.0, cov = 0.0;
    for (const auto& [x, c] : v) {
      sum += x;
      cov += c;
    }
    s.mean = sum / s.count;
    double ss = 0.0;
    for (const auto& [x, c] : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
    s.coverage = cov / s.count;
    out[key] = s;
  }
  return out;
}

std::optional<int> uniform_matching_sample_size(const SensorPool& pool, double target,
                                                double delta, const LtiSystem& system,
                                                int n_max) {
  const VectorXd u = VectorXd::Constant(pool.size(), 1.0 / pool.size());
  const int lo0 = minimum_sample_size(rho_star_for_distribution(pool, u), pool.state_dim(), delta);
  if (lo0 > n_max) return std::nullopt;
  auto value = [&](int n) {
    return max_eigenvalue(uniform_baseline(pool, n, delta, system).bounds.upper);
  };
  if (value(n_max) > target) return std::nullopt;
  int lo = lo0, hi = n_max;  // value(hi) <= target
  if (value(lo) <= target) return lo;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (value(mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

RunRecord run_policy_comparison(const ExperimentConfig& config) {
  config.validate();
  const Instance inst = experiment_instance(config);
  const SensorPool& pool = inst.pool;
  const LtiSystem& sys = inst.system;
  RunRecord rec{"compare", config, {}, {}, {}};
  rec.trials.columns = {"n_s", "trial", "lambda_bar_P", "covered"};
  rec.summary.columns = {"n_s", "status", "epsilon", "rho", "lambda_bar_U", "lambda_bar_L",
                         "mean_lambda_bar_P", "std_lambda_bar_P", "coverage", "greedy_det",
                         "greedy_rand_mean", "greedy_rand_std", "uniform_lambda_bar_U",
                         "uniform_status"};
  rec.timings.columns = {"n_s", "policy", "median_ms"};

  const int n_max = *std::max_element(config.n_s.begin(), config.n_s.end());
  const RhoStarResult joint = rho_star_joint(pool);

  // Greedy selections are prefix-closed, so one run to n_max covers the sweep.
  GreedyResult det;
  const double det_ms = median_time_ms(config.timing_repeats, [&] {
    det = greedy_select(GreedyConfig{1.0, n_max, 0, config.workers}, pool, sys);
  });
  std::vector<GreedyResult> rand(config.greedy_runs);
  std::vector<double> rand_ms;
  for (int r = 0; r < config.greedy_runs; ++r) {
    const std::uint64_t seed = RngStream(config.seed).substream(kGreedyStream).substream(r).next_u64();
    const auto t0 = std::chrono::steady_clock::now();
    rand[r] = greedy_select(GreedyConfig{config.gamma, n_max, seed, config.workers}, pool, sys);
    rand_ms.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  rec.timings.add({cell(n_max), "greedy_deterministic", cell(det_ms)});
  rec.timings.add({cell(n_max), "greedy_randomized", cell(median(rand_ms))});

  for (std::size_t c = 0; c < config.n_s.size(); ++c) {
    const int ns = config.n_s[c];
    std::vector<std::string> row(rec.summary.columns.size());
    row[0] = cell(ns);
    row[9] = cell(det.lambda_bar[ns - 1]);
    {
      double sum = 0.0, ss = 0.0;
      for (const auto& r : rand) sum += r.lambda_bar[ns - 1];
      const double mean = sum / rand.size();
      for (const auto& r : rand) ss += std::pow(r.lambda_bar[ns - 1] - mean, 2);
      row[10] = cell(mean);
      row[11] = cell(rand.size() > 1 ? std::sqrt(ss / (rand.size() - 1)) : 0.0);
    }
    try {
      const UniformBaseline ub = uniform_baseline(pool, ns, config.delta, sys);
      row[12] = cell(max_eigenvalue(ub.bounds.upper));
      row[13] = "ok";
    } catch (const InfeasibleError& e) {
      row[13] = "infeasible: needs n_s >= " + std::to_string(e.minimum_sample_size().value_or(0));
    }
    GridOptions opt;
    opt.joint = joint;
    opt.workers = config.workers;
    std::optional<GridSearchResult> grid;
    try {
      grid = grid_search(ns, config.n_p, config.delta, pool, sys, opt);
    } catch (const InfeasibleError& e) {
      row[1] = "infeasible: needs n_s >= " + std::to_string(e.minimum_sample_size().value_or(0));
    } catch (const OptimizationError& e) {
      row[1] = std::string("failed: ") + e.status();
    }
    if (!grid) {
      rec.summary.add(std::move(row));
      continue;
    }
    GridOptions timed = opt;
    timed.joint.reset();
    rec.timings.add({cell(ns), "proposed_grid_search", cell(median_time_ms(config.timing_repeats, [&] {
                       grid_search(ns, config.n_p, config.delta, pool, sys, timed);
                     }))});
    const GridPoint& best = grid->points[grid->chosen];
    const CovarianceBounds& bounds = *grid->bounds;
    const CategoricalSampler sampler(best.p);
    std::vector<double> lam(config.trials);
    std::vector<int> covered(config.trials);
    parallel_for(
        config.trials,
        [&](int t) {
          RngStream rng = trial_stream(config, c, t);
          const Selection sel = draw_homogeneous(sampler, ns, rng);
          const PsdMatrix p = selection_steady_state(pool, sel, sys).p;
          lam[t] = max_eigenvalue(p);
          covered[t] = sandwiched(bounds, p);
        },
        config.workers);
    for (int t = 0; t < config.trials; ++t) {
      rec.trials.add({cell(ns), cell(t), cell(lam[t]), cell(covered[t])});
    }
    const TrialStats st = summarize_trials(rec.trials, {"n_s"}).at({cell(ns)});
    row[1] = "ok";
    row[2] = cell(best.epsilon);
    row[3] = cell(best.rho);
    row[4] = cell(best.lambda_bar_upper);
    row[5] = cell(best.lambda_bar_lower);
    row[6] = cell(st.mean);
    row[7] = cell(st.stddev);
    row[8] = cell(st.coverage);
    rec.summary.add(std::move(row));
  }
  return rec;
}

RunRecord run_heterogeneous_study(const ExperimentConfig& config) {
  config.validate();
  for (int ns : config.n_s) {
    for (int k : config.k) {
      if (config.n_c % k != 0 || ns % k != 0) {
        throw ConfigError("K = " + std::to_string(k) + " must divide n_c = " +
                          std::to_string(config.n_c) + " and n_s = " + std::to_string(ns));
      }
    }
  }
  const Instance inst = experiment_instance(config);
  const SensorPool& pool = inst.pool;
  const LtiSystem& sys = inst.system;
  RunRecord rec{"hetero", config, {}, {}, {}};
  rec.trials.columns = {"n_s", "K", "trial", "lambda_bar_P", "covered"};
  rec.summary.columns = {"n_s", "K", "status", "lambda_bar_U", "lambda_bar_L", "floor",
                         "mean_lambda_bar_P", "std_lambda_bar_P", "coverage"};
  rec.timings.columns = {"n_s", "K", "partition_solve_ms"};
  std::uint64_t cell_id = 0;
  for (int ns : config.n_s) {
    for (int k : config.k) {
      const std::uint64_t this_cell = cell_id++;
      const Partitioning part = Partitioning::Comparison(config.n_c, ns, k, config.delta);
      std::vector<std::string> row{cell(ns), cell(k), "", "", "", cell(part.joint_confidence()),
                                   "", "", ""};
      std::optional<HeterogeneousResult> het;
      try {
        het = grid_search_heterogeneous(part, std::vector<int>(k, config.n_p), pool, sys,
                                        config.workers);
      } catch (const Error& e) {
        row[2] = std::string("failed: ") + e.what();
        std::replace(row[2].begin(), row[2].end(), '\n', ' ');
        rec.summary.add(std::move(row));
        continue;
      }
      // Mean per-partition search time, median over repeats.
      const double ms = median_time_ms(config.timing_repeats, [&] {
                          grid_search_heterogeneous(part, std::vector<int>(k, config.n_p), pool,
                                                    sys, 1);
                        }) / k;
      rec.timings.add({cell(ns), cell(k), cell(ms)});
      std::vector<CategoricalSampler> samplers;
      for (const auto& g : het->partitions) samplers.emplace_back(g.points[g.chosen].p);
      std::vector<double> lam(config.trials);
      std::vector<int> covered(config.trials);
      parallel_for(
          config.trials,
          [&](int t) {
            RngStream rng = trial_stream(config, this_cell, t);
            const Selection sel = draw_heterogeneous(part, samplers, rng);
            const PsdMatrix p = selection_steady_state(pool, sel, sys).p;
            lam[t] = max_eigenvalue(p);
            covered[t] = sandwiched(het->fused, p);
          },
          config.workers);
      for (int t = 0; t < config.trials; ++t) {
        rec.trials.add({cell(ns), cell(k), cell(t), cell(lam[t]), cell(covered[t])});
      }
      const TrialStats st = summarize_trials(rec.trials, {"n_s", "K"}).at({cell(ns), cell(k)});
      row[2] = "ok";
      row[3] = cell(max_eigenvalue(het->fused.upper));
      row[4] = cell(max_eigenvalue(het->fused.lower));
      row[6] = cell(st.mean);
      row[7] = cell(st.stddev);
      row[8] = cell(st.coverage);
      rec.summary.add(std::move(row));
    }
  }
  return rec;
}

RunRecord run_constrained_study(const ExperimentConfig& config) {
  config.validate();
  const Instance inst = experiment_instance(config);
  const SensorPool& pool = inst.pool;
  const LtiSystem& sys = inst.system;
  RunRecord rec{"constrained", config, {}, {}, {}};
  rec.trials.columns = {"n_s", "k_u", "trial", "N"};
  rec.summary.columns = {"n_s", "k_u", "status", "alpha", "alpha_minus_delta",
                         "intersection_floor", "conditional_floor", "expected_draws_bound",
                         "mean_N"};
  rec.timings.columns = {"n_s", "k_u", "alpha_ms"};
  const RhoStarResult joint = rho_star_joint(pool);
  const std::vector<int> factors = config.caps.empty() ? config.k_u : std::vector<int>{-1};
  std::uint64_t cell_id = 0;
  for (int ns : config.n_s) {
    std::optional<VectorXd> p;
    std::string p_status;
    try {
      GridOptions opt;
      opt.joint = joint;
      opt.workers = config.workers;
      const GridSearchResult g = grid_search(ns, config.n_p, config.delta, pool, sys, opt);
      p = g.points[g.chosen].p;
    } catch (const InfeasibleError& e) {
      p_status = "infeasible: needs n_s >= " + std::to_string(e.minimum_sample_size().value_or(0));
    }
    for (int ku : factors) {
      const std::uint64_t this_cell = cell_id++;
      std::vector<std::string> row{cell(ns), ku < 0 ? "explicit" : cell(ku), "", "", "", "", "",
                                   "", ""};
      if (!p) {
        row[2] = p_status;
        rec.summary.add(std::move(row));
        continue;
      }
      const ConstraintSpec spec =
          ku < 0 ? ConstraintSpec(config.caps) : ConstraintSpec::Uniform(ku, *p);
      double a = 0.0;
      try {
        const double ms = median_time_ms(config.timing_repeats, [&] { a = alpha(spec, ns, *p); });
        rec.timings.add({row[0], row[1], cell(ms)});
      } catch (const DomainError& e) {
        row[2] = std::string("assumption violated: ") + e.what();
        rec.summary.add(std::move(row));
        continue;
      }
      const ConstrainedFloors fl = constrained_floors(a, config.delta);
      row[3] = cell(a);
      row[4] = cell(a - config.delta);
      row[5] = cell(fl.intersection);
      row[6] = cell(fl.conditional);
      row[7] = cell(fl.expected_draws_bound);
      // Rejection sampling is only run where the expected cost is bounded.
      if (a >= 0.01) {
        const CategoricalSampler sampler(*p);
        std::vector<long> n(config.trials);
        parallel_for(
            config.trials,
            [&](int t) {
              RngStream rng = trial_stream(config, this_cell, t);
              n[t] = *draw_constrained(sampler, ns, spec, rng).rejection_count();
            },
            config.workers);
        double sum = 0.0;
        for (int t = 0; t < config.trials; ++t) {
          rec.trials.add({row[0], row[1], cell(t), cell(n[t])});
          sum += static_cast<double>(n[t]);
        }
        row[8] = cell(sum / config.trials);
        row[2] = "ok";
      } else {
        row[2] = "ok (alpha below 0.01, sampling skipped)";
      }
      rec.summary.add(std::move(row));
    }
  }
  return rec;
}

std::string run_metadata_json(const RunRecord& record) {
  nlohmann::ordered_json j;
  j["schema_version"] = kCsvSchemaVersion;
  j["study"] = record.study;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(record.config.hash()));
  j["config_hash"] = std::string("fnv1a64:") + hash;
  j["config"] = record.config.canonical();
  j["seed"] = record.config.seed;
  j["rng"] = std::string(RngStream::kAlgorithm);
  j["library_version"] = kLibraryVersion;
  j["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  j["compiler"] = __VERSION__;
  j["files"] = {record.study + "_trials.csv", record.study + "_summary.csv",
                record.study + "_timings.csv"};
  return j.dump(2) + "\n";
}

void write_run_record(const RunRecord& record, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw InvalidInputError("cannot write " + name);
    out << text;
  };
  write(record.study + "_trials.csv", record.trials.to_csv());
  write(record.study + "_summary.csv", record.summary.to_csv());
  write(record.study + "_timings.csv", record.timings.to_csv());
  write(record.study + "_meta.json", run_metadata_json(record));
}

}  // namespace randsel
