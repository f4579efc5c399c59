#include "memone/cli.hpp"

#include "memone/best_response.hpp"
#include "memone/evolution.hpp"
#include "memone/longer_memory.hpp"
#include "memone/noise_report.hpp"
#include "memone/zd_metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace memone::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

#ifndef MEMONE_VERSION
#define MEMONE_VERSION "unknown"
#endif

std::string join(const Eigen::Vector4d& v) {
  std::string out;
  for (int i = 0; i < 4; ++i) {
    if (i > 0) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string join(const std::vector<MemoryOneStrategy>& qs) {
  std::string out;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i > 0) out += ';';
    out += join(qs[i].vec());
  }
  return out;
}

ordered_json to_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json to_json(const SummaryStatistics& s) {
  return {{"count", s.count}, {"mean", s.mean},         {"std", s.std},          {"p5", s.p5},
          {"p50", s.p50},     {"p95", s.p95},           {"max", s.max},          {"median", s.median},
          {"skew", s.skewness}, {"kurtosis", s.kurtosis}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Deterministic run identifier from the command and its parameters.
std::string run_id(const std::string& name, const ordered_json& parameters) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name + parameters.dump()) h = (h ^ c) * 0x100000001b3ULL;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

/// Everything one experiment produces before it is written out.
struct ExperimentOutput {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  ordered_json summary = ordered_json::object();
  bool degenerate = false;
};

struct ExperimentArgs {
  std::string name;
  int trials = 0;  // 0 picks the experiment's default
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int n = 4;
  int opponents = 2;
  int starts = 32;
  std::optional<int> turns;
  std::optional<int> reps;
  std::optional<int> budget;
  bool full = false;
  std::string opponents_file;
  std::string payoffs = "3,1,0,5";
};

ExperimentOutput run_sse(const ExperimentArgs& a, const PayoffValues& pv, ordered_json& params) {
  SseExperimentOptions o;
  o.trials = a.trials > 0 ? a.trials : 1000;
  o.n_opponents = a.opponents;
  o.seed = a.seed;
  o.best_response.starts = a.starts;
  o.payoffs = pv;
  params["trials"] = o.trials;
  params["opponents"] = o.n_opponents;
  params["starts"] = o.best_response.starts;
  const auto report = sse_experiment(o);

  ExperimentOutput out;
  out.header = {"run_id", "trial", "opponents", "p1", "p2", "p3", "p4", "utility", "sse", "candidate_count",
                "provenance", "degenerate"};
  for (const auto& r : report.records) {
    const auto& p = r.best.strategy;
    out.rows.push_back({std::to_string(r.trial), join(r.opponents), format_double(p[0]), format_double(p[1]),
                        format_double(p[2]), format_double(p[3]), format_double(r.best.utility),
                        format_double(r.sse), std::to_string(r.best.candidate_count), to_string(r.best.provenance),
                        r.best.degenerate ? "true" : "false"});
    out.degenerate = out.degenerate || r.best.degenerate;
  }
  out.summary["sse"] = to_json(report.summary);
  out.summary["opponent_sampling"] = report.opponent_sampling;
  out.summary["moment_convention"] = report.moment_convention;
  return out;
}

ExperimentOutput run_gambler(const ExperimentArgs& a, const PayoffValues& pv, ordered_json& params) {
  ComparisonOptions o = a.full ? ComparisonOptions::full() : ComparisonOptions{};
  o.trials = a.trials > 0 ? a.trials : 10;
  o.seed = a.seed;
  o.n_opponents = a.opponents;
  o.best_response.starts = a.starts;
  o.payoffs = pv;
  if (a.turns) o.turns = *a.turns;
  if (a.reps) o.reps = *a.reps;
  if (a.budget) o.budget = *a.budget;
  params["trials"] = o.trials;
  params["opponents"] = o.n_opponents;
  params["turns"] = o.turns;
  params["reps"] = o.reps;
  params["budget"] = o.budget;
  params["preset"] = a.full ? "full" : "reduced";
  params["warm_start"] = o.warm_start;
  const auto records = compare_experiment(o);

  ExperimentOutput out;
  out.header = {"run_id",           "trial",          "opponents",           "memory_one",
                "memory_one_utility", "gambler_utility", "gambler_holdout_utility", "ratio",
                "gambler_parameters"};
  std::vector<double> ratios;
  for (const auto& r : records) {
    std::string params_text;
    const auto s = r.gambler.serialize();
    for (int i = 0; i < s.size(); ++i) params_text += (i > 0 ? "," : "") + format_double(s[i]);
    out.rows.push_back({std::to_string(r.trial), join(r.opponents), join(r.memory_one.vec()),
                        format_double(r.memory_one_utility), format_double(r.gambler_utility),
                        format_double(r.gambler_holdout_utility), format_double(r.ratio), params_text});
    ratios.push_back(r.ratio);
  }
  out.summary["ratio"] = to_json(summarize(ratios));
  out.summary["min_ratio"] = *std::min_element(ratios.begin(), ratios.end());
  out.summary["ratios_above_one"] = std::count_if(ratios.begin(), ratios.end(), [](double r) { return r > 1.0; });
  return out;
}

ExperimentOutput run_moran(const ExperimentArgs& a, const PayoffValues& pv, ordered_json& params) {
  const int trials = a.trials > 0 ? a.trials : 20;
  if (a.n < 2) throw UsageError("--n must be at least 2");
  std::vector<int> Ks;
  for (int K = 1; K <= std::min(3, a.n - 1); ++K) Ks.push_back(K);
  DynamicsOptions d;
  d.best_response.starts = a.starts;
  params["trials"] = trials;
  params["n"] = a.n;
  params["K_values"] = Ks;
  params["tol"] = d.tol;
  params["max_iter"] = d.max_iter;
  params["starts"] = a.starts;
  const auto report = dynamic_ratio_experiment(trials, a.n, a.seed, Ks, d, pv);

  ExperimentOutput out;
  out.header = {"run_id", "trial", "opponent", "K", "x", "x_tilde", "ratio", "strategy", "converged"};
  for (const auto& r : report.records) {
    for (std::size_t k = 0; k < r.result.K_values.size(); ++k) {
      const int K = r.result.K_values[k];
      out.rows.push_back({std::to_string(r.trial), join(r.opponent.vec()), std::to_string(K),
                          format_double(r.result.x[k]), format_double(r.result.x_tilde[k]),
                          format_double(r.result.ratio[k]), join(r.result.strategies[K - 1].vec()),
                          r.result.converged[K - 1] ? "true" : "false"});
    }
  }
  out.summary["ratio"] = to_json(report.summary);
  out.summary["mean_ratio"] = report.mean_ratio;
  out.summary["min_ratio"] = report.min_ratio;
  return out;
}

std::vector<std::vector<MemoryOneStrategy>> reference_stability_sets() {
  return {{MemoryOneStrategy(0.22199, 0.87073, 0.20672, 0.91861),
           MemoryOneStrategy(0.48841, 0.61174, 0.76591, 0.51842),
           MemoryOneStrategy(0.2968, 0.18772, 0.08074, 0.73844)},
          {MemoryOneStrategy(0.96703, 0.54723, 0.97268, 0.71482),
           MemoryOneStrategy(0.69773, 0.21609, 0.97627, 0.0062),
           MemoryOneStrategy(0.25298, 0.43479, 0.77938, 0.19769)}};
}

int sign_of(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }

ExperimentOutput run_stability(const ExperimentArgs& a, const PayoffValues& pv, ordered_json& params) {
  std::vector<std::vector<MemoryOneStrategy>> sets;
  if (a.opponents_file.empty()) {
    sets = reference_stability_sets();
    params["opponent_sets"] = "reference";
  } else {
    sets.push_back(read_opponents_file(a.opponents_file));
    if (sets.back().empty()) throw UsageError("opponents file is empty");
    params["opponent_sets"] = a.opponents_file;
  }
  ExperimentOutput out;
  out.header = {"run_id", "set",  "opponents", "stable", "inapplicable", "condition1", "condition2", "condition3",
                "condition4", "derivative1", "derivative2", "derivative3", "derivative4", "signs_agree"};
  int agree_all = 0;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto r = defection_stable(TournamentContext(sets[s], pv));
    bool agree = true;
    for (int i = 0; i < 4; ++i) agree = agree && sign_of(r.condition[i], 1e-10) == sign_of(r.derivative_at_zero[i], 1e-10);
    agree_all += agree ? 1 : 0;
    std::vector<std::string> row = {std::to_string(s), join(sets[s]), r.stable ? "true" : "false",
                                    r.inapplicable ? "true" : "false"};
    for (int i = 0; i < 4; ++i) row.push_back(format_double(r.condition[i]));
    for (int i = 0; i < 4; ++i) row.push_back(format_double(r.derivative_at_zero[i]));
    row.push_back(agree ? "true" : "false");
    out.rows.push_back(row);
  }
  out.summary["sets"] = sets.size();
  out.summary["sets_with_sign_agreement"] = agree_all;
  return out;
}

ExperimentOutput run_noise(const ExperimentArgs& a, const PayoffValues& pv, ordered_json& params) {
  NoiseReportOptions o;
  o.pairs = a.trials > 0 ? a.trials : 50;
  o.turns = a.turns.value_or(2000);
  o.repetitions = a.reps.value_or(20);
  o.seed = a.seed;
  o.payoffs = pv;
  params["pairs"] = o.pairs;
  params["turns"] = o.turns;
  params["reps"] = o.repetitions;
  params["noise_levels"] = o.noise_levels;
  const auto rows = noise_discrepancy_report(o);

  ExperimentOutput out;
  out.header = {"run_id", "noise", "pairs", "mean_signed_delta", "mean_abs_delta", "max_abs_delta",
                "fraction_within_3se", "flip_exact_mean_abs_delta", "flip_exact_fraction_within_3se"};
  ordered_json levels = ordered_json::array();
  for (const auto& r : rows) {
    out.rows.push_back({format_double(r.noise), std::to_string(r.pairs), format_double(r.mean_signed_delta),
                        format_double(r.mean_abs_delta), format_double(r.max_abs_delta),
                        format_double(r.fraction_within_3se), format_double(r.flip_exact_mean_abs_delta),
                        format_double(r.flip_exact_fraction_within_3se)});
    levels.push_back({{"noise", r.noise}, {"mean_abs_delta", r.mean_abs_delta}, {"max_abs_delta", r.max_abs_delta}});
  }
  out.summary["levels"] = levels;
  return out;
}

int cmd_experiment(const ExperimentArgs& a, bool strict, std::ostream& out, std::ostream& err) {
  const PayoffValues pv = parse_payoffs(a.payoffs);
  ordered_json params = {{"seed", a.seed}, {"payoffs", a.payoffs}};
  const std::string started = utc_now();
  ExperimentOutput result;
  if (a.name == "sse") {
    result = run_sse(a, pv, params);
  } else if (a.name == "gambler") {
    result = run_gambler(a, pv, params);
  } else if (a.name == "moran") {
    result = run_moran(a, pv, params);
  } else if (a.name == "stability") {
    result = run_stability(a, pv, params);
  } else if (a.name == "noise") {
    result = run_noise(a, pv, params);
  } else {
    throw UsageError("unknown experiment '" + a.name + "'");
  }
  const std::string id = run_id(a.name, params);

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  const fs::path csv_path = dir / (a.name + ".csv");
  const fs::path summary_path = dir / (a.name + "_summary.json");
  const fs::path manifest_path = dir / "manifest.json";

  std::string csv = csv_row(result.header);
  for (auto& row : result.rows) {
    row.insert(row.begin(), id);
    csv += csv_row(row);
  }
  write_file(csv_path, csv);

  ordered_json summary = {{"schema_version", kSchemaVersion},
                          {"experiment", a.name},
                          {"run_id", id},
                          {"manifest", manifest_path.filename().string()},
                          {"rows", result.rows.size()}};
  summary.update(result.summary);
  write_file(summary_path, summary.dump(2) + "\n");

  const ordered_json manifest = {{"command", "experiment " + a.name},
                                 {"run_id", id},
                                 {"version", MEMONE_VERSION},
                                 {"seed", a.seed},
                                 {"parameters", params},
                                 {"started_at", started},
                                 {"finished_at", utc_now()},
                                 {"outputs", {csv_path.string(), summary_path.string()}}};
  write_file(manifest_path, manifest.dump(2) + "\n");

  out << "wrote " << csv_path.string() << " (" << result.rows.size() << " rows), " << summary_path.string() << ", "
      << manifest_path.string() << "\n";
  if (result.degenerate) {
    err << "warning: some utilities needed the degenerate-denominator fallback\n";
    if (strict) return kExitDegenerate;
  }
  return kExitSuccess;
}

int cmd_utility(const std::string& p_text, const std::string& q_text, const std::string& payoffs_text,
                double noise, bool oracle, bool strict, std::ostream& out, std::ostream& err) {
  const MemoryOneStrategy p(parse_probability_vector(p_text));
  const MemoryOneStrategy q(parse_probability_vector(q_text));
  const PayoffValues pv = parse_payoffs(payoffs_text);
  if (!(noise >= 0.0 && noise <= 1.0)) throw UsageError("--noise must lie in [0,1]");
  const auto coeffs = noise > 0.0 ? noisy_coefficients(q, pv, noise) : coefficients(q, pv);
  const Evaluation e = utility(p, coeffs);
  out << std::setprecision(17);
  out << "utility " << e.value << "\n";
  if (oracle) {
    // The noisy closed form is the noiseless one with both strategies scaled
    // by 1 - noise, so the oracle solves that chain.
    const double s = 1.0 - noise;
    const double v = utility_stationary(MemoryOneStrategy(s * p.vec()), MemoryOneStrategy(s * q.vec()), pv);
    out << "oracle " << v << "\n";
    out << "difference " << std::abs(v - e.value) << "\n";
  }
  if (e.degenerate) {
    err << "warning: denominator vanishes at this pair; value uses the perturbed fallback\n";
    if (strict) return kExitDegenerate;
  }
  return kExitSuccess;
}

int cmd_best_response(const std::string& file, int starts, std::uint64_t seed, bool sse, int budget,
                      const std::string& payoffs_text, double noise, bool strict, std::ostream& out,
                      std::ostream& err) {
  const PayoffValues pv = parse_payoffs(payoffs_text);
  if (!(noise >= 0.0 && noise <= 1.0)) throw UsageError("--noise must lie in [0,1]");
  const auto opponents = read_opponents_file(file);
  if (opponents.empty()) throw UsageError("opponents file lists no strategies");
  BestResponseOptions o;
  o.starts = starts;
  o.seed = seed;
  o.optimizer_budget = budget;
  const auto r = best_response(TournamentContext(opponents, pv, noise), o);
  ordered_json j = {{"strategy", to_json(r.strategy.vec())},
                    {"utility", r.utility},
                    {"candidate_count", r.candidate_count},
                    {"provenance", to_string(r.provenance)},
                    {"degenerate", r.degenerate},
                    {"opponents", opponents.size()},
                    {"seed", seed}};
  if (sse) {
    const auto z = nearest_zd(r.strategy, pv);
    j["sse"] = z.sse;
    j["zd_parameters"] = to_json(z.x_star);
  }
  out << j.dump(2) << "\n";
  if (r.degenerate) {
    err << "warning: the winning utility used the degenerate-denominator fallback\n";
    if (strict) return kExitDegenerate;
  }
  return kExitSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory-one iterated prisoner's dilemma: utilities, best responses, experiments", "memone"};
  app.set_version_flag("--version", MEMONE_VERSION);
  app.require_subcommand(1);

  std::string p_text, q_text, payoffs = "3,1,0,5";
  double noise = 0.0;
  bool oracle = false, strict = false;
  auto* utility_cmd = app.add_subcommand("utility", "closed-form utility of P against Q");
  utility_cmd->add_option("P", p_text, "player strategy p1,p2,p3,p4")->required();
  utility_cmd->add_option("Q", q_text, "opponent strategy q1,q2,q3,q4")->required();
  utility_cmd->add_option("--payoffs", payoffs, "R,P,S,T")->capture_default_str();
  utility_cmd->add_option("--noise", noise, "noise probability")->capture_default_str();
  utility_cmd->add_flag("--oracle", oracle, "also solve the Markov chain and print the difference");
  utility_cmd->add_flag("--strict", strict, "exit 4 on a vanishing denominator");

  std::string file;
  int starts = 32, budget = 0;
  std::uint64_t seed = 0;
  bool sse = false;
  auto* br_cmd = app.add_subcommand("best-response", "best memory-one response to the strategies in FILE");
  br_cmd->add_option("FILE", file, "one strategy per line, '#' starts a comment")->required();
  br_cmd->add_option("--starts", starts, "Newton starts per face")->capture_default_str()->check(CLI::PositiveNumber);
  br_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  br_cmd->add_option("--budget", budget, "extra derivative-free search budget (0 disables)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  br_cmd->add_flag("--sse", sse, "report distance from the zero-determinant subspace");
  br_cmd->add_option("--payoffs", payoffs, "R,P,S,T")->capture_default_str();
  br_cmd->add_option("--noise", noise, "noise probability")->capture_default_str();
  br_cmd->add_flag("--strict", strict, "exit 4 on a vanishing denominator");

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "run an experiment and write CSV, JSON summary and manifest");
  ex_cmd->add_option("NAME", ex.name, "sse | gambler | moran | stability | noise")
      ->required()
      ->check(CLI::IsMember({"sse", "gambler", "moran", "stability", "noise"}));
  ex_cmd->add_option("--trials", ex.trials, "number of trials (pairs for noise)")->check(CLI::PositiveNumber);
  ex_cmd->add_option("--seed", ex.seed, "master seed")->capture_default_str();
  ex_cmd->add_option("--out", ex.out_dir, "output directory")->capture_default_str();
  ex_cmd->add_option("--n", ex.n, "population size (moran)")->capture_default_str();
  ex_cmd->add_option("--opponents", ex.opponents, "opponents per trial (sse, gambler)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ex_cmd->add_option("--starts", ex.starts, "Newton starts per face")->capture_default_str()->check(CLI::PositiveNumber);
  ex_cmd->add_option("--turns", ex.turns, "turns per match (gambler, noise)");
  ex_cmd->add_option("--reps", ex.reps, "repetitions per match (gambler, noise)");
  ex_cmd->add_option("--budget", ex.budget, "Gambler optimizer budget");
  ex_cmd->add_flag("--full", ex.full, "gambler: 500 turns and 200 repetitions instead of the reduced preset");
  ex_cmd->add_option("--file", ex.opponents_file, "stability: opponents file instead of the reference sets");
  ex_cmd->add_option("--payoffs", ex.payoffs, "R,P,S,T")->capture_default_str();
  ex_cmd->add_flag("--strict", strict, "exit 4 if any utility needed the degenerate fallback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (*utility_cmd) return cmd_utility(p_text, q_text, payoffs, noise, oracle, strict, out, err);
    if (*br_cmd) return cmd_best_response(file, starts, seed, sse, budget, payoffs, noise, strict, out, err);
    if (*ex_cmd) return cmd_experiment(ex, strict, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace memone::cli
