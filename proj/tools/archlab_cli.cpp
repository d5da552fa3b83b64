// archlab command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 domain/convergence error,
// 3 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "archlab/archlab.hpp"
#include "archlab/verify.hpp"

namespace {

using namespace archlab;

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = default_workers();
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads for grid evaluation")->check(CLI::PositiveNumber);
}

void emit(const CommonOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw Error("cannot open output file '" + o.out + "'");
  file << text;
}

// Turns a CSV document into a JSON array of flat records. Fields that parse
// completely as numbers stay numbers (inf/nan become null).
std::string csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  std::string out = "[";
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    JsonObject obj;
    for (std::size_t i = 0; std::getline(ls, cell, ',') && i < header.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size()) obj.add(header[i], v);
      else obj.add(header[i], std::string_view(cell));
    }
    out += (first ? "\n  " : ",\n  ") + obj.str();
    first = false;
  }
  return out + "\n]\n";
}

std::string formatted(const CommonOptions& o, const std::string& csv) {
  return o.format == "json" ? csv_to_json(csv) : csv;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
      throw ParseError("--rates: invalid number '" + cell + "'");
    }
    rates.push_back(v);
  }
  return rates;
}

// Reads one column of positive times. The header row names the columns.
std::vector<double> read_times(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      header.push_back(cell);
    }
  }
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) col = i;
  }
  if (col == header.size()) throw ParseError(path + ": line 1: no column named '" + column + "'");
  std::vector<double> data;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::size_t i = 0;
    bool found = false;
    while (std::getline(ls, cell, ',')) {
      if (i++ == col) {
        found = true;
        break;
      }
    }
    if (!found) throw ParseError(path + ": line " + std::to_string(lineno) + ": missing column '" + column + "'");
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
      throw ParseError(path + ": line " + std::to_string(lineno) + ": invalid number '" + cell + "'");
    }
    if (!(v > 0.0)) {
      throw DomainError(path + ": line " + std::to_string(lineno) + ": time must be positive, got " + cell);
    }
    data.push_back(v);
  }
  return data;
}

void require_count(std::uint64_t n, const char* flag) {
  if (n < 1) throw UsageError(std::string(flag) + " must be >= 1");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"archlab: serial/parallel processing-time model analysis"};
  app.require_subcommand(1);

  // figure
  CommonOptions fig_opt;
  std::string fig_id;
  std::optional<double> fig_k, fig_u, fig_v;
  std::optional<std::size_t> fig_steps;
  std::vector<double> fig_axis1, fig_axis2;
  auto* fig = app.add_subcommand("figure", "Emit the data grid behind a figure (fig4..fig7)");
  fig->add_option("id", fig_id, "fig4 | fig5 | fig6 | fig7")->required();
  fig->add_option("--k", fig_k, "Weibull shape override");
  fig->add_option("--u", fig_u, "Weibull rate (fig6)");
  fig->add_option("--v", fig_v, "Uniform upper bound (fig7)");
  fig->add_option("--steps", fig_steps, "Points per axis");
  fig->add_option("--axis1", fig_axis1, "First axis MIN MAX")->expected(2);
  fig->add_option("--axis2", fig_axis2, "Second axis MIN MAX")->expected(2);
  add_common(fig, fig_opt);

  // theorem1
  CommonOptions t1_opt;
  t1_opt.format = "json";
  std::uint64_t t1_n = 1'000'000;
  auto* t1 = app.add_subcommand("theorem1", "Random (alpha, beta) sign probe of the p = 1/2 bracket");
  t1->add_option("--n", t1_n, "Number of (alpha, beta) pairs")->capture_default_str();
  add_common(t1, t1_opt);

  // dependence
  CommonOptions dep_opt;
  std::string dep_dist;
  double dep_p = 0.5;
  std::optional<double> dep_min, dep_max;
  std::size_t dep_steps = 100;
  auto* dep = app.add_subcommand("dependence", "Serial total-completion-time dependence profile over tau");
  dep->add_option("--dist", dep_dist, "Distribution spec, e.g. exp:u=1")->required();
  dep->add_option("--p", dep_p, "Probability that a is processed first")->capture_default_str();
  dep->add_option("--tau-min", dep_min, "Smallest tau (default: 1% quantile)");
  dep->add_option("--tau-max", dep_max, "Largest tau (default: 99.9% quantile)");
  dep->add_option("--steps", dep_steps, "Number of tau points")->capture_default_str();
  add_common(dep, dep_opt);

  // stage-survival
  CommonOptions st_opt;
  std::string st_dist;
  std::optional<double> st_tmin, st_tmax, st_amin, st_amax;
  std::size_t st_steps = 100;
  auto* st = app.add_subcommand("stage-survival", "Parallel-model stage survival grid over (t, Ta)");
  st->add_option("--dist", st_dist, "Distribution spec")->required();
  st->add_option("--t-min", st_tmin, "Smallest stage-2 duration t (default 0)");
  st->add_option("--t-max", st_tmax, "Largest t (default: 99% quantile)");
  st->add_option("--ta-min", st_amin, "Smallest first completion time Ta (default 0)");
  st->add_option("--ta-max", st_amax, "Largest Ta (default: 99% quantile)");
  st->add_option("--steps", st_steps, "Points per axis")->capture_default_str();
  add_common(st, st_opt);

  // simulate
  CommonOptions sim_opt;
  std::string sim_arch;
  std::string sim_dist;
  double sim_p = 0.5;
  std::string sim_rates;
  std::uint64_t sim_n = 1000;
  auto* sim = app.add_subcommand("simulate", "Write a trial trace");
  sim->add_option("architecture", sim_arch, "serial | parallel | recall-serial | recall-parallel")
      ->required()
      ->check(CLI::IsMember({"serial", "parallel", "recall-serial", "recall-parallel"}));
  sim->add_option("--dist", sim_dist, "Distribution spec (serial, parallel)");
  sim->add_option("--p", sim_p, "Probability that a goes first (serial)")->capture_default_str();
  sim->add_option("--rates", sim_rates, "Comma-separated item rates (recall)");
  sim->add_option("--n", sim_n, "Number of trials")->capture_default_str();
  add_common(sim, sim_opt);

  // fit
  CommonOptions fit_opt;
  fit_opt.format = "json";
  std::string fit_input;
  std::string fit_column = "time";
  auto* fit = app.add_subcommand("fit", "Weibull maximum-likelihood fit of completion times");
  fit->add_option("--input", fit_input, "CSV file with a header row")->required();
  fit->add_option("--column", fit_column, "Column holding the times")->capture_default_str();
  add_common(fit, fit_opt);

  // verify
  CommonOptions ver_opt;
  std::string ver_suite = "all";
  auto* ver = app.add_subcommand("verify", "Run the built-in invariant checks");
  ver->add_option("suite", ver_suite, "all | analysis | mc | recall")
      ->check(CLI::IsMember({"all", "analysis", "mc", "recall"}));
  add_common(ver, ver_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (fig->parsed()) {
      FigureOverrides ov;
      ov.k = fig_k;
      ov.u = fig_u;
      ov.v = fig_v;
      ov.steps = fig_steps;
      if (!fig_axis1.empty()) ov.first_range = std::pair{fig_axis1[0], fig_axis1[1]};
      if (!fig_axis2.empty()) ov.second_range = std::pair{fig_axis2[0], fig_axis2[1]};
      const FigureId id = parse_figure_id(fig_id);
      const auto setup = figure_setup(id, ov);
      std::ostringstream os;
      if (id == FigureId::fig4 || id == FigureId::fig5) {
        expression3_surface(figure_shape(setup), setup.grid, fig_opt.workers).write_csv(os);
      } else {
        stage_survival_grid(ParallelTwoModel{setup.dist}, setup.grid, fig_opt.workers).write_csv(os);
      }
      emit(fig_opt, formatted(fig_opt, os.str()));
    } else if (t1->parsed()) {
      require_count(t1_n, "--n");
      const auto r = run_theorem1_mc(t1_n, t1_opt.seed, t1_opt.workers);
      if (t1_opt.format == "json") {
        emit(t1_opt, r.to_json() + "\n");
      } else {
        emit(t1_opt, "n_samples,n_conditioned,fraction_positive,stderr,seed\n" + std::to_string(r.n_samples) +
                         "," + std::to_string(r.n_conditioned) + "," + format_number(r.fraction_positive) + "," +
                         format_number(r.stderr) + "," + std::to_string(r.seed) + "\n");
      }
    } else if (dep->parsed()) {
      const SerialTwoModel model(parse_distribution(dep_dist), dep_p);
      if (dep_steps < 2) throw UsageError("--steps must be >= 2");
      const Axis axis{"tau", dep_min.value_or(model.dist.quantile(0.01)),
                      dep_max.value_or(model.dist.quantile(0.999)), dep_steps};
      std::ostringstream os;
      dependence_profile(model, axis, dep_opt.workers).write_csv(os);
      emit(dep_opt, formatted(dep_opt, os.str()));
    } else if (st->parsed()) {
      const ParallelTwoModel model{parse_distribution(st_dist)};
      if (st_steps < 2) throw UsageError("--steps must be >= 2");
      const double top = model.dist.quantile(0.99);
      const GridSpec grid{Axis{"t", st_tmin.value_or(0.0), st_tmax.value_or(top), st_steps},
                          Axis{"Ta", st_amin.value_or(0.0), st_amax.value_or(top), st_steps}};
      std::ostringstream os;
      stage_survival_grid(model, grid, st_opt.workers).write_csv(os);
      emit(st_opt, formatted(st_opt, os.str()));
    } else if (sim->parsed()) {
      require_count(sim_n, "--n");
      std::ostringstream os;
      if (sim_arch == "serial" || sim_arch == "parallel") {
        if (sim_dist.empty()) throw UsageError("--dist is required for " + sim_arch);
        const auto dist = parse_distribution(sim_dist);
        write_trace_header(os);
        auto row = [&](std::uint64_t i, const TrialRecord& r) { write_trace_row(os, i, r); };
        if (sim_arch == "serial") simulate_serial(SerialTwoModel(dist, sim_p), sim_n, sim_opt.seed, row);
        else simulate_parallel(ParallelTwoModel{dist}, sim_n, sim_opt.seed, row);
      } else {
        if (sim_rates.empty()) throw UsageError("--rates is required for " + sim_arch);
        const RecallModel model(parse_rates(sim_rates));
        write_recall_header(os);
        for (std::uint64_t i = 0; i < sim_n; ++i) {
          RngStream rng(sim_opt.seed, i);
          const auto trial = sim_arch == "recall-serial" ? sample_vu_serial(model, rng) : sample_parallel_expo(model, rng);
          write_recall_rows(os, i, trial);
        }
      }
      emit(sim_opt, formatted(sim_opt, os.str()));
    } else if (fit->parsed()) {
      const auto data = read_times(fit_input, fit_column);
      const auto result = weibull_mle(data);
      if (fit_opt.format == "json") {
        emit(fit_opt, to_json(result, data.size(), fit_opt.seed) + "\n");
      } else {
        emit(fit_opt, "k_hat,u_hat,loglik,converged,n,seed\n" + format_number(result.k_hat) + "," +
                          format_number(result.u_hat) + "," + format_number(result.loglik) + "," +
                          (result.converged ? "true" : "false") + "," + std::to_string(data.size()) + "," +
                          std::to_string(fit_opt.seed) + "\n");
      }
    } else if (ver->parsed()) {
      const auto results = verify::run_suite(verify::parse_suite(ver_suite), ver_opt.seed);
      std::ostringstream os;
      verify::write_report(os, results);
      emit(ver_opt, os.str());
      for (const auto& r : results) {
        if (!r.passed) return kExitVerify;
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const archlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}
