// heavytail: command-line front end for the heavy-tail analysis pipeline.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "heavytail/analysis.hpp"
#include "heavytail/distributions.hpp"
#include "heavytail/error.hpp"
#include "heavytail/ingest.hpp"
#include "heavytail/kernels.hpp"
#include "heavytail/maxent.hpp"
#include "heavytail/synthetic.hpp"
#include "heavytail/tailfit.hpp"

namespace fs = std::filesystem;
using heavytail::Error;
using heavytail::ErrorCode;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitCompute = 4;

constexpr const char* kExitHelp =
    "Exit status: 0 success, 2 usage or invalid parameters, 3 unreadable or "
    "invalid input, 4 computation error (infeasible problem, insufficient tail, "
    "solver failure, ...).";

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::config: return kExitUsage;
    case ErrorCode::schema:
    case ErrorCode::empty_input:
    case ErrorCode::io: return kExitInput;
    default: return kExitCompute;
  }
}

// Everything is rendered in memory first; files are written to temporaries
// and renamed only once all of them exist.
class OutputSet {
 public:
  void add(fs::path path, std::string content) {
    files_.push_back({std::move(path), std::move(content)});
  }

  void commit() {
    std::vector<fs::path> temps;
    try {
      for (const auto& [path, content] : files_) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".partial";
        std::ofstream out(tmp, std::ios::binary);
        temps.push_back(tmp);
        out << content;
        out.close();
        if (!out) heavytail::fail(ErrorCode::io, "cannot write " + tmp.string());
      }
      for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], files_[i].path);
    } catch (const fs::filesystem_error& e) {
      cleanup(temps);
      heavytail::fail(ErrorCode::io, e.what());
    } catch (...) {
      cleanup(temps);
      throw;
    }
  }

 private:
  static void cleanup(const std::vector<fs::path>& temps) {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  }

  struct File {
    fs::path path;
    std::string content;
  };
  std::vector<File> files_;
};

void emit(const std::string& output, std::string content) {
  if (output.empty() || output == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  OutputSet set;
  set.add(output, std::move(content));
  set.commit();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) heavytail::fail(ErrorCode::io, "cannot open " + path);
  return in;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      heavytail::fail(ErrorCode::config, "not a number in list: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string render_values(std::span<const double> values) {
  std::ostringstream out;
  heavytail::write_values(out, values);
  return out.str();
}

std::string render_columns(const heavytail::analysis::PlotData& p) {
  std::ostringstream out;
  heavytail::write_columns(out, p.x_name, p.y_name, p.x, p.y);
  return out.str();
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  std::string delimiter = ",";
  heavytail::analysis::AnalysisConfig config;
  bool refit = false;
  std::string out_dir = ".";
};

int run_analyze(AnalyzeArgs& a) {
  if (a.delimiter == "\\t" || a.delimiter == "tab") a.delimiter = "\t";
  if (a.delimiter.size() != 1) {
    heavytail::fail(ErrorCode::config, "delimiter must be a single character");
  }
  heavytail::ingest::Schema schema;
  schema.delimiter = a.delimiter[0];
  a.config.delimiter = schema.delimiter;
  a.config.input_label = fs::path(a.input).filename().string();
  a.config.refit = a.refit ? heavytail::gof::RefitMode::refit : heavytail::gof::RefitMode::fixed;

  std::ifstream in = open_input(a.input);
  const auto parsed = heavytail::ingest::parse_records(in, schema);
  const auto result = heavytail::analysis::analyze(parsed, a.config);

  OutputSet out;
  const fs::path dir(a.out_dir);
  out.add(dir / "report.json", heavytail::analysis::report_text(result.report));
  for (const auto& p : result.plots) out.add(dir / p.file_name, render_columns(p));
  out.commit();
  std::cerr << "wrote report.json and " << result.plots.size() << " plot files to "
            << dir.string() << "\n";
  return kExitOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string family;
  double alpha = 0.0;
  double beta = 0.0;
  double q = 0.0;
  double scale = 1.0;
  std::optional<double> x_min;
  std::string solution;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string output;
};

heavytail::maxent::MaxEntSolution read_solution(const std::string& path) {
  std::ifstream in = open_input(path);
  heavytail::maxent::MaxEntSolution sol;
  try {
    const auto j = ordered_json::parse(in);
    sol.levels = j.at("levels").get<std::vector<double>>();
    sol.probabilities = j.at("probabilities").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    heavytail::fail(ErrorCode::schema, "solution file " + path + ": " + e.what());
  }
  if (sol.levels.size() != sol.probabilities.size() || sol.levels.empty()) {
    heavytail::fail(ErrorCode::schema, "solution file " + path +
                                           ": levels and probabilities differ in length");
  }
  return sol;
}

int run_simulate(const SimulateArgs& a) {
  namespace dist = heavytail::dist;
  if (a.n == 0) heavytail::fail(ErrorCode::config, "-n must be at least 1");
  std::vector<double> values;
  if (a.family == "maxent") {
    if (a.solution.empty()) {
      heavytail::fail(ErrorCode::config, "--family maxent needs --solution");
    }
    const auto sol = read_solution(a.solution);
    const auto s = heavytail::maxent::generate_synthetic(sol, a.n, a.seed);
    values.assign(s.values().begin(), s.values().end());
  } else {
    std::optional<dist::DistributionSpec> spec;
    try {
      if (a.family == "pareto") {
        spec = dist::DistributionSpec::pareto(a.alpha, a.x_min.value_or(1.0));
      } else if (a.family == "exponential") {
        spec = dist::DistributionSpec::exponential(a.beta, a.x_min.value_or(0.0));
      } else {
        spec = dist::DistributionSpec::q_exponential(a.q, a.scale, a.x_min.value_or(0.0));
      }
    } catch (const Error& e) {
      // Bad distribution parameters are a usage problem, not a failed computation.
      throw Error(ErrorCode::config, e.what());
    }
    const auto s = dist::sample(*spec, a.n, a.seed);
    values.assign(s.values().begin(), s.values().end());
  }
  emit(a.output, render_values(values));
  return kExitOk;
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string method = "mle";
  std::optional<double> cutoff;
  bool standardize = false;
  std::optional<double> anchor;
  std::size_t top_k = heavytail::tailfit::kDefaultTopK;
  std::string output;
};

ordered_json tail_fit_json(const heavytail::tailfit::TailFit& f) {
  ordered_json j;
  j["family"] = std::string(heavytail::dist::to_string(f.family));
  j["method"] = f.method == heavytail::tailfit::Method::mle ? "mle" : "regression";
  j["exponent"] = f.exponent;
  j["std_error"] = f.std_error;
  j["cutoff"] = f.cutoff;
  j["n_points"] = f.n_points;
  j["r_squared"] = f.r_squared ? ordered_json(*f.r_squared) : ordered_json(nullptr);
  return j;
}

int run_fit(const FitArgs& a) {
  namespace tf = heavytail::tailfit;
  std::ifstream in = open_input(a.input);
  const heavytail::Sample raw(heavytail::read_values(in), heavytail::SampleKind::synthetic);
  double scale = 1.0;
  std::optional<heavytail::Sample> standardized;
  if (a.standardize) {
    auto s = heavytail::ingest::standardize(raw);
    scale = s.scale;
    standardized.emplace(std::move(s.values));
  }
  const heavytail::Sample& sample = standardized ? *standardized : raw;

  ordered_json j;
  j["n"] = sample.size();
  j["scale"] = scale;
  if (a.method == "mle" || a.method == "regression") {
    const double cutoff = a.cutoff.value_or(
        *std::min_element(sample.values().begin(), sample.values().end()));
    const tf::TailSelection tail = tf::select_tail(sample, cutoff);
    j["n_tail"] = tail.n_tail();
    j["fit"] = tail_fit_json(a.method == "mle" ? tf::fit_power_mle(tail)
                                               : tf::fit_power_regression(tail));
  } else if (a.method == "exponential") {
    j["fit"] = tail_fit_json(tf::fit_exponential(sample, a.anchor));
  } else {
    const tf::ZipfFit z = tf::fit_zipf(sample, a.top_k);
    j["zipf"] = {{"gamma", z.gamma},
                 {"intercept", z.intercept},
                 {"r_squared", z.r_squared},
                 {"top_k", z.top_k}};
  }
  emit(a.output, j.dump(2) + "\n");
  return kExitOk;
}

// ---- maxent ---------------------------------------------------------------

struct MaxEntArgs {
  std::string levels;
  std::string log_levels;
  std::string linear_levels;
  double target = 0.0;
  std::string entropy = "shannon";
  double q = 1.0;
  std::string output;
  std::string plot;
};

std::vector<double> build_levels(const MaxEntArgs& a) {
  const int given = !a.levels.empty() + !a.log_levels.empty() + !a.linear_levels.empty();
  if (given != 1) {
    heavytail::fail(ErrorCode::config,
                    "give exactly one of --levels, --log-levels, --linear-levels");
  }
  if (!a.levels.empty()) return parse_list(a.levels);
  const auto spec = parse_list(a.log_levels.empty() ? a.linear_levels : a.log_levels);
  if (spec.size() != 3 || !(spec[2] >= 2.0) || spec[2] != std::floor(spec[2])) {
    heavytail::fail(ErrorCode::config, "level grids take three values: a,b,count");
  }
  const auto count = static_cast<std::size_t>(spec[2]);
  try {
    return a.log_levels.empty() ? heavytail::maxent::linear_levels(spec[0], spec[1], count)
                                : heavytail::maxent::log_spaced_levels(spec[0], spec[1], count);
  } catch (const Error& e) {
    throw Error(ErrorCode::config, e.what());
  }
}

int run_maxent(const MaxEntArgs& a) {
  namespace me = heavytail::maxent;
  me::MaxEntProblem problem;
  problem.levels = build_levels(a);
  problem.target_mean = a.target;
  problem.entropy = a.entropy == "tsallis" ? me::Entropy::tsallis : me::Entropy::shannon;
  problem.q = a.q;
  if (problem.entropy == me::Entropy::tsallis && !(a.q > 0.0 && a.q != 1.0 && std::isfinite(a.q))) {
    heavytail::fail(ErrorCode::config, "tsallis needs --q > 0 and different from 1");
  }
  const me::MaxEntSolution sol = me::solve(problem);

  ordered_json j;
  j["entropy"] = std::string(me::to_string(sol.entropy));
  j["q"] = sol.q;
  j["target_mean"] = sol.target_mean;
  j["achieved_mean"] = sol.achieved_mean;
  j["kappa"] = sol.kappa;
  j["lambda"] = sol.lambda;
  j["beta"] = sol.beta;
  j["reference_level"] = sol.reference_level;
  j["entropy_value"] = sol.entropy_value;
  j["iterations"] = sol.iterations;
  j["levels"] = sol.levels;
  j["probabilities"] = sol.probabilities;

  OutputSet out;
  const bool to_stdout = a.output.empty() || a.output == "-";
  if (!to_stdout) out.add(a.output, j.dump(2) + "\n");
  if (!a.plot.empty()) {
    std::ostringstream tsv;
    heavytail::write_columns(tsv, "level", "probability", sol.levels, sol.probabilities);
    out.add(a.plot, tsv.str());
  }
  out.commit();
  if (to_stdout) std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
  heavytail::synthetic::DatasetConfig config;
  std::string output;
};

int run_generate(const GenerateArgs& a) {
  const auto data = heavytail::synthetic::generate_dataset(a.config);
  std::ostringstream out;
  heavytail::synthetic::write_records(out, data.records);
  emit(a.output, out.str());
  std::cerr << "generated " << data.records.size() << " records\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tail analysis of procurement registries: tail fits, rank-size "
               "fits, bootstrap goodness of fit, concentration and maximum-entropy "
               "models."};
  app.footer(kExitHelp);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(heavytail::analysis::tool_version()));

  std::string simd_backend = "auto";
  app.add_option("--simd", simd_backend, "Kernel backend: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand(
      "analyze", "Ingest a record file and write report.json plus six plot files");
  analyze->add_option("--input", an.input, "Record file with a header row")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--delimiter", an.delimiter, "Field delimiter (use 'tab' for TSV)")
      ->capture_default_str();
  analyze->add_option("--floor", an.config.floor, "Drop entity totals below this amount")
      ->capture_default_str();
  analyze->add_option("--cutoff", an.config.cutoff,
                      "Tail cutoff in standard deviations")
      ->capture_default_str();
  analyze->add_option("--replicates", an.config.replicates, "Bootstrap replicates")
      ->capture_default_str();
  analyze->add_option("--top-k", an.config.top_k, "Largest values in the rank-size fit")
      ->capture_default_str();
  analyze->add_option("--seed", an.config.seed, "Bootstrap seed")->required();
  analyze->add_flag("--refit", an.refit, "Re-estimate the exponent on every replicate");
  analyze->add_option("--out-dir", an.out_dir, "Output directory")->capture_default_str();
  analyze->add_option("--workers", an.config.workers,
                      "Bootstrap threads (0: all cores); results do not depend on it")
      ->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a seeded sample, one value per line");
  simulate->add_option("--family", sim.family, "pareto, exponential, q-exponential or maxent")
      ->required()
      ->check(CLI::IsMember({"pareto", "exponential", "q-exponential", "maxent"}));
  simulate->add_option("--alpha", sim.alpha, "Pareto tail exponent");
  simulate->add_option("--beta", sim.beta, "Exponential rate");
  simulate->add_option("--q", sim.q, "q-exponential index, 1 < q < 2");
  simulate->add_option("--scale", sim.scale, "q-exponential scale")->capture_default_str();
  simulate->add_option("--x-min", sim.x_min, "Support lower bound");
  simulate->add_option("--solution", sim.solution, "maxent solution JSON (family maxent)");
  simulate->add_option("-n", sim.n, "Sample size")->required();
  simulate->add_option("--seed", sim.seed, "Seed")->required();
  simulate->add_option("--output,-o", sim.output, "Output file (default stdout)");

  FitArgs fit;
  auto* fitcmd = app.add_subcommand("fit", "Fit a one-value-per-line sample");
  fitcmd->add_option("--input", fit.input, "Values file")->required()->check(CLI::ExistingFile);
  fitcmd->add_option("--method", fit.method, "mle, regression, exponential or zipf")
      ->check(CLI::IsMember({"mle", "regression", "exponential", "zipf"}))
      ->capture_default_str();
  fitcmd->add_option("--cutoff", fit.cutoff, "Tail cutoff (default: sample minimum)");
  fitcmd->add_flag("--standardize", fit.standardize, "Divide by the standard deviation first");
  fitcmd->add_option("--anchor", fit.anchor,
                     "Exponential: fixed-intercept anchor (default: MLE)");
  fitcmd->add_option("--top-k", fit.top_k, "Rank-size fit length")->capture_default_str();
  fitcmd->add_option("--output,-o", fit.output, "Output JSON (default stdout)");

  MaxEntArgs me;
  auto* maxent = app.add_subcommand("maxent", "Solve a mean-constrained maximum-entropy problem");
  maxent->add_option("--levels", me.levels, "Comma-separated increasing levels");
  maxent->add_option("--log-levels", me.log_levels, "lo,hi,count log-spaced grid");
  maxent->add_option("--linear-levels", me.linear_levels, "first,step,count grid");
  maxent->add_option("--target", me.target, "Target mean")->required();
  maxent->add_option("--entropy", me.entropy, "shannon or tsallis")
      ->check(CLI::IsMember({"shannon", "tsallis"}))
      ->capture_default_str();
  maxent->add_option("--q", me.q, "Tsallis index (q > 0, q != 1)");
  maxent->add_option("--output,-o", me.output, "Output JSON (default stdout)");
  maxent->add_option("--plot", me.plot, "Also write level/probability TSV here");

  GenerateArgs gen;
  auto* generate = app.add_subcommand(
      "generate", "Write a synthetic record file with known generating laws");
  generate->add_option("--seed", gen.config.seed, "Seed")->required();
  generate->add_option("--suppliers", gen.config.n_suppliers)->capture_default_str();
  generate->add_option("--authorities", gen.config.n_authorities)->capture_default_str();
  generate->add_option("--revenue-alpha", gen.config.revenue_tail_exponent)
      ->capture_default_str();
  generate->add_option("--spending-alpha", gen.config.spending_tail_exponent)
      ->capture_default_str();
  generate->add_option("--bidder-kappa", gen.config.bidder_kappa)->capture_default_str();
  generate->add_option("--output,-o", gen.output, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simd_backend == "scalar") {
      heavytail::simd::select(heavytail::simd::Backend::scalar);
    } else if (simd_backend == "avx2") {
      heavytail::simd::select(heavytail::simd::Backend::avx2);
    }
    if (*analyze) return run_analyze(an);
    if (*simulate) return run_simulate(sim);
    if (*fitcmd) return run_fit(fit);
    if (*maxent) return run_maxent(me);
    if (*generate) return run_generate(gen);
  } catch (const Error& e) {
    std::cerr << "heavytail: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "heavytail: internal error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitUsage;
}
