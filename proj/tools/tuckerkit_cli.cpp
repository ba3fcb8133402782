// tuckerkit: generate | decompose | bench | info
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O or format error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tuckerkit/errors.hpp"
#include "tuckerkit/genbench.hpp"
#include "tuckerkit/linalg.hpp"
#include "tuckerkit/report.hpp"
#include "tuckerkit/tnsr_io.hpp"

namespace tk = tuckerkit;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw tk::IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw tk::IoError("write failed: '" + path + "'");
}

void print(const json& j) { std::cout << tk::dump_json(j) << '\n'; }

// sigma_{k+1} / sigma_1 of every unfolding (0 when k == n).
template <tk::TensorScalar T>
json tail_ratios(const tk::DenseTensor<T>& b, const tk::Dims& core_dims) {
  json out = json::array();
  for (std::size_t l = 0; l < b.order(); ++l) {
    if (core_dims[l] >= b.dim(l)) {
      out.push_back(0.0);
      continue;
    }
    const Eigen::VectorXd s = tk::singular_values<T>(tk::unfold(b, l));
    out.push_back(s(0) > 0 ? s(static_cast<Eigen::Index>(core_dims[l])) / s(0) : 0.0);
  }
  return out;
}

// Leading min(k+1, n) singular values of every unfolding.
template <tk::TensorScalar T>
json probe(const tk::DenseTensor<T>& b, const tk::Dims& core_dims) {
  if (core_dims.size() != b.order())
    throw tk::DimensionError("--probe-core-dims needs one entry per mode");
  json out = json::array();
  for (std::size_t l = 0; l < b.order(); ++l) {
    const Eigen::VectorXd s = tk::singular_values<T>(tk::unfold(b, l));
    const auto count = std::min<Eigen::Index>(s.size(), static_cast<Eigen::Index>(core_dims[l]) + 1);
    out.push_back({{"mode", l + 1}, {"singular_values", std::vector<double>(s.data(), s.data() + count)}});
  }
  return out;
}

tk::AnyTensor read_input(const std::string& path) {
  if (path == "-") return tk::read_tnsr(std::cin);
  return tk::read_tnsr_file(path);
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  tk::Dims dims, core_dims;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::string kind = "real";
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  tk::SyntheticSpec spec{a.dims, a.core_dims, a.eta, a.seed, tk::parse_kind(a.kind)};
  const tk::AnyTensor t = tk::gen_synthetic_any(spec);
  tk::write_tnsr_file(a.out, t);
  json j = {{"path", a.out},
            {"dims", a.dims},
            {"core_dims", a.core_dims},
            {"kind", a.kind},
            {"eta", a.eta},
            {"seed", a.seed}};
  std::visit(
      [&](const auto& b) {
        j["norm"] = tk::frobenius_norm(b);
        j["tail_ratio"] = tail_ratios(b, a.core_dims);
      },
      t);
  print(j);
  return kOk;
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::string in;
  std::string method = "hooi";
  tk::Dims core_dims;
  std::string init = "hosvd";
  double eps_obj = 1e-12;
  double eps_kkt = 1e-8;
  std::size_t max_sweeps = 10000;
  bool greedy_align = false;
  std::size_t kkt_period = 1;
  std::string denominator = "estimate";
  std::string history;
  std::string factors_out;
  std::string summary;
};

template <tk::TensorScalar T>
int run_decompose(const tk::DenseTensor<T>& b, const DecomposeArgs& a) {
  tk::SolverConfig config;
  config.method = tk::parse_method(a.method);
  config.init = tk::parse_init(a.init);
  config.eps_obj = a.eps_obj;
  config.eps_kkt = a.eps_kkt;
  config.max_sweeps = a.max_sweeps;
  config.greedy_align = a.greedy_align;
  config.kkt_check_period = a.kkt_period;
  config.denominator = a.denominator == "exact" ? tk::DenominatorMode::ExactSpectral
                                                : tk::DenominatorMode::OneInfEstimate;

  const tk::SolveResult<T> res = tk::solve(b, a.core_dims, config);
  const double err = tk::approx_error(b, tk::reconstruct(res.core, res.factors));
  json summary = tk::summary_json(res, config, err);

  if (!a.factors_out.empty()) {
    const std::string core_path = a.factors_out + "_core.tnsr";
    tk::write_tnsr_file(core_path, tk::AnyTensor(res.core));
    json paths = json::array();
    for (std::size_t l = 0; l < b.order(); ++l) {
      const auto& p = res.factors.factor(l);
      std::vector<T> data(p.data(), p.data() + p.size());
      const std::string path = a.factors_out + "_factor" + std::to_string(l + 1) + ".tnsr";
      tk::write_tnsr_file(path, tk::AnyTensor(tk::DenseTensor<T>(
                                    {static_cast<std::size_t>(p.rows()),
                                     static_cast<std::size_t>(p.cols())},
                                    std::move(data))));
      paths.push_back(path);
    }
    summary["files"] = {{"core", core_path}, {"factors", std::move(paths)}};
  }
  if (!a.history.empty()) {
    write_text(a.history, tk::dump_json({{"initial_objective", res.initial_objective},
                                         {"records", tk::history_json(res.history)}}) +
                              "\n");
  }
  const std::string text = tk::dump_json(summary) + "\n";
  if (!a.summary.empty()) write_text(a.summary, text);
  std::cout << text;
  return kOk;
}

int cmd_decompose(const DecomposeArgs& a) {
  const tk::AnyTensor t = read_input(a.in);
  return std::visit([&](const auto& b) { return run_decompose(b, a); }, t);
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string plan;
  std::string preset;
  std::size_t seeds = 3;
  std::size_t scale = 1;
  std::string kind = "real";
  std::size_t repetitions = 1;
  std::size_t workers = 1;
  std::string out = "bench";
  bool no_histories = false;
};

std::size_t thread_cap() {
  const char* env = std::getenv("TUCKERKIT_THREADS");
  if (env == nullptr || *env == '\0') return std::max(1u, std::thread::hardware_concurrency());
  try {
    return std::max<std::size_t>(1, std::stoul(env));
  } catch (const std::exception&) {
    throw tk::DimensionError(std::string("TUCKERKIT_THREADS is not a count: '") + env + "'");
  }
}

int cmd_bench(const BenchArgs& a) {
  std::vector<tk::BenchCell> plan;
  if (!a.preset.empty()) {
    if (a.preset != "paperlike-small")
      throw tk::DimensionError("unknown preset '" + a.preset + "'");
    plan = tk::preset_paperlike(a.scale, a.seeds, tk::parse_kind(a.kind));
  } else {
    std::ifstream is(a.plan);
    if (!is) throw tk::IoError("cannot open plan '" + a.plan + "'");
    json j;
    try {
      j = json::parse(is);
    } catch (const json::parse_error& e) {
      throw tk::FormatError(std::string("plan is not valid JSON: ") + e.what());
    }
    plan = tk::parse_plan(j);
  }

  tk::BenchOptions options;
  options.repetitions = a.repetitions;
  options.workers = std::min(a.workers, thread_cap());
  const tk::BenchReport report = tk::bench_sweep(plan, options);

  write_text(a.out + ".json", tk::dump_json(tk::to_json(report, !a.no_histories)) + "\n");
  {
    std::ofstream os(a.out + ".csv");
    if (!os) throw tk::IoError("cannot write '" + a.out + ".csv'");
    tk::write_bench_csv(os, report);
  }
  {
    std::ofstream os(a.out + "_long.csv");
    if (!os) throw tk::IoError("cannot write '" + a.out + "_long.csv'");
    tk::write_long_csv(os, report);
  }

  std::size_t failed = 0;
  for (const auto& r : report.rows) failed += r.ok ? 0 : 1;
  json out = tk::to_json(report, false);
  print({{"runs", report.rows.size()},
         {"failed", failed},
         {"files", {a.out + ".json", a.out + ".csv", a.out + "_long.csv"}},
         {"summaries", out["summaries"]}});
  for (const auto& r : report.rows)
    if (!r.ok) std::cerr << "cell " << r.cell << " failed: " << r.error << '\n';
  return !report.rows.empty() && failed == report.rows.size() ? kNumerical : kOk;
}

// ---------------------------------------------------------------- info

struct InfoArgs {
  std::string in;
  std::string raw;
  tk::Dims dims;
  tk::Dims probe_core_dims;
};

int cmd_info(const InfoArgs& a) {
  json j = {{"path", a.in}};
  if (!a.raw.empty()) {
    if (a.dims.empty()) throw tk::DimensionError("--raw requires --dims");
    const tk::RawType type = a.raw == "f32"   ? tk::RawType::F32
                             : a.raw == "f64" ? tk::RawType::F64
                                              : throw tk::DimensionError("--raw must be f32 or f64");
    std::ifstream file;
    std::istream* is = &std::cin;
    if (a.in != "-") {
      file.open(a.in, std::ios::binary);
      if (!file) throw tk::IoError("cannot open '" + a.in + "'");
      is = &file;
    }
    j["format"] = std::string("raw_") + a.raw;
    j["dims"] = a.dims;
    j["kind"] = "real";
    if (a.probe_core_dims.empty()) {
      j["norm"] = tk::raw_frobenius_norm(*is, type, a.dims);
    } else {
      const tk::DenseTensor<double> b = tk::read_raw(*is, type, a.dims);
      j["norm"] = tk::frobenius_norm(b);
      j["probe"] = probe(b, a.probe_core_dims);
    }
  } else {
    const tk::AnyTensor t = read_input(a.in);
    j["format"] = "tnsr1";
    j["dims"] = tk::dims_of(t);
    j["kind"] = tk::to_string(tk::kind_of(t));
    std::visit(
        [&](const auto& b) {
          j["norm"] = tk::frobenius_norm(b);
          if (!a.probe_core_dims.empty()) j["probe"] = probe(b, a.probe_core_dims);
        },
        t);
  }
  print(j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tucker decomposition by HOOI and ASI"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic near-Tucker tensor");
  g->add_option("--dims", gen.dims, "Tensor dimensions, e.g. 20,22,24")->required()->delimiter(',');
  g->add_option("--core-dims", gen.core_dims, "Core dimensions")->required()->delimiter(',');
  g->add_option("--eta", gen.eta, "Noise level")->required();
  g->add_option("--seed", gen.seed, "Generator seed")->required();
  g->add_option("--kind", gen.kind, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  g->add_option("--out", gen.out, "Output TNSR1 file")->required();

  DecomposeArgs dec;
  auto* d = app.add_subcommand("decompose", "Run HOOI or ASI on a tensor file");
  d->add_option("--in", dec.in, "Input TNSR1 file, or - for stdin")->required();
  d->add_option("--method", dec.method, "hooi or asi")->check(CLI::IsMember({"hooi", "asi"}));
  d->add_option("--core-dims", dec.core_dims, "Core dimensions")->required()->delimiter(',');
  d->add_option("--init", dec.init, "hosvd or random:SEED");
  d->add_option("--eps-obj", dec.eps_obj, "Relative objective-change tolerance");
  d->add_option("--eps-kkt", dec.eps_kkt, "Cheap KKT tolerance");
  d->add_option("--max-sweeps", dec.max_sweeps, "Sweep cap");
  d->add_flag("--greedy-align", dec.greedy_align, "Align each new factor with the previous one");
  d->add_option("--kkt-period", dec.kkt_period, "Sweeps between stopping tests");
  d->add_option("--denominator", dec.denominator, "KKT denominator: estimate or exact")
      ->check(CLI::IsMember({"estimate", "exact"}));
  d->add_option("--history", dec.history, "Write the iteration history JSON here");
  d->add_option("--factors-out", dec.factors_out,
                "Write PREFIX_core.tnsr and PREFIX_factorL.tnsr (L = 1..m)");
  d->add_option("--summary", dec.summary, "Also write the summary JSON here");

  BenchArgs ben;
  auto* bn = app.add_subcommand("bench", "Run a benchmark sweep");
  auto* plan_opt = bn->add_option("--plan", ben.plan, "JSON plan file (array of cells)");
  auto* preset_opt = bn->add_option("--preset", ben.preset, "paperlike-small");
  plan_opt->excludes(preset_opt);
  bn->add_option("--seeds", ben.seeds, "Seeds per preset cell");
  bn->add_option("--scale", ben.scale, "Preset size factor s (dims s*[100,110,120])");
  bn->add_option("--kind", ben.kind, "Preset scalar kind")->check(CLI::IsMember({"real", "complex"}));
  bn->add_option("--repetitions", ben.repetitions, "Runs per cell");
  bn->add_option("--workers", ben.workers, "Concurrent cells (capped by TUCKERKIT_THREADS)");
  bn->add_option("--out", ben.out, "Output prefix for .json, .csv and _long.csv");
  bn->add_flag("--no-histories", ben.no_histories, "Omit per-run histories from the JSON");

  InfoArgs inf;
  auto* in = app.add_subcommand("info", "Describe a tensor file");
  in->add_option("--in", inf.in, "TNSR1 or raw file, or - for stdin")->required();
  in->add_option("--raw", inf.raw, "Headerless input of f32 or f64 values")
      ->check(CLI::IsMember({"f32", "f64"}));
  in->add_option("--dims", inf.dims, "Dimensions of a raw input")->delimiter(',');
  in->add_option("--probe-core-dims", inf.probe_core_dims,
                 "Report the leading k+1 singular values of every unfolding")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (*bn && ben.plan.empty() && ben.preset.empty()) {
    std::cerr << "bench: one of --plan or --preset is required\n" << bn->help();
    return kUsage;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*d) return cmd_decompose(dec);
    if (*bn) return cmd_bench(ben);
    return cmd_info(inf);
  } catch (const tk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const tk::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const tk::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kIo;
  } catch (const tk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
