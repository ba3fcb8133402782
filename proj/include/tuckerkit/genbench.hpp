#pragma once

// Synthetic near-Tucker tensors, leading-order cost model and the benchmark
// sweep driver.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tuckerkit/solvers.hpp"
#include "tuckerkit/tnsr_io.hpp"

namespace tuckerkit {

struct SyntheticSpec {
  Dims dims;
  Dims core_dims;
  double eta = 0.0;
  std::uint64_t seed = 0;
  ScalarKind kind = ScalarKind::Real64;

  void validate() const;
};

// B = (T + eta E) x_1 Q_1 ... x_m Q_m where T is zero outside its leading
// core_dims block (standard Gaussian there), E is standard Gaussian and each
// Q_l is an orthonormalized Gaussian n_l x n_l matrix. Draw order from one
// mt19937_64(seed) stream: T block, E, then Q_1..Q_m; for complex kinds each
// array draws all real parts, then all imaginary parts.
template <TensorScalar T>
DenseTensor<T> gen_synthetic(const SyntheticSpec& spec);

AnyTensor gen_synthetic_any(const SyntheticSpec& spec);

// Leading-order flop terms of one sweep. form_c is shared by both methods;
// HOOI adds svd, ASI adds apply_gram (C (C^H P)) and polar. Complex kinds
// multiply every term by 4.
struct FlopEstimate {
  std::uint64_t form_c = 0;
  std::uint64_t svd = 0;
  std::uint64_t apply_gram = 0;
  std::uint64_t polar = 0;
  std::uint64_t total = 0;
};

FlopEstimate flop_estimate(const Dims& dims, const Dims& core_dims, Method method,
                           ScalarKind kind);

struct BenchCell {
  SyntheticSpec spec;
  Method method = Method::Hooi;
  InitSpec init;
  double eps_obj = 1e-12;
  double eps_kkt = 1e-8;
  std::size_t max_sweeps = 10000;
  bool greedy_align = false;
  std::string label;
};

struct BenchRow {
  std::size_t cell = 0;
  std::size_t repetition = 0;
  std::string label;
  Method method = Method::Hooi;
  InitSpec init;
  SyntheticSpec spec;
  bool ok = false;
  std::string error;
  std::size_t sweeps = 0;
  double cpu_seconds = 0.0;
  double final_cheap_kkt = 0.0;
  double final_full_kkt = 0.0;
  double approx_error = 0.0;
  double objective = 0.0;
  double norm_b = 0.0;
  Termination termination = Termination::MaxSweeps;
  bool monotone = true;
  std::vector<IterationRecord> history;
  double initial_objective = 0.0;
};

struct BenchSummary {
  std::string method;
  std::string init;
  std::string label;
  double eta = 0.0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  double median_sweeps = 0.0;
  double median_cpu_seconds = 0.0;
  double max_final_cheap_kkt = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summaries;
};

struct BenchOptions {
  std::size_t repetitions = 1;
  std::size_t workers = 1;
};

// Runs every cell `repetitions` times; repetition r shifts the generator seed
// and a random init seed by r. Cells run on up to `workers` threads; rows are
// ordered by (cell, repetition) regardless. A failing cell is recorded with
// ok = false and does not stop the sweep. Timing covers the solve only.
BenchReport bench_sweep(const std::vector<BenchCell>& plan, const BenchOptions& options);

// Parses a plan: a JSON array of cell objects (see schemas/bench_plan.schema.json).
std::vector<BenchCell> parse_plan(const nlohmann::json& j);

// dims s*[100,110,120], core [12,11,10], eta in {2^-3, 2^-4, 2^-5}, both
// methods with shared random inits, `seeds` seeds each.
std::vector<BenchCell> preset_paperlike(std::size_t s, std::size_t seeds, ScalarKind kind);

InitSpec parse_init(const std::string& text);
std::string to_string(const InitSpec& init);
Method parse_method(const std::string& text);
ScalarKind parse_kind(const std::string& text);

}  // namespace tuckerkit
