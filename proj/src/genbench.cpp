#include "tuckerkit/genbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "tuckerkit/errors.hpp"
#include "tuckerkit/random.hpp"

namespace tuckerkit {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

bool is_monotone(double f0, const std::vector<IterationRecord>& history) {
  double prev = f0;
  for (const auto& r : history) {
    if (r.objective < prev - 1e-12 * std::max(1.0, prev)) return false;
    prev = r.objective;
  }
  return true;
}

template <TensorScalar T>
void run_cell(const BenchCell& cell, BenchRow& row) {
  const DenseTensor<T> b = gen_synthetic<T>(row.spec);
  const TuckerFactors<T> init = row.init.kind == InitKind::Hosvd
                                    ? hosvd_init(b, row.spec.core_dims)
                                    : random_init<T>(b.dims(), row.spec.core_dims, row.init.seed);
  SolverConfig config;
  config.method = cell.method;
  config.eps_obj = cell.eps_obj;
  config.eps_kkt = cell.eps_kkt;
  config.max_sweeps = cell.max_sweeps;
  config.greedy_align = cell.greedy_align;
  config.init.kind = InitKind::Provided;

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult<T> res = solve(b, row.spec.core_dims, config, std::optional(init));
  row.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  row.sweeps = res.history.size();
  row.final_cheap_kkt = res.history.empty() ? 0.0 : res.history.back().cheap_kkt;
  row.final_full_kkt = res.final_full_kkt.total;
  row.approx_error = approx_error(b, reconstruct(res.core, res.factors));
  row.objective = res.objective;
  row.norm_b = res.norm_b;
  row.termination = res.termination;
  row.initial_objective = res.initial_objective;
  row.monotone = is_monotone(res.initial_objective, res.history);
  row.history = std::move(res.history);
  row.ok = true;
}

}  // namespace

void SyntheticSpec::validate() const {
  check_core_dims(dims, core_dims);
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw DimensionError("eta must be finite and >= 0");
}

template <TensorScalar T>
DenseTensor<T> gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.kind != kind_of<T>()) throw DimensionError("gen_synthetic: scalar kind mismatch");
  std::mt19937_64 rng(spec.seed);
  const std::size_t m = spec.dims.size();

  const Matrix<T> block = gaussian_matrix<T>(rng, dims_product(spec.core_dims), 1);
  const Matrix<T> noise = gaussian_matrix<T>(rng, dims_product(spec.dims), 1);

  DenseTensor<T> x(spec.dims);
  auto xd = x.data();
  for (std::size_t i = 0; i < xd.size(); ++i) xd[i] = spec.eta * noise(i);
  // scatter the leading block: colexicographic walk over core_dims
  std::vector<std::size_t> idx(m, 0);
  for (Eigen::Index lin = 0; lin < block.size(); ++lin) {
    x(idx) += block(lin);
    for (std::size_t l = 0; l < m; ++l) {
      if (++idx[l] < spec.core_dims[l]) break;
      idx[l] = 0;
    }
  }
  for (std::size_t l = 0; l < m; ++l) {
    const Matrix<T> q = orthonormalize<T>(gaussian_matrix<T>(rng, spec.dims[l], spec.dims[l]));
    x = mode_mul(x, l, q);
  }
  return x;
}

AnyTensor gen_synthetic_any(const SyntheticSpec& spec) {
  if (spec.kind == ScalarKind::Real64) return gen_synthetic<double>(spec);
  return gen_synthetic<cplx>(spec);
}

FlopEstimate flop_estimate(const Dims& dims, const Dims& core_dims, Method method,
                           ScalarKind kind) {
  check_core_dims(dims, core_dims);
  const std::size_t m = dims.size();
  std::uint64_t n_total = 1, k_total = 1, k_sum = 0, n_sum = 0;
  for (std::size_t l = 0; l < m; ++l) {
    n_total *= dims[l];
    k_total *= core_dims[l];
    k_sum += core_dims[l];
    n_sum += dims[l];
  }
  FlopEstimate e;
  e.form_c = n_total * k_sum;
  if (method == Method::Hooi) {
    for (std::size_t l = 0; l < m; ++l) {
      const std::uint64_t others = k_total / core_dims[l];
      e.svd += dims[l] * others * others;
    }
  } else {
    e.apply_gram = k_total * n_sum;
    for (std::size_t l = 0; l < m; ++l) e.polar += dims[l] * core_dims[l] * core_dims[l];
  }
  if (kind == ScalarKind::Complex128) {
    e.form_c *= 4;
    e.svd *= 4;
    e.apply_gram *= 4;
    e.polar *= 4;
  }
  e.total = e.form_c + e.svd + e.apply_gram + e.polar;
  return e;
}

BenchReport bench_sweep(const std::vector<BenchCell>& plan, const BenchOptions& options) {
  const std::size_t reps = std::max<std::size_t>(1, options.repetitions);
  BenchReport report;
  report.rows.resize(plan.size() * reps);
  for (std::size_t c = 0; c < plan.size(); ++c) {
    for (std::size_t r = 0; r < reps; ++r) {
      BenchRow& row = report.rows[c * reps + r];
      row.cell = c;
      row.repetition = r;
      row.label = plan[c].label;
      row.method = plan[c].method;
      row.spec = plan[c].spec;
      row.spec.seed += r;
      row.init = plan[c].init;
      if (row.init.kind == InitKind::Random) row.init.seed += r;
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < report.rows.size(); i = next++) {
      BenchRow& row = report.rows[i];
      try {
        if (row.spec.kind == ScalarKind::Real64) {
          run_cell<double>(plan[row.cell], row);
        } else {
          run_cell<cplx>(plan[row.cell], row);
        }
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  const std::size_t n_workers =
      std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(1, report.rows.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  using Key = std::tuple<std::string, std::string, std::string, double>;
  std::map<Key, std::vector<const BenchRow*>> groups;
  for (const auto& row : report.rows)
    groups[{row.label, to_string(row.method), to_string(row.init.kind), row.spec.eta}].push_back(
        &row);
  for (const auto& [key, rows] : groups) {
    BenchSummary s;
    std::tie(s.label, s.method, s.init, s.eta) = key;
    std::vector<double> sweeps, secs;
    for (const BenchRow* r : rows) {
      ++s.runs;
      if (!r->ok) {
        ++s.failed;
        continue;
      }
      sweeps.push_back(static_cast<double>(r->sweeps));
      secs.push_back(r->cpu_seconds);
      s.max_final_cheap_kkt = std::max(s.max_final_cheap_kkt, r->final_cheap_kkt);
    }
    s.median_sweeps = median(sweeps);
    s.median_cpu_seconds = median(secs);
    report.summaries.push_back(std::move(s));
  }
  return report;
}

InitSpec parse_init(const std::string& text) {
  if (text == "hosvd") return {InitKind::Hosvd, 0};
  if (text == "random") return {InitKind::Random, 0};
  const std::string prefix = "random:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    std::size_t used = 0;
    unsigned long long seed = 0;
    try {
      seed = std::stoull(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == num.size() && !num.empty()) return {InitKind::Random, seed};
  }
  throw DimensionError("init must be 'hosvd' or 'random:SEED', got '" + text + "'");
}

std::string to_string(const InitSpec& init) {
  if (init.kind == InitKind::Random) return "random:" + std::to_string(init.seed);
  return to_string(init.kind);
}

Method parse_method(const std::string& text) {
  if (text == "hooi") return Method::Hooi;
  if (text == "asi") return Method::Asi;
  throw DimensionError("method must be 'hooi' or 'asi', got '" + text + "'");
}

ScalarKind parse_kind(const std::string& text) {
  if (text == "real") return ScalarKind::Real64;
  if (text == "complex") return ScalarKind::Complex128;
  throw DimensionError("kind must be 'real' or 'complex', got '" + text + "'");
}

std::vector<BenchCell> parse_plan(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("bench plan must be a JSON array of cells");
  std::vector<BenchCell> plan;
  for (const auto& c : j) {
    try {
      BenchCell cell;
      cell.spec.dims = c.at("dims").get<Dims>();
      cell.spec.core_dims = c.at("core_dims").get<Dims>();
      cell.spec.eta = c.value("eta", 0.0);
      cell.spec.seed = c.value("seed", std::uint64_t{0});
      cell.spec.kind = parse_kind(c.value("kind", std::string("real")));
      cell.method = parse_method(c.value("method", std::string("hooi")));
      cell.init = parse_init(c.value("init", std::string("hosvd")));
      cell.eps_obj = c.value("eps_obj", cell.eps_obj);
      cell.eps_kkt = c.value("eps_kkt", cell.eps_kkt);
      cell.max_sweeps = c.value("max_sweeps", cell.max_sweeps);
      cell.greedy_align = c.value("greedy_align", false);
      cell.label = c.value("label", std::string());
      plan.push_back(std::move(cell));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("bad plan cell: ") + e.what());
    }
  }
  return plan;
}

std::vector<BenchCell> preset_paperlike(std::size_t s, std::size_t seeds, ScalarKind kind) {
  std::vector<BenchCell> plan;
  for (int e : {3, 4, 5}) {
    for (std::size_t seed = 1; seed <= seeds; ++seed) {
      for (Method method : {Method::Hooi, Method::Asi}) {
        BenchCell cell;
        cell.spec.dims = {100 * s, 110 * s, 120 * s};
        cell.spec.core_dims = {12, 11, 10};
        cell.spec.eta = std::ldexp(1.0, -e);
        cell.spec.seed = seed;
        cell.spec.kind = kind;
        cell.method = method;
        cell.init = {InitKind::Random, 1000 + seed};
        cell.label = "s=" + std::to_string(s);
        plan.push_back(std::move(cell));
      }
    }
  }
  return plan;
}

template DenseTensor<double> gen_synthetic<double>(const SyntheticSpec&);
template DenseTensor<cplx> gen_synthetic<cplx>(const SyntheticSpec&);

}  // namespace tuckerkit
