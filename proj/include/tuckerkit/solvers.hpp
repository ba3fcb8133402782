#pragma once

// Alternating Gauss-Seidel solvers for the Tucker objective: the higher-order
// orthogonal iteration (HOOI) and the alternating subspace iteration (ASI).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tuckerkit/model.hpp"

namespace tuckerkit {

enum class Method { Hooi, Asi };
enum class InitKind { Random, Hosvd, Provided };
enum class Termination { KktConverged, ObjStalled, MaxSweeps };

const char* to_string(Method m);
const char* to_string(InitKind k);
const char* to_string(Termination t);

struct InitSpec {
  InitKind kind = InitKind::Random;
  std::uint64_t seed = 0;
};

struct SolverConfig {
  Method method = Method::Hooi;
  double eps_obj = 1e-12;
  double eps_kkt = 1e-8;
  std::size_t max_sweeps = 10000;
  InitSpec init;
  bool greedy_align = false;
  // Sweeps between evaluations of the stopping test.
  std::size_t kkt_check_period = 1;
  // Consecutive objective-flat checks required before ObjStalled.
  std::size_t stall_window = 3;
  DenominatorMode denominator = DenominatorMode::OneInfEstimate;
  bool record_series = true;

  // Throws DimensionError on nonpositive tolerances or zero counts.
  void validate() const;
};

struct ModeDiagnostics {
  // HOOI: gap lambda_k(H) - lambda_{k+1}(H). ASI: sigma_min(H P).
  double weight = 0.0;
  // HOOI only: the inner SVD had sigma_k == sigma_{k+1}.
  bool degenerate_gap = false;
  // ||sin Theta(R(P_new), R(P_old))||_F
  double sin_theta = 0.0;
  // ||H P - P Lambda||_F / ||H||_F at the pre-update factor
  double multiplier_residual = 0.0;
  // weight * sin_theta^2 and weight * multiplier_residual^2
  double series_subspace = 0.0;
  double series_residual = 0.0;
  // Normalized cheap-KKT contribution of this mode.
  double cheap_kkt = 0.0;
  bool pinned = false;
};

struct IterationRecord {
  std::size_t sweep = 0;   // 1-based; the sweep maps P^(sweep-1) to P^(sweep)
  double objective = 0.0;  // f at P^(sweep)
  double cheap_kkt = 0.0;  // evaluated with H_l^(sweep-1) at P^(sweep-1)
  std::vector<ModeDiagnostics> modes;
  double wall_seconds = 0.0;
};

template <TensorScalar T>
struct SolveResult {
  TuckerFactors<T> factors;
  DenseTensor<T> core;
  double initial_objective = 0.0;
  std::vector<IterationRecord> history{};
  Termination termination = Termination::MaxSweeps;
  KktReport<T> final_full_kkt{};
  double objective = 0.0;
  double norm_b = 0.0;
  std::vector<std::string> warnings{};
  double solve_seconds = 0.0;
};

// Each P_l = orthonormalized n_l x k_l standard Gaussian matrix (complex:
// independent real and imaginary parts), drawn mode by mode from one
// mt19937_64 stream seeded with `seed`.
template <TensorScalar T>
TuckerFactors<T> random_init(const Dims& dims, const Dims& core_dims, std::uint64_t seed);

// P_l = leading k_l left singular vectors of unfold(B, l).
template <TensorScalar T>
TuckerFactors<T> hosvd_init(const DenseTensor<T>& b, const Dims& core_dims);

// Top-k left singular vectors of C (the HOOI factor update). C may have fewer
// than k columns; the basis is then completed deterministically.
template <TensorScalar T>
StiefelFactor<T> hooi_update(const Matrix<T>& c, std::size_t k);

// Polar factor of C (C^H P) (the ASI factor update).
template <TensorScalar T>
StiefelFactor<T> asi_update(const Matrix<T>& c, const Matrix<T>& p);

// Produces the C_l matrices of a Gauss-Seidel sweep while reusing partial
// products. For m = 3 consecutive C matrices share one single-mode
// contraction (C_1,C_2 share B x_3 P_3^H; C_3 and the next sweep's C_1 share
// B x_2 P_2^H; and so on). Other orders contract every C from scratch.
template <TensorScalar T>
class SweepContractor {
 public:
  explicit SweepContractor(const DenseTensor<T>& b) : b_(b) {}

  // C_mode evaluated at the current `f`. `version[i]` must change whenever
  // factor i changes.
  Matrix<T> c_matrix(std::size_t mode, const TuckerFactors<T>& f,
                     const std::vector<std::uint64_t>& version);

 private:
  const DenseTensor<T>& b_;
  std::optional<DenseTensor<T>> partial_;
  std::size_t partial_mode_ = 0;
  std::uint64_t partial_version_ = 0;
};

// All C_l at one fixed tuple. For m = 3 two of them share a single-mode
// partial product, so three large contractions become two.
template <TensorScalar T>
std::vector<Matrix<T>> sweep_shared_contractions(const DenseTensor<T>& b,
                                                 const TuckerFactors<T>& f);

// Reference path: each C_l from scratch.
template <TensorScalar T>
std::vector<Matrix<T>> naive_contractions(const DenseTensor<T>& b, const TuckerFactors<T>& f);

// Runs config.method from config.init (InitKind::Provided requires `initial`).
// Modes with k_l == n_l are pinned to the identity. Throws NumericalError for
// a zero or non-finite B, or when iterates become non-finite.
template <TensorScalar T>
SolveResult<T> solve(const DenseTensor<T>& b, const Dims& core_dims, const SolverConfig& config,
                     const std::optional<TuckerFactors<T>>& initial = std::nullopt);

template <TensorScalar T>
SolveResult<T> hooi(const DenseTensor<T>& b, const Dims& core_dims, SolverConfig config,
                    const std::optional<TuckerFactors<T>>& initial = std::nullopt) {
  config.method = Method::Hooi;
  return solve(b, core_dims, config, initial);
}

template <TensorScalar T>
SolveResult<T> asi(const DenseTensor<T>& b, const Dims& core_dims, SolverConfig config,
                   const std::optional<TuckerFactors<T>>& initial = std::nullopt) {
  config.method = Method::Asi;
  return solve(b, core_dims, config, initial);
}

}  // namespace tuckerkit
