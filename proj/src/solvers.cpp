#include "tuckerkit/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "tuckerkit/errors.hpp"
#include "tuckerkit/random.hpp"

namespace tuckerkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Contracts a single mode with P^H unless the factor is the identity.
template <TensorScalar T>
DenseTensor<T> contract_one(const DenseTensor<T>& x, const TuckerFactors<T>& f, std::size_t mode) {
  if (f.is_identity(mode)) return x;
  return mode_mul<T>(x, mode, f.factor(mode).adjoint());
}

template <TensorScalar T>
bool all_finite(const Matrix<T>& m) {
  return m.allFinite();
}

}  // namespace

const char* to_string(Method m) { return m == Method::Hooi ? "hooi" : "asi"; }

const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::Random: return "random";
    case InitKind::Hosvd: return "hosvd";
    case InitKind::Provided: return "provided";
  }
  return "?";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::KktConverged: return "KktConverged";
    case Termination::ObjStalled: return "ObjStalled";
    case Termination::MaxSweeps: return "MaxSweeps";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(eps_obj > 0.0)) throw DimensionError("eps_obj must be positive");
  if (!(eps_kkt > 0.0)) throw DimensionError("eps_kkt must be positive");
  if (max_sweeps < 1) throw DimensionError("max_sweeps must be at least 1");
  if (kkt_check_period < 1) throw DimensionError("kkt_check_period must be at least 1");
  if (stall_window < 1) throw DimensionError("stall_window must be at least 1");
}

template <TensorScalar T>
TuckerFactors<T> random_init(const Dims& dims, const Dims& core_dims, std::uint64_t seed) {
  check_core_dims(dims, core_dims);
  std::mt19937_64 rng(seed);
  std::vector<Matrix<T>> f;
  for (std::size_t l = 0; l < dims.size(); ++l)
    f.push_back(orthonormalize<T>(gaussian_matrix<T>(rng, dims[l], core_dims[l])));
  return TuckerFactors<T>(dims, std::move(f));
}

template <TensorScalar T>
TuckerFactors<T> hosvd_init(const DenseTensor<T>& b, const Dims& core_dims) {
  check_core_dims(b.dims(), core_dims);
  const std::size_t total = b.size();
  std::vector<Matrix<T>> f;
  for (std::size_t l = 0; l < b.order(); ++l) {
    const std::size_t bound = std::min(b.dim(l), total / b.dim(l));
    if (core_dims[l] > bound)
      throw DimensionError("hosvd_init: k = " + std::to_string(core_dims[l]) + " for mode " +
                           std::to_string(l) + " exceeds the unfolding rank bound " +
                           std::to_string(bound));
    f.push_back(thin_svd(unfold(b, l)).u.leftCols(core_dims[l]));
  }
  return TuckerFactors<T>(b.dims(), std::move(f));
}

template <TensorScalar T>
StiefelFactor<T> hooi_update(const Matrix<T>& c, std::size_t k) {
  if (k < 1 || k > static_cast<std::size_t>(c.rows()))
    throw DimensionError("hooi_update: k out of range");
  if (static_cast<std::size_t>(c.cols()) >= k) return thin_svd(c).u.leftCols(k);
  // zero columns give a deterministic completion of the basis
  Matrix<T> padded = Matrix<T>::Zero(c.rows(), k);
  padded.leftCols(c.cols()) = c;
  return thin_svd(padded).u.leftCols(k);
}

template <TensorScalar T>
StiefelFactor<T> asi_update(const Matrix<T>& c, const Matrix<T>& p) {
  return polar_factor<T>(c * (c.adjoint() * p));
}

template <TensorScalar T>
Matrix<T> SweepContractor<T>::c_matrix(std::size_t mode, const TuckerFactors<T>& f,
                                       const std::vector<std::uint64_t>& version) {
  if (b_.order() != 3) return contracted_unfolding(b_, f, mode);
  const std::size_t a = (mode + 1) % 3;
  const std::size_t c = (mode + 2) % 3;
  if (partial_ && (partial_mode_ == a || partial_mode_ == c) &&
      version[partial_mode_] == partial_version_) {
    const std::size_t rest = partial_mode_ == a ? c : a;
    return unfold(contract_one(*partial_, f, rest), mode);
  }
  // share with the next C in mode order: keep the mode that C_{mode+1} also contracts
  const std::size_t keep = c;
  partial_ = contract_one(b_, f, keep);
  partial_mode_ = keep;
  partial_version_ = version[keep];
  return unfold(contract_one(*partial_, f, a), mode);
}

template <TensorScalar T>
std::vector<Matrix<T>> naive_contractions(const DenseTensor<T>& b, const TuckerFactors<T>& f) {
  std::vector<Matrix<T>> out;
  for (std::size_t l = 0; l < b.order(); ++l) out.push_back(contracted_unfolding(b, f, l));
  return out;
}

template <TensorScalar T>
std::vector<Matrix<T>> sweep_shared_contractions(const DenseTensor<T>& b,
                                                 const TuckerFactors<T>& f) {
  if (b.dims() != f.dims()) throw DimensionError("factors do not match tensor dimensions");
  if (b.order() != 3) return naive_contractions(b, f);
  // contract the largest mode once and reuse it for the two C that need it
  std::size_t r = 0;
  for (std::size_t l = 1; l < 3; ++l)
    if (b.dim(l) > b.dim(r)) r = l;
  const DenseTensor<T> z = contract_one(b, f, r);
  std::vector<Matrix<T>> out(3);
  for (std::size_t l = 0; l < 3; ++l) {
    if (l == r) {
      out[l] = contracted_unfolding(b, f, l);
    } else {
      const std::size_t other = 3 - l - r;
      out[l] = unfold(contract_one(z, f, other), l);
    }
  }
  return out;
}

template <TensorScalar T>
SolveResult<T> solve(const DenseTensor<T>& b, const Dims& core_dims, const SolverConfig& config,
                     const std::optional<TuckerFactors<T>>& initial) {
  config.validate();
  check_core_dims(b.dims(), core_dims);
  const std::size_t m = b.order();
  for (const T& v : b.data())
    if (!std::isfinite(std::abs(v))) throw NumericalError("input tensor has non-finite entries");

  std::vector<std::string> warnings;
  for (std::size_t l = 0; l < m; ++l) {
    std::size_t others = 1;
    for (std::size_t i = 0; i < m; ++i)
      if (i != l) others *= core_dims[i];
    if (core_dims[l] > others)
      warnings.push_back("k_" + std::to_string(l) + " = " + std::to_string(core_dims[l]) +
                         " exceeds the product of the other core dimensions (" +
                         std::to_string(others) + "); C has rank below k");
  }

  TuckerFactors<T> f = [&] {
    switch (config.init.kind) {
      case InitKind::Random: return random_init<T>(b.dims(), core_dims, config.init.seed);
      case InitKind::Hosvd: return hosvd_init(b, core_dims);
      case InitKind::Provided:
        if (!initial) throw Error("solve: InitKind::Provided without initial factors");
        if (initial->dims() != b.dims() || initial->core_dims() != core_dims)
          throw DimensionError("solve: provided factors have the wrong shape");
        return *initial;
    }
    throw Error("unreachable");
  }();

  const auto t_start = Clock::now();
  std::vector<bool> pinned(m);
  for (std::size_t l = 0; l < m; ++l) {
    pinned[l] = core_dims[l] == b.dim(l);
    if (pinned[l]) f.set_factor(l, Matrix<T>::Identity(b.dim(l), b.dim(l)));
  }

  const UnfoldingNorms norms = unfolding_norms(b, config.denominator);
  if (norms.frobenius == 0.0) throw NumericalError("solve: input tensor is zero");
  const double norm_b2 = norms.frobenius * norms.frobenius;

  SolveResult<T> res{.factors = f, .core = DenseTensor<T>(core_dims)};
  res.norm_b = norms.frobenius;
  res.warnings = std::move(warnings);
  res.initial_objective = objective(b, f);

  std::size_t last_free = m;
  for (std::size_t l = 0; l < m; ++l)
    if (!pinned[l]) last_free = l;

  SweepContractor<T> contractor(b);
  std::vector<std::uint64_t> version(m, 0);
  double f_prev = res.initial_objective;
  std::size_t flat = 0;

  for (std::size_t sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    const auto t0 = Clock::now();
    IterationRecord rec;
    rec.sweep = sweep;
    rec.modes.resize(m);
    double f_new = norm_b2;

    for (std::size_t l = 0; l < m; ++l) {
      ModeDiagnostics& d = rec.modes[l];
      if (pinned[l]) {
        d.pinned = true;
        continue;
      }
      const std::size_t k = core_dims[l];
      const Matrix<T> c = contractor.c_matrix(l, f, version);
      const Matrix<T>& p = f.factor(l);
      const Matrix<T> ctp = c.adjoint() * p;
      const Matrix<T> hp = c * ctp;
      const Matrix<T> lambda = ctp.adjoint() * ctp;
      const double resid = (hp - p * lambda).norm();
      d.cheap_kkt = resid / (norms.frobenius * norms.spectral[l]);

      Matrix<T> p_new;
      double h_norm = 0.0;
      if (config.method == Method::Hooi) {
        const ThinSvd<T> s = thin_svd(c);
        if (static_cast<std::size_t>(s.u.cols()) >= k) {
          p_new = s.u.leftCols(k);
        } else {
          p_new = hooi_update(c, k);
        }
        const auto r = static_cast<std::size_t>(s.sigma.size());
        const double sk = k <= r ? s.sigma(k - 1) : 0.0;
        const double sk1 = k < r ? s.sigma(k) : 0.0;
        d.weight = sk * sk - sk1 * sk1;
        d.degenerate_gap = sk == sk1;
        if (d.degenerate_gap) d.weight = 0.0;
        h_norm = std::sqrt(s.sigma.array().pow(4).sum());
      } else {
        const ThinSvd<T> s = thin_svd(hp);
        p_new = s.u * s.v.adjoint();
        d.weight = s.sigma(s.sigma.size() - 1);
        if (config.record_series) h_norm = (c.adjoint() * c).norm();
      }
      if (!all_finite(p_new)) throw NumericalError("solve: non-finite factor update");
      if (config.greedy_align) p_new = align<T>(p_new, p);

      if (config.record_series) {
        d.sin_theta = (p - p_new * (p_new.adjoint() * p)).norm();
        d.multiplier_residual = h_norm > 0.0 ? resid / h_norm : 0.0;
        d.series_subspace = d.weight * d.sin_theta * d.sin_theta;
        d.series_residual = d.weight * d.multiplier_residual * d.multiplier_residual;
      }
      if (l == last_free) f_new = (p_new.adjoint() * c).squaredNorm();
      f.set_factor(l, std::move(p_new));
      ++version[l];
      rec.cheap_kkt += d.cheap_kkt;
    }

    rec.objective = f_new;
    rec.wall_seconds = seconds_since(t0);
    if (!std::isfinite(f_new) || !std::isfinite(rec.cheap_kkt))
      throw NumericalError("solve: non-finite objective or residual");
    res.history.push_back(std::move(rec));
    const IterationRecord& last = res.history.back();

    const double rel = f_new > 0.0 ? std::abs(f_new - f_prev) / f_new
                                   : (f_prev == 0.0 ? 0.0 : INFINITY);
    f_prev = f_new;
    if (sweep % config.kkt_check_period != 0 && sweep != config.max_sweeps) continue;
    if (last.cheap_kkt <= config.eps_kkt) {
      res.termination = Termination::KktConverged;
      break;
    }
    flat = rel <= config.eps_obj ? flat + 1 : 0;
    if (flat >= config.stall_window && last.cheap_kkt <= std::sqrt(config.eps_kkt)) {
      res.termination = Termination::ObjStalled;
      break;
    }
  }

  res.solve_seconds = seconds_since(t_start);
  res.objective = f_prev;
  res.factors = f;
  res.core = core(b, f);
  const std::vector<Matrix<T>> cs = sweep_shared_contractions(b, f);
  res.final_full_kkt = kkt_residual(b, f, KktVariant::Full, norms, &cs);
  return res;
}

#define TUCKERKIT_INSTANTIATE(T)                                                               \
  template TuckerFactors<T> random_init<T>(const Dims&, const Dims&, std::uint64_t);           \
  template TuckerFactors<T> hosvd_init(const DenseTensor<T>&, const Dims&);                    \
  template StiefelFactor<T> hooi_update(const Matrix<T>&, std::size_t);                        \
  template StiefelFactor<T> asi_update(const Matrix<T>&, const Matrix<T>&);                    \
  template class SweepContractor<T>;                                                           \
  template std::vector<Matrix<T>> naive_contractions(const DenseTensor<T>&,                    \
                                                     const TuckerFactors<T>&);                 \
  template std::vector<Matrix<T>> sweep_shared_contractions(const DenseTensor<T>&,             \
                                                            const TuckerFactors<T>&);          \
  template SolveResult<T> solve(const DenseTensor<T>&, const Dims&, const SolverConfig&,       \
                                const std::optional<TuckerFactors<T>>&);

TUCKERKIT_INSTANTIATE(double)
TUCKERKIT_INSTANTIATE(cplx)

#undef TUCKERKIT_INSTANTIATE

}  // namespace tuckerkit
