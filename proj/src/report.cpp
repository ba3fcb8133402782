#include "tuckerkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tuckerkit {

using nlohmann::json;

namespace {

json dims_json(const Dims& d) { return json(d); }

json spec_json(const SyntheticSpec& s) {
  return {{"dims", dims_json(s.dims)},
          {"core_dims", dims_json(s.core_dims)},
          {"eta", s.eta},
          {"seed", s.seed},
          {"kind", to_string(s.kind)}};
}

template <TensorScalar T>
json matrix_json(const Matrix<T>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if constexpr (std::same_as<T, double>) {
        row.push_back(m(i, j));
      } else {
        row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool is_timing_key(const std::string& k) {
  return k.ends_with("_seconds");
}

void dump_to(std::string& out, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_to(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_to(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // keep floats recognizable as floats
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

json to_json(const IterationRecord& r) {
  json modes = json::array();
  for (const auto& d : r.modes) {
    modes.push_back({{"pinned", d.pinned},
                     {"weight", d.weight},
                     {"degenerate_gap", d.degenerate_gap},
                     {"sin_theta", d.sin_theta},
                     {"multiplier_residual", d.multiplier_residual},
                     {"series_subspace", d.series_subspace},
                     {"series_residual", d.series_residual},
                     {"cheap_kkt", d.cheap_kkt}});
  }
  return {{"sweep", r.sweep},
          {"objective", r.objective},
          {"cheap_kkt", r.cheap_kkt},
          {"modes", std::move(modes)},
          {"wall_seconds", r.wall_seconds}};
}

json history_json(const std::vector<IterationRecord>& history) {
  json out = json::array();
  for (const auto& r : history) out.push_back(to_json(r));
  return out;
}

template <TensorScalar T>
json to_json(const KktReport<T>& k) {
  json mult = json::array();
  for (const auto& m : k.multipliers) mult.push_back(matrix_json(m));
  return {{"variant", to_string(k.variant)},
          {"denominator", to_string(k.denominator)},
          {"per_mode", k.per_mode},
          {"total", k.total},
          {"multipliers", std::move(mult)}};
}

template <TensorScalar T>
json summary_json(const SolveResult<T>& r, const SolverConfig& config, double approx_err) {
  return {{"method", to_string(config.method)},
          {"init", to_string(config.init)},
          {"dims", dims_json(r.factors.dims())},
          {"core_dims", dims_json(r.factors.core_dims())},
          {"kind", to_string(kind_of<T>())},
          {"objective", r.objective},
          {"initial_objective", r.initial_objective},
          {"norm_b", r.norm_b},
          {"approx_error", approx_err},
          {"termination", to_string(r.termination)},
          {"sweeps", r.history.size()},
          {"final_cheap_kkt", r.history.empty() ? 0.0 : r.history.back().cheap_kkt},
          {"full_kkt", to_json(r.final_full_kkt)},
          {"warnings", r.warnings},
          {"solve_seconds", r.solve_seconds}};
}

json to_json(const BenchReport& report, bool with_histories) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json j = {{"cell", row.cell},
              {"repetition", row.repetition},
              {"label", row.label},
              {"method", to_string(row.method)},
              {"init", to_string(row.init)},
              {"spec", spec_json(row.spec)},
              {"ok", row.ok}};
    if (!row.ok) {
      j["error"] = row.error;
    } else {
      j["sweeps"] = row.sweeps;
      j["cpu_seconds"] = row.cpu_seconds;
      j["final_cheap_kkt"] = row.final_cheap_kkt;
      j["final_full_kkt"] = row.final_full_kkt;
      j["approx_error"] = row.approx_error;
      j["objective"] = row.objective;
      j["initial_objective"] = row.initial_objective;
      j["norm_b"] = row.norm_b;
      j["termination"] = to_string(row.termination);
      j["monotone"] = row.monotone;
      if (with_histories) j["history"] = history_json(row.history);
    }
    rows.push_back(std::move(j));
  }
  json sums = json::array();
  for (const auto& s : report.summaries) {
    sums.push_back({{"label", s.label},
                    {"method", s.method},
                    {"init", s.init},
                    {"eta", s.eta},
                    {"runs", s.runs},
                    {"failed", s.failed},
                    {"median_sweeps", s.median_sweeps},
                    {"median_cpu_seconds", s.median_cpu_seconds},
                    {"max_final_cheap_kkt", s.max_final_cheap_kkt}});
  }
  return {{"rows", std::move(rows)}, {"summaries", std::move(sums)}};
}

namespace {
std::string dims_field(const Dims& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "x" : "") + std::to_string(d[i]);
  return s;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_bench_csv(std::ostream& os, const BenchReport& report) {
  os << "cell,repetition,label,method,init,kind,dims,core_dims,eta,seed,ok,sweeps,cpu_seconds,"
        "final_cheap_kkt,final_full_kkt,approx_error,objective,termination,error\n";
  for (const auto& r : report.rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << r.cell << ',' << r.repetition << ',' << r.label << ',' << to_string(r.method) << ','
       << to_string(r.init) << ',' << to_string(r.spec.kind) << ',' << dims_field(r.spec.dims)
       << ',' << dims_field(r.spec.core_dims) << ',' << num(r.spec.eta) << ',' << r.spec.seed
       << ',' << (r.ok ? 1 : 0) << ',';
    if (r.ok) {
      os << r.sweeps << ',' << num(r.cpu_seconds) << ',' << num(r.final_cheap_kkt) << ','
         << num(r.final_full_kkt) << ',' << num(r.approx_error) << ',' << num(r.objective) << ','
         << to_string(r.termination) << ',';
    } else {
      os << ",,,,,,,";
    }
    os << err << '\n';
  }
}

void write_long_csv(std::ostream& os, const BenchReport& report) {
  os << "run,sweep,series,value\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    if (!row.ok) continue;
    os << i << ",0,objective," << num(row.initial_objective) << '\n';
    for (const auto& rec : row.history) {
      os << i << ',' << rec.sweep << ",objective," << num(rec.objective) << '\n';
      os << i << ',' << rec.sweep << ",cheap_kkt," << num(rec.cheap_kkt) << '\n';
      for (std::size_t l = 0; l < rec.modes.size(); ++l) {
        const auto& d = rec.modes[l];
        if (d.pinned) continue;
        const std::string suffix = "_" + std::to_string(l);
        os << i << ',' << rec.sweep << ",weight" << suffix << ',' << num(d.weight) << '\n';
        os << i << ',' << rec.sweep << ",sin_theta" << suffix << ',' << num(d.sin_theta) << '\n';
        os << i << ',' << rec.sweep << ",series_subspace" << suffix << ','
           << num(d.series_subspace) << '\n';
        os << i << ',' << rec.sweep << ",series_residual" << suffix << ','
           << num(d.series_residual) << '\n';
      }
    }
  }
}

json strip_timing(json j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!is_timing_key(it.key())) out[it.key()] = strip_timing(it.value());
    return out;
  }
  if (j.is_array()) {
    for (auto& e : j) e = strip_timing(std::move(e));
  }
  return j;
}

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_to(out, j, indent, 0);
  return out;
}

template json to_json(const KktReport<double>&);
template json to_json(const KktReport<cplx>&);
template json summary_json(const SolveResult<double>&, const SolverConfig&, double);
template json summary_json(const SolveResult<cplx>&, const SolverConfig&, double);

}  // namespace tuckerkit
