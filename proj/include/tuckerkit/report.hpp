#pragma once

// JSON and CSV emission for solve results and benchmark reports. Field names
// match schemas/*.schema.json. Every timing field ends in "_seconds" so that
// diff tools can drop them.

#include <ostream>

#include <json.hpp>

#include "tuckerkit/genbench.hpp"
#include "tuckerkit/solvers.hpp"

namespace tuckerkit {

nlohmann::json to_json(const IterationRecord& r);
nlohmann::json history_json(const std::vector<IterationRecord>& history);

template <TensorScalar T>
nlohmann::json to_json(const KktReport<T>& k);

// {objective, approx_error, norm_b, termination, sweeps, full_kkt, ...}
// approx_err comes from an explicit reconstruction; deriving it from
// norm_b^2 - objective loses all digits near an exact fit.
template <TensorScalar T>
nlohmann::json summary_json(const SolveResult<T>& r, const SolverConfig& config,
                            double approx_err);

nlohmann::json to_json(const BenchReport& report, bool with_histories);

// One row per run.
void write_bench_csv(std::ostream& os, const BenchReport& report);
// run,sweep,series,value
void write_long_csv(std::ostream& os, const BenchReport& report);

// Copy of j with every *_seconds key removed, recursively.
nlohmann::json strip_timing(nlohmann::json j);

// Serializes with 17 significant digits for every floating value.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace tuckerkit
