#pragma once

// TNSR1 binary tensor format and headerless raw import.
//
// TNSR1 layout (all integers little-endian):
//   bytes 0..3   "TNSR"
//   byte  4      version, 0x01
//   byte  5      scalar kind, 0 = Real64, 1 = Complex128
//   u32          order m
//   m x u64      dims
//   payload      entries in storage order as IEEE-754 binary64;
//                complex entries are (real, imaginary) pairs

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "tuckerkit/tensor.hpp"

namespace tuckerkit {

using AnyTensor = std::variant<DenseTensor<double>, DenseTensor<cplx>>;

ScalarKind kind_of(const AnyTensor& t);
const Dims& dims_of(const AnyTensor& t);

template <TensorScalar T>
void write_tnsr(std::ostream& os, const DenseTensor<T>& t);
void write_tnsr(std::ostream& os, const AnyTensor& t);
void write_tnsr_file(const std::filesystem::path& path, const AnyTensor& t);

// Throws FormatError on bad magic, unsupported version or kind, or a truncated
// payload.
AnyTensor read_tnsr(std::istream& is);
AnyTensor read_tnsr_file(const std::filesystem::path& path);

enum class RawType { F32, F64 };

// Headerless little-endian stream of exactly prod(dims) values. Values are
// widened to double. Throws FormatError on short or overlong input.
DenseTensor<double> read_raw(std::istream& is, RawType type, const Dims& dims);

// Streams a raw file without materializing it; returns the Frobenius norm.
// Same length checks as read_raw.
double raw_frobenius_norm(std::istream& is, RawType type, const Dims& dims);

}  // namespace tuckerkit
