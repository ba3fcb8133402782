#include "tuckerkit/tnsr_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "tuckerkit/errors.hpp"

namespace tuckerkit {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'N', 'S', 'R'};
constexpr std::uint8_t kVersion = 1;
// Guards against absurd headers before allocating.
constexpr std::uint32_t kMaxOrder = 64;

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<std::byte, sizeof(U)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<U>(bytes);
  }
  return v;
}

template <typename U>
void put(std::ostream& os, U v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

template <typename U>
U get(std::istream& is, const char* what) {
  U v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(U)))
    throw FormatError(std::string("truncated TNSR1 stream while reading ") + what);
  return to_little(v);
}

double as_double(std::uint64_t bits) { return std::bit_cast<double>(bits); }

template <TensorScalar T>
DenseTensor<T> read_payload(std::istream& is, Dims dims) {
  std::size_t n = 1;
  for (auto d : dims) {
    if (n > std::numeric_limits<std::size_t>::max() / d / sizeof(T))
      throw FormatError("TNSR1 header dimensions overflow");
    n *= d;
  }
  // grow with the data so a corrupt header cannot force a huge allocation
  constexpr std::size_t kDoubles = 1 << 16;
  constexpr std::size_t kPer = sizeof(T) / sizeof(double);
  std::vector<T> data;
  data.reserve(std::min(n, kDoubles));
  std::vector<std::uint64_t> buf(kDoubles);
  while (data.size() < n) {
    const std::size_t want = std::min(kDoubles / kPer, n - data.size());
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(want * sizeof(T)));
    if (static_cast<std::size_t>(is.gcount()) != want * sizeof(T))
      throw FormatError("truncated TNSR1 stream while reading payload");
    for (std::size_t i = 0; i < want; ++i) {
      if constexpr (std::same_as<T, double>) {
        data.push_back(as_double(to_little(buf[i])));
      } else {
        data.emplace_back(as_double(to_little(buf[2 * i])), as_double(to_little(buf[2 * i + 1])));
      }
    }
  }
  return DenseTensor<T>(std::move(dims), std::move(data));
}

std::size_t raw_width(RawType type) { return type == RawType::F32 ? 4 : 8; }

// Calls sink(value) for each of the prod(dims) values of a raw stream.
template <typename Sink>
void scan_raw(std::istream& is, RawType type, const Dims& dims, Sink&& sink) {
  if (dims.empty()) throw DimensionError("raw import needs dimensions");
  const std::size_t n = dims_product(dims);
  const std::size_t width = raw_width(type);
  constexpr std::size_t kChunk = 1 << 16;
  std::vector<char> buf(kChunk * width);
  std::size_t done = 0;
  while (done < n) {
    const std::size_t want = std::min(kChunk, n - done);
    is.read(buf.data(), static_cast<std::streamsize>(want * width));
    if (static_cast<std::size_t>(is.gcount()) != want * width)
      throw FormatError("raw stream ended after " +
                        std::to_string(done + is.gcount() / width) + " of " +
                        std::to_string(n) + " values");
    for (std::size_t i = 0; i < want; ++i) {
      const char* p = buf.data() + i * width;
      if (type == RawType::F32) {
        std::uint32_t bits;
        std::memcpy(&bits, p, 4);
        sink(static_cast<double>(std::bit_cast<float>(to_little(bits))));
      } else {
        std::uint64_t bits;
        std::memcpy(&bits, p, 8);
        sink(std::bit_cast<double>(to_little(bits)));
      }
    }
    done += want;
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw FormatError("raw stream is longer than the stated dimensions");
}

}  // namespace

ScalarKind kind_of(const AnyTensor& t) {
  return std::visit([](const auto& x) { return x.kind(); }, t);
}

const Dims& dims_of(const AnyTensor& t) {
  return std::visit([](const auto& x) -> const Dims& { return x.dims(); }, t);
}

template <TensorScalar T>
void write_tnsr(std::ostream& os, const DenseTensor<T>& t) {
  os.write(kMagic.data(), kMagic.size());
  put<std::uint8_t>(os, kVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(t.kind()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(t.order()));
  for (auto n : t.dims()) put<std::uint64_t>(os, n);
  for (const T& v : t.data()) {
    if constexpr (std::same_as<T, double>) {
      put(os, std::bit_cast<std::uint64_t>(v));
    } else {
      put(os, std::bit_cast<std::uint64_t>(v.real()));
      put(os, std::bit_cast<std::uint64_t>(v.imag()));
    }
  }
}

void write_tnsr(std::ostream& os, const AnyTensor& t) {
  std::visit([&](const auto& x) { write_tnsr(os, x); }, t);
}

void write_tnsr_file(const std::filesystem::path& path, const AnyTensor& t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_tnsr(os, t);
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

AnyTensor read_tnsr(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size())) throw FormatError("truncated TNSR1 stream (magic)");
  if (magic != kMagic) throw FormatError("not a TNSR file (bad magic)");
  const auto version = get<std::uint8_t>(is, "version");
  if (version != kVersion)
    throw FormatError("unsupported TNSR version " + std::to_string(version));
  const auto kind = get<std::uint8_t>(is, "kind");
  if (kind > 1) throw FormatError("unknown scalar kind byte " + std::to_string(kind));
  const auto order = get<std::uint32_t>(is, "order");
  if (order == 0 || order > kMaxOrder)
    throw FormatError("implausible tensor order " + std::to_string(order));
  Dims dims(order);
  for (auto& n : dims) {
    n = get<std::uint64_t>(is, "dims");
    if (n == 0) throw FormatError("zero dimension in header");
  }
  if (kind == 0) return read_payload<double>(is, std::move(dims));
  return read_payload<cplx>(is, std::move(dims));
}

AnyTensor read_tnsr_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_tnsr(is);
}

DenseTensor<double> read_raw(std::istream& is, RawType type, const Dims& dims) {
  std::vector<double> data;
  data.reserve(dims_product(dims));
  scan_raw(is, type, dims, [&](double v) { data.push_back(v); });
  return DenseTensor<double>(dims, std::move(data));
}

double raw_frobenius_norm(std::istream& is, RawType type, const Dims& dims) {
  // scaled accumulation, as in LAPACK dnrm2
  double scale = 0.0;
  double ssq = 1.0;
  scan_raw(is, type, dims, [&](double v) {
    const double a = std::abs(v);
    if (a == 0.0) return;
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  });
  return scale * std::sqrt(ssq);
}

template void write_tnsr(std::ostream&, const DenseTensor<double>&);
template void write_tnsr(std::ostream&, const DenseTensor<cplx>&);

}  // namespace tuckerkit
