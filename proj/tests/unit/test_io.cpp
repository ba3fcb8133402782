#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "tuckerkit/errors.hpp"
#include "tuckerkit/tnsr_io.hpp"

using namespace tuckerkit;

namespace {

std::string le_u64(std::uint64_t v) {
  std::string s(8, '\0');
  for (int i = 0; i < 8; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

std::string le_f64(double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  return le_u64(bits);
}

std::string serialize(const AnyTensor& t) {
  std::ostringstream os;
  write_tnsr(os, t);
  return os.str();
}

AnyTensor parse(const std::string& bytes) {
  std::istringstream is(bytes);
  return read_tnsr(is);
}

}  // namespace

TEST_SUITE("tnsr_io") {
  TEST_CASE("byte layout of a small real tensor") {
    const DenseTensor<double> t({2, 1}, {1.5, -2.0});
    std::string expect = "TNSR";
    expect += '\x01';
    expect += '\x00';
    expect += std::string("\x02\x00\x00\x00", 4);
    expect += le_u64(2) + le_u64(1) + le_f64(1.5) + le_f64(-2.0);
    CHECK(serialize(t) == expect);
  }

  TEST_CASE("complex entries are stored real part first") {
    const DenseTensor<cplx> t({1}, {cplx(3.0, -4.0)});
    const std::string bytes = serialize(t);
    CHECK(bytes[5] == '\x01');
    CHECK(bytes.substr(bytes.size() - 16) == le_f64(3.0) + le_f64(-4.0));
  }

  TEST_CASE("round trip real and complex") {
    std::mt19937_64 rng(1);
    const auto r = oracle::random_tensor<double>({3, 4, 2}, rng);
    const auto c = oracle::random_tensor<cplx>({2, 5}, rng);
    CHECK(std::get<DenseTensor<double>>(parse(serialize(r))) == r);
    CHECK(std::get<DenseTensor<cplx>>(parse(serialize(c))) == c);
    CHECK(kind_of(parse(serialize(c))) == ScalarKind::Complex128);
    CHECK(dims_of(parse(serialize(r))) == Dims{3, 4, 2});
  }

  TEST_CASE("file round trip and I/O errors") {
    const auto dir = std::filesystem::temp_directory_path() / "tuckerkit_io_test";
    std::filesystem::create_directories(dir);
    const DenseTensor<double> t({2, 2}, {1, 2, 3, 4});
    write_tnsr_file(dir / "t.tnsr", t);
    CHECK(std::get<DenseTensor<double>>(read_tnsr_file(dir / "t.tnsr")) == t);
    CHECK_THROWS_AS(read_tnsr_file(dir / "absent.tnsr"), IoError);
    CHECK_THROWS_AS(write_tnsr_file(dir / "no_such_dir" / "t.tnsr", t), IoError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("malformed headers are format errors") {
    const std::string good = serialize(DenseTensor<double>({2, 2}, {1, 2, 3, 4}));
    std::string bad = good;
    bad[0] = 'X';
    CHECK_THROWS_AS(parse(bad), FormatError);
    bad = good;
    bad[4] = '\x02';
    CHECK_THROWS_AS(parse(bad), FormatError);
    bad = good;
    bad[5] = '\x07';
    CHECK_THROWS_AS(parse(bad), FormatError);
    bad = good;
    bad.replace(6, 4, std::string("\xff\x00\x00\x00", 4));
    CHECK_THROWS_AS(parse(bad), FormatError);
    bad = good;
    bad.replace(10, 8, le_u64(0));
    CHECK_THROWS_AS(parse(bad), FormatError);
    CHECK_THROWS_AS(parse(""), FormatError);
  }

  TEST_CASE("truncation anywhere is a format error") {
    const std::string good = serialize(DenseTensor<cplx>({2, 3}));
    for (std::size_t cut = 0; cut < good.size(); cut += 7)
      CHECK_THROWS_AS(parse(good.substr(0, cut)), FormatError);
  }

  TEST_CASE("a header claiming an enormous tensor fails cleanly") {
    std::string bytes = "TNSR";
    bytes += '\x01';
    bytes += '\x00';
    bytes += std::string("\x02\x00\x00\x00", 4);
    bytes += le_u64(1ull << 20) + le_u64(1ull << 20) + le_f64(1.0);
    CHECK_THROWS_AS(parse(bytes), FormatError);
    bytes.replace(10, 16, le_u64(1ull << 62) + le_u64(1ull << 62));
    CHECK_THROWS_AS(parse(bytes), FormatError);
  }

  TEST_CASE("raw import f32 and f64") {
    std::vector<float> f{1.0f, -2.5f, 3.25f, 0.0f, 8.0f, -1.0f};
    std::string bytes(reinterpret_cast<const char*>(f.data()), f.size() * 4);
    std::istringstream is(bytes);
    const auto t = read_raw(is, RawType::F32, {2, 3});
    CHECK(t.dims() == Dims{2, 3});
    CHECK(t({1, 0}) == -2.5);
    CHECK(t({0, 2}) == 8.0);

    std::string d = le_f64(0.5) + le_f64(-0.25);
    std::istringstream is64(d);
    const auto t64 = read_raw(is64, RawType::F64, {2});
    CHECK(t64({1}) == -0.25);
  }

  TEST_CASE("raw import length checks") {
    std::string d = le_f64(1) + le_f64(2) + le_f64(3);
    std::istringstream short_is(d);
    CHECK_THROWS_AS(read_raw(short_is, RawType::F64, {2, 2}), FormatError);
    std::istringstream long_is(d);
    CHECK_THROWS_AS(read_raw(long_is, RawType::F64, {2}), FormatError);
    std::istringstream norm_is(d);
    CHECK_THROWS_AS(raw_frobenius_norm(norm_is, RawType::F64, {4}), FormatError);
  }

  TEST_CASE("streaming raw norm matches the materialized norm") {
    std::mt19937_64 rng(2);
    std::string bytes;
    std::vector<double> vals;
    for (int i = 0; i < 200000; ++i) {
      vals.push_back(oracle::gaussian<double>(rng) * 1e150);
      bytes += le_f64(vals.back());
    }
    std::istringstream a(bytes), b(bytes);
    const double streamed = raw_frobenius_norm(a, RawType::F64, {400, 500});
    const double direct = frobenius_norm(read_raw(b, RawType::F64, {400, 500}));
    CHECK(std::isfinite(streamed));
    CHECK(streamed == doctest::Approx(direct).epsilon(1e-13));
  }
}
