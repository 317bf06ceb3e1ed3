#include "halfwave/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace halfwave {

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(N);
  return s;
}

void GridSpec::validate() const {
  if (n < 1 || n > 3) {
    throw std::invalid_argument("GridSpec: dimension must be 1, 2, or 3");
  }
  if (!(L > 0.0)) {
    throw std::invalid_argument("GridSpec: half-width L must be positive");
  }
  if (N < 8 || (N & (N - 1)) != 0) {
    throw std::invalid_argument("GridSpec: N must be a power of two >= 8");
  }
}

double GridSpec::frequency(int j) const {
  return std::numbers::pi * wavenumber(j) / L;
}

ScalarField ScalarField::zero(const GridSpec& grid) {
  grid.validate();
  ScalarField f;
  f.grid = grid;
  f.values.assign(grid.size(), {0.0, 0.0});
  return f;
}

ScalarField ScalarField::from_function(
    const GridSpec& grid,
    const std::function<std::complex<double>(std::span<const double>)>& fn) {
  ScalarField f = zero(grid);
  const int N = grid.N;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  if (grid.n == 1) {
    for (int i = 0; i < N; ++i) {
      x[0] = grid.coordinate(i);
      f.values[i] = fn(std::span<const double>(x.data(), 1));
    }
  } else if (grid.n == 2) {
    std::size_t idx = 0;
    for (int i = 0; i < N; ++i) {
      x[0] = grid.coordinate(i);
      for (int j = 0; j < N; ++j, ++idx) {
        x[1] = grid.coordinate(j);
        f.values[idx] = fn(std::span<const double>(x.data(), 2));
      }
    }
  } else {
    std::size_t idx = 0;
    for (int i = 0; i < N; ++i) {
      x[0] = grid.coordinate(i);
      for (int j = 0; j < N; ++j) {
        x[1] = grid.coordinate(j);
        for (int k = 0; k < N; ++k, ++idx) {
          x[2] = grid.coordinate(k);
          f.values[idx] = fn(std::span<const double>(x.data(), 3));
        }
      }
    }
  }
  return f;
}

double ScalarField::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * std::pow(grid.h(), grid.n));
}

double ScalarField::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

bool ScalarField::is_finite() const {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

std::size_t ScalarField::origin_index() const {
  // coordinate(N/2) == 0 exactly
  const std::size_t half = static_cast<std::size_t>(grid.N) / 2;
  std::size_t idx = 0;
  for (int d = 0; d < grid.n; ++d) idx = idx * grid.N + half;
  return idx;
}

namespace {

void put_u64_le(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64_le(std::ofstream& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64_le(out, v);
}

std::uint64_t get_u64_le(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64_le(std::ifstream& in) {
  std::uint64_t v = get_u64_le(in);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

void write_field(const ScalarField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field: cannot open " + path);
  put_u64_le(out, static_cast<std::uint64_t>(field.grid.n));
  put_u64_le(out, static_cast<std::uint64_t>(field.grid.N));
  put_f64_le(out, field.grid.L);
  for (const auto& v : field.values) {
    put_f64_le(out, v.real());
    put_f64_le(out, v.imag());
  }
  if (!out) throw std::runtime_error("write_field: write failed for " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + path);
  GridSpec grid;
  grid.n = static_cast<int>(get_u64_le(in));
  grid.N = static_cast<int>(get_u64_le(in));
  grid.L = get_f64_le(in);
  if (!in) throw std::runtime_error("read_field: truncated header in " + path);
  grid.validate();
  ScalarField f = ScalarField::zero(grid);
  for (auto& v : f.values) {
    const double re = get_f64_le(in);
    const double im = get_f64_le(in);
    v = {re, im};
  }
  if (!in) throw std::runtime_error("read_field: truncated payload in " + path);
  return f;
}

}  // namespace halfwave
