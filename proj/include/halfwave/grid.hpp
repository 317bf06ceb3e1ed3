#ifndef HALFWAVE_GRID_HPP
#define HALFWAVE_GRID_HPP

// Periodic grid on [-L, L)^n and the sampled complex field living on it.
// Row-major storage over axes; admissible frequencies are pi*k/L with
// k in [-N/2, N/2).

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace halfwave {

struct GridSpec {
  int n = 1;         // spatial dimension (1 or 2 tuned; 3 permitted)
  double L = 40.0;   // half-width of [-L, L) per axis
  int N = 256;       // points per axis, power of two, >= 8

  double h() const { return 2.0 * L / N; }
  std::size_t size() const;
  /// Throws std::invalid_argument when the invariants are violated.
  void validate() const;

  /// Coordinate of index i along one axis: -L + i*h.
  double coordinate(int i) const { return -L + h() * i; }
  /// Signed integer wavenumber for FFT bin j (standard ordering).
  int wavenumber(int j) const { return j < N / 2 ? j : j - N; }
  /// Frequency pi*k/L of FFT bin j.
  double frequency(int j) const;

  bool operator==(const GridSpec&) const = default;
};

struct ScalarField {
  GridSpec grid;
  std::vector<std::complex<double>> values;

  static ScalarField zero(const GridSpec& grid);
  /// Sample fn(x) on the grid; fn receives the coordinates of one point.
  static ScalarField from_function(
      const GridSpec& grid,
      const std::function<std::complex<double>(std::span<const double>)>& fn);

  std::size_t size() const { return values.size(); }
  double sup_norm() const;                    // max modulus
  double l2_norm() const;                     // sqrt(h^n * sum |u|^2)
  double max_imag() const;                    // max |Im u|
  bool is_finite() const;

  /// Index of the grid point closest to the origin (coordinate 0 per axis).
  std::size_t origin_index() const;
};

/// Flat binary layout: header n, N (little-endian uint64) and L
/// (little-endian IEEE double), then size() interleaved re/im doubles in
/// row-major order.  Throws std::runtime_error on I/O or format errors.
void write_field(const ScalarField& field, const std::string& path);
ScalarField read_field(const std::string& path);

}  // namespace halfwave

#endif
