#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "halfwave/fft.hpp"
#include "halfwave/fraclap.hpp"
#include "halfwave/specfun.hpp"
#include "oracle_support.hpp"

using namespace halfwave;
using cplx = std::complex<double>;

namespace {

GridSpec grid1d(double L, int N) { return GridSpec{1, L, N}; }

ScalarField sample_radial(const GridSpec& grid,
                          const std::function<double(double)>& f) {
  return ScalarField::from_function(
      grid, [&](std::span<const double> x) -> cplx {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        return f(std::sqrt(r2));
      });
}

}  // namespace

TEST_CASE("fft wrapper agrees with a brute-force DFT") {
  const GridSpec grid = grid1d(5.0, 32);
  ScalarField f = ScalarField::zero(grid);
  for (int i = 0; i < grid.N; ++i) {
    const double x = grid.coordinate(i);
    f.values[i] = cplx(std::sin(1.3 * x) + 0.2 * x, std::cos(2.1 * x));
  }
  const auto fast = fft::forward(grid, f.values);
  const auto slow = oracle::brute_dft(f.values);
  for (int i = 0; i < grid.N; ++i) {
    CHECK(std::abs(fast[i] - slow[i]) <= 1e-10 * (1.0 + std::abs(slow[i])));
  }
  const auto back = fft::inverse(grid, fast);
  for (int i = 0; i < grid.N; ++i) {
    CHECK(std::abs(back[i] - f.values[i]) <= 1e-12);
  }
}

TEST_CASE("spectral engine: zero field maps to zero") {
  const auto zero = ScalarField::zero(grid1d(10.0, 64));
  const auto out = fraclap::spectral(zero, 1.0);
  CHECK(out.sup_norm() == 0.0);
}

TEST_CASE("spectral engine: admissible plane wave is an eigenfunction") {
  const GridSpec grid = grid1d(20.0, 256);
  const double k = 5.0 * std::numbers::pi / grid.L;  // admissible
  auto f = ScalarField::from_function(grid, [&](std::span<const double> x) {
    return std::exp(cplx(0.0, k * x[0]));
  });
  const auto out = fraclap::spectral(f, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(std::abs(out.values[i] - k * f.values[i]) <=
          1e-12 * std::abs(k * f.values[i]));
  }
}

TEST_CASE("spectral engine: Gaussian value at the origin") {
  // The |xi| multiplier has a kink at xi = 0, so even for rapidly decaying
  // data the periodic operator differs from the whole-line one at O(L^-2);
  // the value must approach 2/sqrt(pi) as L grows.
  const double want = 2.0 / std::sqrt(std::numbers::pi);
  double prev_err = 1e300;
  int N = 2048;
  for (double L : {40.0, 80.0, 160.0}) {
    const GridSpec grid = grid1d(L, N);
    N *= 2;  // keep h fixed while the box grows
    auto f = sample_radial(grid, [](double r) { return std::exp(-r * r); });
    const auto out = fraclap::spectral(f, 1.0);
    const double got = out.values[f.origin_index()].real();
    const double err = std::abs(got - want);
    CHECK(err <= 1e-3);
    CHECK(err < prev_err);
    prev_err = err;
    // single-point evaluation is the same engine
    const auto at0 = fraclap::spectral_at_origin(f, 1.0);
    CHECK(std::abs(at0 - out.values[f.origin_index()]) <= 1e-12);
  }
}

TEST_CASE("spectral engine: real even fields stay real") {
  const GridSpec grid = grid1d(30.0, 512);
  auto f = sample_radial(grid, [](double r) { return std::pow(1.0 + r * r, -1.0); });
  for (double s : {0.5, 1.0, 1.7}) {
    const auto out = fraclap::spectral(f, s);
    double field_scale = 0.0, imag_scale = 0.0;
    for (const auto& v : out.values) {
      field_scale = std::max(field_scale, std::abs(v));
      imag_scale = std::max(imag_scale, std::abs(v.imag()));
    }
    CHECK(imag_scale <= 1e-10 * field_scale);
  }
}

TEST_CASE("spectral engine: multiplier semigroup |xi|^(1/2) twice = |xi|") {
  const GridSpec grid = grid1d(30.0, 512);
  auto f = sample_radial(grid, [](double r) { return std::exp(-r * r / 4.0); });
  const auto twice = fraclap::spectral(fraclap::spectral(f, 0.5), 0.5);
  const auto once = fraclap::spectral(f, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(std::abs(twice.values[i] - once.values[i]) <= 1e-12);
  }
}

TEST_CASE("spectral engine rejects bad input") {
  auto f = ScalarField::zero(grid1d(10.0, 64));
  CHECK_THROWS(fraclap::spectral(f, 2.5));
  f.values[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS(fraclap::spectral(f, 1.0));
}

TEST_CASE("normalization constant matches the reference table") {
  CHECK(fraclap::normalization_constant(1, 0.5) ==
        doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-13));
  CHECK(fraclap::normalization_constant(2, 0.5) ==
        doctest::Approx(0.15915494309189534).epsilon(1e-13));
  CHECK(fraclap::normalization_constant(1, 0.25) ==
        doctest::Approx(0.19947114020071634).epsilon(1e-13));
  CHECK(fraclap::normalization_constant(1, 0.75) ==
        doctest::Approx(0.29920671030107451).epsilon(1e-13));
  CHECK(fraclap::normalization_constant(2, 0.25) ==
        doctest::Approx(0.083241983875425065).epsilon(1e-13));
  CHECK(fraclap::normalization_constant(2, 0.75) ==
        doctest::Approx(0.17116712969055234).epsilon(1e-13));
}

TEST_CASE("quadrature engine: closed-form q=2 family at several points") {
  auto f = [](double z) { return 1.0 / (1.0 + z * z); };
  for (double x : {0.0, 0.5, 1.0, 3.0, 10.0}) {
    const auto res = fraclap::quadrature1d(f, x, 0.5, {});
    CHECK(res.converged);
    CHECK(std::abs(res.value - oracle::poisson_q2(x)) <= 2e-7);
    CHECK(std::abs(res.value - oracle::poisson_q2(x)) <=
          std::max(res.error * 3.0, 1e-9));
  }
}

TEST_CASE("quadrature engine: frozen anchor values (n=1, sigma=1/2)") {
  auto check_table = [&](const std::vector<oracle::PointRef>& table, double q) {
    const auto profile = fraclap::RadialProfile::single(q);
    for (const auto& ref : table) {
      const auto res = fraclap::quadrature1d(
          [&](double z) { return profile(std::abs(z)); }, ref.x, 0.5, {});
      CHECK(res.converged);
      CHECK(std::abs(res.value - ref.value) <=
            1e-6 * std::max(1.0, std::abs(ref.value)));
    }
  };
  check_table(oracle::kHalfLapQ3, 3.0);
  check_table(oracle::kHalfLapQ1, 1.0);
  check_table(oracle::kHalfLapQHalf, 0.5);
}

TEST_CASE("quadrature engine: Gaussian anchors") {
  auto g = [](double z) { return std::exp(-z * z); };
  for (const auto& ref : oracle::kHalfLapGauss) {
    const auto res = fraclap::quadrature1d(g, ref.x, 0.5, {});
    CHECK(std::abs(res.value - ref.value) <= 1e-6);
  }
}

TEST_CASE("quadrature engine: constants map to zero") {
  const auto res = fraclap::quadrature1d([](double) { return 0.7; }, 1.3, 0.5, {});
  CHECK(std::abs(res.value) <= 1e-12);
}

TEST_CASE("quadrature engine: eta0 vanishes at the origin, anchors off it") {
  fraclap::RadialProfile eta0;
  eta0.terms = {{1.0, 2.0}, {-specfun::c0(1), 3.0}};
  auto f = [&](double z) { return eta0(std::abs(z)); };
  fraclap::QuadratureOptions opts;
  opts.abs_tol = 1e-8;
  for (const auto& ref : oracle::kHalfLapEta0) {
    const auto res = fraclap::quadrature1d(f, ref.x, 0.5, opts);
    CHECK(std::abs(res.value - ref.value) <= 1e-6);
  }
}

TEST_CASE("quadrature engine: sigma in {0.25, 0.75} against the identity") {
  const auto profile = fraclap::RadialProfile::single(2.0);
  for (double sigma : {0.25, 0.75}) {
    const auto res = fraclap::quadrature1d(
        [&](double z) { return profile(std::abs(z)); }, 0.0, sigma, {});
    const double exact = specfun::frac_power_at_origin({1, sigma, 2.0});
    CHECK(std::abs(res.value - exact) <= 1e-6 * exact);
  }
}

TEST_CASE("quadrature engine: shifted profiles follow the scaling law") {
  for (double t : {1.0, 10.0}) {
    const auto profile = fraclap::RadialProfile::single(2.0, t);
    const auto res = fraclap::quadrature1d(
        [&](double z) { return profile(std::abs(z)); }, 0.0, 0.5, {});
    const double exact = *profile.exact_at_origin(1, 0.5);
    CHECK(std::abs(res.value - exact) <= 1e-6 * std::abs(exact));
  }
}

TEST_CASE("quadrature engine in 2D: Poisson closed form") {
  const auto res0 = fraclap::quadrature_radial(
      2, [](double r) { return std::pow(1.0 + r * r, -1.5); }, 0.0, 0.5, {});
  CHECK(std::abs(res0.value - 2.0) <= 2e-6);
  const auto res1 = fraclap::quadrature_radial(
      2, [](double r) { return std::pow(1.0 + r * r, -1.5); }, 1.0, 0.5, {});
  CHECK(std::abs(res1.value - oracle::poisson2d_q3(1.0)) <= 2e-6);
}

TEST_CASE("quadrature engine in 2D: eta0 anchor at the origin") {
  const double c02 = specfun::c0(2);
  fraclap::QuadratureOptions opts;
  opts.abs_tol = 1e-8;
  const auto res = fraclap::quadrature_radial(
      2,
      [&](double r) {
        const double b = 1.0 + r * r;
        return std::pow(b, -1.5) - c02 * std::pow(b, -2.0);
      },
      0.0, 0.5, opts);
  CHECK(std::abs(res.value) <= 1e-6);
}

TEST_CASE("normalization calibration: quadrature/identity ratio is 1") {
  for (int n : {1, 2}) {
    for (double q :
         {static_cast<double>(n + 1), static_cast<double>(n + 2),
          static_cast<double>(n + 3)}) {
      const auto profile = fraclap::RadialProfile::single(q);
      const auto res = fraclap::quadrature_radial(
          n, [&](double r) { return profile(r); }, 0.0, 0.5, {});
      const double exact = specfun::frac_power_at_origin({n, 0.5, q});
      CHECK(std::abs(res.value / exact - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("cross validation: engines agree on the eta-family profiles") {
  const GridSpec grid = grid1d(100.0, 4096);
  for (double q : {2.0, 3.0}) {
    const auto profile = fraclap::RadialProfile::single(q);
    const auto report =
        fraclap::cross_validate(profile, {0.0, 1.0, 2.0}, 0.5, grid, 5e-3);
    CHECK(report.flagged_count == 0);
    // at the origin both engines should sit on the exact value
    CHECK(report.rows[0].exact.has_value());
    CHECK(std::abs(report.rows[0].quadrature - *report.rows[0].exact) <= 1e-6);
    CHECK(std::abs(report.rows[0].spectral - *report.rows[0].exact) <= 5e-3);
  }
}

TEST_CASE("cross validation: zero profile gives zero difference") {
  fraclap::RadialProfile zero;
  zero.terms = {{0.0, 2.0}};
  const auto report = fraclap::cross_validate(zero, {0.0, 1.0}, 0.5,
                                              grid1d(50.0, 512), 1e-12);
  for (const auto& row : report.rows) {
    CHECK(row.spectral == 0.0);
    CHECK(std::abs(row.quadrature) <= 1e-15);
    CHECK(!row.flagged);
  }
}

TEST_CASE("cordoba inequality holds for Gaussian and eta0 profiles") {
  const GridSpec grid = grid1d(40.0, 1024);
  auto gauss = sample_radial(grid, [](double r) { return std::exp(-r * r); });
  fraclap::RadialProfile eta0;
  eta0.terms = {{1.0, 2.0}, {-specfun::c0(1), 3.0}};
  auto eta0_field = sample_radial(grid, [&](double r) { return eta0(r); });
  for (double s : {0.5, 1.0}) {
    CHECK(fraclap::cordoba_check(gauss, s).pass);
    CHECK(fraclap::cordoba_check(eta0_field, s).pass);
  }
  // s = 0: both sides reduce to phi^2 vs 2 phi^2, gap phi^2 >= 0
  // (up to transform round-trip roundoff)
  const auto edge = fraclap::cordoba_check(gauss, 0.0);
  CHECK(edge.pass);
  CHECK(edge.fitted_constant <= 1e-12);
}

TEST_CASE("cordoba rejects invalid fields") {
  const GridSpec grid = grid1d(10.0, 64);
  auto negative = sample_radial(grid, [](double r) { return r - 1.0; });
  CHECK_THROWS(fraclap::cordoba_check(negative, 1.0));
}

TEST_CASE("field serialization round-trips and has the documented layout") {
  const GridSpec grid = grid1d(12.5, 16);
  auto f = ScalarField::from_function(grid, [](std::span<const double> x) {
    return cplx(x[0], -2.0 * x[0]);
  });
  const std::string path =
      (std::filesystem::temp_directory_path() / "halfwave_field_test.bin")
          .string();
  write_field(f, path);
  const auto g = read_field(path);
  CHECK(g.grid == f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(g.values[i] == f.values[i]);
  }
  // header layout: n, N as little-endian u64, then L as little-endian f64
  std::ifstream in(path, std::ios::binary);
  unsigned char header[24];
  in.read(reinterpret_cast<char*>(header), 24);
  CHECK(header[0] == 1);  // n = 1
  for (int i = 1; i < 8; ++i) CHECK(header[i] == 0);
  CHECK(header[8] == 16);  // N = 16
  for (int i = 9; i < 16; ++i) CHECK(header[i] == 0);
  double L = 0.0;
  std::memcpy(&L, header + 16, 8);
  CHECK(L == 12.5);
  std::error_code ec;
  std::filesystem::remove(path, ec);
}
