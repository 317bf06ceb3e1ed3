#include "halfwave/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace halfwave::fft {

namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(const GridSpec& grid, int sign) {
  const auto key = std::make_tuple(grid.n, grid.N, sign);
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // Dummy buffers only shape the plan; FFTW_UNALIGNED lets fftw_execute_dft
  // run on any buffer later.
  std::vector<std::complex<double>> dummy(grid.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(dummy.data());
  fftw_plan plan = nullptr;
  switch (grid.n) {
    case 1:
      plan = fftw_plan_dft_1d(grid.N, ptr, ptr, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
      break;
    case 2:
      plan = fftw_plan_dft_2d(grid.N, grid.N, ptr, ptr, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
      break;
    case 3:
      plan = fftw_plan_dft_3d(grid.N, grid.N, grid.N, ptr, ptr, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
      break;
    default:
      throw std::invalid_argument("fft: unsupported dimension");
  }
  if (!plan) throw std::runtime_error("fft: plan creation failed");
  plan_cache.emplace(key, plan);
  return plan;
}

}  // namespace

std::vector<std::complex<double>> forward(
    const GridSpec& grid, const std::vector<std::complex<double>>& in) {
  if (in.size() != grid.size()) {
    throw std::invalid_argument("fft::forward: size mismatch");
  }
  std::vector<std::complex<double>> out(in);
  fftw_plan plan = get_plan(grid, FFTW_FORWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, ptr, ptr);
  return out;
}

std::vector<std::complex<double>> inverse(
    const GridSpec& grid, const std::vector<std::complex<double>>& in) {
  if (in.size() != grid.size()) {
    throw std::invalid_argument("fft::inverse: size mismatch");
  }
  std::vector<std::complex<double>> out(in);
  fftw_plan plan = get_plan(grid, FFTW_BACKWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, ptr, ptr);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace halfwave::fft
