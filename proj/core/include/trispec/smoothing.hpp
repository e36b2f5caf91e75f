#pragma once

#include <array>
#include <vector>

#include "trispec/geometry.hpp"
#include "trispec/lattice.hpp"
#include "trispec/measure.hpp"

namespace trispec {

/// Parameters that fully determine a kernel; echoed into every report.
struct KernelParameters {
  double delta = 0.0;           ///< Fourier support radius of chi
  int grid_points = 4096;       ///< subintervals of the bump support
  double tail_tolerance = 1e-12;
  double trunc_radius = 0.0;    ///< filled in by build_kernel
  double tail_bound = 0.0;      ///< filled in by build_kernel
};

/// One-dimensional band-limited Schwartz function chi with
///   chi_hat = c * (g * g~),  g(t) = exp(-1 / (1 - (2t/delta)^2)) on |t| < delta/2,
/// normalized so chi_hat(0) = integral of chi = 1. chi = c/(2pi) |g_hat|^2 is
/// nonnegative and chi_hat vanishes outside [-delta, delta].
///
/// chi is tabulated on [0, trunc_radius] and treated as 0 beyond it; the mass
/// discarded that way is tail_bound.
class SmoothingKernel {
 public:
  [[nodiscard]] const KernelParameters& parameters() const noexcept { return params_; }
  [[nodiscard]] double delta() const noexcept { return params_.delta; }
  [[nodiscard]] int grid_points() const noexcept { return params_.grid_points; }
  [[nodiscard]] double trunc_radius() const noexcept { return params_.trunc_radius; }
  [[nodiscard]] double tail_bound() const noexcept { return params_.tail_bound; }

  /// Spacing of the chi_hat samples (and of the bump quadrature).
  [[nodiscard]] double hat_step() const noexcept { return hat_step_; }
  /// chi_hat at -delta + k * hat_step, k = 0 .. 2 * grid_points.
  [[nodiscard]] const std::vector<double>& hat_grid() const noexcept { return hat_grid_; }

  /// Tabulated chi; exactly 0 for |x| > trunc_radius.
  [[nodiscard]] double chi(double x) const noexcept;
  /// chi from the bump quadrature directly, no table and no truncation.
  [[nodiscard]] double chi_direct(double x) const;

  /// Spacing and node count of the evaluation table on [0, trunc_radius].
  [[nodiscard]] double table_step() const noexcept { return table_step_; }
  [[nodiscard]] std::size_t table_size() const noexcept { return table_value_.size(); }

  /// Integral of chi over |x| > r, from the chi_hat samples.
  [[nodiscard]] double tail_mass(double r) const;

  /// Trapezoid integral of the tabulated chi over [-trunc_radius, trunc_radius].
  [[nodiscard]] double table_integral() const;

 private:
  friend SmoothingKernel build_kernel(double, int, double);

  KernelParameters params_;
  double hat_step_ = 0.0;
  double norm_ = 0.0;                // c / (2 pi)
  std::vector<double> bump_;         // g at k * hat_step, k = 0 .. grid_points / 2
  std::vector<double> hat_grid_;
  double table_step_ = 0.0;
  std::vector<double> table_value_;  // g_hat at k * table_step
  std::vector<double> table_slope_;  // g_hat' at k * table_step
};

/// Builds chi for Fourier support radius `delta`. `grid_points` (even, >= 512)
/// subdivides the bump support; trunc_radius is the smallest radius (on a
/// 1/8 grid) whose tail mass is <= tail_tolerance. Throws ConstructionError
/// when the grid is too coarse to certify that tolerance.
[[nodiscard]] SmoothingKernel build_kernel(double delta, int grid_points = 4096,
                                           double tail_tolerance = 1e-12);

/// rho(v) = chi(v1) chi(v2) chi(v3).
[[nodiscard]] double eval_rho(const SmoothingKernel& kernel,
                              const std::array<double, 3>& v) noexcept;

/// rho * mu (tau) = sum over atoms of weight * rho(tau - freqs), summed in key
/// order. Throws DomainError unless every component of tau is at most
/// cutoff - trunc_radius.
[[nodiscard]] double convolve(const JointSpectralMeasure& measure,
                              const SmoothingKernel& kernel,
                              const FrequencyTriple& tau);

/// rho * mu (tau) for the implicit torus lattice:
///   (2pi)^{-n} sum_k chi(tau3 - |k|) (f * g)(k),
/// f(m) = chi(tau1 - |m|), g(j) = chi(tau2 - |j|), with f * g by FFT.
[[nodiscard]] double convolve(const TorusLattice& lattice,
                              const SmoothingKernel& kernel,
                              const FrequencyTriple& tau);

/// sum over m in Z^n with |m| <= cutoff of chi(t - |m|).
[[nodiscard]] double lattice_radial_sum(const TorusLattice& lattice,
                                        const SmoothingKernel& kernel, double t);

}  // namespace trispec
