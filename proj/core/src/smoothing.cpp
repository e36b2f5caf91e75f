#include "trispec/smoothing.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "trispec/errors.hpp"

namespace trispec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTableStep = 1.0 / 128.0;
constexpr double kRadiusStep = 1.0 / 8.0;
constexpr int kReanchor = 64;

// g_hat(x) and g_hat'(x) by the trapezoid rule on the bump samples. The
// phases e^{i k h x} are advanced by complex multiplication and re-anchored
// with an exact sincos every kReanchor steps.
std::pair<double, double> bump_transform(const std::vector<double>& bump, double h,
                                         double x) {
  const std::complex<double> step = std::polar(1.0, h * x);
  std::complex<double> z = 1.0;
  double value = 0.0;
  double slope = 0.0;
  for (std::size_t k = 1; k < bump.size(); ++k) {
    if (k % kReanchor == 0) {
      z = std::polar(1.0, static_cast<double>(k) * h * x);
    } else {
      z *= step;
    }
    value += bump[k] * z.real();
    slope -= static_cast<double>(k) * bump[k] * z.imag();
  }
  return {h * (bump[0] + 2.0 * value), 2.0 * h * h * slope};
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw ResourceError("FFT buffer allocation failed");
  std::memset(static_cast<void*>(p), 0, sizeof(T) * count);
  return FftwBuffer<T>(p);
}

struct PlanDeleter {
  void operator()(fftw_plan p) const noexcept {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

bool is_smooth(std::int64_t m) {
  for (std::int64_t p : {2, 3, 5, 7})
    while (m % p == 0) m /= p;
  return m == 1;
}

std::int64_t fft_size_at_least(std::int64_t m) {
  while (!is_smooth(m)) ++m;
  return m;
}

void require_safe(double cutoff, const SmoothingKernel& kernel,
                  const FrequencyTriple& tau) {
  const double reach = std::max({tau.t1, tau.t2, tau.t3}) + kernel.trunc_radius();
  if (reach > cutoff) {
    std::ostringstream msg;
    msg << "convolve: tau = (" << tau.t1 << ", " << tau.t2 << ", " << tau.t3
        << ") with kernel radius " << kernel.trunc_radius()
        << " needs a measure cutoff >= " << reach << " (have " << cutoff << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

SmoothingKernel build_kernel(double delta, int grid_points, double tail_tolerance) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw DomainError("build_kernel: delta must be positive");
  if (grid_points < 512 || grid_points % 2 != 0)
    throw DomainError("build_kernel: grid_points must be even and >= 512");
  if (!(tail_tolerance > 0.0))
    throw DomainError("build_kernel: tail tolerance must be positive");

  SmoothingKernel k;
  k.params_.delta = delta;
  k.params_.grid_points = grid_points;
  k.params_.tail_tolerance = tail_tolerance;
  const double h = delta / grid_points;
  k.hat_step_ = h;

  const int half = grid_points / 2;
  const double a = 0.5 * delta;
  k.bump_.resize(static_cast<std::size_t>(half) + 1);
  for (int i = 0; i <= half; ++i) {
    const double s = (i * h) / a;
    k.bump_[i] = (i == half) ? 0.0 : std::exp(-1.0 / (1.0 - s * s));
  }

  // g on the full support, index i <-> t = -delta/2 + i h.
  std::vector<double> full(static_cast<std::size_t>(grid_points) + 1);
  for (int i = 0; i <= grid_points; ++i) full[i] = k.bump_[std::abs(i - half)];

  long double energy = 0.0L;
  for (double v : full) energy += static_cast<long double>(v) * v;
  const double c = static_cast<double>(1.0L / (energy * h));
  k.norm_ = c / (2.0 * kPi);

  // chi_hat(j h) = c h sum_i g_i g_{i-j}
  k.hat_grid_.assign(2 * static_cast<std::size_t>(grid_points) + 1, 0.0);
  for (int j = 0; j <= grid_points; ++j) {
    long double acc = 0.0L;
    for (int i = j; i <= grid_points; ++i)
      acc += static_cast<long double>(full[i]) * full[i - j];
    const double v = static_cast<double>(c * h * acc);
    k.hat_grid_[grid_points + j] = v;
    k.hat_grid_[grid_points - j] = v;
  }

  // The sampled model is periodic with period 2pi/h; stay well inside it.
  const double max_radius = std::min(0.25 * 2.0 * kPi / h, 2000.0);
  const auto max_steps = static_cast<std::int64_t>(max_radius / kRadiusStep);
  if (k.tail_mass(max_steps * kRadiusStep) > tail_tolerance) {
    std::ostringstream msg;
    msg << "build_kernel: cannot certify tail mass <= " << tail_tolerance
        << " within radius " << max_radius << " at grid_points = " << grid_points;
    throw ConstructionError(msg.str());
  }
  // tail_mass is monotone since chi >= 0.
  std::int64_t lo = 0;
  std::int64_t hi = max_steps;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (k.tail_mass(mid * kRadiusStep) <= tail_tolerance) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  k.params_.trunc_radius = hi * kRadiusStep;
  k.params_.tail_bound = std::max(k.tail_mass(k.params_.trunc_radius), 0.0);

  k.table_step_ = kTableStep;
  const auto nodes =
      static_cast<std::size_t>(std::ceil(k.params_.trunc_radius / kTableStep)) + 2;
  k.table_value_.resize(nodes);
  k.table_slope_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto [v, d] = bump_transform(k.bump_, h, static_cast<double>(i) * kTableStep);
    k.table_value_[i] = v;
    k.table_slope_[i] = d;
  }
  return k;
}

double SmoothingKernel::chi(double x) const noexcept {
  const double ax = std::abs(x);
  if (!(ax <= params_.trunc_radius)) return 0.0;
  const double pos = ax / table_step_;
  auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= table_value_.size()) i = table_value_.size() - 2;
  const double u = pos - static_cast<double>(i);
  // Cubic Hermite on g_hat, then square: the result cannot go negative.
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  const double g = h00 * table_value_[i] + h10 * table_step_ * table_slope_[i] +
                   h01 * table_value_[i + 1] + h11 * table_step_ * table_slope_[i + 1];
  return norm_ * g * g;
}

double SmoothingKernel::chi_direct(double x) const {
  const double g = bump_transform(bump_, hat_step_, std::abs(x)).first;
  return norm_ * g * g;
}

double SmoothingKernel::tail_mass(double r) const {
  if (!(r > 0.0)) return 1.0;
  // Integral of chi over [-r, r] = (1/pi) int chi_hat(xi) sin(r xi)/xi dxi.
  const int n = params_.grid_points;
  const long double h = hat_step_;
  long double inside = static_cast<long double>(hat_grid_[n]) * r;
  for (int j = 1; j <= n; ++j) {
    const long double xi = j * h;
    inside += 2.0L * hat_grid_[n + j] * std::sin(static_cast<long double>(r) * xi) / xi;
  }
  inside *= h / std::numbers::pi_v<long double>;
  return static_cast<double>(1.0L - inside);
}

double SmoothingKernel::table_integral() const {
  long double sum = chi(0.0);
  for (std::size_t i = 1;; ++i) {
    const double x = static_cast<double>(i) * table_step_;
    if (x > params_.trunc_radius) break;
    sum += 2.0L * chi(x);
  }
  return static_cast<double>(sum * table_step_);
}

double eval_rho(const SmoothingKernel& kernel, const std::array<double, 3>& v) noexcept {
  return kernel.chi(v[0]) * kernel.chi(v[1]) * kernel.chi(v[2]);
}

double convolve(const JointSpectralMeasure& measure, const SmoothingKernel& kernel,
                const FrequencyTriple& tau) {
  require_safe(measure.cutoff(), kernel, tau);
  const double r = kernel.trunc_radius();
  long double sum = 0.0L;
  for (const auto& a : measure.atoms()) {
    const double d1 = tau.t1 - a.freqs.t1;
    if (std::abs(d1) > r) continue;
    const double d2 = tau.t2 - a.freqs.t2;
    if (std::abs(d2) > r) continue;
    const double d3 = tau.t3 - a.freqs.t3;
    if (std::abs(d3) > r) continue;
    const double rho = kernel.chi(d1) * kernel.chi(d2) * kernel.chi(d3);
    if (measure.integer_counts()) {
      sum += static_cast<long double>(a.count) * rho;
    } else {
      sum += static_cast<long double>(a.weight) * rho;
    }
  }
  if (measure.integer_counts()) sum *= measure.count_scale();
  return static_cast<double>(sum);
}

double convolve(const TorusLattice& lattice, const SmoothingKernel& kernel,
                const FrequencyTriple& tau) {
  require_safe(lattice.cutoff(), kernel, tau);
  const int n = lattice.dim();
  const double r = kernel.trunc_radius();
  const double cutoff = lattice.cutoff();
  auto upper = [&](double t) {
    return std::nextafter(std::min(t + r, cutoff), std::numeric_limits<double>::infinity());
  };
  const auto shells1 = annulus_shells(n, std::max(tau.t1 - r, 0.0), upper(tau.t1));
  const auto shells2 = annulus_shells(n, std::max(tau.t2 - r, 0.0), upper(tau.t2));
  const auto shells3 = annulus_shells(n, std::max(tau.t3 - r, 0.0), upper(tau.t3));
  if (shells1.empty() || shells2.empty() || shells3.empty()) return 0.0;

  const auto extent = [](const std::vector<Shell>& s) {
    return static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(s.back().q))));
  };
  const std::int64_t e1 = extent(shells1);
  const std::int64_t e2 = extent(shells2);
  const std::int64_t offset = e1 + e2;
  const std::int64_t m = fft_size_at_least(2 * offset + 1);
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(m);
  if (total > (std::size_t{1} << 25)) {
    std::ostringstream msg;
    msg << "convolve: FFT grid " << m << "^" << n << " exceeds the 2^25 point budget";
    throw ResourceError(msg.str());
  }
  const std::size_t spectrum = total / static_cast<std::size_t>(m) *
                               static_cast<std::size_t>(m / 2 + 1);

  auto index = [&](const LatticeVector& v) {
    std::size_t idx = 0;
    for (int d = 0; d < n; ++d) {
      const std::int64_t c = ((v[d] % m) + m) % m;  // cyclic placement
      idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(c);
    }
    return idx;
  };

  auto f = fftw_buffer<double>(total);
  auto g = fftw_buffer<double>(total);
  auto fs = fftw_buffer<fftw_complex>(spectrum);
  auto gs = fftw_buffer<fftw_complex>(spectrum);
  for (const auto& s : shells1) {
    const double w = kernel.chi(tau.t1 - lattice_frequency(s.q));
    for (const auto& v : s.points) f[index(v)] = w;
  }
  for (const auto& s : shells2) {
    const double w = kernel.chi(tau.t2 - lattice_frequency(s.q));
    for (const auto& v : s.points) g[index(v)] = w;
  }

  int dims[3] = {static_cast<int>(m), static_cast<int>(m), static_cast<int>(m)};
  Plan forward_f, forward_g, backward;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward_f.reset(fftw_plan_dft_r2c(n, dims, f.get(), fs.get(), FFTW_ESTIMATE));
    forward_g.reset(fftw_plan_dft_r2c(n, dims, g.get(), gs.get(), FFTW_ESTIMATE));
    backward.reset(fftw_plan_dft_c2r(n, dims, fs.get(), f.get(), FFTW_ESTIMATE));
  }
  fftw_execute(forward_f.get());
  fftw_execute(forward_g.get());
  for (std::size_t i = 0; i < spectrum; ++i) {
    const std::complex<double> a(fs[i][0], fs[i][1]);
    const std::complex<double> b(gs[i][0], gs[i][1]);
    const std::complex<double> p = a * b;
    fs[i][0] = p.real();
    fs[i][1] = p.imag();
  }
  fftw_execute(backward.get());  // f now holds M^n * (f * g), cyclically

  // Indices |k_d| <= e1 + e2 < m/2 never alias, so cyclic equals linear here.
  long double sum = 0.0L;
  for (const auto& s : shells3) {
    const double w = kernel.chi(tau.t3 - lattice_frequency(s.q));
    if (w == 0.0) continue;
    long double shell_sum = 0.0L;
    for (const auto& v : s.points) {
      bool inside = true;
      for (int d = 0; d < n; ++d) inside = inside && std::abs(v[d]) <= offset;
      if (inside) shell_sum += f[index(v)];
    }
    sum += shell_sum * w;
  }
  return static_cast<double>(sum / static_cast<long double>(total) * lattice.count_scale());
}

double lattice_radial_sum(const TorusLattice& lattice, const SmoothingKernel& kernel,
                          double t) {
  const double r = kernel.trunc_radius();
  const double hi = std::nextafter(std::min(t + r, lattice.cutoff()),
                                   std::numeric_limits<double>::infinity());
  const auto shells = annulus_shells(lattice.dim(), std::max(t - r, 0.0), hi);
  long double sum = 0.0L;
  for (const auto& s : shells)
    sum += static_cast<long double>(s.points.size()) * kernel.chi(t - lattice_frequency(s.q));
  return static_cast<double>(sum);
}

}  // namespace trispec
