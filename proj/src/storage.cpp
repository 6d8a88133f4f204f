#include "maglat/storage.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "maglat/constants.hpp"
#include "maglat/errors.hpp"
#include "maglat/fitting.hpp"
#include "maglat/rng.hpp"

namespace maglat {

namespace {
constexpr double kTwoPi = 2.0 * constants::pi;
}  // namespace

double thermal_mean_fraction(double theta) {
  if (theta < 0.0) throw InvariantError("thermal_mean_fraction: theta < 0");
  if (theta == 0.0) return 1.0;
  // E[exp(-theta x)] for x ~ Exp(1) truncated to [0, 1/theta].
  const double c = -std::expm1(-1.0 / theta);
  return -std::expm1(-(1.0 + theta) / theta) / ((1.0 + theta) * c);
}

EnsembleDraw draw_ensemble(const SampleConfig& sample,
                           const LatticeConfig& lattice, int n,
                           std::uint64_t seed) {
  if (n <= 0) throw InvariantError("draw_ensemble: ensemble size must be positive");
  if (!(sample.temperature_uK < lattice.trap_depth_uK))
    throw InvariantError("draw_ensemble: untrapped regime, temperature " +
                         std::to_string(sample.temperature_uK) +
                         " uK >= trap depth " +
                         std::to_string(lattice.trap_depth_uK) + " uK");
  const double theta = sample.temperature_uK / lattice.trap_depth_uK;
  const double c = theta > 0.0 ? -std::expm1(-1.0 / theta) : 1.0;

  EnsembleDraw out;
  out.rng_seed = seed;
  out.intensity_fraction.resize(n);
  out.z_cm.resize(n);
  out.weight.assign(n, 1.0 / n);
  for (int j = 0; j < n; ++j) {
    const auto atom = static_cast<std::uint64_t>(j);
    const double xi_f = rng::uniform01(seed, 2 * atom);
    const double xi_z = rng::uniform01(seed, 2 * atom + 1);
    // Radial well energy in units of k_B T: Exp(1) truncated at the depth.
    const double x = -std::log1p(-xi_f * c);
    out.intensity_fraction[j] = std::exp(-theta * x);
    out.z_cm[j] = (xi_z - 0.5) * sample.length_cm;
  }
  return out;
}

std::vector<double> atom_detunings(const ManifoldEngine& engine, Coherence coh,
                                   double B_G, const EnsembleDraw& draw,
                                   double gradient_G_per_cm) {
  const double intensity = engine.intensity();
  const double mu = engine.effective_moment(coh, B_G, intensity);
  std::vector<double> out(draw.intensity_fraction.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] =
        engine.light_part(coh, B_G, draw.intensity_fraction[j] * intensity) +
        mu * gradient_G_per_cm * draw.z_cm[j];
  return out;
}

double ensemble_efficiency(const std::vector<double>& delta_Hz,
                           const std::vector<double>& weight, double t_s,
                           double loss_time_s, double eta0) {
  if (delta_Hz.size() != weight.size() || delta_Hz.empty())
    throw InvariantError("ensemble_efficiency: mismatched ensemble arrays");
  std::complex<double> m{0.0, 0.0};
  for (std::size_t j = 0; j < delta_Hz.size(); ++j) {
    const double ph = -kTwoPi * delta_Hz[j] * t_s;
    m += weight[j] * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return eta0 * std::norm(m) * std::exp(-t_s / loss_time_s);
}

bool check_monotone_envelope(const std::vector<double>& efficiency,
                             int window) {
  if (window < 1 || efficiency.size() < 2) return true;
  const int n = static_cast<int>(efficiency.size());
  const int half = window / 2;
  std::vector<double> smooth(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double acc = 0.0;
    for (int k = lo; k <= hi; ++k) acc += efficiency[k];
    smooth[i] = acc / (hi - lo + 1);
  }
  for (int i = 1; i < n; ++i)
    if (smooth[i] > smooth[i - 1] + 1e-12) return false;
  return true;
}

namespace {

// Delta-method standard error of |mean of unit phasors|^2, scaled to eta.
double efficiency_stderr(const std::vector<double>& delta_Hz,
                         const std::vector<double>& weight, double t_s,
                         double loss_time_s, double eta0) {
  std::complex<double> m{0.0, 0.0};
  for (std::size_t j = 0; j < delta_Hz.size(); ++j) {
    const double ph = -kTwoPi * delta_Hz[j] * t_s;
    m += weight[j] * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  double var = 0.0;
  for (std::size_t j = 0; j < delta_Hz.size(); ++j) {
    const double ph = -kTwoPi * delta_Hz[j] * t_s;
    var += weight[j] * weight[j] *
           std::norm(std::complex<double>(std::cos(ph), std::sin(ph)) - m);
  }
  return eta0 * std::exp(-t_s / loss_time_s) * 2.0 * std::abs(m) *
         std::sqrt(var);
}

}  // namespace

DecayCurve retrieval_curve(const ManifoldEngine& engine, Coherence coh,
                           double B_G, const SampleConfig& sample,
                           const std::vector<double>& times_s,
                           std::uint64_t seed, double eta0) {
  const EnsembleDraw draw =
      draw_ensemble(sample, engine.lattice(), sample.atom_count, seed);
  const std::vector<double> delta =
      atom_detunings(engine, coh, B_G, draw, sample.gradient_G_per_cm);

  DecayCurve curve;
  curve.t_s = times_s;
  curve.coherence = coh;
  curve.bias_B_G = B_G;
  curve.eta0 = eta0;
  curve.seed = seed;
  curve.efficiency.reserve(times_s.size());
  curve.stderr_estimate.reserve(times_s.size());
  for (double t : times_s) {
    if (t < 0.0) throw InvariantError("retrieval_curve: negative storage time");
    curve.efficiency.push_back(
        ensemble_efficiency(delta, draw.weight, t, sample.loss_time_s, eta0));
    curve.stderr_estimate.push_back(
        efficiency_stderr(delta, draw.weight, t, sample.loss_time_s, eta0));
  }
  if (!check_monotone_envelope(curve.efficiency))
    curve.warnings.push_back(
        "envelope non-monotone after smoothing (gradient-dephasing ringing)");
  return curve;
}

DecayCurve retrieval_curve(const SpeciesData& species,
                           const LatticeConfig& lattice, double B_G,
                           Coherence coh, const SampleConfig& sample,
                           const std::vector<double>& times_s,
                           std::uint64_t seed, double eta0) {
  return retrieval_curve(ManifoldEngine(species, lattice), coh, B_G, sample,
                         times_s, seed, eta0);
}

ScanCurve field_scan(const ManifoldEngine& engine, Coherence coh,
                     const SampleConfig& sample, double fixed_t_s,
                     const std::vector<double>& B_grid_G, std::uint64_t seed,
                     double eta0) {
  if (fixed_t_s < 0.0) throw InvariantError("field_scan: negative storage time");
  const EnsembleDraw draw =
      draw_ensemble(sample, engine.lattice(), sample.atom_count, seed);

  ScanCurve curve;
  curve.B_G = B_grid_G;
  curve.coherence = coh;
  curve.fixed_t_s = fixed_t_s;
  curve.eta0 = eta0;
  curve.seed = seed;
  curve.efficiency.reserve(B_grid_G.size());
  curve.stderr_estimate.reserve(B_grid_G.size());
  for (double B : B_grid_G) {
    const std::vector<double> delta =
        atom_detunings(engine, coh, B, draw, sample.gradient_G_per_cm);
    curve.efficiency.push_back(ensemble_efficiency(
        delta, draw.weight, fixed_t_s, sample.loss_time_s, eta0));
    curve.stderr_estimate.push_back(efficiency_stderr(
        delta, draw.weight, fixed_t_s, sample.loss_time_s, eta0));
  }
  return curve;
}

ScanCurve field_scan(const SpeciesData& species, const LatticeConfig& lattice,
                     Coherence coh, const SampleConfig& sample,
                     double fixed_t_s, const std::vector<double>& B_grid_G,
                     std::uint64_t seed, double eta0) {
  return field_scan(ManifoldEngine(species, lattice), coh, sample, fixed_t_s,
                    B_grid_G, seed, eta0);
}

double predicted_lifetime(double mu_prime_Hz_per_G, double b_prime_G_per_cm,
                          double l_cm, double loss_time_s) {
  if (mu_prime_Hz_per_G < 0.0 || b_prime_G_per_cm < 0.0 || l_cm < 0.0)
    throw InvariantError("predicted_lifetime: negative input");
  if (loss_time_s <= 0.0)
    throw InvariantError("predicted_lifetime: loss time must be positive");
  return 1.0 /
         (kTwoPi * mu_prime_Hz_per_G * b_prime_G_per_cm * l_cm +
          1.0 / loss_time_s);
}

double loss_deconvolve(double tau_s, double loss_time_s) {
  if (tau_s <= 0.0 || loss_time_s <= 0.0)
    throw InvariantError("loss_deconvolve: lifetimes must be positive");
  if (tau_s >= loss_time_s)
    throw InvariantError(
        "loss_deconvolve: tau >= loss time; loss alone cannot explain the "
        "decay");
  return loss_time_s * tau_s / (loss_time_s - tau_s);
}

double lifetime_1e(const std::vector<double>& delta_Hz,
                   const std::vector<double>& weight, double loss_time_s) {
  const double target = std::exp(-1.0);
  auto g = [&](double t) {
    return ensemble_efficiency(delta_Hz, weight, t, loss_time_s, 1.0);
  };
  // Bracket the first crossing by doubling, then refine by scanning so a
  // ringing dip inside the bracket cannot be skipped, then bisect.
  double lo = 0.0, hi = 1e-4;
  while (g(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NonConvergence("lifetime_1e: no 1/e crossing found");
  }
  for (int pass = 0; pass < 2; ++pass) {
    const int kSteps = 64;
    const double width = hi - lo;
    for (int i = 1; i <= kSteps; ++i) {
      const double t = lo + width * i / kSteps;
      if (g(t) <= target) {
        hi = t;
        lo = t - width / kSteps;  // previous grid point: g there was > target
        break;
      }
    }
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<DepthLifetime> depth_sweep(const SpeciesData& species,
                                       const LatticeConfig& lattice,
                                       Coherence coh,
                                       const SampleConfig& sample,
                                       const std::vector<double>& depths_uK,
                                       const std::vector<double>& b_at_magic_G,
                                       std::uint64_t seed) {
  if (depths_uK.size() != b_at_magic_G.size())
    throw InvariantError("depth_sweep: depths and magic fields must pair up");
  std::vector<DepthLifetime> out;
  out.reserve(depths_uK.size());
  for (std::size_t k = 0; k < depths_uK.size(); ++k) {
    LatticeConfig lat = lattice;
    lat.trap_depth_uK = depths_uK[k];
    const ManifoldEngine engine(species, lat);
    const EnsembleDraw draw =
        draw_ensemble(sample, lat, sample.atom_count, seed);
    const std::vector<double> delta = atom_detunings(
        engine, coh, b_at_magic_G[k], draw, sample.gradient_G_per_cm);
    out.push_back({depths_uK[k], b_at_magic_G[k],
                   lifetime_1e(delta, draw.weight, sample.loss_time_s)});
  }
  return out;
}

GradientCalibration calibrate_gradient(const ManifoldEngine& engine,
                                       const SampleConfig& sample,
                                       const std::vector<double>& times_s,
                                       std::uint64_t seed,
                                       double target_tau_s, double eta0) {
  GradientCalibration cal;
  cal.b0_G = magic_field_numeric(engine, Coherence::clock).b0;
  cal.mu_prime_Hz_per_G =
      engine.effective_moment(Coherence::clock, cal.b0_G, engine.intensity());

  const EnsembleDraw draw =
      draw_ensemble(sample, engine.lattice(), sample.atom_count, seed);
  const int n = static_cast<int>(draw.intensity_fraction.size());
  // The light part is gradient-independent: cache it outside the search.
  std::vector<double> light(n), grad_unit(n);
  for (int j = 0; j < n; ++j) {
    light[j] = engine.light_part(Coherence::clock, cal.b0_G,
                                 draw.intensity_fraction[j] * engine.intensity());
    grad_unit[j] = cal.mu_prime_Hz_per_G * draw.z_cm[j];  // per (G/cm)
  }

  std::vector<double> delta(n), y(times_s.size());
  auto fitted_tau = [&](double m) {
    const double bp = m / (cal.mu_prime_Hz_per_G * sample.length_cm);
    for (int j = 0; j < n; ++j) delta[j] = light[j] + grad_unit[j] * bp;
    for (std::size_t i = 0; i < times_s.size(); ++i)
      y[i] = ensemble_efficiency(delta, draw.weight, times_s[i],
                                 sample.loss_time_s, eta0);
    return fit_exponential(times_s, y).param("tau");
  };

  // m = mu' B' l, capped below the first ringing zero so sidelobe-latched
  // fits cannot pose as calibration roots.
  double mlo = 0.05, mhi = 2.5;
  double flo = fitted_tau(mlo) - target_tau_s;
  const double fhi = fitted_tau(mhi) - target_tau_s;
  if (flo * fhi > 0.0)
    throw NoSignChange(
        "calibrate_gradient: target lifetime unreachable in the search "
        "window");
  for (cal.iterations = 0; cal.iterations < 60; ++cal.iterations) {
    const double mid = 0.5 * (mlo + mhi);
    const double fm = fitted_tau(mid) - target_tau_s;
    if ((flo < 0.0) == (fm < 0.0)) {
      mlo = mid;
      flo = fm;
    } else {
      mhi = mid;
    }
  }
  const double m = 0.5 * (mlo + mhi);
  cal.gradient_G_per_cm = m / (cal.mu_prime_Hz_per_G * sample.length_cm);
  cal.fitted_tau_s = fitted_tau(m);
  return cal;
}

}  // namespace maglat
