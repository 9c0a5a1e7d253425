#include "asnn/asn.hpp"

#include <algorithm>
#include <limits>

namespace asnn {

bool AsnParams::validate() const {
  if (!(theta0 > 0.0)) throw std::invalid_argument("AsnParams: theta0 must be > 0");
  if (!(m_f >= 0.0)) throw std::invalid_argument("AsnParams: m_f must be >= 0");
  if (!(tau_kappa > 0.0) || !(tau_gamma > 0.0) || !(tau_smooth > 0.0))
    throw std::invalid_argument("AsnParams: time constants must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("AsnParams: dt must be > 0");
  const double tau_min = std::min({tau_kappa, tau_gamma, tau_smooth});
  return dt > tau_min;  // caller may warn
}

bool AsnState::finite() const {
  return std::isfinite(s) && std::isfinite(s_hat) && std::isfinite(theta_adapt) &&
         std::isfinite(i_in);
}

AsnCoeffs AsnCoeffs::make(const AsnParams& p) {
  AsnCoeffs c;
  c.decay_kappa = std::exp(-p.dt / p.tau_kappa);
  c.decay_gamma = std::exp(-p.dt / p.tau_gamma);
  c.decay_smooth = std::exp(-p.dt / p.tau_smooth);
  c.isi_cap = 10.0 * p.tau_kappa;
  return c;
}

double nu_factor(double isi, const AsnParams& params) {
  if (!(isi > 0.0)) throw std::domain_error("nu_factor: isi must be > 0");
  if (params.nu_mode == NuMode::LinearFit)
    return std::max(0.5, params.nu_fit.a + params.nu_fit.b * isi);
  const double x = isi / params.tau_kappa;
  // closed form of isi / (2 * integral of kappa over the interval)
  return isi / (2.0 * params.tau_kappa * (1.0 - std::exp(-x)));
}

NuLinearFit fit_linear_xy(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_linear_xy: need >= 2 (x, y) pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("fit_linear_xy: degenerate grid");
  NuLinearFit fit;
  fit.b = (n * sxy - sx * sy) / det;
  fit.a = (sy - fit.b * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.a + fit.b * xs[i]);
    fit.residual += r * r;
  }
  return fit;
}

NuLinearFit fit_nu_linear(double tau_kappa, const std::vector<double>& isi_grid) {
  if (!(tau_kappa > 0.0)) throw std::invalid_argument("fit_nu_linear: tau_kappa must be > 0");
  if (isi_grid.size() < 2) throw std::invalid_argument("fit_nu_linear: need >= 2 grid points");
  AsnParams p;
  p.tau_kappa = tau_kappa;
  std::vector<double> ys;
  ys.reserve(isi_grid.size());
  for (double isi : isi_grid) {
    if (!(isi > 0.0)) throw std::invalid_argument("fit_nu_linear: grid points must be > 0");
    ys.push_back(nu_factor(isi, p));
  }
  return fit_linear_xy(isi_grid, ys);
}

void neuron_decay(AsnState& state, const AsnCoeffs& coeffs) {
  state.i_in *= coeffs.decay_kappa;
  state.s_hat *= coeffs.decay_kappa;
  state.theta_adapt *= coeffs.decay_gamma;
}

std::optional<SpikeEvent> neuron_fire(AsnState& state, double external_current,
                                      const AsnParams& params, const AsnCoeffs& coeffs,
                                      double now_ms, int neuron_id) {
  if (!state.finite() || !std::isfinite(external_current))
    throw std::runtime_error("neuron_step: non-finite state or input at neuron " +
                             std::to_string(neuron_id));

  const double current = state.i_in + external_current;
  state.s = state.s * coeffs.decay_smooth + (1.0 - coeffs.decay_smooth) * current;

  const double theta = params.theta0 + state.theta_adapt;
  if (state.s - state.s_hat > theta) {
    const double isi =
        state.last_spike_time ? now_ms - *state.last_spike_time : coeffs.isi_cap;
    const double pulse = theta * nu_factor(isi, params);
    state.s_hat += pulse;
    state.theta_adapt += params.m_f * theta;
    state.last_spike_time = now_ms;
    return SpikeEvent{now_ms, neuron_id, theta, pulse};
  }
  return std::nullopt;
}

std::optional<SpikeEvent> neuron_step(AsnState& state, double external_current,
                                      const AsnParams& params, const AsnCoeffs& coeffs,
                                      double now_ms, int neuron_id) {
  neuron_decay(state, coeffs);
  return neuron_fire(state, external_current, params, coeffs, now_ms, neuron_id);
}

std::optional<SpikeEvent> neuron_step(AsnState& state, double external_current,
                                      const AsnParams& params, double now_ms,
                                      int neuron_id) {
  return neuron_step(state, external_current, params, AsnCoeffs::make(params), now_ms,
                     neuron_id);
}

}  // namespace asnn
