#include "upsbp/timeint.hpp"

#include <algorithm>
#include <cmath>

namespace upsbp {

namespace {

double error_norm(const std::vector<double>& err, const std::vector<double>& u0,
                  const std::vector<double>& u1, double abstol, double reltol) {
  double s = 0.0;
  const std::size_t n = err.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = abstol + reltol * std::max(std::abs(u0[i]), std::abs(u1[i]));
    const double q = err[i] / sc;
    s += q * q;
  }
  return std::sqrt(s / static_cast<double>(n));
}

double rms(const std::vector<double>& v, const std::vector<double>& ref, double abstol,
           double reltol) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc = abstol + reltol * std::abs(ref[i]);
    const double q = v[i] / sc;
    s += q * q;
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

bool has_nan(const std::vector<double>& v) {
  for (double x : v)
    if (std::isnan(x)) return true;
  return false;
}

/// Standard starting-step heuristic (order p = 3).
double initial_step(const RhsFn& rhs, const std::vector<double>& u0, double t0, double t_end,
                    double abstol, double reltol) {
  const std::size_t n = u0.size();
  std::vector<double> f0(n), u1(n), f1(n);
  rhs(t0, u0.data(), f0.data());
  const double d0 = rms(u0, u0, abstol, reltol);
  const double d1 = rms(f0, u0, abstol, reltol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_end - t0);
  for (std::size_t i = 0; i < n; ++i) u1[i] = u0[i] + h0 * f0[i];
  rhs(t0 + h0, u1.data(), f1.data());
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = abstol + reltol * std::abs(u0[i]);
    const double q = (f1[i] - f0[i]) / sc;
    d2 += q * q;
  }
  d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;
  double h1;
  if (std::max(d1, d2) <= 1e-15)
    h1 = std::max(1e-6, h0 * 1e-3);
  else
    h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 3.0);
  return std::min({100.0 * h0, h1, t_end - t0});
}

}  // namespace

IntegrationResult integrate_ode(const RhsFn& rhs, std::vector<double> u0,
                                const IntegratorConfig& cfg, const SampleFn& sample) {
  const std::size_t n = u0.size();
  IntegrationResult res;
  res.state = std::move(u0);
  double t = cfg.t_start;

  if (!(cfg.t_end > cfg.t_start)) throw InvalidArgument("integrate: t_end must exceed t_start");

  if (sample) sample(t, res.state);
  auto maybe_sample = [&](bool force) {
    if (!sample) return;
    if (force || (cfg.callback_every > 0 && res.stats.accepted % cfg.callback_every == 0))
      sample(t, res.state);
  };

  std::vector<double> k1(n), k2(n), k3(n), k4(n), y(n), ynew(n);

  if (cfg.scheme == TimeScheme::rk4_fixed) {
    if (!(cfg.dt > 0.0)) throw InvalidArgument("integrate: fixed mode needs dt > 0");
    while (t < cfg.t_end - 1e-14 * (cfg.t_end - cfg.t_start)) {
      const double dt = std::min(cfg.dt, cfg.t_end - t);
      rhs(t, res.state.data(), k1.data());
      for (std::size_t i = 0; i < n; ++i) y[i] = res.state[i] + 0.5 * dt * k1[i];
      rhs(t + 0.5 * dt, y.data(), k2.data());
      for (std::size_t i = 0; i < n; ++i) y[i] = res.state[i] + 0.5 * dt * k2[i];
      rhs(t + 0.5 * dt, y.data(), k3.data());
      for (std::size_t i = 0; i < n; ++i) y[i] = res.state[i] + dt * k3[i];
      rhs(t + dt, y.data(), k4.data());
      for (std::size_t i = 0; i < n; ++i)
        res.state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      t += dt;
      ++res.stats.accepted;
      if (res.stats.accepted > cfg.max_steps) throw IntegrationAbort(t, "step budget exhausted");
      maybe_sample(false);
    }
    res.t_final = t;
    maybe_sample(true);
    return res;
  }

  // four-stage third-order SSP scheme, embedded second-order weights
  // b = (1/6, 1/6, 1/6, 1/2), bhat = (1/4, 1/4, 1/4, 1/4)
  double dt = cfg.dt > 0.0 ? std::min(cfg.dt, cfg.t_end - t)
                           : initial_step(rhs, res.state, t, cfg.t_end, cfg.abstol, cfg.reltol);
  double err_prev = 1.0;
  std::vector<double> err(n);

  while (t < cfg.t_end - 1e-14 * (cfg.t_end - cfg.t_start)) {
    if (dt < 1e-12 * (cfg.t_end - cfg.t_start))
      throw IntegrationAbort(t, "time step underflow at t = " + std::to_string(t));
    dt = std::min(dt, cfg.t_end - t);

    rhs(t, res.state.data(), k1.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = res.state[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, y.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = res.state[i] + 0.5 * dt * (k1[i] + k2[i]);
    rhs(t + dt, y.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i)
      y[i] = res.state[i] + dt / 6.0 * (k1[i] + k2[i] + k3[i]);
    rhs(t + 0.5 * dt, y.data(), k4.data());

    for (std::size_t i = 0; i < n; ++i) {
      const double db = dt / 6.0 * (k1[i] + k2[i] + k3[i] + 3.0 * k4[i]);
      const double dbh = dt / 4.0 * (k1[i] + k2[i] + k3[i] + k4[i]);
      ynew[i] = res.state[i] + db;
      err[i] = db - dbh;
    }

    double e = error_norm(err, res.state, ynew, cfg.abstol, cfg.reltol);
    if (std::isnan(e)) e = 1e10;

    if (e <= 1.0) {
      res.state.swap(ynew);
      t += dt;
      ++res.stats.accepted;
      err_prev = std::max(e, 1e-10);
      maybe_sample(false);
    } else {
      ++res.stats.rejected;
    }
    double factor = 0.9 * std::pow(std::max(e, 1e-10), -0.7 / 3.0) * std::pow(err_prev, 0.4 / 3.0);
    factor = std::clamp(factor, 0.2, 5.0);
    if (e > 1.0) factor = std::min(factor, 1.0);
    dt *= factor;

    if (res.stats.accepted + res.stats.rejected > cfg.max_steps)
      throw IntegrationAbort(t, "step budget exhausted");
  }
  res.t_final = t;
  maybe_sample(true);
  return res;
}

IntegrationResult integrate(const Semidiscretization& semi, std::vector<double> u0,
                            const IntegratorConfig& cfg, const SampleFn& sample) {
  double t_latest = cfg.t_start;
  const RhsFn rhs = [&semi, &t_latest](double t, const double* u, double* dudt) {
    t_latest = std::max(t_latest, t);
    semi.rhs(t, u, dudt);
  };
  try {
    auto res = integrate_ode(rhs, std::move(u0), cfg, sample);
    if (has_nan(res.state)) {
      res.crash = CrashEvent{res.t_final, -1, -1, 0.0, 0.0, "nan"};
    }
    return res;
  } catch (const AdmissibilityError& e) {
    IntegrationResult res;
    res.t_final = t_latest;
    res.crash = CrashEvent{t_latest, e.element, e.node, e.x, e.y, e.quantity()};
    return res;
  }
}

FunctionalSample record_functionals(const Semidiscretization& semi, const std::vector<double>& u,
                                    double t) {
  FunctionalSample s;
  s.t = t;
  const int nv = semi.nvar();
  s.mass.assign(nv, 0.0);
  const int npe = semi.layout.nodes_per_element();
  const bool euler2 = semi.equation == Equation::euler2d;
  const bool euler1 = semi.equation == Equation::euler1d;
  for (int e = 0; e < semi.layout.elements(); ++e) {
    for (int node = 0; node < npe; ++node) {
      const double w = semi.layout.weight(node);
      double sq = 0.0;
      for (int c = 0; c < nv; ++c) {
        const double v = u[semi.index(e, node, c)];
        s.mass[c] += w * v;
        sq += v * v;
      }
      s.energy += w * sq;
      if (euler1 || euler2) {
        const double rho = u[semi.index(e, node, 0)];
        double m2 = u[semi.index(e, node, 1)] * u[semi.index(e, node, 1)];
        if (euler2) m2 += u[semi.index(e, node, 2)] * u[semi.index(e, node, 2)];
        s.kinetic_energy += w * 0.5 * m2 / rho;
      }
    }
  }
  return s;
}

}  // namespace upsbp
