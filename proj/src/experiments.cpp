#include "upsbp/experiments.hpp"

#include <cmath>

namespace upsbp {

double ic_advection_sine(double x) { return std::sin(M_PI * x); }
double exact_advection_sine(double t, double x) { return std::sin(M_PI * (x - t)); }

std::array<double, 3> ic_euler_manufactured(double t, double x) {
  return manufactured_state_euler(t, x);
}

std::array<double, 4> ic_isentropic_vortex(double x, double y, const GasModel& gas) {
  constexpr double eps = 10.0;
  constexpr double rho0 = 1.0, p0 = 10.0;
  constexpr double v0x = 1.0, v0y = 1.0;
  const double T0 = p0 / rho0;
  const double r2 = x * x + y * y;
  const double T = T0 - (gas.gamma - 1.0) * eps * eps / (8.0 * gas.gamma * M_PI * M_PI) *
                            std::exp(1.0 - r2);
  const double rho = rho0 * std::pow(T / T0, 1.0 / (gas.gamma - 1.0));
  const double swirl = eps / (2.0 * M_PI) * std::exp(0.5 * (1.0 - r2));
  const double v1 = v0x - swirl * y;
  const double v2 = v0y + swirl * x;
  const double p = rho * T;
  const double rho_e = p / (gas.gamma - 1.0) + 0.5 * rho * (v1 * v1 + v2 * v2);
  return {rho, rho * v1, rho * v2, rho_e};
}

std::array<double, 4> exact_isentropic_vortex(double t, double x, double y,
                                              const GasModel& gas) {
  constexpr double lo = -5.0, len = 10.0;
  auto wrap = [&](double s) {
    double w = std::fmod(s - lo, len);
    if (w < 0.0) w += len;
    return lo + w;
  };
  return ic_isentropic_vortex(wrap(x - t), wrap(y - t), gas);
}

std::array<double, 4> ic_khi(double x, double y, const GasModel& gas) {
  const double b = std::tanh(15.0 * y + 7.5) - std::tanh(15.0 * y - 7.5);
  const double rho = 0.5 + 0.75 * b;
  const double p = 1.0;
  const double v1 = 0.5 * (b - 1.0);
  const double v2 = 0.1 * std::sin(2.0 * M_PI * x);
  const double rho_e = p / (gas.gamma - 1.0) + 0.5 * rho * (v1 * v1 + v2 * v2);
  return {rho, rho * v1, rho * v2, rho_e};
}

// -- convergence ---------------------------------------------------------------

std::vector<std::pair<int, int>> default_ladder(Equation eq, int order, RefinementMode mode) {
  (void)eq;
  std::vector<std::pair<int, int>> cells;
  if (order <= 2) {
    if (mode == RefinementMode::dg) {
      for (int k = 1; k <= 128; k *= 2) cells.emplace_back(k, 20);
    } else {
      for (int n = 10; n <= 1280; n *= 2) cells.emplace_back(4, n);
    }
    return cells;
  }
  // derived periodic stencils: single block, refine the node count; ranges
  // keep the spatial error above the time integration tolerance
  if (mode == RefinementMode::dg)
    throw InvalidArgument(
        "DG refinement for interior orders >= 3 needs a bounded operator table");
  const int base = 16;
  for (int n : {base, 2 * base, 4 * base, 8 * base}) cells.emplace_back(1, n);
  return cells;
}

OperatorPair bounded_element_operator(int order, int nodes, const std::string& table_path) {
  if (!table_path.empty()) {
    OperatorPair op = load_operator_table_file(table_path);
    if (op.periodic) throw InvalidArgument("element operator table must be bounded");
    if (op.interior_order != order)
      throw InvalidArgument("operator table order does not match the requested order");
    if (op.size() != nodes)
      throw InvalidArgument("operator table node count does not match the requested ladder");
    return op;
  }
  switch (order) {
    case 1:
      return make_order1_bounded(nodes, 0.0, 1.0);
    case 2:
      return make_order2_bounded(nodes, 0.0, 1.0);
    default:
      throw InvalidArgument(
          "bounded operators of interior order >= 3 are only available from coefficient "
          "tables");
  }
}

namespace {

Semidiscretization convergence_semi(const ConvergenceConfig& cfg, int k, int n) {
  Semidiscretization semi;
  semi.equation = cfg.equation;
  semi.splitting = cfg.splitting;
  semi.lf_lambda = cfg.lf_lambda;
  const double x0 = cfg.equation == Equation::advection ? -1.0 : 0.0;
  const double x1 = cfg.equation == Equation::advection ? 1.0 : 2.0;
  if (cfg.order >= 3 && cfg.table_path.empty()) {
    if (k != 1)
      throw InvalidArgument("multi-element ladders for orders >= 3 need an operator table");
    semi.layout = make_periodic_block_1d(derive_periodic_upwind(cfg.order, n, x0, x1));
  } else {
    semi.layout =
        make_multielement_1d(bounded_element_operator(cfg.order, n, cfg.table_path), k, x0, x1);
  }
  if (cfg.equation == Equation::euler1d) semi.source = SourceTerm::euler_manufactured;
  return semi;
}

}  // namespace

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& cfg) {
  if (cfg.equation != Equation::advection && cfg.equation != Equation::euler1d)
    throw InvalidArgument("run_convergence: case must be advection or euler1d");
  const auto ladder =
      cfg.ladder.empty() ? default_ladder(cfg.equation, cfg.order, cfg.mode) : cfg.ladder;
  if (ladder.empty()) throw InvalidArgument("run_convergence: empty ladder");

  const double t_end = cfg.equation == Equation::advection ? 5.0 : 2.0;
  std::vector<ConvergenceRow> rows;
  std::vector<double> errors, hs;

  for (const auto& [k, n] : ladder) {
    Semidiscretization semi = convergence_semi(cfg, k, n);
    std::vector<double> u0;
    if (cfg.equation == Equation::advection) {
      semi.project([](double x, double, double* v) { v[0] = ic_advection_sine(x); }, u0);
    } else {
      semi.project(
          [](double x, double, double* v) {
            const auto s = ic_euler_manufactured(0.0, x);
            v[0] = s[0];
            v[1] = s[1];
            v[2] = s[2];
          },
          u0);
    }

    IntegratorConfig icfg;
    icfg.scheme = TimeScheme::ssp33_adaptive;
    icfg.abstol = cfg.abstol;
    icfg.reltol = cfg.reltol;
    icfg.t_end = t_end;

    ConvergenceRow row;
    row.case_name = cfg.equation == Equation::advection ? "advection" : "euler";
    row.splitting = splitting_name(cfg.splitting);
    row.order = cfg.order;
    row.elements = k;
    row.nodes = n;
    row.dofs = static_cast<long>(k) * n;

    auto res = integrate(semi, std::move(u0), icfg);
    if (res.crash) {
      row.crashed = true;
      row.l2_error = std::numeric_limits<double>::quiet_NaN();
    } else {
      const ExactFn exact = cfg.equation == Equation::advection
                                ? ExactFn([](double t, double x, double, double* v) {
                                    v[0] = exact_advection_sine(t, x);
                                  })
                                : ExactFn([](double t, double x, double, double* v) {
                                    const auto s = manufactured_state_euler(t, x);
                                    v[0] = s[0];
                                    v[1] = s[1];
                                    v[2] = s[2];
                                  });
      // the tables track the first conserved variable (the scalar itself,
      // or the density for Euler)
      row.l2_error = l2_error_per_var(semi, res.state, res.t_final, exact)[0];
    }
    errors.push_back(row.l2_error);
    hs.push_back(1.0 / static_cast<double>(row.dofs));
    rows.push_back(row);
  }

  const auto orders = eoc(errors, hs);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].eoc = orders[i];
  return rows;
}

// -- robustness ----------------------------------------------------------------

Semidiscretization make_euler2d_setup(int order, int elements_per_dir, int nodes_per_dir,
                                      bool single_block, double x0, double x1,
                                      SplittingId splitting, const std::string& table_path) {
  Semidiscretization semi;
  semi.equation = Equation::euler2d;
  semi.splitting = splitting;
  if (single_block) {
    if (elements_per_dir != 1)
      throw InvalidArgument("single-block layouts have one element per direction");
    const OperatorPair op = derive_periodic_upwind(order, nodes_per_dir, x0, x1);
    semi.layout = make_periodic_block_2d(op, op);
  } else {
    const OperatorPair elem = bounded_element_operator(order, nodes_per_dir, table_path);
    semi.layout =
        make_multielement_2d(elem, elements_per_dir, elements_per_dir, x0, x1, x0, x1);
  }
  return semi;
}

CrashRecord run_khi(const KhiConfig& cfg) {
  Semidiscretization semi =
      make_euler2d_setup(cfg.order, cfg.elements_per_dir, cfg.nodes_per_dir, cfg.single_block,
                         -1.0, 1.0, cfg.splitting, cfg.table_path);
  std::vector<double> u0;
  semi.project(
      [&](double x, double y, double* v) {
        const auto s = ic_khi(x, y, semi.gas);
        for (int c = 0; c < 4; ++c) v[c] = s[c];
      },
      u0);

  IntegratorConfig icfg;
  icfg.scheme = TimeScheme::ssp33_adaptive;
  icfg.abstol = cfg.abstol;
  icfg.reltol = cfg.reltol;
  icfg.t_end = cfg.t_end;

  CrashRecord rec;
  rec.splitting = splitting_name(cfg.splitting);
  rec.order = cfg.order;
  rec.elements = cfg.elements_per_dir;
  rec.nodes = cfg.nodes_per_dir;

  try {
    auto res = integrate(semi, std::move(u0), icfg);
    rec.accepted_steps = res.stats.accepted;
    rec.rejected_steps = res.stats.rejected;
    if (res.crash) {
      rec.crashed = true;
      rec.final_time = res.crash->t;
      rec.loc_x = res.crash->x;
      rec.loc_y = res.crash->y;
      rec.reason = res.crash->reason;
    } else {
      rec.final_time = cfg.t_end;
    }
  } catch (const IntegrationAbort& e) {
    rec.crashed = true;
    rec.final_time = e.time();
    rec.reason = "dt_underflow";
  }

  if (rec.crashed && !cfg.single_block) {
    const double len = 2.0 / cfg.elements_per_dir;
    auto dist = [&](double s) {
      const double r = std::abs(std::remainder(s + 1.0, len));
      return std::min(r, len - r);
    };
    rec.interface_distance = std::min(dist(rec.loc_x), dist(rec.loc_y));
  }
  return rec;
}

VortexResult run_vortex(const VortexConfig& cfg) {
  Semidiscretization semi =
      make_euler2d_setup(cfg.order, cfg.elements_per_dir, cfg.nodes_per_dir, cfg.single_block,
                         -5.0, 5.0, SplittingId::steger_warming, "");
  std::vector<double> u0;
  semi.project(
      [&](double x, double y, double* v) {
        const auto s = ic_isentropic_vortex(x, y, semi.gas);
        for (int c = 0; c < 4; ++c) v[c] = s[c];
      },
      u0);

  IntegratorConfig icfg;
  icfg.scheme = TimeScheme::ssp33_adaptive;
  icfg.abstol = cfg.abstol;
  icfg.reltol = cfg.reltol;
  icfg.t_end = cfg.t_end;
  icfg.callback_every = cfg.callback_every;

  VortexResult out;
  const ExactFn exact = [&semi](double t, double x, double y, double* v) {
    const auto s = exact_isentropic_vortex(t, x, y, semi.gas);
    for (int c = 0; c < 4; ++c) v[c] = s[c];
  };
  const SampleFn sample = [&](double t, const std::vector<double>& u) {
    out.series.push_back({t, l2_error_per_var(semi, u, t, exact)[0]});
  };

  auto res = integrate(semi, std::move(u0), icfg, sample);
  out.final_time = res.crash ? res.crash->t : res.t_final;
  out.crash = res.crash;
  return out;
}

}  // namespace upsbp
