#include "bathreuse/experiments.hpp"

#include "bathreuse/inchworm.hpp"
#include "bathreuse/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bathreuse {

namespace {

Trajectory from_propagators(const RunConfig& cfg, std::vector<Matrix2c> g, CostReport cost) {
  Trajectory tr;
  tr.h = cfg.sampling.h;
  tr.g = std::move(g);
  tr.cost = std::move(cost);
  tr.observable.reserve(tr.g.size());
  for (const auto& m : tr.g) tr.observable.push_back(expectation(cfg.model, m));
  return tr;
}

int steps_for(double t_max, double h) {
  const double n = t_max / h;
  const double rounded = std::nearbyint(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
    throw std::invalid_argument("h = " + format_number(h) + " does not divide t = " + format_number(t_max));
  return static_cast<int>(rounded);
}

bool bitwise_equal(const Matrix2c& a, const Matrix2c& b) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (a(r, c) != b(r, c)) return false;
  return true;
}

}  // namespace

Trajectory observable_trajectory(const RunConfig& cfg) {
  cfg.validate();
  const BathCorrelation bath = build_bath(cfg.bath);
  switch (cfg.solver) {
    case Solver::dyson: {
      if (cfg.low_memory) {
        auto res = run_dyson_lowmem(cfg.model, bath, cfg.sampling, cfg.stepper);
        return from_propagators(cfg, std::move(res.g), std::move(res.cost));
      }
      auto res = run_dyson(cfg.model, bath, cfg.sampling, {cfg.mode, cfg.stepper, cfg.quadrature_points});
      return from_propagators(cfg, std::move(res.g), std::move(res.cost));
    }
    case Solver::inchworm: {
      auto res = run_inchworm(cfg.model, bath, cfg.sampling, {cfg.mode, cfg.stepper, cfg.quadrature_points});
      return from_propagators(cfg, std::move(res.g), std::move(res.cost));
    }
    case Solver::bare_dqmc: {
      std::vector<Matrix2c> g{cfg.model.observable};
      for (int n = 1; n <= cfg.sampling.num_steps; ++n)
        g.push_back(bare_dqmc(cfg.model, bath, cfg.sampling, n * cfg.sampling.h, cfg.sampling.m0_hat));
      return from_propagators(cfg, std::move(g), CostReport(cfg.sampling.m_bar, cfg.sampling.num_steps));
    }
  }
  throw std::logic_error("unreachable");
}

AccuracyResult accuracy_study(const RunConfig& cfg) {
  if (cfg.h_ladder.size() < 2) throw std::invalid_argument("accuracy_study: needs at least two h values");
  const double t_max = cfg.sampling.t_max();
  AccuracyResult res;
  for (double h : cfg.h_ladder) {
    RunConfig run = cfg;
    run.sampling.h = h;
    run.sampling.num_steps = steps_for(t_max, h);
    res.h.push_back(h);
    res.runs.push_back(observable_trajectory(run));
  }
  for (std::size_t q = 0; q + 1 < res.runs.size(); ++q) {
    const Trajectory& a = res.runs[q];
    const Trajectory& b = res.runs[q + 1];
    double sup = 0.0;
    // Compare on the points of the coarser grid that lie on the finer one.
    const Trajectory& coarse = a.h >= b.h ? a : b;
    const Trajectory& fine = a.h >= b.h ? b : a;
    for (std::size_t n = 0; n < coarse.g.size(); ++n) {
      const double ratio = static_cast<double>(n) * coarse.h / fine.h;
      const double idx = std::nearbyint(ratio);
      if (std::abs(ratio - idx) > 1e-9) continue;
      sup = std::max(sup, std::abs(coarse.observable[n] - fine.observable[static_cast<std::size_t>(idx)]));
    }
    res.sup_differences.push_back(sup);
    res.final_differences.push_back((a.g.back() - b.g.back()).norm());
  }
  for (std::size_t q = 0; q + 1 < res.final_differences.size(); ++q)
    res.observed_orders.push_back(std::log2(res.final_differences[q] / res.final_differences[q + 1]));
  return res;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t q = 0; q < x.size(); ++q) {
    if (!(x[q] > 0.0) || !(y[q] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double lx = std::log(x[q]);
    const double ly = std::log(y[q]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence_study(const RunConfig& cfg) {
  if (cfg.m0_ladder.size() < 3) throw std::invalid_argument("convergence_study: ladder needs >= 3 sizes");
  if (cfg.mode == SolveMode::deterministic)
    throw std::invalid_argument("convergence_study: needs a Monte Carlo mode");

  RunConfig ref_cfg = cfg;
  ref_cfg.sampling.m0_hat = cfg.reference_m0;
  const Trajectory reference = observable_trajectory(ref_cfg);

  ConvergenceResult res;
  const std::size_t steps = reference.g.size();
  for (std::size_t n = 0; n < steps; ++n) res.times.push_back(reference.time(n));
  res.eval_index = static_cast<std::size_t>(
      std::clamp(std::nearbyint(cfg.t_eval / cfg.sampling.h), 0.0, static_cast<double>(steps - 1)));

  const auto reps = static_cast<std::uint64_t>(cfg.repetitions);
  for (std::size_t q = 0; q < cfg.m0_ladder.size(); ++q) {
    RunConfig run = cfg;
    run.sampling.m0_hat = cfg.m0_ladder[q];
    std::vector<double> sum_sq(steps, 0.0);
    for (std::uint64_t k = 0; k < reps; ++k) {
      run.sampling.seed = mix_seed(cfg.sampling.seed, q * reps + k + 1);
      const Trajectory tr = observable_trajectory(run);
      for (std::size_t n = 0; n < steps; ++n) sum_sq[n] += (tr.g[n] - reference.g[n]).squaredNorm();
    }
    std::vector<double> sigma(steps);
    for (std::size_t n = 0; n < steps; ++n) sigma[n] = std::sqrt(sum_sq[n] / static_cast<double>(reps));
    res.m0.push_back(cfg.m0_ladder[q]);
    res.sigma.push_back(std::move(sigma));
  }

  std::vector<double> x, y;
  for (std::size_t q = 0; q < res.m0.size(); ++q) {
    x.push_back(static_cast<double>(res.m0[q]));
    y.push_back(res.sigma[q][res.eval_index]);
  }
  res.slope = res.eval_index > 0 ? loglog_slope(x, y) : 0.0;
  return res;
}

std::vector<RatioRow> ratio_rows(const RunConfig& cfg, const CostReport& cost, const CostReport& timing) {
  const int m_bar = cfg.sampling.m_bar;
  const bool dyson = cfg.solver == Solver::dyson;
  const SolverKind kind = dyson ? SolverKind::dyson : SolverKind::inchworm;
  std::vector<double> model_weights = dyson ? reference_lb_seconds() : reference_lbc_seconds();
  if (m_bar > 11) model_weights = power_weights(dyson ? 2.0 : kInchwormComplexityBase, m_bar);
  model_weights.resize(static_cast<std::size_t>((m_bar + 1) / 2));

  std::vector<double> mean_time;
  for (int m = 1; m <= m_bar; m += 2) mean_time.push_back(timing.at_order(m).mean_seconds());

  std::vector<RatioRow> rows;
  for (int n = 1; n <= cost.num_steps(); ++n) {
    RatioRow row;
    row.n = n;
    for (int m = 1; m <= m_bar; m += 2) row.r_by_order.push_back(dyson ? r_dyson(m, n) : r_inch(m, n));
    row.r_time_model = r_time_model(kind, n, m_bar, cfg.sampling.b_emp, cfg.sampling.h, model_weights);
    double fresh = 0.0, total = 0.0;
    for (int m = 1; m <= m_bar; m += 2) {
      const double w = mean_time[static_cast<std::size_t>((m - 1) / 2)];
      fresh += w * static_cast<double>(cost.cumulative_fresh(n, m));
      total += w * static_cast<double>(cost.cumulative_total(n, m));
    }
    row.r_time_real = total > 0.0 ? 1.0 - fresh / total : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

EfficiencyResult efficiency_report(const RunConfig& cfg) {
  if (cfg.solver == Solver::bare_dqmc) throw std::invalid_argument("efficiency_report: needs dyson or inchworm");
  RunConfig reuse = cfg;
  reuse.mode = SolveMode::reuse;
  reuse.low_memory = false;
  RunConfig fresh = reuse;
  fresh.mode = SolveMode::no_reuse;

  EfficiencyResult res;
  res.reuse = observable_trajectory(reuse);
  res.no_reuse = observable_trajectory(fresh);
  if (res.reuse.g.size() != res.no_reuse.g.size())
    throw InvariantError("efficiency: reuse and no-reuse trajectories differ in length");
  for (std::size_t n = 0; n < res.reuse.g.size(); ++n)
    if (!bitwise_equal(res.reuse.g[n], res.no_reuse.g[n]))
      throw InvariantError("efficiency: reuse and no-reuse differ at step " + std::to_string(n));
  res.ratios = ratio_rows(cfg, res.reuse.cost, res.no_reuse.cost);
  return res;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream out;
  out << "t,re_sigma_z,im_sigma_z\n";
  for (std::size_t n = 0; n < tr.observable.size(); ++n)
    out << format_number(tr.time(n)) << ',' << format_number(tr.observable[n].real()) << ','
        << format_number(tr.observable[n].imag()) << '\n';
  return out.str();
}

std::string accuracy_csv(const AccuracyResult& res) {
  std::ostringstream out;
  out << "h,t,re_sigma_z,im_sigma_z\n";
  for (const Trajectory& tr : res.runs)
    for (std::size_t n = 0; n < tr.observable.size(); ++n)
      out << format_number(tr.h) << ',' << format_number(tr.time(n)) << ','
          << format_number(tr.observable[n].real()) << ',' << format_number(tr.observable[n].imag()) << '\n';
  return out.str();
}

std::string convergence_csv(const ConvergenceResult& res) {
  std::ostringstream out;
  out << 't';
  for (auto m0 : res.m0) out << ",sigma_" << m0;
  out << '\n';
  for (std::size_t n = 0; n < res.times.size(); ++n) {
    out << format_number(res.times[n]);
    for (const auto& col : res.sigma) out << ',' << format_number(col[n]);
    out << '\n';
  }
  return out.str();
}

std::string ratio_csv(const std::vector<RatioRow>& rows, int m_bar) {
  std::ostringstream out;
  out << 'n';
  for (int m = 1; m <= m_bar; m += 2) out << ",R_" << m;
  out << ",R_T_model,R_T_real\n";
  for (const RatioRow& row : rows) {
    out << row.n;
    for (double r : row.r_by_order) out << ',' << format_number(r);
    out << ',' << format_number(row.r_time_model) << ',' << format_number(row.r_time_real) << '\n';
  }
  return out.str();
}

std::string cost_report_json(const CostReport& cost) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (int m = 1; m <= cost.m_bar(); m += 2) {
    const OrderCost& c = cost.at_order(m);
    j[std::to_string(m)] = {{"fresh_count", c.fresh_count},
                            {"total_count", c.total_count},
                            {"wall_seconds", c.wall_seconds}};
  }
  return j.dump(2) + "\n";
}

std::string write_output(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path.string();
}

}  // namespace bathreuse
