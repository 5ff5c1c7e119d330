#include "bathreuse/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using namespace bathreuse;

namespace {

struct Flags {
  std::string preset = "fig6-left";
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> solver;
  std::optional<std::string> mode;
  std::optional<std::string> stepper;
  std::optional<std::string> out_dir;
  std::optional<std::int64_t> m0;
  std::optional<int> steps;
  std::optional<double> h;
  std::optional<int> m_bar;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg = preset(f.preset);
  if (!f.config_path.empty()) cfg = load_config(f.config_path, cfg);
  if (f.seed) cfg.sampling.seed = *f.seed;
  if (f.solver) cfg.solver = parse_solver(*f.solver);
  if (f.mode) {
    if (*f.mode == "lowmem") {
      cfg.mode = SolveMode::reuse;
      cfg.low_memory = true;
    } else {
      cfg.mode = parse_mode(*f.mode);
    }
  }
  if (f.stepper) cfg.stepper = parse_stepper(*f.stepper);
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.m0) cfg.sampling.m0_hat = *f.m0;
  if (f.steps) cfg.sampling.num_steps = *f.steps;
  if (f.h) cfg.sampling.h = *f.h;
  if (f.m_bar) cfg.sampling.m_bar = *f.m_bar;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--preset", f.preset, "Base parameter set")
      ->check(CLI::IsMember(preset_names()));
  app->add_option("--config", f.config_path, "JSON config applied on top of the preset");
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--solver", f.solver, "dyson | inchworm | bare-dqmc");
  app->add_option("--mode", f.mode, "reuse | no-reuse | deterministic | lowmem");
  app->add_option("--stepper", f.stepper, "heun | euler");
  app->add_option("--out-dir", f.out_dir, "Directory for CSV and JSON outputs");
  app->add_option("--m0", f.m0, "Initial sample count M0");
  app->add_option("--steps", f.steps, "Number of time steps N");
  app->add_option("--step", f.h, "Time step h");
  app->add_option("--m-bar", f.m_bar, "Series truncation order (odd)");
}

void note(const std::string& path) { std::cout << "wrote " << path << '\n'; }

int simulate(const RunConfig& cfg) {
  const Trajectory tr = observable_trajectory(cfg);
  note(write_output(cfg.out_dir, "config.json", emit_config(cfg)));
  note(write_output(cfg.out_dir, "trajectory.csv", trajectory_csv(tr)));
  if (cfg.solver != Solver::bare_dqmc) note(write_output(cfg.out_dir, "cost.json", cost_report_json(tr.cost)));

  const Complex start = expectation(cfg.model, cfg.model.observable);
  if (tr.observable.front() != start) throw InvariantError("simulate: row 0 differs from tr(rho O)");
  if (cfg.solver == Solver::dyson) {
    double worst = 0.0;
    for (const auto& g : tr.g) worst = std::max(worst, hermiticity_defect(g));
    if (worst > 1e-12) throw InvariantError("simulate: Hermiticity defect " + format_number(worst));
  }
  return 0;
}

int accuracy(const RunConfig& cfg) {
  const AccuracyResult res = accuracy_study(cfg);
  note(write_output(cfg.out_dir, "config.json", emit_config(cfg)));
  note(write_output(cfg.out_dir, "accuracy.csv", accuracy_csv(res)));
  for (std::size_t q = 0; q < res.sup_differences.size(); ++q)
    std::printf("h=%g vs %g: sup|d<sigma_z>| = %.3e, |dG(T)|_F = %.3e\n", res.h[q], res.h[q + 1],
                res.sup_differences[q], res.final_differences[q]);
  for (double p : res.observed_orders) std::printf("observed order %.3f\n", p);
  return 0;
}

int convergence(const RunConfig& cfg) {
  const ConvergenceResult res = convergence_study(cfg);
  note(write_output(cfg.out_dir, "config.json", emit_config(cfg)));
  note(write_output(cfg.out_dir, "convergence.csv", convergence_csv(res)));
  std::printf("slope at t=%g: %.4f\n", res.times[res.eval_index], res.slope);
  return 0;
}

int efficiency(const RunConfig& cfg) {
  const EfficiencyResult res = efficiency_report(cfg);
  note(write_output(cfg.out_dir, "config.json", emit_config(cfg)));
  note(write_output(cfg.out_dir, "trajectory.csv", trajectory_csv(res.reuse)));
  note(write_output(cfg.out_dir, "cost_reuse.json", cost_report_json(res.reuse.cost)));
  note(write_output(cfg.out_dir, "cost_no_reuse.json", cost_report_json(res.no_reuse.cost)));
  note(write_output(cfg.out_dir, "ratios.csv", ratio_csv(res.ratios, cfg.sampling.m_bar)));
  std::cout << "reuse and no-reuse trajectories agree bit for bit\n";
  return 0;
}

int ratios(const RunConfig& cfg) {
  if (cfg.solver == Solver::bare_dqmc) throw std::invalid_argument("ratios: needs dyson or inchworm");
  RunConfig run = cfg;
  run.mode = SolveMode::reuse;
  run.low_memory = false;
  const Trajectory tr = observable_trajectory(run);
  note(write_output(cfg.out_dir, "config.json", emit_config(run)));
  note(write_output(cfg.out_dir, "ratios.csv", ratio_csv(ratio_rows(run, tr.cost, tr.cost), cfg.sampling.m_bar)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-boson dynamics by Dyson series and inchworm Monte Carlo with bath reuse"};
  app.require_subcommand(1);
  Flags flags;
  bool print_config = false;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"simulate", "Observable trajectory and cost counters", simulate},
      {"accuracy", "Trajectories over the h ladder", accuracy},
      {"convergence", "Monte Carlo standard deviation over the M0 ladder", convergence},
      {"efficiency", "Reuse vs no-reuse runs, cost reports and ratio curves", efficiency},
      {"ratios", "Ratio curves from an instrumented reuse run", ratios},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, flags);
    sub->add_flag("--print-config", print_config, "Print the resolved config and exit");
    subs.emplace_back(sub, &c);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      const RunConfig cfg = resolve(flags);
      if (print_config) {
        std::cout << emit_config(cfg);
        return 0;
      }
      return cmd->run(cfg);
    }
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
