#include "bathreuse/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bathreuse {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix2c& m) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) {
    json row = json::array();
    for (int c = 0; c < 2; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Matrix2c matrix_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string("config: ") + name + " must be a 2x2 array");
  Matrix2c m;
  for (int r = 0; r < 2; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 2)
      throw std::invalid_argument(std::string("config: ") + name + " must be a 2x2 array");
    for (int c = 0; c < 2; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      if (entry.is_number()) {
        m(r, c) = Complex(entry.get<double>(), 0.0);
      } else if (entry.is_array() && entry.size() == 2) {
        m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
      } else {
        throw std::invalid_argument(std::string("config: bad entry in ") + name);
      }
    }
  }
  return m;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string to_string(Solver s) {
  switch (s) {
    case Solver::dyson: return "dyson";
    case Solver::inchworm: return "inchworm";
    case Solver::bare_dqmc: return "bare-dqmc";
  }
  return "?";
}

std::string to_string(SolveMode m) {
  switch (m) {
    case SolveMode::reuse: return "reuse";
    case SolveMode::no_reuse: return "no-reuse";
    case SolveMode::deterministic: return "deterministic";
  }
  return "?";
}

std::string to_string(Stepper s) { return s == Stepper::heun ? "heun" : "euler"; }

Solver parse_solver(std::string_view s) {
  if (s == "dyson") return Solver::dyson;
  if (s == "inchworm") return Solver::inchworm;
  if (s == "bare-dqmc") return Solver::bare_dqmc;
  throw std::invalid_argument("unknown solver '" + std::string(s) + "'");
}

SolveMode parse_mode(std::string_view s) {
  if (s == "reuse") return SolveMode::reuse;
  if (s == "no-reuse") return SolveMode::no_reuse;
  if (s == "deterministic") return SolveMode::deterministic;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

Stepper parse_stepper(std::string_view s) {
  if (s == "heun") return Stepper::heun;
  if (s == "euler") return Stepper::euler;
  throw std::invalid_argument("unknown stepper '" + std::string(s) + "'");
}

void RunConfig::validate() const {
  model.validate();
  bath.validate();
  sampling.validate();
  if (mode == SolveMode::deterministic) {
    if (solver == Solver::bare_dqmc)
      throw std::invalid_argument("config: bare-dqmc has no deterministic mode");
    if (sampling.m_bar != 1)
      throw std::invalid_argument("config: deterministic mode requires m_bar = 1");
  }
  if (low_memory && (solver != Solver::dyson || mode != SolveMode::reuse))
    throw std::invalid_argument("config: low_memory applies to the dyson solver in reuse mode");
  if (quadrature_points != 4 && quadrature_points != 8 && quadrature_points != 16)
    throw std::invalid_argument("config: quadrature_points must be 4, 8 or 16");
  if (repetitions < 2) throw std::invalid_argument("config: repetitions must be >= 2");
  for (auto m0 : m0_ladder)
    if (m0 < 1) throw std::invalid_argument("config: m0_ladder entries must be >= 1");
  if (reference_m0 < 1) throw std::invalid_argument("config: reference_m0 must be >= 1");
  for (double h : h_ladder)
    if (!(h > 0.0)) throw std::invalid_argument("config: h_ladder entries must be > 0");
  if (!(t_eval >= 0.0)) throw std::invalid_argument("config: t_eval must be >= 0");
  if (out_dir.empty()) throw std::invalid_argument("config: out_dir must not be empty");
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
  return a.epsilon == b.epsilon && a.delta == b.delta && a.observable == b.observable &&
         a.coupling == b.coupling && a.rho == b.rho;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.model == b.model && a.bath == b.bath && a.sampling == b.sampling &&
         a.solver == b.solver && a.mode == b.mode && a.stepper == b.stepper &&
         a.low_memory == b.low_memory && a.quadrature_points == b.quadrature_points &&
         a.repetitions == b.repetitions && a.m0_ladder == b.m0_ladder &&
         a.reference_m0 == b.reference_m0 && a.h_ladder == b.h_ladder && a.t_eval == b.t_eval &&
         a.out_dir == b.out_dir;
}

std::string emit_config(const RunConfig& cfg) {
  json j;
  j["model"] = {{"epsilon", cfg.model.epsilon},
                {"delta", cfg.model.delta},
                {"observable", matrix_to_json(cfg.model.observable)},
                {"coupling", matrix_to_json(cfg.model.coupling)},
                {"rho", matrix_to_json(cfg.model.rho)}};
  j["bath"] = {{"xi", cfg.bath.xi},
               {"omega_c", cfg.bath.omega_c},
               {"omega_max", cfg.bath.omega_max},
               {"beta", cfg.bath.beta},
               {"num_modes", cfg.bath.num_modes}};
  j["sampling"] = {{"b_emp", cfg.sampling.b_emp},   {"m_bar", cfg.sampling.m_bar},
                   {"m0_hat", cfg.sampling.m0_hat}, {"h", cfg.sampling.h},
                   {"num_steps", cfg.sampling.num_steps}, {"seed", cfg.sampling.seed}};
  j["solver"] = to_string(cfg.solver);
  j["mode"] = to_string(cfg.mode);
  j["stepper"] = to_string(cfg.stepper);
  j["low_memory"] = cfg.low_memory;
  j["quadrature_points"] = cfg.quadrature_points;
  j["repetitions"] = cfg.repetitions;
  j["m0_ladder"] = cfg.m0_ladder;
  j["reference_m0"] = cfg.reference_m0;
  j["h_ladder"] = cfg.h_ladder;
  j["t_eval"] = cfg.t_eval;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2) + "\n";
}

RunConfig parse_config(std::string_view text, const RunConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  RunConfig cfg = base;
  try {
    if (j.contains("model")) {
      const json& m = j.at("model");
      read(m, "epsilon", cfg.model.epsilon);
      read(m, "delta", cfg.model.delta);
      if (m.contains("observable")) cfg.model.observable = matrix_from_json(m.at("observable"), "observable");
      if (m.contains("coupling")) cfg.model.coupling = matrix_from_json(m.at("coupling"), "coupling");
      if (m.contains("rho")) cfg.model.rho = matrix_from_json(m.at("rho"), "rho");
    }
    if (j.contains("bath")) {
      const json& b = j.at("bath");
      read(b, "xi", cfg.bath.xi);
      read(b, "omega_c", cfg.bath.omega_c);
      cfg.bath.omega_max = b.contains("omega_max") ? b.at("omega_max").get<double>()
                                                   : 4.0 * cfg.bath.omega_c;
      read(b, "beta", cfg.bath.beta);
      read(b, "num_modes", cfg.bath.num_modes);
    }
    if (j.contains("sampling")) {
      const json& s = j.at("sampling");
      read(s, "b_emp", cfg.sampling.b_emp);
      read(s, "m_bar", cfg.sampling.m_bar);
      read(s, "m0_hat", cfg.sampling.m0_hat);
      read(s, "h", cfg.sampling.h);
      read(s, "num_steps", cfg.sampling.num_steps);
      read(s, "seed", cfg.sampling.seed);
    }
    if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver").get<std::string>());
    if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("stepper")) cfg.stepper = parse_stepper(j.at("stepper").get<std::string>());
    read(j, "low_memory", cfg.low_memory);
    read(j, "quadrature_points", cfg.quadrature_points);
    read(j, "repetitions", cfg.repetitions);
    read(j, "m0_ladder", cfg.m0_ladder);
    read(j, "reference_m0", cfg.reference_m0);
    read(j, "h_ladder", cfg.h_ladder);
    read(j, "t_eval", cfg.t_eval);
    read(j, "out_dir", cfg.out_dir);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), base);
}

RunConfig preset(std::string_view name) {
  RunConfig cfg;
  if (name == "fig6-left" || name == "fig6-right") {
    const bool right = name == "fig6-right";
    cfg.bath = BathSpec::ohmic(right ? 0.4 : 0.2, 2.5, 5.0, 400);
    cfg.sampling.b_emp = right ? 0.2 : 0.1;
    cfg.sampling.m_bar = 11;
    cfg.sampling.h = 0.05;
    cfg.sampling.num_steps = 40;
    return cfg;
  }
  if (name == "convergence") {
    cfg.bath = BathSpec::ohmic(0.1, 1.0, 0.2, 400);
    cfg.sampling.b_emp = 0.3;
    cfg.sampling.m_bar = 11;
    cfg.sampling.h = 0.1;
    cfg.sampling.num_steps = 10;
    cfg.t_eval = 1.0;
    return cfg;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"fig6-left", "fig6-right", "convergence"}; }

}  // namespace bathreuse
