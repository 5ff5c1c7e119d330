#include "bathreuse/spinsys.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bathreuse;

namespace {

const Complex I(0.0, 1.0);

Matrix2c expm_h(const ModelConfig& cfg, double coeff) {
  // exp(i coeff H)
  return oracle::expm(Matrix2c(I * coeff * oracle::hamiltonian(cfg.epsilon, cfg.delta)));
}

}  // namespace

TEST_SUITE("spinsys") {

TEST_CASE("closed-form evolution matches the series exponential") {
  for (auto [eps, delta] : {std::pair{1.0, 1.0}, std::pair{0.3, -2.0}, std::pair{0.0, 0.0}, std::pair{2.0, 0.0}}) {
    ModelConfig cfg;
    cfg.epsilon = eps;
    cfg.delta = delta;
    for (double tau : {0.0, 0.05, -0.7, 2.3}) {
      CHECK(oracle::max_entry(evolution(cfg, tau) - expm_h(cfg, -tau)) < 1e-13);
    }
  }
}

TEST_CASE("bare propagator branches") {
  const ModelConfig cfg;
  CHECK(oracle::max_entry(bare_propagator(cfg, -0.5, -0.5) - Matrix2c::Identity()) < 1e-15);
  const Matrix2c cross = expm_h(cfg, 0.4) * pauli::sigma_z() * expm_h(cfg, -0.3);
  CHECK(oracle::max_entry(bare_propagator(cfg, -0.3, 0.4) - cross) < 1e-13);
  CHECK(oracle::max_entry(bare_propagator(cfg, -0.9, -0.2) - expm_h(cfg, -0.7)) < 1e-13);
  CHECK(oracle::max_entry(bare_propagator(cfg, 0.2, 0.9) - expm_h(cfg, 0.7)) < 1e-13);
  CHECK_THROWS_AS(bare_propagator(cfg, 0.4, 0.1), std::invalid_argument);
}

TEST_CASE("reflection gives the adjoint") {
  const ModelConfig cfg;
  const Matrix2c a = bare_propagator(cfg, -0.1, 0.3);
  const Matrix2c b = bare_propagator(cfg, -0.3, 0.1);
  CHECK(oracle::max_entry(b - a.adjoint()) < 1e-14);
  CHECK(oracle::max_entry(bare_propagator(cfg, 0.1, 0.3) - bare_propagator(cfg, -0.3, -0.1).adjoint()) < 1e-14);
}

TEST_CASE("unitarity and group property inside a branch") {
  const ModelConfig cfg;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2.0, -0.01);
  for (int q = 0; q < 50; ++q) {
    double x[3] = {u(gen), u(gen), u(gen)};
    std::sort(x, x + 3);
    const Matrix2c g = bare_propagator(cfg, x[0], x[2]);
    CHECK(oracle::max_entry(g * g.adjoint() - Matrix2c::Identity()) < 1e-12);
    const Matrix2c composed = bare_propagator(cfg, x[1], x[2]) * bare_propagator(cfg, x[0], x[1]);
    CHECK(oracle::max_entry(composed - g) < 1e-12);
  }
}

TEST_CASE("u0 functional is an alternating product") {
  const ModelConfig cfg;
  const std::vector<double> none;
  CHECK(oracle::max_entry(u0_functional(cfg, -0.5, none, 0.5) - bare_propagator(cfg, -0.5, 0.5)) < 1e-15);

  const std::vector<double> one{0.2};
  const Matrix2c w = pauli::sigma_z();
  const Matrix2c expected = expm_h(cfg, 0.3) * w * (expm_h(cfg, 0.2) * w * expm_h(cfg, -0.5));
  CHECK(oracle::max_entry(u0_functional(cfg, -0.5, one, 0.5) - expected) < 1e-13);

  const std::vector<double> three{-0.4, -0.1, 0.3};
  const Matrix2c chain = expm_h(cfg, 0.2) * w * (expm_h(cfg, 0.3) * cfg.observable * expm_h(cfg, -0.1)) * w *
                         expm_h(cfg, -0.3) * w * expm_h(cfg, -0.1);
  CHECK(oracle::max_entry(u0_functional(cfg, -0.5, three, 0.5) - chain) < 1e-13);

  const std::vector<double> unordered{0.3, -0.1};
  CHECK_THROWS_AS(u0_functional(cfg, -0.5, unordered, 0.5), std::invalid_argument);
}

TEST_CASE("grid form agrees with the real form") {
  const ModelConfig cfg;
  const double h = 0.05;
  const std::vector<GridTime> pts{{-7, 0.3}, {-1, 0.9}, {2, 0.125}};
  std::vector<double> vals;
  for (auto p : pts) vals.push_back(p.value(h));
  const Matrix2c a = u0_functional(cfg, GridTime::node(-10), pts, GridTime::node(10), h);
  const Matrix2c b = u0_functional(cfg, -0.5, vals, 0.5);
  CHECK(oracle::max_entry(a - b) < 1e-13);
}

TEST_CASE("model validation") {
  ModelConfig cfg;
  cfg.rho = Matrix2c::Identity();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ModelConfig{};
  cfg.observable(0, 1) = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_NOTHROW(ModelConfig{}.validate());
  CHECK(expectation(ModelConfig{}, pauli::sigma_z()) == Complex(1.0, 0.0));
}

}
