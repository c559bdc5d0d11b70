#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <tuple>

#include "mrfm/oracle.hpp"
#include "mrfm/propagator.hpp"
#include "mrfm/schedule.hpp"

using namespace mrfm;

namespace {

// exp(-i dt M) by Padé scaling-and-squaring, independent of the closed form.
std::pair<cplx, cplx> dense_block(double d, double eps, double dt, cplx a, cplx b) {
  Eigen::Matrix2cd m;
  m << d, -eps / 2, -eps / 2, -d;
  const Eigen::Matrix2cd u = (cplx(0, -dt) * m).exp();
  Eigen::Vector2cd v(a, b);
  const Eigen::Vector2cd r = u * v;
  return {r(0), r(1)};
}

PhysicalParams toy_physics() {
  PhysicalParams p;
  p.alpha = {-2.0, 0.0};
  return p;
}

DriveSchedule toy_schedule() { return ScheduleRegistry::instance().make("sinusoidal"); }

SpinorField toy_state(const GridPtr& g) {
  const double r = 1.0 / std::numbers::sqrt2;
  return product_state(g, coherent_packet(*g, {-2.0, 0.0}),
                       {cplx{r}, cplx{}, cplx{}, cplx{r}});
}

SpinorField run(const SpinorField& f0, const PhysicalParams& p, const DriveSchedule& s, double dt,
                std::int64_t steps) {
  StepPlan plan(f0.grid_ptr(), dt, p);
  SpinorField f = f0;
  plan.advance(f, s, 0.0, steps);
  return f;
}

}  // namespace

TEST_CASE("spin block matches the dense matrix exponential") {
  for (const auto& [d, eps, dt] : {std::tuple{1.3, 0.7, 0.2}, std::tuple{-250.0, 400.0, 2e-4},
                                   std::tuple{0.0, 5.0, 1.0}, std::tuple{3.0, 0.0, 0.5}}) {
    const cplx a{0.3, -0.4}, b{0.1, 0.8};
    const auto [x, y] = spin_block_step(d, eps, dt, a, b);
    const auto [rx, ry] = dense_block(d, eps, dt, a, b);
    CHECK(std::abs(x - rx) < 1e-13);
    CHECK(std::abs(y - ry) < 1e-13);
  }
}

TEST_CASE("pure detuning is a diagonal phase") {
  const auto [x, y] = spin_block_step(1.0, 0.0, std::numbers::pi, 1.0, 0.0);
  CHECK(std::abs(x - cplx(-1.0, 0.0)) < 1e-15);
  CHECK(y == cplx{});
}

TEST_CASE("quarter rotation flips the spin") {
  const double eps = 3.0, omega = eps / 2;
  const auto [x, y] = spin_block_step(0.0, eps, std::numbers::pi / 2 / omega, 1.0, 0.0);
  CHECK(std::abs(x) < 1e-15);
  CHECK(std::abs(y - cplx(0, 1)) < 1e-15);
}

TEST_CASE("small rotation angles use the series branch accurately") {
  for (const double d : {1e-9, 4e-7, 1.2e-6}) {
    const auto [x, y] = spin_block_step(d, 0.0, 1.0, 1.0, 1.0);
    CHECK(std::abs(x - std::polar(1.0, -d)) < 1e-16);
    CHECK(std::abs(y - std::polar(1.0, d)) < 1e-16);
  }
  const auto [x, y] = spin_block_step(0.0, 0.0, 1.0, {0.6, 0.0}, {0.0, 0.8});
  CHECK(x == cplx(0.6, 0.0));
  CHECK(y == cplx(0.0, 0.8));
}

TEST_CASE("kinetic half phases have unit modulus") {
  StepPlan plan(make_grid(-60, 60, 2048), 2e-4, PhysicalParams{});
  for (const cplx v : plan.kinetic_half_phase()) CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
  for (const cplx v : plan.harmonic_phase()) CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
}

TEST_CASE("norm is preserved per step") {
  const auto g = make_grid(-60, 60, 2048);
  SpinorField f = coherent_bell_state(g, PhysicalParams{});
  StepPlan plan(g, 2e-4, PhysicalParams{});
  const auto s = paper_schedule();
  double prev = field_norm2(f);
  for (int k = 0; k < 200; ++k) {
    plan.step(f, s, k * 2e-4);
    const double now = field_norm2(f);
    CHECK(std::abs(now - prev) < 1e-10);
    prev = now;
  }
  const auto m = pair_masses(f);
  CHECK(std::abs(m.up2 - 0.5) < 1e-12);
  CHECK(std::abs(m.down2 - 0.5) < 1e-12);
}

TEST_CASE("remote-spin-down components stay exactly zero") {
  const auto g = make_grid(-16, 16, 256);
  const auto f0 = product_state(g, coherent_packet(*g, {-2.0, 0.0}),
                                {cplx{0.6}, cplx{}, cplx{0, 0.8}, cplx{}});
  const auto f = run(f0, PhysicalParams{}, paper_schedule(), 1e-3, 3000);
  for (const cplx v : f.component(Spin::Up, Spin::Down)) REQUIRE(v == cplx{});
  for (const cplx v : f.component(Spin::Down, Spin::Down)) REQUIRE(v == cplx{});
}

TEST_CASE("fused advance equals repeated single steps") {
  const auto g = make_grid(-8, 8, 64);
  const auto f0 = toy_state(g);
  const auto s = toy_schedule();
  StepPlan plan(g, 1e-3, toy_physics());
  SpinorField stepped = f0;
  for (int k = 0; k < 100; ++k) step(stepped, plan, s, k * 1e-3);
  const auto fused = run(f0, toy_physics(), s, 1e-3, 100);
  CHECK(l2_distance(stepped, fused) < 1e-13);
}

TEST_CASE("kernel variants produce the same trajectory") {
  const auto g = make_grid(-60, 60, 2048);
  const auto f0 = coherent_bell_state(g, PhysicalParams{});
  const auto s = paper_schedule();
  StepPlan ref(g, 2e-4, PhysicalParams{}, kernels::scalar_table());
  SpinorField a = f0;
  ref.advance(a, s, 0.0, 500);
  for (const auto* t : kernels::available_tables()) {
    CAPTURE(t->name);
    StepPlan plan(g, 2e-4, PhysicalParams{}, *t);
    SpinorField b = f0;
    plan.advance(b, s, 0.0, 500);
    CHECK(l2_distance(a, b) < 1e-11);
  }
}

TEST_CASE("single-step error is third order") {
  const auto g = make_grid(-8, 8, 64);
  const auto f0 = toy_state(g);
  const auto s = toy_schedule();
  auto gap = [&](double dt) {
    const auto one = run(f0, toy_physics(), s, dt, 1);
    const auto two = run(f0, toy_physics(), s, dt / 2, 2);
    return l2_distance(one, two);
  };
  const double ratio = gap(0.02) / gap(0.01);
  CHECK(ratio == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("global error is second order") {
  const auto g = make_grid(-8, 8, 64);
  const auto f0 = toy_state(g);
  const auto s = toy_schedule();
  const auto ref = run(f0, toy_physics(), s, 0.5 / 1600, 1600);
  const double e1 = l2_distance(run(f0, toy_physics(), s, 0.5 / 50, 50), ref);
  const double e2 = l2_distance(run(f0, toy_physics(), s, 0.5 / 100, 100), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("free coherent state follows the classical orbit") {
  const auto g = make_grid(-32, 32, 1024);
  PhysicalParams p;
  p.eta = 0.0;
  const auto s = ScheduleRegistry::instance().make("constant");
  const double dt = 2e-4;
  StepPlan plan(g, dt, p);
  SpinorField f = coherent_bell_state(g, p);
  const auto z = g->positions();
  for (int block = 1; block <= 5; ++block) {
    plan.advance(f, s, (block - 1) * 1000 * dt, 1000);
    const double tau = block * 1000 * dt;
    double mean = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      const auto u = f.component(c);
      for (std::size_t j = 0; j < g->size(); ++j) mean += z[j] * std::norm(u[j]) * g->dz();
    }
    CHECK(std::abs(mean - p.z0() * std::cos(tau)) < 1e-6);
  }
}

TEST_CASE("short toy run agrees with the dense oracle") {
  SimConfig cfg;
  cfg.physical = toy_physics();
  cfg.grid = {-8.0, 8.0, 64};
  cfg.dt = 1e-4;
  cfg.t_final = 0.1;
  cfg.schedule = {"sinusoidal", {}};
  const auto g = cfg.grid.build();
  const auto f0 = toy_state(g);
  const auto s = toy_schedule();
  const auto fast = run(f0, cfg.physical, s, cfg.dt, 1000);
  const auto reference = oracle::oracle_evolve(f0, cfg, s);
  CHECK(l2_distance(fast, reference) < 1e-6);
}
