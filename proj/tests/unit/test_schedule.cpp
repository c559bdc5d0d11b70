#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mrfm/schedule.hpp"

using namespace mrfm;

TEST_CASE("paper schedule ramps then oscillates") {
  const auto s = paper_schedule();
  CHECK(s.epsilon(0.0) == 0.0);
  CHECK(s.phi_dot(0.0) == -600.0);
  CHECK(s.epsilon(10.0) == doctest::Approx(200.0));
  CHECK(s.phi_dot(10.0) == doctest::Approx(-300.0));
  CHECK(s.epsilon(20.0) == doctest::Approx(400.0));
  CHECK(s.phi_dot(20.0) == doctest::Approx(0.0));
  CHECK(s.epsilon(100.0) == 400.0);
  CHECK(s.phi_dot(20.0 + std::numbers::pi / 2) == doctest::Approx(1000.0));
  CHECK(s.phi_dot(216.0) == doctest::Approx(1000.0 * std::sin(196.0)));
}

TEST_CASE("paper schedule is continuous at the switch") {
  const auto s = paper_schedule();
  CHECK(std::abs(s.epsilon(20.0 - 1e-9) - s.epsilon(20.0 + 1e-9)) < 1e-6);
  CHECK(std::abs(s.phi_dot(20.0 - 1e-9) - s.phi_dot(20.0 + 1e-9)) < 1e-5);
}

TEST_CASE("effective field") {
  const auto s = paper_schedule();
  const Vec3 b = s.effective_field(10.0);
  CHECK(b.x == doctest::Approx(200.0));
  CHECK(b.y == 0.0);
  CHECK(b.z == doctest::Approx(300.0));
}

TEST_CASE("effective field at the protocol landmarks") {
  const auto s = paper_schedule();
  CHECK(s.effective_field(0.0) == Vec3{0.0, 0.0, 600.0});
  const Vec3 top = s.effective_field(20.0 + std::numbers::pi / 2);
  CHECK(top.x == 400.0);
  CHECK(top.z == doctest::Approx(-1000.0));
  const Vec3 sw = s.effective_field(20.0);
  CHECK(sw.x == doctest::Approx(400.0));
  CHECK(sw.z == doctest::Approx(0.0));
  for (double t = 0.0; t <= 216.0; t += 0.37) CHECK(s.effective_field(t).x >= 0.0);
}

TEST_CASE("phi_dot has the cantilever period after the switch") {
  const auto s = paper_schedule();
  for (double t = 20.5; t < 200.0; t += 7.3) {
    CHECK(s.phi_dot(t + 2 * std::numbers::pi) == doctest::Approx(s.phi_dot(t)).epsilon(1e-9));
  }
}

TEST_CASE("negative time is a domain error") {
  const auto s = paper_schedule();
  CHECK_THROWS_AS(s.epsilon(-1.0), std::domain_error);
  CHECK_THROWS_AS(s.phi_dot(-1e-12), std::domain_error);
}

TEST_CASE("max |phi_dot|") {
  CHECK(paper_schedule().max_abs_phi_dot(216.0) == doctest::Approx(1000.0).epsilon(1e-6));
  CHECK(paper_schedule().max_abs_phi_dot(10.0) == doctest::Approx(600.0));
}

TEST_CASE("registry") {
  auto& r = ScheduleRegistry::instance();
  CHECK(r.contains("paper-eq6"));
  CHECK(r.contains("constant"));
  CHECK(r.contains("sinusoidal"));
  CHECK_THROWS_AS(r.make("nope"), std::invalid_argument);
  CHECK_THROWS_AS(r.make("constant", {{"epsilonn", 1.0}}), std::invalid_argument);

  const auto c = r.make("constant", {{"epsilon", 3.0}, {"phi_dot", -2.0}});
  CHECK(c.epsilon(7.0) == 3.0);
  CHECK(c.phi_dot(7.0) == -2.0);
  CHECK(c.parameters().at("epsilon") == 3.0);

  const auto sn = r.make("sinusoidal");
  CHECK(sn.epsilon(0.3) == 5.0);
  CHECK(sn.phi_dot(0.3) == doctest::Approx(2.0 * std::sin(0.3)));

  r.add("test-linear", {{"slope", 1.0}}, [](const ScheduleParams& p) {
    const double k = p.at("slope");
    return DriveSchedule("test-linear", p, [k](double t) { return k * t; },
                         [](double) { return 0.0; });
  });
  CHECK(r.make("test-linear", {{"slope", 4.0}}).epsilon(2.0) == 8.0);
  CHECK_THROWS_AS(r.add("constant", {}, nullptr), std::invalid_argument);
}
