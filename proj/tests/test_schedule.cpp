#include "doctest.h"
#include "fullersim/error.hpp"
#include "fullersim/schedule.hpp"

using namespace fullersim;
using namespace fullersim::schedule;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
    return e.what();
  }
  FAIL("expected an Error");
  return {};
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("three-row schedule file") {
  const auto sched = load_schedule("s,gamma_ghz,j_ghz\n0,5,0\n0.5,2,1\n1,0,4\n", "three");
  CHECK(sched.name() == "three");
  REQUIRE(sched.knots().size() == 3);
  CHECK(sched.eval(0.5).gamma == 2.0);
  CHECK(sched.eval(0.5).j == 1.0);
  CHECK(sched.eval(0.25).gamma == doctest::Approx(3.5));
  CHECK(sched.eval(0.75).j == doctest::Approx(2.5));
  // Round trip through the CSV writer.
  const auto back = load_schedule(sched.to_csv(), "three");
  CHECK(back.knots() == sched.knots());
}

TEST_CASE("schedule file errors carry line numbers") {
  const auto missing_end = error_of([] { load_schedule("s,gamma_ghz,j_ghz\n0,5,0\n0.5,2,1\n"); });
  CHECK(contains(missing_end, "missing final knot at s=1"));

  const auto shuffled =
      error_of([] { load_schedule("s,gamma_ghz,j_ghz\n0,5,0\n1,0,4\n0.5,2,1\n"); });
  CHECK(contains(shuffled, "line 4"));
  CHECK(contains(shuffled, "s not increasing"));

  const auto negative = error_of([] { load_schedule("s,gamma_ghz,j_ghz\n0,5,0\n1,-1,4\n"); });
  CHECK(contains(negative, "line 3"));

  const auto header = error_of([] { load_schedule("s,gamma,j\n0,5,0\n1,0,4\n"); });
  CHECK(contains(header, "line 1"));

  const auto bad = error_of([] { load_schedule("# comment\ns,gamma_ghz,j_ghz\n0,x,0\n1,0,4\n"); });
  CHECK(contains(bad, "line 3"));
  CHECK(contains(bad, "'x'"));

  const auto start = error_of([] { load_schedule("s,gamma_ghz,j_ghz\n0.1,5,0\n1,0,4\n"); });
  CHECK(contains(start, "s=0"));
}

TEST_CASE("default schedule") {
  const auto sched = default_schedule();
  CHECK(sched.name() == "default");
  CHECK(sched.knots().size() == 101);
  CHECK(sched.eval(0.0).gamma == 6.0);
  CHECK(sched.eval(0.0).j == 0.0);
  CHECK(sched.eval(1.0).gamma == 0.0);
  CHECK(sched.eval(1.0).j == 4.0);
  CHECK(sched.eval(0.5).gamma == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(sched.eval(0.5).j == doctest::Approx(2.0).epsilon(1e-15));

  const auto custom = default_schedule({2.0, 1.0, 3});
  CHECK(custom.knots().size() == 3);
  CHECK(custom.eval(0.5).gamma == 1.0);
}

TEST_CASE("eval is exact at knots and linear between them") {
  const auto sched = default_schedule({6.0, 4.0, 11});
  for (std::size_t k = 0; k < sched.knots().size(); ++k) {
    const auto& knot = sched.knots()[k];
    CHECK(sched.eval(knot.s).gamma == knot.gamma);
    CHECK(sched.eval(knot.s).j == knot.j);
    if (k + 1 < sched.knots().size()) {
      const auto& next = sched.knots()[k + 1];
      const auto mid = sched.eval(0.5 * (knot.s + next.s));
      CHECK(mid.gamma == doctest::Approx(0.5 * (knot.gamma + next.gamma)));
      CHECK(mid.j == doctest::Approx(0.5 * (knot.j + next.j)));
    }
  }
  for (double s : {-0.01, 1.5}) {
    try {
      sched.eval(s);
      FAIL("expected range error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kRange);
    }
  }
}

TEST_CASE("rescale_couplings") {
  const auto sched = default_schedule();
  const auto same = rescale_couplings(sched, 1.0);
  CHECK(same.knots() == sched.knots());
  const auto half = rescale_couplings(sched, 0.5);
  for (std::size_t k = 0; k < sched.knots().size(); ++k) {
    CHECK(half.knots()[k].j == 0.5 * sched.knots()[k].j);
    CHECK(half.knots()[k].gamma == sched.knots()[k].gamma);
  }
  CHECK(half.name() != sched.name());
  for (double f : {0.0, 1.5, -1.0}) {
    try {
      rescale_couplings(sched, f);
      FAIL("expected range error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kRange);
    }
  }
}

TEST_CASE("constructor invariants") {
  CHECK_THROWS_AS(AnnealingSchedule("x", {{0.0, 1.0, 0.0}}), Error);
  CHECK_THROWS_AS(AnnealingSchedule("x", {{0.0, 1.0, 0.0}, {0.9, 0.0, 1.0}}), Error);
  CHECK_THROWS_AS(AnnealingSchedule("x", {{0.0, 1.0, 0.0}, {0.5, 1.0, 0.0}, {0.5, 1.0, 0.0},
                                          {1.0, 0.0, 1.0}}),
                  Error);
  CHECK_THROWS_AS(AnnealingSchedule("x", {{0.0, -1.0, 0.0}, {1.0, 0.0, 1.0}}), Error);
}
