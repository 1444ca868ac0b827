#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "coneasym/jsonio.hpp"
#include "coneasym/templates.hpp"
#include "coneasym/weights.hpp"

using namespace coneasym;

namespace {

std::set<long long> exponent_set(const ExpansionTemplate& t) {
  std::set<long long> out;
  for (const auto& term : t.terms) out.insert(std::llround(term.exponent.value * 1e6));
  return out;
}

int log_at(const ExpansionTemplate& t, double e) {
  const auto* term = t.find(e);
  return term ? term->max_log_power : -1;
}

}  // namespace

TEST_CASE("S^2, gamma = 0, k = 4 gives the Taylor exponents") {
  const auto t = template_closed_form(sphere_spectrum(2, 12), 0.0, 4);
  CHECK(exponent_set(t) == std::set<long long>{0, 1000000, 2000000, 3000000, 4000000, 5000000, 6000000});
  const auto r = render_uexp(t, 0.0, 2.0);
  CHECK(r.integer_exponents);
  CHECK(r.odd_series.size() == 3);
}

TEST_CASE("k = 2 keeps the odd branch only for n = 2") {
  const auto s2 = template_closed_form(sphere_spectrum(2, 8), 0.0, 2);
  REQUIRE(s2.find(1.0));
  CHECK(log_at(s2, 1.0) == 1);
  CHECK(log_at(s2, 2.0) == 1);
  const auto c = template_closed_form(circle_spectrum(2.0 / 3.0, 8), 0.0, 2);
  // n = 1: exponent 2 carries log power 1 + 1, and no odd exponents appear.
  CHECK(log_at(c, 2.0) == 2);
  // Odd integers such as 3 = -mu_2 are spectral here, never shifts of q_0^+.
  for (const auto& term : c.terms) {
    for (const auto& o : term.origins) {
      if (const auto* e = std::get_if<EvenShiftOrigin>(&o)) CHECK(e->branch == ShiftBranch::Even);
    }
  }
}

TEST_CASE("S^3, gamma = 1/2, k = 3") {
  const auto t = template_closed_form(sphere_spectrum(3, 8), 0.5, 3);
  CHECK(log_at(t, 4.0) == 2);
  // mu_1 = -1 and mu_2 = -2 sit in J_2, mu_3 = -3 and mu_4 = -4 in J_3.
  CHECK(log_at(t, 1.0) == 0);
  CHECK(log_at(t, 3.0) == 1);
  CHECK(t.find(5.0) == nullptr);
}

TEST_CASE("closed form equals the inductive construction") {
  for (const auto& cs : {sphere_spectrum(2, 10), sphere_spectrum(3, 10), circle_spectrum(1.0 / std::sqrt(2.0), 10),
                         custom_spectrum(4, {{0.0, 1}, {-2.5, 1}, {-7.3, 2}, {-13.0, 3}})}) {
    const auto w = admissible_window(cs.n(), cs.first_nonzero());
    REQUIRE(w);
    for (int k = 2; k <= 6; ++k) {
      CHECK(template_closed_form(cs, w->midpoint(), k).signature() == template_inductive(cs, w->midpoint(), k).signature());
    }
  }
}

TEST_CASE("templates are nested in k") {
  const auto cs = custom_spectrum(2, {{0.0, 1}, {-1.25, 2}, {-3.7, 3}, {-8.1, 2}});
  for (int k = 2; k < 6; ++k) {
    const auto small = template_closed_form(cs, 0.0, k);
    const auto big = template_closed_form(cs, 0.0, k + 1);
    for (const auto& term : small.terms) {
      const auto* other = big.find(term.exponent.value);
      REQUIRE(other != nullptr);
      CHECK(other->max_log_power >= term.max_log_power);
    }
  }
}

TEST_CASE("every term is a member of the weighted space") {
  const auto cs = sphere_spectrum(3, 10);
  const auto t = template_closed_form(cs, 0.5, 5);
  for (const auto& term : t.terms) CHECK(membership(3, 0.5, term.exponent.value, term.max_log_power));
}

TEST_CASE("input checks") {
  const auto s3 = sphere_spectrum(3, 8);
  CHECK_THROWS_AS(template_closed_form(s3, 2.0, 3), WindowViolation);
  CHECK_THROWS_AS(template_closed_form(s3, 0.5, 1), KTooSmall);
  const auto t = template_closed_form(s3, 0.5, 2);
  CHECK(render_uexp(t, 0.0, 2.0).remainder_exponent == doctest::Approx(2.5));
  CHECK_NOTHROW(render_uexp(t, 0.0, 4.0));
  CHECK_THROWS_AS(render_uexp(t, -3.0, 2.0), ContinuityHypothesisFailed);
}

TEST_CASE("truncation guard") {
  CHECK_FALSE(template_closed_form(sphere_spectrum(3, 2), 0.5, 6).complete());
  CHECK(template_closed_form(sphere_spectrum(3, 20), 0.5, 6).complete());
}

TEST_CASE("template JSON matches the stored golden file") {
  std::ifstream in(CONE_ASYM_TEST_DATA "/template_s2_g0_k4.json");
  REQUIRE(in);
  std::stringstream want;
  want << in.rdbuf();
  const auto r = render_uexp(template_closed_form(sphere_spectrum(2, 12), 0.0, 4), 0.0, 2.0);
  CHECK(dump_json(r.to_json(), 2) + "\n" == want.str());
}
