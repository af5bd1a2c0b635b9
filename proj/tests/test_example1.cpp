#include "doctest.h"
#include "mcfod/exact.hpp"
#include "mcfod/milp/solve.hpp"
#include "test_util.hpp"

using namespace mcfod;

TEST_CASE("example 1 smoke") {
  Instance inst = test::example1();
  FeeSchedule fees = test::table2_fees(inst);
  for (auto [v, want] : {std::pair{Variant::Free, 260.0}, {Variant::FixedOptimistic, 150.0},
                         {Variant::FixedRelaxed, 155.0}}) {
    const FeeSchedule* f = is_fixed(v) ? &fees : nullptr;
    auto costs = compute_costs(inst, v, f);
    ExactOptions eo;
    eo.fixed_fees = f;
    CHECK(brute_force(inst, costs, eo).objective == want);
    for (auto form : {Formulation::IP, Formulation::EP, Formulation::EF, Formulation::IF}) {
      milp::MilpRunOptions mo;
      mo.formulation = form;
      mo.variant = v;
      auto run = milp::solve_milp(inst, mo, f);
      INFO(to_string(form), " ", to_string(v), " ", run.error, run.outcome.message);
      REQUIRE(run.verified());
      CHECK(run.solution->objective == doctest::Approx(want));
    }
  }
}
