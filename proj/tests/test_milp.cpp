#include <chrono>

#include "doctest.h"
#include "mcfod/milp/bridge.hpp"
#include "mcfod/milp/cut_loop.hpp"
#include "mcfod/milp/extract.hpp"
#include "mcfod/milp/formulations.hpp"
#include "mcfod/milp/mps.hpp"
#include "mcfod/milp/solve.hpp"
#include "mcfod/preprocess.hpp"
#include "test_util.hpp"

using namespace mcfod;
using namespace mcfod::milp;

namespace {

constexpr double kSolverTol = 1e-6;

std::string solver() { return resolve_solver_cmd(); }

Row row(std::string name, Sense s, double rhs, std::vector<std::pair<int, double>> coefs) {
  return Row{std::move(name), s, rhs, std::move(coefs)};
}

// max x + 2y over [0,10]^2. Deferred: y <= 1 is violated at the start, and
// x <= 5y only after y has been cut down, so the loop needs two rounds.
MilpModel two_round_model() {
  MilpModel m;
  m.name = "tworound";
  int x = m.add_continuous("x", 0, 10, 1, {});
  int y = m.add_continuous("y", 0, 10, 2, {Family::S, 1});
  m.add_row(row("cap", Sense::LE, 100, {{x, 1}, {y, 1}}));
  m.add_deferred(row("cut_y", Sense::LE, 1, {{y, 1}}));
  m.add_deferred(row("cut_xy", Sense::LE, 0, {{x, 1}, {y, -5}}));
  return m;
}

}  // namespace

TEST_CASE("MPS writer") {
  SUBCASE("empty model") {
    MilpModel m;
    m.name = "empty";
    CHECK(emit_mps(m) == "NAME empty\nROWS\n N obj\nENDATA\n");
  }
  SUBCASE("single binary is wrapped in integer markers") {
    MilpModel m;
    m.name = "one";
    int b = m.add_binary("b", 3, {});
    m.add_row(row("r", Sense::LE, 1, {{b, 1}}));
    const std::string mps = emit_mps(m);
    CHECK(mps ==
          "NAME one\nROWS\n N obj\n L r\nCOLUMNS\n"
          "    MARKER0 'MARKER' 'INTORG'\n    b obj -3\n    b r 1\n"
          "    MARKER1 'MARKER' 'INTEND'\nRHS\n    RHS r 1\nBOUNDS\n UP BND b 1\nENDATA\n");
    MpsOptions o;
    o.objsense_max = true;
    CHECK(emit_mps(m, o).find("NAME one\nOBJSENSE\n    MAX\nROWS\n") == 0);
    CHECK(emit_mps(m, o).find("    b obj 3\n") != std::string::npos);
  }
  SUBCASE("deferred rows are not written") {
    MilpModel m = two_round_model();
    CHECK(emit_mps(m).find("cut_y") == std::string::npos);
  }
  SUBCASE("byte-identical across builds") {
    Instance inst = test::example1();
    for (Formulation f : {Formulation::IP, Formulation::EP, Formulation::EF, Formulation::IF})
      CHECK(emit_mps(build(inst, f, Variant::Free)) == emit_mps(build(inst, f, Variant::Free)));
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-3) == "-3");
  CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("solution file dialects") {
  SUBCASE("status, objective keyword and comments") {
    auto s = parse_solution_text("# header\nstatus optimal\nobjective 12.5\nx 1\ny 0.5 # trailing\n");
    CHECK(s.status == "OPTIMAL");
    CHECK(s.objective == 12.5);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[1] == std::pair<std::string, double>{"y", 0.5});
  }
  SUBCASE("lone number on the first line") {
    auto s = parse_solution_text("7\nx 1\n");
    CHECK_FALSE(s.status.has_value());
    CHECK(s.objective == 7);
    CHECK(s.values.size() == 1);
  }
  SUBCASE("colon-suffixed keys") {
    auto s = parse_solution_text("Status: TIME_LIMIT\nObj: 3\n");
    CHECK(s.status == "TIME_LIMIT");
    CHECK(s.objective == 3);
  }
  SUBCASE("malformed lines") {
    CHECK_THROWS_AS(parse_solution_text("x 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_solution_text("x one\n"), ParseError);
  }
}

TEST_CASE("bridge statuses") {
  SUBCASE("infeasible model") {
    MilpModel m;
    int x = m.add_continuous("x", 0, 1, 1, {});
    m.add_row(row("r", Sense::GE, 2, {{x, 1}}));
    CHECK(bridge_solve(m, solver(), 30).status == Status::Infeasible);
  }
  SUBCASE("zero time limit") {
    CHECK(bridge_solve(two_round_model(), solver(), 0).status == Status::Timeout);
  }
  SUBCASE("runaway solver is killed") {
    BridgeOptions o;
    o.grace = 0.2;
    auto t0 = std::chrono::steady_clock::now();
    auto out = bridge_solve(two_round_model(), "sleep 30 # {mps} {sol}", 0.3, o);
    CHECK(out.status == Status::Timeout);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10));
  }
  SUBCASE("unknown variable in the solution") {
    auto out = bridge_solve(two_round_model(), "printf 'bogus 1\\n' > {sol} # {mps}", 30);
    CHECK(out.status == Status::SolverError);
    CHECK(out.message.find("bogus") != std::string::npos);
  }
  SUBCASE("failing command") {
    CHECK(bridge_solve(two_round_model(), "exit 3 # {mps} {sol}", 30).status == Status::SolverError);
  }
  SUBCASE("template without placeholders") {
    CHECK_THROWS_AS(bridge_solve(two_round_model(), "true", 30), SolverError);
  }
  SUBCASE("omitted variables read as zero") {
    auto out = bridge_solve(two_round_model(), "printf 'status FEASIBLE\\ny 1\\n' > {sol} # {mps}", 30);
    CHECK(out.status == Status::Feasible);
    CHECK(out.assignment == std::vector<double>{0, 1});
    CHECK(out.objective == 2);
  }
}

TEST_CASE("cut loop") {
  SUBCASE("no deferred rows: one solve, no cuts") {
    MilpModel m;
    m.add_continuous("x", 0, 4, 1, {});
    auto out = solve_with_cuts(m, solver(), 30);
    CHECK(out.status == Status::Optimal);
    CHECK(out.cuts_added == 0);
    CHECK(out.resolve_count == 1);
    CHECK(out.objective == doctest::Approx(4).epsilon(kSolverTol));
  }
  SUBCASE("cuts arrive over two rounds") {
    auto out = solve_with_cuts(two_round_model(), solver(), 30);
    CHECK(out.status == Status::Optimal);
    CHECK(out.cuts_added == 2);
    CHECK(out.resolve_count == 3);
    CHECK(out.objective == doctest::Approx(7).epsilon(kSolverTol));
  }
  SUBCASE("EF with deferred leg rows on Example 1") {
    Instance inst = test::example1();
    for (bool big_m : {true, false}) {
      BuildOptions b;
      b.defer_cuts = true;
      b.big_m = big_m;
      MilpModel m = build(inst, Formulation::EF, Variant::Free, b);
      CHECK_FALSE(m.deferred_rows().empty());
      auto out = solve_with_cuts(m, solver(), 60);
      REQUIRE(out.has_solution());
      CHECK(out.objective == doctest::Approx(260).epsilon(kSolverTol));
      CHECK(verify_solution(inst, extract(m, out, inst, Variant::Free), Variant::Free).ok());
    }
  }
}

TEST_CASE("IP variable counts") {
  Instance inst = test::example1();
  MilpModel full = build(inst, Formulation::IP, Variant::Free);
  // |R| + |V\H||K| + |R||K|^2 = 4 + 6 + 16.
  CHECK(full.var_count() == 26);
  CHECK(ip_closed_form(inst, 0).variables == 26);
  CHECK(full.row_count() == ip_closed_form(inst, 0).rows);

  // Under Table 2 fees some cells are unservable (always dropped) and some
  // are servable at a loss (dropped only with prune_ip).
  FeeSchedule t2 = test::table2_fees(inst);
  auto pc = compute_costs(inst, Variant::FixedOptimistic, &t2);
  long long unservable = 0, unprofitable = 0;
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        if (pc.unservable(r, k, l)) ++unservable;
        else if (pc.cost(r, k, l) >= inst.commodity(r).revenue) ++unprofitable;
      }
  REQUIRE(unservable > 0);
  MilpModel fixed = build(inst, Formulation::IP, Variant::FixedOptimistic, {}, &t2);
  CHECK(fixed.var_count() == 26 - unservable);
  CHECK(fixed.var_count() == ip_closed_form(inst, unservable).variables);
  BuildOptions o;
  o.prune_ip = true;
  MilpModel pruned = build(inst, Formulation::IP, Variant::FixedOptimistic, o, &t2);
  CHECK(pruned.var_count() == 26 - unservable - unprofitable);
  CHECK(pruned.metadata["pruned_pi"].get<long long>() == unservable + unprofitable);
  CHECK(pruned.row_count() == ip_closed_form(inst, unservable + unprofitable).rows);
}

TEST_CASE("extraction") {
  Instance inst = test::example1();
  FeeSchedule t2 = test::table2_fees(inst);
  SUBCASE("all-zero assignment is the empty solution") {
    MilpModel m = build(inst, Formulation::EP, Variant::Free);
    SolveOutcome out;
    out.status = Status::Optimal;
    out.assignment.assign(m.var_count(), 0.0);
    LeaderSolution s = extract(m, out, inst, Variant::Free);
    CHECK(s.served.empty());
    CHECK(s.objective == 0);
    CHECK(s.allocation == Allocation::none(inst));
  }
  SUBCASE("IP FREE decodes the Table 5 allocation") {
    MilpModel m = build(inst, Formulation::IP, Variant::Free);
    auto out = solve_with_cuts(m, solver(), 60);
    REQUIRE(out.has_solution());
    LeaderSolution s = extract(m, out, inst, Variant::Free);
    CHECK(s.objective == 260);
    CHECK(s.allocation.of(inst, 1) == 0);
    CHECK(s.allocation.of(inst, 5) == 1);
  }
  SUBCASE("EP relaxed routes commodity 1 through hub 3 twice") {
    MilpModel m = build(inst, Formulation::EP, Variant::FixedRelaxed, {}, &t2);
    auto out = solve_with_cuts(m, solver(), 60);
    REQUIRE(out.has_solution());
    LeaderSolution s = extract(m, out, inst, Variant::FixedRelaxed, &t2);
    CHECK(s.objective == 155);
    CHECK(s.route.at(0) == HubPair{3, 3});
  }
  SUBCASE("fractional binaries are rejected") {
    MilpModel m = build(inst, Formulation::IP, Variant::Free);
    SolveOutcome out;
    out.status = Status::Feasible;
    out.assignment.assign(m.var_count(), 0.0);
    for (int v = 0; v < m.var_count(); ++v)
      if (m.variables()[v].type == VarType::Binary) {
        out.assignment[v] = 0.5;
        break;
      }
    CHECK_THROWS_AS(extract(m, out, inst, Variant::Free), Error);
  }
  SUBCASE("failed outcomes have nothing to extract") {
    MilpModel m = build(inst, Formulation::IP, Variant::Free);
    SolveOutcome out;
    out.status = Status::Infeasible;
    CHECK_THROWS_AS(extract(m, out, inst, Variant::Free), Error);
  }
}

TEST_CASE("solve_milp reports every formulation and variant on Example 1") {
  Instance inst = test::example1();
  FeeSchedule t2 = test::table2_fees(inst);
  const std::pair<Variant, double> want[] = {
      {Variant::Free, 260}, {Variant::FixedOptimistic, 150}, {Variant::FixedRelaxed, 155}};
  for (Formulation f : {Formulation::IP, Formulation::EP, Formulation::EF, Formulation::IF})
    for (auto [v, obj] : want) {
      MilpRunOptions o;
      o.formulation = f;
      o.variant = v;
      o.time_limit = 60;
      MilpRun run = solve_milp(inst, o, is_fixed(v) ? &t2 : nullptr);
      INFO(to_string(f) << " " << to_string(v) << " " << run.error << run.outcome.message);
      REQUIRE(run.verified());
      CHECK(run.solution->objective == doctest::Approx(obj).epsilon(kSolverTol));
    }
}
