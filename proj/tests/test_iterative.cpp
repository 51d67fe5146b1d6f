#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cdpath/iterative.hpp"
#include "cdpath/models.hpp"

using namespace cdpath;

namespace {

AnnealingProblem long_range(int n, double alpha) {
  ModelSpec spec;
  spec.kind = ModelKind::LongRangeIsing;
  spec.sites = n;
  spec.alpha = alpha;
  return make_model(spec);
}

}  // namespace

TEST_CASE("single iteration returns the infinite-temperature result exactly") {
  AnnealingProblem p = long_range(6, 2.0);
  IterativeOptions opt;
  opt.ell = 2;
  opt.steps = 300;
  opt.max_iters = 1;
  const auto records = iterative_gs_protocol(p, opt);
  REQUIRE(records.size() == 1);
  CHECK(records[0].iteration == 0);
  CHECK(std::isnan(records[0].max_action_delta));

  EvolutionOptions evo;
  evo.ell = 2;
  evo.steps = 300;
  evo.weight = WeightPolicy::InfiniteT;
  const EvolutionResult direct = evolve_fast_limit(p, evo);
  CHECK(records[0].fidelity == direct.fidelity);  // same grid, bit for bit
}

TEST_CASE("exact regime is a fixed point") {
  AnnealingProblem p = long_range(4, 2.0);
  IterativeOptions opt;
  opt.ell = 12;  // deep enough to exhaust the operator space
  opt.steps = 250;
  opt.max_iters = 3;
  const auto records = iterative_gs_protocol(p, opt);
  REQUIRE(records.size() >= 2);
  CHECK(records[0].fidelity == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(records[1].fidelity == doctest::Approx(records[0].fidelity).epsilon(1e-6));
}

TEST_CASE("iteration history is finite and flags convergence honestly") {
  AnnealingProblem p = long_range(6, 2.0);
  IterativeOptions opt;
  opt.ell = 2;
  opt.steps = 300;
  opt.max_iters = 8;
  opt.conv_tol = 1e-6;
  const auto records = iterative_gs_protocol(p, opt);
  CHECK(records.size() <= 8);
  for (std::size_t k = 0; k < records.size(); ++k) {
    CHECK(records[k].iteration == static_cast<int>(k));
    CHECK(records[k].fidelity >= 0.0);
    CHECK(records[k].fidelity <= 1.0 + 1e-12);
    REQUIRE(records[k].trajectory);
    for (const auto& s : records[k].trajectory->states)
      CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
  if (records.back().converged) {
    const std::size_t k = records.size() - 1;
    CHECK(std::abs(records[k].fidelity - records[k - 1].fidelity) < opt.conv_tol);
  }
  for (std::size_t k = 1; k < records.size(); ++k)
    CHECK(std::isfinite(records[k].max_action_delta));
}

TEST_CASE("iterative options are validated") {
  AnnealingProblem p = long_range(4, 2.0);
  IterativeOptions opt;
  opt.max_iters = 0;
  CHECK_THROWS_AS(iterative_gs_protocol(p, opt), EvolutionError);
  opt.max_iters = 2;
  opt.conv_tol = 0.0;
  CHECK_THROWS_AS(iterative_gs_protocol(p, opt), EvolutionError);
}
