#include "doctest.h"

#include <random>

#include "sfqsim/arbiter.hpp"
#include "sfqsim/errors.hpp"
#include "sfqsim/neuron.hpp"

using namespace sfqsim;
using namespace sfqsim::literals;

namespace {

NeuronConfig config_for(int t_max) {
  NeuronConfig cfg;
  cfg.max_threshold = t_max;
  return cfg;
}

// Step-by-step arithmetic model of the counter, independent of the netlist.
int counter_oracle(int t_max, int load, int n, bool reload_on_fire) {
  int count = load;
  int fires = 0;
  auto settle = [&] {
    while (count >= t_max) {
      count -= t_max;
      ++fires;
      if (reload_on_fire) count += load;
    }
  };
  settle();
  for (int i = 0; i < n; ++i) {
    ++count;
    settle();
  }
  return fires;
}

std::size_t rtff_count(const Netlist& nl) {
  std::size_t n = 0;
  for (const auto& c : nl.cells()) n += std::holds_alternative<RtffCell>(c.model) ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("tau_transition examples") {
  CHECK(tau_transition(TauState::idle, TauSignal::clock) == TauTransition{TauState::idle, 0});
  CHECK(tau_transition(TauState::load2, TauSignal::clock) == TauTransition{TauState::load2, 2});
  CHECK(tau_transition(TauState::load3, TauSignal::increment) == TauTransition{TauState::load3, 0});
  CHECK(tau_transition(TauState::idle, TauSignal::decrement) == TauTransition{TauState::idle, 0});
  CHECK(tau_transition(TauState::load1, TauSignal::increment) == TauTransition{TauState::load2, 0});
}

TEST_CASE("adjusted_threshold examples") {
  const NeuronConfig cfg = config_for(4);
  CHECK(adjusted_threshold(cfg, TauState::load1) == 3);
  CHECK(adjusted_threshold(cfg, TauState::load3) == 1);
  CHECK(adjusted_threshold(cfg, TauState::idle) == 4);
  CHECK_THROWS_AS(adjusted_threshold(config_for(2), TauState::load2), ConfigError);
  CHECK(cfg.reachable_thresholds() == std::vector<int>{4, 3, 2, 1});
  CHECK(config_for(2).reachable_thresholds() == std::vector<int>{2, 1});
}

TEST_CASE("build_neuron stage counts and config errors") {
  CHECK(rtff_count(build_neuron(config_for(2))) == 1);
  CHECK(rtff_count(build_neuron(config_for(4))) == 2);
  CHECK(rtff_count(build_neuron(config_for(6))) == 3);
  CHECK_THROWS_AS(build_neuron(config_for(3)), ConfigError);
  CHECK_THROWS_AS(build_neuron(config_for(0)), ConfigError);
}

TEST_CASE("wrap preload turns k stages into a modulo-2k counter") {
  CHECK(tu_wrap_preload(1) == 0);
  CHECK(tu_wrap_preload(2) == 0);
  CHECK(tu_wrap_preload(3) == 2);
  CHECK(tu_wrap_preload(4) == 8);
}

TEST_CASE("run_cycle examples") {
  SUBCASE("T=4, load 0") {
    NeuronSim sim(config_for(4));
    CHECK(sim.run_cycle(4) == 1);
    CHECK(sim.run_cycle(3) == 0);
  }
  SUBCASE("T=4, load 2, n=2") {
    NeuronSim sim(config_for(4));
    sim.adjust(2);
    CHECK(sim.run_cycle(2) == 1);
  }
  SUBCASE("T=4, load 1, n=8 gives floor(9/4)") {
    NeuronSim sim(config_for(4));
    sim.adjust(1);
    CHECK(sim.run_cycle(8) == 2);
  }
}

TEST_CASE("inputs outside the window or too close are timing errors") {
  NeuronSim sim(config_for(4));
  const auto& pr = sim.protocol();
  const std::vector<SimTime> early{pr.input_open - 1_fs};
  CHECK_THROWS_AS(sim.run_cycle_at(early), TimingError);
  const std::vector<SimTime> close{pr.input_open, pr.input_open + pr.min_input_spacing - 1_fs};
  CHECK_THROWS_AS(sim.run_cycle_at(close), TimingError);
  std::vector<int> x{5};
  CHECK_THROWS_AS(sim.run_cycle(x, 4), TimingError);
}

TEST_CASE("adjustment latency") {
  CHECK(adjustment_latency(NeuronConfig{}) == 40_ps);
  CHECK(adjustment_latency(config_for(2)) == adjustment_latency(config_for(4)));
  CHECK(adjustment_latency(config_for(8)) == adjustment_latency(config_for(4)));

  NeuronConfig doubled;
  for (auto name : CellTiming::kParameters) {
    SimTime* f = doubled.timing.field(name);
    *f = *f * 2;
  }
  doubled.clock_period = doubled.clock_period * 2;
  CHECK(adjustment_latency(doubled) == 80_ps);
}

TEST_CASE("counting oracle over T_max, load and n") {
  for (int t_max : {2, 4, 6, 8}) {
    for (int load = 0; load <= 3; ++load) {
      NeuronSim sim(config_for(t_max));
      sim.adjust(load);
      REQUIRE(sim.load() == load);
      for (int n = 0; n <= 20; ++n) {
        INFO("T_max=" << t_max << " load=" << load << " n=" << n);
        CHECK(sim.run_cycle(n) == (load + n) / t_max);
        CHECK(sim.run_cycle(n) == counter_oracle(t_max, load, n, false));
      }
    }
  }
}

TEST_CASE("fire indicator matches n >= adjusted threshold in the single-fire regime") {
  for (int t_max : {2, 4, 6, 8}) {
    const NeuronConfig cfg = config_for(t_max);
    for (int load = 0; load <= cfg.max_load(); ++load) {
      NeuronSim sim(cfg);
      sim.adjust(load);
      const int threshold = sim.adjusted_threshold();
      for (int n = 0; load + n < 2 * t_max; ++n) {
        CHECK((sim.run_cycle(n) >= 1) == (n >= threshold));
      }
    }
  }
}

TEST_CASE("increment then decrement restores behavior") {
  for (int t_max : {2, 4, 6}) {
    for (int load = 0; load < 3; ++load) {
      for (int n = 0; n <= 2 * t_max; ++n) {
        NeuronSim sim(config_for(t_max));
        sim.adjust(load);
        const int before = sim.run_cycle(n);
        const auto before_times = sim.trace().times("out");
        const SimTime before_cycle = sim.cursor() - sim.protocol().period;
        sim.adjust(1);
        sim.run_cycle(n);
        sim.adjust(-1);
        CHECK(sim.load() == load);
        const SimTime start = sim.cursor();
        CHECK(sim.run_cycle(n) == before);
        // Same output times relative to the cycle start.
        const auto after_times = sim.trace().times("out");
        std::vector<SimTime> a, b;
        for (SimTime t : before_times) {
          if (t >= before_cycle) b.push_back(t - before_cycle);
        }
        for (SimTime t : after_times) {
          if (t >= start) a.push_back(t - start);
        }
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("reset soundness: a cycle does not depend on history") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int t_max = 2 * (1 + static_cast<int>(rng() % 4));
    NeuronSim sim(config_for(t_max));
    const int steps = static_cast<int>(rng() % 6);
    for (int s = 0; s < steps; ++s) {
      if (rng() % 2) {
        sim.adjust(static_cast<int>(rng() % 7) - 3);
      } else {
        sim.run_cycle(static_cast<int>(rng() % 20));
      }
    }
    const int load = sim.load();
    const int n = static_cast<int>(rng() % 20);
    NeuronSim fresh(config_for(t_max));
    fresh.adjust(load);
    CHECK(sim.run_cycle(n) == fresh.run_cycle(n));
    const NeuronState a = sim.state();
    const NeuronState b = fresh.state();
    CHECK(a.load == b.load);
    CHECK(a.stages == b.stages);
  }
}

TEST_CASE("reload on fire re-biases the counter after every output") {
  for (int t_max : {2, 4, 6, 8}) {
    NeuronConfig cfg = config_for(t_max);
    cfg.reload_on_fire = true;
    cfg.clock_period = 4000_ps;
    for (int load = 0; load <= std::min(cfg.max_load(), t_max - 1); ++load) {
      NeuronSim sim(cfg);
      sim.adjust(load);
      for (int n = 0; n <= 20; ++n) {
        INFO("T_max=" << t_max << " load=" << load << " n=" << n);
        CHECK(sim.run_cycle(n) == counter_oracle(t_max, load, n, true));
      }
    }
  }
}

TEST_CASE("arbiter is lossless for legal stream spacing") {
  const CellTiming timing;
  REQUIRE(arbiter_lossless_precondition(timing));
  const SimTime spacing = arbiter_min_stream_spacing(timing);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    Simulator sim(build_arbiter(timing));
    std::vector<SimTime> loads, inputs;
    SimTime t = SimTime::from_fs(static_cast<std::int64_t>(rng() % 20000));
    const int nl = static_cast<int>(rng() % 6);
    for (int i = 0; i < nl; ++i) {
      loads.push_back(t);
      t += spacing + SimTime::from_fs(static_cast<std::int64_t>(rng() % 30000));
    }
    t = SimTime::from_fs(static_cast<std::int64_t>(rng() % 20000));
    const int ni = static_cast<int>(rng() % 6);
    for (int i = 0; i < ni; ++i) {
      // Half of the input pulses are pinned near a load pulse, inside the
      // merger dead time, exact coincidences included.
      if (!loads.empty() && rng() % 2) {
        const SimTime anchor = loads[rng() % loads.size()];
        const std::int64_t dead = timing.merger_dead_time.fs;
        const SimTime cand = anchor + SimTime::from_fs(static_cast<std::int64_t>(rng() % (2 * dead + 1)) - dead);
        if ((inputs.empty() || cand >= inputs.back() + spacing) && cand >= SimTime{}) {
          inputs.push_back(cand);
          t = cand + spacing;
          continue;
        }
      }
      if (!inputs.empty() && t < inputs.back() + spacing) t = inputs.back() + spacing;
      inputs.push_back(t);
      t += spacing + SimTime::from_fs(static_cast<std::int64_t>(rng() % 30000));
    }
    for (SimTime x : loads) sim.schedule("load", x);
    for (SimTime x : inputs) sim.schedule("in", x);
    const Trace tr = sim.run_until(SimTime::from_ps(10000));
    REQUIRE(tr.count("out") == loads.size() + inputs.size());
  }
}

TEST_CASE("arbiter with a zero coincidence window drops a coincident pair") {
  CellTiming timing;
  timing.and_window = SimTime{};
  Simulator sim(build_arbiter(timing));
  sim.schedule("load", 10_ps);
  sim.schedule("in", 12_ps);
  CHECK(sim.run_until(200_ps).count("out") == 1);
}
