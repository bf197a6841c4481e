#include "doctest.h"

#include <random>

#include "sfqsim/cells.hpp"
#include "sfqsim/event_kernel.hpp"

using namespace sfqsim;
using namespace sfqsim::literals;

namespace {

// Feeds a cell one pulse at a time and collects everything it emits.
template <class Cell>
Emissions feed(Cell& cell, std::initializer_list<std::pair<std::size_t, SimTime>> pulses) {
  Emissions all;
  for (auto [port, t] : pulses) cell.on_pulse(port, t, all);
  return all;
}

}  // namespace

TEST_CASE("rtff_step transition table") {
  CHECK(rtff_step(RtffState::s1, RtffSignal::input) == RtffStep{RtffState::s2, 0});
  CHECK(rtff_step(RtffState::s2, RtffSignal::input) == RtffStep{RtffState::s1, 1});
  CHECK(rtff_step(RtffState::s2, RtffSignal::reset) == RtffStep{RtffState::s1, 0});
  CHECK(rtff_step(RtffState::s1, RtffSignal::reset) == RtffStep{RtffState::s1, 0});
}

TEST_CASE("RTFF divides frequency by two for n = 0..64") {
  for (int n = 0; n <= 64; ++n) {
    RtffCell cell{6_ps};
    Emissions out;
    for (int i = 0; i < n; ++i) cell.on_pulse(RtffCell::kToggle, SimTime::from_ps(20 * i), out);
    CHECK(out.size() == static_cast<std::size_t>(n / 2));
  }
}

TEST_CASE("RTFF reset coincident with an input leaves S1") {
  SUBCASE("reset delivered first") {
    RtffCell cell{6_ps};
    cell.state = RtffState::s2;
    const auto out = feed(cell, {{RtffCell::kReset, 10_ps}, {RtffCell::kToggle, 10_ps}});
    CHECK(out.empty());
    CHECK(cell.state == RtffState::s1);
  }
  SUBCASE("through the kernel, reset wire declared first") {
    Netlist nl;
    const WireId rst = nl.add_input("rst");
    const WireId in = nl.add_input("in");
    const WireId out = nl.add_wire("out");
    nl.add_cell("t", RtffCell{6_ps}, {in, rst}, {out});
    Simulator sim(nl);
    sim.schedule("in", 0_ps);
    sim.schedule("in", 10_ps);
    sim.schedule("rst", 10_ps);
    const Trace t = sim.run_until(100_ps);
    CHECK(t.count("out") == 0);
    CHECK(sim.cell_as<RtffCell>("t").state == RtffState::s1);
  }
}

TEST_CASE("mndro_apply examples") {
  MndroCell cell{3, 1_ps, 10_ps, 0};
  CHECK(mndro_apply(cell, MndroSignal::decrement) == MndroApply{0, 0});
  cell.stored = 2;
  CHECK(mndro_apply(cell, MndroSignal::clock) == MndroApply{2, 2});
  cell.stored = 3;
  CHECK(mndro_apply(cell, MndroSignal::increment) == MndroApply{3, 0});
}

TEST_CASE("M-NDRO read is idempotent and stays in bounds") {
  for (int capacity : {1, 3, 5}) {
    for (int stored = 0; stored <= capacity; ++stored) {
      for (int k = 1; k <= 5; ++k) {
        MndroCell cell{capacity, 1_ps, 10_ps, stored};
        for (int c = 0; c < k; ++c) {
          Emissions out;
          cell.on_pulse(MndroCell::kClock, SimTime::from_ps(100 * c), out);
          CHECK(out.size() == static_cast<std::size_t>(stored));
          for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].time == SimTime::from_ps(100 * c + 1 + 10 * static_cast<std::int64_t>(i)));
          }
          CHECK(cell.stored == stored);
        }
      }
    }
  }
  MndroCell cell{3, 1_ps, 10_ps, 0};
  Emissions sink;
  for (int i = 0; i < 10; ++i) cell.on_pulse(MndroCell::kIncrement, SimTime::from_ps(i), sink);
  CHECK(cell.stored == 3);
  for (int i = 0; i < 10; ++i) cell.on_pulse(MndroCell::kDecrement, SimTime::from_ps(20 + i), sink);
  CHECK(cell.stored == 0);
  CHECK(sink.empty());
}

TEST_CASE("merger passes separated pulses and swallows close ones") {
  SUBCASE("non-overlapping") {
    MergerCell m{7_ps, 10_ps, {}};
    const auto out = feed(m, {{0, 0_ps}, {1, 100_ps}});
    REQUIRE(out.size() == 2);
    CHECK(out[0].time == 7_ps);
    CHECK(out[1].time == 107_ps);
  }
  SUBCASE("within dead time") {
    MergerCell m{7_ps, 10_ps, {}};
    CHECK(feed(m, {{0, 0_ps}, {1, 2_ps}}).size() == 1);
  }
  SUBCASE("same port within dead time") {
    MergerCell m{7_ps, 10_ps, {}};
    CHECK(feed(m, {{0, 0_ps}, {0, 10_ps}}).size() == 1);
    CHECK(feed(m, {{0, 20001_fs}}).size() == 1);
  }
}

TEST_CASE("coincidence AND") {
  SUBCASE("pulses within the window fire once") {
    CoincidenceAndCell a{7_ps, 10_ps, {}};
    const auto out = feed(a, {{0, 0_ps}, {1, 3_ps}});
    REQUIRE(out.size() == 1);
    CHECK(out[0].time == 10_ps);
  }
  SUBCASE("arming expires") {
    CoincidenceAndCell a{7_ps, 10_ps, {}};
    CHECK(feed(a, {{0, 0_ps}, {1, 11_ps}}).empty());
  }
  SUBCASE("arming is consumed on fire") {
    CoincidenceAndCell a{7_ps, 10_ps, {}};
    CHECK(feed(a, {{0, 0_ps}, {1, 3_ps}, {1, 5_ps}}).size() == 1);
  }
  SUBCASE("same port never fires") {
    CoincidenceAndCell a{7_ps, 10_ps, {}};
    CHECK(feed(a, {{0, 0_ps}, {0, 1_ps}}).empty());
  }
}

TEST_CASE("property: merger + AND outputs sum to two when window equals dead time") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5000; ++trial) {
    const SimTime dead = SimTime::from_fs(1000 + static_cast<std::int64_t>(rng() % 20000));
    const SimTime t0 = SimTime::from_fs(static_cast<std::int64_t>(rng() % 100000));
    // Bias toward the boundary: gaps from 0 to 3x dead time, plus exact hits.
    SimTime gap = SimTime::from_fs(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(3 * dead.fs + 1)));
    if (trial % 10 == 0) gap = dead;
    if (trial % 10 == 1) gap = SimTime{};
    const std::size_t first = rng() % 2;
    MergerCell m{7_ps, dead, {}};
    CoincidenceAndCell a{7_ps, dead, {}};
    Emissions mo, ao;
    m.on_pulse(first, t0, mo);
    a.on_pulse(first, t0, ao);
    m.on_pulse(1 - first, t0 + gap, mo);
    a.on_pulse(1 - first, t0 + gap, ao);
    CHECK(mo.size() + ao.size() == 2);
  }
}

TEST_CASE("property: every emission is strictly later than its trigger") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const SimTime d = SimTime::from_fs(1 + static_cast<std::int64_t>(rng() % 10000));
    const SimTime now = SimTime::from_fs(static_cast<std::int64_t>(rng() % 1000000));
    std::vector<CellModel> cells{DelayCell{d},
                                 SplitterCell{d},
                                 MergerCell{d, d, {}},
                                 CoincidenceAndCell{d, d, {now - SimTime::from_fs(1), std::nullopt}},
                                 RtffCell{d, RtffState::s2, {}},
                                 MndroCell{3, d, d, 3}};
    for (auto& c : cells) {
      for (std::size_t port = 0; port < input_count(c); ++port) {
        CellModel copy = c;
        Emissions out;
        deliver(copy, port, now, out);
        for (const auto& e : out) CHECK(e.time > now);
      }
    }
  }
}
