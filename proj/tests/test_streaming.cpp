#include <doctest.h>

#include <atomic>
#include <chrono>
#include <random>
#include <thread>

#include "slr/streaming.hpp"

using namespace slr;
using namespace std::chrono_literals;

namespace {

template <typename T>
auto counting_source(std::vector<T> items) {
  auto state = std::make_shared<std::pair<std::vector<T>, std::size_t>>(std::move(items), 0);
  return [state]() -> std::optional<T> {
    if (state->second == state->first.size()) return std::nullopt;
    return state->first[state->second++];
  };
}

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("bounded queue is FIFO and remembers its peak") {
  BoundedQueue<int> q(3);
  q.push(1);
  q.push(2);
  CHECK(q.pop() == 1);
  q.push(3);
  q.push(4);
  CHECK(q.high_water() == 3);
  CHECK(q.pop() == 2);
  CHECK(q.pop() == 3);
  CHECK(q.pop() == 4);
  CHECK_THROWS(BoundedQueue<int>(0));
}

TEST_CASE("bounded queue blocks a producer while full") {
  BoundedQueue<int> q(1);
  q.push(0);
  std::atomic<bool> pushed{false};
  std::thread producer([&] {
    q.push(1);
    pushed = true;
  });
  std::this_thread::sleep_for(30ms);
  CHECK_FALSE(pushed.load());
  CHECK(q.pop() == 0);
  producer.join();
  CHECK(pushed.load());
  CHECK(q.pop() == 1);
}

TEST_CASE("pipeline of two stages composes in order") {
  auto plus = make_stage<int>("plus", [](int x) { return x + 1; });
  auto twice = make_stage<int>("twice", [](int x) { return x * 2; });
  std::vector<int> got;
  const auto report = run_stream(counting_source(std::vector<int>{1, 2, 3}), pipeline(plus, twice),
                                 [&](std::uint64_t, int v) { got.push_back(v); });
  CHECK(got == std::vector<int>{4, 6, 8});
  CHECK(report.items_in == 3);
  CHECK(report.items_out == 3);
  CHECK(report.items_failed == 0);
}

TEST_CASE("single-stage pipeline behaves like the stage") {
  auto sq = make_stage<int>("sq", [](int x) { return x * x; });
  std::vector<int> a, b;
  run_stream(counting_source(iota(20)), sq, [&](std::uint64_t, int v) { a.push_back(v); });
  run_stream(counting_source(iota(20)), pipeline(sq), [&](std::uint64_t, int v) { b.push_back(v); });
  CHECK(a == b);
}

TEST_CASE("stages may change the payload type") {
  auto show = make_stage<int>("show", [](int x) { return std::to_string(x); });
  auto len = make_stage<std::string>("len", [](std::string s) { return s.size(); });
  std::vector<std::size_t> got;
  run_stream(counting_source(std::vector<int>{5, 50, 500}), pipeline(show, len),
             [&](std::uint64_t, std::size_t v) { got.push_back(v); });
  CHECK(got == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("ordered farm restores input order under random delays") {
  for (std::size_t width : {1u, 2u, 4u}) {
    std::atomic<std::uint32_t> salt{static_cast<std::uint32_t>(width)};
    auto slow = make_stage<int>("slow", [&salt](int x) {
      std::mt19937 rng(salt.fetch_add(7919) + static_cast<std::uint32_t>(x));
      std::this_thread::sleep_for(std::chrono::microseconds(rng() % 2000));
      return x;
    });
    std::vector<std::uint64_t> seqs;
    std::vector<int> values;
    const auto report = run_stream(counting_source(iota(100)), ordered_farm(slow, width),
                                   [&](std::uint64_t s, int v) {
                                     seqs.push_back(s);
                                     values.push_back(v);
                                   });
    CHECK(values == iota(100));
    for (std::size_t i = 0; i < seqs.size(); ++i) CHECK(seqs[i] == i);
    CHECK(report.items_out == 100);
  }
}

TEST_CASE("farm replicas run concurrently") {
  std::atomic<int> live{0}, peak{0};
  auto work = make_stage<int>("work", [&](int x) {
    const int now = ++live;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(5ms);
    --live;
    return x;
  });
  run_stream(counting_source(iota(24)), ordered_farm(work, 4), [](std::uint64_t, int) {});
  CHECK(peak.load() >= 2);
  CHECK(peak.load() <= 4);
}

TEST_CASE("farm width of zero is rejected") {
  auto id = make_stage<int>("id", [](int x) { return x; });
  CHECK_THROWS_AS(ordered_farm(id, 0), ConfigError);
}

TEST_CASE("failing items are poisoned and the rest flow on") {
  auto picky = make_stage<int>("picky", [](int x) {
    if (x % 3 == 0) throw std::runtime_error("bad item " + std::to_string(x));
    return x;
  });
  auto after = make_stage<int>("after", [](int x) { return x * 10; });
  std::vector<int> got;
  const auto report = run_stream(counting_source(iota(10)),
                                 pipeline(ordered_farm(picky, 3), after),
                                 [&](std::uint64_t, int v) { got.push_back(v); });
  CHECK(got == std::vector<int>{10, 20, 40, 50, 70, 80});
  CHECK(report.items_in == 10);
  CHECK(report.items_out + report.items_failed == report.items_in);
  REQUIRE(report.failures.size() == 4);
  CHECK(report.failures[0].seq == 0);
  CHECK(report.failures[3].seq == 9);
  CHECK(report.failures[1].message.find("bad item 3") != std::string::npos);
}

TEST_CASE("empty source yields an empty report") {
  auto id = make_stage<int>("id", [](int x) { return x; });
  int calls = 0;
  const auto report = run_stream(counting_source(std::vector<int>{}), ordered_farm(id, 2),
                                 [&](std::uint64_t, int) { ++calls; });
  CHECK(calls == 0);
  CHECK(report.items_in == 0);
  CHECK(report.items_out == 0);
  CHECK(report.items_failed == 0);
}

TEST_CASE("identity stage delivers payloads unchanged") {
  auto id = make_stage<std::string>("id", [](std::string s) { return s; });
  std::vector<std::string> in, out;
  for (int i = 0; i < 10; ++i) in.push_back("item-" + std::to_string(i));
  run_stream(counting_source(in), id, [&](std::uint64_t, std::string s) { out.push_back(s); });
  CHECK(out == in);
}

TEST_CASE("queues stay within capacity under a slow sink") {
  auto id = make_stage<int>("id", [](int x) { return x; });
  const auto report = run_stream(
      counting_source(iota(40)), pipeline(id, ordered_farm(id, 2), id),
      [](std::uint64_t, int) { std::this_thread::sleep_for(200us); }, 2);
  CHECK(report.items_out == 40);
  CHECK(report.queue_capacity == 2);
  CHECK(report.max_queue_occupancy <= 2);
  CHECK(report.max_queue_occupancy >= 1);
}

TEST_CASE("source and sink failures surface after the stream drains") {
  auto id = make_stage<int>("id", [](int x) { return x; });
  int n = 0;
  auto broken_source = [&n]() -> std::optional<int> {
    if (n == 5) throw std::runtime_error("disk gone");
    return n++;
  };
  CHECK_THROWS_AS(run_stream(broken_source, id, [](std::uint64_t, int) {}), IoError);

  int delivered = 0;
  try {
    run_stream(counting_source(iota(10)), id, [&](std::uint64_t s, int) {
      if (s == 4) throw std::runtime_error("full");
      ++delivered;
    });
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("item 4") != std::string::npos);
  }
  CHECK(delivered == 4);
}

TEST_CASE("per-stage statistics are reported") {
  auto a = make_stage<int>("first", [](int x) { return x; });
  auto b = make_stage<int>("second", [](int x) { return x; });
  const auto report = run_stream(counting_source(iota(7)), pipeline(a, ordered_farm(b, 2)),
                                 [](std::uint64_t, int) {});
  bool saw_first = false, saw_second = false;
  for (const auto& s : report.stages) {
    if (s.name == "first") saw_first = s.items == 7;
    if (s.name == "second") saw_second = s.items == 7;
  }
  CHECK(saw_first);
  CHECK(saw_second);
}
