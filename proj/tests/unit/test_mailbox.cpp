#include <atomic>
#include <thread>

#include "doctest.h"
#include "glc/mailbox.hpp"

using namespace glc;

TEST_CASE("mailbox basics") {
  Mailbox box(3, 5);
  CHECK(box.writer_id() == 5);
  CHECK(box.version() == 0);
  CHECK_FALSE(box.has_newer(0));
  CHECK(box.read().version == 0);

  box.write(Vector::Constant(3, 1.0), 10);
  CHECK(box.version() == 1);
  CHECK(box.has_newer(0));
  box.write(Vector::Constant(3, 2.0), 11);
  CHECK(box.version() == 2);
  const auto& m = box.read();
  CHECK(m.version == 2);
  CHECK(m.tag == 11);
  CHECK(m.payload == Vector::Constant(3, 2.0));
  CHECK_FALSE(box.has_newer(2));

  // Nothing new: the last message is returned again.
  const auto& again = box.read();
  CHECK(again.version == 2);
  CHECK(again.payload == Vector::Constant(3, 2.0));
}

TEST_CASE("concurrent writer and reader never observe torn or regressing messages") {
  const Index n = 2000;
  const std::uint64_t writes = 20000;
  Mailbox box(n, 0);
  std::atomic<bool> done{false};

  std::thread writer([&] {
    for (std::uint64_t k = 1; k <= writes; ++k) box.write(Vector::Constant(n, static_cast<double>(k)), k);
    done.store(true);
  });

  std::uint64_t last_version = 0;
  std::uint64_t reads = 0;
  bool torn = false, regressed = false, mismatched = false;
  while (!done.load() || box.has_newer(last_version)) {
    if (!box.has_newer(last_version)) continue;
    const auto& m = box.read();
    ++reads;
    regressed = regressed || m.version < last_version;
    last_version = m.version;
    const double v = m.payload[0];
    torn = torn || (m.payload.array() != v).any();
    mismatched = mismatched || v != static_cast<double>(m.tag) || m.tag != m.version;
  }
  writer.join();
  CHECK_FALSE(torn);
  CHECK_FALSE(regressed);
  CHECK_FALSE(mismatched);
  CHECK(last_version == writes);
  CHECK(reads >= 1);
}

TEST_CASE("doorbell wakes a waiting thread") {
  Doorbell bell;
  const auto seen = bell.value();
  std::atomic<bool> woke{false};
  std::thread t([&] {
    bell.wait(seen);
    woke.store(true);
  });
  bell.ring();
  t.join();
  CHECK(woke.load());
  CHECK(bell.value() == seen + 1);
}

TEST_CASE("stop flag") {
  StopFlag f;
  CHECK_FALSE(f.raised());
  f.raise();
  CHECK(f.raised());
  f.raise();
  CHECK(f.raised());
}
