#pragma once

#include <array>
#include <atomic>
#include <cstdint>

#include "glc/fem.hpp"

namespace glc {

/// Single-writer, single-reader latest-value cell emulating a one-sided put.
///
/// Backed by a triple buffer: the writer fills a private slot and publishes
/// it with one atomic exchange; the reader claims the most recently
/// published slot with another. Neither side ever waits for the other and a
/// read always returns a payload written whole by one write() call.
/// Each payload carries a checksum that read() verifies.
class Mailbox {
 public:
  struct Message {
    Vector payload;
    std::uint64_t version = 0;  // 0 = never written
    std::uint64_t tag = 0;      // caller-defined, e.g. the source iteration
  };

  Mailbox() : Mailbox(0, -1) {}
  Mailbox(Index size, int writer_id);
  Mailbox(const Mailbox&) = delete;
  Mailbox& operator=(const Mailbox&) = delete;

  int writer_id() const { return writer_id_; }

  /// Writer side.
  void write(const Vector& payload, std::uint64_t tag);

  /// Latest published version; safe from any thread.
  std::uint64_t version() const { return published_.load(std::memory_order_acquire); }
  bool has_newer(std::uint64_t last_seen) const { return version() > last_seen; }

  /// Reader side. Returns the newest published message (or the last one read
  /// if nothing new arrived). Throws std::logic_error on checksum mismatch.
  const Message& read();

 private:
  struct Slot {
    Message msg;
    std::uint64_t checksum = 0;
  };
  static constexpr unsigned kFresh = 4;

  static std::uint64_t checksum_of(const Message& m);

  std::array<Slot, 3> slots_;
  std::atomic<unsigned> middle_{1};
  unsigned back_ = 0;   // writer-owned
  unsigned front_ = 2;  // reader-owned
  std::uint64_t written_ = 0;
  std::atomic<std::uint64_t> published_{0};
  int writer_id_ = -1;
};

/// Monotone counter threads can block on until it moves.
class Doorbell {
 public:
  std::uint64_t value() const { return count_.load(std::memory_order_acquire); }
  void ring() {
    count_.fetch_add(1, std::memory_order_acq_rel);
    count_.notify_all();
  }
  /// Blocks while the counter still equals `seen`.
  void wait(std::uint64_t seen) const { count_.wait(seen, std::memory_order_acquire); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

/// Write-once broadcast flag.
class StopFlag {
 public:
  void raise() { flag_.store(true, std::memory_order_release); }
  bool raised() const { return flag_.load(std::memory_order_acquire); }

 private:
  std::atomic<bool> flag_{false};
};

}  // namespace glc
