#include "glc/mailbox.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

namespace glc {

Mailbox::Mailbox(Index size, int writer_id) : writer_id_(writer_id) {
  for (Slot& s : slots_) {
    s.msg.payload = Vector::Zero(size);
    s.checksum = checksum_of(s.msg);
  }
}

std::uint64_t Mailbox::checksum_of(const Message& m) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  mix(&m.version, sizeof(m.version));
  mix(&m.tag, sizeof(m.tag));
  mix(m.payload.data(), static_cast<std::size_t>(m.payload.size()) * sizeof(double));
  return h;
}

void Mailbox::write(const Vector& payload, std::uint64_t tag) {
  Slot& s = slots_[back_];
  s.msg.payload = payload;
  s.msg.version = ++written_;
  s.msg.tag = tag;
  s.checksum = checksum_of(s.msg);
  back_ = middle_.exchange(back_ | kFresh, std::memory_order_acq_rel) & 3u;
  published_.store(written_, std::memory_order_release);
}

const Mailbox::Message& Mailbox::read() {
  if (middle_.load(std::memory_order_acquire) & kFresh) {
    front_ = middle_.exchange(front_, std::memory_order_acq_rel) & 3u;
  }
  const Slot& s = slots_[front_];
  if (checksum_of(s.msg) != s.checksum) {
    throw std::logic_error("mailbox of writer " + std::to_string(writer_id_) + ": torn read at version " +
                           std::to_string(s.msg.version));
  }
  return s.msg;
}

}  // namespace glc
