#pragma once

// A LineChannel wrapper that delivers incoming lines out of order. A pump
// thread buffers what the wrapped channel reads; read_line hands out a random
// buffered line once `batch` lines are waiting or the stream has been quiet
// for `quiet`.

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <random>
#include <thread>

#include "radfabric/mcp/transport.hpp"

namespace relay {

class ReorderingChannel final : public radfabric::mcp::LineChannel {
 public:
  ReorderingChannel(std::unique_ptr<radfabric::mcp::LineChannel> inner, std::uint64_t seed,
                    std::size_t batch = 4,
                    std::chrono::milliseconds quiet = std::chrono::milliseconds(5))
      : inner_(std::move(inner)), rng_(seed), batch_(batch), quiet_(quiet) {
    pump_ = std::thread([this] {
      while (auto line = inner_->read_line()) {
        std::lock_guard lock(mu_);
        buffer_.push_back(std::move(*line));
        last_arrival_ = std::chrono::steady_clock::now();
        cv_.notify_all();
      }
      std::lock_guard lock(mu_);
      eof_ = true;
      cv_.notify_all();
    });
  }

  ~ReorderingChannel() override {
    close();
    pump_.join();
  }

  std::optional<std::string> read_line() override {
    std::unique_lock lock(mu_);
    for (;;) {
      if (buffer_.size() >= batch_ || (eof_ && !buffer_.empty())) break;
      if (!buffer_.empty() && std::chrono::steady_clock::now() - last_arrival_ >= quiet_) break;
      if (eof_) return std::nullopt;
      cv_.wait_for(lock, quiet_);
    }
    std::uniform_int_distribution<std::size_t> pick(0, buffer_.size() - 1);
    const std::size_t i = pick(rng_);
    if (i != 0) ++reordered_;
    std::string line = std::move(buffer_[i]);
    buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(i));
    return line;
  }

  void write_line(std::string_view line) override { inner_->write_line(line); }
  void close() override { inner_->close(); }
  bool is_open() const override { return inner_->is_open(); }

  // Lines delivered ahead of an older buffered line.
  std::size_t reordered() const {
    std::lock_guard lock(mu_);
    return reordered_;
  }

 private:
  std::unique_ptr<radfabric::mcp::LineChannel> inner_;
  std::mt19937_64 rng_;
  std::size_t batch_;
  std::chrono::milliseconds quiet_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> buffer_;
  std::chrono::steady_clock::time_point last_arrival_{};
  bool eof_ = false;
  std::size_t reordered_ = 0;
  std::thread pump_;
};

}  // namespace relay
