#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hanoi {

inline constexpr unsigned kMinWarpSize = 2;
inline constexpr unsigned kMaxWarpSize = 32;

class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One bit per thread of a warp. Bit i set means thread i is included.
class ThreadMask {
 public:
  ThreadMask() = default;

  explicit ThreadMask(unsigned warp_size, std::uint32_t bits = 0)
      : bits_(bits), warp_size_(warp_size) {
    if (warp_size < 1 || warp_size > kMaxWarpSize)
      throw std::invalid_argument("warp size out of range: " + std::to_string(warp_size));
    if ((bits & ~lane_bits(warp_size)) != 0)
      throw std::invalid_argument("mask has bits beyond warp size");
  }

  static ThreadMask full(unsigned warp_size) { return ThreadMask(warp_size, lane_bits(warp_size)); }
  static ThreadMask none(unsigned warp_size) { return ThreadMask(warp_size, 0); }

  static constexpr std::uint32_t lane_bits(unsigned warp_size) {
    return warp_size >= 32 ? 0xffffffffu : ((1u << warp_size) - 1u);
  }

  std::uint32_t bits() const { return bits_; }
  unsigned warp_size() const { return warp_size_; }
  unsigned count() const { return static_cast<unsigned>(std::popcount(bits_)); }
  bool empty() const { return bits_ == 0; }
  bool any() const { return bits_ != 0; }
  bool is_full() const { return bits_ == lane_bits(warp_size_); }

  bool test(unsigned lane) const { return lane < warp_size_ && ((bits_ >> lane) & 1u); }
  void set(unsigned lane) { bits_ |= bit_for(lane); }
  void reset(unsigned lane) { bits_ &= ~bit_for(lane); }

  bool subset_of(const ThreadMask& other) const { return (bits_ & ~other.bits_) == 0; }
  bool disjoint(const ThreadMask& other) const { return (bits_ & other.bits_) == 0; }

  ThreadMask operator&(const ThreadMask& o) const { return ThreadMask(warp_size_, bits_ & o.bits_); }
  ThreadMask operator|(const ThreadMask& o) const { return ThreadMask(warp_size_, bits_ | o.bits_); }
  ThreadMask operator~() const { return ThreadMask(warp_size_, ~bits_ & lane_bits(warp_size_)); }
  ThreadMask without(const ThreadMask& o) const { return ThreadMask(warp_size_, bits_ & ~o.bits_); }
  ThreadMask& operator&=(const ThreadMask& o) { bits_ &= o.bits_; return *this; }
  ThreadMask& operator|=(const ThreadMask& o) { bits_ |= o.bits_; return *this; }

  bool operator==(const ThreadMask&) const = default;

  template <typename F>
  void for_each_lane(F&& f) const {
    for (unsigned lane = 0; lane < warp_size_; ++lane)
      if (test(lane)) f(lane);
  }

  // MSB-first: the leftmost character is thread warp_size-1.
  std::string to_string() const {
    std::string s(warp_size_, '0');
    for (unsigned lane = 0; lane < warp_size_; ++lane)
      if (test(lane)) s[warp_size_ - 1 - lane] = '1';
    return s;
  }

  static ThreadMask from_string(std::string_view text, unsigned warp_size) {
    if (text.size() != warp_size)
      throw format_error("mask '" + std::string(text) + "' has length " + std::to_string(text.size()) +
                         ", expected " + std::to_string(warp_size));
    return from_string(text);
  }

  // Warp size taken from the string length.
  static ThreadMask from_string(std::string_view text) {
    if (text.empty() || text.size() > kMaxWarpSize)
      throw format_error("mask '" + std::string(text) + "' has invalid length");
    const auto ws = static_cast<unsigned>(text.size());
    std::uint32_t bits = 0;
    for (unsigned i = 0; i < ws; ++i) {
      const char c = text[i];
      if (c != '0' && c != '1')
        throw format_error("illegal character '" + std::string(1, c) + "' in mask '" + std::string(text) + "'");
      if (c == '1') bits |= 1u << (ws - 1 - i);
    }
    return ThreadMask(ws, bits);
  }

 private:
  std::uint32_t bit_for(unsigned lane) const {
    if (lane >= warp_size_) throw std::out_of_range("lane " + std::to_string(lane) + " beyond warp size");
    return 1u << lane;
  }

  std::uint32_t bits_ = 0;
  unsigned warp_size_ = 4;
};

}  // namespace hanoi
