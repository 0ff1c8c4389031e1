#pragma once

#include <cstdint>

namespace hanoi {

struct StorageBreakdown {
  std::uint64_t ws_bits = 0;     // warp_size entries of (pc, mask)
  std::uint64_t rec_bits = 0;    // warp_size - 1 entries of (pc, Bx index)
  std::uint64_t breg_bits = 0;   // nb_bregs masks
  std::uint64_t mask_bits = 0;   // waiting and finished masks
  unsigned breg_index_bits = 0;
  std::uint64_t total_bits() const { return ws_bits + rec_bits + breg_bits + mask_bits; }
  std::uint64_t total_bytes() const { return (total_bits() + 7) / 8; }
};

StorageBreakdown hanoi_storage(unsigned warp_size, unsigned nb_bregs, unsigned pc_bits);
std::uint64_t storage_bytes(unsigned warp_size, unsigned nb_bregs, unsigned pc_bits);

// Worst-case SIMT stack: 2 * warp_size - 1 entries of (pc, reconvergence pc, mask).
struct SimtStorage {
  std::uint64_t entries = 0;
  std::uint64_t entry_bits = 0;
  std::uint64_t total_bits() const { return entries * entry_bits; }
  std::uint64_t total_bytes() const { return (total_bits() + 7) / 8; }
};

SimtStorage simt_stack_storage(unsigned warp_size, unsigned pc_bits);

}  // namespace hanoi
