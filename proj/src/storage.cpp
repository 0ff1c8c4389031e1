#include "hanoi/storage.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "hanoi/mask.hpp"

namespace hanoi {

StorageBreakdown hanoi_storage(unsigned warp_size, unsigned nb_bregs, unsigned pc_bits) {
  if (warp_size < kMinWarpSize || warp_size > kMaxWarpSize)
    throw std::invalid_argument("warp size must be in 2..32, got " + std::to_string(warp_size));
  if (nb_bregs == 0 || !std::has_single_bit(nb_bregs))
    throw std::invalid_argument("number of B registers must be a power of two, got " + std::to_string(nb_bregs));
  if (pc_bits == 0 || pc_bits > 64) throw std::invalid_argument("pc width must be in 1..64 bits");
  StorageBreakdown s;
  s.breg_index_bits = static_cast<unsigned>(std::countr_zero(nb_bregs));
  s.ws_bits = std::uint64_t{warp_size} * (pc_bits + warp_size);
  s.rec_bits = std::uint64_t{warp_size - 1} * (pc_bits + s.breg_index_bits);
  s.breg_bits = std::uint64_t{nb_bregs} * warp_size;
  s.mask_bits = 2ull * warp_size;
  return s;
}

std::uint64_t storage_bytes(unsigned warp_size, unsigned nb_bregs, unsigned pc_bits) {
  return hanoi_storage(warp_size, nb_bregs, pc_bits).total_bytes();
}

SimtStorage simt_stack_storage(unsigned warp_size, unsigned pc_bits) {
  if (warp_size < kMinWarpSize || warp_size > kMaxWarpSize)
    throw std::invalid_argument("warp size must be in 2..32, got " + std::to_string(warp_size));
  return {2ull * warp_size - 1, 2ull * pc_bits + warp_size};
}

}  // namespace hanoi
