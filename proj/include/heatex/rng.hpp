#pragma once
//! \file rng.hpp
//! Counter-based random streams (Philox4x32-10) keyed by (seed, stream id).
//!
//! Every sample index owns its own stream, so the set of draws does not
//! depend on how samples are distributed over workers.

#include <array>
#include <cstdint>
#include <limits>

namespace heatex {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

//! The bare Philox4x32 bijection with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

//---------------------------------------------------------------------------//
/*!
 * Stream of 32-bit words from Philox keyed by the 64-bit seed.
 *
 * The counter's upper half holds the stream id, the lower half counts
 * blocks, so streams never overlap for fewer than 2^64 blocks each.
 * Satisfies UniformRandomBitGenerator.
 */
class CounterStream {
 public:
  using result_type = std::uint32_t;

  CounterStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  //! Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  //! Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int next_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

//! Stream-id domains so independent consumers of one seed do not collide.
namespace stream_domain {
inline constexpr std::uint64_t kSample = 0;
inline constexpr std::uint64_t kChain = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kModel = std::uint64_t{2} << 62;
}  // namespace stream_domain

}  // namespace heatex
