#pragma once

#include <cstdint>
#include <numbers>
#include <random>

namespace qanneal
{

using rng_type = std::mt19937_64;

/* splitmix64 finalizer, used to derive independent per-run seeds */
inline std::uint64_t mix_seed( std::uint64_t x ) noexcept
{
  x += 0x9e3779b97f4a7c15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
  return x ^ ( x >> 31 );
}

inline std::uint64_t derive_seed( std::uint64_t seed, std::uint64_t index ) noexcept
{
  return mix_seed( mix_seed( seed ) ^ ( index + 0x632be59bd9b4e019ull ) );
}

inline double uniform01( rng_type& rng )
{
  return std::uniform_real_distribution<double>( 0.0, 1.0 )( rng );
}

/*! \brief Uniform angle on [0, 2pi). */
inline double uniform_phase( rng_type& rng )
{
  return 2.0 * std::numbers::pi * uniform01( rng );
}

} // namespace qanneal
