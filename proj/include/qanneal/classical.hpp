#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "network.hpp"
#include "random.hpp"
#include "trace.hpp"

namespace qanneal
{

/*! \brief Metropolis single-bit-flip annealing with restarts.
 *
 * Each restart begins from a uniformly random assignment and proposes
 * cfg.max_steps flips. With no solution after cfg.restarts restarts the
 * verdict is unsat_with_confidence when 1 - (1 - p)^restarts reaches the
 * configured threshold, p being the assumed per-restart success rate.
 * Trace steps count proposals across restarts.
 */
inline std::pair<anneal_outcome, relaxation_trace> anneal( const network& net, const engine_config& cfg, rng_type& rng )
{
  if ( !( cfg.temperature > 0.0 ) || cfg.max_steps == 0 || cfg.restarts == 0 )
    throw std::invalid_argument( "anneal: temperature, budget and restarts must be positive" );
  if ( !( cfg.cooling > 0.0 ) || cfg.cooling > 1.0 )
    throw std::invalid_argument( "anneal: cooling factor must lie in (0, 1]" );

  const energy_model model( net );
  const std::size_t n = net.size();
  const std::size_t stride = cfg.trace_stride ? cfg.trace_stride : 1;
  anneal_outcome out;
  relaxation_trace trace;

  std::vector<std::uint8_t> bits( n );
  auto count_violated = [&]( std::size_t node ) {
    std::size_t c = 0;
    for ( auto e : model.touching( node ) )
      c += !model.satisfied( e, bits );
    return c;
  };

  std::size_t step = 0;
  for ( std::size_t restart = 0; restart < cfg.restarts; ++restart )
  {
    for ( auto& b : bits )
      b = static_cast<std::uint8_t>( rng() & 1u );
    std::size_t violations = model.violated( bits ).size();
    double energy = model.energy( bits );
    double temperature = cfg.temperature;
    trace.push( { step, static_cast<double>( step ), energy, model.energy( bits, false ), false, violations == 0 ? 1.0 : 0.0 } );

    for ( std::size_t k = 0; k < cfg.max_steps && violations != 0 && n != 0; ++k )
    {
      ++step;
      const std::size_t node = std::uniform_int_distribution<std::size_t>( 0, n - 1 )( rng );
      const double delta = model.flip_delta( bits, node );
      const double u = uniform01( rng );
      if ( delta <= 0.0 || u < std::exp( -delta / temperature ) )
      {
        const std::size_t before = count_violated( node );
        bits[node] ^= 1u;
        violations = violations + count_violated( node ) - before;
        energy += delta;
      }
      temperature *= cfg.cooling;
      if ( step % stride == 0 || violations == 0 )
        trace.push( { step, static_cast<double>( step ), energy, model.energy( bits, false ), false, violations == 0 ? 1.0 : 0.0 } );
    }

    if ( violations == 0 )
    {
      out.result = verdict::solved;
      out.solution = assignment{ bits };
      if ( !is_solution( net, *out.solution ) )
        throw std::logic_error( "anneal: solved verdict without a solution" );
      out.iterations = step;
      out.final_energy = 0.0;
      return { std::move( out ), std::move( trace ) };
    }
    out.final_energy = model.energy( bits );
  }

  out.iterations = step;
  out.confidence = 1.0 - std::pow( 1.0 - cfg.assumed_per_restart_success, static_cast<double>( cfg.restarts ) );
  out.result = out.confidence >= cfg.confidence_threshold ? verdict::unsat_with_confidence : verdict::budget_exhausted;
  return { std::move( out ), std::move( trace ) };
}

struct frustration_report
{
  std::size_t strict_local_minima{};
  std::size_t non_global_minima{}; ///< strict local minima above the global minimum
  double global_min_energy{};
  std::vector<assignment> minima; ///< first `minima_limit` strict local minima, node 0 most significant
};

inline constexpr std::size_t max_frustration_nodes = 20;

/*! \brief Exhaustive scan for strict local minima of the classical energy under single-bit flips. */
inline frustration_report frustration_profile( const network& net, std::size_t minima_limit = 1024 )
{
  const std::size_t n = net.size();
  if ( n > max_frustration_nodes )
    throw size_overflow( "frustration_profile: " + std::to_string( n ) + " nodes exceeds " + std::to_string( max_frustration_nodes ) );
  const energy_model model( net );
  const std::uint64_t count = std::uint64_t{ 1 } << n;
  std::vector<double> energy( count );
  for ( std::uint64_t i = 0; i < count; ++i )
    energy[i] = model.energy_basis( i );

  frustration_report rep;
  rep.global_min_energy = count ? energy[0] : 0.0;
  for ( auto e : energy )
    rep.global_min_energy = std::min( rep.global_min_energy, e );

  /* visit in lexicographic order of the bit string (node 0 leftmost) */
  for ( std::uint64_t k = 0; k < count; ++k )
  {
    std::uint64_t i = 0;
    for ( std::size_t b = 0; b < n; ++b )
    {
      if ( ( k >> ( n - 1 - b ) ) & 1u )
        i |= std::uint64_t{ 1 } << b;
    }
    bool strict = true;
    for ( std::size_t b = 0; b < n && strict; ++b )
      strict = energy[i ^ ( std::uint64_t{ 1 } << b )] > energy[i];
    if ( !strict )
      continue;
    ++rep.strict_local_minima;
    if ( energy[i] > rep.global_min_energy )
      ++rep.non_global_minima;
    if ( rep.minima.size() < minima_limit )
      rep.minima.push_back( assignment::from_basis_index( i, n ) );
  }
  return rep;
}

} // namespace qanneal
