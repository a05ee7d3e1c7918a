#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <qanneal/netlang.hpp>
#include <qanneal/network.hpp>

namespace qanneal::testing
{

inline const std::string data_dir = QANNEAL_DATA_DIR;

inline network fix_net()
{
  return parse_network( "nodes r s\nlink r s\nfix r 1\nfix s 0\n" );
}

inline network contradiction_net()
{
  return parse_network( "nodes r s\nlink r s\nfix r 0\nfix s 0\n" );
}

inline network free_link_net()
{
  return parse_network( "nodes r s\nlink r s\n" );
}

/* random k-CNF with distinct variables per clause (k capped at V) */
inline cnf_formula random_cnf( std::size_t vars, std::size_t clauses, std::size_t k, std::mt19937_64& rng )
{
  cnf_formula f;
  f.num_vars = vars;
  for ( std::size_t j = 0; j < clauses; ++j )
  {
    std::vector<int> pool;
    for ( std::size_t v = 1; v <= vars; ++v )
      pool.push_back( static_cast<int>( v ) );
    std::shuffle( pool.begin(), pool.end(), rng );
    const std::size_t width = std::min( k, vars );
    std::vector<int> clause;
    for ( std::size_t i = 0; i < width; ++i )
      clause.push_back( ( rng() & 1u ) ? pool[i] : -pool[i] );
    f.clauses.push_back( clause );
  }
  return f;
}

/* satisfying variable assignments by direct clause evaluation; bit v-1 of the mask is variable v */
inline std::vector<std::uint32_t> cnf_models( const cnf_formula& f )
{
  std::vector<std::uint32_t> out;
  for ( std::uint32_t m = 0; m < ( 1u << f.num_vars ); ++m )
  {
    bool all = true;
    for ( const auto& c : f.clauses )
    {
      bool any = false;
      for ( int lit : c )
      {
        const bool val = ( m >> ( std::abs( lit ) - 1 ) ) & 1u;
        any = any || ( lit > 0 ? val : !val );
      }
      all = all && any;
    }
    if ( all )
      out.push_back( m );
  }
  return out;
}

inline std::uint32_t variable_mask( const assignment& a, std::size_t vars )
{
  std::uint32_t m = 0;
  for ( std::size_t v = 1; v <= vars; ++v )
  {
    if ( a.bits.at( 2 * ( v - 1 ) ) )
      m |= 1u << ( v - 1 );
  }
  return m;
}

} // namespace qanneal::testing
