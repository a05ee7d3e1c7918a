#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <qanneal/density.hpp>
#include <qanneal/projector.hpp>
#include <qanneal/state_vector.hpp>

#include "test_support.hpp"

using namespace qanneal;
using namespace qanneal::testing;

namespace
{

state_vector random_state( std::size_t n, std::mt19937_64& rng )
{
  std::normal_distribution<double> g;
  std::vector<amplitude> a( std::size_t{ 1 } << n );
  for ( auto& x : a )
    x = { g( rng ), g( rng ) };
  auto s = state_vector::from_amplitudes( n, a );
  s.normalize();
  return s;
}

state_vector projected( const projector_spec& p, state_vector s )
{
  project_in_place( p, s );
  return s;
}

} // namespace

TEST( state_vector, basics )
{
  state_vector z( 3 );
  EXPECT_EQ( z.dimension(), 8u );
  EXPECT_EQ( z[0], amplitude( 1.0 ) );
  const auto u = state_vector::uniform( 2 );
  EXPECT_NEAR( u.norm(), 1.0, 1e-15 );
  EXPECT_NEAR( std::abs( inner( u, state_vector::basis( 2, 3 ) ) ), 0.5, 1e-15 );
  EXPECT_THROW( state_vector( 30 ), size_overflow );
  auto zero = state_vector::from_amplitudes( 1, { 0.0, 0.0 } );
  EXPECT_THROW( zero.normalize(), annihilated_state );
}

TEST( state_vector, single_qubit_rotation_acts_on_the_right_bit )
{
  auto s = state_vector::basis( 3, 0 );
  apply_single_qubit( s, 1, rotation_matrix( std::numbers::pi / 2 ) );
  EXPECT_NEAR( std::abs( s[2] ), 1.0, 1e-15 );
  auto r = state_vector::uniform( 3 );
  apply_single_qubit( r, 2, rotation_matrix( 0.37 ) );
  EXPECT_NEAR( r.norm(), 1.0, 1e-14 );
}

TEST( projector, link_projector_keeps_antiparallel_patterns )
{
  std::mt19937_64 rng( 1 );
  const auto s = random_state( 2, rng );
  const auto p = projected( link_projector( 0, 1 ), s );
  EXPECT_EQ( p[0], amplitude( 0.0 ) );
  EXPECT_EQ( p[3], amplitude( 0.0 ) );
  EXPECT_EQ( p[1], s[1] );
  EXPECT_EQ( p[2], s[2] );
}

TEST( projector, idempotent_and_commuting_on_random_states )
{
  std::mt19937_64 rng( 2 );
  const auto net = compile_cnf( parse_dimacs( "p cnf 3 2\n1 -2 0\n2 3 0\n" ) );
  auto all = link_projectors( net );
  for ( const auto& g : gate_projectors( net ) )
    all.push_back( g );
  for ( int t = 0; t < 20; ++t )
  {
    const auto s = random_state( net.size(), rng );
    for ( const auto& p : all )
    {
      EXPECT_LE( distance( projected( p, projected( p, s ) ), projected( p, s ) ), 1e-12 );
      for ( const auto& q : all )
        EXPECT_LE( distance( projected( p, projected( q, s ) ), projected( q, projected( p, s ) ) ), 1e-12 );
    }
  }
}

TEST( projector, equilibrium_check_accepts_solutions_only )
{
  const auto net = fix_net();
  EXPECT_TRUE( equilibrium_check( net, state_vector::basis( 2, 1 ), 1e-12 ) );
  EXPECT_FALSE( equilibrium_check( net, state_vector::basis( 2, 2 ), 1e-12 ) );
  EXPECT_FALSE( equilibrium_check( net, state_vector::uniform( 2 ), 1e-3 ) );
  const auto free = free_link_net();
  auto bell = state_vector::from_amplitudes( 2, { 0.0, std::sqrt( 0.5 ), std::sqrt( 0.5 ), 0.0 } );
  EXPECT_TRUE( equilibrium_check( free, bell, 1e-12 ) );
}

TEST( projector, gate_and_link_hamiltonians )
{
  const auto net = fix_net();
  const auto hg = gate_hamiltonian( net );
  const auto hl = link_hamiltonian( net );
  const energy_model model( net );
  for ( std::uint64_t i = 0; i < 4; ++i )
  {
    EXPECT_EQ( hg[i], model.energy_basis( i, false ) );
    EXPECT_EQ( hg[i] + hl[i], model.energy_basis( i, true ) );
  }
  EXPECT_NEAR( hg.expectation( state_vector::uniform( 2 ) ), 1.0, 1e-15 );
}

TEST( density, partial_trace_of_link_state )
{
  const double t = 0.4;
  auto s = state_vector::from_amplitudes( 2, { 0.0, std::sin( t ), std::cos( t ), 0.0 } );
  const auto r = partial_trace( s, 0 );
  const auto q = partial_trace( s, 1 );
  EXPECT_NEAR( r.p0(), std::pow( std::cos( t ), 2 ), 1e-15 );
  EXPECT_NEAR( q.p1(), std::pow( std::cos( t ), 2 ), 1e-15 );
  EXPECT_NEAR( std::abs( r.coherence() ), 0.0, 1e-15 );
  EXPECT_TRUE( r.is_valid() );

  /* product state keeps its single-qubit coherence */
  auto prod = state_vector::uniform( 2 );
  EXPECT_NEAR( partial_trace( prod, 1 ).coherence().real(), 0.5, 1e-15 );
}

TEST( density, random_phase_average_kills_coherence )
{
  rng_type rng( 5 );
  const auto avg = random_phase_average(
      []( double d ) {
        return state_vector::from_amplitudes( 1, { std::sqrt( 0.5 ), std::polar( std::sqrt( 0.5 ), d ) } );
      },
      20000, rng );
  EXPECT_NEAR( avg( 0, 0 ).real(), 0.5, 1e-12 );
  EXPECT_LT( std::abs( avg( 0, 1 ) ), 0.02 );
  EXPECT_NEAR( avg.trace().real(), 1.0, 1e-12 );
}

TEST( sampling, born_frequencies )
{
  rng_type rng( 9 );
  const auto u = state_vector::uniform( 2 );
  std::array<int, 4> counts{};
  const int draws = 10000;
  for ( int i = 0; i < draws; ++i )
    ++counts[sample_basis_index( u, rng )];
  const double sd = std::sqrt( draws * 0.25 * 0.75 );
  for ( int c : counts )
    EXPECT_LE( std::abs( c - draws / 4.0 ), 3 * sd );
  EXPECT_EQ( sample_basis_index( state_vector::basis( 3, 5 ), rng ), 5u );
}
