#include <gtest/gtest.h>

#include <qanneal/network.hpp>

#include "test_support.hpp"

using namespace qanneal;
using namespace qanneal::testing;

TEST( network, fix_net_energies_by_hand )
{
  const auto net = fix_net();
  /* r=1 s=0 satisfies everything; r=0 s=1 breaks both pins; 00 and 11 break the link and one pin */
  EXPECT_EQ( classical_energy( net, assignment::from_string( "10" ) ), 0.0 );
  EXPECT_EQ( classical_energy( net, assignment::from_string( "01" ) ), 2.0 );
  EXPECT_EQ( classical_energy( net, assignment::from_string( "00" ) ), 8.0 + 1.0 );
  EXPECT_EQ( classical_energy( net, assignment::from_string( "11" ) ), 8.0 + 1.0 );
}

TEST( network, enumerate_solutions_small_nets )
{
  const auto sols = enumerate_solutions( fix_net() );
  ASSERT_EQ( sols.size(), 1u );
  EXPECT_EQ( sols[0].to_string(), "10" );
  EXPECT_TRUE( enumerate_solutions( contradiction_net() ).empty() );

  const auto free = enumerate_solutions( free_link_net() );
  ASSERT_EQ( free.size(), 2u );
  EXPECT_EQ( free[0].to_string(), "01" );
  EXPECT_EQ( free[1].to_string(), "10" );
  EXPECT_EQ( enumerate_solutions( free_link_net(), 1 ).size(), 1u );
}

TEST( network, enumerate_matches_clause_oracle_on_random_cnf )
{
  std::mt19937_64 rng( 7 );
  for ( int trial = 0; trial < 40; ++trial )
  {
    const auto f = random_cnf( 4, 1 + trial % 6, 3, rng );
    const auto net = compile_cnf( f );
    const auto models = cnf_models( f );
    const auto sols = enumerate_solutions( net );
    ASSERT_EQ( sols.size(), models.size() );
    for ( const auto& s : sols )
    {
      EXPECT_TRUE( std::find( models.begin(), models.end(), variable_mask( s, 4 ) ) != models.end() );
      EXPECT_TRUE( is_solution( net, s ) );
    }
  }
}

TEST( network, enumerate_refuses_large_nets )
{
  network net;
  for ( int i = 0; i < 26; ++i )
    net.add_node( "n" + std::to_string( i ) );
  for ( std::size_t i = 0; i < 26; i += 2 )
    net.links.push_back( { i, i + 1 } );
  EXPECT_THROW( enumerate_solutions( net ), size_overflow );
}

TEST( network, assignment_string_and_basis_round_trip )
{
  const auto a = assignment::from_string( "1101" );
  EXPECT_EQ( a.basis_index(), 0b1011u );
  EXPECT_EQ( assignment::from_basis_index( a.basis_index(), 4 ), a );
  EXPECT_EQ( a.to_string(), "1101" );
  EXPECT_THROW( assignment::from_string( "12" ), std::invalid_argument );
}

TEST( network, validation_catches_structural_problems )
{
  network net;
  net.add_node( "a" );
  net.add_node( "b" );
  net.add_node( "c" );
  net.links.push_back( { 0, 1 } );
  auto rep = validate_network( net );
  ASSERT_FALSE( rep.valid() );
  EXPECT_NE( rep.to_string().find( "node c not in any link" ), std::string::npos );

  net.links.push_back( { 1, 2 } );
  rep = validate_network( net );
  EXPECT_NE( rep.to_string().find( "in more than one link" ), std::string::npos );

  auto good = fix_net();
  EXPECT_TRUE( validate_network( good ).valid() );
  good.gates.push_back( { "g", { 0, 1 }, { "011" }, 1.0 } );
  EXPECT_NE( validate_network( good ).to_string().find( "row length mismatch" ), std::string::npos );

  auto bad_energy = fix_net();
  bad_energy.constraints[0].delta_e = 0.0;
  EXPECT_FALSE( validate_network( bad_energy ).valid() );
}

TEST( network, gate_table_bit_order )
{
  /* row character k is the value of support[k] */
  gate g{ "g", { 3, 5 }, { "10" }, 1.0 };
  const auto t = gate_table( g );
  ASSERT_EQ( t.size(), 4u );
  EXPECT_EQ( t[1], 1 );
  EXPECT_EQ( t[2], 0 );
}

TEST( network, flip_delta_matches_energy_difference )
{
  const auto net = compile_cnf( parse_dimacs( "p cnf 3 2\n1 -2 3 0\n-1 2 0\n" ) );
  const energy_model model( net );
  std::mt19937_64 rng( 3 );
  std::vector<std::uint8_t> bits( net.size() );
  for ( int t = 0; t < 200; ++t )
  {
    for ( auto& b : bits )
      b = rng() & 1u;
    const std::size_t node = rng() % net.size();
    const double before = model.energy( bits );
    const double d = model.flip_delta( bits, node );
    bits[node] ^= 1u;
    EXPECT_DOUBLE_EQ( model.energy( bits ) - before, d );
  }
}
