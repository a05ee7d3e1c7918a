#include <gtest/gtest.h>

#include <random>
#include <string>

#include <qanneal/netlang.hpp>

#include "test_support.hpp"

using namespace qanneal;
using namespace qanneal::testing;

TEST( netlang, parses_all_statement_kinds )
{
  const auto net = parse_network( "# comment\n"
                                  "nodes a b c d\n"
                                  "link a b 4 6   # trailing comment\n"
                                  "link c d\n"
                                  "gate and a c : 11 dE=2.5\n"
                                  "fix d 0 dE=3\n" );
  ASSERT_EQ( net.size(), 4u );
  EXPECT_EQ( net.links[0].energy_chi, 4.0 );
  EXPECT_EQ( net.links[0].energy_lambda, 6.0 );
  EXPECT_EQ( net.links[1].energy_chi, 8.0 );
  ASSERT_EQ( net.gates.size(), 1u );
  EXPECT_EQ( net.gates[0].support, ( std::vector<std::size_t>{ 0, 2 } ) );
  EXPECT_EQ( net.gates[0].delta_e, 2.5 );
  ASSERT_EQ( net.constraints.size(), 1u );
  EXPECT_EQ( net.constraints[0].node, 3u );
  EXPECT_FALSE( net.constraints[0].value );
  EXPECT_EQ( net.constraints[0].delta_e, 3.0 );
}

TEST( netlang, serialize_round_trips )
{
  const auto net = parse_network( "nodes a b c d\nlink a b 0.1 7\nlink c d\ngate x a b c : 001 110 dE=0.3\nfix a 1\n" );
  const auto text = serialize_network( net );
  EXPECT_EQ( parse_network( text ), net );
  EXPECT_EQ( serialize_network( parse_network( text ) ), text );
}

TEST( netlang, syntax_errors_carry_position )
{
  try
  {
    parse_network( "nodes a b\nlink a zz\n" );
    FAIL() << "expected parse_error";
  }
  catch ( const parse_error& e )
  {
    EXPECT_EQ( e.line(), 2u );
    EXPECT_EQ( e.column(), 8u );
    EXPECT_NE( e.message().find( "unknown node" ), std::string::npos );
  }
  try
  {
    parse_network( "nodes a b c d\nlink a b\nlink b c\n" );
    FAIL() << "expected parse_error";
  }
  catch ( const parse_error& e )
  {
    EXPECT_EQ( e.line(), 3u );
    EXPECT_NE( e.message().find( "already belongs to a link" ), std::string::npos );
  }
  EXPECT_THROW( parse_network( "nodes a b\nlink a b\ngate g a b : 1\n" ), parse_error );
  EXPECT_THROW( parse_network( "nodes a b\nlink a b\nfix a 0\nfix a 1\n" ), parse_error );
  EXPECT_THROW( parse_network( "nodes a b\nlink a b\nwire a b\n" ), parse_error );
  EXPECT_THROW( parse_network( "nodes a \xc3\xa9\n" ), parse_error );
}

TEST( netlang, unpaired_node_is_a_validation_error )
{
  EXPECT_THROW( parse_network( "nodes a b c\nlink a b\n" ), validation_error );
}

TEST( netlang, dimacs_basics_and_errors )
{
  const auto f = parse_dimacs( "c example\np cnf 3 2\n1 -3 0\n2 3\n-1 0\n%\n0\n" );
  EXPECT_EQ( f.num_vars, 3u );
  ASSERT_EQ( f.clauses.size(), 2u );
  EXPECT_EQ( f.clauses[1], ( std::vector<int>{ 2, 3, -1 } ) );

  auto message_of = []( const char* text ) {
    try
    {
      parse_dimacs( text );
    }
    catch ( const parse_error& e )
    {
      return e.message();
    }
    return std::string();
  };
  EXPECT_NE( message_of( "1 2 0\n" ).find( "header" ), std::string::npos );
  EXPECT_NE( message_of( "p cnf 2 1\np cnf 2 1\n1 0\n" ).find( "duplicate header" ), std::string::npos );
  EXPECT_NE( message_of( "p cnf 2 1\n3 0\n" ).find( "literal out of range" ), std::string::npos );
  EXPECT_NE( message_of( "p cnf 2 1\n1 2\n" ).find( "missing terminator" ), std::string::npos );
  EXPECT_NE( message_of( "p cnf 2 2\n1 0\n" ).find( "mismatch" ), std::string::npos );
  EXPECT_NE( message_of( "p cnf 2 1\n0\n" ).find( "empty clause" ), std::string::npos );
}

TEST( netlang, compile_or2 )
{
  const auto net = compile_cnf( parse_dimacs( "p cnf 2 1\n1 2 0\n" ) );
  ASSERT_EQ( net.size(), 4u );
  EXPECT_EQ( net.nodes[0].id, "x1" );
  EXPECT_EQ( net.nodes[1].id, "nx1" );
  ASSERT_EQ( net.gates.size(), 1u );
  EXPECT_EQ( net.gates[0].satisfying_rows, ( std::vector<std::string>{ "10", "01", "11" } ) );
  EXPECT_EQ( enumerate_solutions( net ).size(), 3u );
  EXPECT_EQ( parse_network( serialize_network( net ) ), net );
}

TEST( netlang, compile_contradiction_is_fine )
{
  const auto net = compile_cnf( parse_dimacs( "p cnf 1 2\n1 0\n-1 0\n" ) );
  EXPECT_TRUE( validate_network( net ).valid() );
  EXPECT_TRUE( enumerate_solutions( net ).empty() );
}

TEST( netlang, compiled_models_match_clause_evaluation )
{
  std::mt19937_64 rng( 11 );
  for ( int t = 0; t < 50; ++t )
  {
    const auto f = random_cnf( 3, 1 + t % 5, 1 + t % 3, rng );
    const auto net = compile_cnf( f );
    for ( const auto& s : enumerate_solutions( net ) )
      EXPECT_TRUE( cnf_satisfied( f, project_to_variables( s, 3 ) ) );
    EXPECT_EQ( enumerate_solutions( net ).size(), cnf_models( f ).size() );
  }
}

/* mutated inputs must either parse or fail with a typed error, never anything else */
TEST( netlang, fuzz_mutations_fail_cleanly )
{
  const std::string seeds[] = { "nodes a b c d\nlink a b 2 3\nlink c d\ngate g a c : 01 10 dE=2\nfix b 1\n",
                                "c hi\np cnf 3 2\n1 -2 0\n2 3 -1 0\n" };
  const std::string alphabet = "abcd01:=#- \n\tpcnfxlinkgatefixnodesdE.%\x01\xff";
  std::mt19937_64 rng( 1234 );
  for ( int it = 0; it < 4000; ++it )
  {
    std::string s = seeds[it % 2];
    const int edits = 1 + static_cast<int>( rng() % 4 );
    for ( int e = 0; e < edits; ++e )
    {
      const std::size_t pos = rng() % ( s.size() + 1 );
      switch ( rng() % 3 )
      {
      case 0:
        s.insert( s.begin() + static_cast<long>( pos ), alphabet[rng() % alphabet.size()] );
        break;
      case 1:
        if ( pos < s.size() )
          s.erase( pos, 1 );
        break;
      default:
        if ( pos < s.size() )
          s[pos] = alphabet[rng() % alphabet.size()];
      }
    }
    try
    {
      if ( it % 2 )
        compile_cnf( parse_dimacs( s ) );
      else
        parse_network( s );
    }
    catch ( const parse_error& )
    {
    }
    catch ( const validation_error& )
    {
    }
    catch ( const std::exception& e )
    {
      FAIL() << "unexpected exception " << e.what() << " on input:\n" << s;
    }
  }
}
