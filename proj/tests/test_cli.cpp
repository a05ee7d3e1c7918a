#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <qanneal/cli.hpp>

#include "test_support.hpp"

using namespace qanneal;
using namespace qanneal::testing;
namespace fs = std::filesystem;

namespace
{

fs::path scratch( const std::string& name )
{
  auto p = fs::temp_directory_path() / ( "qanneal_cli_test_" + name );
  fs::remove_all( p );
  fs::create_directories( p );
  return p;
}

fs::path write_text( const fs::path& dir, const std::string& name, const std::string& text )
{
  const auto p = dir / name;
  write_file( p, text );
  return p;
}

} // namespace

TEST( cli, check_exit_codes )
{
  const auto dir = scratch( "check" );
  std::ostringstream out, err;
  EXPECT_EQ( cmd_check( data_dir + "/fixnet.net", out, err ), 0 );

  err.str( "" );
  EXPECT_NE( cmd_check( write_text( dir, "bad.net", "nodes a b\nlink a b\nfix a 2\n" ), out, err ), 0 );
  EXPECT_NE( err.str().find( ":3:7:" ), std::string::npos ) << err.str();

  err.str( "" );
  EXPECT_NE( cmd_check( write_text( dir, "unpaired.net", "nodes a b c\nlink a b\n" ), out, err ), 0 );
  EXPECT_NE( err.str().find( "not in any link" ), std::string::npos );

  EXPECT_NE( cmd_check( dir / "missing.net", out, err ), 0 );
}

TEST( cli, solve_exit_codes_and_outputs )
{
  const auto dir = scratch( "solve" );
  std::ostringstream out, err;
  run_options opts;
  opts.out = dir / "fix";
  EXPECT_EQ( cmd_solve( data_dir + "/fixnet.net", engine_kind::twoway, opts, out, err ), 0 );
  EXPECT_NE( out.str().find( "solution: 10" ), std::string::npos );
  const auto summary = nlohmann::json::parse( read_file( dir / "fix" / "summary.json" ) );
  EXPECT_EQ( summary["schema_version"], summary_schema_version );
  EXPECT_EQ( summary["verdict"], "solved" );
  EXPECT_EQ( summary["solution"], "10" );
  EXPECT_EQ( summary["engine"], "twoway" );
  const auto csv = read_file( dir / "fix" / "trace.csv" );
  EXPECT_EQ( csv.substr( 0, csv.find( '\n' ) ), "step,time,total_energy,gate_energy,clamped,overlap_solution" );

  opts.out.reset();
  opts.quiet = true;
  EXPECT_EQ( cmd_solve( data_dir + "/contradiction.net", engine_kind::twoway, opts, out, err ), 2 );

  opts.cfg.bath = false;
  EXPECT_EQ( cmd_solve( data_dir + "/fixnet.net", engine_kind::oneway, opts, out, err ), 3 );

  opts.cfg = engine_config{};
  opts.cfg.max_steps = 300;
  EXPECT_EQ( cmd_solve( data_dir + "/contradiction.net", engine_kind::classical, opts, out, err ), 2 );
  EXPECT_EQ( cmd_solve( dir / "nope.net", engine_kind::twoway, opts, out, err ), 1 );
  EXPECT_EQ( cmd_solve( data_dir + "/or2.cnf", engine_kind::classical, opts, out, err ), 0 );
}

TEST( cli, solve_is_byte_deterministic )
{
  const auto dir = scratch( "determinism" );
  for ( auto engine : { engine_kind::classical, engine_kind::oneway, engine_kind::twoway } )
  {
    std::ostringstream out, err;
    run_options opts;
    opts.quiet = true;
    opts.cfg.seed = 42;
    opts.out = dir / "a";
    cmd_solve( data_dir + "/or2.cnf", engine, opts, out, err );
    opts.out = dir / "b";
    cmd_solve( data_dir + "/or2.cnf", engine, opts, out, err );
    EXPECT_EQ( read_file( dir / "a" / "trace.csv" ), read_file( dir / "b" / "trace.csv" ) ) << to_string( engine );
  }
}

TEST( cli, zeno_rows )
{
  const auto rows = zeno_table( 0.0, std::numbers::pi / 4, { 1, 1000, 2000, 4000 } );
  EXPECT_NEAR( rows[0].deviation, std::sqrt( 2.0 - std::sqrt( 2.0 ) ), 1e-14 );
  /* deviation ~ phi^2 / n: doubling n halves it */
  EXPECT_NEAR( rows[2].deviation / rows[1].deviation, 0.5, 0.05 );
  EXPECT_NEAR( rows[3].deviation / rows[2].deviation, 0.5, 0.05 );
  for ( const auto& r : zeno_table( 0.0, 0.0, { 1, 10, 100 } ) )
    EXPECT_EQ( r.deviation, 0.0 );

  std::ostringstream out, err;
  run_options opts;
  EXPECT_EQ( cmd_zeno( 0.0, 0.5, { 1, 10 }, opts, out, err ), 0 );
  EXPECT_EQ( out.str().substr( 0, 19 ), "n,deviation,n_angle" );
  EXPECT_EQ( cmd_zeno( 0.0, 0.5, {}, opts, out, err ), 1 );
}

TEST( cli, compare_statistics )
{
  engine_config cfg;
  cfg.bath = false;
  cfg.max_steps = 2000;
  const auto rows = compare_engines( fix_net(), 20, { engine_kind::oneway, engine_kind::twoway }, cfg );
  ASSERT_EQ( rows.size(), 2u );
  EXPECT_EQ( rows[0].solved, 0u );
  EXPECT_EQ( rows[1].solved, 20u );
  EXPECT_LE( rows[1].median, rows[0].median );

  cfg = engine_config{};
  cfg.max_steps = 300;
  for ( const auto& r : compare_engines( contradiction_net(), 5, { engine_kind::classical, engine_kind::oneway, engine_kind::twoway }, cfg ) )
    EXPECT_EQ( r.solved, 0u );

  const auto single = compare_engines( fix_net(), 4, { engine_kind::classical }, engine_config{} );
  EXPECT_EQ( single.size(), 1u );
  const auto single_csv = compare_csv( single );
  EXPECT_EQ( std::count( single_csv.begin(), single_csv.end(), '\n' ), 2 );

  /* thread count does not change the statistics */
  const auto one = compare_engines( fix_net(), 12, { engine_kind::classical, engine_kind::oneway }, engine_config{}, 1 );
  const auto many = compare_engines( fix_net(), 12, { engine_kind::classical, engine_kind::oneway }, engine_config{}, 4 );
  EXPECT_EQ( compare_csv( one ), compare_csv( many ) );
}

TEST( cli, compile_round_trip_and_errors )
{
  const auto dir = scratch( "compile" );
  std::ostringstream out, err;
  EXPECT_EQ( cmd_compile( data_dir + "/or2.cnf", dir / "or2.net", out, err ), 0 );
  const auto net = parse_network( read_file( dir / "or2.net" ) );
  EXPECT_EQ( net, compile_cnf( parse_dimacs( read_file( data_dir + "/or2.cnf" ) ) ) );

  EXPECT_EQ( cmd_compile( write_text( dir, "bad.cnf", "p cnf 2 1\n1 5 0\n" ), dir / "bad.net", out, err ), 1 );
  EXPECT_EQ( cmd_compile( write_text( dir, "contra.cnf", "p cnf 1 2\n1 0\n-1 0\n" ), dir / "contra.net", out, err ), 0 );
}
