#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qanneal/cli.hpp>

int main( int argc, char** argv )
{
  using namespace qanneal;

  CLI::App app{ "Annealing simulator for reversible Boolean networks" };
  app.require_subcommand( 1 );
  app.fallthrough();

  run_options opts;
  std::string out_dir;
  app.add_option( "--seed", opts.cfg.seed, "RNG seed" );
  app.add_option( "--max-steps", opts.cfg.max_steps, "step budget (per restart for the classical engine)" )->check( CLI::PositiveNumber );
  app.add_option( "--dt", opts.cfg.dt, "time step" )->check( CLI::PositiveNumber );
  app.add_option( "--sigma", opts.cfg.sigma, "gate relaxation rate" )->check( CLI::PositiveNumber );
  app.add_option( "--out", out_dir, "output directory" );
  bool no_bath = false;
  app.add_flag( "--no-bath", no_bath, "disable the heat bath perturbation" );
  app.add_flag( "--quiet", opts.quiet, "suppress the result summary on stdout" );

  std::string path;
  std::string engine_name = "twoway";

  auto* check = app.add_subcommand( "check", "parse and validate a network or DIMACS file" );
  check->add_option( "file", path )->required();

  auto* solve = app.add_subcommand( "solve", "run one engine on a network" );
  solve->add_option( "file", path )->required();
  solve->add_option( "-e,--engine", engine_name, "classical, oneway or twoway" )->check( CLI::IsMember( { "classical", "oneway", "twoway" } ) );

  double theta = 0.0;
  double phi = 0.785398163397448309616;
  std::vector<std::size_t> ns{ 1, 10, 100, 1000, 10000 };
  auto* zeno = app.add_subcommand( "zeno", "repeated rotate-and-project on one link" );
  zeno->add_option( "--theta", theta, "initial link angle" );
  zeno->add_option( "--phi", phi, "total rotation angle" );
  zeno->add_option( "-n", ns, "iteration counts" );

  std::size_t seeds = 20;
  std::vector<std::string> engine_names{ "classical", "oneway", "twoway" };
  auto* compare = app.add_subcommand( "compare", "hitting-time statistics across engines" );
  compare->add_option( "file", path )->required();
  compare->add_option( "--seeds", seeds, "runs per engine" )->check( CLI::PositiveNumber );
  compare->add_option( "--engines", engine_names, "engines to compare, space or comma separated" )->delimiter( ',' )->check( CLI::IsMember( { "classical", "oneway", "twoway" } ) );

  std::string net_out;
  auto* compile = app.add_subcommand( "compile", "compile DIMACS CNF into a network file" );
  compile->add_option( "cnf", path )->required();
  compile->add_option( "output", net_out )->required();

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    return app.exit( e ) == 0 ? 0 : 1;
  }

  opts.cfg.bath = !no_bath;
  if ( !out_dir.empty() )
    opts.out = out_dir;

  if ( *check )
    return cmd_check( path, std::cout, std::cerr );
  if ( *solve )
    return cmd_solve( path, *parse_engine( engine_name ), opts, std::cout, std::cerr );
  if ( *zeno )
    return cmd_zeno( theta, phi, ns, opts, std::cout, std::cerr );
  if ( *compare )
  {
    std::vector<engine_kind> engines;
    for ( const auto& e : engine_names )
      engines.push_back( *parse_engine( e ) );
    return cmd_compare( path, seeds, engines, opts, std::cout, std::cerr );
  }
  if ( *compile )
    return cmd_compile( path, net_out, std::cout, std::cerr );
  return 1;
}
