#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "classical.hpp"
#include "config.hpp"
#include "netlang.hpp"
#include "network.hpp"
#include "one_way.hpp"
#include "trace.hpp"
#include "two_way.hpp"

namespace qanneal
{

inline constexpr int summary_schema_version = 1;

enum class engine_kind
{
  classical,
  oneway,
  twoway
};

inline const char* to_string( engine_kind e )
{
  switch ( e )
  {
  case engine_kind::classical:
    return "classical";
  case engine_kind::oneway:
    return "oneway";
  case engine_kind::twoway:
    return "twoway";
  }
  return "unknown";
}

inline std::optional<engine_kind> parse_engine( std::string_view s )
{
  if ( s == "classical" )
    return engine_kind::classical;
  if ( s == "oneway" )
    return engine_kind::oneway;
  if ( s == "twoway" )
    return engine_kind::twoway;
  return std::nullopt;
}

struct run_options
{
  engine_config cfg;
  std::optional<std::filesystem::path> out; ///< directory receiving output files
  bool quiet = false;
};

struct run_result
{
  anneal_outcome outcome;
  relaxation_trace trace;
};

class io_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file( const std::filesystem::path& p )
{
  std::ifstream in( p, std::ios::binary );
  if ( !in )
    throw io_error( "cannot open " + p.string() );
  return { std::istreambuf_iterator<char>( in ), std::istreambuf_iterator<char>() };
}

inline void write_file( const std::filesystem::path& p, const std::string& content )
{
  if ( p.has_parent_path() )
    std::filesystem::create_directories( p.parent_path() );
  std::ofstream os( p, std::ios::binary );
  if ( !os )
    throw io_error( "cannot write " + p.string() );
  os << content;
  if ( !os )
    throw io_error( "write failed: " + p.string() );
}

/* `.cnf` files are compiled, anything else is read as a network */
inline network load_network( const std::filesystem::path& p )
{
  const auto text = read_file( p );
  if ( p.extension() == ".cnf" )
    return compile_cnf( parse_dimacs( text ) );
  return parse_network( text );
}

inline run_result run_engine( const network& net, engine_kind engine, const engine_config& cfg )
{
  rng_type rng( cfg.seed );
  run_result r;
  switch ( engine )
  {
  case engine_kind::classical:
    std::tie( r.outcome, r.trace ) = anneal( net, cfg, rng );
    break;
  case engine_kind::oneway:
    std::tie( r.trace, r.outcome ) = anneal_one_way( net, cfg, rng );
    break;
  case engine_kind::twoway:
    std::tie( r.trace, r.outcome ) = relax_two_way( net, cfg, rng );
    break;
  }
  return r;
}

inline int exit_code_for( verdict v )
{
  switch ( v )
  {
  case verdict::solved:
    return 0;
  case verdict::unsat_evidence:
  case verdict::unsat_with_confidence:
    return 2;
  case verdict::budget_exhausted:
    return 3;
  }
  return 1;
}

inline std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t( std::chrono::system_clock::now() );
  std::tm tm{};
  gmtime_r( &now, &tm );
  char buf[32];
  std::strftime( buf, sizeof( buf ), "%Y-%m-%dT%H:%M:%SZ", &tm );
  return buf;
}

inline nlohmann::ordered_json run_summary( engine_kind engine, const engine_config& cfg, const anneal_outcome& o,
                                           const std::string& trace_path )
{
  nlohmann::ordered_json j;
  j["schema_version"] = summary_schema_version;
  j["engine"] = to_string( engine );
  j["seed"] = cfg.seed;
  j["verdict"] = to_string( o.result );
  j["iterations"] = o.iterations;
  j["final_energy"] = o.final_energy;
  j["solution"] = o.solution ? nlohmann::ordered_json( o.solution->to_string() ) : nlohmann::ordered_json( nullptr );
  if ( engine == engine_kind::twoway )
    j["energy_floor"] = o.energy_floor;
  if ( engine == engine_kind::classical )
    j["confidence"] = o.confidence;
  j["trace_path"] = trace_path;
  j["timestamp"] = utc_timestamp();
  return j;
}

/*! \brief Parses and validates a network file; exit 0 iff valid. */
inline int cmd_check( const std::filesystem::path& path, std::ostream& out, std::ostream& err )
{
  try
  {
    const auto net = load_network( path );
    out << "ok: " << net.size() << " nodes, " << net.links.size() << " links, " << net.gates.size() << " gates, "
        << net.constraints.size() << " constraints\n";
    return 0;
  }
  catch ( const parse_error& e )
  {
    err << path.string() << ':' << e.line() << ':' << e.column() << ": " << e.message() << '\n';
  }
  catch ( const std::exception& e )
  {
    err << path.string() << ": " << e.what() << '\n';
  }
  return 1;
}

/*! \brief Runs one engine; writes trace.csv and summary.json into the output directory when one is given. */
inline int cmd_solve( const std::filesystem::path& path, engine_kind engine, const run_options& opts, std::ostream& out,
                      std::ostream& err )
{
  network net;
  try
  {
    net = load_network( path );
  }
  catch ( const std::exception& e )
  {
    err << path.string() << ": " << e.what() << '\n';
    return 1;
  }

  run_result r;
  try
  {
    r = run_engine( net, engine, opts.cfg );
  }
  catch ( const size_overflow& e )
  {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::string trace_path;
  try
  {
    if ( opts.out )
    {
      std::ostringstream csv;
      write_trace_csv( csv, r.trace );
      const auto tp = *opts.out / "trace.csv";
      write_file( tp, csv.str() );
      trace_path = tp.string();
      write_file( *opts.out / "summary.json", run_summary( engine, opts.cfg, r.outcome, trace_path ).dump( 2 ) + "\n" );
    }
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if ( !opts.quiet )
  {
    out << "engine: " << to_string( engine ) << "\nverdict: " << to_string( r.outcome.result ) << "\niterations: " << r.outcome.iterations
        << "\nfinal_energy: " << r.outcome.final_energy << '\n';
    if ( r.outcome.solution )
      out << "solution: " << r.outcome.solution->to_string() << '\n';
  }
  return exit_code_for( r.outcome.result );
}

struct zeno_row
{
  std::size_t n{};
  double deviation{};
  double scaled_angle{}; ///< n times the in-subspace rotation angle
};

inline std::vector<zeno_row> zeno_table( double theta, double phi, const std::vector<std::size_t>& ns )
{
  std::vector<zeno_row> rows;
  for ( auto n : ns )
  {
    const auto z = zeno_iterate( theta, phi, n );
    rows.push_back( { n, z.deviation, static_cast<double>( n ) * z.angle } );
  }
  return rows;
}

inline std::string zeno_csv( const std::vector<zeno_row>& rows )
{
  std::string s = "n,deviation,n_angle\n";
  for ( const auto& r : rows )
  {
    s += std::to_string( r.n ) + ',';
    detail::append_double( s, r.deviation );
    s += ',';
    detail::append_double( s, r.scaled_angle );
    s += '\n';
  }
  return s;
}

/*! \brief Zeno table as CSV, to `out` or to zeno.csv in the output directory. */
inline int cmd_zeno( double theta, double phi, const std::vector<std::size_t>& ns, const run_options& opts, std::ostream& out,
                     std::ostream& err )
{
  if ( ns.empty() )
  {
    err << "error: need at least one n\n";
    return 1;
  }
  try
  {
    const auto csv = zeno_csv( zeno_table( theta, phi, ns ) );
    if ( opts.out )
      write_file( *opts.out / "zeno.csv", csv );
    if ( !opts.quiet || !opts.out )
      out << csv;
    return 0;
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

struct compare_row
{
  engine_kind engine{};
  std::size_t runs{};
  std::size_t solved{};
  double median{}; ///< iterations to solution; unsolved runs count as infinite
  double q25{};
  double q75{};
};

namespace detail
{

/* nearest-rank quantile of sorted data */
inline double quantile( const std::vector<double>& sorted, double p )
{
  if ( sorted.empty() )
    return std::numeric_limits<double>::infinity();
  const auto rank = static_cast<std::size_t>( std::ceil( p * static_cast<double>( sorted.size() ) ) );
  return sorted[std::clamp<std::size_t>( rank, 1, sorted.size() ) - 1];
}

} // namespace detail

/*! \brief Hitting-time statistics per engine over `seeds` derived seeds; runs are spread over worker threads. */
inline std::vector<compare_row> compare_engines( const network& net, std::size_t seeds, const std::vector<engine_kind>& engines,
                                                 const engine_config& cfg, std::size_t workers = 0 )
{
  const std::size_t total = seeds * engines.size();
  std::vector<double> hits( total, std::numeric_limits<double>::infinity() );
  std::atomic<std::size_t> next{ 0 };
  std::vector<std::exception_ptr> errors( total );
  auto work = [&] {
    for ( std::size_t job = next++; job < total; job = next++ )
    {
      try
      {
        auto c = cfg;
        c.seed = derive_seed( cfg.seed, job % seeds );
        c.trace_stride = std::numeric_limits<std::size_t>::max();
        const auto r = run_engine( net, engines[job / seeds], c );
        if ( r.outcome.result == verdict::solved )
          hits[job] = static_cast<double>( r.outcome.iterations );
      }
      catch ( ... )
      {
        errors[job] = std::current_exception();
      }
    }
  };
  if ( workers == 0 )
    workers = std::max( 1u, std::thread::hardware_concurrency() );
  workers = std::min( workers, std::max<std::size_t>( total, 1 ) );
  std::vector<std::thread> pool;
  for ( std::size_t w = 1; w < workers; ++w )
    pool.emplace_back( work );
  work();
  for ( auto& t : pool )
    t.join();
  for ( const auto& e : errors )
  {
    if ( e )
      std::rethrow_exception( e );
  }

  std::vector<compare_row> rows;
  for ( std::size_t e = 0; e < engines.size(); ++e )
  {
    std::vector<double> h( hits.begin() + static_cast<std::ptrdiff_t>( e * seeds ), hits.begin() + static_cast<std::ptrdiff_t>( ( e + 1 ) * seeds ) );
    std::sort( h.begin(), h.end() );
    compare_row row{ engines[e], seeds, 0, 0, 0, 0 };
    row.solved = static_cast<std::size_t>( std::count_if( h.begin(), h.end(), []( double x ) { return std::isfinite( x ); } ) );
    row.median = detail::quantile( h, 0.5 );
    row.q25 = detail::quantile( h, 0.25 );
    row.q75 = detail::quantile( h, 0.75 );
    rows.push_back( row );
  }
  return rows;
}

inline std::string compare_csv( const std::vector<compare_row>& rows )
{
  std::string s = "engine,runs,solved,median_iterations,q25_iterations,q75_iterations\n";
  auto num = [&]( double x ) {
    if ( std::isfinite( x ) )
      detail::append_double( s, x );
    else
      s += "inf";
  };
  for ( const auto& r : rows )
  {
    s += std::string( to_string( r.engine ) ) + ',' + std::to_string( r.runs ) + ',' + std::to_string( r.solved ) + ',';
    num( r.median );
    s += ',';
    num( r.q25 );
    s += ',';
    num( r.q75 );
    s += '\n';
  }
  return s;
}

inline int cmd_compare( const std::filesystem::path& path, std::size_t seeds, const std::vector<engine_kind>& engines, const run_options& opts,
                        std::ostream& out, std::ostream& err )
{
  if ( seeds == 0 || engines.empty() )
  {
    err << "error: need at least one seed and one engine\n";
    return 1;
  }
  try
  {
    const auto net = load_network( path );
    const auto csv = compare_csv( compare_engines( net, seeds, engines, opts.cfg ) );
    if ( opts.out )
      write_file( *opts.out / "compare.csv", csv );
    if ( !opts.quiet || !opts.out )
      out << csv;
    return 0;
  }
  catch ( const std::exception& e )
  {
    err << path.string() << ": " << e.what() << '\n';
    return 1;
  }
}

/*! \brief DIMACS to network text. */
inline int cmd_compile( const std::filesystem::path& cnf_path, const std::filesystem::path& out_path, std::ostream& out, std::ostream& err )
{
  try
  {
    const auto net = compile_cnf( parse_dimacs( read_file( cnf_path ) ) );
    write_file( out_path, serialize_network( net ) );
    out << "wrote " << out_path.string() << " (" << net.size() << " nodes, " << net.gates.size() << " gates)\n";
    return 0;
  }
  catch ( const parse_error& e )
  {
    err << cnf_path.string() << ':' << e.line() << ':' << e.column() << ": " << e.message() << '\n';
  }
  catch ( const std::exception& e )
  {
    err << cnf_path.string() << ": " << e.what() << '\n';
  }
  return 1;
}

} // namespace qanneal
