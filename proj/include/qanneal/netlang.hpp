#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "network.hpp"

namespace qanneal
{

/*! \brief CNF formula in DIMACS convention (signed 1-based literals). */
struct cnf_formula
{
  std::size_t num_vars{};
  std::vector<std::vector<int>> clauses;

  bool operator==( const cnf_formula& ) const = default;
};

namespace detail
{

struct token
{
  std::string_view text;
  std::size_t column{}; // 1-based
};

inline bool is_blank( char c ) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

/* splits one line on blanks, dropping a trailing '#' comment */
inline std::vector<token> tokenize( std::string_view line, std::size_t line_no, bool hash_comments )
{
  std::vector<token> out;
  std::size_t i = 0;
  while ( i < line.size() )
  {
    const auto c = static_cast<unsigned char>( line[i] );
    if ( hash_comments && c == '#' )
      break;
    if ( c >= 0x80 || ( c < 0x20 && !is_blank( line[i] ) ) || c == 0x7f )
      throw parse_error( line_no, i + 1, "non-ASCII or control character" );
    if ( is_blank( line[i] ) )
    {
      ++i;
      continue;
    }
    const auto start = i;
    while ( i < line.size() && !is_blank( line[i] ) && !( hash_comments && line[i] == '#' ) )
    {
      const auto d = static_cast<unsigned char>( line[i] );
      if ( d >= 0x80 || d < 0x20 || d == 0x7f )
        throw parse_error( line_no, i + 1, "non-ASCII or control character" );
      ++i;
    }
    out.push_back( { line.substr( start, i - start ), start + 1 } );
  }
  return out;
}

inline std::vector<std::string_view> split_lines( std::string_view text )
{
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while ( start <= text.size() )
  {
    const auto nl = text.find( '\n', start );
    if ( nl == std::string_view::npos )
    {
      if ( start < text.size() )
        lines.push_back( text.substr( start ) );
      break;
    }
    lines.push_back( text.substr( start, nl - start ) );
    start = nl + 1;
  }
  return lines;
}

inline bool valid_identifier( std::string_view s )
{
  if ( s.empty() )
    return false;
  for ( char c : s )
  {
    if ( c == ':' || c == '=' || c == '#' )
      return false;
  }
  return true;
}

inline double parse_energy( const token& t, std::size_t line_no )
{
  double value{};
  const auto* first = t.text.data();
  const auto* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars( first, last, value );
  if ( ec != std::errc{} || ptr != last )
    throw parse_error( line_no, t.column, "invalid number \"" + std::string( t.text ) + "\"" );
  if ( !std::isfinite( value ) || !( value > 0.0 ) )
    throw parse_error( line_no, t.column, "energy must be a positive finite number" );
  return value;
}

inline bool parse_integer( std::string_view s, long long& out )
{
  if ( s.empty() )
    return false;
  const auto* first = s.data();
  const auto* last = first + s.size();
  if ( *first == '+' )
    ++first;
  auto [ptr, ec] = std::from_chars( first, last, out );
  return ec == std::errc{} && ptr == last;
}

inline std::string format_number( double x )
{
  char buf[64];
  auto [ptr, ec] = std::to_chars( buf, buf + sizeof( buf ), x );
  return std::string( buf, ptr );
}

} // namespace detail

/*! \brief Parses the line-oriented network format.
 *
 * \verbatim
   nodes <id> <id> ...
   link <id> <id> [Echi] [Elambda]
   gate <name> <id...> : <row> <row> ... [dE=<x>]
   fix <id> <0|1> [dE=<x>]
   \endverbatim
 *
 * Throws parse_error (with position) for syntax problems, unknown node
 * references and nodes linked twice, and validation_error when the resulting
 * network fails validate_network.
 */
inline network parse_network( std::string_view text )
{
  using detail::token;
  network net;
  std::vector<bool> linked;
  std::set<std::string, std::less<>> gate_names;

  auto lookup = [&]( const token& t, std::size_t line_no ) {
    auto idx = net.index_of( t.text );
    if ( !idx )
      throw parse_error( line_no, t.column, "unknown node " + std::string( t.text ) );
    return *idx;
  };
  auto parse_de = [&]( const token& t, std::size_t line_no ) {
    if ( t.text.substr( 0, 3 ) != "dE=" )
      throw parse_error( line_no, t.column, "expected dE=<x>, got \"" + std::string( t.text ) + "\"" );
    return detail::parse_energy( { t.text.substr( 3 ), t.column + 3 }, line_no );
  };

  const auto lines = detail::split_lines( text );
  for ( std::size_t li = 0; li < lines.size(); ++li )
  {
    const auto line_no = li + 1;
    const auto toks = detail::tokenize( lines[li], line_no, true );
    if ( toks.empty() )
      continue;
    const auto& kw = toks[0];

    if ( kw.text == "nodes" )
    {
      if ( toks.size() < 2 )
        throw parse_error( line_no, kw.column, "nodes: expected at least one identifier" );
      for ( std::size_t i = 1; i < toks.size(); ++i )
      {
        if ( !detail::valid_identifier( toks[i].text ) )
          throw parse_error( line_no, toks[i].column, "invalid identifier \"" + std::string( toks[i].text ) + "\"" );
        if ( net.index_of( toks[i].text ) )
          throw parse_error( line_no, toks[i].column, "duplicate node " + std::string( toks[i].text ) );
        net.add_node( std::string( toks[i].text ) );
        linked.push_back( false );
      }
    }
    else if ( kw.text == "link" )
    {
      if ( toks.size() < 3 || toks.size() > 5 )
        throw parse_error( line_no, kw.column, "link: expected <id> <id> [Echi] [Elambda]" );
      link l;
      l.a = lookup( toks[1], line_no );
      l.b = lookup( toks[2], line_no );
      if ( l.a == l.b )
        throw parse_error( line_no, toks[2].column, "link joins node " + std::string( toks[1].text ) + " to itself" );
      for ( std::size_t i : { std::size_t{ 1 }, std::size_t{ 2 } } )
      {
        const auto idx = i == 1 ? l.a : l.b;
        if ( linked[idx] )
          throw parse_error( line_no, toks[i].column, "node " + std::string( toks[i].text ) + " already belongs to a link" );
      }
      if ( toks.size() >= 4 )
        l.energy_chi = detail::parse_energy( toks[3], line_no );
      if ( toks.size() == 5 )
        l.energy_lambda = detail::parse_energy( toks[4], line_no );
      linked[l.a] = linked[l.b] = true;
      net.links.push_back( l );
    }
    else if ( kw.text == "gate" )
    {
      if ( toks.size() < 2 || !detail::valid_identifier( toks[1].text ) )
        throw parse_error( line_no, kw.column, "gate: expected a name" );
      gate g;
      g.name = std::string( toks[1].text );
      if ( gate_names.contains( g.name ) )
        throw parse_error( line_no, toks[1].column, "duplicate gate name " + g.name );
      std::size_t i = 2;
      for ( ; i < toks.size() && toks[i].text != ":"; ++i )
        g.support.push_back( lookup( toks[i], line_no ) );
      if ( i == toks.size() )
        throw parse_error( line_no, lines[li].size() + 1, "gate " + g.name + ": missing ':'" );
      if ( g.support.empty() )
        throw parse_error( line_no, toks[i].column, "gate " + g.name + ": empty support" );
      ++i;
      for ( ; i < toks.size(); ++i )
      {
        if ( toks[i].text.starts_with( "dE=" ) )
        {
          if ( i + 1 != toks.size() )
            throw parse_error( line_no, toks[i + 1].column, "unexpected token after dE" );
          g.delta_e = parse_de( toks[i], line_no );
          break;
        }
        const auto row = toks[i].text;
        if ( row.find_first_not_of( "01" ) != std::string_view::npos )
          throw parse_error( line_no, toks[i].column, "row must be a 0/1 string" );
        if ( row.size() != g.support.size() )
          throw parse_error( line_no, toks[i].column, "row length mismatch: \"" + std::string( row ) + "\"" );
        g.satisfying_rows.emplace_back( row );
      }
      if ( g.satisfying_rows.empty() )
        throw parse_error( line_no, kw.column, "gate " + g.name + ": no satisfying rows" );
      gate_names.insert( g.name );
      net.gates.push_back( std::move( g ) );
    }
    else if ( kw.text == "fix" )
    {
      if ( toks.size() < 3 || toks.size() > 4 )
        throw parse_error( line_no, kw.column, "fix: expected <id> <0|1> [dE=<x>]" );
      boundary_constraint c;
      c.node = lookup( toks[1], line_no );
      if ( toks[2].text != "0" && toks[2].text != "1" )
        throw parse_error( line_no, toks[2].column, "fix value must be 0 or 1" );
      c.value = toks[2].text == "1";
      if ( toks.size() == 4 )
        c.delta_e = parse_de( toks[3], line_no );
      for ( const auto& other : net.constraints )
      {
        if ( other.node == c.node )
          throw parse_error( line_no, toks[1].column, "duplicate constraint on node " + std::string( toks[1].text ) );
      }
      net.constraints.push_back( c );
    }
    else
    {
      throw parse_error( line_no, kw.column, "unknown keyword \"" + std::string( kw.text ) + "\"" );
    }
  }

  const auto report = validate_network( net );
  if ( !report.valid() )
    throw validation_error( report.to_string() );
  return net;
}

/*! \brief Inverse of parse_network; energies are written in shortest round-trip form. */
inline std::string serialize_network( const network& net )
{
  std::string out;
  if ( !net.nodes.empty() )
  {
    out += "nodes";
    for ( const auto& n : net.nodes )
      out += ' ' + n.id;
    out += '\n';
  }
  for ( const auto& l : net.links )
  {
    out += "link " + net.nodes[l.a].id + ' ' + net.nodes[l.b].id + ' ' + detail::format_number( l.energy_chi ) + ' ' +
           detail::format_number( l.energy_lambda ) + '\n';
  }
  for ( const auto& g : net.gates )
  {
    out += "gate " + g.name;
    for ( auto s : g.support )
      out += ' ' + net.nodes[s].id;
    out += " :";
    for ( const auto& row : g.satisfying_rows )
      out += ' ' + row;
    out += " dE=" + detail::format_number( g.delta_e ) + '\n';
  }
  for ( const auto& c : net.constraints )
    out += "fix " + net.nodes[c.node].id + ( c.value ? " 1" : " 0" ) + " dE=" + detail::format_number( c.delta_e ) + '\n';
  return out;
}

/*! \brief DIMACS CNF subset: `c` comments, one `p cnf V C` header, 0-terminated clauses.
 *
 * A line starting with `%` ends the clause section (SATLIB convention).
 */
inline cnf_formula parse_dimacs( std::string_view text )
{
  cnf_formula f;
  bool have_header = false;
  long long declared_clauses = 0;
  std::vector<int> current;
  std::size_t current_line = 0;
  std::size_t current_col = 0;

  const auto lines = detail::split_lines( text );
  std::size_t li = 0;
  for ( ; li < lines.size(); ++li )
  {
    const auto line_no = li + 1;
    const auto toks = detail::tokenize( lines[li], line_no, false );
    if ( toks.empty() )
      continue;
    if ( toks[0].text == "c" || toks[0].text.front() == 'c' )
      continue;
    if ( toks[0].text == "%" )
      break;
    if ( toks[0].text == "p" )
    {
      if ( have_header )
        throw parse_error( line_no, toks[0].column, "duplicate header" );
      if ( toks.size() != 4 || toks[1].text != "cnf" )
        throw parse_error( line_no, toks[0].column, "malformed header, expected \"p cnf V C\"" );
      long long v = 0;
      long long c = 0;
      if ( !detail::parse_integer( toks[2].text, v ) || v < 0 || v > ( 1ll << 30 ) )
        throw parse_error( line_no, toks[2].column, "invalid variable count" );
      if ( !detail::parse_integer( toks[3].text, c ) || c < 0 || c > ( 1ll << 30 ) )
        throw parse_error( line_no, toks[3].column, "invalid clause count" );
      f.num_vars = static_cast<std::size_t>( v );
      declared_clauses = c;
      have_header = true;
      continue;
    }
    if ( !have_header )
      throw parse_error( line_no, toks[0].column, "clause before \"p cnf\" header" );
    for ( const auto& t : toks )
    {
      long long lit = 0;
      if ( !detail::parse_integer( t.text, lit ) )
        throw parse_error( line_no, t.column, "invalid literal \"" + std::string( t.text ) + "\"" );
      if ( lit == 0 )
      {
        if ( current.empty() )
          throw parse_error( line_no, t.column, "empty clause" );
        f.clauses.push_back( std::move( current ) );
        current.clear();
        continue;
      }
      if ( static_cast<unsigned long long>( std::llabs( lit ) ) > f.num_vars )
        throw parse_error( line_no, t.column, "literal out of range: " + std::string( t.text ) );
      if ( current.empty() )
      {
        current_line = line_no;
        current_col = t.column;
      }
      current.push_back( static_cast<int>( lit ) );
    }
  }
  if ( !have_header )
    throw parse_error( lines.empty() ? 1 : lines.size(), 1, "missing \"p cnf\" header" );
  if ( !current.empty() )
    throw parse_error( current_line, current_col, "missing terminator: clause not ended by 0" );
  if ( static_cast<long long>( f.clauses.size() ) != declared_clauses )
    throw parse_error( li < lines.size() ? li + 1 : std::max<std::size_t>( lines.size(), 1 ), 1,
                       "header mismatch: declared " + std::to_string( declared_clauses ) + " clauses, found " +
                           std::to_string( f.clauses.size() ) );
  return f;
}

/* node index of the positive (variable) node of 1-based variable v in a compiled network */
inline constexpr std::size_t cnf_variable_node( std::size_t v ) { return 2 * ( v - 1 ); }

/*! \brief Compiles a CNF formula into a partially constrained network.
 *
 * Variable v becomes the linked pair (x<v>, nx<v>) so the link supplies the
 * complement. Clause j becomes gate c<j> over the nodes of its literals,
 * accepting every row except all-zeros. Repeated literals are merged.
 */
inline network compile_cnf( const cnf_formula& f )
{
  for ( const auto& clause : f.clauses )
  {
    if ( clause.empty() )
      throw validation_error( "empty clause" );
    for ( int lit : clause )
    {
      if ( lit == 0 )
        throw validation_error( "zero literal inside clause" );
      if ( static_cast<std::size_t>( std::abs( lit ) ) > f.num_vars )
        throw validation_error( "literal out of range: " + std::to_string( lit ) );
    }
  }

  network net;
  for ( std::size_t v = 1; v <= f.num_vars; ++v )
  {
    net.add_node( "x" + std::to_string( v ) );
    net.add_node( "nx" + std::to_string( v ) );
    net.links.push_back( { cnf_variable_node( v ), cnf_variable_node( v ) + 1 } );
  }
  for ( std::size_t j = 0; j < f.clauses.size(); ++j )
  {
    gate g;
    g.name = "c" + std::to_string( j + 1 );
    for ( int lit : f.clauses[j] )
    {
      const auto idx = cnf_variable_node( static_cast<std::size_t>( std::abs( lit ) ) ) + ( lit < 0 ? 1 : 0 );
      if ( std::find( g.support.begin(), g.support.end(), idx ) == g.support.end() )
        g.support.push_back( idx );
    }
    const auto k = g.support.size();
    for ( std::size_t pattern = 1; pattern < ( std::size_t{ 1 } << k ); ++pattern )
    {
      std::string row( k, '0' );
      for ( std::size_t b = 0; b < k; ++b )
      {
        if ( ( pattern >> b ) & 1u )
          row[b] = '1';
      }
      g.satisfying_rows.push_back( std::move( row ) );
    }
    net.gates.push_back( std::move( g ) );
  }

  const auto report = validate_network( net );
  if ( !report.valid() )
    throw validation_error( report.to_string() );
  return net;
}

/*! \brief Values of the variable nodes x1..xV of a compiled network, as an assignment of length V. */
inline assignment project_to_variables( const assignment& a, std::size_t num_vars )
{
  assignment out;
  out.bits.resize( num_vars );
  for ( std::size_t v = 1; v <= num_vars; ++v )
    out.bits[v - 1] = a.bits.at( cnf_variable_node( v ) );
  return out;
}

/*! \brief Brute-force CNF satisfaction check. `bits[v-1]` is variable v. */
inline bool cnf_satisfied( const cnf_formula& f, const assignment& vars )
{
  for ( const auto& clause : f.clauses )
  {
    bool sat = false;
    for ( int lit : clause )
    {
      const bool value = vars.bits.at( static_cast<std::size_t>( std::abs( lit ) ) - 1 ) != 0;
      if ( ( lit > 0 ) == value )
      {
        sat = true;
        break;
      }
    }
    if ( !sat )
      return false;
  }
  return true;
}

} // namespace qanneal
