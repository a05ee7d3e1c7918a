#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace qanneal
{

inline constexpr double default_gate_energy = 1.0;
inline constexpr double default_link_chi = 8.0;
inline constexpr double default_link_lambda = 8.0;

struct node
{
  std::string id;
  std::size_t index{};

  bool operator==( const node& ) const = default;
};

/*! \brief A wire between two nodes carrying the NOT relation (r != s).
 *
 * `energy_chi` is the penalty paid when both endpoints carry the same value;
 * `energy_lambda` is the double-occupancy level of the particle picture and
 * only enters the two-particle link model.
 */
struct link
{
  std::size_t a{};
  std::size_t b{};
  double energy_chi = default_link_chi;
  double energy_lambda = default_link_lambda;

  bool operator==( const link& ) const = default;
};

/*! \brief Truth-table element. Row character k is the value of `support[k]`. */
struct gate
{
  std::string name;
  std::vector<std::size_t> support;
  std::vector<std::string> satisfying_rows;
  double delta_e = default_gate_energy;

  bool operator==( const gate& ) const = default;
};

/*! \brief One-qubit gate pinning a node to a Boolean constant. */
struct boundary_constraint
{
  std::size_t node{};
  bool value{};
  double delta_e = default_gate_energy;

  bool operator==( const boundary_constraint& ) const = default;
};

struct network
{
  std::vector<node> nodes;
  std::vector<link> links;
  std::vector<gate> gates;
  std::vector<boundary_constraint> constraints;

  bool operator==( const network& ) const = default;

  std::size_t size() const noexcept { return nodes.size(); }

  std::optional<std::size_t> index_of( std::string_view id ) const
  {
    for ( const auto& n : nodes )
    {
      if ( n.id == id )
        return n.index;
    }
    return std::nullopt;
  }

  /* link partner of a node, if the node is linked */
  std::optional<std::size_t> partner( std::size_t index ) const
  {
    for ( const auto& l : links )
    {
      if ( l.a == index )
        return l.b;
      if ( l.b == index )
        return l.a;
    }
    return std::nullopt;
  }

  void add_node( std::string id )
  {
    nodes.push_back( { std::move( id ), nodes.size() } );
  }
};

/*! \brief One Boolean per node; bit i belongs to node index i. */
struct assignment
{
  std::vector<std::uint8_t> bits;

  bool operator==( const assignment& ) const = default;
  auto operator<=>( const assignment& ) const = default;

  std::size_t size() const noexcept { return bits.size(); }

  /* node 0 is the leftmost character */
  std::string to_string() const
  {
    std::string s;
    s.reserve( bits.size() );
    for ( auto b : bits )
      s.push_back( b ? '1' : '0' );
    return s;
  }

  static assignment from_string( std::string_view s )
  {
    assignment a;
    a.bits.reserve( s.size() );
    for ( char c : s )
    {
      if ( c != '0' && c != '1' )
        throw std::invalid_argument( "assignment string must contain only 0/1" );
      a.bits.push_back( c == '1' );
    }
    return a;
  }

  /* computational-basis index with node i at bit i */
  std::uint64_t basis_index() const
  {
    std::uint64_t idx = 0;
    for ( std::size_t i = 0; i < bits.size(); ++i )
    {
      if ( bits[i] )
        idx |= std::uint64_t{ 1 } << i;
    }
    return idx;
  }

  static assignment from_basis_index( std::uint64_t idx, std::size_t num_nodes )
  {
    assignment a;
    a.bits.resize( num_nodes );
    for ( std::size_t i = 0; i < num_nodes; ++i )
      a.bits[i] = static_cast<std::uint8_t>( ( idx >> i ) & 1u );
    return a;
  }
};

struct validation_report
{
  std::vector<std::string> violations;

  bool valid() const noexcept { return violations.empty(); }

  std::string to_string() const
  {
    if ( valid() )
      return "valid";
    std::string s;
    for ( const auto& v : violations )
    {
      if ( !s.empty() )
        s += '\n';
      s += v;
    }
    return s;
  }
};

namespace detail
{

inline std::string node_label( const network& net, std::size_t index )
{
  if ( index < net.nodes.size() )
    return net.nodes[index].id;
  return "#" + std::to_string( index );
}

} // namespace detail

inline validation_report validate_network( const network& net )
{
  validation_report rep;
  auto& v = rep.violations;
  const auto n = net.nodes.size();

  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( net.nodes[i].index != i )
      v.push_back( "node " + net.nodes[i].id + " has index " + std::to_string( net.nodes[i].index ) + ", expected " + std::to_string( i ) );
    if ( net.nodes[i].id.empty() )
      v.push_back( "node " + std::to_string( i ) + " has an empty id" );
    for ( std::size_t j = 0; j < i; ++j )
    {
      if ( net.nodes[j].id == net.nodes[i].id )
        v.push_back( "duplicate node id " + net.nodes[i].id );
    }
  }

  std::vector<std::size_t> membership( n, 0 );
  for ( const auto& l : net.links )
  {
    if ( l.a >= n || l.b >= n )
    {
      v.push_back( "link references unknown node" );
      continue;
    }
    if ( l.a == l.b )
      v.push_back( "link joins node " + detail::node_label( net, l.a ) + " to itself" );
    if ( !( l.energy_chi > 0.0 ) || !( l.energy_lambda > 0.0 ) )
      v.push_back( "link " + detail::node_label( net, l.a ) + "-" + detail::node_label( net, l.b ) + " has non-positive energy" );
    ++membership[l.a];
    if ( l.b != l.a )
      ++membership[l.b];
  }
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( membership[i] == 0 )
      v.push_back( "node " + detail::node_label( net, i ) + " not in any link" );
    else if ( membership[i] > 1 )
      v.push_back( "node " + detail::node_label( net, i ) + " in more than one link" );
  }

  for ( const auto& g : net.gates )
  {
    const auto k = g.support.size();
    if ( k == 0 )
      v.push_back( "gate " + g.name + " has empty support" );
    for ( std::size_t i = 0; i < k; ++i )
    {
      if ( g.support[i] >= n )
        v.push_back( "gate " + g.name + " references unknown node" );
      for ( std::size_t j = 0; j < i; ++j )
      {
        if ( g.support[j] == g.support[i] )
          v.push_back( "gate " + g.name + " repeats node " + detail::node_label( net, g.support[i] ) );
      }
    }
    if ( k > 24 )
      v.push_back( "gate " + g.name + " support too wide" );
    if ( g.satisfying_rows.empty() )
      v.push_back( "gate " + g.name + " has no satisfying rows" );
    for ( const auto& row : g.satisfying_rows )
    {
      if ( row.size() != k )
        v.push_back( "gate " + g.name + " row length mismatch: \"" + row + "\"" );
      else if ( row.find_first_not_of( "01" ) != std::string::npos )
        v.push_back( "gate " + g.name + " row has non-binary character: \"" + row + "\"" );
    }
    if ( !( g.delta_e > 0.0 ) )
      v.push_back( "gate " + g.name + " has non-positive energy gap" );
  }

  std::vector<bool> constrained( n, false );
  for ( const auto& c : net.constraints )
  {
    if ( c.node >= n )
    {
      v.push_back( "constraint references unknown node" );
      continue;
    }
    if ( constrained[c.node] )
      v.push_back( "duplicate constraint on node " + detail::node_label( net, c.node ) );
    constrained[c.node] = true;
    if ( !( c.delta_e > 0.0 ) )
      v.push_back( "constraint on node " + detail::node_label( net, c.node ) + " has non-positive energy gap" );
  }
  return rep;
}

/*! \brief Acceptance table over the 2^k local patterns of a gate (bit k = support[k]). */
inline std::vector<std::uint8_t> gate_table( const gate& g )
{
  std::vector<std::uint8_t> table( std::size_t{ 1 } << g.support.size(), 0 );
  for ( const auto& row : g.satisfying_rows )
  {
    std::size_t pattern = 0;
    for ( std::size_t k = 0; k < row.size(); ++k )
    {
      if ( row[k] == '1' )
        pattern |= std::size_t{ 1 } << k;
    }
    table[pattern] = 1;
  }
  return table;
}

/*! \brief Network elements flattened for fast repeated energy evaluation.
 *
 * Elements are gates, constraints (as one-node gates) and links (as NOT tables
 * with penalty `energy_chi`).
 */
class energy_model
{
public:
  struct element
  {
    std::vector<std::size_t> support;
    std::vector<std::uint8_t> accepted;
    double penalty{};
    bool is_link{};
  };

  explicit energy_model( const network& net ) : num_nodes_( net.size() ), touching_( net.size() )
  {
    for ( const auto& g : net.gates )
      elements_.push_back( { g.support, gate_table( g ), g.delta_e, false } );
    for ( const auto& c : net.constraints )
    {
      std::vector<std::uint8_t> acc( 2, 0 );
      acc[c.value ? 1 : 0] = 1;
      elements_.push_back( { { c.node }, std::move( acc ), c.delta_e, false } );
    }
    for ( const auto& l : net.links )
      elements_.push_back( { { l.a, l.b }, { 0, 1, 1, 0 }, l.energy_chi, true } );

    for ( std::size_t e = 0; e < elements_.size(); ++e )
    {
      for ( auto node : elements_[e].support )
        touching_[node].push_back( e );
    }
  }

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  const std::vector<element>& elements() const noexcept { return elements_; }
  const std::vector<std::size_t>& touching( std::size_t node ) const { return touching_[node]; }

  bool satisfied( std::size_t e, std::span<const std::uint8_t> bits ) const
  {
    const auto& el = elements_[e];
    std::size_t pattern = 0;
    for ( std::size_t k = 0; k < el.support.size(); ++k )
    {
      if ( bits[el.support[k]] )
        pattern |= std::size_t{ 1 } << k;
    }
    return el.accepted[pattern] != 0;
  }

  bool satisfied_basis( std::size_t e, std::uint64_t basis ) const
  {
    const auto& el = elements_[e];
    std::size_t pattern = 0;
    for ( std::size_t k = 0; k < el.support.size(); ++k )
    {
      if ( ( basis >> el.support[k] ) & 1u )
        pattern |= std::size_t{ 1 } << k;
    }
    return el.accepted[pattern] != 0;
  }

  double energy( std::span<const std::uint8_t> bits, bool include_links = true ) const
  {
    double total = 0.0;
    for ( std::size_t e = 0; e < elements_.size(); ++e )
    {
      if ( !include_links && elements_[e].is_link )
        continue;
      if ( !satisfied( e, bits ) )
        total += elements_[e].penalty;
    }
    return total;
  }

  double energy_basis( std::uint64_t basis, bool include_links = true ) const
  {
    double total = 0.0;
    for ( std::size_t e = 0; e < elements_.size(); ++e )
    {
      if ( !include_links && elements_[e].is_link )
        continue;
      if ( !satisfied_basis( e, basis ) )
        total += elements_[e].penalty;
    }
    return total;
  }

  /* energy change caused by flipping one node; bits are restored before returning */
  double flip_delta( std::vector<std::uint8_t>& bits, std::size_t node ) const
  {
    double before = 0.0;
    double after = 0.0;
    for ( auto e : touching_[node] )
    {
      if ( !satisfied( e, bits ) )
        before += elements_[e].penalty;
    }
    bits[node] ^= 1u;
    for ( auto e : touching_[node] )
    {
      if ( !satisfied( e, bits ) )
        after += elements_[e].penalty;
    }
    bits[node] ^= 1u;
    return after - before;
  }

  /* indices of elements violated by `bits` */
  std::vector<std::size_t> violated( std::span<const std::uint8_t> bits, bool include_links = true ) const
  {
    std::vector<std::size_t> out;
    for ( std::size_t e = 0; e < elements_.size(); ++e )
    {
      if ( !include_links && elements_[e].is_link )
        continue;
      if ( !satisfied( e, bits ) )
        out.push_back( e );
    }
    return out;
  }

private:
  std::size_t num_nodes_;
  std::vector<element> elements_;
  std::vector<std::vector<std::size_t>> touching_;
};

/*! \brief Sum of penalties of every violated gate, constraint and link. Zero iff `a` is a solution. */
inline double classical_energy( const network& net, const assignment& a )
{
  if ( a.size() != net.size() )
    throw std::invalid_argument( "assignment length does not match network size" );
  return energy_model( net ).energy( a.bits );
}

inline bool is_solution( const network& net, const assignment& a )
{
  return classical_energy( net, a ) == 0.0;
}

inline constexpr std::size_t max_enumeration_nodes = 24;

/*! \brief All zero-energy assignments in lexicographic order of their bit strings, truncated at `limit`. */
inline std::vector<assignment> enumerate_solutions( const network& net, std::size_t limit = SIZE_MAX )
{
  const auto n = net.size();
  if ( n > max_enumeration_nodes )
    throw size_overflow( "enumerate_solutions: " + std::to_string( n ) + " nodes exceeds " + std::to_string( max_enumeration_nodes ) );
  energy_model model( net );
  std::vector<assignment> out;
  std::vector<std::uint8_t> bits( n );
  const std::uint64_t count = std::uint64_t{ 1 } << n;
  for ( std::uint64_t k = 0; k < count && out.size() < limit; ++k )
  {
    for ( std::size_t i = 0; i < n; ++i )
      bits[i] = static_cast<std::uint8_t>( ( k >> ( n - 1 - i ) ) & 1u );
    if ( model.energy( bits ) == 0.0 )
      out.push_back( { bits } );
  }
  return out;
}

} // namespace qanneal
