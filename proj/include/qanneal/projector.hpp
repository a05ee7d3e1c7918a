#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "network.hpp"
#include "state_vector.hpp"

namespace qanneal
{

enum class projector_kind
{
  link_antisymmetry,
  gate_ground
};

/*! \brief Pattern projector: keeps basis states whose support-local pattern is accepted.
 *
 * Local pattern bit k is the value of qubit `support[k]`. All projectors of
 * this kind are diagonal in the computational basis, so any two of them
 * commute.
 */
struct projector_spec
{
  projector_kind kind = projector_kind::gate_ground;
  std::vector<std::size_t> support;
  std::vector<std::uint32_t> accepted;

  std::vector<std::uint8_t> table() const
  {
    std::vector<std::uint8_t> t( std::size_t{ 1 } << support.size(), 0 );
    for ( auto p : accepted )
    {
      if ( p >= t.size() )
        throw std::invalid_argument( "projector pattern wider than its support" );
      t[p] = 1;
    }
    return t;
  }

  std::uint32_t local_pattern( std::uint64_t basis ) const noexcept
  {
    std::uint32_t pattern = 0;
    for ( std::size_t k = 0; k < support.size(); ++k )
    {
      if ( ( basis >> support[k] ) & 1u )
        pattern |= std::uint32_t{ 1 } << k;
    }
    return pattern;
  }

  bool accepts( std::uint64_t basis ) const
  {
    return std::find( accepted.begin(), accepted.end(), local_pattern( basis ) ) != accepted.end();
  }
};

/* A_rs: accepts 01 and 10 on (a, b) */
inline projector_spec link_projector( std::size_t a, std::size_t b )
{
  if ( a == b )
    throw std::invalid_argument( "link projector needs two distinct qubits" );
  return { projector_kind::link_antisymmetry, { a, b }, { 1u, 2u } };
}

inline projector_spec link_projector( const link& l ) { return link_projector( l.a, l.b ); }

inline projector_spec gate_projector( const gate& g )
{
  projector_spec p{ projector_kind::gate_ground, g.support, {} };
  const auto t = gate_table( g );
  for ( std::uint32_t i = 0; i < t.size(); ++i )
  {
    if ( t[i] )
      p.accepted.push_back( i );
  }
  return p;
}

inline projector_spec constraint_projector( const boundary_constraint& c )
{
  return { projector_kind::gate_ground, { c.node }, { c.value ? 1u : 0u } };
}

inline std::vector<projector_spec> link_projectors( const network& net )
{
  std::vector<projector_spec> out;
  for ( const auto& l : net.links )
    out.push_back( link_projector( l ) );
  return out;
}

/* gate ground projectors followed by one-qubit constraint projectors */
inline std::vector<projector_spec> gate_projectors( const network& net )
{
  std::vector<projector_spec> out;
  for ( const auto& g : net.gates )
    out.push_back( gate_projector( g ) );
  for ( const auto& c : net.constraints )
    out.push_back( constraint_projector( c ) );
  return out;
}

/*! \brief Zeroes rejected amplitudes without renormalizing. */
inline void project_in_place( const projector_spec& p, state_vector& s )
{
  for ( auto q : p.support )
  {
    if ( q >= s.num_qubits() )
      throw std::out_of_range( "projector support outside the state" );
  }
  const auto t = p.table();
  for ( std::uint64_t i = 0; i < s.dimension(); ++i )
  {
    if ( !t[p.local_pattern( i )] )
      s[i] = 0.0;
  }
}

/*! \brief Projection followed by renormalization; throws annihilated_state if nothing survives. */
inline state_vector apply_projector( const projector_spec& p, state_vector s )
{
  project_in_place( p, s );
  s.normalize();
  return s;
}

inline state_vector apply_projectors( std::span<const projector_spec> ps, state_vector s )
{
  for ( const auto& p : ps )
    project_in_place( p, s );
  s.normalize();
  return s;
}

/* product of all link projectors, one renormalization at the end */
inline state_vector apply_all_links( const network& net, state_vector s )
{
  return apply_projectors( link_projectors( net ), std::move( s ) );
}

/* product of all gate and constraint projectors, one renormalization at the end */
inline state_vector apply_all_gates( const network& net, state_vector s )
{
  return apply_projectors( gate_projectors( net ), std::move( s ) );
}

/*! \brief True iff || A P s - s || <= tol, with A, P the unnormalized link and gate projector products. */
inline bool equilibrium_check( const network& net, const state_vector& s, double tol )
{
  auto projected = s;
  for ( const auto& p : gate_projectors( net ) )
    project_in_place( p, projected );
  for ( const auto& p : link_projectors( net ) )
    project_in_place( p, projected );
  return distance( projected, s ) <= tol;
}

/*! \brief Energy operator diagonal in the computational basis. */
class diagonal_hamiltonian
{
public:
  diagonal_hamiltonian() = default;
  explicit diagonal_hamiltonian( std::size_t num_qubits ) : num_qubits_( num_qubits ), diag_( std::size_t{ 1 } << num_qubits, 0.0 ) {}

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return diag_.size(); }
  double operator[]( std::uint64_t i ) const { return diag_[i]; }
  double& operator[]( std::uint64_t i ) { return diag_[i]; }
  std::span<const double> diagonal() const noexcept { return diag_; }

  double expectation( const state_vector& s ) const
  {
    if ( s.dimension() != diag_.size() )
      throw std::invalid_argument( "hamiltonian/state dimension mismatch" );
    double e = 0.0;
    for ( std::uint64_t i = 0; i < diag_.size(); ++i )
      e += diag_[i] * s.probability( i );
    return e / s.norm_squared();
  }

  /* adds e0 |0><0| + e1 |1><1| on `qubit` */
  diagonal_hamiltonian& add_one_qubit( std::size_t qubit, double e0, double e1 )
  {
    if ( qubit >= num_qubits_ )
      throw std::out_of_range( "qubit index out of range" );
    for ( std::uint64_t i = 0; i < diag_.size(); ++i )
      diag_[i] += ( ( i >> qubit ) & 1u ) ? e1 : e0;
    return *this;
  }

  /* adds `penalty` on every basis state rejected by `p` */
  diagonal_hamiltonian& add_penalty( const projector_spec& p, double penalty )
  {
    const auto t = p.table();
    for ( std::uint64_t i = 0; i < diag_.size(); ++i )
    {
      if ( !t[p.local_pattern( i )] )
        diag_[i] += penalty;
    }
    return *this;
  }

private:
  std::size_t num_qubits_ = 0;
  std::vector<double> diag_;
};

/*! \brief Gate and constraint energies: delta_e on every basis state violating the element. */
inline diagonal_hamiltonian gate_hamiltonian( const network& net )
{
  diagonal_hamiltonian h( net.size() );
  for ( const auto& g : net.gates )
    h.add_penalty( gate_projector( g ), g.delta_e );
  for ( const auto& c : net.constraints )
    h.add_penalty( constraint_projector( c ), c.delta_e );
  return h;
}

/*! \brief Link energies at qubit level: energy_chi where the endpoints agree. */
inline diagonal_hamiltonian link_hamiltonian( const network& net )
{
  diagonal_hamiltonian h( net.size() );
  for ( const auto& l : net.links )
    h.add_penalty( link_projector( l ), l.energy_chi );
  return h;
}

} // namespace qanneal
