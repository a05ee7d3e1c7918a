#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "config.hpp"
#include "network.hpp"
#include "projector.hpp"
#include "random.hpp"
#include "state_vector.hpp"
#include "trace.hpp"

namespace qanneal
{

using qubit_state = Eigen::Vector2cd;

/* two-qubit basis indices with r on bit 0 and s on bit 1 */
inline constexpr std::uint64_t pattern_01 = 2; ///< r = 0, s = 1
inline constexpr std::uint64_t pattern_10 = 1; ///< r = 1, s = 0

/*! \brief Link state cos(theta)|01> + sin(theta)|10> on qubits (r, s) = (0, 1). */
inline state_vector link_state( double theta )
{
  state_vector s = state_vector::basis( 2, pattern_01 );
  s[pattern_01] = std::cos( theta );
  s[pattern_10] = std::sin( theta );
  return s;
}

/* signed angle of a real-phase link state inside span{|01>, |10>} */
inline double link_angle( const state_vector& s, std::size_t r = 0, std::size_t q = 1 )
{
  const std::uint64_t i01 = std::uint64_t{ 1 } << q;
  const std::uint64_t i10 = std::uint64_t{ 1 } << r;
  return std::atan2( s[i10].real(), s[i01].real() );
}

/*! \brief R_r(phi) R_s(phi): the same real rotation on two distinct qubits. */
inline state_vector rotate_factorized( state_vector s, std::size_t r, std::size_t q, double phi )
{
  if ( r == q )
    throw std::invalid_argument( "rotate_factorized: nodes must be distinct" );
  const auto m = rotation_matrix( phi );
  apply_single_qubit( s, r, m );
  apply_single_qubit( s, q, m );
  return s;
}

struct zeno_result
{
  state_vector final_state;
  double deviation{}; ///< || final - initial ||
  double angle{};     ///< magnitude of the net rotation inside span{|01>, |10>}
};

/*! \brief n times: rotate both link qubits by phi/n, then project onto the link subspace and renormalize. */
inline zeno_result zeno_iterate( const state_vector& initial, std::size_t r, std::size_t q, double phi, std::size_t n )
{
  if ( n == 0 )
    throw std::invalid_argument( "zeno_iterate: n must be positive" );
  const auto proj = link_projector( r, q );
  const double eps = phi / static_cast<double>( n );
  const auto m = rotation_matrix( eps );
  state_vector s = initial;
  for ( std::size_t k = 0; k < n; ++k )
  {
    apply_single_qubit( s, r, m );
    apply_single_qubit( s, q, m );
    project_in_place( proj, s );
    s.normalize();
  }
  const double dev = distance( s, initial );
  const double ang = std::abs( link_angle( s, r, q ) - link_angle( initial, r, q ) );
  return { std::move( s ), dev, ang };
}

inline zeno_result zeno_iterate( double theta, double phi, std::size_t n )
{
  if ( theta < 0.0 || phi < 0.0 || theta + phi > std::numbers::pi / 2 + 1e-12 )
    throw domain_error( "zeno_iterate: need theta, phi >= 0 and theta + phi <= pi/2" );
  return zeno_iterate( link_state( theta ), 0, 1, phi, n );
}

/*! \brief |v> -> cos(a)|v> + e^{i delta} sin(a)|1-v>, extended linearly. */
inline qubit_state two_step_map( const qubit_state& v, double angle, double delta )
{
  const double c = std::cos( angle );
  const amplitude es = std::polar( std::sin( angle ), delta );
  return { c * v( 0 ) + es * v( 1 ), c * v( 1 ) + es * v( 0 ) };
}

inline Eigen::Matrix2cd two_step_matrix( double angle, double delta )
{
  const double c = std::cos( angle );
  const amplitude es = std::polar( std::sin( angle ), delta );
  Eigen::Matrix2cd m;
  m << c, es, es, c;
  return m;
}

/* gate relaxation of the s qubit with a fresh random phase */
inline qubit_state gate_relax_step( const qubit_state& s, double delta_phi, rng_type& rng )
{
  return two_step_map( s, delta_phi, uniform_phase( rng ) );
}

struct bath_step
{
  qubit_state state;
  double delta_theta{};
};

/* bath perturbation of the r qubit: random angle and random phase */
inline bath_step bath_perturb_step( const qubit_state& r, rng_type& rng )
{
  const double theta = uniform_phase( rng );
  const double delta = uniform_phase( rng );
  return { two_step_map( r, theta, delta ), theta };
}

/*! \brief Gate map on s, bath map on r, link projection, renormalization.
 *
 * From |01> this gives cos(dphi)cos(dtheta)|01> + e^{i(delta+delta')} sin(dphi)sin(dtheta)|10>.
 */
inline state_vector pair_step_one_way( const state_vector& state, std::size_t r, std::size_t q, double delta_phi, double delta_theta,
                                       double delta, double delta_prime )
{
  state_vector s = state;
  apply_single_qubit( s, q, two_step_matrix( delta_phi, delta ) );
  apply_single_qubit( s, r, two_step_matrix( delta_theta, delta_prime ) );
  project_in_place( link_projector( r, q ), s );
  s.normalize();
  return s;
}

struct one_way_pair_record
{
  state_vector state;
  double delta_phi{};
  double delta_theta{};
  double delta_pp{}; ///< delta + delta'
};

/* random version; an annihilated draw (measure zero) is redrawn */
inline one_way_pair_record pair_step_one_way( const state_vector& state, std::size_t r, std::size_t q, double delta_phi, rng_type& rng,
                                              bool bath = true )
{
  for ( int attempt = 0; attempt < 64; ++attempt )
  {
    const double theta = bath ? uniform_phase( rng ) : 0.0;
    const double delta = uniform_phase( rng );
    const double delta_p = bath ? uniform_phase( rng ) : 0.0;
    try
    {
      return { pair_step_one_way( state, r, q, delta_phi, theta, delta, delta_p ), delta_phi, theta, delta + delta_p };
    }
    catch ( const annihilated_state& )
    {
      if ( !bath )
        throw;
    }
  }
  throw annihilated_state( "pair_step_one_way: every bath draw annihilated the state" );
}

/*! \brief Ground population reached after time t under the relaxation law. */
inline double relaxation_probability( double t, double sigma )
{
  if ( sigma <= 0.0 || t < 0.0 )
    throw domain_error( "relaxation_probability: need sigma > 0 and t >= 0" );
  return -std::expm1( -sigma * t );
}

/* per-cycle gate angle whose sin^2 is the ground population gained in dt */
inline double gate_angle_for_step( double dt, double sigma )
{
  return std::asin( std::sqrt( relaxation_probability( dt, sigma ) ) );
}

using one_way_observer = std::function<void( std::size_t, const assignment& )>;

/*! \brief Links enforced by projection, gates relaxed one cycle at a time.
 *
 * The network is kept in a single basis pattern. A cycle picks a violated
 * gate or constraint, picks one of its nodes as s and its link partner as r,
 * runs the pair step on (r, s) and collapses the link by Born sampling.
 */
inline std::pair<relaxation_trace, anneal_outcome> anneal_one_way( const network& net, const engine_config& cfg, rng_type& rng,
                                                                   const one_way_observer& observer = {} )
{
  if ( cfg.max_steps == 0 || cfg.dt <= 0.0 || cfg.sigma <= 0.0 )
    throw std::invalid_argument( "anneal_one_way: budgets and rates must be positive" );
  const energy_model model( net );
  assignment a;
  if ( cfg.initial )
  {
    a = *cfg.initial;
    if ( a.size() != net.size() )
      throw std::invalid_argument( "anneal_one_way: initial assignment has the wrong length" );
  }
  else
  {
    a.bits.assign( net.size(), 0 );
    for ( const auto& l : net.links )
      a.bits[l.b] = 1;
  }
  for ( const auto& l : net.links )
  {
    if ( a.bits[l.a] == a.bits[l.b] )
      throw std::invalid_argument( "anneal_one_way: initial assignment violates a link" );
  }

  const double delta_phi = gate_angle_for_step( cfg.dt, cfg.sigma );
  const std::size_t stride = cfg.trace_stride ? cfg.trace_stride : 1;
  relaxation_trace trace;
  anneal_outcome out;

  auto record = [&]( std::size_t step, const std::vector<std::size_t>& violated ) {
    const double gate_e = model.energy( a.bits, false );
    trace.push( { step, static_cast<double>( step ) * cfg.dt, model.energy( a.bits ), gate_e, false, violated.empty() ? 1.0 : 0.0 } );
  };

  std::size_t step = 0;
  auto violated = model.violated( a.bits, false );
  record( 0, violated );
  if ( observer )
    observer( 0, a );
  while ( !violated.empty() && step < cfg.max_steps )
  {
    ++step;
    const auto& el = model.elements()[violated[std::uniform_int_distribution<std::size_t>( 0, violated.size() - 1 )( rng )]];
    const std::size_t s_node = el.support[std::uniform_int_distribution<std::size_t>( 0, el.support.size() - 1 )( rng )];
    const auto partner = net.partner( s_node );
    if ( !partner )
      throw validation_error( "anneal_one_way: node " + detail::node_label( net, s_node ) + " is not in any link" );
    const std::size_t r_node = *partner;

    /* local pair state: r on qubit 0, s on qubit 1 */
    const std::uint64_t local = ( a.bits[r_node] ? 1u : 0u ) | ( a.bits[s_node] ? 2u : 0u );
    const auto pair = pair_step_one_way( state_vector::basis( 2, local ), 0, 1, delta_phi, rng, cfg.bath );
    const auto outcome = sample_basis_index( pair.state, rng );
    a.bits[r_node] = static_cast<std::uint8_t>( outcome & 1u );
    a.bits[s_node] = static_cast<std::uint8_t>( ( outcome >> 1 ) & 1u );

    violated = model.violated( a.bits, false );
    if ( observer )
      observer( step, a );
    if ( step % stride == 0 || violated.empty() )
      record( step, violated );
  }

  out.iterations = step;
  out.final_energy = model.energy( a.bits );
  if ( violated.empty() )
  {
    out.result = verdict::solved;
    out.solution = a;
  }
  return { std::move( trace ), std::move( out ) };
}

} // namespace qanneal
