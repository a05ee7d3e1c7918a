#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "density.hpp"
#include "network.hpp"
#include "one_way.hpp"
#include "projector.hpp"
#include "random.hpp"
#include "state_vector.hpp"
#include "trace.hpp"

namespace qanneal
{

/*! \brief What the state after a two-way step must satisfy. */
struct final_conditions
{
  std::vector<projector_spec> required;
  diagonal_hamiltonian hamiltonian;
  double target_energy{};
  double tolerance = 1e-10;
};

struct tw_step_report
{
  state_vector before;
  state_vector after;
  double overlap{}; ///< |<before|after>|, before taken normalized
  double achieved_energy{};
  bool clamped{};
  double energy_floor{}; ///< minimum energy inside the constrained subspace
};

/*! \brief Basis states accepted by every required projector, with their energies. */
struct reduction_space
{
  std::size_t num_qubits{};
  std::vector<std::uint64_t> indices;
  std::vector<double> energies;
  double min_energy{};
  double max_energy{};

  reduction_space() = default;

  reduction_space( std::span<const projector_spec> required, const diagonal_hamiltonian& h ) : num_qubits( h.num_qubits() )
  {
    std::vector<std::vector<std::uint8_t>> tables;
    for ( const auto& p : required )
    {
      for ( auto q : p.support )
      {
        if ( q >= num_qubits )
          throw std::out_of_range( "projector support outside the state" );
      }
      tables.push_back( p.table() );
    }
    for ( std::uint64_t i = 0; i < h.dimension(); ++i )
    {
      bool ok = true;
      for ( std::size_t k = 0; k < required.size() && ok; ++k )
        ok = tables[k][required[k].local_pattern( i )] != 0;
      if ( ok )
      {
        indices.push_back( i );
        energies.push_back( h[i] );
      }
    }
    if ( indices.empty() )
      throw no_solution( "the required projectors have no common fixed state" );
    min_energy = *std::min_element( energies.begin(), energies.end() );
    max_energy = *std::max_element( energies.begin(), energies.end() );
  }
};

namespace detail
{

inline bool same_level( double a, double b )
{
  return std::abs( a - b ) <= 1e-12 * std::max( { 1.0, std::abs( a ), std::abs( b ) } );
}

/* b projected onto the level `e`; uniform over the level when b has no weight there */
inline std::vector<amplitude> level_state( std::span<const amplitude> b, std::span<const double> h, double e )
{
  std::vector<amplitude> x( b.size(), 0.0 );
  double w = 0.0;
  std::size_t count = 0;
  for ( std::size_t i = 0; i < b.size(); ++i )
  {
    if ( same_level( h[i], e ) )
    {
      x[i] = b[i];
      w += std::norm( b[i] );
      ++count;
    }
  }
  if ( w <= annihilation_threshold * annihilation_threshold )
  {
    for ( std::size_t i = 0; i < b.size(); ++i )
      x[i] = same_level( h[i], e ) ? amplitude( 1.0 / std::sqrt( static_cast<double>( count ) ) ) : amplitude( 0.0 );
    return x;
  }
  const double inv = 1.0 / std::sqrt( w );
  for ( auto& a : x )
    a *= inv;
  return x;
}

/*
 * Maximize |<b|x>| over unit x with <x|h|x> = target, for e0 < target < <b|h|b>.
 * Stationary points are x ~ b / (h - e0 + s) with s > 0; the energy F(s) of
 * that vector increases with s, so s is found by bisection.
 */
inline std::vector<amplitude> descend_to( std::span<const amplitude> b, std::span<const double> h, double e0, double target )
{
  const std::size_t n = b.size();
  double w_floor = 0.0;
  double scale = 0.0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    scale = std::max( scale, h[i] - e0 );
    if ( same_level( h[i], e0 ) )
      w_floor += std::norm( b[i] );
  }
  auto gap = [&]( std::size_t i ) { return same_level( h[i], e0 ) ? 0.0 : h[i] - e0; };

  if ( w_floor == 0.0 )
  {
    /* limit s -> 0 of F(s); below it the optimum mixes in the empty floor states */
    double num = 0.0, den = 0.0, first = 0.0;
    for ( std::size_t i = 0; i < n; ++i )
    {
      const double d = gap( i );
      if ( d == 0.0 )
        continue;
      const double w = std::norm( b[i] );
      num += w * d / ( d * d );
      den += w / ( d * d );
      first += w / d;
    }
    const double e_star = e0 + num / den;
    if ( target <= e_star )
    {
      const double c2 = ( target - e0 ) / first;
      const double w2 = std::max( 0.0, 1.0 - c2 * den );
      const double c = std::sqrt( c2 );
      std::size_t floor_count = 0;
      for ( std::size_t i = 0; i < n; ++i )
        floor_count += gap( i ) == 0.0;
      const double wf = std::sqrt( w2 / static_cast<double>( floor_count ) );
      std::vector<amplitude> x( n );
      for ( std::size_t i = 0; i < n; ++i )
      {
        const double d = gap( i );
        x[i] = d == 0.0 ? amplitude( wf ) : c * b[i] / d;
      }
      return x;
    }
  }

  auto energy_at = [&]( double s ) {
    double num = 0.0, den = 0.0;
    for ( std::size_t i = 0; i < n; ++i )
    {
      const double w = std::norm( b[i] );
      if ( w == 0.0 )
        continue;
      const double g = gap( i ) + s;
      num += w * ( h[i] - e0 ) / ( g * g );
      den += w / ( g * g );
    }
    return e0 + num / den;
  };

  const double base = scale > 0.0 ? scale : 1.0;
  double lo = std::log( base * 1e-18 );
  double hi = std::log( base * 1e18 );
  for ( int it = 0; it < 200; ++it )
  {
    const double mid = 0.5 * ( lo + hi );
    if ( energy_at( std::exp( mid ) ) < target )
      lo = mid;
    else
      hi = mid;
  }
  const double s = std::exp( 0.5 * ( lo + hi ) );
  std::vector<amplitude> x( n );
  double norm2 = 0.0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    x[i] = b[i] / ( gap( i ) + s );
    norm2 += std::norm( x[i] );
  }
  const double inv = 1.0 / std::sqrt( norm2 );
  for ( auto& a : x )
    a *= inv;
  return x;
}

} // namespace detail

/*! \brief Two-way reduction over a precomputed constrained subspace.
 *
 * The after-state is the normalized vector inside the subspace with the
 * requested energy and maximal overlap with `before`. Targets outside the
 * subspace spectrum are clamped to its nearest edge.
 */
inline tw_step_report tw_reduce( const state_vector& before, const reduction_space& space, double target_energy, double tolerance )
{
  if ( before.num_qubits() != space.num_qubits )
    throw std::invalid_argument( "tw_reduce: state and subspace sizes differ" );
  if ( !( tolerance > 0.0 ) )
    throw std::invalid_argument( "tw_reduce: tolerance must be positive" );

  const std::size_t n = space.indices.size();
  std::vector<amplitude> b( n );
  double w = 0.0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    b[i] = before[space.indices[i]];
    w += std::norm( b[i] );
  }
  if ( !( std::sqrt( w ) >= annihilation_threshold ) )
    throw annihilated_state( "tw_reduce: state has no component in the constrained subspace" );
  const double inv = 1.0 / std::sqrt( w );
  double e_b = 0.0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    b[i] *= inv;
    e_b += std::norm( b[i] ) * space.energies[i];
  }

  tw_step_report rep;
  rep.before = before;
  rep.energy_floor = space.min_energy;

  std::vector<amplitude> x;
  if ( target_energy <= space.min_energy + tolerance )
  {
    rep.clamped = target_energy < space.min_energy - tolerance;
    x = detail::level_state( b, space.energies, space.min_energy );
  }
  else if ( target_energy >= space.max_energy - tolerance )
  {
    rep.clamped = target_energy > space.max_energy + tolerance;
    x = detail::level_state( b, space.energies, space.max_energy );
  }
  else if ( std::abs( target_energy - e_b ) <= tolerance )
  {
    x = b;
  }
  else if ( target_energy < e_b )
  {
    x = detail::descend_to( b, space.energies, space.min_energy, target_energy );
  }
  else
  {
    std::vector<double> neg( space.energies.size() );
    std::transform( space.energies.begin(), space.energies.end(), neg.begin(), []( double e ) { return -e; } );
    x = detail::descend_to( b, neg, -space.max_energy, -target_energy );
  }

  state_vector after = state_vector::from_amplitudes( before.num_qubits(), std::vector<amplitude>( before.dimension(), 0.0 ) );
  double energy = 0.0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    after[space.indices[i]] = x[i];
    energy += std::norm( x[i] ) * space.energies[i];
  }
  after.normalize();
  rep.achieved_energy = energy / after.norm_squared();
  rep.overlap = std::abs( inner( before, after ) ) / before.norm();
  rep.after = std::move( after );
  return rep;
}

inline tw_step_report tw_reduce( const state_vector& before, const final_conditions& fc )
{
  return tw_reduce( before, reduction_space( fc.required, fc.hamiltonian ), fc.target_energy, fc.tolerance );
}

/*! \brief Link state fixed by A_rs whose one-qubit populations match the targets, closest to `before`.
 *
 * Unknowns are the pattern probabilities q; each density condition is a
 * linear equation in q. A missing condition leaves a one-parameter family,
 * resolved by maximizing the overlap with `before`.
 */
inline state_vector solve_link_conditions( const state_vector& before, const std::optional<reduced_density>& target_r,
                                           const std::optional<reduced_density>& target_s )
{
  if ( before.num_qubits() != 2 )
    throw std::invalid_argument( "solve_link_conditions: expects a two-qubit link state" );
  for ( const auto* t : { &target_r, &target_s } )
  {
    if ( *t && std::abs( ( *t )->coherence() ) > 1e-12 )
      throw no_solution( "a link-projected state has diagonal one-qubit densities" );
  }

  /* pattern index = r + 2 s */
  std::vector<Eigen::RowVector4d> rows;
  std::vector<double> rhs;
  rows.push_back( { 1, 0, 0, 0 } );
  rhs.push_back( 0.0 );
  rows.push_back( { 0, 0, 0, 1 } );
  rhs.push_back( 0.0 );
  rows.push_back( { 1, 1, 1, 1 } );
  rhs.push_back( 1.0 );
  if ( target_r )
  {
    rows.push_back( { 0, 1, 0, 1 } );
    rhs.push_back( target_r->p1() );
  }
  if ( target_s )
  {
    rows.push_back( { 0, 0, 1, 1 } );
    rhs.push_back( target_s->p1() );
  }
  Eigen::MatrixXd a( rows.size(), 4 );
  Eigen::VectorXd y( rows.size() );
  for ( std::size_t i = 0; i < rows.size(); ++i )
  {
    a.row( static_cast<Eigen::Index>( i ) ) = rows[i];
    y( static_cast<Eigen::Index>( i ) ) = rhs[i];
  }

  /* Solve on an independent subset, density rows before the unit-sum row: a
     least-squares blend of redundant rows leaves ~1e-17 in probabilities that
     should vanish, which the square root inflates to ~1e-8 in amplitudes. */
  std::vector<Eigen::Index> order{ 0, 1 };
  for ( Eigen::Index i = 3; i < a.rows(); ++i )
    order.push_back( i );
  order.push_back( 2 );
  Eigen::MatrixXd sub( 0, 4 );
  Eigen::VectorXd sub_y( 0 );
  for ( auto i : order )
  {
    Eigen::MatrixXd trial( sub.rows() + 1, 4 );
    trial << sub, a.row( i );
    if ( Eigen::FullPivLU<Eigen::MatrixXd>( trial ).rank() > sub.rows() )
    {
      sub = trial;
      sub_y.conservativeResize( sub_y.size() + 1 );
      sub_y( sub_y.size() - 1 ) = y( i );
    }
  }
  Eigen::Vector4d q = Eigen::FullPivLU<Eigen::MatrixXd>( sub ).solve( sub_y );
  if ( ( a * q - y ).norm() > 1e-10 )
    throw no_solution( "inconsistent density conditions" );

  std::array<double, 4> mag;
  for ( int i = 0; i < 4; ++i )
    mag[i] = std::abs( before[i] );

  const Eigen::FullPivLU<Eigen::MatrixXd> lu( a );
  const Eigen::MatrixXd kernel = lu.kernel();
  if ( lu.dimensionOfKernel() == 1 )
  {
    const Eigen::Vector4d k = kernel.col( 0 );
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for ( int i = 0; i < 4; ++i )
    {
      if ( std::abs( k( i ) ) < 1e-14 )
        continue;
      const double bound = -q( i ) / k( i );
      if ( k( i ) > 0 )
        lo = std::max( lo, bound );
      else
        hi = std::min( hi, bound );
    }
    if ( lo > hi + 1e-12 )
      throw no_solution( "density conditions force a negative probability" );
    auto overlap = [&]( double t ) {
      double o = 0.0;
      for ( int i = 0; i < 4; ++i )
        o += mag[i] * std::sqrt( std::max( 0.0, q( i ) + t * k( i ) ) );
      return o;
    };
    /* the overlap is concave in t: golden section */
    const double g = ( std::sqrt( 5.0 ) - 1.0 ) / 2.0;
    double x1 = hi - g * ( hi - lo ), x2 = lo + g * ( hi - lo );
    double f1 = overlap( x1 ), f2 = overlap( x2 );
    for ( int it = 0; it < 200 && hi - lo > 1e-16; ++it )
    {
      if ( f1 < f2 )
      {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * ( hi - lo );
        f2 = overlap( x2 );
      }
      else
      {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * ( hi - lo );
        f1 = overlap( x1 );
      }
    }
    q += 0.5 * ( lo + hi ) * k;
  }
  else if ( lu.dimensionOfKernel() > 1 )
    throw no_solution( "underdetermined link conditions" );

  std::vector<amplitude> amps( 4, 0.0 );
  for ( int i = 0; i < 4; ++i )
  {
    if ( q( i ) < -1e-10 )
      throw no_solution( "density conditions force a negative probability" );
    const double m = std::sqrt( std::max( 0.0, q( i ) ) );
    amps[i] = mag[i] > 0.0 ? m * before[i] / mag[i] : amplitude( m );
  }
  auto out = state_vector::from_amplitudes( 2, std::move( amps ) );
  out.normalize();
  return out;
}

/*! \brief Link state after rotating the link of angle theta by phi, from the simultaneous conditions. */
inline state_vector solve_link_system( double theta, double phi, bool use_r = true, bool use_s = true )
{
  if ( theta < 0.0 || phi < 0.0 || theta + phi > std::numbers::pi / 2 + 1e-12 )
    throw domain_error( "solve_link_system: need theta, phi >= 0 and theta + phi <= pi/2" );
  const double c2 = std::pow( std::cos( theta + phi ), 2 );
  const double s2 = std::pow( std::sin( theta + phi ), 2 );
  std::optional<reduced_density> tr, ts;
  if ( use_r )
    tr = reduced_density::diagonal( c2, s2 );
  if ( use_s )
    ts = reduced_density::diagonal( s2, c2 );
  return solve_link_conditions( link_state( theta ), tr, ts );
}

/*! \brief Root in [0, pi/2] of E_s cos^2 x + E_r cos 2x = E_s cos^2(dphi) + E_r cos 2(dtheta), by bisection. */
inline double energy_balance_root( double e_s, double e_r, double delta_phi, double delta_theta )
{
  if ( !( e_s > 0.0 ) || e_r < 0.0 )
    throw domain_error( "energy_balance_root: need E_s > 0 and E_r >= 0" );
  if ( delta_phi < 0.0 || delta_phi > std::numbers::pi / 2 )
    throw domain_error( "energy_balance_root: delta_phi outside [0, pi/2]" );
  if ( e_r == 0.0 )
    return delta_phi;
  const double rhs = e_s * std::pow( std::cos( delta_phi ), 2 ) + e_r * std::cos( 2.0 * delta_theta );
  auto f = [&]( double x ) { return e_s * std::pow( std::cos( x ), 2 ) + e_r * std::cos( 2.0 * x ) - rhs; };
  double lo = 0.0, hi = std::numbers::pi / 2;
  double flo = f( lo ), fhi = f( hi );
  if ( flo < 0.0 || fhi > 0.0 )
    throw domain_error( "energy_balance_root: no root in [0, pi/2]" );
  /* f is decreasing on the interval */
  for ( int it = 0; it < 200 && hi - lo > 0.0; ++it )
  {
    const double mid = 0.5 * ( lo + hi );
    if ( mid == lo || mid == hi )
      break;
    if ( f( mid ) > 0.0 )
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * ( lo + hi );
}

struct two_way_pair_record
{
  state_vector state;
  tw_step_report report;
  double delta_theta{};
  double delta_phi_prime{};
};

/*! \brief Two-way step of one link (r on qubit 0, s on qubit 1).
 *
 * The link angle advances by the energy-balance root; the bath enters only
 * through the energy it exchanges, so E_r = 0 still relaxes.
 */
inline two_way_pair_record pair_step_two_way( const state_vector& state, double e_s, double e_r, double delta_phi, rng_type& rng,
                                              bool pure_rotation = false )
{
  if ( state.num_qubits() != 2 )
    throw std::invalid_argument( "pair_step_two_way: expects a two-qubit link state" );
  if ( std::norm( state[0] ) + std::norm( state[3] ) > 1e-20 * state.norm_squared() )
    throw std::invalid_argument( "pair_step_two_way: state must satisfy the link projector" );
  const double theta = uniform_phase( rng );
  const double phase = pure_rotation ? 0.0 : uniform_phase( rng );
  const double dphi = energy_balance_root( e_s, e_r, delta_phi, theta );
  const double alpha = std::atan2( std::abs( state[pattern_10] ), std::abs( state[pattern_01] ) );
  const double angle = std::min( alpha + dphi, std::numbers::pi / 2 );

  state_vector after = state_vector::basis( 2, pattern_01 );
  after[pattern_01] = std::cos( angle );
  after[pattern_10] = std::polar( std::sin( angle ), phase );

  two_way_pair_record rec{ after, {}, theta, dphi };
  rec.report.before = state;
  rec.report.after = after;
  rec.report.overlap = std::abs( inner( state, after ) ) / state.norm();
  rec.report.achieved_energy = e_s * std::pow( std::cos( dphi ), 2 ) + e_r * std::cos( 2.0 * dphi );
  rec.report.clamped = alpha + dphi > std::numbers::pi / 2;
  return rec;
}

/*! \brief Basis outcome drawn with Born probabilities. */
inline assignment measure_assignment( const state_vector& s, rng_type& rng )
{
  return assignment::from_basis_index( sample_basis_index( s, rng ), s.num_qubits() );
}

/*! \brief Network relaxation under two-way propagation.
 *
 * Starts from the link-projected uniform superposition. Each gate relaxes
 * independently, so the target energy decays as sum_g e_g(0) exp(-sigma t);
 * every step is one tw_reduce inside the link subspace.
 */
inline std::pair<relaxation_trace, anneal_outcome> relax_two_way( const network& net, const engine_config& cfg, rng_type& rng )
{
  if ( net.size() > cfg.max_qubits )
    throw size_overflow( "relax_two_way: " + std::to_string( net.size() ) + " nodes exceeds the limit of " + std::to_string( cfg.max_qubits ) );
  if ( cfg.max_steps == 0 || cfg.dt <= 0.0 || cfg.sigma <= 0.0 )
    throw std::invalid_argument( "relax_two_way: budgets and rates must be positive" );

  const auto links = link_projectors( net );
  const auto h_gate = gate_hamiltonian( net );
  const auto h_link = link_hamiltonian( net );
  const reduction_space space( links, h_gate );

  double gap_sum = 0.0;
  for ( const auto& g : net.gates )
    gap_sum += g.delta_e;
  for ( const auto& c : net.constraints )
    gap_sum += c.delta_e;
  const double tol = cfg.energy_tol_rel * std::max( gap_sum, 1.0 );

  state_vector psi = apply_all_links( net, state_vector::uniform( net.size() ) );

  /* e_g(0) = delta_e * P(g violated); their sum is the gate energy of psi */
  const double e0 = h_gate.expectation( psi );

  auto solution_mass = [&]( const state_vector& s ) {
    double m = 0.0;
    for ( std::size_t i = 0; i < space.indices.size(); ++i )
    {
      if ( space.energies[i] == 0.0 )
        m += s.probability( space.indices[i] );
    }
    return m;
  };

  const std::size_t stride = cfg.trace_stride ? cfg.trace_stride : 1;
  relaxation_trace trace;
  anneal_outcome out;
  out.energy_floor = space.min_energy;
  trace.push( { 0, 0.0, e0 + h_link.expectation( psi ), e0, false, solution_mass( psi ) } );

  std::size_t plateau = 0;
  std::size_t step = 0;
  bool done = false;
  double energy = e0;
  while ( step < cfg.max_steps )
  {
    if ( equilibrium_check( net, psi, cfg.equilibrium_tol ) )
    {
      out.result = verdict::solved;
      done = true;
      break;
    }
    ++step;
    const double t = static_cast<double>( step ) * cfg.dt;
    const double target = e0 * std::exp( -cfg.sigma * t );
    auto rep = tw_reduce( psi, space, target, tol );
    psi = std::move( rep.after );
    energy = rep.achieved_energy;
    plateau = rep.clamped ? plateau + 1 : 0;

    const bool unsat = plateau >= cfg.plateau_steps && rep.energy_floor > tol;
    if ( step % stride == 0 || unsat )
      trace.push( { step, t, energy + h_link.expectation( psi ), energy, rep.clamped, solution_mass( psi ) } );
    if ( unsat )
    {
      out.result = verdict::unsat_evidence;
      done = true;
      break;
    }
  }
  if ( !done && equilibrium_check( net, psi, cfg.equilibrium_tol ) )
    out.result = verdict::solved;

  if ( out.result == verdict::solved )
  {
    if ( trace.back().step != step )
      trace.push( { step, static_cast<double>( step ) * cfg.dt, energy + h_link.expectation( psi ), energy, false, solution_mass( psi ) } );
    auto projected = apply_all_gates( net, apply_all_links( net, psi ) );
    out.solution = measure_assignment( projected, rng );
    if ( !is_solution( net, *out.solution ) )
      throw std::logic_error( "relax_two_way: measured a non-solution from an equilibrium state" );
  }
  out.iterations = step;
  out.final_energy = energy + h_link.expectation( psi );
  return { std::move( trace ), std::move( out ) };
}

} // namespace qanneal
