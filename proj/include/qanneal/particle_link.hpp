#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "state_vector.hpp"

namespace qanneal
{

/*! \brief Two labeled fermions of one link in the particle-label representation.
 *
 * The 16 amplitudes span spin (chi1, chi2) x site (lambda1, lambda2), where
 * site 0 is node r and site 1 is node s. Flat index is
 * `8*chi1 + 4*chi2 + 2*lambda1 + lambda2`.
 *
 * H_lambda costs `energy_lambda` when both particles sit on the same site;
 * H_chi costs `energy_chi` when both spins are parallel. Both are diagonal in
 * this product basis and commute.
 */
struct particle_link_state
{
  std::array<amplitude, 16> amps{};
  double energy_chi = 8.0;
  double energy_lambda = 8.0;

  static constexpr std::size_t index( int chi1, int chi2, int site1, int site2 ) noexcept
  {
    return static_cast<std::size_t>( 8 * chi1 + 4 * chi2 + 2 * site1 + site2 );
  }

  amplitude& at( int chi1, int chi2, int site1, int site2 ) { return amps[index( chi1, chi2, site1, site2 )]; }
  const amplitude& at( int chi1, int chi2, int site1, int site2 ) const { return amps[index( chi1, chi2, site1, site2 )]; }

  double norm_squared() const noexcept
  {
    double n = 0.0;
    for ( const auto& a : amps )
      n += std::norm( a );
    return n;
  }

  void normalize()
  {
    const double n = std::sqrt( norm_squared() );
    if ( !( n >= annihilation_threshold ) )
      throw annihilated_state( "particle link state annihilated" );
    for ( auto& a : amps )
      a /= n;
  }
};

inline amplitude inner( const particle_link_state& a, const particle_link_state& b )
{
  amplitude s = 0.0;
  for ( std::size_t i = 0; i < 16; ++i )
    s += std::conj( a.amps[i] ) * b.amps[i];
  return s;
}

inline double distance( const particle_link_state& a, const particle_link_state& b )
{
  double s = 0.0;
  for ( std::size_t i = 0; i < 16; ++i )
    s += std::norm( a.amps[i] - b.amps[i] );
  return std::sqrt( s );
}

/*! \brief Particle exchange P12: swaps both attributes of particles 1 and 2. */
inline particle_link_state exchange_particles( const particle_link_state& p )
{
  particle_link_state out = p;
  for ( int c1 = 0; c1 < 2; ++c1 )
    for ( int c2 = 0; c2 < 2; ++c2 )
      for ( int l1 = 0; l1 < 2; ++l1 )
        for ( int l2 = 0; l2 < 2; ++l2 )
          out.at( c1, c2, l1, l2 ) = p.at( c2, c1, l2, l1 );
  return out;
}

/*! \brief A12 = (1 - P12)/2 followed by renormalization. */
inline particle_link_state antisymmetrize_particles( const particle_link_state& p )
{
  const auto swapped = exchange_particles( p );
  particle_link_state out = p;
  for ( std::size_t i = 0; i < 16; ++i )
    out.amps[i] = 0.5 * ( p.amps[i] - swapped.amps[i] );
  out.normalize();
  return out;
}

/* diagonal of H_lambda + H_chi at a flat index */
inline double link_energy_level( const particle_link_state& p, std::size_t i )
{
  const int chi1 = static_cast<int>( ( i >> 3 ) & 1u );
  const int chi2 = static_cast<int>( ( i >> 2 ) & 1u );
  const int site1 = static_cast<int>( ( i >> 1 ) & 1u );
  const int site2 = static_cast<int>( i & 1u );
  double e = 0.0;
  if ( site1 == site2 )
    e += p.energy_lambda;
  if ( chi1 == chi2 )
    e += p.energy_chi;
  return e;
}

/*! \brief <L> = <H_lambda + H_chi> in the normalized state. */
inline double link_energy_expect( const particle_link_state& p )
{
  double e = 0.0;
  for ( std::size_t i = 0; i < 16; ++i )
    e += link_energy_level( p, i ) * std::norm( p.amps[i] );
  return e / p.norm_squared();
}

/* <L> of H_lambda alone */
inline double site_energy_expect( const particle_link_state& p )
{
  double e = 0.0;
  for ( std::size_t i = 0; i < 16; ++i )
  {
    const bool same_site = ( ( i >> 1 ) & 1u ) == ( i & 1u );
    if ( same_site )
      e += p.energy_lambda * std::norm( p.amps[i] );
  }
  return e / p.norm_squared();
}

inline bool is_antisymmetric( const particle_link_state& p, double tol = 1e-12 )
{
  const auto swapped = exchange_particles( p );
  double err = 0.0;
  for ( std::size_t i = 0; i < 16; ++i )
    err += std::norm( p.amps[i] + swapped.amps[i] );
  return std::sqrt( err ) <= tol;
}

/* how the qubit patterns |00>, |11> are realized in the particle picture */
enum class parallel_kind
{
  excited_antisymmetric, ///< antisymmetric site part, energy energy_chi
  symmetric_bad          ///< symmetric site part, violates A12
};

/*! \brief Particle-picture vector of qubit pattern |a>_r |b>_s (phase convention delta = 0).
 *
 * Antiparallel patterns and `excited_antisymmetric` parallel patterns use
 * (|a r>_1 |b s>_2 - |b s>_1 |a r>_2)/sqrt2; `symmetric_bad` uses the + sign.
 */
inline particle_link_state particle_pattern( int a, int b, parallel_kind kind = parallel_kind::excited_antisymmetric, double energy_chi = 8.0,
                                             double energy_lambda = 8.0 )
{
  particle_link_state p;
  p.energy_chi = energy_chi;
  p.energy_lambda = energy_lambda;
  const double h = 1.0 / std::sqrt( 2.0 );
  const double sign = ( a == b && kind == parallel_kind::symmetric_bad ) ? 1.0 : -1.0;
  p.at( a, b, 0, 1 ) += h;
  p.at( b, a, 1, 0 ) += sign * h;
  return p;
}

struct link_ground_basis
{
  particle_link_state psi_minus; ///< spin singlet, symmetric site part
  particle_link_state psi_plus;  ///< antiparallel spin triplet, antisymmetric site part
};

/*! \brief Degenerate ground pair of H_lambda + H_chi:
 * |psi>_-+ = 1/2 (|0>_1|1>_2 -+ |1>_1|0>_2)(|r>_1|s>_2 +- |s>_1|r>_2).
 *
 * Before returning, checks that the four antisymmetric states annihilated by
 * H_lambda have zero site energy, that H_chi lifts the two parallel-spin ones
 * to energy_chi, and that both returned states are antisymmetric with <L> = 0.
 * A failed check throws std::logic_error.
 */
inline link_ground_basis build_link_ground_basis( double energy_chi, double energy_lambda )
{
  if ( !( energy_chi > 0.0 ) || !( energy_lambda > 0.0 ) )
    throw std::invalid_argument( "link energies must be positive" );
  constexpr double tol = 1e-12;

  auto make = [&]( double spin_sign, double site_sign ) {
    particle_link_state p;
    p.energy_chi = energy_chi;
    p.energy_lambda = energy_lambda;
    for ( int c1 = 0; c1 < 2; ++c1 )
    {
      const int c2 = 1 - c1;
      const double sc = c1 == 0 ? 1.0 : spin_sign;
      p.at( c1, c2, 0, 1 ) += 0.5 * sc;
      p.at( c1, c2, 1, 0 ) += 0.5 * sc * site_sign;
    }
    return p;
  };

  /* zero-eigenvalue states of H_lambda within the antisymmetric sector */
  const double h = 1.0 / std::sqrt( 2.0 );
  std::array<particle_link_state, 4> lambda_ground;
  for ( int chi = 0; chi < 2; ++chi )
  {
    auto& p = lambda_ground[static_cast<std::size_t>( chi )];
    p.energy_chi = energy_chi;
    p.energy_lambda = energy_lambda;
    p.at( chi, chi, 0, 1 ) = h;
    p.at( chi, chi, 1, 0 ) = -h;
  }
  lambda_ground[2] = make( +1.0, -1.0 );
  lambda_ground[3] = make( -1.0, +1.0 );
  for ( std::size_t k = 0; k < 4; ++k )
  {
    const auto& p = lambda_ground[k];
    if ( std::abs( p.norm_squared() - 1.0 ) > tol || !is_antisymmetric( p ) || std::abs( site_energy_expect( p ) ) > tol )
      throw std::logic_error( "H_lambda ground state check failed for state " + std::to_string( k ) );
  }
  for ( std::size_t k = 0; k < 2; ++k )
  {
    if ( std::abs( link_energy_expect( lambda_ground[k] ) - energy_chi ) > tol * energy_chi )
      throw std::logic_error( "parallel-spin state not lifted to energy_chi" );
  }

  link_ground_basis basis{ make( -1.0, +1.0 ), make( +1.0, -1.0 ) };
  for ( const auto* p : { &basis.psi_minus, &basis.psi_plus } )
  {
    if ( !is_antisymmetric( *p ) || std::abs( link_energy_expect( *p ) ) > tol || std::abs( p->norm_squared() - 1.0 ) > tol )
      throw std::logic_error( "link ground state check failed" );
  }
  if ( std::abs( inner( basis.psi_minus, basis.psi_plus ) ) > tol )
    throw std::logic_error( "link ground states are not orthogonal" );
  return basis;
}

/*! \brief Qubit-representation image over (r, s); qubit 0 is r, qubit 1 is s.
 *
 * Each pattern |a>_r|b>_s reads the amplitude of its particle-picture vector.
 * Parallel patterns accept either realization, but not both at once. Support
 * outside this span (double occupancy, symmetric antiparallel states) throws
 * not_mappable.
 */
inline state_vector map_particle_to_qubit( const particle_link_state& p )
{
  constexpr double tol = 1e-10;
  auto image = state_vector::from_amplitudes( 2, std::vector<amplitude>( 4, 0.0 ) );
  particle_link_state reconstructed;
  for ( int a = 0; a < 2; ++a )
  {
    for ( int b = 0; b < 2; ++b )
    {
      const std::uint64_t idx = static_cast<std::uint64_t>( a ) | ( static_cast<std::uint64_t>( b ) << 1 );
      const auto anti = particle_pattern( a, b, parallel_kind::excited_antisymmetric );
      const auto ca = inner( anti, p );
      amplitude coeff = ca;
      if ( a == b )
      {
        const auto sym = particle_pattern( a, b, parallel_kind::symmetric_bad );
        const auto cs = inner( sym, p );
        if ( std::abs( ca ) > tol && std::abs( cs ) > tol )
          throw not_mappable( "pattern |" + std::to_string( a ) + std::to_string( b ) + "> mixes excited and symmetric realizations" );
        if ( std::abs( cs ) > tol )
        {
          coeff = cs;
          for ( std::size_t i = 0; i < 16; ++i )
            reconstructed.amps[i] += cs * sym.amps[i];
        }
        else
        {
          for ( std::size_t i = 0; i < 16; ++i )
            reconstructed.amps[i] += ca * anti.amps[i];
        }
      }
      else
      {
        for ( std::size_t i = 0; i < 16; ++i )
          reconstructed.amps[i] += ca * anti.amps[i];
      }
      image[idx] = coeff;
    }
  }
  double residual = 0.0;
  for ( std::size_t i = 0; i < 16; ++i )
    residual += std::norm( p.amps[i] - reconstructed.amps[i] );
  if ( std::sqrt( residual ) > tol * std::max( 1.0, std::sqrt( p.norm_squared() ) ) )
    throw not_mappable( "particle state has support outside the qubit-representable span" );
  return image;
}

/*! \brief Inverse of map_particle_to_qubit on a two-qubit state; `kind` picks the parallel-pattern realization. */
inline particle_link_state embed_qubit_state( const state_vector& q, parallel_kind kind = parallel_kind::excited_antisymmetric,
                                              double energy_chi = 8.0, double energy_lambda = 8.0 )
{
  if ( q.num_qubits() != 2 )
    throw std::invalid_argument( "embed_qubit_state expects a two-qubit state" );
  particle_link_state p;
  p.energy_chi = energy_chi;
  p.energy_lambda = energy_lambda;
  for ( int a = 0; a < 2; ++a )
  {
    for ( int b = 0; b < 2; ++b )
    {
      const std::uint64_t idx = static_cast<std::uint64_t>( a ) | ( static_cast<std::uint64_t>( b ) << 1 );
      const auto pattern = particle_pattern( a, b, kind, energy_chi, energy_lambda );
      for ( std::size_t i = 0; i < 16; ++i )
        p.amps[i] += q[idx] * pattern.amps[i];
    }
  }
  return p;
}

} // namespace qanneal
