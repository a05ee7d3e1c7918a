#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "random.hpp"
#include "state_vector.hpp"

namespace qanneal
{

inline constexpr double hermiticity_tolerance = 1e-10;

/*! \brief One-qubit density matrix in the (|0>, |1>) basis. */
struct reduced_density
{
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();

  static reduced_density diagonal( double p0, double p1 )
  {
    reduced_density r;
    r.rho( 0, 0 ) = p0;
    r.rho( 1, 1 ) = p1;
    return r;
  }

  double p0() const { return rho( 0, 0 ).real(); }
  double p1() const { return rho( 1, 1 ).real(); }
  amplitude coherence() const { return rho( 0, 1 ); }

  double trace() const { return rho.trace().real(); }

  double hermiticity_error() const { return ( rho - rho.adjoint() ).cwiseAbs().maxCoeff(); }

  double min_eigenvalue() const
  {
    const Eigen::Matrix2cd h = 0.5 * ( rho + rho.adjoint() );
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es( h, Eigen::EigenvaluesOnly );
    return es.eigenvalues()( 0 );
  }

  bool is_valid() const
  {
    return std::abs( trace() - 1.0 ) <= norm_tolerance && hermiticity_error() <= hermiticity_tolerance &&
           min_eigenvalue() >= -hermiticity_tolerance;
  }

  /* max-abs entrywise difference */
  double distance_to( const reduced_density& other ) const { return ( rho - other.rho ).cwiseAbs().maxCoeff(); }
};

/*! \brief Reduced density of one qubit: rho[a][b] = sum over the rest of psi(a, rest) conj(psi(b, rest)). */
inline reduced_density partial_trace( const state_vector& s, std::size_t qubit )
{
  if ( qubit >= s.num_qubits() )
    throw std::out_of_range( "qubit index out of range" );
  const std::uint64_t bit = std::uint64_t{ 1 } << qubit;
  reduced_density r;
  for ( std::uint64_t i = 0; i < s.dimension(); ++i )
  {
    if ( i & bit )
      continue;
    const auto a0 = s[i];
    const auto a1 = s[i | bit];
    r.rho( 0, 0 ) += a0 * std::conj( a0 );
    r.rho( 0, 1 ) += a0 * std::conj( a1 );
    r.rho( 1, 0 ) += a1 * std::conj( a0 );
    r.rho( 1, 1 ) += a1 * std::conj( a1 );
  }
  r.rho /= s.norm_squared();
  return r;
}

using density_matrix = Eigen::MatrixXcd;

inline density_matrix density_of( const state_vector& s )
{
  Eigen::VectorXcd v( static_cast<Eigen::Index>( s.dimension() ) );
  for ( std::size_t i = 0; i < s.dimension(); ++i )
    v( static_cast<Eigen::Index>( i ) ) = s[i];
  return v * v.adjoint();
}

/*! \brief Monte Carlo mean of |psi(delta)><psi(delta)| over delta uniform on [0, 2pi).
 *
 * Random-phase treatment of an undefined phase: coherences carried by the
 * phase average out at rate M^{-1/2}.
 */
inline density_matrix random_phase_average( const std::function<state_vector( double )>& family, std::size_t samples, rng_type& rng )
{
  if ( samples == 0 )
    throw std::invalid_argument( "random_phase_average: need at least one sample" );
  density_matrix acc;
  for ( std::size_t m = 0; m < samples; ++m )
  {
    const auto psi = family( uniform_phase( rng ) );
    if ( m == 0 )
      acc = density_matrix::Zero( static_cast<Eigen::Index>( psi.dimension() ), static_cast<Eigen::Index>( psi.dimension() ) );
    acc += density_of( psi );
  }
  return acc / static_cast<double>( samples );
}

} // namespace qanneal
