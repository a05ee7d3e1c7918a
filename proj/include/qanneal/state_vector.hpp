#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "errors.hpp"

namespace qanneal
{

using amplitude = std::complex<double>;

inline constexpr double norm_tolerance = 1e-12;
inline constexpr double annihilation_threshold = 1e-14;
inline constexpr std::size_t max_state_qubits = 26;

/*! \brief Dense amplitude vector over the 2^N computational basis.
 *
 * Basis index bit i holds the value of qubit (node) i. The vector is
 * normally unit-norm; intermediate unnormalized values are allowed and are
 * brought back with normalize().
 */
class state_vector
{
public:
  state_vector() = default;

  /* |0...0> */
  explicit state_vector( std::size_t num_qubits ) : num_qubits_( check_size( num_qubits ) ), amps_( std::size_t{ 1 } << num_qubits )
  {
    amps_[0] = 1.0;
  }

  static state_vector basis( std::size_t num_qubits, std::uint64_t index )
  {
    state_vector s( num_qubits );
    if ( index >= s.dimension() )
      throw std::out_of_range( "basis index out of range" );
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  static state_vector uniform( std::size_t num_qubits )
  {
    state_vector s( num_qubits );
    const double a = 1.0 / std::sqrt( static_cast<double>( s.dimension() ) );
    for ( auto& x : s.amps_ )
      x = a;
    return s;
  }

  /* takes the amplitudes verbatim; no normalization */
  static state_vector from_amplitudes( std::size_t num_qubits, std::vector<amplitude> amps )
  {
    state_vector s;
    s.num_qubits_ = check_size( num_qubits );
    if ( amps.size() != ( std::size_t{ 1 } << num_qubits ) )
      throw std::invalid_argument( "amplitude count must be 2^num_qubits" );
    s.amps_ = std::move( amps );
    return s;
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }

  std::span<const amplitude> amplitudes() const noexcept { return amps_; }
  std::span<amplitude> amplitudes() noexcept { return amps_; }

  const amplitude& operator[]( std::uint64_t i ) const { return amps_[i]; }
  amplitude& operator[]( std::uint64_t i ) { return amps_[i]; }

  double norm_squared() const noexcept
  {
    double n = 0.0;
    for ( const auto& a : amps_ )
      n += std::norm( a );
    return n;
  }

  double norm() const noexcept { return std::sqrt( norm_squared() ); }

  /* throws annihilated_state if the norm is below the annihilation threshold */
  void normalize()
  {
    const double n = norm();
    if ( !( n >= annihilation_threshold ) )
      throw annihilated_state( "state annihilated (norm " + std::to_string( n ) + ")" );
    const double inv = 1.0 / n;
    for ( auto& a : amps_ )
      a *= inv;
  }

  bool is_normalized( double tol = norm_tolerance ) const noexcept { return std::abs( norm() - 1.0 ) <= tol; }

  double probability( std::uint64_t i ) const { return std::norm( amps_[i] ); }

  bool operator==( const state_vector& ) const = default;

private:
  static std::size_t check_size( std::size_t n )
  {
    if ( n > max_state_qubits )
      throw size_overflow( "state vector of " + std::to_string( n ) + " qubits exceeds " + std::to_string( max_state_qubits ) );
    return n;
  }

  std::size_t num_qubits_ = 0;
  std::vector<amplitude> amps_;
};

/* <a|b> */
inline amplitude inner( const state_vector& a, const state_vector& b )
{
  if ( a.dimension() != b.dimension() )
    throw std::invalid_argument( "inner: dimension mismatch" );
  amplitude sum = 0.0;
  for ( std::size_t i = 0; i < a.dimension(); ++i )
    sum += std::conj( a[i] ) * b[i];
  return sum;
}

/* ||a - b|| */
inline double distance( const state_vector& a, const state_vector& b )
{
  if ( a.dimension() != b.dimension() )
    throw std::invalid_argument( "distance: dimension mismatch" );
  double sum = 0.0;
  for ( std::size_t i = 0; i < a.dimension(); ++i )
    sum += std::norm( a[i] - b[i] );
  return std::sqrt( sum );
}

/*! \brief Applies a 2x2 matrix to one qubit: amplitude pairs (..0..), (..1..) are mixed by `m`. */
inline void apply_single_qubit( state_vector& s, std::size_t qubit, const Eigen::Matrix2cd& m )
{
  if ( qubit >= s.num_qubits() )
    throw std::out_of_range( "qubit index out of range" );
  const std::uint64_t bit = std::uint64_t{ 1 } << qubit;
  for ( std::uint64_t i = 0; i < s.dimension(); ++i )
  {
    if ( i & bit )
      continue;
    const auto a0 = s[i];
    const auto a1 = s[i | bit];
    s[i] = m( 0, 0 ) * a0 + m( 0, 1 ) * a1;
    s[i | bit] = m( 1, 0 ) * a0 + m( 1, 1 ) * a1;
  }
}

/*! \brief Real rotation [[cos, -sin], [sin, cos]] on one qubit. */
inline Eigen::Matrix2cd rotation_matrix( double phi )
{
  const double c = std::cos( phi );
  const double s = std::sin( phi );
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

/*! \brief Outcome of sampling the computational basis with Born probabilities. */
template<class Rng>
std::uint64_t sample_basis_index( const state_vector& s, Rng& rng )
{
  const double total = s.norm_squared();
  double u = std::uniform_real_distribution<double>( 0.0, total )( rng );
  std::uint64_t last_nonzero = 0;
  for ( std::uint64_t i = 0; i < s.dimension(); ++i )
  {
    const double p = s.probability( i );
    if ( p == 0.0 )
      continue;
    last_nonzero = i;
    if ( u < p )
      return i;
    u -= p;
  }
  return last_nonzero;
}

} // namespace qanneal
