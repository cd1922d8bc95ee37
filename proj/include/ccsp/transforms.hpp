/* ccsp: functional clones for weighted Boolean counting CSPs
 * Copyright (C) 2026  The ccsp authors
 *
 * Permission is hereby granted, free of charge, to any person
 * obtaining a copy of this software and associated documentation
 * files (the "Software"), to deal in the Software without
 * restriction, including without limitation the rights to use,
 * copy, modify, merge, publish, distribute, sublicense, and/or sell
 * copies of the Software, and to permit persons to whom the
 * Software is furnished to do so, subject to the following
 * conditions:
 *
 * The above copyright notice and this permission notice shall be
 * included in all copies or substantial portions of the Software.
 *
 * THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
 * EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES
 * OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
 * NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT
 * HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY,
 * WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
 * FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
 * OTHER DEALINGS IN THE SOFTWARE.
 */

/*!
  \file transforms.hpp
  \brief Spectra of pseudo-Boolean functions over the subset lattice

  Two transforms are provided.  The multiplicative lattice transform of
  a strictly positive function satisfies
  `m(y) = prod_{w <= y} f(w)^{(-1)^{|y \ w|}}` with reconstruction
  `f(x) = prod_{y <= x} m(y)`; it factors a positive function into
  interaction terms per argument subset.  The character-basis transform
  `fhat(y) = 2^{-n} sum_w (-1)^{|w & y|} f(w)` is a signed spectrum whose
  nonnegativity defines a class of functions closed under products,
  sums, and summing out; both closures are checked through the
  convolution identity.

  Both transforms are computed by in-place butterflies, one bit at a
  time, using exact rational arithmetic.
*/

#pragma once

#include "table.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ccsp
{

/*! \brief Multiplicative spectrum of a strictly positive function. */
struct mobius_table
{
  uint32_t arity;
  std::vector<rational> coeffs; /*!< strictly positive, indexed by subset mask */

  friend bool operator==( const mobius_table& a, const mobius_table& b )
  {
    return a.arity == b.arity && a.coeffs == b.coeffs;
  }
};

/*! \brief Signed character-basis spectrum. */
struct fourier_table
{
  uint32_t arity;
  std::vector<rational> coeffs; /*!< signed, indexed by character mask */

  friend bool operator==( const fourier_table& a, const fourier_table& b )
  {
    return a.arity == b.arity && a.coeffs == b.coeffs;
  }
};

/*! \brief Multiplicative lattice transform.
 *
 * Defined only for permissive (strictly positive) tables; throws
 * `std::domain_error` otherwise.
 */
inline mobius_table mobius( const fn_table& f )
{
  if ( !f.is_permissive() )
  {
    throw std::domain_error( "mobius: table has a zero entry" );
  }
  std::vector<rational> a( f.values() );
  for ( uint32_t b = 0; b < f.arity(); ++b )
  {
    const uint64_t bit = uint64_t( 1 ) << b;
    for ( uint64_t m = 0; m < a.size(); ++m )
    {
      if ( m & bit )
      {
        a[m] /= a[m ^ bit];
      }
    }
  }
  return mobius_table{ f.arity(), std::move( a ) };
}

/*! \brief Inverse of the multiplicative transform:
 * `f(x) = prod_{y <= x} m(y)`.
 *
 * Throws `std::invalid_argument` if a coefficient is not strictly
 * positive.
 */
inline fn_table mobius_inverse( const mobius_table& m )
{
  if ( m.coeffs.size() != ( uint64_t( 1 ) << m.arity ) )
  {
    throw std::invalid_argument( "mobius_inverse: coefficient count mismatch" );
  }
  for ( const auto& c : m.coeffs )
  {
    if ( !c.is_positive() )
    {
      throw std::invalid_argument( "mobius_inverse: coefficients must be positive" );
    }
  }
  std::vector<rational> a( m.coeffs );
  for ( uint32_t b = 0; b < m.arity; ++b )
  {
    const uint64_t bit = uint64_t( 1 ) << b;
    for ( uint64_t mm = 0; mm < a.size(); ++mm )
    {
      if ( mm & bit )
      {
        a[mm] *= a[mm ^ bit];
      }
    }
  }
  return fn_table( m.arity, std::move( a ) );
}

/*! \brief Character-basis transform `2^{-n} sum_w (-1)^{|w & y|} f(w)`. */
inline fourier_table fourier( const fn_table& f )
{
  std::vector<rational> a( f.values() );
  for ( uint32_t b = 0; b < f.arity(); ++b )
  {
    const uint64_t bit = uint64_t( 1 ) << b;
    for ( uint64_t m = 0; m < a.size(); ++m )
    {
      if ( !( m & bit ) )
      {
        rational u = a[m];
        rational v = a[m | bit];
        a[m] = u + v;
        a[m | bit] = u - v;
      }
    }
  }
  const rational norm( bigint( 1 ), bigint( 1 ) << f.arity() );
  for ( auto& v : a )
  {
    v *= norm;
  }
  return fourier_table{ f.arity(), std::move( a ) };
}

/*! \brief Inverse character-basis transform.
 *
 * Throws `std::domain_error` if the reconstruction has a negative
 * entry, i.e. the input is not the spectrum of a nonnegative function.
 */
inline fn_table fourier_inverse( const fourier_table& t )
{
  if ( t.coeffs.size() != ( uint64_t( 1 ) << t.arity ) )
  {
    throw std::invalid_argument( "fourier_inverse: coefficient count mismatch" );
  }
  std::vector<rational> a( t.coeffs );
  for ( uint32_t b = 0; b < t.arity; ++b )
  {
    const uint64_t bit = uint64_t( 1 ) << b;
    for ( uint64_t m = 0; m < a.size(); ++m )
    {
      if ( !( m & bit ) )
      {
        rational u = a[m];
        rational v = a[m | bit];
        a[m] = u + v;
        a[m | bit] = u - v;
      }
    }
  }
  for ( const auto& v : a )
  {
    if ( v.is_negative() )
    {
      throw std::domain_error( "fourier_inverse: spectrum does not describe a "
                               "nonnegative function" );
    }
  }
  return fn_table( t.arity, std::move( a ) );
}

/*! \brief Verifies the convolution identity for a pair of tables.
 *
 * Checks that the spectrum of the entry-wise product equals the
 * xor-convolution of the individual spectra:
 * `(fg)^(y) = sum_z fhat(z) ghat(y ^ z)`.
 */
inline bool convolution_check( const fn_table& f, const fn_table& g )
{
  if ( f.arity() != g.arity() )
  {
    throw std::invalid_argument( "convolution_check: arity mismatch" );
  }
  const auto fh = fourier( f );
  const auto gh = fourier( g );
  const auto ph = fourier( pointwise_product( f, g ) );
  for ( uint64_t y = 0; y < ph.coeffs.size(); ++y )
  {
    rational acc( 0 );
    for ( uint64_t z = 0; z < fh.coeffs.size(); ++z )
    {
      acc += fh.coeffs[z] * gh.coeffs[y ^ z];
    }
    if ( acc != ph.coeffs[y] )
    {
      return false;
    }
  }
  return true;
}

/*! \brief Membership result for the nonnegative-spectrum class. */
struct class_p_result
{
  bool member;
  /*! \brief Smallest character mask with a negative coefficient, and
   * its value; empty when a member. */
  std::optional<std::pair<uint64_t, rational>> witness;
};

/*! \brief Tests whether every spectrum coefficient is nonnegative. */
inline class_p_result in_class_p( const fn_table& f )
{
  const auto fh = fourier( f );
  for ( uint64_t y = 0; y < fh.coeffs.size(); ++y )
  {
    if ( fh.coeffs[y].is_negative() )
    {
      return class_p_result{ false, std::make_pair( y, fh.coeffs[y] ) };
    }
  }
  return class_p_result{ true, std::nullopt };
}

/*! \brief Witness that a pinning's symmetrization has negative spectrum. */
struct class_c_witness
{
  pinning assignment;  /*!< the failing pinning (may be empty) */
  uint64_t mask;       /*!< character mask of the negative coefficient */
  rational value;      /*!< the negative coefficient */
};

/*! \brief Membership result for the pinned-symmetrization class. */
struct class_c_result
{
  bool member;
  std::optional<class_c_witness> witness;
};

/*! \brief Tests whether `star(pin(f, a))` has nonnegative spectrum for
 * every pinning `a` that leaves at least two arguments.
 *
 * Pinned position sets are enumerated in ascending mask order (the
 * empty pinning first) and, within a set, constants in ascending packed
 * order, so the reported witness is deterministic.  Unary and nullary
 * pinnings are skipped: their symmetrizations always have nonnegative
 * spectra.
 */
inline class_c_result in_class_c( const fn_table& f )
{
  const uint32_t n = f.arity();
  for ( uint64_t smask = 0; smask < ( uint64_t( 1 ) << n ); ++smask )
  {
    const auto pinned = static_cast<uint32_t>( std::popcount( smask ) );
    if ( n - pinned < 2 )
    {
      continue;
    }
    std::vector<uint32_t> positions;
    for ( uint32_t i = 0; i < n; ++i )
    {
      if ( test_bit( smask, i ) )
      {
        positions.push_back( i );
      }
    }
    for ( uint64_t c = 0; c < ( uint64_t( 1 ) << pinned ); ++c )
    {
      pinning a;
      for ( uint32_t k = 0; k < pinned; ++k )
      {
        a[positions[k]] = test_bit( c, k ) ? 1 : 0;
      }
      const auto r = in_class_p( star( pin( f, a ) ) );
      if ( !r.member )
      {
        return class_c_result{ false,
                               class_c_witness{ a, r.witness->first, r.witness->second } };
      }
    }
  }
  return class_c_result{ true, std::nullopt };
}

} // namespace ccsp
