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
  \file table.hpp
  \brief Dense tables of nonnegative Boolean pseudo-functions

  A function `F : {0,1}^n -> Q_{>=0}` is stored as a dense value table
  indexed by assignment masks.  The first argument `x1` corresponds to
  the least-significant bit of the index: the tuple `(x1, ..., xn)` is
  stored at index `x1 + 2*x2 + ... + 2^{n-1}*xn`.  Argument positions in
  the API are 0-based.

  Tables are immutable after construction; every operation returns a new
  table.  The all-zero table is legal.  Entries must be nonnegative —
  signed spectra produced by the transform layer live in their own types.
*/

#pragma once

#include "rational.hpp"

#include <atomic>
#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccsp
{

/*! \brief Partial assignment of argument positions (0-based) to bits. */
using pinning = std::map<uint32_t, uint8_t>;

namespace detail
{

inline std::atomic<uint32_t>& max_arity_storage()
{
  static std::atomic<uint32_t> cap{ 20u };
  return cap;
}

} // namespace detail

/*! \brief Largest admissible table arity (default 20). */
inline uint32_t max_table_arity()
{
  return detail::max_arity_storage().load();
}

/*! \brief Reconfigures the table arity cap.
 *
 * Intended to be called once at startup (e.g. from a command-line
 * flag); raising the cap mid-computation is safe, lowering it does not
 * invalidate existing tables.
 */
inline void set_max_table_arity( uint32_t cap )
{
  detail::max_arity_storage().store( cap );
}

/*! \brief Tests bit `i` of an assignment mask. */
constexpr bool test_bit( uint64_t mask, uint32_t i )
{
  return ( mask >> i ) & 1u;
}

/*! \brief Immutable dense table of a nonnegative pseudo-Boolean function. */
class fn_table
{
public:
  /*! \brief Constructs a table from `2^arity` nonnegative values.
   *
   * Throws `std::invalid_argument` on a size mismatch or a negative
   * entry and `std::domain_error` if `arity` exceeds the configured cap.
   */
  fn_table( uint32_t arity, std::vector<rational> values )
      : arity_( arity ), values_( std::move( values ) )
  {
    if ( arity_ > max_table_arity() )
    {
      throw std::domain_error( "fn_table: arity " + std::to_string( arity_ ) +
                               " exceeds cap " + std::to_string( max_table_arity() ) );
    }
    if ( values_.size() != ( uint64_t( 1 ) << arity_ ) )
    {
      throw std::invalid_argument( "fn_table: expected " +
                                   std::to_string( uint64_t( 1 ) << arity_ ) +
                                   " values, got " + std::to_string( values_.size() ) );
    }
    for ( const auto& v : values_ )
    {
      if ( v.is_negative() )
      {
        throw std::invalid_argument( "fn_table: negative entry " + v.to_string() );
      }
    }
  }

  /*! \brief Constant function of the given arity. */
  static fn_table constant( uint32_t arity, const rational& c )
  {
    return fn_table( arity, std::vector<rational>( uint64_t( 1 ) << arity, c ) );
  }

  uint32_t arity() const { return arity_; }

  /*! \brief Number of table entries (`2^arity`). */
  uint64_t size() const { return values_.size(); }

  /*! \brief Value at an assignment mask. */
  const rational& at( uint64_t mask ) const { return values_[mask]; }
  const rational& operator[]( uint64_t mask ) const { return values_[mask]; }

  const std::vector<rational>& values() const { return values_; }

  /*! \brief True if every entry is strictly positive. */
  bool is_permissive() const
  {
    for ( const auto& v : values_ )
    {
      if ( v.is_zero() )
      {
        return false;
      }
    }
    return true;
  }

  /*! \brief True if every entry is zero. */
  bool is_zero() const
  {
    for ( const auto& v : values_ )
    {
      if ( !v.is_zero() )
      {
        return false;
      }
    }
    return true;
  }

  friend bool operator==( const fn_table& a, const fn_table& b )
  {
    return a.arity_ == b.arity_ && a.values_ == b.values_;
  }

  friend bool operator!=( const fn_table& a, const fn_table& b ) { return !( a == b ); }

private:
  uint32_t arity_;
  std::vector<rational> values_;
};

/*! \brief True if every entry of `f` is strictly positive. */
inline bool is_permissive( const fn_table& f )
{
  return f.is_permissive();
}

/* -------------------------------------------------------------------------
 * named tables
 * ---------------------------------------------------------------------- */

namespace tables
{

/*! \brief Binary implication: zero only on `x1 = 1, x2 = 0`. */
inline fn_table imp()
{
  return fn_table( 2, { 1, 0, 1, 1 } );
}

/*! \brief Binary equality indicator. */
inline fn_table eq()
{
  return fn_table( 2, { 1, 0, 0, 1 } );
}

/*! \brief Binary disequality indicator. */
inline fn_table neq()
{
  return fn_table( 2, { 0, 1, 1, 0 } );
}

/*! \brief Binary disjunction indicator. */
inline fn_table or_table()
{
  return fn_table( 2, { 0, 1, 1, 1 } );
}

/*! \brief Binary NAND indicator. */
inline fn_table nand_table()
{
  return fn_table( 2, { 1, 1, 1, 0 } );
}

/*! \brief Unary pin to 0. */
inline fn_table delta0()
{
  return fn_table( 1, { 1, 0 } );
}

/*! \brief Unary pin to 1. */
inline fn_table delta1()
{
  return fn_table( 1, { 0, 1 } );
}

/*! \brief Soft equality with diagonal weight 2: table (2, 1, 1, 2). */
inline fn_table eq_prime()
{
  return fn_table( 2, { 2, 1, 1, 2 } );
}

/*! \brief Even-parity indicator on three arguments. */
inline fn_table oplus3()
{
  return fn_table( 3, { 1, 0, 0, 1, 0, 1, 1, 0 } );
}

/*! \brief Ternary equality indicator. */
inline fn_table eq3()
{
  return fn_table( 3, { 1, 0, 0, 0, 0, 0, 0, 1 } );
}

/*! \brief Nullary constant one half. */
inline fn_table half()
{
  return fn_table( 0, { rational( bigint( 1 ), bigint( 2 ) ) } );
}

/*! \brief Unary table with the given values at 0 and 1. */
inline fn_table unary( const rational& at0, const rational& at1 )
{
  return fn_table( 1, { at0, at1 } );
}

/*! \brief Nullary constant. */
inline fn_table nullary( const rational& c )
{
  return fn_table( 0, { c } );
}

/*! \brief Equality indicator of arbitrary arity (nullary gives constant 1). */
inline fn_table equality( uint32_t arity )
{
  std::vector<rational> v( uint64_t( 1 ) << arity, 0 );
  v.front() = 1;
  v.back() = 1;
  return fn_table( arity, std::move( v ) );
}

/*! \brief All-one function of the given arity. */
inline fn_table all_ones( uint32_t arity )
{
  return fn_table::constant( arity, 1 );
}

} // namespace tables

/* -------------------------------------------------------------------------
 * structural operations
 * ---------------------------------------------------------------------- */

/*! \brief Pins argument positions to constants.
 *
 * The surviving positions keep their relative order.  Throws
 * `std::invalid_argument` for out-of-range positions or values.
 */
inline fn_table pin( const fn_table& f, const pinning& assignment )
{
  uint64_t fixed_mask = 0;
  for ( const auto& [pos, val] : assignment )
  {
    if ( pos >= f.arity() )
    {
      throw std::invalid_argument( "pin: position " + std::to_string( pos ) +
                                   " out of range for arity " + std::to_string( f.arity() ) );
    }
    if ( val > 1 )
    {
      throw std::invalid_argument( "pin: value must be 0 or 1" );
    }
    if ( val )
    {
      fixed_mask |= uint64_t( 1 ) << pos;
    }
  }
  std::vector<uint32_t> free_pos;
  for ( uint32_t i = 0; i < f.arity(); ++i )
  {
    if ( !assignment.count( i ) )
    {
      free_pos.push_back( i );
    }
  }
  const uint32_t out_arity = static_cast<uint32_t>( free_pos.size() );
  std::vector<rational> out( uint64_t( 1 ) << out_arity );
  for ( uint64_t om = 0; om < out.size(); ++om )
  {
    uint64_t im = fixed_mask;
    for ( uint32_t k = 0; k < out_arity; ++k )
    {
      if ( test_bit( om, k ) )
      {
        im |= uint64_t( 1 ) << free_pos[k];
      }
    }
    out[om] = f.at( im );
  }
  return fn_table( out_arity, std::move( out ) );
}

/*! \brief A binary function obtained by pinning all but two positions. */
struct two_pinning
{
  uint32_t i;          /*!< first surviving position (0-based, i < j) */
  uint32_t j;          /*!< second surviving position */
  pinning assignment;  /*!< constants on the remaining positions */
  fn_table table;      /*!< the induced binary table on (x_i, x_j) */
};

/*! \brief Enumerates all binary pinnings of `f`.
 *
 * Pairs `(i, j)` are emitted in lexicographic order and, within a pair,
 * the pinned constants in increasing order of their packed mask (bits
 * ordered by ascending pinned position).  Arity below two yields an
 * empty list.
 */
inline std::vector<two_pinning> two_pinnings( const fn_table& f )
{
  std::vector<two_pinning> result;
  const uint32_t n = f.arity();
  if ( n < 2 )
  {
    return result;
  }
  for ( uint32_t i = 0; i < n; ++i )
  {
    for ( uint32_t j = i + 1; j < n; ++j )
    {
      std::vector<uint32_t> rest;
      for ( uint32_t k = 0; k < n; ++k )
      {
        if ( k != i && k != j )
        {
          rest.push_back( k );
        }
      }
      for ( uint64_t c = 0; c < ( uint64_t( 1 ) << rest.size() ); ++c )
      {
        pinning a;
        for ( uint32_t k = 0; k < rest.size(); ++k )
        {
          a[rest[k]] = test_bit( c, k ) ? 1 : 0;
        }
        result.push_back( two_pinning{ i, j, a, pin( f, a ) } );
      }
    }
  }
  return result;
}

/*! \brief Product of two functions under scope maps into a common tuple.
 *
 * `scope_f[k]` gives the position (0-based, `< out_arity`) of the k-th
 * argument of `f` in the output tuple; likewise `scope_g`.  Repeated
 * positions within a scope are allowed and act as diagonalization.
 */
inline fn_table product( const fn_table& f, const fn_table& g,
                         const std::vector<uint32_t>& scope_f,
                         const std::vector<uint32_t>& scope_g, uint32_t out_arity )
{
  if ( scope_f.size() != f.arity() || scope_g.size() != g.arity() )
  {
    throw std::invalid_argument( "product: scope size does not match arity" );
  }
  for ( auto p : scope_f )
  {
    if ( p >= out_arity )
    {
      throw std::invalid_argument( "product: scope position out of range" );
    }
  }
  for ( auto p : scope_g )
  {
    if ( p >= out_arity )
    {
      throw std::invalid_argument( "product: scope position out of range" );
    }
  }
  std::vector<rational> out( uint64_t( 1 ) << out_arity );
  for ( uint64_t om = 0; om < out.size(); ++om )
  {
    uint64_t fm = 0, gm = 0;
    for ( uint32_t k = 0; k < scope_f.size(); ++k )
    {
      if ( test_bit( om, scope_f[k] ) )
      {
        fm |= uint64_t( 1 ) << k;
      }
    }
    for ( uint32_t k = 0; k < scope_g.size(); ++k )
    {
      if ( test_bit( om, scope_g[k] ) )
      {
        gm |= uint64_t( 1 ) << k;
      }
    }
    out[om] = f.at( fm ) * g.at( gm );
  }
  return fn_table( out_arity, std::move( out ) );
}

/*! \brief Entry-wise product of two tables of equal arity. */
inline fn_table pointwise_product( const fn_table& f, const fn_table& g )
{
  if ( f.arity() != g.arity() )
  {
    throw std::invalid_argument( "pointwise_product: arity mismatch" );
  }
  std::vector<rational> out( f.size() );
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    out[m] = f.at( m ) * g.at( m );
  }
  return fn_table( f.arity(), std::move( out ) );
}

/*! \brief Entry-wise sum of two tables of equal arity. */
inline fn_table add( const fn_table& f, const fn_table& g )
{
  if ( f.arity() != g.arity() )
  {
    throw std::invalid_argument( "add: arity mismatch" );
  }
  std::vector<rational> out( f.size() );
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    out[m] = f.at( m ) + g.at( m );
  }
  return fn_table( f.arity(), std::move( out ) );
}

/*! \brief Scales every entry by a nonnegative constant. */
inline fn_table scale( const fn_table& f, const rational& c )
{
  std::vector<rational> out( f.size() );
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    out[m] = f.at( m ) * c;
  }
  return fn_table( f.arity(), std::move( out ) );
}

/*! \brief Sums out one argument position. */
inline fn_table sum_out( const fn_table& f, uint32_t pos )
{
  if ( pos >= f.arity() )
  {
    throw std::invalid_argument( "sum_out: position out of range" );
  }
  const uint32_t out_arity = f.arity() - 1;
  const uint64_t low_mask = ( uint64_t( 1 ) << pos ) - 1;
  std::vector<rational> out( uint64_t( 1 ) << out_arity );
  for ( uint64_t om = 0; om < out.size(); ++om )
  {
    const uint64_t im = ( om & low_mask ) | ( ( om & ~low_mask ) << 1 );
    out[om] = f.at( im ) + f.at( im | ( uint64_t( 1 ) << pos ) );
  }
  return fn_table( out_arity, std::move( out ) );
}

/*! \brief Argument complement: `bar(f)(x) = f(~x)`. */
inline fn_table bar( const fn_table& f )
{
  const uint64_t full = f.size() - 1;
  std::vector<rational> out( f.size() );
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    out[m] = f.at( full ^ m );
  }
  return fn_table( f.arity(), std::move( out ) );
}

/*! \brief Symmetrization `star(f)(x) = f(x) * f(~x)`. */
inline fn_table star( const fn_table& f )
{
  return pointwise_product( f, bar( f ) );
}

/*! \brief Sorted support masks of `f`. */
inline std::vector<uint64_t> underlying_relation( const fn_table& f )
{
  std::vector<uint64_t> masks;
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    if ( !f.at( m ).is_zero() )
    {
      masks.push_back( m );
    }
  }
  return masks;
}

/*! \brief Renders an assignment mask as a tuple string "(b1,...,bn)". */
inline std::string mask_to_tuple( uint64_t mask, uint32_t arity )
{
  std::string s = "(";
  for ( uint32_t i = 0; i < arity; ++i )
  {
    if ( i )
    {
      s += ",";
    }
    s += test_bit( mask, i ) ? "1" : "0";
  }
  s += ")";
  return s;
}

} // namespace ccsp
