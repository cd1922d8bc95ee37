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
  \file rational.hpp
  \brief Exact rational arithmetic over arbitrary-precision integers

  All numeric quantities in the library (table entries, partition
  functions, accuracy budgets) are exact rationals.  The class below is a
  thin canonical-form wrapper around `boost::multiprecision::cpp_int`
  with fast paths for the integer-valued case, which dominates the
  workloads of the evaluation engine.
*/

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace ccsp
{

/*! \brief Arbitrary-precision signed integer. */
using bigint = boost::multiprecision::cpp_int;

/*! \brief Exact rational number in canonical form.
 *
 * Invariants: the denominator is strictly positive and coprime to the
 * numerator; zero is represented as 0/1.  All operations preserve the
 * canonical form, so equality is plain component-wise comparison.
 *
 * Arithmetic follows the classical cross-reduction scheme (gcd before
 * multiplication) to keep intermediate operands small, with dedicated
 * fast paths when both operands are integers.
 */
class rational
{
public:
  /*! \brief Constructs zero. */
  rational() : num_( 0 ), den_( 1 ) {}

  /*! \brief Constructs an integer value. */
  rational( long long v ) : num_( v ), den_( 1 ) {}

  /*! \brief Constructs an integer value. */
  rational( bigint v ) : num_( std::move( v ) ), den_( 1 ) {}

  /*! \brief Constructs `n / d` and normalizes.
   *
   * Throws `std::domain_error` if `d` is zero.
   */
  rational( bigint n, bigint d ) : num_( std::move( n ) ), den_( std::move( d ) )
  {
    if ( den_ == 0 )
    {
      throw std::domain_error( "rational: zero denominator" );
    }
    normalize();
  }

  /*! \brief Parses "p", "-p", or "p/q" (optionally signed numerator).
   *
   * Throws `std::invalid_argument` on malformed input or zero
   * denominator.
   */
  static rational from_string( const std::string& s )
  {
    const auto bad = [&]() -> rational {
      throw std::invalid_argument( "rational: cannot parse '" + s + "'" );
    };
    std::size_t pos = 0;
    bool neg = false;
    if ( pos < s.size() && ( s[pos] == '-' || s[pos] == '+' ) )
    {
      neg = s[pos] == '-';
      ++pos;
    }
    std::size_t start = pos;
    while ( pos < s.size() && std::isdigit( static_cast<unsigned char>( s[pos] ) ) )
    {
      ++pos;
    }
    if ( pos == start )
    {
      return bad();
    }
    bigint n( s.substr( start, pos - start ) );
    bigint d( 1 );
    if ( pos < s.size() )
    {
      if ( s[pos] != '/' )
      {
        return bad();
      }
      ++pos;
      std::size_t dstart = pos;
      while ( pos < s.size() && std::isdigit( static_cast<unsigned char>( s[pos] ) ) )
      {
        ++pos;
      }
      if ( pos == dstart || pos != s.size() )
      {
        return bad();
      }
      d = bigint( s.substr( dstart, pos - dstart ) );
      if ( d == 0 )
      {
        return bad();
      }
    }
    if ( neg )
    {
      n = -n;
    }
    return rational( std::move( n ), std::move( d ) );
  }

  const bigint& numerator() const { return num_; }
  const bigint& denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return den_ == 1 && num_ == 1; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }
  bool is_positive() const { return num_ > 0; }

  /*! \brief Sign of the value: -1, 0, or +1. */
  int sign() const { return num_ < 0 ? -1 : ( num_ > 0 ? 1 : 0 ); }

  rational operator-() const
  {
    rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  rational& operator+=( const rational& o ) { return *this = *this + o; }
  rational& operator-=( const rational& o ) { return *this = *this - o; }
  rational& operator*=( const rational& o ) { return *this = *this * o; }
  rational& operator/=( const rational& o ) { return *this = *this / o; }

  friend rational operator+( const rational& a, const rational& b )
  {
    return add_impl( a, b, false );
  }

  friend rational operator-( const rational& a, const rational& b )
  {
    return add_impl( a, b, true );
  }

  friend rational operator*( const rational& a, const rational& b )
  {
    rational r;
    if ( a.den_ == 1 && b.den_ == 1 )
    {
      r.num_ = a.num_ * b.num_;
      return r;
    }
    const bigint g1 = gcd_nz( a.num_, b.den_ );
    const bigint g2 = gcd_nz( b.num_, a.den_ );
    r.num_ = ( a.num_ / g1 ) * ( b.num_ / g2 );
    r.den_ = ( a.den_ / g2 ) * ( b.den_ / g1 );
    return r;
  }

  friend rational operator/( const rational& a, const rational& b )
  {
    if ( b.num_ == 0 )
    {
      throw std::domain_error( "rational: division by zero" );
    }
    rational inv;
    if ( b.num_ < 0 )
    {
      inv.num_ = -b.den_;
      inv.den_ = -b.num_;
    }
    else
    {
      inv.num_ = b.den_;
      inv.den_ = b.num_;
    }
    return a * inv;
  }

  friend bool operator==( const rational& a, const rational& b )
  {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend bool operator!=( const rational& a, const rational& b ) { return !( a == b ); }
  friend bool operator<( const rational& a, const rational& b ) { return compare( a, b ) < 0; }
  friend bool operator<=( const rational& a, const rational& b ) { return compare( a, b ) <= 0; }
  friend bool operator>( const rational& a, const rational& b ) { return compare( a, b ) > 0; }
  friend bool operator>=( const rational& a, const rational& b ) { return compare( a, b ) >= 0; }

  /*! \brief Three-way comparison by cross multiplication. */
  static int compare( const rational& a, const rational& b )
  {
    if ( a.den_ == b.den_ )
    {
      return a.num_ < b.num_ ? -1 : ( a.num_ > b.num_ ? 1 : 0 );
    }
    const bigint lhs = a.num_ * b.den_;
    const bigint rhs = b.num_ * a.den_;
    return lhs < rhs ? -1 : ( lhs > rhs ? 1 : 0 );
  }

  /*! \brief Absolute value. */
  rational abs() const
  {
    rational r = *this;
    if ( r.num_ < 0 )
    {
      r.num_ = -r.num_;
    }
    return r;
  }

  /*! \brief Integer power; negative exponents invert.
   *
   * Throws `std::domain_error` for 0 raised to a negative power.
   */
  rational pow( long long e ) const
  {
    if ( e == 0 )
    {
      return rational( 1 );
    }
    if ( num_ == 0 )
    {
      if ( e < 0 )
      {
        throw std::domain_error( "rational: zero to negative power" );
      }
      return rational( 0 );
    }
    const auto ae = static_cast<unsigned>( e < 0 ? -e : e );
    rational r;
    r.num_ = boost::multiprecision::pow( num_, ae );
    r.den_ = boost::multiprecision::pow( den_, ae );
    if ( e < 0 )
    {
      std::swap( r.num_, r.den_ );
      if ( r.den_ < 0 )
      {
        r.num_ = -r.num_;
        r.den_ = -r.den_;
      }
    }
    return r;
  }

  /*! \brief Renders as "p" or "p/q". */
  std::string to_string() const
  {
    std::string s = num_.str();
    if ( den_ != 1 )
    {
      s += "/";
      s += den_.str();
    }
    return s;
  }

  /*! \brief Renders a rounded decimal expansion with `digits` places. */
  std::string to_decimal( unsigned digits ) const
  {
    bigint n = num_ < 0 ? bigint( -num_ ) : num_;
    const bigint scale = boost::multiprecision::pow( bigint( 10 ), digits );
    /* round-half-up on the scaled magnitude */
    bigint scaled = ( n * scale * 2 + den_ ) / ( den_ * 2 );
    bigint ip = scaled / scale;
    bigint fp = scaled % scale;
    std::string s = num_ < 0 && scaled != 0 ? "-" : "";
    s += ip.str();
    if ( digits > 0 )
    {
      std::string f = fp.str();
      s += ".";
      s += std::string( digits - f.size(), '0' );
      s += f;
    }
    return s;
  }

  friend std::ostream& operator<<( std::ostream& os, const rational& r )
  {
    return os << r.to_string();
  }

private:
  static bigint gcd_nz( const bigint& a, const bigint& b )
  {
    bigint g = boost::multiprecision::gcd( a, b );
    return g == 0 ? bigint( 1 ) : g;
  }

  static rational add_impl( const rational& a, const rational& b, bool subtract )
  {
    rational r;
    if ( a.den_ == 1 && b.den_ == 1 )
    {
      r.num_ = subtract ? bigint( a.num_ - b.num_ ) : bigint( a.num_ + b.num_ );
      return r;
    }
    const bigint d1 = boost::multiprecision::gcd( a.den_, b.den_ );
    if ( d1 == 1 )
    {
      r.num_ = subtract ? bigint( a.num_ * b.den_ - b.num_ * a.den_ )
                        : bigint( a.num_ * b.den_ + b.num_ * a.den_ );
      r.den_ = a.den_ * b.den_;
      return r;
    }
    const bigint bq = b.den_ / d1;
    const bigint aq = a.den_ / d1;
    bigint t = subtract ? bigint( a.num_ * bq - b.num_ * aq )
                        : bigint( a.num_ * bq + b.num_ * aq );
    const bigint d2 = gcd_nz( t, d1 );
    r.num_ = t / d2;
    r.den_ = aq * ( b.den_ / d2 );
    return r;
  }

  void normalize()
  {
    if ( den_ < 0 )
    {
      num_ = -num_;
      den_ = -den_;
    }
    if ( num_ == 0 )
    {
      den_ = 1;
      return;
    }
    const bigint g = boost::multiprecision::gcd( num_, den_ );
    if ( g != 1 )
    {
      num_ /= g;
      den_ /= g;
    }
  }

  bigint num_;
  bigint den_;
};

} // namespace ccsp
