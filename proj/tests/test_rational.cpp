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

#include <catch2/catch_amalgamated.hpp>

#include <ccsp/rational.hpp>

using ccsp::bigint;
using ccsp::rational;

namespace
{

rational q( long long n, long long d )
{
  return rational( bigint( n ), bigint( d ) );
}

} // namespace

TEST_CASE( "rational canonical form" )
{
  CHECK( q( 2, 4 ) == q( 1, 2 ) );
  CHECK( q( -2, 4 ).numerator() == -1 );
  CHECK( q( -2, 4 ).denominator() == 2 );
  CHECK( q( 3, -6 ) == q( -1, 2 ) );
  CHECK( q( 0, -7 ) == rational( 0 ) );
  CHECK( q( 0, -7 ).denominator() == 1 );
  CHECK_THROWS_AS( q( 1, 0 ), std::domain_error );
}

TEST_CASE( "rational arithmetic" )
{
  CHECK( q( 1, 2 ) + q( 1, 3 ) == q( 5, 6 ) );
  CHECK( q( 1, 2 ) - q( 1, 2 ) == rational( 0 ) );
  CHECK( q( 7, 12 ) + q( 5, 12 ) == rational( 1 ) );
  CHECK( rational( 2 ) + rational( 3 ) == rational( 5 ) );
  CHECK( q( 2, 3 ) * q( 9, 4 ) == q( 3, 2 ) );
  CHECK( q( 1, 2 ) / q( 3, 4 ) == q( 2, 3 ) );
  CHECK( q( -1, 2 ) / q( -3, 4 ) == q( 2, 3 ) );
  CHECK( q( 1, 2 ) / q( -3, 4 ) == q( -2, 3 ) );
  CHECK_THROWS_AS( rational( 1 ) / rational( 0 ), std::domain_error );

  rational acc( 0 );
  for ( int i = 1; i <= 10; ++i )
  {
    acc += q( 1, i ) - q( 1, i + 1 );
  }
  CHECK( acc == q( 10, 11 ) );
}

TEST_CASE( "rational comparisons" )
{
  CHECK( q( 1, 3 ) < q( 1, 2 ) );
  CHECK( q( -1, 2 ) < rational( 0 ) );
  CHECK( q( 5, 7 ) <= q( 5, 7 ) );
  CHECK( q( 3, 2 ) > rational( 1 ) );
  CHECK( rational( -3 ) < rational( -2 ) );
  CHECK( q( 1, 1000000 ) > rational( 0 ) );
  CHECK( q( 2, 3 ).sign() == 1 );
  CHECK( q( -2, 3 ).sign() == -1 );
  CHECK( rational( 0 ).sign() == 0 );
}

TEST_CASE( "rational powers" )
{
  CHECK( q( 2, 3 ).pow( 3 ) == q( 8, 27 ) );
  CHECK( q( 2, 3 ).pow( -2 ) == q( 9, 4 ) );
  CHECK( q( -2, 3 ).pow( -3 ) == q( -27, 8 ) );
  CHECK( q( -2, 3 ).pow( 2 ) == q( 4, 9 ) );
  CHECK( rational( 0 ).pow( 0 ) == rational( 1 ) );
  CHECK( rational( 0 ).pow( 5 ) == rational( 0 ) );
  CHECK_THROWS_AS( rational( 0 ).pow( -1 ), std::domain_error );
}

TEST_CASE( "rational parsing and printing" )
{
  CHECK( rational::from_string( "5" ) == rational( 5 ) );
  CHECK( rational::from_string( "-7/2" ) == q( -7, 2 ) );
  CHECK( rational::from_string( "3/6" ) == q( 1, 2 ) );
  CHECK( rational::from_string( "+4/8" ) == q( 1, 2 ) );
  CHECK_THROWS_AS( rational::from_string( "" ), std::invalid_argument );
  CHECK_THROWS_AS( rational::from_string( "1/" ), std::invalid_argument );
  CHECK_THROWS_AS( rational::from_string( "/2" ), std::invalid_argument );
  CHECK_THROWS_AS( rational::from_string( "1/0" ), std::invalid_argument );
  CHECK_THROWS_AS( rational::from_string( "1.5" ), std::invalid_argument );
  CHECK_THROWS_AS( rational::from_string( "x" ), std::invalid_argument );

  CHECK( q( -3, 4 ).to_string() == "-3/4" );
  CHECK( rational( 17 ).to_string() == "17" );
  CHECK( rational::from_string( q( 355, 113 ).to_string() ) == q( 355, 113 ) );
}

TEST_CASE( "rational decimal rendering" )
{
  CHECK( q( 1, 3 ).to_decimal( 4 ) == "0.3333" );
  CHECK( q( 2, 3 ).to_decimal( 4 ) == "0.6667" );
  CHECK( q( -1, 8 ).to_decimal( 3 ) == "-0.125" );
  CHECK( rational( 5 ).to_decimal( 0 ) == "5" );
  CHECK( q( 1, 2 ).to_decimal( 0 ) == "1" );
  CHECK( q( -1, 1000 ).to_decimal( 2 ) == "0.00" );
  CHECK( rational( 12 ).to_decimal( 2 ) == "12.00" );
}

TEST_CASE( "rational large operands stay exact" )
{
  rational big = q( 2, 1 ).pow( 200 ) + q( 1, 3 );
  rational back = ( big - q( 1, 3 ) );
  CHECK( back == q( 2, 1 ).pow( 200 ) );
  CHECK( back.is_integer() );
  CHECK( big.denominator() == 3 );
}
