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

#include "oracles.hpp"

#include <ccsp/table.hpp>
#include <ccsp/transforms.hpp>

using namespace ccsp;

namespace
{

rational q( long long n, long long d )
{
  return rational( bigint( n ), bigint( d ) );
}

/* quadratic-weight table of arity 4: 4 at the all-one point, 2 at
 * weight three, 1 elsewhere */
fn_table peaked4()
{
  std::vector<rational> v( 16, 1 );
  for ( uint64_t m = 0; m < 16; ++m )
  {
    if ( std::popcount( m ) == 4 )
    {
      v[m] = 4;
    }
    else if ( std::popcount( m ) == 3 )
    {
      v[m] = 2;
    }
  }
  return fn_table( 4, std::move( v ) );
}

} // namespace

TEST_CASE( "multiplicative transform matches its defining product" )
{
  oracles::rng_t rng( 1001 );
  for ( int t = 0; t < 40; ++t )
  {
    const uint32_t n = 1 + static_cast<uint32_t>( t % 4 );
    const auto f = oracles::random_permissive_table( rng, n, 8, 5 );
    const auto m = mobius( f );
    CHECK( m.coeffs == oracles::mobius_direct( f ) );
    CHECK( mobius_inverse( m ) == f );
  }
}

TEST_CASE( "multiplicative transform frozen values" )
{
  const auto m = mobius( tables::eq_prime() );
  CHECK( m.coeffs == std::vector<rational>{ 2, q( 1, 2 ), q( 1, 2 ), 4 } );

  const auto u = mobius( tables::unary( 3, 5 ) );
  CHECK( u.coeffs == std::vector<rational>{ 3, q( 5, 3 ) } );

  CHECK_THROWS_AS( mobius( tables::eq() ), std::domain_error );
  CHECK_THROWS_AS( mobius( fn_table( 1, { 0, 0 } ) ), std::domain_error );

  /* nullary table transforms to itself */
  CHECK( mobius( tables::half() ).coeffs == std::vector<rational>{ q( 1, 2 ) } );
}

TEST_CASE( "mobius_inverse validates its input" )
{
  CHECK_THROWS_AS( mobius_inverse( mobius_table{ 1, { 1, 0 } } ), std::invalid_argument );
  CHECK_THROWS_AS( mobius_inverse( mobius_table{ 2, { 1, 1 } } ), std::invalid_argument );
}

TEST_CASE( "character transform matches its defining sum" )
{
  oracles::rng_t rng( 1002 );
  for ( int t = 0; t < 40; ++t )
  {
    const uint32_t n = static_cast<uint32_t>( t % 5 );
    const auto f = oracles::random_table( rng, n, 0, 9, 4 );
    const auto fh = fourier( f );
    CHECK( fh.coeffs == oracles::fourier_direct( f ) );
    CHECK( fourier_inverse( fh ) == f );
  }
}

TEST_CASE( "character transform frozen values" )
{
  CHECK( fourier( tables::eq_prime() ).coeffs ==
         std::vector<rational>{ q( 3, 2 ), 0, 0, q( 1, 2 ) } );
  CHECK( fourier( tables::neq() ).coeffs[3] == q( -1, 2 ) );

  /* the parity table transforms to half the ternary equality table */
  const auto ph = fourier( tables::oplus3() );
  for ( uint64_t m = 0; m < 8; ++m )
  {
    CHECK( ph.coeffs[m] == ( m == 0 || m == 7 ? q( 1, 2 ) : rational( 0 ) ) );
  }

  /* symmetrized peaked table: negative top coefficient */
  const auto s = star( peaked4() );
  for ( uint64_t m = 0; m < 16; ++m )
  {
    const int w = std::popcount( m );
    const long long expected[] = { 4, 2, 1, 2, 4 };
    CHECK( s.at( m ) == rational( expected[w] ) );
  }
  CHECK( fourier( s ).coeffs[15] == q( -1, 8 ) );
}

TEST_CASE( "fourier_inverse rejects spectra of signed functions" )
{
  /* spectrum with a lone negative coefficient reconstructs negative
   * somewhere */
  fourier_table t{ 1, { 0, q( -1, 2 ) } };
  CHECK_THROWS_AS( fourier_inverse( t ), std::domain_error );
}

TEST_CASE( "convolution identity holds for random pairs" )
{
  oracles::rng_t rng( 1003 );
  for ( int t = 0; t < 25; ++t )
  {
    const uint32_t n = static_cast<uint32_t>( t % 4 );
    const auto f = oracles::random_table( rng, n, 0, 6, 3 );
    const auto g = oracles::random_table( rng, n, 0, 6, 3 );
    CHECK( convolution_check( f, g ) );
  }
  CHECK_THROWS_AS( convolution_check( tables::eq(), tables::delta0() ),
                   std::invalid_argument );
}

TEST_CASE( "nonnegative-spectrum membership" )
{
  CHECK( in_class_p( tables::eq() ).member );
  CHECK( in_class_p( tables::eq_prime() ).member );
  CHECK( in_class_p( tables::all_ones( 3 ) ).member );
  CHECK( in_class_p( fn_table( 2, { 0, 0, 0, 0 } ) ).member );

  const auto r = in_class_p( tables::imp() );
  REQUIRE( !r.member );
  CHECK( r.witness->first == 2 );
  CHECK( r.witness->second == q( -1, 4 ) );

  const auto rn = in_class_p( tables::neq() );
  REQUIRE( !rn.member );
  CHECK( rn.witness->first == 3 );
  CHECK( rn.witness->second == q( -1, 2 ) );
}

TEST_CASE( "closure of the nonnegative-spectrum class" )
{
  /* members are produced from a random nonnegative spectrum whose
   * constant coefficient dominates, which guarantees a nonnegative
   * function; products and sums of members must stay members */
  oracles::rng_t rng( 1004 );
  const auto random_member = [&]( uint32_t n ) {
    std::vector<rational> c;
    rational total( 0 );
    c.emplace_back( 0 );
    for ( uint64_t y = 1; y < ( uint64_t( 1 ) << n ); ++y )
    {
      c.push_back( oracles::random_rational( rng, 0, 4, 2 ) );
      total += c.back();
    }
    c.front() = total + oracles::random_rational( rng, 0, 3, 1 );
    return fourier_inverse( fourier_table{ n, std::move( c ) } );
  };
  for ( int t = 0; t < 30; ++t )
  {
    const uint32_t n = 2 + static_cast<uint32_t>( t % 2 );
    const auto f = random_member( n );
    const auto g = random_member( n );
    REQUIRE( in_class_p( f ).member );
    REQUIRE( in_class_p( g ).member );
    CHECK( in_class_p( pointwise_product( f, g ) ).member );
    CHECK( in_class_p( add( f, g ) ).member );
    for ( uint32_t i = 0; i < n; ++i )
    {
      CHECK( in_class_p( sum_out( f, i ) ).member );
    }
  }
}

TEST_CASE( "pinned-symmetrization membership" )
{
  CHECK( in_class_c( tables::eq_prime() ).member );
  CHECK( in_class_c( tables::imp() ).member ); /* star(imp) = eq */
  CHECK( in_class_c( tables::eq3() ).member );
  CHECK( in_class_c( tables::delta1() ).member ); /* nothing to pin */

  const auto r = in_class_c( peaked4() );
  REQUIRE( !r.member );
  CHECK( r.witness->assignment.empty() );
  CHECK( r.witness->mask == 15 );
  CHECK( r.witness->value == q( -1, 8 ) );
}

TEST_CASE( "pinned-symmetrization witness picks the first failing pinning" )
{
  /* embed the binary disequality into one pair of a 3-ary table; the
   * witness must name the first pinned constant that exposes it */
  std::vector<rational> v( 8, 0 );
  /* f(x1, x2, x3) = neq(x1, x2) when x3 = 0, all-one when x3 = 1 */
  for ( uint64_t m = 0; m < 8; ++m )
  {
    const bool x1 = test_bit( m, 0 ), x2 = test_bit( m, 1 ), x3 = test_bit( m, 2 );
    v[m] = x3 ? rational( 1 ) : rational( x1 != x2 ? 1 : 0 );
  }
  const auto f = fn_table( 3, std::move( v ) );
  const auto r = in_class_c( f );
  REQUIRE( !r.member );
  /* star(f) is identically zero only off the x3-slices; the empty
   * pinning already fails: star(f)(m) = f(m) * f(~m) */
  CHECK( r.witness->assignment == pinning{} );
}
