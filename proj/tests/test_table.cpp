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

#include <ccsp/table.hpp>

using namespace ccsp;

namespace
{

rational q( long long n, long long d )
{
  return rational( bigint( n ), bigint( d ) );
}

} // namespace

TEST_CASE( "table construction and validation" )
{
  const auto f = fn_table( 2, { 1, 0, 1, 1 } );
  CHECK( f.arity() == 2 );
  CHECK( f.size() == 4 );
  CHECK( f.at( 0 ) == rational( 1 ) );
  CHECK( f.at( 1 ) == rational( 0 ) );

  CHECK_THROWS_AS( fn_table( 2, { 1, 0, 1 } ), std::invalid_argument );
  CHECK_THROWS_AS( fn_table( 1, { 1, q( -1, 2 ) } ), std::invalid_argument );

  /* the all-zero function is a legal table */
  const auto z = fn_table( 2, { 0, 0, 0, 0 } );
  CHECK( z.is_zero() );
  CHECK( underlying_relation( z ).empty() );
}

TEST_CASE( "table arity cap is configurable" )
{
  const auto old_cap = max_table_arity();
  set_max_table_arity( 4 );
  CHECK_THROWS_AS( fn_table::constant( 5, 1 ), std::domain_error );
  CHECK_NOTHROW( fn_table::constant( 4, 1 ) );
  set_max_table_arity( old_cap );
  CHECK_NOTHROW( fn_table::constant( 5, 1 ) );
}

TEST_CASE( "first argument sits in the least significant bit" )
{
  /* imp(x1, x2) vanishes exactly at x1 = 1, x2 = 0, i.e. index 1 */
  const auto f = tables::imp();
  CHECK( f.at( 0 ) == rational( 1 ) );
  CHECK( f.at( 1 ) == rational( 0 ) );
  CHECK( f.at( 2 ) == rational( 1 ) );
  CHECK( f.at( 3 ) == rational( 1 ) );
  CHECK( mask_to_tuple( 1, 2 ) == "(1,0)" );
  CHECK( mask_to_tuple( 5, 3 ) == "(1,0,1)" );
}

TEST_CASE( "named tables" )
{
  CHECK( tables::eq() == fn_table( 2, { 1, 0, 0, 1 } ) );
  CHECK( tables::neq() == fn_table( 2, { 0, 1, 1, 0 } ) );
  CHECK( tables::or_table() == fn_table( 2, { 0, 1, 1, 1 } ) );
  CHECK( tables::nand_table() == fn_table( 2, { 1, 1, 1, 0 } ) );
  CHECK( tables::delta0() == fn_table( 1, { 1, 0 } ) );
  CHECK( tables::delta1() == fn_table( 1, { 0, 1 } ) );
  CHECK( tables::eq_prime() == fn_table( 2, { 2, 1, 1, 2 } ) );
  CHECK( tables::eq3() == tables::equality( 3 ) );
  CHECK( tables::half().arity() == 0 );
  CHECK( tables::half().at( 0 ) == q( 1, 2 ) );

  /* even-parity support of the ternary parity table */
  const auto p = tables::oplus3();
  for ( uint64_t m = 0; m < 8; ++m )
  {
    const bool even = std::popcount( m ) % 2 == 0;
    CHECK( p.at( m ) == rational( even ? 1 : 0 ) );
  }

  CHECK( tables::equality( 0 ) == tables::nullary( 1 ) );
  CHECK( tables::unary( q( 1, 2 ), 3 ) == fn_table( 1, { q( 1, 2 ), 3 } ) );
}

TEST_CASE( "pinning arguments" )
{
  const auto f = tables::imp();
  CHECK( pin( f, { { 0, 1 } } ) == tables::delta1() );
  CHECK( pin( f, { { 0, 0 } } ) == fn_table( 1, { 1, 1 } ) );
  CHECK( pin( f, { { 1, 0 } } ) == tables::delta0() );
  CHECK( pin( f, { { 0, 1 }, { 1, 0 } } ) == tables::nullary( 0 ) );
  CHECK( pin( f, {} ) == f );
  CHECK_THROWS_AS( pin( f, { { 2, 0 } } ), std::invalid_argument );
  CHECK_THROWS_AS( pin( f, { { 0, 2 } } ), std::invalid_argument );

  /* surviving positions keep their relative order */
  const auto g = fn_table( 3, { 0, 1, 2, 3, 4, 5, 6, 7 } );
  const auto h = pin( g, { { 1, 1 } } ); /* h(x1, x3) = g(x1, 1, x3) */
  CHECK( h == fn_table( 2, { 2, 3, 6, 7 } ) );
}

TEST_CASE( "binary pinning enumeration" )
{
  const auto g = fn_table( 3, { 0, 1, 2, 3, 4, 5, 6, 7 } );
  const auto ps = two_pinnings( g );
  REQUIRE( ps.size() == 6 );

  /* lexicographic pairs, constants in ascending mask order */
  CHECK( ps[0].i == 0 );
  CHECK( ps[0].j == 1 );
  CHECK( ps[0].assignment == pinning{ { 2, 0 } } );
  CHECK( ps[0].table == fn_table( 2, { 0, 1, 2, 3 } ) );
  CHECK( ps[1].assignment == pinning{ { 2, 1 } } );
  CHECK( ps[1].table == fn_table( 2, { 4, 5, 6, 7 } ) );
  CHECK( ps[2].i == 0 );
  CHECK( ps[2].j == 2 );
  CHECK( ps[2].table == fn_table( 2, { 0, 1, 4, 5 } ) );
  CHECK( ps[5].i == 1 );
  CHECK( ps[5].j == 2 );
  CHECK( ps[5].assignment == pinning{ { 0, 1 } } );
  CHECK( ps[5].table == fn_table( 2, { 1, 3, 5, 7 } ) );

  CHECK( two_pinnings( tables::delta0() ).empty() );
  CHECK( two_pinnings( tables::eq() ).size() == 1 );
  CHECK( two_pinnings( tables::eq() )[0].table == tables::eq() );
}

TEST_CASE( "products under scopes" )
{
  /* imp(x1,x2) * imp(x2,x1) is the equality indicator */
  const auto f = tables::imp();
  CHECK( product( f, f, { 0, 1 }, { 1, 0 }, 2 ) == tables::eq() );

  /* diagonalization through a repeated scope position */
  const auto diag = product( tables::eq(), tables::all_ones( 0 ), { 0, 0 }, {}, 1 );
  CHECK( diag == fn_table( 1, { 1, 1 } ) );

  /* disjoint scopes build the tensor product */
  const auto t = product( tables::delta1(), tables::delta0(), { 1 }, { 0 }, 2 );
  CHECK( t == fn_table( 2, { 0, 0, 1, 0 } ) );

  CHECK_THROWS_AS( product( f, f, { 0 }, { 0, 1 }, 2 ), std::invalid_argument );
  CHECK_THROWS_AS( product( f, f, { 0, 2 }, { 0, 1 }, 2 ), std::invalid_argument );
}

TEST_CASE( "summing out arguments" )
{
  CHECK( sum_out( tables::nand_table(), 1 ) == fn_table( 1, { 2, 1 } ) );
  CHECK( sum_out( tables::eq(), 0 ) == fn_table( 1, { 1, 1 } ) );
  CHECK( sum_out( tables::delta1(), 0 ) == tables::nullary( 1 ) );
  CHECK_THROWS_AS( sum_out( tables::eq(), 2 ), std::invalid_argument );

  /* order of elimination does not matter */
  const auto g = fn_table( 3, { 0, 1, 2, 3, 4, 5, 6, 7 } );
  CHECK( sum_out( sum_out( g, 0 ), 1 ) == sum_out( sum_out( g, 2 ), 0 ) );
}

TEST_CASE( "bar and star" )
{
  CHECK( bar( tables::imp() ) == fn_table( 2, { 1, 1, 0, 1 } ) );
  CHECK( bar( bar( tables::imp() ) ) == tables::imp() );
  CHECK( bar( tables::eq() ) == tables::eq() );
  CHECK( star( tables::imp() ) == tables::eq() );
  CHECK( star( tables::eq_prime() ) == fn_table( 2, { 4, 1, 1, 4 } ) );
  CHECK( star( tables::delta1() ) == fn_table( 1, { 0, 0 } ) );
}

TEST_CASE( "support and permissiveness" )
{
  CHECK( underlying_relation( tables::imp() ) == std::vector<uint64_t>{ 0, 2, 3 } );
  CHECK( underlying_relation( tables::eq_prime() ) == std::vector<uint64_t>{ 0, 1, 2, 3 } );
  CHECK( is_permissive( tables::eq_prime() ) );
  CHECK( !is_permissive( tables::eq() ) );
  CHECK( is_permissive( tables::nullary( q( 1, 2 ) ) ) );
  CHECK( !is_permissive( tables::nullary( 0 ) ) );
}

TEST_CASE( "pointwise helpers" )
{
  CHECK( add( tables::eq(), tables::neq() ) == tables::all_ones( 2 ) );
  CHECK( pointwise_product( tables::imp(), tables::nand_table() ) ==
         fn_table( 2, { 1, 0, 1, 0 } ) );
  CHECK( scale( tables::eq(), q( 1, 2 ) ) ==
         fn_table( 2, { q( 1, 2 ), 0, 0, q( 1, 2 ) } ) );
  CHECK_THROWS_AS( add( tables::eq(), tables::delta0() ), std::invalid_argument );
}
