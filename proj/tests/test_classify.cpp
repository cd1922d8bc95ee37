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

#include <ccsp/classify.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

using namespace ccsp;

namespace
{

rational q( long long n, long long d ) { return rational( bigint( n ), bigint( d ) ); }

/* matrix order: fm(f00, f01, f10, f11); index 1 flips x1 */
fn_table fm( rational f00, rational f01, rational f10, rational f11 )
{
  return fn_table( 2, { f00, f10, f01, f11 } );
}

/* the anti-diagonal-heavy table [[1/2, 1], [1, 1/2]] */
fn_table antidiag_heavy()
{
  return fm( q( 1, 2 ), 1, 1, q( 1, 2 ) );
}

/* the decision rule read off directly, on top of the independent
 * test-side property oracles */
complexity_class direct_verdict( const std::vector<fn_table>& language )
{
  bool all_factor = true;
  for ( auto const& f : language )
  {
    all_factor = all_factor && oracles::is_product_form_direct( f );
  }
  if ( all_factor )
  {
    return complexity_class::product_form_fpras;
  }
  for ( auto const& f : language )
  {
    if ( !oracles::is_lsm_direct( f ) )
    {
      return complexity_class::sat_hard;
    }
  }
  return complexity_class::bis_hard;
}

/* random member of the factoring family: unary weights, scaled
 * (dis)equalities, rank-one products, and zero tables */
fn_table random_factoring( oracles::rng_t& rng )
{
  const auto u = [&] {
    return tables::unary( oracles::random_rational( rng, 0, 4, 3 ),
                          oracles::random_rational( rng, 0, 4, 3 ) );
  };
  switch ( rng() % 6 )
  {
  case 0:
    return u();
  case 1:
    return scale( tables::eq(), oracles::random_rational( rng, 1, 5, 2 ) );
  case 2:
    return scale( tables::neq(), oracles::random_rational( rng, 1, 5, 2 ) );
  case 3:
    return product( u(), u(), { 0 }, { 1 }, 2 );
  case 4:
    return scale( tables::equality( 3 ), oracles::random_rational( rng, 1, 5, 2 ) );
  default:
  {
    const uint32_t a = 1 + rng() % 2;
    return fn_table( a, std::vector<rational>( uint64_t( 1 ) << a, rational( 0 ) ) );
  }
  }
}

/* random log-supermodular table, by rejection */
fn_table random_lsm( oracles::rng_t& rng, uint32_t arity )
{
  int attempts = 0;
  while ( true )
  {
    REQUIRE( ++attempts < 200000 );
    auto f = oracles::random_table( rng, arity, 1, 6, 2 );
    if ( oracles::is_lsm_direct( f ) )
    {
      return f;
    }
  }
}

}  // namespace

TEST_CASE( "hardness verdicts on the canonical languages", "[classify]" )
{
  SECTION( "a skewed equality alone is bipartite-hard" )
  {
    const auto out = classify_language( { tables::eq_prime() } );
    REQUIRE( out.verdict == complexity_class::bis_hard );
    REQUIRE( out.witness_index == 0 );
    REQUIRE( out.obstruction.has_value() );
    CHECK( out.obstruction->reason == product_form_failure_reason::log_modularity );
    CHECK( out.obstruction->masks == std::vector<uint64_t>{ 1, 2 } );
    CHECK( !out.obstruction->positions.has_value() );
    CHECK( out.certificates.empty() );
    CHECK( !out.violation.has_value() );
  }

  SECTION( "an anti-diagonal-heavy table alone is satisfiability-hard" )
  {
    const auto f = antidiag_heavy();
    const auto out = classify_language( { f } );
    REQUIRE( out.verdict == complexity_class::sat_hard );
    REQUIRE( out.witness_index == 0 );
    REQUIRE( out.violation.has_value() );
    CHECK( out.violation == is_lsm( f ).witness );
    const auto [x, y] = *out.violation;
    CHECK( f.at( x | y ) * f.at( x & y ) < f.at( x ) * f.at( y ) );
    CHECK( !out.obstruction.has_value() );
  }

  SECTION( "disequality with arbitrary unary weights stays approximable" )
  {
    oracles::rng_t rng( 8001 );
    std::vector<fn_table> lang{ tables::neq() };
    for ( int t = 0; t < 10; ++t )
    {
      lang.push_back( tables::unary( oracles::random_rational( rng, 0, 6, 4 ),
                                     oracles::random_rational( rng, 0, 6, 4 ) ) );
    }
    const auto out = classify_language( lang );
    REQUIRE( out.verdict == complexity_class::product_form_fpras );
    REQUIRE( out.certificates.size() == lang.size() );
    for ( std::size_t i = 0; i < lang.size(); ++i )
    {
      CHECK( out.certificates[i].reconstruct() == lang[i] );
    }
    CHECK( !out.witness_index.has_value() );
  }

  SECTION( "implication alone is bipartite-hard through its support shape" )
  {
    const auto out = classify_language( { tables::imp() } );
    REQUIRE( out.verdict == complexity_class::bis_hard );
    REQUIRE( out.obstruction.has_value() );
    CHECK( out.obstruction->reason == product_form_failure_reason::projection_shape );
    CHECK( out.obstruction->positions == std::make_pair( uint32_t( 0 ), uint32_t( 1 ) ) );
    CHECK( out.obstruction->masks.empty() );
  }

  SECTION( "the witness is the first member that fails" )
  {
    const auto out = classify_language( { tables::all_ones( 2 ), tables::imp() } );
    REQUIRE( out.verdict == complexity_class::bis_hard );
    CHECK( out.witness_index == 1 );
  }

  SECTION( "a non-supermodular member decides even when another fails to factor" )
  {
    /* disequality factors but is not log-supermodular; the skewed
     * equality blocks the all-factor branch, so the language lands in
     * the hardest bucket with disequality as the witness */
    const auto out = classify_language( { tables::neq(), tables::eq_prime() } );
    REQUIRE( out.verdict == complexity_class::sat_hard );
    CHECK( out.witness_index == 0 );
    CHECK( out.violation == is_lsm( tables::neq() ).witness );
  }

  SECTION( "the empty language is rejected" )
  {
    CHECK_THROWS_AS( classify_language( {} ), std::invalid_argument );
  }
}

TEST_CASE( "verdicts match a direct reading of the decision rule", "[classify]" )
{
  oracles::rng_t rng( 8002 );
  int seen[3] = { 0, 0, 0 };
  for ( int t = 0; t < 120; ++t )
  {
    std::vector<fn_table> lang;
    const int len = 1 + static_cast<int>( rng() % 3 );
    for ( int i = 0; i < len; ++i )
    {
      switch ( rng() % 4 )
      {
      case 0:
        lang.push_back( random_factoring( rng ) );
        break;
      case 1:
        lang.push_back( oracles::random_table( rng, 1 + rng() % 3, 0, 4, 2 ) );
        break;
      case 2:
        lang.push_back( oracles::random_table( rng, 2, 1, 5, 3 ) );
        break;
      default:
        lang.push_back( random_lsm( rng, 2 + rng() % 2 ) );
        break;
      }
    }
    const auto out = classify_language( lang );
    REQUIRE( out.verdict == direct_verdict( lang ) );
    ++seen[static_cast<int>( out.verdict )];

    if ( out.verdict == complexity_class::product_form_fpras )
    {
      REQUIRE( out.certificates.size() == lang.size() );
      for ( std::size_t i = 0; i < lang.size(); ++i )
      {
        CHECK( out.certificates[i].reconstruct() == lang[i] );
      }
    }
    else if ( out.verdict == complexity_class::sat_hard )
    {
      std::size_t expect = 0;
      while ( oracles::is_lsm_direct( lang[expect] ) )
      {
        ++expect;
      }
      CHECK( out.witness_index == expect );
    }
    else
    {
      std::size_t expect = 0;
      while ( oracles::is_product_form_direct( lang[expect] ) )
      {
        ++expect;
      }
      CHECK( out.witness_index == expect );
    }
  }
  /* the generator must exercise every bucket */
  CHECK( seen[0] > 10 );
  CHECK( seen[1] > 10 );
  CHECK( seen[2] > 10 );
}

TEST_CASE( "a verdict survives positive rescaling", "[classify]" )
{
  oracles::rng_t rng( 8003 );
  for ( int t = 0; t < 60; ++t )
  {
    std::vector<fn_table> lang, scaled;
    const int len = 1 + static_cast<int>( rng() % 4 );
    for ( int i = 0; i < len; ++i )
    {
      auto f = ( rng() % 2 ) ? random_factoring( rng )
                             : oracles::random_table( rng, 1 + rng() % 3, 0, 5, 2 );
      scaled.push_back( scale( f, oracles::random_rational( rng, 1, 9, 5 ) ) );
      lang.push_back( std::move( f ) );
    }
    const auto a = classify_language( lang );
    const auto b = classify_language( scaled );
    CHECK( a.verdict == b.verdict );
    CHECK( a.witness_index == b.witness_index );
    if ( b.verdict == complexity_class::product_form_fpras )
    {
      for ( std::size_t i = 0; i < scaled.size(); ++i )
      {
        CHECK( b.certificates[i].reconstruct() == scaled[i] );
      }
    }
  }
}

TEST_CASE( "adjoining unary weights preserves approximability", "[classify]" )
{
  oracles::rng_t rng( 8004 );
  for ( int t = 0; t < 60; ++t )
  {
    std::vector<fn_table> lang;
    const int len = 1 + static_cast<int>( rng() % 4 );
    for ( int i = 0; i < len; ++i )
    {
      lang.push_back( random_factoring( rng ) );
    }
    REQUIRE( classify_language( lang ).verdict == complexity_class::product_form_fpras );

    const int extra = 1 + static_cast<int>( rng() % 3 );
    for ( int i = 0; i < extra; ++i )
    {
      lang.push_back( tables::unary( oracles::random_rational( rng, 0, 7, 4 ),
                                     oracles::random_rational( rng, 0, 7, 4 ) ) );
    }
    const auto out = classify_language( lang );
    REQUIRE( out.verdict == complexity_class::product_form_fpras );
    REQUIRE( out.certificates.size() == lang.size() );
    CHECK( out.certificates.back().reconstruct() == lang.back() );
  }
}

TEST_CASE( "hard verdicts re-verify through the analysis calls", "[classify]" )
{
  oracles::rng_t rng( 8005 );
  int sat_seen = 0, bis_seen = 0;
  for ( int t = 0; t < 45; ++t )
  {
    std::vector<fn_table> lang;
    if ( t % 3 == 0 )
    {
      /* guaranteed hardest bucket: one member both unfactorable and
       * not log-supermodular */
      lang.push_back( oracles::random_table( rng, 2, 1, 4, 2 ) );
      lang.push_back( antidiag_heavy() );
    }
    else if ( t % 3 == 1 )
    {
      /* guaranteed middle bucket: supermodular members only, one of
       * which fails to factor */
      lang.push_back( random_lsm( rng, 2 ) );
      lang.push_back( scale( tables::eq_prime(), oracles::random_rational( rng, 1, 4, 2 ) ) );
    }
    else
    {
      lang.push_back( oracles::random_table( rng, 2 + rng() % 2, 0, 4, 2 ) );
      lang.push_back( random_factoring( rng ) );
    }

    const auto out = classify_language( lang );
    if ( out.verdict == complexity_class::sat_hard )
    {
      ++sat_seen;
      const auto& f = lang[*out.witness_index];
      REQUIRE( !is_lsm( f ).holds );
      const auto ex = extract_nonlsm_binary( f );
      CHECK( ex.k >= 1 );
      CHECK( ( f.arity() != 2 || !is_lsm( ex.h_k ).holds ) );
      CHECK( ex.h_k.is_permissive() );
    }
    else if ( out.verdict == complexity_class::bis_hard )
    {
      ++bis_seen;
      for ( auto const& f : lang )
      {
        CHECK( is_lsm( f ).holds );
      }
      CHECK( !product_form_test( lang[*out.witness_index] ).ok() );
    }
  }
  CHECK( sat_seen >= 15 );
  CHECK( bis_seen >= 15 );
}

TEST_CASE( "per-function reports cover every analysis", "[classify]" )
{
  CHECK( witness_report( {} ).empty() );

  const std::vector<fn_table> lang{ tables::imp(),      tables::oplus3(),
                                    tables::all_ones( 3 ), tables::eq(),
                                    tables::unary( 2, 3 ), antidiag_heavy() };
  const auto rep = witness_report( lang );
  REQUIRE( rep.size() == lang.size() );
  for ( std::size_t i = 0; i < lang.size(); ++i )
  {
    CHECK( rep[i].table == lang[i] );
  }

  /* implication: supermodular, unfactorable, one negative spectrum
   * coefficient, but every pinned symmetrization is clean */
  CHECK( rep[0].lsm.holds );
  CHECK( !rep[0].product_form.ok() );
  REQUIRE( !rep[0].nonneg_spectrum.member );
  CHECK( rep[0].nonneg_spectrum.witness->first == 2 );
  CHECK( rep[0].nonneg_spectrum.witness->second == q( -1, 4 ) );
  CHECK( rep[0].pinned_spectrum.member );
  REQUIRE( rep[0].binary.has_value() );
  CHECK( rep[0].binary->kind == binary_case::imp_like );
  CHECK( rep[0].binary->canonical() == "IMP" );

  /* even parity on three arguments */
  REQUIRE( !rep[1].lsm.holds );
  CHECK( !rep[1].binary.has_value() );
  REQUIRE( !rep[1].product_form.ok() );
  CHECK( rep[1].product_form.failure->reason == product_form_failure_reason::support_mismatch );
  CHECK( rep[1].product_form.failure->masks == std::vector<uint64_t>{ 1 } );
  CHECK( rep[1].nonneg_spectrum.member );
  REQUIRE( !rep[1].pinned_spectrum.member );
  {
    pinning first_bad;
    first_bad[0] = 1; /* pinning the first argument high leaves disequality */
    CHECK( rep[1].pinned_spectrum.witness->assignment == first_bad );
    CHECK( rep[1].pinned_spectrum.witness->mask == 3 );
    CHECK( rep[1].pinned_spectrum.witness->value == q( -1, 2 ) );
  }

  /* the constant-one cube passes everything */
  CHECK( rep[2].lsm.holds );
  CHECK( rep[2].product_form.ok() );
  CHECK( rep[2].nonneg_spectrum.member );
  CHECK( rep[2].pinned_spectrum.member );
  CHECK( !rep[2].binary.has_value() );

  /* plain equality is its own binary case */
  REQUIRE( rep[3].binary.has_value() );
  CHECK( rep[3].binary->kind == binary_case::weighted_eq );

  /* unary members carry no binary classification but still factor */
  CHECK( !rep[4].binary.has_value() );
  REQUIRE( rep[4].product_form.ok() );
  CHECK( rep[4].product_form.certificate->reconstruct() == lang[4] );

  /* the anti-diagonal-heavy table is a plain disjunction shape */
  REQUIRE( !rep[5].lsm.holds );
  REQUIRE( rep[5].binary.has_value() );
  CHECK( rep[5].binary->kind == binary_case::or_like );
  CHECK( rep[5].binary->canonical() == "OR" );
}

TEST_CASE( "verdict names are stable", "[classify]" )
{
  CHECK( std::string( to_string( complexity_class::product_form_fpras ) ) ==
         "ProductForm_FPRAS" );
  CHECK( std::string( to_string( complexity_class::bis_hard ) ) == "BISHard" );
  CHECK( std::string( to_string( complexity_class::sat_hard ) ) == "SATHard" );
}
