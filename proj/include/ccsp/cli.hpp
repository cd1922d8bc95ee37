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
  \file cli.hpp
  \brief Command-line front end

  Subcommands: `eval` (exact tables and partition values), `analyze`
  dnd `classify` (JSON reports), `synth` (gadget pipelines as
  documents), and `verify` (seeded invariant suites).  Exit codes are a
  stable contract: 0 on success, 1 when a verified property fails (the
  counterexample is dumped) or an evaluation gives up, 2 on usage or
  parse errors.  `--threads` never changes any output.
*/

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "classify.hpp"
#include "dsl.hpp"
#include "formula.hpp"
#include "gadgets.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "table.hpp"
#include "transforms.hpp"
#include "workspace.hpp"

namespace ccsp
{
namespace cli_detail
{

inline std::string read_file( const std::string& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw std::invalid_argument( "cannot open '" + path + "'" );
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/*! Files load as documents; directories contribute their `.ccsp`
 * files in name order. */
inline workspace load_workspace( const std::vector<std::string>& paths )
{
  std::vector<std::string> files;
  for ( const auto& p : paths )
  {
    if ( std::filesystem::is_directory( p ) )
    {
      std::vector<std::string> found;
      for ( const auto& entry : std::filesystem::directory_iterator( p ) )
      {
        if ( entry.is_regular_file() && entry.path().extension() == ".ccsp" )
        {
          found.push_back( entry.path().string() );
        }
      }
      std::sort( found.begin(), found.end() );
      files.insert( files.end(), found.begin(), found.end() );
    }
    else
    {
      files.push_back( p );
    }
  }
  workspace ws;
  for ( const auto& f : files )
  {
    try
    {
      ws.absorb( parse_document( read_file( f ) ) );
    }
    catch ( const parse_error& e )
    {
      throw std::invalid_argument( f + ": " + e.what() );
    }
  }
  return ws;
}

inline std::string table_line( const fn_table& f )
{
  std::string line;
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    if ( m > 0 )
    {
      line += " ";
    }
    line += f.at( m ).to_string();
  }
  return line;
}

/*! Binary numeral -> mask: the character at value position 2^i sets
 * bit i, i.e. the numeral is written most-significant-bit first. */
inline uint64_t parse_mask( const std::string& numeral )
{
  if ( numeral.empty() || numeral.size() > 63 )
  {
    throw std::invalid_argument( "mask numeral '" + numeral + "' is empty or too long" );
  }
  uint64_t mask = 0;
  for ( char c : numeral )
  {
    if ( c != '0' && c != '1' )
    {
      throw std::invalid_argument( "mask numeral '" + numeral +
                                   "' has a character besides 0 and 1" );
    }
    mask = ( mask << 1 ) | uint64_t( c == '1' );
  }
  return mask;
}

/* -------------------------------------------------------------------------
 * eval
 * ---------------------------------------------------------------------- */

struct eval_args
{
  std::vector<std::string> paths;
  std::string target;
  int precision = -1;
  uint32_t arity_cap = 22;
  unsigned threads = 1;
  bool json = false;
};

inline int cmd_eval( const eval_args& a, std::ostream& out )
{
  const auto ws = load_workspace( a.paths );
  std::string target = a.target;
  if ( target.empty() )
  {
    if ( ws.formulas.size() + ws.instances.size() != 1 )
    {
      std::string names;
      for ( const auto& [n, psi] : ws.formulas )
      {
        names += " " + n;
      }
      for ( const auto& [n, inst] : ws.instances )
      {
        names += " " + n;
      }
      throw std::invalid_argument(
          "eval: pass --target to pick a formula or instance; loaded:" +
          ( names.empty() ? " none" : names ) );
    }
    target = ws.formulas.empty() ? ws.instances[0].first : ws.formulas[0].first;
  }
  const auto kind = ws.kind( target );
  if ( !kind || *kind == def_kind::table )
  {
    throw std::invalid_argument( "eval: '" + target +
                                 "' is not a formula or instance" );
  }
  const eval_options opt{ a.arity_cap, a.threads };
  if ( *kind == def_kind::formula )
  {
    const auto tbl = evaluate( ws.formula( target ), ws.env(), opt );
    if ( a.json )
    {
      json j = table_json( tbl );
      j["target"] = target;
      j["kind"] = "formula";
      if ( a.precision >= 0 )
      {
        json dec = json::array();
        for ( uint64_t m = 0; m < tbl.size(); ++m )
        {
          dec.push_back( tbl.at( m ).to_decimal( unsigned( a.precision ) ) );
        }
        j["decimals"] = std::move( dec );
        j["precision"] = a.precision;
      }
      out << j.dump( 2 ) << "\n";
      return 0;
    }
    out << table_line( tbl ) << "\n";
    if ( a.precision >= 0 )
    {
      std::string line;
      for ( uint64_t m = 0; m < tbl.size(); ++m )
      {
        if ( m > 0 )
        {
          line += " ";
        }
        line += tbl.at( m ).to_decimal( unsigned( a.precision ) );
      }
      out << line << "\n";
    }
    return 0;
  }
  const auto z = partition_function( ws.instance( target ), ws.env(), opt );
  if ( a.json )
  {
    json j{ { "target", target }, { "kind", "instance" }, { "value", z.to_string() } };
    if ( a.precision >= 0 )
    {
      j["decimal"] = z.to_decimal( unsigned( a.precision ) );
      j["precision"] = a.precision;
    }
    out << j.dump( 2 ) << "\n";
    return 0;
  }
  out << z.to_string() << "\n";
  if ( a.precision >= 0 )
  {
    out << z.to_decimal( unsigned( a.precision ) ) << "\n";
  }
  return 0;
}

/* -------------------------------------------------------------------------
 * analyze / classify
 * ---------------------------------------------------------------------- */

struct report_args
{
  std::vector<std::string> paths;
  std::string target;
  bool json = false;
};

inline std::vector<std::pair<std::string, fn_table>> pick_tables( const workspace& ws,
                                                                  const std::string& target )
{
  if ( target.empty() )
  {
    return ws.tables;
  }
  return { { target, ws.table( target ) } };
}

inline int cmd_analyze( const report_args& a, std::ostream& out )
{
  const auto ws = load_workspace( a.paths );
  out << analyze_report( pick_tables( ws, a.target ) ).dump( 2 ) << "\n";
  return 0;
}

inline int cmd_classify( const report_args& a, std::ostream& out )
{
  const auto ws = load_workspace( a.paths );
  out << classify_report( pick_tables( ws, a.target ) ).dump( 2 ) << "\n";
  return 0;
}

/* -------------------------------------------------------------------------
 * synth
 * ---------------------------------------------------------------------- */

struct synth_args
{
  /* shared */
  std::string out_path;
  uint32_t precision = 20;
  bool json = false;
  /* or-universal */
  std::vector<std::string> paths;
  std::string name;
  /* chi */
  std::string y0;
  std::string c;
  uint32_t arity = 0;
  /* ising */
  std::string rows;
  std::string y;
  uint32_t cols = 0;
  /* unary */
  std::string at0, at1;
  std::string route = "imp";
};

/*! Emits a synthesized document: to `out_path` with a summary on
 * stdout, or inline with the summary as leading comments. */
inline void emit_document( const synth_args& a, std::ostream& out,
                           const std::vector<std::string>& summary,
                           const dsl_document& doc, json j )
{
  const std::string text = serialize_document( doc );
  if ( a.json )
  {
    j["document"] = text;
    out << j.dump( 2 ) << "\n";
    return;
  }
  if ( !a.out_path.empty() )
  {
    std::ofstream f( a.out_path, std::ios::binary );
    if ( !f )
    {
      throw std::invalid_argument( "cannot write '" + a.out_path + "'" );
    }
    for ( const auto& line : summary )
    {
      f << "# " << line << "\n";
    }
    f << text;
    for ( const auto& line : summary )
    {
      out << line << "\n";
    }
    out << "wrote " << a.out_path << "\n";
    return;
  }
  for ( const auto& line : summary )
  {
    out << "# " << line << "\n";
  }
  out << text;
}

inline int cmd_synth_or_universal( const synth_args& a, std::ostream& out )
{
  const auto ws = load_workspace( a.paths );
  std::string name = a.name;
  if ( name.empty() )
  {
    if ( ws.tables.size() != 1 )
    {
      throw std::invalid_argument( "synth or-universal: pass --name to pick one of " +
                                   std::to_string( ws.tables.size() ) +
                                   " loaded tables" );
    }
    name = ws.tables[0].first;
  }
  const auto& f = ws.table( name );
  const auto pipe = or_universal( f );
  const uint64_t k =
      pipe.plan.exact ? 0
                      : schedule_k( pipe.plan,
                                    rational( bigint( 1 ), bigint( 1 ) << a.precision ),
                                    /* strict = */ true );

  dsl_document doc;
  for ( const auto& [sym, tbl] : pipe.plan.symbols )
  {
    doc.tables.emplace_back( sym, tbl );
  }
  doc.formulas.emplace_back( "STAGE1", pipe.psi1 );
  doc.formulas.emplace_back( "STAGE2", pipe.psi2 );
  doc.formulas.emplace_back( "PIPELINE", instantiate( pipe.plan, k ) );

  std::vector<std::string> summary;
  summary.push_back( "or-universal pipeline for " + name );
  summary.push_back( "mu = " + pipe.mu.to_string() );
  std::string supp = "support =";
  for ( auto m : pipe.support )
  {
    supp += " " + std::to_string( m );
  }
  summary.push_back( supp );
  json j{ { "kind", "or-universal" },
          { "source", name },
          { "mu", pipe.mu.to_string() },
          { "support", pipe.support },
          { "exact", pipe.plan.exact } };
  if ( pipe.plan.exact )
  {
    summary.push_back( "exact: PIPELINE evaluates to the target" );
  }
  else
  {
    summary.push_back( "k = " + std::to_string( k ) + " repetitions for sup error < 2^-" +
                       std::to_string( a.precision ) );
    j["k"] = k;
    j["prefactor"] = pipe.plan.prefactor.to_string();
    j["ratio"] = pipe.plan.ratio.to_string();
  }
  emit_document( a, out, summary, doc, std::move( j ) );
  return 0;
}

inline int cmd_synth_chi( const synth_args& a, std::ostream& out )
{
  const uint64_t y0 = parse_mask( a.y0 );
  const auto arity = a.arity > 0 ? a.arity : static_cast<uint32_t>( a.y0.size() );
  const auto c = rational::from_string( a.c );
  const auto chi = chi_builder( arity, y0, c );

  dsl_document doc;
  for ( const auto& [sym, tbl] : chi.symbols )
  {
    doc.tables.emplace_back( sym, tbl );
  }
  doc.formulas.emplace_back( "CHI", chi.formula );

  std::vector<std::string> summary;
  summary.push_back( "threshold factor: value " + c.to_string() + " above mask " +
                     std::to_string( y0 ) + ", 1 elsewhere" );
  summary.push_back( "table = " + table_line( chi.table ) );
  json j{ { "kind", "chi" },
          { "arity", arity },
          { "y0", y0 },
          { "c", c.to_string() },
          { "table", table_json( chi.table ) } };
  emit_document( a, out, summary, doc, std::move( j ) );
  return 0;
}

inline int cmd_synth_ising( const synth_args& a, std::ostream& out )
{
  gf2_matrix m;
  std::string row;
  std::istringstream rows( a.rows );
  while ( std::getline( rows, row, ',' ) )
  {
    m.rows.push_back( parse_mask( row ) );
    if ( a.cols == 0 && row.size() > m.cols )
    {
      m.cols = static_cast<uint32_t>( row.size() );
    }
  }
  if ( a.cols > 0 )
  {
    m.cols = a.cols;
  }
  const auto y = rational::from_string( a.y );
  const auto red = ising_reduction( m, y );

  dsl_document doc;
  for ( const auto& [sym, tbl] : red.symbols )
  {
    doc.tables.emplace_back( sym, tbl );
  }
  doc.instances.emplace_back( "ISING", red.instance );

  std::vector<std::string> summary;
  summary.push_back( "parity form of the Ising sum at y = " + y.to_string() );
  summary.push_back( "scale = " + red.scale.to_string() );
  summary.push_back( "w = " + red.w.to_string() );
  json j{ { "kind", "ising" },
          { "cols", m.cols },
          { "rows", m.rows },
          { "y", y.to_string() },
          { "scale", red.scale.to_string() },
          { "w", red.w.to_string() } };
  if ( m.cols <= 16 )
  {
    const auto value = ising_value( m, y );
    summary.push_back( "value = " + value.to_string() );
    j["value"] = value.to_string();
  }
  emit_document( a, out, summary, doc, std::move( j ) );
  return 0;
}

inline int cmd_synth_unary( const synth_args& a, std::ostream& out )
{
  const auto g = tables::unary( rational::from_string( a.at0 ),
                                rational::from_string( a.at1 ) );
  unary_route route;
  if ( a.route == "imp" )
  {
    route = unary_route::imp_route;
  }
  else if ( a.route == "or" )
  {
    route = unary_route::or_route;
  }
  else if ( a.route == "nand" )
  {
    route = unary_route::nand_route;
  }
  else
  {
    throw std::invalid_argument( "synth unary: route must be imp, or, or nand" );
  }
  const auto syn = synth_unary( g, route, a.precision );

  dsl_document doc;
  for ( const auto& [sym, tbl] : syn.symbols )
  {
    doc.tables.emplace_back( sym, tbl );
  }
  doc.formulas.emplace_back( "U", syn.formula );

  std::vector<std::string> summary;
  summary.push_back( "unary target over the " + a.route + " basis" );
  summary.push_back( "table = " + table_line( g ) );
  json j{ { "kind", "unary" },
          { "route", a.route },
          { "table", table_json( g ) } };
  emit_document( a, out, summary, doc, std::move( j ) );
  return 0;
}

/* -------------------------------------------------------------------------
 * verify
 * ---------------------------------------------------------------------- */

struct verify_args
{
  std::string lemma;
  uint32_t n = 0; /* 0 = lemma default */
  uint32_t trials = 0;
  uint64_t seed = 1;
  unsigned threads = 1;
  bool json = false;
};

/*! Accumulates pass/fail plus a counterexample dump. */
struct verify_state
{
  uint64_t checked = 0;
  bool pass = true;
  std::vector<std::string> dump;

  void fail( std::vector<std::string> lines )
  {
    if ( pass )
    {
      pass = false;
      dump = std::move( lines );
    }
  }
};

using verify_rng = std::mt19937_64;

inline rational random_rational_cli( verify_rng& rng, long long lo, long long hi,
                                     long long max_den )
{
  std::uniform_int_distribution<long long> num( lo, hi );
  std::uniform_int_distribution<long long> den( 1, max_den );
  return rational( bigint( num( rng ) ), bigint( den( rng ) ) );
}

inline fn_table random_table_cli( verify_rng& rng, uint32_t arity, long long lo,
                                  long long hi, long long max_den )
{
  std::vector<rational> v;
  for ( uint64_t m = 0; m < ( uint64_t( 1 ) << arity ); ++m )
  {
    v.push_back( random_rational_cli( rng, lo, hi, max_den ) );
  }
  return fn_table( arity, std::move( v ) );
}

/*! Equivalence of the definitional and pinning-based supermodularity
 * tests: exhaustive on a value grid up to arity 3, randomized at 4. */
inline void verify_topkis( const verify_args& a, verify_rng& rng, verify_state& st )
{
  const uint32_t n = a.n ? a.n : 3;
  if ( n < 2 || n > 4 )
  {
    throw std::invalid_argument( "verify topkis: --n must be 2, 3, or 4" );
  }
  const auto check = [&]( const fn_table& f ) {
    const auto direct = is_lsm( f );
    const auto pinned = is_lsm_topkis( f );
    ++st.checked;
    if ( direct.holds != pinned.holds )
    {
      st.fail( { serialize_table( "F", f ),
                 std::string( "is_lsm: " ) + ( direct.holds ? "true" : "false" ),
                 std::string( "is_lsm_topkis: " ) + ( pinned.holds ? "true" : "false" ) } );
    }
  };
  const rational grid[3] = { rational( 1 ), rational( 2 ), rational( 1, 2 ) };
  for ( uint32_t arity = 2; arity <= std::min<uint32_t>( n, 3 ); ++arity )
  {
    const uint64_t cells = uint64_t( 1 ) << arity;
    std::vector<uint32_t> pick( cells, 0 );
    for ( ;; )
    {
      std::vector<rational> v;
      for ( auto p : pick )
      {
        v.push_back( grid[p] );
      }
      check( fn_table( arity, std::move( v ) ) );
      uint64_t i = 0;
      while ( i < cells && ++pick[i] == 3 )
      {
        pick[i++] = 0;
      }
      if ( i == cells )
      {
        break;
      }
    }
  }
  if ( n == 4 )
  {
    const uint32_t trials = a.trials ? a.trials : 500;
    for ( uint32_t t = 0; t < trials; ++t )
    {
      check( random_table_cli( rng, 4, 1, 6, 2 ) );
    }
  }
}

/*! Products, sums, and summations stay inside the two spectrum
 * classes. */
inline void verify_closure( const verify_args& a, verify_rng& rng, verify_state& st )
{
  const uint32_t n = std::max<uint32_t>( 2, std::min<uint32_t>( a.n ? a.n : 3, 4 ) );
  const uint32_t trials = a.trials ? a.trials : 50;

  const auto spectrum_member = [&]( uint32_t arity ) {
    /* a dominant constant coefficient keeps every value nonnegative */
    std::vector<rational> c;
    rational total( 0 );
    c.emplace_back( 0 );
    for ( uint64_t yy = 1; yy < ( uint64_t( 1 ) << arity ); ++yy )
    {
      c.push_back( random_rational_cli( rng, 0, 4, 2 ) );
      total += c.back();
    }
    c.front() = total + random_rational_cli( rng, 0, 3, 1 );
    return fourier_inverse( fourier_table{ arity, std::move( c ) } );
  };

  for ( uint32_t t = 0; t < trials; ++t )
  {
    const uint32_t arity = 2 + t % ( n - 1 );
    const auto f = spectrum_member( arity );
    const auto g = spectrum_member( arity );
    const auto note = [&]( const char* op, const fn_table& h ) {
      ++st.checked;
      if ( !in_class_p( h ).member )
      {
        st.fail( { serialize_table( "F", f ), serialize_table( "G", g ),
                   std::string( "left the nonnegative-spectrum class under " ) + op } );
      }
    };
    note( "product", pointwise_product( f, g ) );
    note( "sum", add( f, g ) );
    note( "summation", sum_out( f, t % arity ) );

    /* binary supermodular members generate the pinned class */
    fn_table bf = random_table_cli( rng, 2, 1, 5, 2 );
    while ( !is_lsm( bf ).holds )
    {
      bf = random_table_cli( rng, 2, 1, 5, 2 );
    }
    fn_table bg = random_table_cli( rng, 2, 1, 5, 2 );
    while ( !is_lsm( bg ).holds )
    {
      bg = random_table_cli( rng, 2, 1, 5, 2 );
    }
    const auto joined = product( bf, bg, { 0, 1 }, { 1, 2 }, 3 );
    ++st.checked;
    if ( !in_class_c( joined ).member )
    {
      st.fail( { serialize_table( "F", bf ), serialize_table( "G", bg ),
                 "their chained product left the pinned-spectrum class" } );
    }
    ++st.checked;
    if ( !in_class_c( sum_out( joined, 1 ) ).member )
    {
      st.fail( { serialize_table( "F", bf ), serialize_table( "G", bg ),
                 "summing out the shared variable left the pinned-spectrum class" } );
    }
  }
}

/*! Transform round trips and the three-variable factor reconstruction. */
inline void verify_roundtrip( const verify_args& a, verify_rng& rng, verify_state& st )
{
  const uint32_t n = std::max<uint32_t>( 1, std::min<uint32_t>( a.n ? a.n : 5, 8 ) );
  const uint32_t trials = a.trials ? a.trials : 40;
  for ( uint32_t t = 0; t < trials; ++t )
  {
    const uint32_t arity = 1 + t % n;
    const auto f = random_table_cli( rng, arity, 1, 9, 4 );
    ++st.checked;
    if ( mobius_inverse( mobius( f ) ) != f )
    {
      st.fail( { serialize_table( "F", f ), "multiplicative transform round trip" } );
    }
    const auto g = random_table_cli( rng, arity, 0, 9, 4 );
    ++st.checked;
    if ( fourier_inverse( fourier( g ) ) != g )
    {
      st.fail( { serialize_table( "F", g ), "spectrum round trip" } );
    }
  }
  for ( uint32_t t = 0; t < trials; ++t )
  {
    fn_table f = random_table_cli( rng, 3, 1, 4, 2 );
    uint32_t guard = 0;
    while ( !is_lsm( f ).holds )
    {
      if ( ++guard > 200000 )
      {
        throw std::runtime_error( "verify roundtrip: sampling stalled" );
      }
      f = random_table_cli( rng, 3, 1, 4, 2 );
    }
    const auto dec = lsm3_decompose( f );
    fn_table prod = tables::all_ones( 3 );
    for ( const auto& fac : dec.factors )
    {
      prod = pointwise_product( prod, fac.table );
    }
    ++st.checked;
    if ( prod != f )
    {
      st.fail( { serialize_table( "F", f ), "pairwise factorization reconstruction" } );
    }
  }
}

/*! The spectrum turns pointwise products into convolutions. */
inline void verify_convolution( const verify_args& a, verify_rng& rng, verify_state& st )
{
  const uint32_t n = std::max<uint32_t>( 1, std::min<uint32_t>( a.n ? a.n : 4, 6 ) );
  const uint32_t trials = a.trials ? a.trials : 60;
  const auto check = [&]( const fn_table& f, const fn_table& g ) {
    ++st.checked;
    if ( !convolution_check( f, g ) )
    {
      st.fail( { serialize_table( "F", f ), serialize_table( "G", g ),
                 "convolution identity" } );
    }
  };
  check( tables::eq(), tables::eq() );
  check( fn_table( 2, { 0, 0, 0, 0 } ), random_table_cli( rng, 2, 0, 5, 2 ) );
  for ( uint32_t t = 0; t < trials; ++t )
  {
    const uint32_t arity = 1 + t % n;
    check( random_table_cli( rng, arity, 0, 6, 3 ),
           random_table_cli( rng, arity, 0, 6, 3 ) );
  }
}

/*! The rewritten parity sum reproduces the direct Ising value. */
inline void verify_ising( const verify_args& a, verify_rng& rng, verify_state& st )
{
  const uint32_t trials = a.trials ? a.trials : 40;
  const eval_options opt{ 22, a.threads };
  for ( uint32_t t = 0; t < trials; ++t )
  {
    gf2_matrix m;
    m.cols = 1 + t % 5;
    const uint32_t spins = 1 + static_cast<uint32_t>( rng() % 4 );
    for ( uint32_t r = 0; r < spins; ++r )
    {
      m.rows.push_back( rng() & ( ( uint64_t( 1 ) << m.cols ) - 1 ) );
    }
    const rational y =
        rational( 1 ) + random_rational_cli( rng, 1, 5, 2 ); /* keeps y > 1 */
    const auto red = ising_reduction( m, y );
    const auto direct = ising_value( m, y );
    const auto via = red.scale * partition_function( red.instance, red.symbols, opt );
    ++st.checked;
    if ( direct != via )
    {
      st.fail( { "cols = " + std::to_string( m.cols ),
                 "y = " + y.to_string(),
                 "direct = " + direct.to_string(),
                 "parity form = " + via.to_string() } );
    }
  }
}

/*! Substituting a definition in place of its atoms keeps the value. */
inline void verify_flatten( const verify_args& a, verify_rng& rng, verify_state& st )
{
  const uint32_t trials = a.trials ? a.trials : 60;
  const eval_options opt{ 22, a.threads };
  const fn_env base{ { "IMP", tables::imp() },
                     { "OR", tables::or_table() },
                     { "NEQ", tables::neq() },
                     { "W", tables::unary( 1, 2 ) } };
  const std::vector<std::string> base_names{ "IMP", "OR", "NEQ", "W" };

  const auto random_psi = [&]( uint32_t frees, uint32_t bounds, uint32_t atoms,
                               const fn_env& env, const std::vector<std::string>& names ) {
    pps_formula psi;
    for ( uint32_t i = 1; i <= frees; ++i )
    {
      psi.vars.push_back( "x" + std::to_string( i ) );
    }
    for ( uint32_t i = 1; i <= bounds; ++i )
    {
      psi.vars.push_back( "y" + std::to_string( i ) );
    }
    psi.free_count = frees;
    for ( uint32_t j = 0; j < atoms; ++j )
    {
      atom at;
      at.fn = names[rng() % names.size()];
      const auto arity = env.at( at.fn ).arity();
      for ( uint32_t k = 0; k < arity; ++k )
      {
        at.args.push_back( static_cast<uint32_t>( rng() % ( frees + bounds ) ) );
      }
      psi.atoms.push_back( std::move( at ) );
    }
    return psi;
  };

  for ( uint32_t t = 0; t < trials; ++t )
  {
    const uint32_t def_arity = 1 + t % 2;
    const auto phi_g = random_psi( def_arity, rng() % 3, 1 + rng() % 3, base, base_names );
    fn_env env = base;
    env.emplace( "G", evaluate( phi_g, base, opt ) );
    auto names = base_names;
    names.push_back( "G" );
    names.push_back( "G" ); /* twice as likely, so substitution happens */
    const auto psi = random_psi( 1 + rng() % 2, rng() % 3, 1 + rng() % 4, env, names );
    const auto flat = flatten( psi, "G", phi_g );
    ++st.checked;
    if ( evaluate( flat, env, opt ) != evaluate( psi, env, opt ) )
    {
      st.fail( { "substituting a definition changed the value",
                 serialize_formula( "G", phi_g ), serialize_formula( "PSI", psi ) } );
    }
  }
}

/*! The fixed arity-4 supermodular table whose symmetrization exposes a
 * negative spectrum coefficient. */
inline void verify_lsm4_counterexample( verify_state& st, std::string& headline )
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
  const fn_table f( 4, std::move( v ) );
  const auto lsm = is_lsm( f );
  const auto pinned = in_class_c( f );
  st.checked = 2;
  if ( !lsm.holds || pinned.member || !pinned.witness ||
       !pinned.witness->assignment.empty() || pinned.witness->mask != 15 ||
       pinned.witness->value != rational( -1, 8 ) )
  {
    st.fail( { serialize_table( "F", f ),
               std::string( "is_lsm: " ) + ( lsm.holds ? "true" : "false" ),
               std::string( "pinned-spectrum member: " ) +
                   ( pinned.member ? "true" : "false" ) } );
    return;
  }
  headline = "supermodular, yet the symmetrized spectrum dips to " +
             pinned.witness->value.to_string() + " at the full mask";
}

inline int cmd_verify( const verify_args& a, std::ostream& out )
{
  verify_rng rng( a.seed );
  verify_state st;
  std::string headline;
  if ( a.lemma == "topkis" )
  {
    verify_topkis( a, rng, st );
  }
  else if ( a.lemma == "closure" )
  {
    verify_closure( a, rng, st );
  }
  else if ( a.lemma == "roundtrip" )
  {
    verify_roundtrip( a, rng, st );
  }
  else if ( a.lemma == "convolution" )
  {
    verify_convolution( a, rng, st );
  }
  else if ( a.lemma == "ising" )
  {
    verify_ising( a, rng, st );
  }
  else if ( a.lemma == "flatten" )
  {
    verify_flatten( a, rng, st );
  }
  else if ( a.lemma == "lsm4-counterexample" )
  {
    verify_lsm4_counterexample( st, headline );
  }
  else
  {
    throw std::invalid_argument(
        "verify: unknown lemma '" + a.lemma +
        "'; try topkis, closure, roundtrip, convolution, ising, flatten, or "
        "lsm4-counterexample" );
  }

  if ( a.json )
  {
    json j{ { "lemma", a.lemma },
            { "seed", a.seed },
            { "pass", st.pass },
            { "checked", st.checked } };
    if ( !headline.empty() )
    {
      j["headline"] = headline;
    }
    if ( !st.pass )
    {
      j["counterexample"] = st.dump;
    }
    out << j.dump( 2 ) << "\n";
    return st.pass ? 0 : 1;
  }
  out << "seed = " << a.seed << "\n";
  if ( st.pass )
  {
    out << a.lemma << ": pass (" << st.checked << " checks)\n";
    if ( !headline.empty() )
    {
      out << headline << "\n";
    }
    return 0;
  }
  out << a.lemma << ": FAIL\ncounterexample:\n";
  for ( const auto& line : st.dump )
  {
    out << line << ( line.empty() || line.back() == '\n' ? "" : "\n" );
  }
  return 1;
}

}  // namespace cli_detail

/*! \brief Runs the command line; returns the process exit code.
 *
 * Streams are injectable so the front end is testable in-process.
 */
inline int run_cli( int argc, const char* const* argv, std::ostream& out,
                    std::ostream& err )
{
  using namespace cli_detail;
  CLI::App app{ "exact tables, hardness reports, and gadget synthesis for weighted "
                "Boolean counting CSPs" };
  app.require_subcommand( 1 );

  eval_args ea;
  auto* eval_cmd = app.add_subcommand( "eval", "evaluate a formula or instance" );
  eval_cmd->add_option( "files", ea.paths, "document files" )->required();
  eval_cmd->add_option( "--target", ea.target, "formula or instance name" );
  eval_cmd->add_option( "--precision", ea.precision,
                        "also print a decimal rendering with this many digits" );
  eval_cmd->add_option( "--arity-cap", ea.arity_cap,
                        "largest allowed intermediate factor arity" );
  eval_cmd->add_option( "--threads", ea.threads, "worker threads (output-invariant)" );
  eval_cmd->add_flag( "--json", ea.json, "machine-readable output" );

  report_args aa;
  auto* analyze_cmd =
      app.add_subcommand( "analyze", "per-function property report (JSON)" );
  analyze_cmd->add_option( "files", aa.paths, "document files or directories" )
      ->required();
  analyze_cmd->add_option( "--target", aa.target, "restrict to one table" );
  analyze_cmd->add_flag( "--json", aa.json, "accepted for symmetry; output is JSON" );

  report_args ca;
  auto* classify_cmd =
      app.add_subcommand( "classify", "hardness verdict for the loaded language (JSON)" );
  classify_cmd->add_option( "paths", ca.paths, "document files or directories" )
      ->required();
  classify_cmd->add_option( "--target", ca.target, "restrict to one table" );
  classify_cmd->add_flag( "--json", ca.json, "accepted for symmetry; output is JSON" );

  synth_args sa;
  auto* synth_cmd = app.add_subcommand( "synth", "emit gadget constructions as documents" );
  synth_cmd->require_subcommand( 1 );
  auto* oru = synth_cmd->add_subcommand(
      "or-universal", "staged support pipeline for an arbitrary table" );
  oru->add_option( "files", sa.paths, "documents providing the source table" )
      ->required();
  oru->add_option( "--name", sa.name, "table to synthesize from" );
  auto* chi = synth_cmd->add_subcommand( "chi", "threshold factor above a mask" );
  chi->add_option( "--y0", sa.y0, "threshold mask as a binary numeral (bit i = argument i+1)" )
      ->required();
  chi->add_option( "--c", sa.c, "value above the threshold" )->required();
  chi->add_option( "--arity", sa.arity, "argument count (default: numeral length)" );
  auto* ising = synth_cmd->add_subcommand( "ising", "parity form of an Ising sum" );
  ising->add_option( "--rows", sa.rows, "comma-separated binary numerals, one per spin" )
      ->required();
  ising->add_option( "--y", sa.y, "interaction value, greater than 1" )->required();
  ising->add_option( "--cols", sa.cols, "column count (default: numeral length)" );
  auto* unary = synth_cmd->add_subcommand( "unary", "dyadic unary over a two-symbol basis" );
  unary->add_option( "--at0", sa.at0, "value at 0" )->required();
  unary->add_option( "--at1", sa.at1, "value at 1" )->required();
  unary->add_option( "--route", sa.route, "imp (default), or, nand" );
  for ( auto* sub : { oru, chi, ising, unary } )
  {
    sub->add_option( "--precision", sa.precision,
                     "accuracy exponent / dyadic bits (default 20)" );
    sub->add_option( "--out", sa.out_path, "write the document here" );
    sub->add_flag( "--json", sa.json, "machine-readable output" );
  }

  verify_args va;
  auto* verify_cmd = app.add_subcommand( "verify", "seeded invariant suites" );
  verify_cmd
      ->add_option( "lemma", va.lemma,
                    "topkis | closure | roundtrip | convolution | ising | flatten | "
                    "lsm4-counterexample" )
      ->required();
  verify_cmd->add_option( "--n", va.n, "size parameter (lemma-specific default)" );
  verify_cmd->add_option( "--trials", va.trials, "randomized repetitions" );
  verify_cmd->add_option( "--seed", va.seed, "RNG seed (printed; default 1)" );
  verify_cmd->add_option( "--threads", va.threads, "worker threads (output-invariant)" );
  verify_cmd->add_flag( "--json", va.json, "machine-readable output" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    const int code = app.exit( e, out, err );
    return code == 0 ? 0 : 2;
  }

  try
  {
    if ( eval_cmd->parsed() )
    {
      return cmd_eval( ea, out );
    }
    if ( analyze_cmd->parsed() )
    {
      return cmd_analyze( aa, out );
    }
    if ( classify_cmd->parsed() )
    {
      return cmd_classify( ca, out );
    }
    if ( synth_cmd->parsed() )
    {
      if ( oru->parsed() )
      {
        return cmd_synth_or_universal( sa, out );
      }
      if ( chi->parsed() )
      {
        return cmd_synth_chi( sa, out );
      }
      if ( ising->parsed() )
      {
        return cmd_synth_ising( sa, out );
      }
      return cmd_synth_unary( sa, out );
    }
    return cmd_verify( va, out );
  }
  catch ( const std::invalid_argument& e )
  {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ccsp
