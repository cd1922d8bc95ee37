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

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <ccsp/cli.hpp>

using namespace ccsp;
using Catch::Matchers::ContainsSubstring;

namespace
{

struct run_result
{
  int code;
  std::string out;
  std::string err;
};

run_result run( const std::vector<std::string>& args )
{
  std::vector<const char*> argv;
  argv.push_back( "ccsp" );
  for ( const auto& a : args )
  {
    argv.push_back( a.c_str() );
  }
  std::ostringstream out, err;
  const int code = run_cli( static_cast<int>( argv.size() ), argv.data(), out, err );
  return { code, out.str(), err.str() };
}

/*! Scratch directory removed when the test case ends. */
struct temp_dir
{
  std::filesystem::path path;

  temp_dir()
  {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ( "ccsp-cli-" + std::to_string( ++counter ) + "-" +
             std::to_string( std::random_device{}() % 100000 ) );
    std::filesystem::create_directories( path );
  }

  ~temp_dir()
  {
    std::error_code ec;
    std::filesystem::remove_all( path, ec );
  }

  std::string write( const std::string& name, const std::string& content ) const
  {
    const auto p = path / name;
    std::ofstream f( p, std::ios::binary );
    f << content;
    return p.string();
  }
};

const std::string imp_doc =
    "fn IMP arity 2\n"
    "table 1 1 0 1\n"
    "formula H(x, y) := sum w t . IMP(w, x) * IMP(w, y) * IMP(x, t) * IMP(y, t)\n";

const std::string chain_doc =
    "fn STEP arity 2\n"
    "table 1 1 0 1\n"
    "instance PATH := STEP(a, b) * STEP(b, c) * STEP(c, d)\n";

}  // namespace

TEST_CASE( "eval prints exact tables and partition values", "[cli]" )
{
  temp_dir dir;
  const auto gadget = dir.write( "gadget.ccsp", imp_doc );
  const auto chain = dir.write( "chain.ccsp", chain_doc );

  auto r = run( { "eval", gadget } );
  CHECK( r.code == 0 );
  CHECK( r.out == "2 1 1 2\n" );
  CHECK( r.err.empty() );

  r = run( { "eval", chain, "--precision", "3" } );
  CHECK( r.code == 0 );
  CHECK( r.out == "5\n5.000\n" );

  r = run( { "eval", gadget, chain, "--target", "PATH" } );
  CHECK( r.code == 0 );
  CHECK( r.out == "5\n" );

  r = run( { "eval", gadget, chain, "--target", "H", "--json" } );
  CHECK( r.code == 0 );
  const auto j = json::parse( r.out );
  CHECK( j["kind"] == "formula" );
  CHECK( j["target"] == "H" );
  CHECK( j["values"] == json::array( { "2", "1", "1", "2" } ) );

  /* two candidates and no --target is a usage error naming both */
  r = run( { "eval", gadget, chain } );
  CHECK( r.code == 2 );
  CHECK_THAT( r.err, ContainsSubstring( "--target" ) );
  CHECK_THAT( r.err, ContainsSubstring( "H" ) );
  CHECK_THAT( r.err, ContainsSubstring( "PATH" ) );

  /* a fractional value renders in both exact and decimal form */
  const auto frac = dir.write( "frac.ccsp",
                               "fn G arity 1\ntable 1/3 1\n"
                               "instance Z := G(a)\n" );
  r = run( { "eval", frac, "--precision", "4" } );
  CHECK( r.code == 0 );
  CHECK( r.out == "4/3\n1.3333\n" );
}

TEST_CASE( "eval failures pick the right exit code", "[cli]" )
{
  temp_dir dir;
  const auto gadget = dir.write( "gadget.ccsp", imp_doc );

  auto r = run( { "eval", ( dir.path / "missing.ccsp" ).string() } );
  CHECK( r.code == 2 );
  CHECK_THAT( r.err, ContainsSubstring( "cannot open" ) );

  const auto broken = dir.write( "broken.ccsp", "fn F arity 2\ntable 1 2 ?\n" );
  r = run( { "eval", broken } );
  CHECK( r.code == 2 );
  CHECK_THAT( r.err, ContainsSubstring( "broken.ccsp" ) );
  CHECK_THAT( r.err, ContainsSubstring( "line 2" ) );

  r = run( { "eval", gadget, "--target", "NOPE" } );
  CHECK( r.code == 2 );

  /* the same name twice across files collides in the workspace */
  const auto copy = dir.write( "copy.ccsp", imp_doc );
  r = run( { "eval", gadget, copy } );
  CHECK( r.code == 2 );
  CHECK_THAT( r.err, ContainsSubstring( "already defined" ) );

  /* a cap too small for the elimination is a runtime failure, not usage */
  r = run( { "eval", gadget, "--arity-cap", "1" } );
  CHECK( r.code == 1 );
  CHECK_THAT( r.err, ContainsSubstring( "cap" ) );

  r = run( {} );
  CHECK( r.code == 2 );

  r = run( { "--help" } );
  CHECK( r.code == 0 );
  CHECK_THAT( r.out, ContainsSubstring( "Subcommands" ) );
}

TEST_CASE( "analyze reports spectra and witnesses as JSON", "[cli]" )
{
  temp_dir dir;
  const auto doc = dir.write( "lang.ccsp",
                              "fn EQP arity 2\ntable 2 1 1 2\n"
                              "fn PAR3 arity 3\ntable 1 0 0 1 0 1 1 0\n" );

  auto r = run( { "analyze", doc } );
  REQUIRE( r.code == 0 );
  const auto j = json::parse( r.out );
  REQUIRE( j["functions"].size() == 2 );

  const auto& eqp = j["functions"][0];
  CHECK( eqp["name"] == "EQP" );
  CHECK( eqp["lsm"]["holds"] == true );
  CHECK( eqp["product_form"]["ok"] == false );
  CHECK( eqp["product_form"]["failure"]["reason"] == "log_modularity" );
  CHECK( eqp["product_form"]["failure"]["masks"] == json::array( { 1, 2 } ) );
  CHECK( eqp["nonneg_spectrum"]["member"] == true );
  CHECK( eqp["pinned_spectrum"]["member"] == true );
  CHECK( eqp["binary"]["canonical"] == "IMP" );

  const auto& par3 = j["functions"][1];
  CHECK( par3["name"] == "PAR3" );
  CHECK( par3["lsm"]["holds"] == false );
  CHECK( par3["nonneg_spectrum"]["member"] == true );
  CHECK( par3["pinned_spectrum"]["member"] == false );
  CHECK( !par3.contains( "binary" ) );

  /* --target narrows the report to one function */
  r = run( { "analyze", doc, "--target", "PAR3" } );
  REQUIRE( r.code == 0 );
  CHECK( json::parse( r.out )["functions"].size() == 1 );

  r = run( { "analyze", doc, "--target", "NOPE" } );
  CHECK( r.code == 2 );
}

TEST_CASE( "classify emits verdicts with certificates or witnesses", "[cli]" )
{
  temp_dir dir;
  const auto easy = dir.write( "easy.ccsp",
                               "fn NEQ arity 2\ntable 0 1 1 0\n"
                               "fn W arity 1\ntable 1 3\n" );
  const auto bis = dir.write( "bis.ccsp",
                              "fn IMPL arity 2\ntable 1 1 0 1\n" );
  const auto sat = dir.write( "sat.ccsp",
                              "fn XORW arity 2\ntable 1/2 1 1 1/2\n" );

  auto r = run( { "classify", easy } );
  REQUIRE( r.code == 0 );
  auto j = json::parse( r.out );
  CHECK( j["verdict"] == "ProductForm_FPRAS" );
  REQUIRE( j["certificates"].size() == 2 );
  CHECK( j["certificates"][0]["links"][0]["negated"] == true );

  r = run( { "classify", bis } );
  REQUIRE( r.code == 0 );
  j = json::parse( r.out );
  CHECK( j["verdict"] == "BISHard" );
  CHECK( j["witness_index"] == 0 );
  CHECK( j["witness_name"] == "IMPL" );
  CHECK( j["obstruction"]["reason"] == "projection_shape" );

  r = run( { "classify", sat } );
  REQUIRE( r.code == 0 );
  j = json::parse( r.out );
  CHECK( j["verdict"] == "SATHard" );
  CHECK( j["witness_name"] == "XORW" );
  CHECK( j["violation"] == json::array( { 1, 2 } ) );

  /* a directory merges its .ccsp files, sorted by name, into one language */
  r = run( { "classify", dir.path.string() } );
  REQUIRE( r.code == 0 );
  j = json::parse( r.out );
  CHECK( j["verdict"] == "SATHard" );
  CHECK( j["language"].size() == 4 );
  CHECK( j["language"][0]["name"] == "IMPL" );
  CHECK( j["witness_name"] == "NEQ" );
}

TEST_CASE( "synth emits loadable documents", "[cli]" )
{
  temp_dir dir;

  SECTION( "chi threshold factors round trip through the text form" )
  {
    const auto r = run( { "synth", "chi", "--y0", "11", "--c", "3" } );
    REQUIRE( r.code == 0 );
    CHECK_THAT( r.out, ContainsSubstring( "# table = 1 1 1 3" ) );
    workspace ws;
    ws.absorb( parse_document( r.out ) );
    CHECK( evaluate( ws.formula( "CHI" ), ws.env() ) ==
           fn_table( 2, { 1, 1, 1, 3 } ) );

    /* an explicit wider arity pads the threshold with free arguments */
    const auto r3 = run( { "synth", "chi", "--y0", "11", "--c", "3", "--arity", "3" } );
    REQUIRE( r3.code == 0 );
    workspace ws3;
    ws3.absorb( parse_document( r3.out ) );
    const auto t3 = evaluate( ws3.formula( "CHI" ), ws3.env() );
    CHECK( t3.arity() == 3 );
    CHECK( t3.at( 3 ) == rational( 3 ) );
    CHECK( t3.at( 7 ) == rational( 3 ) );
    CHECK( t3.at( 5 ) == rational( 1 ) );
  }

  SECTION( "the staged pipeline matches the scheduled plan table" )
  {
    const auto src = dir.write( "src.ccsp", "fn F arity 2\ntable 0 1 2 4\n" );
    const auto r = run( { "synth", "or-universal", src } );
    REQUIRE( r.code == 0 );
    workspace ws;
    ws.absorb( parse_document( r.out ) );

    const auto pipe = or_universal( fn_table( 2, { 0, 1, 2, 4 } ) );
    const uint64_t k = schedule_k( pipe.plan,
                                   rational( bigint( 1 ), bigint( 1 ) << 20 ), true );
    CHECK( evaluate( ws.formula( "PIPELINE" ), ws.env() ) == plan_table( pipe.plan, k ) );
    CHECK( evaluate( ws.formula( "STAGE1" ), ws.env() ) ==
           evaluate( pipe.psi1, pipe.symbols ) );

    /* --out writes the document and keeps the summary on stdout */
    const auto out_path = ( dir.path / "pipe.ccsp" ).string();
    const auto rw = run( { "synth", "or-universal", src, "--out", out_path } );
    REQUIRE( rw.code == 0 );
    CHECK_THAT( rw.out, ContainsSubstring( "mu = " ) );
    CHECK_THAT( rw.out, ContainsSubstring( "wrote " ) );
    const auto reloaded = run( { "eval", out_path, "--target", "PIPELINE" } );
    CHECK( reloaded.code == 0 );

    /* a tighter precision schedules more repetitions */
    const auto r30 = run( { "synth", "or-universal", src, "--precision", "30",
                            "--json" } );
    REQUIRE( r30.code == 0 );
    const auto j30 = json::parse( r30.out );
    const auto j20 = json::parse( run( { "synth", "or-universal", src, "--json" } ).out );
    CHECK( j30["k"].get<uint64_t>() > j20["k"].get<uint64_t>() );
    CHECK( j20["exact"] == false );
  }

  SECTION( "the parity form carries its scale and closed-form value" )
  {
    const auto r = run( { "synth", "ising", "--rows", "11,11", "--y", "3" } );
    REQUIRE( r.code == 0 );
    CHECK_THAT( r.out, ContainsSubstring( "scale = 16" ) );
    CHECK_THAT( r.out, ContainsSubstring( "value = 20" ) );
    workspace ws;
    ws.absorb( parse_document( r.out ) );
    const auto z = partition_function( ws.instance( "ISING" ), ws.env() );
    CHECK( rational( 16 ) * z == rational( 20 ) );

    const auto rj = run( { "synth", "ising", "--rows", "101,011", "--y", "7/2",
                           "--json" } );
    REQUIRE( rj.code == 0 );
    const auto j = json::parse( rj.out );
    CHECK( j["cols"] == 3 );
    CHECK( j["rows"] == json::array( { 5, 3 } ) );
    CHECK( j["w"] == "5/9" );
    gf2_matrix m;
    m.cols = 3;
    m.rows = { 5, 3 };
    CHECK( j["value"] == ising_value( m, rational( 7, 2 ) ).to_string() );
  }

  SECTION( "unary targets come back exactly over each basis" )
  {
    /* the disjunction route climbs, the NAND route descends */
    const std::vector<std::array<std::string, 3>> jobs = {
        { "imp", "3/8", "5/8" }, { "or", "3/8", "5/8" }, { "nand", "5/8", "3/8" } };
    for ( const auto& [route, at0, at1] : jobs )
    {
      const auto r = run( { "synth", "unary", "--at0", at0, "--at1", at1,
                            "--route", route } );
      INFO( route << ": " << r.err );
      REQUIRE( r.code == 0 );
      workspace ws;
      ws.absorb( parse_document( r.out ) );
      CHECK( evaluate( ws.formula( "U" ), ws.env() ) ==
             tables::unary( rational::from_string( at0 ), rational::from_string( at1 ) ) );
    }
    const auto wrong_way = run( { "synth", "unary", "--at0", "3/8", "--at1", "5/8",
                                  "--route", "nand" } );
    CHECK( wrong_way.code == 2 );
    const auto bad = run( { "synth", "unary", "--at0", "1", "--at1", "1",
                            "--route", "xor" } );
    CHECK( bad.code == 2 );
  }
}

TEST_CASE( "verify suites pass, print their seed, and fail loudly", "[cli]" )
{
  for ( const std::string lemma :
        { "topkis", "closure", "roundtrip", "convolution", "ising", "flatten" } )
  {
    const auto r = run( { "verify", lemma, "--trials", "4", "--n", "2" } );
    INFO( lemma << ": " << r.err );
    CHECK( r.code == 0 );
    CHECK_THAT( r.out, ContainsSubstring( "seed = 1" ) );
    CHECK_THAT( r.out, ContainsSubstring( lemma + ": pass" ) );
  }

  const auto fixed = run( { "verify", "lsm4-counterexample" } );
  CHECK( fixed.code == 0 );
  CHECK_THAT( fixed.out, ContainsSubstring( "-1/8" ) );

  const auto seeded = run( { "verify", "roundtrip", "--seed", "7", "--trials", "3" } );
  CHECK( seeded.code == 0 );
  CHECK_THAT( seeded.out, ContainsSubstring( "seed = 7" ) );
  CHECK( seeded.out == run( { "verify", "roundtrip", "--seed", "7", "--trials", "3" } ).out );

  const auto j = json::parse(
      run( { "verify", "convolution", "--trials", "5", "--json" } ).out );
  CHECK( j["pass"] == true );
  CHECK( j["lemma"] == "convolution" );
  CHECK( j["seed"] == 1 );
  CHECK( j["checked"].get<uint64_t>() >= 5 );

  CHECK( run( { "verify", "nope" } ).code == 2 );
  CHECK( run( { "verify", "topkis", "--n", "9" } ).code == 2 );
}

TEST_CASE( "thread count never changes output", "[cli]" )
{
  temp_dir dir;
  const auto gadget = dir.write( "gadget.ccsp", imp_doc );

  const auto one = run( { "eval", gadget, "--threads", "1" } );
  const auto four = run( { "eval", gadget, "--threads", "4" } );
  CHECK( one.code == 0 );
  CHECK( one.out == four.out );

  const auto v1 = run( { "verify", "ising", "--trials", "6", "--threads", "1" } );
  const auto v4 = run( { "verify", "ising", "--trials", "6", "--threads", "4" } );
  CHECK( v1.code == 0 );
  CHECK( v1.out == v4.out );
}
