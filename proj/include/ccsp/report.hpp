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
  \file report.hpp
  \brief JSON rendering of analysis and classification results

  Values are exact rationals rendered as strings ("p" or "p/q"), masks
  and indices as numbers.  Each report carries a `notes` array of short
  behavioral statements tying the fields to operations a reader can
  re-run; absent optional fields mean the property held and needed no
  witness.
*/

#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "classify.hpp"
#include "table.hpp"

namespace ccsp
{

using nlohmann::json;

inline json table_json( const fn_table& f )
{
  json values = json::array();
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    values.push_back( f.at( m ).to_string() );
  }
  return json{ { "arity", f.arity() }, { "values", std::move( values ) } };
}

inline const char* to_string( binary_case c )
{
  switch ( c )
  {
  case binary_case::rank_one:
    return "rank_one";
  case binary_case::weighted_eq:
    return "weighted_eq";
  case binary_case::weighted_neq:
    return "weighted_neq";
  case binary_case::imp_like:
    return "imp_like";
  case binary_case::or_like:
    return "or_like";
  }
  return "?";
}

inline const char* to_string( product_form_failure_reason r )
{
  switch ( r )
  {
  case product_form_failure_reason::projection_shape:
    return "projection_shape";
  case product_form_failure_reason::support_mismatch:
    return "support_mismatch";
  case product_form_failure_reason::log_modularity:
    return "log_modularity";
  }
  return "?";
}

inline json pinning_json( const pinning& a )
{
  json out = json::array();
  for ( const auto& [var, value] : a )
  {
    out.push_back( json{ { "var", var }, { "value", value } } );
  }
  return out;
}

inline json certificate_json( const product_form_certificate& cert )
{
  json links = json::array();
  for ( const auto& l : cert.links )
  {
    links.push_back(
        json{ { "var", l.var }, { "rep", l.rep }, { "negated", l.negated } } );
  }
  json weights = json::array();
  for ( const auto& [rep, w] : cert.class_weights )
  {
    weights.push_back( json{ { "rep", rep },
                             { "weights", { w[0].to_string(), w[1].to_string() } } } );
  }
  return json{ { "arity", cert.arity },
               { "constant", cert.constant.to_string() },
               { "pins", pinning_json( cert.pins ) },
               { "links", std::move( links ) },
               { "class_weights", std::move( weights ) } };
}

inline json failure_json( const product_form_failure& fail )
{
  json out{ { "reason", to_string( fail.reason ) } };
  if ( fail.positions )
  {
    out["positions"] = { fail.positions->first, fail.positions->second };
  }
  if ( !fail.masks.empty() )
  {
    out["masks"] = fail.masks;
  }
  return out;
}

/*! \brief One function's full analysis as JSON. */
inline json function_report_json( const std::string& name, const function_report& r )
{
  json out = table_json( r.table );
  out["name"] = name;
  std::vector<std::string> notes;

  json lsm{ { "holds", r.lsm.holds } };
  if ( r.lsm.witness )
  {
    lsm["witness"] = { r.lsm.witness->first, r.lsm.witness->second };
    notes.push_back( "lsm.witness is an assignment pair violating the defining "
                     "product inequality" );
  }
  out["lsm"] = std::move( lsm );

  json pf{ { "ok", r.product_form.ok() } };
  if ( r.product_form.certificate )
  {
    pf["certificate"] = certificate_json( *r.product_form.certificate );
    notes.push_back( "product_form.certificate reconstructs the table bit-exactly" );
  }
  if ( r.product_form.failure )
  {
    pf["failure"] = failure_json( *r.product_form.failure );
  }
  out["product_form"] = std::move( pf );

  json np{ { "member", r.nonneg_spectrum.member } };
  if ( r.nonneg_spectrum.witness )
  {
    np["witness"] = json{ { "mask", r.nonneg_spectrum.witness->first },
                          { "value", r.nonneg_spectrum.witness->second.to_string() } };
    notes.push_back( "nonneg_spectrum.witness is the least mask whose spectrum "
                     "coefficient is negative" );
  }
  out["nonneg_spectrum"] = std::move( np );

  json pc{ { "member", r.pinned_spectrum.member } };
  if ( r.pinned_spectrum.witness )
  {
    pc["witness"] =
        json{ { "pinning", pinning_json( r.pinned_spectrum.witness->assignment ) },
              { "mask", r.pinned_spectrum.witness->mask },
              { "value", r.pinned_spectrum.witness->value.to_string() } };
    notes.push_back( "pinned_spectrum.witness pins arguments so that the "
                     "symmetrized table leaves the nonnegative-spectrum class" );
  }
  out["pinned_spectrum"] = std::move( pc );

  if ( r.binary )
  {
    out["binary"] = json{ { "case", to_string( r.binary->kind ) },
                          { "canonical", r.binary->canonical() },
                          { "transposed", r.binary->transposed },
                          { "nand_subcase", r.binary->nand_subcase },
                          { "alpha", r.binary->alpha.to_string() } };
  }

  out["notes"] = notes;
  return out;
}

/*! \brief Analysis report for a list of named tables. */
inline json analyze_report( const std::vector<std::pair<std::string, fn_table>>& named )
{
  std::vector<fn_table> language;
  language.reserve( named.size() );
  for ( const auto& [name, f] : named )
  {
    language.push_back( f );
  }
  const auto reports = witness_report( language );
  json fns = json::array();
  for ( std::size_t i = 0; i < named.size(); ++i )
  {
    fns.push_back( function_report_json( named[i].first, reports[i] ) );
  }
  return json{ { "functions", std::move( fns ) } };
}

/*! \brief Classification report for a named, nonempty language. */
inline json classify_report( const std::vector<std::pair<std::string, fn_table>>& named )
{
  std::vector<fn_table> language;
  language.reserve( named.size() );
  for ( const auto& [name, f] : named )
  {
    language.push_back( f );
  }
  const auto out = classify_language( language );

  json rep;
  json members = json::array();
  for ( const auto& [name, f] : named )
  {
    json m = table_json( f );
    m["name"] = name;
    members.push_back( std::move( m ) );
  }
  rep["language"] = std::move( members );
  rep["verdict"] = to_string( out.verdict );

  std::vector<std::string> notes;
  switch ( out.verdict )
  {
  case complexity_class::product_form_fpras:
  {
    json certs = json::array();
    for ( const auto& c : out.certificates )
    {
      certs.push_back( certificate_json( c ) );
    }
    rep["certificates"] = std::move( certs );
    notes.push_back( "every member factors into unary weights over pins and "
                     "(dis)equality links; certificates align with the language" );
    break;
  }
  case complexity_class::bis_hard:
    rep["witness_index"] = *out.witness_index;
    rep["witness_name"] = named[*out.witness_index].first;
    rep["obstruction"] = failure_json( *out.obstruction );
    notes.push_back( "every member is log-supermodular, but the witnessed member "
                     "admits no product factorization" );
    break;
  case complexity_class::sat_hard:
    rep["witness_index"] = *out.witness_index;
    rep["witness_name"] = named[*out.witness_index].first;
    rep["violation"] = { out.violation->first, out.violation->second };
    notes.push_back( "the witnessed member violates log-supermodularity on the "
                     "given assignment pair" );
    break;
  }
  rep["notes"] = notes;
  return rep;
}

}  // namespace ccsp
