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
  \file classify.hpp
  \brief Hardness classification for finite constraint languages

  A finite list of weight functions is sorted into one of three
  buckets.  If every member factors into unary weights over a
  pin/link support, the whole language admits efficient approximate
  counting and we return one reconstruction certificate per member.
  Otherwise, a member that violates log-supermodularity witnesses
  equivalence with approximately counting satisfying assignments of
  Boolean formulas; if all members are log-supermodular but at least
  one resists the product factorization, the language is at least as
  hard as counting independent sets in bipartite graphs.  Every
  verdict carries a witness that re-verifies through the public
  analysis calls.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "gadgets.hpp"
#include "table.hpp"
#include "transforms.hpp"

namespace ccsp {

/*! Verdict of \ref classify_language.  The order is meaningful:
    later constants are harder. */
enum class complexity_class {
  product_form_fpras,  //!< every member factors; approximable
  bis_hard,            //!< as hard as bipartite independent sets
  sat_hard             //!< as hard as counting satisfying assignments
};

//! Canonical spelling of a verdict, as used in reports.
inline const char* to_string( complexity_class c )
{
  switch ( c )
  {
  case complexity_class::product_form_fpras:
    return "ProductForm_FPRAS";
  case complexity_class::bis_hard:
    return "BISHard";
  case complexity_class::sat_hard:
    return "SATHard";
  }
  return "?";
}

/*! \brief Outcome of classifying a constraint language.

  Exactly one witness family is populated, matching `verdict`:

  - `product_form_fpras`: `certificates[i]` reconstructs the i-th
    input bit-exactly via product_form_certificate::reconstruct.
  - `sat_hard`: `witness_index` names a member that is not
    log-supermodular and `violation` is an assignment pair for which
    the defining inequality fails on that member.
  - `bis_hard`: `witness_index` names the first member with no
    product factorization and `obstruction` says why it has none.
*/
struct classification_outcome {
  complexity_class verdict = complexity_class::product_form_fpras;
  std::vector<product_form_certificate> certificates;
  std::optional<std::size_t> witness_index;
  std::optional<product_form_failure> obstruction;
  std::optional<std::pair<uint64_t, uint64_t>> violation;
};

/*! \brief Classify a nonempty constraint language.

  Decision order: if every member passes \ref product_form_test the
  language is `product_form_fpras`.  Otherwise, if some member fails
  \ref is_lsm, the language is `sat_hard` and the first such member
  (in input order) is the witness.  Otherwise it is `bis_hard`,
  witnessed by the first member whose factorization fails.

  The verdict is invariant under rescaling members by positive
  constants, and `product_form_fpras` is preserved by adjoining any
  unary function.

  \throws std::invalid_argument if `language` is empty.
*/
inline classification_outcome classify_language( const std::vector<fn_table>& language )
{
  if ( language.empty() )
  {
    throw std::invalid_argument( "classify_language: language must be nonempty" );
  }

  std::vector<product_form_result> factored;
  factored.reserve( language.size() );
  bool all_factor = true;
  std::size_t first_unfactored = 0;
  for ( std::size_t i = 0; i < language.size(); ++i )
  {
    factored.push_back( product_form_test( language[i] ) );
    if ( all_factor && !factored.back().ok() )
    {
      all_factor = false;
      first_unfactored = i;
    }
  }

  classification_outcome out;
  if ( all_factor )
  {
    out.verdict = complexity_class::product_form_fpras;
    for ( auto& r : factored )
    {
      out.certificates.push_back( std::move( *r.certificate ) );
    }
    return out;
  }

  for ( std::size_t i = 0; i < language.size(); ++i )
  {
    auto lsm = is_lsm( language[i] );
    if ( !lsm.holds )
    {
      out.verdict = complexity_class::sat_hard;
      out.witness_index = i;
      out.violation = lsm.witness;
      return out;
    }
  }

  out.verdict = complexity_class::bis_hard;
  out.witness_index = first_unfactored;
  out.obstruction = factored[first_unfactored].failure;
  return out;
}

/*! \brief Everything the analysis layer can say about one function.

  `binary` is populated exactly for arity-2 tables, which always admit
  the five-case classification.
*/
struct function_report {
  fn_table table;
  lsm_result lsm;
  product_form_result product_form;
  class_p_result nonneg_spectrum;
  class_c_result pinned_spectrum;
  std::optional<binary_classification> binary;
};

/*! Run every applicable analysis on each member.  Unlike
    \ref classify_language, an empty language is fine and yields an
    empty report. */
inline std::vector<function_report> witness_report( const std::vector<fn_table>& language )
{
  std::vector<function_report> out;
  out.reserve( language.size() );
  for ( auto const& f : language )
  {
    function_report r{ f, is_lsm( f ), product_form_test( f ), in_class_p( f ),
                       in_class_c( f ), std::nullopt };
    if ( f.arity() == 2 )
    {
      r.binary = classify_binary( f );
    }
    out.push_back( std::move( r ) );
  }
  return out;
}

}  // namespace ccsp
