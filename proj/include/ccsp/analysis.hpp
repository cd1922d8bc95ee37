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
  \file analysis.hpp
  \brief Structural properties of nonnegative pseudo-Boolean functions

  The central property is log-supermodularity,
  `f(x|y) f(x&y) >= f(x) f(y)` for all assignment pairs, which for
  strictly positive functions can be checked on binary pinnings alone.
  The module also recognizes functions that factor into a product of
  unary weights over a support cut out by constants and (dis)equality
  links, with a bit-exact reconstruction certificate, and classifies
  supports into the implication-free / affine / non-affine trichotomy
  that drives the hardness classification.
*/

#pragma once

#include "table.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace ccsp
{

/*! \brief Outcome of a log-supermodularity or log-modularity scan. */
struct lsm_result
{
  bool holds;
  /*! \brief Lexicographically first violating pair of masks. */
  std::optional<std::pair<uint64_t, uint64_t>> witness;
};

/*! \brief Checks `f(x|y) f(x&y) >= f(x) f(y)` over all pairs. */
inline lsm_result is_lsm( const fn_table& f )
{
  for ( uint64_t x = 0; x < f.size(); ++x )
  {
    for ( uint64_t y = 0; y < f.size(); ++y )
    {
      if ( f.at( x | y ) * f.at( x & y ) < f.at( x ) * f.at( y ) )
      {
        return lsm_result{ false, std::make_pair( x, y ) };
      }
    }
  }
  return lsm_result{ true, std::nullopt };
}

/*! \brief Checks `f(x|y) f(x&y) == f(x) f(y)` over all pairs. */
inline lsm_result is_logmodular( const fn_table& f )
{
  for ( uint64_t x = 0; x < f.size(); ++x )
  {
    for ( uint64_t y = 0; y < f.size(); ++y )
    {
      if ( f.at( x | y ) * f.at( x & y ) != f.at( x ) * f.at( y ) )
      {
        return lsm_result{ false, std::make_pair( x, y ) };
      }
    }
  }
  return lsm_result{ true, std::nullopt };
}

/*! \brief Outcome of the binary-pinning log-supermodularity check. */
struct topkis_result
{
  bool holds;
  /*! \brief First binary pinning whose table violates the condition. */
  std::optional<two_pinning> witness;
};

/*! \brief Log-supermodularity via binary pinnings.
 *
 * For strictly positive tables this is equivalent to the global pair
 * condition; the reduction is unsound in the presence of zeros, so
 * non-permissive input is rejected with `std::domain_error`.  Binary
 * pinnings are visited in the order of `two_pinnings`, and the first
 * failure is reported.
 */
inline topkis_result is_lsm_topkis( const fn_table& f )
{
  if ( !f.is_permissive() )
  {
    throw std::domain_error( "is_lsm_topkis: table has a zero entry; the "
                             "binary-pinning criterion requires a strictly "
                             "positive function" );
  }
  for ( auto& tp : two_pinnings( f ) )
  {
    const auto& b = tp.table;
    if ( b.at( 3 ) * b.at( 0 ) < b.at( 1 ) * b.at( 2 ) )
    {
      return topkis_result{ false, tp };
    }
  }
  return topkis_result{ true, std::nullopt };
}

/* -------------------------------------------------------------------------
 * product-form recognition
 * ---------------------------------------------------------------------- */

/*! \brief Reasons a table fails to be a weighted product form. */
enum class product_form_failure_reason
{
  /*! a pair of arguments has a three-element support shadow */
  projection_shape,
  /*! support is a strict subset of the set its pins and links define */
  support_mismatch,
  /*! the induced positive function on link classes is not log-modular */
  log_modularity
};

/*! \brief Failure evidence for `product_form_test`. */
struct product_form_failure
{
  product_form_failure_reason reason;
  /*! \brief Offending argument pair (projection_shape only). */
  std::optional<std::pair<uint32_t, uint32_t>> positions;
  /*! \brief Witness masks: the missing support point
   * (support_mismatch) or the pair violating log-modularity. */
  std::vector<uint64_t> masks;
};

/*! \brief Exact factorization of a table into pins, (dis)equality
 * links, and per-class unary weights.
 *
 * The represented function is
 * `constant * [pins hold] * [links hold] * prod_r weights[r][x_r]`
 * where `r` ranges over class representatives; `reconstruct` rebuilds
 * the full table bit-exactly.
 */
struct product_form_certificate
{
  /*! \brief Variable tied to a class representative with a polarity. */
  struct polarity_link
  {
    uint32_t var;
    uint32_t rep;
    bool negated;
  };

  uint32_t arity = 0;
  rational constant;
  pinning pins;
  std::vector<polarity_link> links;
  /*! \brief Representative position -> (weight at 0, weight at 1). */
  std::vector<std::pair<uint32_t, std::array<rational, 2>>> class_weights;

  /*! \brief Rebuilds the dense table represented by the certificate. */
  fn_table reconstruct() const
  {
    std::vector<rational> out( uint64_t( 1 ) << arity, 0 );
    for ( uint64_t m = 0; m < out.size(); ++m )
    {
      bool alive = true;
      for ( const auto& [posn, val] : pins )
      {
        if ( test_bit( m, posn ) != ( val != 0 ) )
        {
          alive = false;
          break;
        }
      }
      if ( alive )
      {
        for ( const auto& l : links )
        {
          if ( test_bit( m, l.var ) != ( test_bit( m, l.rep ) != l.negated ) )
          {
            alive = false;
            break;
          }
        }
      }
      if ( !alive )
      {
        continue;
      }
      rational v = constant;
      for ( const auto& [rep, w] : class_weights )
      {
        v *= w[test_bit( m, rep ) ? 1 : 0];
      }
      out[m] = v;
    }
    return fn_table( arity, std::move( out ) );
  }
};

/*! \brief Result of `product_form_test`: certificate or failure. */
struct product_form_result
{
  std::optional<product_form_certificate> certificate;
  std::optional<product_form_failure> failure;

  bool ok() const { return certificate.has_value(); }
};

/*! \brief Tests whether a table is a weighted product form.
 *
 * A product form is a product of unary weights, constants on pinned
 * arguments, and binary (dis)equality links; its support is cut out by
 * the pins and links, and on the support the value factorizes over the
 * link classes.  The all-zero table is a product form with constant
 * zero.  On failure, the first obstruction in the fixed scan order
 * (projection shapes, then support, then log-modularity of the induced
 * class function) is reported.
 */
inline product_form_result product_form_test( const fn_table& f )
{
  const uint32_t n = f.arity();
  product_form_certificate cert;
  cert.arity = n;

  if ( f.is_zero() )
  {
    cert.constant = 0;
    for ( uint32_t i = 0; i < n; ++i )
    {
      cert.class_weights.push_back( { i, { rational( 1 ), rational( 1 ) } } );
    }
    return product_form_result{ cert, std::nullopt };
  }

  const auto support = underlying_relation( f );

  /* pins: arguments constant over the support */
  std::vector<int> pin_val( n, -1 );
  for ( uint32_t i = 0; i < n; ++i )
  {
    bool seen0 = false, seen1 = false;
    for ( auto m : support )
    {
      ( test_bit( m, i ) ? seen1 : seen0 ) = true;
    }
    if ( !seen0 )
    {
      pin_val[i] = 1;
      cert.pins[i] = 1;
    }
    else if ( !seen1 )
    {
      pin_val[i] = 0;
      cert.pins[i] = 0;
    }
  }

  /* pairwise support shadows of unpinned arguments must be equality,
   * disequality, or unconstrained */
  std::vector<uint32_t> parent( n ), parity( n, 0 );
  for ( uint32_t i = 0; i < n; ++i )
  {
    parent[i] = i;
  }
  const auto find = [&]( uint32_t v ) {
    uint32_t root = v, par = 0;
    while ( parent[root] != root )
    {
      par ^= parity[root];
      root = parent[root];
    }
    /* path compression with parity accumulation */
    while ( parent[v] != root )
    {
      const uint32_t next = parent[v];
      const uint32_t vp = parity[v];
      parent[v] = root;
      parity[v] = par;
      par ^= vp;
      v = next;
    }
    return root;
  };

  for ( uint32_t i = 0; i < n; ++i )
  {
    if ( pin_val[i] >= 0 )
    {
      continue;
    }
    for ( uint32_t j = i + 1; j < n; ++j )
    {
      if ( pin_val[j] >= 0 )
      {
        continue;
      }
      bool has[4] = { false, false, false, false };
      for ( auto m : support )
      {
        has[( test_bit( m, i ) ? 1 : 0 ) | ( test_bit( m, j ) ? 2 : 0 )] = true;
      }
      const int count = has[0] + has[1] + has[2] + has[3];
      const bool is_eq = has[0] && has[3] && !has[1] && !has[2];
      const bool is_neq = has[1] && has[2] && !has[0] && !has[3];
      if ( count == 4 )
      {
        continue;
      }
      if ( !is_eq && !is_neq )
      {
        return product_form_result{
            std::nullopt,
            product_form_failure{ product_form_failure_reason::projection_shape,
                                  std::make_pair( i, j ),
                                  {} } };
      }
      const uint32_t ri = find( i ), rj = find( j );
      if ( ri != rj )
      {
        const uint32_t link_parity = ( parity[i] ^ parity[j] ^ ( is_neq ? 1 : 0 ) ) & 1;
        if ( ri < rj )
        {
          parent[rj] = ri;
          parity[rj] = link_parity;
        }
        else
        {
          parent[ri] = rj;
          parity[ri] = link_parity;
        }
      }
    }
  }

  /* collect classes; representatives are the lowest members */
  std::vector<uint32_t> reps;
  for ( uint32_t i = 0; i < n; ++i )
  {
    if ( pin_val[i] < 0 && find( i ) == i )
    {
      reps.push_back( i );
    }
  }
  for ( uint32_t i = 0; i < n; ++i )
  {
    if ( pin_val[i] < 0 && find( i ) != i )
    {
      cert.links.push_back( { i, find( i ), parity[i] != 0 } );
    }
  }

  /* the pins and links alone define a set of 2^k points; the support
   * must exhaust it */
  const auto expand = [&]( uint64_t z ) {
    uint64_t m = 0;
    for ( uint32_t i = 0; i < n; ++i )
    {
      bool v;
      if ( pin_val[i] >= 0 )
      {
        v = pin_val[i] != 0;
      }
      else
      {
        const uint32_t r = find( i );
        const auto it = std::lower_bound( reps.begin(), reps.end(), r );
        const auto idx = static_cast<uint32_t>( it - reps.begin() );
        v = test_bit( z, idx ) != ( parity[i] != 0 );
      }
      if ( v )
      {
        m |= uint64_t( 1 ) << i;
      }
    }
    return m;
  };

  const uint64_t induced_size = uint64_t( 1 ) << reps.size();
  if ( support.size() != induced_size )
  {
    for ( uint64_t z = 0; z < induced_size; ++z )
    {
      const uint64_t m = expand( z );
      if ( f.at( m ).is_zero() )
      {
        return product_form_result{
            std::nullopt,
            product_form_failure{ product_form_failure_reason::support_mismatch,
                                  std::nullopt,
                                  { m } } };
      }
    }
  }

  /* the induced function on class representatives must be log-modular */
  for ( uint64_t za = 0; za < induced_size; ++za )
  {
    for ( uint64_t zb = 0; zb < induced_size; ++zb )
    {
      const rational lhs = f.at( expand( za | zb ) ) * f.at( expand( za & zb ) );
      const rational rhs = f.at( expand( za ) ) * f.at( expand( zb ) );
      if ( lhs != rhs )
      {
        return product_form_result{
            std::nullopt,
            product_form_failure{ product_form_failure_reason::log_modularity,
                                  std::nullopt,
                                  { expand( za ), expand( zb ) } } };
      }
    }
  }

  /* extract weights from the base point and single-flips */
  const rational base = f.at( expand( 0 ) );
  cert.constant = base;
  for ( uint32_t k = 0; k < reps.size(); ++k )
  {
    const rational w1 = f.at( expand( uint64_t( 1 ) << k ) ) / base;
    cert.class_weights.push_back( { reps[k], { rational( 1 ), w1 } } );
  }
  return product_form_result{ cert, std::nullopt };
}

/* -------------------------------------------------------------------------
 * support trichotomy
 * ---------------------------------------------------------------------- */

/*! \brief The three support classes driving the hardness trichotomy. */
enum class relation_kind
{
  /*! cut out by pins and (dis)equality links */
  within_id1,
  /*! affine (closed under triple xor) but not within_id1 */
  affine_il2,
  /*! not closed under triple xor */
  non_affine
};

/*! \brief Classification of a support with a deterministic witness. */
struct relation_classification
{
  relation_kind kind;
  /*! \brief Tuples a, b, c in the relation with a^b^c outside it. */
  std::optional<std::array<uint64_t, 3>> non_affine_witness;
  /*! \brief Point of the pin/link closure missing from the relation. */
  std::optional<uint64_t> closure_witness;
};

/*! \brief Checks closure under `a ^ b ^ c` for tuples in the relation. */
inline bool is_affine_relation( const std::vector<uint64_t>& relation )
{
  for ( auto a : relation )
  {
    for ( auto b : relation )
    {
      for ( auto c : relation )
      {
        if ( !std::binary_search( relation.begin(), relation.end(), a ^ b ^ c ) )
        {
          return false;
        }
      }
    }
  }
  return true;
}

/*! \brief Classifies a nonempty relation given as sorted masks.
 *
 * Throws `std::invalid_argument` on an empty relation (a degenerate
 * case with no meaningful class).  Witnesses are deterministic: the
 * lexicographically first violating triple, or the smallest closure
 * point outside the relation.
 */
inline relation_classification relation_trichotomy( const std::vector<uint64_t>& relation,
                                                    uint32_t arity )
{
  if ( relation.empty() )
  {
    throw std::invalid_argument( "relation_trichotomy: empty relation" );
  }

  for ( auto a : relation )
  {
    for ( auto b : relation )
    {
      for ( auto c : relation )
      {
        if ( !std::binary_search( relation.begin(), relation.end(), a ^ b ^ c ) )
        {
          return relation_classification{ relation_kind::non_affine,
                                          std::array<uint64_t, 3>{ a, b, c },
                                          std::nullopt };
        }
      }
    }
  }

  /* closure under all implied pins and (dis)equality links */
  std::vector<int> pin_val( arity, -1 );
  for ( uint32_t i = 0; i < arity; ++i )
  {
    bool seen0 = false, seen1 = false;
    for ( auto m : relation )
    {
      ( test_bit( m, i ) ? seen1 : seen0 ) = true;
    }
    if ( !seen0 )
    {
      pin_val[i] = 1;
    }
    else if ( !seen1 )
    {
      pin_val[i] = 0;
    }
  }
  std::vector<std::array<uint32_t, 3>> links; /* (i, j, negated) */
  for ( uint32_t i = 0; i < arity; ++i )
  {
    for ( uint32_t j = i + 1; j < arity; ++j )
    {
      if ( pin_val[i] >= 0 || pin_val[j] >= 0 )
      {
        continue;
      }
      bool has[4] = { false, false, false, false };
      for ( auto m : relation )
      {
        has[( test_bit( m, i ) ? 1 : 0 ) | ( test_bit( m, j ) ? 2 : 0 )] = true;
      }
      if ( !has[1] && !has[2] )
      {
        links.push_back( { i, j, 0 } );
      }
      else if ( !has[0] && !has[3] )
      {
        links.push_back( { i, j, 1 } );
      }
    }
  }
  for ( uint64_t m = 0; m < ( uint64_t( 1 ) << arity ); ++m )
  {
    bool in_closure = true;
    for ( uint32_t i = 0; i < arity && in_closure; ++i )
    {
      if ( pin_val[i] >= 0 && test_bit( m, i ) != ( pin_val[i] != 0 ) )
      {
        in_closure = false;
      }
    }
    for ( const auto& l : links )
    {
      if ( !in_closure )
      {
        break;
      }
      if ( ( test_bit( m, l[0] ) != test_bit( m, l[1] ) ) != ( l[2] != 0 ) )
      {
        in_closure = false;
      }
    }
    if ( in_closure && !std::binary_search( relation.begin(), relation.end(), m ) )
    {
      return relation_classification{ relation_kind::affine_il2, std::nullopt, m };
    }
  }
  return relation_classification{ relation_kind::within_id1, std::nullopt, std::nullopt };
}

/*! \brief Convenience overload on a table's support. */
inline relation_classification relation_trichotomy( const fn_table& f )
{
  return relation_trichotomy( underlying_relation( f ), f.arity() );
}

} // namespace ccsp
