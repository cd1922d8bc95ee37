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
  \file gadgets.hpp
  \brief Constructive reductions between functions: binary-case
  witnesses with powering schedules, disjunction universality, peak
  factors, arity-3 supermodular decompositions, positivity lifting,
  non-supermodular extraction, parity normalization, the Ising cycle
  reduction, dyadic weight synthesis, and instance rewriting with a
  certified accuracy budget.

  Several constructions approach their target only in the limit of
  repeating a designated group of atoms k times.  Such plans carry an
  exact error bound `prefactor * ratio^k` and a schedule that picks the
  smallest sufficient k for a requested accuracy by exact rational
  comparison; instantiation is purely symbolic and the result can be
  evaluated or spliced into instances.
*/

#pragma once

#include "analysis.hpp"
#include "formula.hpp"
#include "table.hpp"
#include "transforms.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ccsp
{

/* -------------------------------------------------------------------------
 * symbolic radicals
 * ---------------------------------------------------------------------- */

/*! \brief A rational raised to a rational exponent, kept symbolic.
 *
 * Used for the few normalization weights that can be irrational (roots
 * of products of table values).  When the root happens to be rational
 * it is resolved into `exact`; tables themselves never store radicals.
 */
struct radical_value
{
  rational base;
  int64_t num_exp = 1;
  int64_t den_exp = 1;
  std::optional<rational> exact;

  bool is_exact() const
  {
    return exact.has_value();
  }
};

namespace detail
{

/*! \brief Integer k-th root when it is exact. */
inline std::optional<bigint> exact_kth_root( const bigint& n, uint64_t k )
{
  if ( n < 0 || k == 0 )
  {
    return std::nullopt;
  }
  if ( n == 0 || n == 1 || k == 1 )
  {
    return n;
  }
  bigint lo = 1, hi = n;
  while ( lo < hi )
  {
    const bigint mid = ( lo + hi + 1 ) / 2;
    bigint p = 1;
    bool over = false;
    for ( uint64_t i = 0; i < k; ++i )
    {
      p *= mid;
      if ( p > n )
      {
        over = true;
        break;
      }
    }
    if ( over )
    {
      hi = mid - 1;
    }
    else
    {
      lo = mid;
    }
  }
  bigint p = 1;
  for ( uint64_t i = 0; i < k; ++i )
  {
    p *= lo;
  }
  if ( p == n )
  {
    return lo;
  }
  return std::nullopt;
}

} // namespace detail

/*! \brief Builds `base^(num/den)`, resolving to a rational when the
 * root is exact.
 *
 * Requires a positive base and a nonzero exponent denominator.
 */
inline radical_value make_radical( const rational& base, int64_t num, int64_t den )
{
  if ( !base.is_positive() )
  {
    throw std::invalid_argument( "make_radical: base must be positive" );
  }
  if ( den == 0 )
  {
    throw std::invalid_argument( "make_radical: zero exponent denominator" );
  }
  if ( den < 0 )
  {
    num = -num;
    den = -den;
  }
  const int64_t g = std::gcd( num < 0 ? -num : num, den );
  if ( g > 1 )
  {
    num /= g;
    den /= g;
  }
  radical_value r;
  r.base = base;
  r.num_exp = num;
  r.den_exp = den;
  if ( num == 0 )
  {
    r.exact = rational( 1 );
    return r;
  }
  const rational powered = base.pow( num < 0 ? -num : num );
  const auto rn = detail::exact_kth_root( powered.numerator(), uint64_t( den ) );
  const auto rd = detail::exact_kth_root( powered.denominator(), uint64_t( den ) );
  if ( rn && rd )
  {
    rational v( *rn, *rd );
    if ( num < 0 )
    {
      v = rational( 1 ) / v;
    }
    r.exact = v;
  }
  return r;
}

/* -------------------------------------------------------------------------
 * gadget plans
 * ---------------------------------------------------------------------- */

/*! \brief A formula template with an optional repeated atom group.
 *
 * `base` is always present.  For plans with a repetition stage,
 * instantiating at count k appends k copies of `pow_atoms`, renaming
 * the group-local bound variables `pow_vars` apart per copy; the value
 * of the instantiated formula is then within `prefactor * ratio^k` of
 * `target` in sup-norm.  Plans that approximate without a repetition
 * stage record a fixed `error_bound` instead.
 */
struct gadget_plan
{
  pps_formula base;
  std::vector<std::string> pow_vars;
  std::vector<atom> pow_atoms; /*!< indices >= base.vars.size() address pow_vars */
  fn_env symbols;
  fn_table target = tables::nullary( rational( 0 ) );
  bool exact = false;
  rational prefactor = rational( 0 );
  rational ratio = rational( 0 );
  std::optional<rational> error_bound;
  std::string note;
};

/*! \brief Smallest repetition count meeting the requested accuracy.
 *
 * Returns the least k >= 1 with `prefactor * ratio^k <= eps`, or with
 * strict inequality when `strict` is set; plans without a repetition
 * stage need none and yield 0.  The comparison is exact.
 */
inline uint64_t schedule_k( const gadget_plan& plan, const rational& eps,
                            bool strict = false )
{
  if ( !eps.is_positive() )
  {
    throw std::invalid_argument( "schedule_k: accuracy must be positive" );
  }
  if ( plan.exact || plan.pow_atoms.empty() )
  {
    return 0;
  }
  if ( !plan.prefactor.is_positive() || !plan.ratio.is_positive() ||
       !( plan.ratio < rational( 1 ) ) )
  {
    throw std::domain_error( "schedule_k: plan lacks a contracting error bound" );
  }
  uint64_t k = 1;
  rational err = plan.prefactor * plan.ratio;
  while ( strict ? !( err < eps ) : !( err <= eps ) )
  {
    err *= plan.ratio;
    ++k;
  }
  return k;
}

/*! \brief Expands a plan at repetition count k into a plain formula. */
inline pps_formula instantiate( const gadget_plan& plan, uint64_t k )
{
  if ( plan.exact || plan.pow_atoms.empty() )
  {
    return plan.base;
  }
  pps_formula out = plan.base;
  const auto nb = static_cast<uint32_t>( plan.base.vars.size() );
  for ( uint64_t c = 1; c <= k; ++c )
  {
    const auto offset = static_cast<uint32_t>( out.vars.size() );
    for ( const auto& pv : plan.pow_vars )
    {
      out.vars.push_back( pv + "$" + std::to_string( c ) );
    }
    for ( const auto& a : plan.pow_atoms )
    {
      atom na = a;
      for ( auto& v : na.args )
      {
        if ( v >= nb )
        {
          v = offset + ( v - nb );
        }
      }
      out.atoms.push_back( std::move( na ) );
    }
  }
  std::set<std::string> names( out.vars.begin(), out.vars.end() );
  if ( names.size() != out.vars.size() )
  {
    throw std::logic_error( "instantiate: repeated group variables collide" );
  }
  return out;
}

/*! \brief Evaluates an instantiated plan to a table. */
inline fn_table plan_table( const gadget_plan& plan, uint64_t k,
                            const eval_options& opt = {} )
{
  return evaluate( instantiate( plan, k ), plan.symbols, opt );
}

/* -------------------------------------------------------------------------
 * binary case analysis
 * ---------------------------------------------------------------------- */

namespace detail
{

/*! \brief Table from matrix entries (first argument indexes the row). */
inline fn_table from_matrix( const rational& f00, const rational& f01,
                             const rational& f10, const rational& f11 )
{
  return fn_table( 2, { f00, f10, f01, f11 } );
}

inline const rational& m00( const fn_table& f ) { return f.at( 0 ); }
inline const rational& m01( const fn_table& f ) { return f.at( 2 ); }
inline const rational& m10( const fn_table& f ) { return f.at( 1 ); }
inline const rational& m11( const fn_table& f ) { return f.at( 3 ); }

inline fn_table transpose_binary( const fn_table& f )
{
  return from_matrix( m00( f ), m10( f ), m01( f ), m11( f ) );
}

} // namespace detail

/*! \brief The five shapes a binary function can take. */
enum class binary_case
{
  rank_one,     /*!< product of two unaries */
  weighted_eq,  /*!< unary times equality */
  weighted_neq, /*!< unary times disequality */
  imp_like,     /*!< reaches the implication via powering */
  or_like       /*!< reaches the disjunction via powering */
};

/*! \brief Case label with the exact parameters that witness it.
 *
 * All parameters refer to the table after transposition when
 * `transposed` is set; the analysis normalizes so that the upper-right
 * matrix entry is at least the lower-left one.  For `rank_one`, `u1`
 * and `u2` are the two unary factors.  For every other case they are
 * the weights whose pointwise application to F yields the canonical
 * core: EQ, NEQ, a skewed implication with lower-left entry `alpha`, a
 * skewed disjunction with upper-left entry `alpha`, or NAND when
 * `nand_subcase` is set.
 */
struct binary_classification
{
  binary_case kind = binary_case::rank_one;
  bool transposed = false;
  bool nand_subcase = false;
  rational alpha = rational( 0 );
  std::array<rational, 2> u1{ rational( 1 ), rational( 1 ) };
  std::array<rational, 2> u2{ rational( 1 ), rational( 1 ) };

  /*! \brief Name of the canonical function the case reaches. */
  const char* canonical() const
  {
    switch ( kind )
    {
      case binary_case::rank_one: return "UNARY";
      case binary_case::weighted_eq: return "EQ";
      case binary_case::weighted_neq: return "NEQ";
      case binary_case::imp_like: return "IMP";
      default: return "OR";
    }
  }

  /*! \brief Rebuilds the classified table from the parameters. */
  fn_table reconstruct() const
  {
    using detail::from_matrix;
    if ( kind == binary_case::rank_one )
    {
      const fn_table t = from_matrix( u1[0] * u2[0], u1[0] * u2[1], u1[1] * u2[0],
                                      u1[1] * u2[1] );
      return transposed ? detail::transpose_binary( t ) : t;
    }
    fn_table core = tables::all_ones( 2 );
    switch ( kind )
    {
      case binary_case::weighted_eq:
        core = tables::eq();
        break;
      case binary_case::weighted_neq:
        core = tables::neq();
        break;
      case binary_case::imp_like:
        core = from_matrix( rational( 1 ), rational( 1 ), alpha, rational( 1 ) );
        break;
      default:
        core = nand_subcase
                   ? tables::nand_table()
                   : from_matrix( alpha, rational( 1 ), rational( 1 ), rational( 1 ) );
        break;
    }
    /* invert the forward weights: F = core / (u1 u2) */
    std::vector<rational> values( 4 );
    for ( uint64_t m = 0; m < 4; ++m )
    {
      const auto w = u1[m & 1] * u2[( m >> 1 ) & 1];
      values[m] = core.at( m ).is_zero() ? rational( 0 ) : core.at( m ) / w;
    }
    const fn_table t( 2, std::move( values ) );
    return transposed ? detail::transpose_binary( t ) : t;
  }
};

/*! \brief Decides which of the five binary shapes F has.
 *
 * The table is transposed first if needed so that the upper-right
 * matrix entry is at least the lower-left one; the returned parameters
 * reproduce F exactly through `reconstruct`.  Throws
 * `std::invalid_argument` unless F is binary.
 */
inline binary_classification classify_binary( const fn_table& f )
{
  using namespace detail;
  if ( f.arity() != 2 )
  {
    throw std::invalid_argument( "classify_binary: table must be binary" );
  }
  binary_classification r;
  const rational a = m00( f ), d = m11( f );
  rational b = m01( f ), c = m10( f );
  if ( b < c )
  {
    std::swap( b, c );
    r.transposed = true;
  }

  if ( a * d == b * c )
  {
    r.kind = binary_case::rank_one;
    if ( a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() )
    {
      r.u1 = { rational( 0 ), rational( 0 ) };
      r.u2 = { rational( 1 ), rational( 1 ) };
    }
    else if ( a.is_zero() && b.is_zero() )
    {
      r.u1 = { rational( 0 ), rational( 1 ) };
      r.u2 = { c, d };
    }
    else if ( c.is_zero() && d.is_zero() )
    {
      r.u1 = { rational( 1 ), rational( 0 ) };
      r.u2 = { a, b };
    }
    else if ( a.is_zero() && c.is_zero() )
    {
      r.u1 = { b, d };
      r.u2 = { rational( 0 ), rational( 1 ) };
    }
    else if ( b.is_zero() && d.is_zero() )
    {
      r.u1 = { a, c };
      r.u2 = { rational( 1 ), rational( 0 ) };
    }
    else
    {
      r.u1 = { rational( 1 ), c / a };
      r.u2 = { a, b };
    }
    return r;
  }
  if ( b.is_zero() && c.is_zero() )
  {
    /* a nonzero determinant forces a, d > 0 */
    r.kind = binary_case::weighted_eq;
    r.u1 = { rational( 1 ) / a, rational( 1 ) / d };
    return r;
  }
  if ( a.is_zero() && d.is_zero() )
  {
    r.kind = binary_case::weighted_neq;
    r.u1 = { rational( 1 ) / b, rational( 1 ) / c };
    return r;
  }
  if ( a.is_positive() && b.is_positive() && d.is_positive() && a * d > b * c )
  {
    r.kind = binary_case::imp_like;
    r.alpha = ( b * c ) / ( a * d );
    r.u1 = { rational( 1 ) / a, b / ( a * d ) };
    r.u2 = { rational( 1 ), a / b };
    return r;
  }
  r.kind = binary_case::or_like;
  if ( d.is_zero() )
  {
    /* a, b, c > 0 here */
    r.nand_subcase = true;
    r.u1 = { rational( 1 ) / a, rational( 1 ) / c };
    r.u2 = { rational( 1 ), a / b };
    return r;
  }
  /* b, c, d > 0 and the determinant is negative */
  r.alpha = ( a * d ) / ( b * c );
  r.u1 = { d / b, rational( 1 ) };
  r.u2 = { rational( 1 ) / c, rational( 1 ) / d };
  return r;
}

/* -------------------------------------------------------------------------
 * binary witnesses
 * ---------------------------------------------------------------------- */

/*! \brief Expresses the canonical function from F and F back from it. */
struct binary_witness_result
{
  binary_classification classification;
  gadget_plan to_canonical;   /*!< F expresses NEQ, IMP or OR */
  gadget_plan from_canonical; /*!< the canonical function expresses F */
};

namespace detail
{

/*! \brief Atom applying `fn` to two variables of a binary plan,
 * swapping the arguments when the analysis transposed. */
inline atom f_atom( const std::string& fn, uint32_t first, uint32_t second,
                    bool transposed )
{
  if ( transposed )
  {
    std::swap( first, second );
  }
  return atom{ fn, { first, second } };
}

/*! \brief Swaps the two free variables in every atom, so a plan built
 * in the transposed frame targets the original table. */
inline void swap_free_pair( pps_formula& psi )
{
  for ( auto& a : psi.atoms )
  {
    for ( auto& v : a.args )
    {
      if ( v < 2 )
      {
        v = 1 - v;
      }
    }
  }
}

inline void swap_free_pair( std::vector<atom>& atoms )
{
  for ( auto& a : atoms )
  {
    for ( auto& v : a.args )
    {
      if ( v < 2 )
      {
        v = 1 - v;
      }
    }
  }
}

inline fn_table unary_of( const std::array<rational, 2>& u )
{
  return tables::unary( u[0], u[1] );
}

} // namespace detail

/*! \brief Builds the two conversion plans for a classified binary table.
 *
 * The forward plan expresses the canonical function (NEQ, IMP or OR)
 * from F; the reverse plan expresses F back from that canonical
 * function and unary weights only.  Both carry exact rational weights
 * and, where a powering limit is involved, a `prefactor * ratio^k`
 * error bound with an exact schedule.  The product-of-unaries and
 * weighted-equality cases have no canonical target and are rejected
 * with `std::invalid_argument`.
 */
inline binary_witness_result binary_witness( const fn_table& f )
{
  using detail::f_atom;
  const auto cls = classify_binary( f );
  if ( cls.kind == binary_case::rank_one || cls.kind == binary_case::weighted_eq )
  {
    throw std::invalid_argument(
        "binary_witness: the table factors through unaries and equality; no "
        "canonical target" );
  }
  /* working-frame matrix entries (transposed so b >= c) */
  const bool tr = cls.transposed;
  const rational a = detail::m00( f );
  const rational b = tr ? detail::m10( f ) : detail::m01( f );
  const rational c = tr ? detail::m01( f ) : detail::m10( f );
  const rational d = detail::m11( f );

  binary_witness_result out{ cls, gadget_plan{}, gadget_plan{} };
  gadget_plan& fwd = out.to_canonical;
  gadget_plan& rev = out.from_canonical;
  fwd.symbols.emplace( "F", f );
  rev.target = f;

  if ( cls.kind == binary_case::weighted_neq )
  {
    /* NEQ = U'(x1) F(x1, x2) exactly, and back with the stored values */
    fwd.base = make_formula( { "x1", "x2" }, {}, {} );
    fwd.base.atoms.push_back( atom{ "u$f", { 0 } } );
    fwd.base.atoms.push_back( f_atom( "F", 0, 1, tr ) );
    fwd.symbols.emplace( "u$f", detail::unary_of( cls.u1 ) );
    fwd.target = tables::neq();
    fwd.exact = true;
    fwd.note = "disequality from a weighted disequality";

    rev.base = make_formula( { "x1", "x2" }, {},
                             { { "u$r", { "x1" } }, { "NEQ", { "x1", "x2" } } } );
    rev.symbols.emplace( "u$r", tables::unary( b, c ) );
    rev.symbols.emplace( "NEQ", tables::neq() );
    rev.exact = true;
    rev.note = "weighted disequality from the disequality";
    if ( tr )
    {
      detail::swap_free_pair( rev.base );
    }
    return out;
  }

  if ( cls.kind == binary_case::imp_like )
  {
    /* forward: (U1 U2 F)^k converges to IMP at rate alpha */
    fwd.base = make_formula( { "x1", "x2" }, {}, {} );
    const std::vector<atom> copy = { atom{ "u$1", { 0 } }, atom{ "u$2", { 1 } },
                                     f_atom( "F", 0, 1, tr ) };
    fwd.symbols.emplace( "u$1", detail::unary_of( cls.u1 ) );
    fwd.symbols.emplace( "u$2", detail::unary_of( cls.u2 ) );
    fwd.target = tables::imp();
    if ( cls.alpha.is_zero() )
    {
      fwd.base.atoms = copy;
      fwd.exact = true;
    }
    else
    {
      fwd.pow_atoms = copy;
      fwd.prefactor = rational( 1 );
      fwd.ratio = cls.alpha;
    }
    fwd.note = "implication from a positive-determinant table";

    /* reverse, always exact: the skewed implication lies in the
     * implication clone via one composition step */
    if ( cls.alpha.is_zero() )
    {
      rev.base = make_formula( { "x1", "x2" }, {},
                               { { "u$3", { "x1" } },
                                 { "u$4", { "x2" } },
                                 { "IMP", { "x1", "x2" } } } );
    }
    else
    {
      rev.base = make_formula( { "x1", "x2" }, { "y" },
                               { { "u$3", { "x1" } },
                                 { "u$4", { "x2" } },
                                 { "IMP", { "x1", "y" } },
                                 { "u$1p", { "y" } },
                                 { "u$2p", { "x2" } },
                                 { "IMP", { "x2", "y" } } } );
      rev.symbols.emplace( "u$1p",
                           tables::unary( rational( 1 ) / cls.alpha - rational( 1 ),
                                          rational( 1 ) ) );
      rev.symbols.emplace( "u$2p", tables::unary( cls.alpha, rational( 1 ) ) );
    }
    rev.symbols.emplace( "u$3", tables::unary( a, a * d / b ) );
    rev.symbols.emplace( "u$4", tables::unary( rational( 1 ), b / a ) );
    rev.symbols.emplace( "IMP", tables::imp() );
    rev.exact = true;
    rev.note = "table recovered exactly from the implication";
    if ( tr )
    {
      detail::swap_free_pair( rev.base );
    }
    return out;
  }

  /* disjunction-like */
  fwd.target = tables::or_table();
  rev.symbols.emplace( "OR", tables::or_table() );

  if ( !cls.nand_subcase )
  {
    /* forward: (U1 U2 F)^k is a skewed disjunction converging at rate
     * alpha */
    fwd.base = make_formula( { "x1", "x2" }, {}, {} );
    const std::vector<atom> copy = { atom{ "u$1", { 0 } }, atom{ "u$2", { 1 } },
                                     f_atom( "F", 0, 1, tr ) };
    fwd.symbols.emplace( "u$1", detail::unary_of( cls.u1 ) );
    fwd.symbols.emplace( "u$2", detail::unary_of( cls.u2 ) );
    if ( cls.alpha.is_zero() )
    {
      fwd.base.atoms = copy;
      fwd.exact = true;
    }
    else
    {
      fwd.pow_atoms = copy;
      fwd.prefactor = rational( 1 );
      fwd.ratio = cls.alpha;
    }
    fwd.note = "disjunction from a negative-determinant table";

    /* reverse: undo the weights around the skewed disjunction.  The
     * skew is restored from the plain disjunction by the same
     * composition as in the implication case, except that the
     * implication link onto the witness variable is itself approached
     * by a powered soft-disequality stage feeding a disjunction. */
    rev.symbols.emplace( "ub$1", tables::unary( b / d, rational( 1 ) ) );
    rev.symbols.emplace( "ub$2", tables::unary( c, d ) );
    if ( cls.alpha.is_zero() )
    {
      rev.base = make_formula( { "x1", "x2" }, {},
                               { { "ub$1", { "x1" } },
                                 { "ub$2", { "x2" } },
                                 { "OR", { "x1", "x2" } } } );
      rev.exact = true;
      rev.note = "table recovered exactly from the disjunction";
    }
    else
    {
      rev.base = make_formula( { "x1", "x2" }, { "w", "t" },
                               { { "ub$1", { "x1" } },
                                 { "ub$2", { "x2" } },
                                 { "OR", { "x1", "w" } },
                                 { "u$1p", { "w" } },
                                 { "u$2p", { "x2" } },
                                 { "OR", { "t", "w" } } } );
      rev.symbols.emplace( "u$1p",
                           tables::unary( rational( 1 ) / cls.alpha - rational( 1 ),
                                          rational( 1 ) ) );
      rev.symbols.emplace( "u$2p", tables::unary( cls.alpha, rational( 1 ) ) );
      rev.symbols.emplace( "u$h", tables::unary( rational( 2 ), rational( 1, 2 ) ) );
      rev.pow_atoms = { atom{ "u$h", { 1 } }, atom{ "u$h", { 3 } },
                        atom{ "OR", { 1, 3 } } };
      rev.prefactor = std::max( b, b * c / a );
      rev.ratio = rational( 1, 4 );
      rev.note = "table from the disjunction through one powered stage";
      if ( tr )
      {
        detail::swap_free_pair( rev.pow_atoms );
      }
    }
    if ( tr )
    {
      detail::swap_free_pair( rev.base );
    }
    return out;
  }

  /* NAND subcase: NAND = U1 U2 F exactly; the disjunction arises from
   * NAND between two powered soft-disequality stages, and conversely */
  fwd.base = make_formula( { "x1", "x2" }, { "y", "z" }, {} );
  fwd.base.atoms.push_back( atom{ "u$1", { 2 } } );
  fwd.base.atoms.push_back( atom{ "u$2", { 3 } } );
  fwd.base.atoms.push_back( f_atom( "F", 2, 3, tr ) );
  fwd.pow_atoms = { atom{ "u$h", { 0 } },    atom{ "u$h", { 2 } },
                    atom{ "u$1", { 0 } },    atom{ "u$2", { 2 } },
                    f_atom( "F", 0, 2, tr ), atom{ "u$h", { 3 } },
                    atom{ "u$h", { 1 } },    atom{ "u$1", { 3 } },
                    atom{ "u$2", { 1 } },    f_atom( "F", 3, 1, tr ) };
  fwd.symbols.emplace( "u$1", detail::unary_of( cls.u1 ) );
  fwd.symbols.emplace( "u$2", detail::unary_of( cls.u2 ) );
  fwd.symbols.emplace( "u$h", tables::unary( rational( 1, 2 ), rational( 2 ) ) );
  fwd.prefactor = rational( 3 );
  fwd.ratio = rational( 1, 4 );
  fwd.note = "disjunction from a table vanishing only at (1,1)";

  rev.base = make_formula( { "x1", "x2" }, { "y", "z" },
                           { { "ub$1", { "x1" } },
                             { "ub$2", { "x2" } },
                             { "OR", { "y", "z" } } } );
  rev.symbols.emplace( "ub$1", tables::unary( a, c ) );
  rev.symbols.emplace( "ub$2", tables::unary( rational( 1 ), b / a ) );
  rev.symbols.emplace( "u$h", tables::unary( rational( 2 ), rational( 1, 2 ) ) );
  rev.pow_atoms = { atom{ "u$h", { 0 } },   atom{ "u$h", { 2 } },
                    atom{ "OR", { 0, 2 } }, atom{ "u$h", { 3 } },
                    atom{ "u$h", { 1 } },   atom{ "OR", { 3, 1 } } };
  rational top( 0 );
  for ( uint64_t m = 0; m < 4; ++m )
  {
    top = std::max( top, ( ( m & 1 ) ? c : a ) *
                             ( ( m >> 1 ) ? b / a : rational( 1 ) ) );
  }
  rev.prefactor = rational( 3 ) * top;
  rev.ratio = rational( 1, 4 );
  rev.note = "table from the disjunction through two powered stages";
  if ( tr )
  {
    detail::swap_free_pair( rev.base );
    detail::swap_free_pair( rev.pow_atoms );
  }
  return out;
}

/* -------------------------------------------------------------------------
 * disjunction universality
 * ---------------------------------------------------------------------- */

/*! \brief The staged construction expressing any table from IMP, NAND,
 * unaries and constants. */
struct or_universal_pipeline
{
  pps_formula psi1; /*!< twice the normalized value on the support, 1 off it */
  pps_formula psi2; /*!< 2 on the support, 1 off it */
  fn_env symbols;
  rational mu = rational( 0 );   /*!< smallest positive value */
  std::vector<uint64_t> support; /*!< masks with positive value, ascending */
  gadget_plan plan;              /*!< the full pipeline with its powering stage */
};

/*! \brief Builds the support-indicator pipeline for an arbitrary table.
 *
 * One bound selector variable per support point drives implications
 * into the point's 1-coordinates and NANDs into its 0-coordinates; the
 * weighted stage hits `2F(A)/mu` on the support, the unweighted stage
 * hits 2, and repeating the halved unweighted stage k times suppresses
 * off-support values to `(mu/2) * 2^-k`.  Permissive and identically
 * zero tables yield exact plans.
 */
inline or_universal_pipeline or_universal( const fn_table& f )
{
  const uint32_t n = f.arity();
  or_universal_pipeline p;
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    if ( f.at( m ).is_positive() )
    {
      p.support.push_back( m );
      if ( p.mu.is_zero() || f.at( m ) < p.mu )
      {
        p.mu = f.at( m );
      }
    }
  }
  std::vector<std::string> xs;
  for ( uint32_t i = 1; i <= n; ++i )
  {
    xs.push_back( "x" + std::to_string( i ) );
  }

  if ( p.support.empty() )
  {
    /* identically zero: a single vanishing symbol */
    p.plan.base = make_formula( xs, {}, {} );
    if ( n == 0 )
    {
      p.plan.base.atoms.push_back( atom{ "zero$", {} } );
      p.symbols.emplace( "zero$", tables::nullary( rational( 0 ) ) );
    }
    else
    {
      p.plan.base.atoms.push_back( atom{ "zero$", { 0 } } );
      p.symbols.emplace( "zero$", tables::unary( rational( 0 ), rational( 0 ) ) );
    }
    p.plan.symbols = p.symbols;
    p.plan.target = f;
    p.plan.exact = true;
    p.plan.note = "identically zero";
    p.psi1 = p.plan.base;
    p.psi2 = p.plan.base;
    return p;
  }

  p.symbols.emplace( "IMP", tables::imp() );
  p.symbols.emplace( "NAND", tables::nand_table() );
  p.symbols.emplace( "half$", tables::half() );
  p.symbols.emplace( "scale$", tables::nullary( p.mu / rational( 2 ) ) );

  const auto selector_atoms = [&]( uint32_t zvar, uint64_t mask ) {
    std::vector<atom> atoms;
    for ( uint32_t i = 0; i < n; ++i )
    {
      atoms.push_back( atom{ test_bit( mask, i ) ? "IMP" : "NAND", { zvar, i } } );
    }
    return atoms;
  };

  std::vector<std::string> zs, ws;
  for ( std::size_t t = 0; t < p.support.size(); ++t )
  {
    zs.push_back( "z$" + std::to_string( t ) );
    ws.push_back( "w$" + std::to_string( t ) );
  }

  p.psi1 = make_formula( xs, zs, {} );
  p.psi2 = make_formula( xs, ws, {} );
  for ( std::size_t t = 0; t < p.support.size(); ++t )
  {
    const auto name = "u$" + std::to_string( t );
    p.symbols.emplace(
        name,
        tables::unary( rational( 1 ), rational( 2 ) * f.at( p.support[t] ) / p.mu -
                                          rational( 1 ) ) );
    const auto zvar = n + static_cast<uint32_t>( t );
    p.psi1.atoms.push_back( atom{ name, { zvar } } );
    for ( auto& sel : selector_atoms( zvar, p.support[t] ) )
    {
      p.psi1.atoms.push_back( sel );
    }
    for ( auto& sel : selector_atoms( zvar, p.support[t] ) )
    {
      p.psi2.atoms.push_back( sel );
    }
  }

  p.plan.base = p.psi1;
  p.plan.base.atoms.insert( p.plan.base.atoms.begin(), atom{ "scale$", {} } );
  p.plan.symbols = p.symbols;
  p.plan.target = f;
  if ( p.support.size() == f.size() )
  {
    p.plan.exact = true;
    p.plan.note = "permissive: no limit stage needed";
  }
  else
  {
    p.plan.pow_vars = ws;
    p.plan.pow_atoms.push_back( atom{ "half$", {} } );
    const auto base_size = static_cast<uint32_t>( p.plan.base.vars.size() );
    for ( std::size_t t = 0; t < p.support.size(); ++t )
    {
      for ( auto& sel : selector_atoms( base_size + static_cast<uint32_t>( t ),
                                        p.support[t] ) )
      {
        p.plan.pow_atoms.push_back( sel );
      }
    }
    p.plan.prefactor = p.mu / rational( 2 );
    p.plan.ratio = rational( 1, 2 );
    p.plan.note = "support indicator sharpened by halving";
  }
  return p;
}

/* -------------------------------------------------------------------------
 * peak factors and arity-3 supermodular decomposition
 * ---------------------------------------------------------------------- */

/*! \brief A formula whose value is c above a threshold point and 1
 * elsewhere. */
struct chi_gadget
{
  pps_formula formula;
  fn_env symbols;
  fn_table table = tables::nullary( rational( 1 ) );
};

/*! \brief Builds the threshold factor for a mask.
 *
 * The value is `c` at every point above `y0` and 1 elsewhere.  For a
 * mask with at least two bits this requires `c >= 1` (one bound
 * selector with weight c - 1 drives implications into the mask's
 * coordinates); for smaller masks any positive c works via a unary or
 * nullary symbol.
 */
inline chi_gadget chi_builder( uint32_t arity, uint64_t y0, const rational& c )
{
  if ( arity > max_table_arity() )
  {
    throw std::invalid_argument( "chi_builder: arity exceeds the table cap" );
  }
  if ( y0 >= ( uint64_t( 1 ) << arity ) )
  {
    throw std::invalid_argument( "chi_builder: mask out of range" );
  }
  if ( !c.is_positive() )
  {
    throw std::invalid_argument( "chi_builder: the peak value must be positive" );
  }
  const int weight = std::popcount( y0 );
  if ( weight > 1 && c < rational( 1 ) )
  {
    throw std::invalid_argument(
        "chi_builder: peaks over two or more coordinates need a value >= 1" );
  }
  chi_gadget g;
  std::vector<std::string> xs;
  for ( uint32_t i = 1; i <= arity; ++i )
  {
    xs.push_back( "x" + std::to_string( i ) );
  }
  std::vector<rational> values;
  values.reserve( uint64_t( 1 ) << arity );
  for ( uint64_t m = 0; m < ( uint64_t( 1 ) << arity ); ++m )
  {
    values.push_back( ( m & y0 ) == y0 ? c : rational( 1 ) );
  }
  g.table = fn_table( arity, std::move( values ) );

  if ( weight > 1 )
  {
    g.formula = make_formula( xs, { "z" }, {} );
    g.formula.atoms.push_back( atom{ "u$peak", { arity } } );
    g.symbols.emplace( "u$peak", tables::unary( rational( 1 ), c - rational( 1 ) ) );
    g.symbols.emplace( "IMP", tables::imp() );
    for ( uint32_t i = 0; i < arity; ++i )
    {
      if ( test_bit( y0, i ) )
      {
        g.formula.atoms.push_back( atom{ "IMP", { arity, i } } );
      }
    }
  }
  else if ( weight == 1 )
  {
    const auto i = static_cast<uint32_t>( std::countr_zero( y0 ) );
    g.formula = make_formula( xs, {}, {} );
    g.formula.atoms.push_back( atom{ "u$peak", { i } } );
    g.symbols.emplace( "u$peak", tables::unary( rational( 1 ), c ) );
  }
  else
  {
    g.formula = make_formula( xs, {}, {} );
    g.formula.atoms.push_back( atom{ "c$peak", {} } );
    g.symbols.emplace( "c$peak", tables::nullary( c ) );
  }
  return g;
}

/*! \brief One multiplicative factor of an arity-3 decomposition. */
struct lsm_factor
{
  uint64_t mask = 0;
  rational weight = rational( 1 );
  bool complemented = false;
  fn_table table = tables::nullary( rational( 1 ) ); /*!< arity-3, as it
      multiplies into the input */
  chi_gadget gadget;
};

/*! \brief Product decomposition of a permissive supermodular table. */
struct lsm_decomposition
{
  bool complement_route = false;
  std::vector<lsm_factor> factors;
};

/*! \brief Splits a permissive supermodular arity-3 table into
 * threshold factors.
 *
 * The multiplicative lattice coefficients of such a table are at least
 * 1 on every mask with two bits; when the top coefficient is also at
 * least 1, each non-unit coefficient becomes one threshold factor
 * directly.  Otherwise the argument-flipped table is decomposed and
 * every factor is flipped back.  The pointwise product of the factor
 * tables equals the input exactly.
 */
inline lsm_decomposition lsm3_decompose( const fn_table& f )
{
  if ( f.arity() != 3 )
  {
    throw std::invalid_argument( "lsm3_decompose: table must have arity 3" );
  }
  if ( !f.is_permissive() )
  {
    throw std::domain_error( "lsm3_decompose: table must be strictly positive" );
  }
  if ( !is_lsm( f ).holds )
  {
    throw std::domain_error( "lsm3_decompose: table is not supermodular" );
  }
  lsm_decomposition out;
  auto m = mobius( f );
  if ( m.coeffs[7] < rational( 1 ) )
  {
    out.complement_route = true;
    m = mobius( bar( f ) );
  }
  for ( uint64_t y = 0; y < 8; ++y )
  {
    if ( m.coeffs[y].is_one() )
    {
      continue;
    }
    if ( std::popcount( y ) > 1 && m.coeffs[y] < rational( 1 ) )
    {
      throw std::logic_error( "lsm3_decompose: joint coefficient below one" );
    }
    lsm_factor fac;
    fac.mask = y;
    fac.weight = m.coeffs[y];
    fac.complemented = out.complement_route;
    fac.gadget = chi_builder( 3, y, m.coeffs[y] );
    fac.table = out.complement_route ? bar( fac.gadget.table ) : fac.gadget.table;
    out.factors.push_back( std::move( fac ) );
  }
  return out;
}

/* -------------------------------------------------------------------------
 * positivity lifting
 * ---------------------------------------------------------------------- */

/*! \brief Lifts a supermodular table to a strictly positive one with
 * the same values on its support.
 *
 * Returns G with `F = R_F * G` pointwise, where R_F is the support
 * indicator: G spreads each support value upward at the geometric rate
 * given by the table's spread (smallest nonzero over largest value),
 * after raising a vanishing all-zeros point to 1.  The identically
 * zero table lifts to the all-ones function.
 */
inline fn_table topkis_lift( const fn_table& f )
{
  if ( !is_lsm( f ).holds )
  {
    throw std::invalid_argument( "topkis_lift: table is not supermodular" );
  }
  const uint32_t n = f.arity();
  if ( f.is_zero() )
  {
    return tables::all_ones( n );
  }
  std::vector<rational> fp( f.values() );
  if ( fp[0].is_zero() )
  {
    fp[0] = rational( 1 );
  }
  rational lo( 0 ), hi( 0 );
  for ( const auto& v : fp )
  {
    if ( v.is_positive() )
    {
      if ( lo.is_zero() || v < lo )
      {
        lo = v;
      }
      hi = std::max( hi, v );
    }
  }
  const rational mu = lo / hi;
  std::vector<rational> mu_pow( n + 1, rational( 1 ) );
  for ( uint32_t i = 1; i <= n; ++i )
  {
    mu_pow[i] = mu_pow[i - 1] * mu;
  }
  std::vector<rational> g( fp.size(), rational( 0 ) );
  for ( uint64_t x = 0; x < fp.size(); ++x )
  {
    rational best( 0 );
    uint64_t y = x;
    while ( true )
    {
      if ( !fp[y].is_zero() )
      {
        best = std::max( best,
                         fp[y] * mu_pow[std::popcount( x ) - std::popcount( y )] );
      }
      if ( y == 0 )
      {
        break;
      }
      y = ( y - 1 ) & x;
    }
    g[x] = best;
  }
  return fn_table( n, std::move( g ) );
}

/* -------------------------------------------------------------------------
 * non-supermodular extraction
 * ---------------------------------------------------------------------- */

/*! \brief A strictly positive binary defect dug out of a
 * non-supermodular table. */
struct nonlsm_extraction
{
  uint64_t k;          /*!< smoothing exponent at which the defect survives */
  fn_table h_k;        /*!< the smoothed, strictly positive table */
  two_pinning witness; /*!< pinning whose binary table has negative
      determinant */
};

namespace detail
{

/*! \brief Smooths F through the soft-equality kernel raised to k. */
inline fn_table smooth_with_kernel( const fn_table& f, uint64_t k )
{
  const uint32_t n = f.arity();
  const bigint diag = bigint( 1 ) << k; /* kernel diagonal 2^k, off-diagonal 1 */
  std::vector<bigint> agree_pow( n + 1 );
  agree_pow[0] = 1;
  for ( uint32_t i = 1; i <= n; ++i )
  {
    agree_pow[i] = agree_pow[i - 1] * diag;
  }
  std::vector<rational> out( f.size(), rational( 0 ) );
  for ( uint64_t x = 0; x < f.size(); ++x )
  {
    rational sum( 0 );
    for ( uint64_t y = 0; y < f.size(); ++y )
    {
      if ( f.at( y ).is_zero() )
      {
        continue;
      }
      const auto agree = n - std::popcount( x ^ y );
      sum += f.at( y ) * rational( agree_pow[agree] );
    }
    out[x] = sum;
  }
  return fn_table( n, std::move( out ) );
}

} // namespace detail

/*! \brief Finds the least smoothing exponent whose smoothed table
 * still violates supermodularity, along with the violating 2-pinning.
 *
 * Smoothing convolves the table with the k-th power of the
 * soft-equality kernel, which makes every value strictly positive; for
 * large k the defect of the original table survives smoothing.  The
 * search doubles k and then binary-searches the least failing value.
 * Throws `std::invalid_argument` when the input is supermodular.
 */
inline nonlsm_extraction extract_nonlsm_binary( const fn_table& f )
{
  if ( is_lsm( f ).holds )
  {
    throw std::invalid_argument( "extract_nonlsm_binary: table is supermodular" );
  }
  const auto attempt = [&]( uint64_t k ) -> std::optional<nonlsm_extraction> {
    auto hk = detail::smooth_with_kernel( f, k );
    auto verdict = is_lsm_topkis( hk );
    if ( verdict.holds )
    {
      return std::nullopt;
    }
    return nonlsm_extraction{ k, std::move( hk ), std::move( *verdict.witness ) };
  };
  uint64_t hi = 1;
  auto found = attempt( hi );
  while ( !found )
  {
    hi *= 2;
    if ( hi > ( uint64_t( 1 ) << 24 ) )
    {
      throw std::logic_error( "extract_nonlsm_binary: defect did not surface" );
    }
    found = attempt( hi );
  }
  uint64_t lo = hi / 2; /* smoothing at lo (if any) stayed supermodular */
  while ( lo + 1 < hi )
  {
    const uint64_t mid = lo + ( hi - lo ) / 2;
    if ( auto r = attempt( mid ) )
    {
      found = std::move( r );
      hi = mid;
    }
    else
    {
      lo = mid;
    }
  }
  return std::move( *found );
}

/* -------------------------------------------------------------------------
 * parity normalization
 * ---------------------------------------------------------------------- */

/*! \brief Normalization report for a table supported on even parity. */
struct oplus3_report
{
  fn_table symmetrized = tables::oplus3(); /*!< product over all six argument
      orders */
  rational mu0 = rational( 1 ); /*!< symmetrized value at the all-zeros point */
  rational mu2 = rational( 1 ); /*!< symmetrized value at a weight-two point */
  radical_value u0; /*!< normalizing weight at 0 */
  radical_value u1; /*!< normalizing weight at 1 */
  std::optional<fn_table> normalized; /*!< the parity indicator, when the
      weights are rational */
};

/*! \brief Symmetrizes a table supported on even parity and derives the
 * unary weight that rescales it to the plain parity indicator.
 *
 * The weights are sixth and square roots of symmetrized values and are
 * reported symbolically; when both resolve to rationals the exactly
 * normalized table is also returned and equals the parity indicator.
 * Throws `std::invalid_argument` when the support is not the
 * even-parity relation.
 */
inline oplus3_report oplus3_normalize( const fn_table& f )
{
  if ( f.arity() != 3 ||
       underlying_relation( f ) != std::vector<uint64_t>{ 0, 3, 5, 6 } )
  {
    throw std::invalid_argument(
        "oplus3_normalize: support must be the even-parity triples" );
  }
  static constexpr std::array<std::array<uint32_t, 3>, 6> perms = { {
      { 0, 1, 2 }, { 0, 2, 1 }, { 1, 0, 2 }, { 1, 2, 0 }, { 2, 0, 1 },
      { 2, 1, 0 } } };
  std::vector<rational> sym( 8, rational( 1 ) );
  for ( uint64_t m = 0; m < 8; ++m )
  {
    for ( const auto& perm : perms )
    {
      uint64_t pm = 0;
      for ( uint32_t i = 0; i < 3; ++i )
      {
        if ( test_bit( m, perm[i] ) )
        {
          pm |= uint64_t( 1 ) << i;
        }
      }
      sym[m] *= f.at( pm );
    }
  }
  oplus3_report r;
  r.symmetrized = fn_table( 3, std::move( sym ) );
  r.mu0 = r.symmetrized.at( 0 );
  r.mu2 = r.symmetrized.at( 6 ); /* the point (0, 1, 1) */
  r.u0 = make_radical( r.mu0, -1, 3 );
  r.u1 = make_radical( r.mu0 / r.mu2.pow( 3 ), 1, 6 );
  if ( r.u0.is_exact() && r.u1.is_exact() )
  {
    std::vector<rational> norm( 8 );
    for ( uint64_t m = 0; m < 8; ++m )
    {
      rational w( 1 );
      for ( uint32_t i = 0; i < 3; ++i )
      {
        w *= test_bit( m, i ) ? *r.u1.exact : *r.u0.exact;
      }
      norm[m] = w * r.symmetrized.at( m );
    }
    r.normalized = fn_table( 3, std::move( norm ) );
    if ( *r.normalized != tables::oplus3() )
    {
      throw std::logic_error( "oplus3_normalize: normalization failed" );
    }
  }
  return r;
}

/* -------------------------------------------------------------------------
 * Ising cycle reduction
 * ---------------------------------------------------------------------- */

/*! \brief A GF(2) matrix with bitmask rows (column j sits in bit j). */
struct gf2_matrix
{
  uint32_t cols = 0;
  std::vector<uint64_t> rows;
};

/*! \brief Result of rewriting an Ising sum as a weighted parity CSP. */
struct ising_instance
{
  csp_instance instance;
  fn_env symbols;
  rational scale = rational( 1 ); /*!< Ising value = scale * instance value */
  rational w = rational( 0 );     /*!< per-column weight (y-1)/(y+1) */
};

/*! \brief Exact Ising partition value by direct enumeration. */
inline rational ising_value( const gf2_matrix& m, const rational& y )
{
  rational z( 0 );
  const auto n = m.rows.size();
  for ( uint64_t sigma = 0; sigma < ( uint64_t( 1 ) << n ); ++sigma )
  {
    rational term( 1 );
    for ( uint32_t e = 0; e < m.cols; ++e )
    {
      int delta = 0;
      for ( std::size_t i = 0; i < n; ++i )
      {
        if ( test_bit( m.rows[i], e ) && test_bit( sigma, i ) )
        {
          delta ^= 1;
        }
      }
      if ( !delta )
      {
        term *= y;
      }
    }
    z += term;
  }
  return z;
}

/*! \brief Rewrites the Ising sum of a binary matroid as a one-weight
 * parity instance.
 *
 * Each column becomes a variable weighted by `(1, w)`; each row
 * demands even parity of its columns.  Width-one parities pin their
 * column to 0 (the weight contributes 1 and drops out), width-two
 * parities identify two columns (their weights accumulate on one
 * representative), and wider parities are chained through three-way
 * parity atoms over fresh carry variables.  The exact identity
 * `ising_value = scale * Z(instance)` holds with
 * `scale = ((y+1)/2)^cols * 2^rows`.
 */
inline ising_instance ising_reduction( const gf2_matrix& m, const rational& y )
{
  if ( m.cols == 0 || m.cols > 48 || m.rows.empty() )
  {
    throw std::invalid_argument( "ising_reduction: matrix must be nonempty" );
  }
  if ( !( rational( 1 ) < y ) )
  {
    throw std::invalid_argument( "ising_reduction: weight must exceed 1" );
  }
  for ( auto row : m.rows )
  {
    if ( ( row >> m.cols ) != 0 )
    {
      throw std::invalid_argument(
          "ising_reduction: row uses columns out of range" );
    }
  }
  ising_instance out;
  out.w = ( y - rational( 1 ) ) / ( y + rational( 1 ) );
  out.scale = ( ( y + rational( 1 ) ) / rational( 2 ) ).pow( m.cols ) *
              rational( bigint( 1 ) << m.rows.size() );
  out.symbols.emplace( "XOR3", tables::oplus3() );
  out.symbols.emplace( "UW", tables::unary( rational( 1 ), out.w ) );

  /* union-find over columns, with a pinned flag on roots */
  std::vector<uint32_t> parent( m.cols );
  std::vector<char> pinned( m.cols, 0 );
  for ( uint32_t j = 0; j < m.cols; ++j )
  {
    parent[j] = j;
  }
  const auto root = [&]( uint32_t j ) {
    while ( parent[j] != j )
    {
      parent[j] = parent[parent[j]];
      j = parent[j];
    }
    return j;
  };
  const auto resolve = [&]( uint64_t row ) {
    uint64_t live = 0;
    for ( uint32_t j = 0; j < m.cols; ++j )
    {
      if ( test_bit( row, j ) )
      {
        const auto r = root( j );
        if ( !pinned[r] )
        {
          live ^= uint64_t( 1 ) << r; /* even multiplicity cancels */
        }
      }
    }
    return live;
  };

  std::vector<uint64_t> pending = m.rows;
  bool changed = true;
  while ( changed )
  {
    changed = false;
    std::vector<uint64_t> next;
    for ( auto row : pending )
    {
      const auto live = resolve( row );
      const auto width = std::popcount( live );
      if ( width == 0 )
      {
        changed = true;
      }
      else if ( width == 1 )
      {
        pinned[std::countr_zero( live )] = 1;
        changed = true;
      }
      else if ( width == 2 )
      {
        const auto first = static_cast<uint32_t>( std::countr_zero( live ) );
        const auto second =
            static_cast<uint32_t>( std::countr_zero( live & ( live - 1 ) ) );
        parent[second] = first;
        changed = true;
      }
      else
      {
        next.push_back( row );
      }
    }
    pending = std::move( next );
  }

  /* one variable per live representative, carrying the weight atoms of
   * its whole class */
  std::map<uint32_t, uint32_t> var_of;
  for ( uint32_t j = 0; j < m.cols; ++j )
  {
    const auto r = root( j );
    if ( pinned[r] )
    {
      continue;
    }
    if ( !var_of.count( r ) )
    {
      var_of.emplace( r, static_cast<uint32_t>( out.instance.vars.size() ) );
      out.instance.vars.push_back( "e" + std::to_string( r + 1 ) );
    }
    out.instance.atoms.push_back( atom{ "UW", { var_of.at( r ) } } );
  }

  uint32_t carries = 0;
  for ( auto row : pending )
  {
    const auto live = resolve( row );
    std::vector<uint32_t> members;
    for ( uint32_t j = 0; j < m.cols; ++j )
    {
      if ( test_bit( live, j ) )
      {
        members.push_back( var_of.at( j ) );
      }
    }
    if ( members.size() < 3 )
    {
      throw std::logic_error( "ising_reduction: narrow parity escaped elimination" );
    }
    uint32_t acc = members[0];
    for ( std::size_t i = 1; i + 2 < members.size(); ++i )
    {
      const auto carry = static_cast<uint32_t>( out.instance.vars.size() );
      out.instance.vars.push_back( "a" + std::to_string( ++carries ) );
      out.instance.atoms.push_back( atom{ "XOR3", { acc, members[i], carry } } );
      acc = carry;
    }
    out.instance.atoms.push_back(
        atom{ "XOR3",
              { acc, members[members.size() - 2], members[members.size() - 1] } } );
  }
  return out;
}

/* -------------------------------------------------------------------------
 * dyadic weight synthesis
 * ---------------------------------------------------------------------- */

/*! \brief Which two-symbol basis a unary target is synthesized over. */
enum class unary_route
{
  imp_route, /*!< implication and the constant one half */
  or_route,  /*!< disjunction and one half; needs an increasing target */
  nand_route /*!< NAND and one half; needs a decreasing target */
};

/*! \brief A formula evaluating exactly to a dyadic unary target. */
struct unary_synthesis
{
  pps_formula formula;
  fn_env symbols;
};

namespace detail
{

/*! \brief Exponent t with denominator 2^t, if the value is dyadic. */
inline std::optional<uint32_t> dyadic_bits( const rational& v )
{
  const auto& den = v.denominator();
  if ( den == 1 )
  {
    return 0;
  }
  const auto low = boost::multiprecision::lsb( den );
  if ( low != boost::multiprecision::msb( den ) )
  {
    return std::nullopt;
  }
  return static_cast<uint32_t>( low );
}

/*! \brief Layered instance whose assignment count is exactly v.
 *
 * One block of i unconstrained variables per set bit i >= 1, each
 * layered above everything before it, followed by one single-variable
 * layer per remaining unit.  `links` receives one (lower, upper)
 * variable pair per layering edge; the link function is chosen by the
 * caller and may be any of the three bases.
 */
inline csp_instance value_instance( const bigint& v, const std::string& prefix,
                                    std::vector<std::pair<uint32_t, uint32_t>>& links )
{
  csp_instance inst;
  const auto fresh = [&]() {
    inst.vars.push_back( prefix + std::to_string( inst.vars.size() + 1 ) );
    return static_cast<uint32_t>( inst.vars.size() - 1 );
  };
  const auto layer_block = [&]( const std::vector<uint32_t>& block,
                                uint32_t prev_size ) {
    for ( uint32_t below = 0; below < prev_size; ++below )
    {
      for ( auto above : block )
      {
        links.emplace_back( below, above );
      }
    }
  };
  uint64_t ones = 0;
  const unsigned bits = v == 0 ? 0 : boost::multiprecision::msb( v ) + 1;
  for ( unsigned i = 0; i < bits; ++i )
  {
    if ( !boost::multiprecision::bit_test( v, i ) )
    {
      continue;
    }
    ++ones;
    if ( i == 0 )
    {
      continue; /* absorbed into the trailing single-variable layers */
    }
    std::vector<uint32_t> block;
    const auto prev = static_cast<uint32_t>( inst.vars.size() );
    for ( unsigned j = 0; j < i; ++j )
    {
      block.push_back( fresh() );
    }
    layer_block( block, prev );
  }
  for ( uint64_t t = 1; t < ones; ++t )
  {
    const auto prev = static_cast<uint32_t>( inst.vars.size() );
    layer_block( { fresh() }, prev );
  }
  return inst;
}

/*! \brief Shared body of the increasing-target synthesis.  The public
 * route demands a strictly increasing target; internal reuse also
 * accepts equal values. */
inline unary_synthesis synth_up( const rational& g0, const rational& g1,
                                 const std::string& link, uint32_t precision_bits,
                                 bool strict )
{
  if ( !g0.is_positive() )
  {
    throw std::invalid_argument( "synth_unary: the value at 0 must be nonzero" );
  }
  if ( strict ? !( g0 < g1 ) : g1 < g0 )
  {
    throw std::invalid_argument(
        "synth_unary: this route needs an increasing target" );
  }
  const auto t0 = dyadic_bits( g0 ), td = dyadic_bits( g1 - g0 );
  if ( !t0 || !td )
  {
    throw std::invalid_argument( "synth_unary: target values must be dyadic" );
  }
  const uint32_t frac = std::max( *t0, *td );
  if ( frac > precision_bits )
  {
    throw std::invalid_argument( "synth_unary: target needs more bits than allowed" );
  }
  const bigint scale = bigint( 1 ) << frac;
  const bigint v0 = ( g0 * rational( scale ) ).numerator();
  const bigint vj = ( ( g1 - g0 ) * rational( scale ) ).numerator() + 1;

  std::vector<std::pair<uint32_t, uint32_t>> links_i, links_j;
  const auto inst_i = value_instance( v0, "i", links_i );
  const auto inst_j = value_instance( vj, "j", links_j );

  unary_synthesis out;
  std::vector<std::string> bound = inst_i.vars;
  bound.insert( bound.end(), inst_j.vars.begin(), inst_j.vars.end() );
  out.formula = make_formula( { "c" }, bound, {} );
  const uint32_t oi = 1; /* variable offset of the lower block */
  const auto oj = static_cast<uint32_t>( 1 + inst_i.vars.size() );
  for ( auto [x, z] : links_i )
  {
    out.formula.atoms.push_back( atom{ link, { oi + x, oi + z } } );
  }
  for ( auto [x, z] : links_j )
  {
    out.formula.atoms.push_back( atom{ link, { oj + x, oj + z } } );
  }
  /* layer the whole upper block above the whole lower block */
  for ( uint32_t x = 0; x < inst_i.vars.size(); ++x )
  {
    for ( uint32_t z = 0; z < inst_j.vars.size(); ++z )
    {
      out.formula.atoms.push_back( atom{ link, { oi + x, oj + z } } );
    }
  }
  for ( uint32_t z = 0; z < inst_j.vars.size(); ++z )
  {
    out.formula.atoms.push_back( atom{ link, { oj + z, 0 } } );
  }
  for ( uint32_t h = 0; h < frac; ++h )
  {
    out.formula.atoms.push_back( atom{ "half$", {} } );
  }
  out.symbols.emplace( "half$", tables::half() );
  return out;
}

} // namespace detail

/*! \brief Synthesizes a dyadic unary target over a two-symbol basis.
 *
 * Both target values must be dyadic with at most `precision_bits`
 * fractional bits; the emitted formula evaluates to the target
 * exactly.  The implication route accepts any positive pair; the
 * disjunction route needs a strictly increasing positive target and
 * the NAND route a strictly decreasing one.  Violated preconditions
 * are reported by name.
 */
inline unary_synthesis synth_unary( const fn_table& g, unary_route route,
                                    uint32_t precision_bits )
{
  if ( g.arity() != 1 )
  {
    throw std::invalid_argument( "synth_unary: target must be unary" );
  }
  const rational g0 = g.at( 0 ), g1 = g.at( 1 );

  if ( route == unary_route::or_route )
  {
    auto out = detail::synth_up( g0, g1, "OR", precision_bits, true );
    out.symbols.emplace( "OR", tables::or_table() );
    return out;
  }
  if ( route == unary_route::nand_route )
  {
    /* decreasing targets mirror the disjunction route under bit flip */
    auto out = detail::synth_up( g1, g0, "NAND", precision_bits, true );
    out.symbols.emplace( "NAND", tables::nand_table() );
    return out;
  }

  if ( !g0.is_positive() || !g1.is_positive() )
  {
    throw std::invalid_argument( "synth_unary: both values must be nonzero" );
  }
  const auto t0 = detail::dyadic_bits( g0 ), t1 = detail::dyadic_bits( g1 );
  if ( !t0 || !t1 )
  {
    throw std::invalid_argument( "synth_unary: target values must be dyadic" );
  }
  const uint32_t frac = std::max( *t0, *t1 );
  if ( frac > precision_bits )
  {
    throw std::invalid_argument( "synth_unary: target needs more bits than allowed" );
  }
  const bigint scale = bigint( 1 ) << frac;
  const bigint v0 = ( g0 * rational( scale ) ).numerator();
  const bigint v1 = ( g1 * rational( scale ) ).numerator();

  std::vector<std::pair<uint32_t, uint32_t>> links_i, links_j;
  const auto inst_i = detail::value_instance( v0, "i", links_i );
  const auto inst_j = detail::value_instance( v1, "j", links_j );

  unary_synthesis out;
  std::vector<std::string> bound = inst_i.vars;
  bound.insert( bound.end(), inst_j.vars.begin(), inst_j.vars.end() );
  out.formula = make_formula( { "c" }, bound, {} );
  const uint32_t oi = 1;
  const auto oj = static_cast<uint32_t>( 1 + inst_i.vars.size() );
  for ( auto [x, z] : links_i )
  {
    out.formula.atoms.push_back( atom{ "IMP", { oi + x, oi + z } } );
  }
  for ( auto [x, z] : links_j )
  {
    out.formula.atoms.push_back( atom{ "IMP", { oj + x, oj + z } } );
  }
  for ( uint32_t x = 0; x < inst_i.vars.size(); ++x )
  {
    out.formula.atoms.push_back( atom{ "IMP", { 0, oi + x } } );
  }
  for ( uint32_t z = 0; z < inst_j.vars.size(); ++z )
  {
    out.formula.atoms.push_back( atom{ "IMP", { oj + z, 0 } } );
  }
  for ( uint32_t h = 0; h < frac; ++h )
  {
    out.formula.atoms.push_back( atom{ "half$", {} } );
  }
  out.symbols.emplace( "half$", tables::half() );
  out.symbols.emplace( "IMP", tables::imp() );
  return out;
}

/* -------------------------------------------------------------------------
 * monotone shifting
 * ---------------------------------------------------------------------- */

/*! \brief Decomposition of a unary weight against a reference weight. */
struct shift_result
{
  uint64_t k = 0;   /*!< copies of the reference weight split off */
  fn_table h_prime = tables::unary( rational( 1 ), rational( 1 ) ); /*!< exact
      residual H / G^k */
  gadget_plan plan; /*!< H as G^k times a synthesized residual */
};

/*! \brief Splits a unary weight into reference-weight copies times a
 * monotone residual and synthesizes the residual.
 *
 * For the disjunction route the reference must not vanish at 1, and
 * when the target decreases it must be strictly decreasing itself; the
 * smallest k making `H / G^k` increasing is chosen (k = 0 when H is
 * already increasing).  A dyadic positive residual gives an exact
 * plan; otherwise the residual is truncated to enough bits that the
 * plan's recorded error bound drops below `eps`.  The NAND route
 * mirrors all of this for decreasing residuals.
 */
inline shift_result shift_monotone( const fn_table& h, const fn_table& g,
                                    unary_route route, const rational& eps )
{
  if ( h.arity() != 1 || g.arity() != 1 )
  {
    throw std::invalid_argument( "shift_monotone: both tables must be unary" );
  }
  if ( route == unary_route::imp_route )
  {
    throw std::invalid_argument(
        "shift_monotone: choose the disjunction or NAND route" );
  }
  if ( !eps.is_positive() )
  {
    throw std::invalid_argument( "shift_monotone: accuracy must be positive" );
  }
  const bool increasing = route == unary_route::or_route;
  /* mirror everything so the residual must become increasing */
  const rational h_lo = increasing ? h.at( 0 ) : h.at( 1 );
  const rational h_hi = increasing ? h.at( 1 ) : h.at( 0 );
  const rational g_lo = increasing ? g.at( 0 ) : g.at( 1 );
  const rational g_hi = increasing ? g.at( 1 ) : g.at( 0 );
  if ( !g_hi.is_positive() )
  {
    throw std::invalid_argument(
        "shift_monotone: the reference weight vanishes on the shifted side" );
  }

  uint64_t k = 0;
  if ( h_lo > h_hi )
  {
    if ( !( g_lo > g_hi ) )
    {
      throw std::invalid_argument(
          "shift_monotone: the reference weight cannot outgrow the target" );
    }
    if ( h_hi.is_zero() )
    {
      throw std::invalid_argument(
          "shift_monotone: the target vanishes on the shifted side" );
    }
    /* least k with (g_lo / g_hi)^k > h_lo / h_hi */
    rational lhs( 1 ), rhs( 1 );
    while ( !( lhs * h_hi > rhs * h_lo ) )
    {
      lhs *= g_lo;
      rhs *= g_hi;
      ++k;
    }
  }

  shift_result out;
  out.k = k;
  const rational r0 = k ? h.at( 0 ) / g.at( 0 ).pow( int64_t( k ) ) : h.at( 0 );
  const rational r1 = k ? h.at( 1 ) / g.at( 1 ).pow( int64_t( k ) ) : h.at( 1 );
  out.h_prime = tables::unary( r0, r1 );

  const std::string link = increasing ? "OR" : "NAND";
  const rational res_lo = increasing ? r0 : r1;
  const rational res_hi = increasing ? r1 : r0;
  const rational g_pow_max =
      std::max( g.at( 0 ).pow( int64_t( k ) ), g.at( 1 ).pow( int64_t( k ) ) );

  const auto assemble = [&]( const unary_synthesis& syn, bool exact,
                             const std::optional<rational>& bound ) {
    gadget_plan plan;
    plan.base = syn.formula;
    for ( uint64_t i = 0; i < k; ++i )
    {
      plan.base.atoms.push_back( atom{ "G", { 0 } } );
    }
    plan.symbols = syn.symbols;
    plan.symbols.emplace( "G", g );
    plan.symbols.emplace( link,
                          increasing ? tables::or_table() : tables::nand_table() );
    plan.target = h;
    plan.exact = exact;
    plan.error_bound = bound;
    plan.note = exact ? "reference powers times an exact dyadic residual"
                      : "reference powers times a truncated residual";
    return plan;
  };

  const auto b_lo = detail::dyadic_bits( res_lo );
  const auto b_hi = detail::dyadic_bits( res_hi );
  if ( b_lo && b_hi && res_lo.is_positive() && res_hi.is_positive() &&
       !( res_hi < res_lo ) )
  {
    const auto syn = detail::synth_up( res_lo, res_hi, link,
                                       std::max( *b_lo, *b_hi ), false );
    out.plan = assemble( syn, true, std::nullopt );
    return out;
  }

  /* truncate the residual to t bits; the plan error is bounded by
   * max(G)^k * 2^-t */
  uint32_t t = 1;
  while ( true )
  {
    const rational unit( bigint( 1 ), bigint( 1 ) << t );
    const auto truncate = [&]( const rational& v ) {
      const rational steps = v / unit;
      const rational floored =
          rational( steps.numerator() / steps.denominator() ) * unit;
      return floored.is_positive() ? floored : unit;
    };
    const rational q_lo = truncate( res_lo );
    const rational q_hi = truncate( res_hi );
    const rational bound = g_pow_max * unit;
    if ( !( q_hi < q_lo ) && bound < eps )
    {
      const auto syn = detail::synth_up( q_lo, q_hi, link, t, false );
      out.plan = assemble( syn, false, bound );
      return out;
    }
    if ( ++t > 4096 )
    {
      throw std::logic_error( "shift_monotone: truncation failed to converge" );
    }
  }
}

/* -------------------------------------------------------------------------
 * instance rewriting with an accuracy budget
 * ---------------------------------------------------------------------- */

/*! \brief An instance with one symbol replaced by a plan expansion. */
struct reduced_instance
{
  csp_instance instance;
  fn_env symbols;
  rational eps_prime = rational( 0 ); /*!< accuracy demanded of each
      replacement */
  uint64_t k = 0; /*!< repetition count the plan was instantiated at */
};

/*! \brief Replaces every use of a symbol by an instantiated plan.
 *
 * The replacement accuracy is derived from the requested relative
 * accuracy and the instance's value ranges: with `mu` bounds taken
 * from the replaced symbol and `nu` bounds over the values of the
 * remaining symbols, each replacement is performed at
 * `eps' = (eps/4) * C / (A + B)` where
 * `A = (4m/mu_min) 2^n mu_max^m nu_max^m'`,
 * `B = 2^n (mu_max+1)^(m-1) nu_max^m'` and
 * `C = mu_min^m nu_min^m'`; this keeps the overall value within
 * relative error eps.  The plan is instantiated at the smallest
 * repetition count strictly beating `eps'`.  Instances not using the
 * symbol are returned unchanged; identically zero constituents are
 * rejected.
 */
inline reduced_instance reduce_instance( const csp_instance& inst, const fn_env& env,
                                         const std::string& f_name,
                                         const gadget_plan& plan,
                                         const rational& eps )
{
  if ( !eps.is_positive() || !( eps < rational( 1 ) ) )
  {
    throw std::invalid_argument( "reduce_instance: accuracy must be in (0, 1)" );
  }
  detail::validate_parts( inst.vars, 0, inst.atoms, env );
  const auto it = env.find( f_name );
  if ( it == env.end() )
  {
    throw std::invalid_argument( "reduce_instance: unknown symbol '" + f_name +
                                 "'" );
  }
  const fn_table& f = it->second;
  if ( plan.target != f )
  {
    throw std::invalid_argument(
        "reduce_instance: plan target differs from the replaced symbol" );
  }

  uint64_t m = 0, m_other = 0;
  for ( const auto& a : inst.atoms )
  {
    ( a.fn == f_name ? m : m_other )++;
  }
  if ( m == 0 )
  {
    return reduced_instance{ inst, env, eps, 0 };
  }
  if ( f.is_zero() )
  {
    throw std::domain_error( "reduce_instance: replaced symbol is identically zero" );
  }

  rational mu_max( 0 ), mu_min( 1 );
  for ( uint64_t i = 0; i < f.size(); ++i )
  {
    const auto& v = f.at( i );
    mu_max = std::max( mu_max, v );
    if ( v.is_positive() )
    {
      mu_min = std::min( mu_min, v );
    }
  }
  rational nu_max( 1 ), nu_min( 1 );
  for ( const auto& a : inst.atoms )
  {
    if ( a.fn == f_name )
    {
      continue;
    }
    const auto& tbl = env.at( a.fn );
    if ( tbl.is_zero() )
    {
      throw std::domain_error( "reduce_instance: constituent '" + a.fn +
                               "' is identically zero" );
    }
    for ( uint64_t i = 0; i < tbl.size(); ++i )
    {
      const auto& v = tbl.at( i );
      if ( v.is_positive() )
      {
        nu_max = std::max( nu_max, v );
        nu_min = std::min( nu_min, v );
      }
    }
  }

  const rational two_n( bigint( 1 ) << inst.vars.size() );
  const rational a_const = rational( bigint( 4 * m ) ) / mu_min * two_n *
                           mu_max.pow( int64_t( m ) ) *
                           nu_max.pow( int64_t( m_other ) );
  const rational b_const = two_n *
                           ( mu_max + rational( 1 ) ).pow( int64_t( m ) - 1 ) *
                           nu_max.pow( int64_t( m_other ) );
  const rational c_const =
      mu_min.pow( int64_t( m ) ) * nu_min.pow( int64_t( m_other ) );
  reduced_instance out;
  out.eps_prime = eps / rational( 4 ) * c_const / ( a_const + b_const );

  if ( !plan.exact )
  {
    if ( !plan.pow_atoms.empty() )
    {
      out.k = schedule_k( plan, out.eps_prime, /* strict = */ true );
    }
    else if ( !plan.error_bound || !( *plan.error_bound < out.eps_prime ) )
    {
      throw std::domain_error(
          "reduce_instance: plan accuracy is insufficient for this instance" );
    }
  }
  const auto psi = instantiate( plan, out.k );

  /* merge the plan's symbols: identical tables share a name, clashing
   * ones are prefixed */
  std::set<std::string> used;
  for ( const auto& pa : psi.atoms )
  {
    used.insert( pa.fn );
  }
  out.symbols = env;
  out.symbols.erase( f_name );
  std::map<std::string, std::string> renamed;
  for ( const auto& name : used )
  {
    const auto sym = plan.symbols.find( name );
    if ( sym == plan.symbols.end() )
    {
      throw std::invalid_argument( "reduce_instance: plan uses unknown symbol '" +
                                   name + "'" );
    }
    const auto have = out.symbols.find( name );
    if ( have == out.symbols.end() )
    {
      out.symbols.emplace( name, sym->second );
      renamed.emplace( name, name );
    }
    else if ( have->second == sym->second )
    {
      renamed.emplace( name, name );
    }
    else
    {
      const auto fresh = f_name + "$" + name;
      out.symbols.emplace( fresh, sym->second );
      renamed.emplace( name, fresh );
    }
  }

  out.instance.vars = inst.vars;
  uint64_t splice = 0;
  for ( const auto& a : inst.atoms )
  {
    if ( a.fn != f_name )
    {
      out.instance.atoms.push_back( a );
      continue;
    }
    const auto offset = static_cast<uint32_t>( out.instance.vars.size() );
    for ( uint32_t b = psi.free_count; b < psi.vars.size(); ++b )
    {
      out.instance.vars.push_back( f_name + "$" + std::to_string( splice ) + "$" +
                                   psi.vars[b] );
    }
    for ( const auto& pa : psi.atoms )
    {
      atom na;
      na.fn = renamed.at( pa.fn );
      for ( auto v : pa.args )
      {
        na.args.push_back( v < psi.free_count ? a.args[v]
                                              : offset + ( v - psi.free_count ) );
      }
      out.instance.atoms.push_back( std::move( na ) );
    }
    ++splice;
  }
  detail::validate_parts( out.instance.vars, 0, out.instance.atoms, out.symbols );
  return out;
}

} // namespace ccsp
