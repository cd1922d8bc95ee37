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
  \file formula.hpp
  \brief Summation formulas over function atoms and their exact evaluation

  A formula `psi = sum_{bound vars} prod_j phi_j` over atoms
  `phi_j = G(v_1, ..., v_a)` denotes a function of its free variables.
  Evaluation is exact and proceeds by greedy min-degree variable
  elimination: equality atoms are first removed by substitution, then
  bound variables are summed out one at a time, merging only the factors
  that mention the variable.  The result is bit-identical to brute-force
  enumeration and independent of the elimination order.

  Instances (formulas with no bound variables whose free variables are
  summed at evaluation time) support disjoint and ordinal sums, and a
  sup-norm tolerance budget is provided for replacing atoms by
  approximations.
*/

#pragma once

#include "table.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ccsp
{

/*! \brief Symbol environment mapping names to tables. */
using fn_env = std::map<std::string, fn_table>;

/*! \brief One atomic factor: a named function applied to variables.
 *
 * Arguments index into the owning formula's variable list; repeats are
 * allowed.
 */
struct atom
{
  std::string fn;
  std::vector<uint32_t> args;

  friend bool operator==( const atom& a, const atom& b )
  {
    return a.fn == b.fn && a.args == b.args;
  }
};

/*! \brief A summation formula `sum_{bound} prod_j phi_j`.
 *
 * `vars` lists the free variables first (`free_count` of them) followed
 * by the bound variables; the represented function has arity
 * `free_count` with variable `k` in bit `k`.
 */
struct pps_formula
{
  std::vector<std::string> vars;
  uint32_t free_count = 0;
  std::vector<atom> atoms;

  uint32_t bound_count() const
  {
    return static_cast<uint32_t>( vars.size() ) - free_count;
  }
};

/*! \brief An instance: every variable is summed at evaluation time. */
struct csp_instance
{
  std::vector<std::string> vars;
  std::vector<atom> atoms;
};

/*! \brief Builds a formula from variable names.
 *
 * Atoms are given as (function name, argument names); argument names
 * must appear among the declared variables.
 */
inline pps_formula make_formula(
    std::vector<std::string> free_vars, std::vector<std::string> bound_vars,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& named_atoms )
{
  pps_formula psi;
  psi.free_count = static_cast<uint32_t>( free_vars.size() );
  psi.vars = std::move( free_vars );
  psi.vars.insert( psi.vars.end(), bound_vars.begin(), bound_vars.end() );
  std::map<std::string, uint32_t> index;
  for ( uint32_t i = 0; i < psi.vars.size(); ++i )
  {
    if ( !index.emplace( psi.vars[i], i ).second )
    {
      throw std::invalid_argument( "make_formula: duplicate variable '" + psi.vars[i] +
                                   "'" );
    }
  }
  for ( const auto& [fn, arg_names] : named_atoms )
  {
    atom a;
    a.fn = fn;
    for ( const auto& name : arg_names )
    {
      const auto it = index.find( name );
      if ( it == index.end() )
      {
        throw std::invalid_argument( "make_formula: undeclared variable '" + name +
                                     "' in atom " + fn );
      }
      a.args.push_back( it->second );
    }
    psi.atoms.push_back( std::move( a ) );
  }
  return psi;
}

/*! \brief Builds an instance from variable names. */
inline csp_instance make_instance(
    std::vector<std::string> vars,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& named_atoms )
{
  const auto psi = make_formula( std::move( vars ), {}, named_atoms );
  return csp_instance{ psi.vars, psi.atoms };
}

namespace detail
{

inline void validate_parts( const std::vector<std::string>& vars, uint32_t free_count,
                            const std::vector<atom>& atoms, const fn_env& env )
{
  std::unordered_set<std::string_view> seen;
  seen.reserve( vars.size() );
  for ( uint32_t i = 0; i < vars.size(); ++i )
  {
    if ( vars[i].empty() )
    {
      throw std::invalid_argument( "formula: empty variable name" );
    }
    if ( !seen.insert( vars[i] ).second )
    {
      throw std::invalid_argument( "formula: duplicate variable '" + vars[i] + "'" );
    }
  }
  if ( free_count > vars.size() )
  {
    throw std::invalid_argument( "formula: free_count exceeds variable count" );
  }
  /* consecutive atoms usually repeat one function; remember the last */
  std::unordered_map<std::string_view, uint32_t> arities;
  const std::string* last_fn = nullptr;
  uint32_t last_arity = 0;
  for ( const auto& a : atoms )
  {
    if ( !last_fn || a.fn != *last_fn )
    {
      auto ar = arities.find( a.fn );
      if ( ar == arities.end() )
      {
        const auto it = env.find( a.fn );
        if ( it == env.end() )
        {
          throw std::invalid_argument( "formula: unknown function '" + a.fn + "'" );
        }
        ar = arities.emplace( a.fn, it->second.arity() ).first;
      }
      last_fn = &a.fn;
      last_arity = ar->second;
    }
    if ( a.args.size() != last_arity )
    {
      throw std::invalid_argument( "formula: atom " + a.fn + " expects " +
                                   std::to_string( last_arity ) + " arguments, got " +
                                   std::to_string( a.args.size() ) );
    }
    for ( auto v : a.args )
    {
      if ( v >= vars.size() )
      {
        throw std::invalid_argument( "formula: argument index out of range in atom " +
                                     a.fn );
      }
    }
  }
}

} // namespace detail

/*! \brief Checks a formula against an environment.
 *
 * Throws `std::invalid_argument` describing the first problem:
 * duplicate or empty variable names, an unknown function, an arity
 * mismatch, or an argument index out of range.
 */
inline void validate_formula( const pps_formula& psi, const fn_env& env )
{
  detail::validate_parts( psi.vars, psi.free_count, psi.atoms, env );
}

/*! \brief Evaluation and planning knobs. */
struct eval_options
{
  /*! \brief Largest allowed arity of a merged intermediate factor. */
  uint32_t intermediate_cap = 22;
  /*! \brief Worker threads for large elimination steps; the result is
   * bit-identical for any value. */
  unsigned threads = 1;
};

/*! \brief One elimination step: the summed variable and the arities of
 * the merged product and of the remaining factor. */
struct elimination_step
{
  uint32_t var;
  uint32_t product_arity; /*!< 0 for an isolated variable (bare factor of 2) */
  uint32_t result_arity;
};

/*! \brief Greedy elimination order with per-step arity predictions. */
struct elimination_plan
{
  std::vector<elimination_step> steps;

  uint32_t max_product_arity() const
  {
    uint32_t w = 0;
    for ( const auto& s : steps )
    {
      w = std::max( w, s.product_arity );
    }
    return w;
  }
};

namespace detail
{

struct elim_factor
{
  std::vector<uint32_t> scope; /* sorted distinct variable ids */
  std::vector<rational> values;
  bool alive = true;
};

inline uint64_t gather_bits( uint64_t um, const uint32_t* positions, uint32_t count )
{
  uint64_t fm = 0;
  for ( uint32_t k = 0; k < count; ++k )
  {
    fm |= ( ( um >> positions[k] ) & 1u ) << k;
  }
  return fm;
}

inline uint64_t gather_bits( uint64_t um, const std::vector<uint32_t>& positions )
{
  return gather_bits( um, positions.data(), static_cast<uint32_t>( positions.size() ) );
}

/*! \brief Shared engine behind planning and evaluation.
 *
 * With `with_values == false` only scopes are tracked, which makes
 * planning cheap; the greedy decisions are identical in both modes.
 */
struct elim_engine
{
  const std::vector<std::string>& vars;
  uint32_t free_count;
  const std::vector<atom>& atoms;
  const fn_env& env;
  eval_options opt;
  bool with_values;

  std::vector<elim_factor> factors;
  std::vector<std::vector<uint32_t>> var_factors;
  elimination_plan plan;
  rational multiplier{ 1 };
  std::vector<char> removed; /* variables substituted away by equality atoms */

  /* per-step scratch, reused so a long elimination does not allocate */
  std::vector<uint32_t> scratch_merged, scratch_union, scratch_pos, scratch_off,
      scratch_touched;

  elim_engine( const std::vector<std::string>& vs, uint32_t fc,
               const std::vector<atom>& as, const fn_env& e, const eval_options& o,
               bool values )
      : vars( vs ), free_count( fc ), atoms( as ), env( e ), opt( o ),
        with_values( values ), var_factors( vs.size() ), removed( vs.size(), 0 )
  {
  }

  void build_factors()
  {
    const fn_table eq_table = tables::eq();
    const uint32_t n = static_cast<uint32_t>( vars.size() );

    /* per-function resolution, cached on the (usually repeated) last
     * atom name */
    struct fn_info
    {
      const fn_table* table;
      bool is_eq;
    };
    std::unordered_map<std::string_view, fn_info> resolved;
    const std::string* last_name = nullptr;
    fn_info last_info{ nullptr, false };
    const auto lookup = [&]( const std::string& name ) {
      if ( !last_name || name != *last_name )
      {
        auto it = resolved.find( name );
        if ( it == resolved.end() )
        {
          const auto& table = env.at( name );
          it = resolved.emplace( name, fn_info{ &table, table == eq_table } ).first;
        }
        last_name = &name;
        last_info = it->second;
      }
      return last_info;
    };
    bool any_eq = false;
    for ( const auto& a : atoms )
    {
      any_eq |= lookup( a.fn ).is_eq;
    }

    /* union-find over variables linked by equality atoms; the class
     * representative is the lowest member (a free variable when one is
     * present, since free ids come first); bound members are
     * substituted by the representative and leave the summation */
    std::vector<uint32_t> remap;
    std::vector<std::pair<uint32_t, uint32_t>> free_links;
    if ( any_eq )
    {
      std::vector<uint32_t> parent( n );
      for ( uint32_t i = 0; i < n; ++i )
      {
        parent[i] = i;
      }
      const auto find = [&parent]( uint32_t v ) {
        while ( parent[v] != v )
        {
          parent[v] = parent[parent[v]];
          v = parent[v];
        }
        return v;
      };
      for ( const auto& a : atoms )
      {
        if ( lookup( a.fn ).is_eq )
        {
          const uint32_t ra = find( a.args[0] ), rb = find( a.args[1] );
          if ( ra != rb )
          {
            parent[std::max( ra, rb )] = std::min( ra, rb );
          }
        }
      }
      remap.resize( n );
      for ( uint32_t v = 0; v < n; ++v )
      {
        const uint32_t rep = find( v );
        if ( v < free_count )
        {
          remap[v] = v; /* free variables always stand for themselves */
          if ( rep != v )
          {
            /* second and later free members keep an explicit equality
             * factor to the class representative */
            free_links.emplace_back( rep, v );
          }
        }
        else
        {
          remap[v] = rep;
          if ( rep != v )
          {
            removed[v] = 1;
          }
        }
      }
    }

    std::vector<uint32_t> remapped, arg_pos; /* per-atom scratch */
    for ( const auto& a : atoms )
    {
      const auto info = lookup( a.fn );
      if ( info.is_eq )
      {
        continue;
      }
      const auto& table = *info.table;
      const std::vector<uint32_t>* args = &a.args;
      if ( any_eq )
      {
        remapped.assign( a.args.begin(), a.args.end() );
        for ( auto& v : remapped )
        {
          v = remap[v];
        }
        args = &remapped;
      }
      elim_factor f;
      f.scope = *args;
      std::sort( f.scope.begin(), f.scope.end() );
      f.scope.erase( std::unique( f.scope.begin(), f.scope.end() ), f.scope.end() );

      if ( f.scope.empty() )
      {
        if ( with_values )
        {
          multiplier *= table.at( 0 );
        }
        continue;
      }
      if ( with_values )
      {
        arg_pos.resize( args->size() );
        for ( uint32_t k = 0; k < args->size(); ++k )
        {
          arg_pos[k] = static_cast<uint32_t>(
              std::lower_bound( f.scope.begin(), f.scope.end(), ( *args )[k] ) -
              f.scope.begin() );
        }
        const uint64_t sz = uint64_t( 1 ) << f.scope.size();
        f.values.resize( sz );
        for ( uint64_t m = 0; m < sz; ++m )
        {
          f.values[m] = table.at( gather_bits( m, arg_pos ) );
        }
      }
      add_factor( std::move( f ) );
    }

    for ( const auto& [rep, v] : free_links )
    {
      elim_factor f;
      f.scope = { rep, v };
      std::sort( f.scope.begin(), f.scope.end() );
      if ( with_values )
      {
        f.values = eq_table.values();
      }
      add_factor( std::move( f ) );
    }
  }

  void add_factor( elim_factor&& f )
  {
    const uint32_t id = static_cast<uint32_t>( factors.size() );
    for ( auto v : f.scope )
    {
      var_factors[v].push_back( id );
    }
    factors.push_back( std::move( f ) );
  }

  /* number of distinct other variables sharing a live factor with v */
  uint32_t degree( uint32_t v, std::vector<uint32_t>& stamp, uint32_t token ) const
  {
    uint32_t d = 0;
    for ( auto fid : var_factors[v] )
    {
      if ( !factors[fid].alive )
      {
        continue;
      }
      for ( auto u : factors[fid].scope )
      {
        if ( u != v && stamp[u] != token )
        {
          stamp[u] = token;
          ++d;
        }
      }
    }
    return d;
  }

  void eliminate( uint32_t v )
  {
    auto& merged = scratch_merged;
    merged.clear();
    for ( auto fid : var_factors[v] )
    {
      if ( factors[fid].alive )
      {
        merged.push_back( fid );
      }
    }
    if ( merged.empty() )
    {
      /* isolated variable: both assignments contribute the empty
       * product */
      if ( with_values )
      {
        multiplier *= 2;
      }
      plan.steps.push_back( { v, 0, 0 } );
      return;
    }

    auto& u = scratch_union;
    u.clear();
    for ( auto fid : merged )
    {
      u.insert( u.end(), factors[fid].scope.begin(), factors[fid].scope.end() );
    }
    std::sort( u.begin(), u.end() );
    u.erase( std::unique( u.begin(), u.end() ), u.end() );
    const auto pa = static_cast<uint32_t>( u.size() );
    if ( pa > opt.intermediate_cap )
    {
      throw std::domain_error(
          "evaluate: eliminating variable '" + vars[v] + "' needs an intermediate "
          "factor of arity " + std::to_string( pa ) + ", above the cap of " +
          std::to_string( opt.intermediate_cap ) );
    }
    plan.steps.push_back( { v, pa, pa - 1 } );

    elim_factor result;
    const auto vp = static_cast<uint32_t>(
        std::lower_bound( u.begin(), u.end(), v ) - u.begin() );
    result.scope = u;
    result.scope.erase( result.scope.begin() + vp );

    if ( with_values )
    {
      /* positions of each merged factor's scope inside u, flattened
       * with offsets into the shared scratch */
      auto& pos = scratch_pos;
      auto& off = scratch_off;
      pos.clear();
      off.clear();
      for ( uint32_t i = 0; i < merged.size(); ++i )
      {
        off.push_back( static_cast<uint32_t>( pos.size() ) );
        for ( auto s : factors[merged[i]].scope )
        {
          pos.push_back( static_cast<uint32_t>(
              std::lower_bound( u.begin(), u.end(), s ) - u.begin() ) );
        }
      }
      off.push_back( static_cast<uint32_t>( pos.size() ) );
      const uint64_t out_size = uint64_t( 1 ) << ( pa - 1 );
      const uint64_t low_mask = ( uint64_t( 1 ) << vp ) - 1;
      const uint64_t vbit = uint64_t( 1 ) << vp;
      result.values.resize( out_size );
      const auto fill = [&]( uint64_t begin, uint64_t end ) {
        for ( uint64_t om = begin; om < end; ++om )
        {
          const uint64_t im = ( om & low_mask ) | ( ( om & ~low_mask ) << 1 );
          rational acc( 0 );
          for ( int b = 0; b < 2; ++b )
          {
            const uint64_t m = b ? ( im | vbit ) : im;
            rational prod = factors[merged[0]].values[gather_bits(
                m, pos.data() + off[0], off[1] - off[0] )];
            for ( uint32_t i = 1; i < merged.size(); ++i )
            {
              prod *= factors[merged[i]].values[gather_bits(
                  m, pos.data() + off[i], off[i + 1] - off[i] )];
            }
            acc += prod;
          }
          result.values[om] = acc;
        }
      };
      if ( opt.threads > 1 && out_size >= ( uint64_t( 1 ) << 12 ) )
      {
        const unsigned nt = opt.threads;
        std::vector<std::thread> pool;
        const uint64_t chunk = ( out_size + nt - 1 ) / nt;
        for ( unsigned t = 0; t < nt; ++t )
        {
          const uint64_t b = t * chunk;
          const uint64_t e = std::min( out_size, b + chunk );
          if ( b < e )
          {
            pool.emplace_back( fill, b, e );
          }
        }
        for ( auto& th : pool )
        {
          th.join();
        }
      }
      else
      {
        fill( 0, out_size );
      }
    }

    for ( auto fid : merged )
    {
      factors[fid].alive = false;
      factors[fid].values.clear();
      factors[fid].values.shrink_to_fit();
    }
    if ( result.scope.empty() )
    {
      if ( with_values )
      {
        multiplier *= result.values[0];
      }
    }
    else
    {
      add_factor( std::move( result ) );
    }
  }

  void run( const std::vector<uint32_t>* forced_order )
  {
    build_factors();
    if ( forced_order )
    {
      for ( auto v : *forced_order )
      {
        if ( !removed[v] )
        {
          eliminate( v );
        }
      }
      return;
    }
    plan.steps.reserve( vars.size() - free_count );
    std::vector<uint32_t> stamp( vars.size(), 0 );
    uint32_t token = 0;
    using entry = std::pair<uint32_t, uint32_t>;
    std::priority_queue<entry, std::vector<entry>, std::greater<entry>> heap;
    std::vector<char> done( vars.size(), 0 );
    for ( uint32_t v = free_count; v < vars.size(); ++v )
    {
      if ( !removed[v] )
      {
        heap.push( { degree( v, stamp, ++token ), v } );
      }
    }
    while ( !heap.empty() )
    {
      const auto [d, v] = heap.top();
      heap.pop();
      if ( done[v] )
      {
        continue;
      }
      const uint32_t fresh = degree( v, stamp, ++token );
      if ( fresh != d )
      {
        heap.push( { fresh, v } ); /* stale entry; reinsert with current degree */
        continue;
      }
      /* eliminating v can lower the degree of everything it shares a
       * factor with; requeue those so the heap sees the drop */
      auto& touched = scratch_touched;
      touched.clear();
      for ( auto fid : var_factors[v] )
      {
        if ( factors[fid].alive )
        {
          for ( auto s : factors[fid].scope )
          {
            if ( s != v && s >= free_count && !done[s] )
            {
              touched.push_back( s );
            }
          }
        }
      }
      std::sort( touched.begin(), touched.end() );
      touched.erase( std::unique( touched.begin(), touched.end() ), touched.end() );
      done[v] = 1;
      eliminate( v );
      for ( auto s : touched )
      {
        heap.push( { degree( s, stamp, ++token ), s } );
      }
    }
  }

  fn_table assemble() const
  {
    const uint32_t fc = free_count;
    std::vector<const elim_factor*> live;
    for ( const auto& f : factors )
    {
      if ( f.alive )
      {
        live.push_back( &f );
      }
    }
    std::vector<rational> out( uint64_t( 1 ) << fc );
    for ( uint64_t m = 0; m < out.size(); ++m )
    {
      rational v = multiplier;
      for ( const auto* f : live )
      {
        v *= f->values[gather_bits( m, f->scope )];
      }
      out[m] = v;
    }
    return fn_table( fc, std::move( out ) );
  }
};

} // namespace detail

/*! \brief Predicts the greedy elimination order and its widths.
 *
 * Uses min-degree with lowest-id tie-break over the bound variables;
 * throws `std::domain_error` naming the offending step if some merge
 * would exceed `cap`.
 */
inline elimination_plan plan_elimination( const pps_formula& psi, const fn_env& env,
                                          uint32_t cap = eval_options{}.intermediate_cap )
{
  validate_formula( psi, env );
  eval_options opt;
  opt.intermediate_cap = cap;
  detail::elim_engine engine( psi.vars, psi.free_count, psi.atoms, env, opt, false );
  engine.run( nullptr );
  return std::move( engine.plan );
}

/*! \brief Evaluation result together with the executed plan. */
struct evaluation
{
  fn_table table;
  elimination_plan plan;
};

/*! \brief Evaluates a formula to the exact table of its free variables. */
inline evaluation evaluate_with_plan( const pps_formula& psi, const fn_env& env,
                                      const eval_options& opt = {} )
{
  validate_formula( psi, env );
  if ( psi.free_count > max_table_arity() )
  {
    throw std::domain_error( "evaluate: result arity exceeds the table cap" );
  }
  detail::elim_engine engine( psi.vars, psi.free_count, psi.atoms, env, opt, true );
  engine.run( nullptr );
  return evaluation{ engine.assemble(), std::move( engine.plan ) };
}

/*! \brief Evaluates a formula to the exact table of its free variables. */
inline fn_table evaluate( const pps_formula& psi, const fn_env& env,
                          const eval_options& opt = {} )
{
  return evaluate_with_plan( psi, env, opt ).table;
}

/*! \brief Evaluates with a caller-chosen elimination order.
 *
 * `order` must be a permutation of the bound variable names; the result
 * is bit-identical to `evaluate` for every order.
 */
inline fn_table evaluate_ordered( const pps_formula& psi, const fn_env& env,
                                  const std::vector<std::string>& order,
                                  const eval_options& opt = {} )
{
  validate_formula( psi, env );
  if ( psi.free_count > max_table_arity() )
  {
    throw std::domain_error( "evaluate: result arity exceeds the table cap" );
  }
  std::map<std::string, uint32_t> index;
  for ( uint32_t i = 0; i < psi.vars.size(); ++i )
  {
    index[psi.vars[i]] = i;
  }
  std::vector<uint32_t> ids;
  std::vector<char> seen( psi.vars.size(), 0 );
  for ( const auto& name : order )
  {
    const auto it = index.find( name );
    if ( it == index.end() || it->second < psi.free_count )
    {
      throw std::invalid_argument( "evaluate_ordered: '" + name +
                                   "' is not a bound variable" );
    }
    if ( seen[it->second]++ )
    {
      throw std::invalid_argument( "evaluate_ordered: variable '" + name +
                                   "' listed twice" );
    }
    ids.push_back( it->second );
  }
  if ( ids.size() != psi.bound_count() )
  {
    throw std::invalid_argument( "evaluate_ordered: order must cover all bound "
                                 "variables" );
  }
  detail::elim_engine engine( psi.vars, psi.free_count, psi.atoms, env, opt, true );
  engine.run( &ids );
  return engine.assemble();
}

/*! \brief Exact partition function: the sum of the instance's function
 * over all assignments. */
inline rational partition_function( const csp_instance& inst, const fn_env& env,
                                    const eval_options& opt = {} )
{
  /* the instance's variables are all summed: run the engine with an
   * empty free prefix, without copying the (possibly huge) instance */
  detail::validate_parts( inst.vars, 0, inst.atoms, env );
  detail::elim_engine engine( inst.vars, 0, inst.atoms, env, opt, true );
  engine.run( nullptr );
  return engine.assemble().at( 0 );
}

/* -------------------------------------------------------------------------
 * flattening
 * ---------------------------------------------------------------------- */

/*! \brief Substitutes a defined function into every atom that uses it.
 *
 * Each `g_name` atom in `psi` is replaced by a copy of `phi_g`'s atoms:
 * the free variables of `phi_g` are identified with the atom's
 * arguments and its bound variables are renamed into the reserved
 * namespace (`$` suffix), fresh per occurrence.  The result evaluates
 * bit-identically to `psi` with `g_name` bound to `evaluate(phi_g)`.
 */
inline pps_formula flatten( const pps_formula& psi, const std::string& g_name,
                            const pps_formula& phi_g )
{
  for ( const auto& a : phi_g.atoms )
  {
    if ( a.fn == g_name )
    {
      throw std::invalid_argument( "flatten: definition of '" + g_name +
                                   "' refers to itself" );
    }
  }

  /* fresh bound names b$k, starting above anything already present */
  uint64_t counter = 0;
  for ( const auto& name : psi.vars )
  {
    if ( name.size() > 2 && name.compare( 0, 2, "b$" ) == 0 &&
         std::all_of( name.begin() + 2, name.end(),
                      []( char c ) { return c >= '0' && c <= '9'; } ) )
    {
      counter = std::max<uint64_t>( counter, std::stoull( name.substr( 2 ) ) + 1 );
    }
  }

  pps_formula out;
  out.vars = psi.vars;
  out.free_count = psi.free_count;
  for ( const auto& a : psi.atoms )
  {
    if ( a.fn != g_name )
    {
      out.atoms.push_back( a );
      continue;
    }
    if ( a.args.size() != phi_g.free_count )
    {
      throw std::invalid_argument( "flatten: atom " + g_name + " has " +
                                   std::to_string( a.args.size() ) +
                                   " arguments but its definition has arity " +
                                   std::to_string( phi_g.free_count ) );
    }
    /* one fresh copy of the definition's bound variables */
    std::vector<uint32_t> remap( phi_g.vars.size() );
    for ( uint32_t k = 0; k < phi_g.free_count; ++k )
    {
      remap[k] = a.args[k];
    }
    for ( uint32_t k = phi_g.free_count; k < phi_g.vars.size(); ++k )
    {
      const std::string fresh = "b$" + std::to_string( counter++ );
      for ( const auto& existing : out.vars )
      {
        if ( existing == fresh )
        {
          throw std::logic_error( "flatten: generated name collides" );
        }
      }
      remap[k] = static_cast<uint32_t>( out.vars.size() );
      out.vars.push_back( fresh );
    }
    for ( const auto& ga : phi_g.atoms )
    {
      atom na;
      na.fn = ga.fn;
      for ( auto v : ga.args )
      {
        na.args.push_back( remap[v] );
      }
      out.atoms.push_back( std::move( na ) );
    }
  }
  return out;
}

/* -------------------------------------------------------------------------
 * instance constructions
 * ---------------------------------------------------------------------- */

namespace detail
{

/*! \brief Renames `extra` apart from `taken`, appending `$k` suffixes. */
inline std::vector<std::string> rename_apart( const std::vector<std::string>& taken,
                                              const std::vector<std::string>& extra )
{
  std::vector<std::string> out;
  std::map<std::string, char> used;
  for ( const auto& name : taken )
  {
    used[name] = 1;
  }
  for ( const auto& name : extra )
  {
    std::string candidate = name;
    for ( uint64_t k = 2; used.count( candidate ); ++k )
    {
      candidate = name + "$" + std::to_string( k );
    }
    used[candidate] = 1;
    out.push_back( candidate );
  }
  return out;
}

} // namespace detail

/*! \brief Disjoint union of two instances; `Z` multiplies.
 *
 * Variables of `j` are renamed apart from those of `i` when needed.
 */
inline csp_instance disjoint_sum( const csp_instance& i, const csp_instance& j )
{
  csp_instance out;
  out.vars = i.vars;
  const auto renamed = detail::rename_apart( i.vars, j.vars );
  out.vars.insert( out.vars.end(), renamed.begin(), renamed.end() );
  out.atoms = i.atoms;
  const auto shift = static_cast<uint32_t>( i.vars.size() );
  for ( const auto& a : j.atoms )
  {
    atom na = a;
    for ( auto& v : na.args )
    {
      v += shift;
    }
    out.atoms.push_back( std::move( na ) );
  }
  return out;
}

/*! \brief Layered sum: the disjoint union plus one `f_name(x, y)` atom
 * for every variable `x` of `i` and `y` of `j`.
 *
 * For the implication and disjunction tables this realizes
 * `Z = Z(i) + Z(j) - 1`.  `f_name` must refer to a binary table.
 */
inline csp_instance ordinal_sum( const csp_instance& i, const csp_instance& j,
                                 const std::string& f_name, const fn_env& env )
{
  const auto it = env.find( f_name );
  if ( it == env.end() )
  {
    throw std::invalid_argument( "ordinal_sum: unknown function '" + f_name + "'" );
  }
  if ( it->second.arity() != 2 )
  {
    throw std::invalid_argument( "ordinal_sum: '" + f_name + "' is not binary" );
  }
  csp_instance out = disjoint_sum( i, j );
  const auto ni = static_cast<uint32_t>( i.vars.size() );
  const auto nj = static_cast<uint32_t>( j.vars.size() );
  for ( uint32_t a = 0; a < ni; ++a )
  {
    for ( uint32_t b = 0; b < nj; ++b )
    {
      out.atoms.push_back( atom{ f_name, { a, ni + b } } );
    }
  }
  return out;
}

/* -------------------------------------------------------------------------
 * tolerance budget
 * ---------------------------------------------------------------------- */

/*! \brief Sup-norm budget for replacing atoms by approximations.
 *
 * Returns `delta = min(eps * 2^{-(s+1)} * 2^{-m} / C, 1)` where `s` is
 * the number of listed atoms, `m` the number of bound variables, and
 * `C` the largest partial product of atom values over all assignments
 * with at least one listed atom left out.  Replacing each listed atom
 * by any table within `delta` in sup-norm moves the evaluated function
 * by less than `eps / 2` in sup-norm.
 *
 * Throws `std::invalid_argument` for `eps <= 0` or bad atom indices,
 * and `std::domain_error` when the formula is too large to enumerate.
 */
inline rational tolerance_budget( const pps_formula& psi, const fn_env& env,
                                  const std::vector<std::size_t>& replaced_atoms,
                                  const rational& eps )
{
  validate_formula( psi, env );
  if ( !eps.is_positive() )
  {
    throw std::invalid_argument( "tolerance_budget: eps must be positive" );
  }
  std::vector<char> is_replaced( psi.atoms.size(), 0 );
  for ( auto idx : replaced_atoms )
  {
    if ( idx >= psi.atoms.size() )
    {
      throw std::invalid_argument( "tolerance_budget: atom index out of range" );
    }
    is_replaced[idx] = 1;
  }
  uint32_t s = 0;
  for ( auto c : is_replaced )
  {
    s += c;
  }
  const uint32_t total_vars = static_cast<uint32_t>( psi.vars.size() );
  if ( total_vars > 24 )
  {
    throw std::domain_error( "tolerance_budget: too many variables to enumerate" );
  }

  /* C = max over assignments of the product of all atoms with a
   * nonempty subset of the replaced ones left out; the maximum drops
   * every replaced value below one, or the smallest if none is */
  rational c_max( 0 );
  for ( uint64_t m = 0; m < ( uint64_t( 1 ) << total_vars ); ++m )
  {
    rational prod( 1 );
    std::vector<rational> replaced_vals;
    for ( std::size_t ai = 0; ai < psi.atoms.size(); ++ai )
    {
      const auto& a = psi.atoms[ai];
      uint64_t fm = 0;
      for ( uint32_t k = 0; k < a.args.size(); ++k )
      {
        fm |= ( ( m >> a.args[k] ) & 1u ) << k;
      }
      const rational& v = env.at( a.fn ).at( fm );
      if ( is_replaced[ai] )
      {
        replaced_vals.push_back( v );
      }
      else
      {
        prod *= v;
      }
    }
    if ( !replaced_vals.empty() )
    {
      /* keep only values >= 1; if everything is kept, drop the
       * smallest to keep the left-out subset nonempty */
      rational kept( 1 );
      bool dropped = false;
      rational smallest = replaced_vals.front();
      for ( const auto& v : replaced_vals )
      {
        smallest = std::min( smallest, v );
        if ( v >= rational( 1 ) )
        {
          kept *= v;
        }
        else
        {
          dropped = true;
        }
      }
      if ( !dropped )
      {
        kept /= smallest;
      }
      prod *= kept;
    }
    c_max = std::max( c_max, prod );
  }
  if ( c_max.is_zero() )
  {
    c_max = 1;
  }
  const rational scale( bigint( 1 ),
                        bigint( 1 ) << ( s + 1 + psi.bound_count() ) );
  return std::min( eps * scale / c_max, rational( 1 ) );
}

} // namespace ccsp
