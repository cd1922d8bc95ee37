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
  \file workspace.hpp
  \brief Named tables, formulas, and instances loaded from documents

  Definitions are immutable once loaded and share a single namespace:
  loading a second definition of any name is an error.  The symbol
  environment handed to evaluation is a sorted map of every table, so
  it is deterministic regardless of load order.
*/

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dsl.hpp"
#include "formula.hpp"
#include "table.hpp"

namespace ccsp
{

/*! \brief Which kind of definition a name refers to. */
enum class def_kind
{
  table,
  formula,
  instance
};

inline const char* to_string( def_kind k )
{
  switch ( k )
  {
  case def_kind::table:
    return "table";
  case def_kind::formula:
    return "formula";
  case def_kind::instance:
    return "instance";
  }
  return "?";
}

/*! \brief An immutable, uniquely named collection of definitions.
 *
 * The public vectors preserve load order for display; lookups go
 * through the by-name accessors, which distinguish a missing name from
 * one bound to a different kind.
 */
class workspace
{
public:
  std::vector<std::pair<std::string, fn_table>> tables;
  std::vector<std::pair<std::string, pps_formula>> formulas;
  std::vector<std::pair<std::string, csp_instance>> instances;

  /*! \brief Loads every declaration of a parsed document.
   *
   * Throws `std::invalid_argument` on the first name that is already
   * defined; definitions before it are retained.
   */
  void absorb( const dsl_document& doc )
  {
    for ( const auto& [name, f] : doc.tables )
    {
      claim( name, def_kind::table );
      tables.emplace_back( name, f );
    }
    for ( const auto& [name, psi] : doc.formulas )
    {
      claim( name, def_kind::formula );
      formulas.emplace_back( name, psi );
    }
    for ( const auto& [name, inst] : doc.instances )
    {
      claim( name, def_kind::instance );
      instances.emplace_back( name, inst );
    }
  }

  /*! \brief Kind of a name, or empty when undefined. */
  std::optional<def_kind> kind( const std::string& name ) const
  {
    const auto it = kinds_.find( name );
    if ( it == kinds_.end() )
    {
      return std::nullopt;
    }
    return it->second;
  }

  const fn_table& table( const std::string& name ) const
  {
    check_kind( name, def_kind::table );
    for ( const auto& [n, f] : tables )
    {
      if ( n == name )
      {
        return f;
      }
    }
    throw std::logic_error( "workspace: index out of sync" );
  }

  const pps_formula& formula( const std::string& name ) const
  {
    check_kind( name, def_kind::formula );
    for ( const auto& [n, psi] : formulas )
    {
      if ( n == name )
      {
        return psi;
      }
    }
    throw std::logic_error( "workspace: index out of sync" );
  }

  const csp_instance& instance( const std::string& name ) const
  {
    check_kind( name, def_kind::instance );
    for ( const auto& [n, inst] : instances )
    {
      if ( n == name )
      {
        return inst;
      }
    }
    throw std::logic_error( "workspace: index out of sync" );
  }

  /*! \brief Sorted name-to-table environment for evaluation. */
  fn_env env() const
  {
    fn_env e;
    for ( const auto& [name, f] : tables )
    {
      e.emplace( name, f );
    }
    return e;
  }

private:
  void claim( const std::string& name, def_kind k )
  {
    const auto [it, fresh] = kinds_.emplace( name, k );
    if ( !fresh )
    {
      throw std::invalid_argument( "workspace: '" + name + "' is already defined as a " +
                                   std::string( to_string( it->second ) ) );
    }
  }

  void check_kind( const std::string& name, def_kind want ) const
  {
    const auto k = kind( name );
    if ( !k )
    {
      throw std::invalid_argument( "workspace: unknown " +
                                   std::string( to_string( want ) ) + " '" + name +
                                   "'" );
    }
    if ( *k != want )
    {
      throw std::invalid_argument( "workspace: '" + name + "' is a " +
                                   std::string( to_string( *k ) ) + ", not a " +
                                   std::string( to_string( want ) ) );
    }
  }

  std::map<std::string, def_kind> kinds_;
};

}  // namespace ccsp
