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
  \file dsl.hpp
  \brief Text format for tables, formulas, and instances

  A document is a whitespace-insensitive sequence of declarations:

      fn NAME arity N
      table v0 v1 ... v_{2^N-1}

      formula NAME(x, y) := sum w . F(x, w) * G(w, y)

      instance NAME := F(a, b) * G(b)

  Table values are nonnegative integers or fractions `p/q`, listed in
  index order with the first argument in the lowest bit.  A formula
  without bound variables omits the `sum ... .` clause, and the empty
  product is written `1`.  Instance variables are implicit: every name
  appearing in an atom, in order of first appearance.  `#` starts a
  comment running to the end of the line.

  Serialization is the exact inverse on tables and formulas: writing
  and re-parsing yields an identical object.  Instances re-parse to the
  same atoms with variables in first-appearance order, so a parsed
  instance round-trips identically; an instance with a variable used by
  no atom has no text form and is rejected.
*/

#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "rational.hpp"
#include "table.hpp"

namespace ccsp
{

/*! \brief Syntax or semantic error in a document, with its position. */
struct parse_error : std::runtime_error
{
  uint32_t line;   /*!< 1-based line of the offending token */
  uint32_t column; /*!< 1-based column of the offending token */

  parse_error( const std::string& what, uint32_t line_, uint32_t column_ )
      : std::runtime_error( "line " + std::to_string( line_ ) + ", column " +
                            std::to_string( column_ ) + ": " + what ),
        line( line_ ), column( column_ )
  {
  }
};

/*! \brief Parsed declarations of one document, in declaration order
 * per kind.  Names are unique across all three kinds. */
struct dsl_document
{
  std::vector<std::pair<std::string, fn_table>> tables;
  std::vector<std::pair<std::string, pps_formula>> formulas;
  std::vector<std::pair<std::string, csp_instance>> instances;
};

namespace detail
{

enum class token_kind
{
  identifier,
  number,
  punct,
  end
};

struct token
{
  token_kind kind = token_kind::end;
  std::string text;
  uint32_t line = 1;
  uint32_t column = 1;
};

inline bool ident_start( char c )
{
  return std::isalpha( static_cast<unsigned char>( c ) ) || c == '_';
}

inline bool ident_rest( char c )
{
  return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '$';
}

/*! \brief Single-pass tokenizer; newlines count as whitespace. */
class lexer
{
public:
  explicit lexer( std::string_view text ) : text_( text ) { advance(); }

  const token& peek() const { return tok_; }

  token take()
  {
    token t = tok_;
    advance();
    return t;
  }

private:
  void advance()
  {
    for ( ;; )
    {
      while ( pos_ < text_.size() &&
              std::isspace( static_cast<unsigned char>( text_[pos_] ) ) )
      {
        step();
      }
      if ( pos_ < text_.size() && text_[pos_] == '#' )
      {
        while ( pos_ < text_.size() && text_[pos_] != '\n' )
        {
          step();
        }
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.column = column_;
    tok_.text.clear();
    if ( pos_ >= text_.size() )
    {
      tok_.kind = token_kind::end;
      return;
    }
    const char c = text_[pos_];
    if ( ident_start( c ) )
    {
      tok_.kind = token_kind::identifier;
      while ( pos_ < text_.size() && ident_rest( text_[pos_] ) )
      {
        tok_.text.push_back( text_[pos_] );
        step();
      }
      return;
    }
    if ( std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      tok_.kind = token_kind::number;
      while ( pos_ < text_.size() &&
              std::isdigit( static_cast<unsigned char>( text_[pos_] ) ) )
      {
        tok_.text.push_back( text_[pos_] );
        step();
      }
      return;
    }
    if ( c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=' )
    {
      tok_.kind = token_kind::punct;
      tok_.text = ":=";
      step();
      step();
      return;
    }
    if ( c == '(' || c == ')' || c == ',' || c == '*' || c == '.' || c == '/' )
    {
      tok_.kind = token_kind::punct;
      tok_.text.assign( 1, c );
      step();
      return;
    }
    throw parse_error( std::string( "unexpected character '" ) + c + "'", line_,
                       column_ );
  }

  void step()
  {
    if ( text_[pos_] == '\n' )
    {
      ++line_;
      column_ = 1;
    }
    else
    {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  uint32_t line_ = 1, column_ = 1;
  token tok_;
};

inline bool is_keyword( const std::string& s )
{
  return s == "fn" || s == "arity" || s == "table" || s == "formula" ||
         s == "instance" || s == "sum";
}

class document_parser
{
public:
  explicit document_parser( std::string_view text ) : lx_( text ) {}

  dsl_document run()
  {
    dsl_document doc;
    while ( lx_.peek().kind != token_kind::end )
    {
      const token head = expect_identifier( "a declaration" );
      if ( head.text == "fn" )
      {
        parse_fn( doc );
      }
      else if ( head.text == "formula" )
      {
        parse_formula( doc );
      }
      else if ( head.text == "instance" )
      {
        parse_instance( doc );
      }
      else
      {
        throw parse_error( "expected 'fn', 'formula', or 'instance', got '" +
                               head.text + "'",
                           head.line, head.column );
      }
    }
    return doc;
  }

private:
  token expect_identifier( const std::string& what )
  {
    const token t = lx_.take();
    if ( t.kind != token_kind::identifier )
    {
      throw parse_error( "expected " + what, t.line, t.column );
    }
    return t;
  }

  token expect_name( const std::string& what )
  {
    const token t = expect_identifier( what );
    if ( is_keyword( t.text ) )
    {
      throw parse_error( "'" + t.text + "' is a keyword and cannot name " + what,
                         t.line, t.column );
    }
    return t;
  }

  void expect_punct( const std::string& p )
  {
    const token t = lx_.take();
    if ( t.kind != token_kind::punct || t.text != p )
    {
      throw parse_error( "expected '" + p + "'", t.line, t.column );
    }
  }

  void expect_keyword( const std::string& kw )
  {
    const token t = lx_.take();
    if ( t.kind != token_kind::identifier || t.text != kw )
    {
      throw parse_error( "expected '" + kw + "'", t.line, t.column );
    }
  }

  bool peek_punct( const std::string& p ) const
  {
    return lx_.peek().kind == token_kind::punct && lx_.peek().text == p;
  }

  uint64_t parse_uint( const std::string& what, uint64_t cap )
  {
    const token t = lx_.take();
    if ( t.kind != token_kind::number )
    {
      throw parse_error( "expected " + what, t.line, t.column );
    }
    if ( t.text.size() > 19 )
    {
      throw parse_error( what + " is out of range", t.line, t.column );
    }
    const uint64_t v = std::stoull( t.text );
    if ( v > cap )
    {
      throw parse_error( what + " exceeds the cap of " + std::to_string( cap ),
                         t.line, t.column );
    }
    return v;
  }

  rational parse_value()
  {
    const token numt = lx_.take();
    if ( numt.kind != token_kind::number )
    {
      throw parse_error( "expected a table value", numt.line, numt.column );
    }
    bigint num( numt.text );
    if ( !peek_punct( "/" ) )
    {
      return rational( std::move( num ), bigint( 1 ) );
    }
    lx_.take();
    const token dent = lx_.take();
    if ( dent.kind != token_kind::number )
    {
      throw parse_error( "expected a denominator", dent.line, dent.column );
    }
    bigint den( dent.text );
    if ( den == 0 )
    {
      throw parse_error( "zero denominator", dent.line, dent.column );
    }
    return rational( std::move( num ), std::move( den ) );
  }

  void claim_name( const token& name )
  {
    if ( !names_.insert( name.text ).second )
    {
      throw parse_error( "name '" + name.text + "' is already declared",
                         name.line, name.column );
    }
  }

  void parse_fn( dsl_document& doc )
  {
    const token name = expect_name( "a function" );
    claim_name( name );
    expect_keyword( "arity" );
    const auto n =
        static_cast<uint32_t>( parse_uint( "the arity", max_table_arity() ) );
    expect_keyword( "table" );
    std::vector<rational> values;
    values.reserve( uint64_t( 1 ) << n );
    for ( uint64_t m = 0; m < ( uint64_t( 1 ) << n ); ++m )
    {
      values.push_back( parse_value() );
    }
    doc.tables.emplace_back( name.text, fn_table( n, std::move( values ) ) );
  }

  /*! Comma-separated names between parentheses; the list may be empty. */
  std::vector<token> parse_name_list( const std::string& what )
  {
    expect_punct( "(" );
    std::vector<token> names;
    if ( !peek_punct( ")" ) )
    {
      names.push_back( expect_name( what ) );
      while ( peek_punct( "," ) )
      {
        lx_.take();
        names.push_back( expect_name( what ) );
      }
    }
    expect_punct( ")" );
    return names;
  }

  /*! `1`, or atoms joined by `*`.  Variables are resolved through
   * `index`; with `extend` set, unseen names are appended instead of
   * rejected (instance bodies bind variables by first appearance). */
  std::vector<atom> parse_product( std::map<std::string, uint32_t>& index,
                                   std::vector<std::string>& vars, bool extend )
  {
    if ( lx_.peek().kind == token_kind::number && lx_.peek().text == "1" )
    {
      lx_.take();
      return {};
    }
    std::vector<atom> atoms;
    for ( ;; )
    {
      const token fn = expect_name( "a function" );
      atom a;
      a.fn = fn.text;
      for ( const auto& arg : parse_name_list( "a variable" ) )
      {
        auto it = index.find( arg.text );
        if ( it == index.end() )
        {
          if ( !extend )
          {
            throw parse_error( "undeclared variable '" + arg.text + "'", arg.line,
                               arg.column );
          }
          it = index.emplace( arg.text, static_cast<uint32_t>( vars.size() ) ).first;
          vars.push_back( arg.text );
        }
        a.args.push_back( it->second );
      }
      atoms.push_back( std::move( a ) );
      if ( !peek_punct( "*" ) )
      {
        break;
      }
      lx_.take();
    }
    return atoms;
  }

  void parse_formula( dsl_document& doc )
  {
    const token name = expect_name( "a formula" );
    claim_name( name );
    pps_formula psi;
    std::map<std::string, uint32_t> index;
    const auto declare = [&]( const token& t ) {
      if ( !index.emplace( t.text, static_cast<uint32_t>( psi.vars.size() ) ).second )
      {
        throw parse_error( "duplicate variable '" + t.text + "'", t.line, t.column );
      }
      psi.vars.push_back( t.text );
    };
    for ( const auto& t : parse_name_list( "a variable" ) )
    {
      declare( t );
    }
    psi.free_count = static_cast<uint32_t>( psi.vars.size() );
    expect_punct( ":=" );
    if ( lx_.peek().kind == token_kind::identifier && lx_.peek().text == "sum" )
    {
      lx_.take();
      /* every name before the '.' binds a summation variable */
      declare( expect_name( "a bound variable" ) );
      while ( lx_.peek().kind == token_kind::identifier )
      {
        declare( expect_name( "a bound variable" ) );
      }
      expect_punct( "." );
    }
    psi.atoms = parse_product( index, psi.vars, /* extend = */ false );
    doc.formulas.emplace_back( name.text, std::move( psi ) );
  }

  void parse_instance( dsl_document& doc )
  {
    const token name = expect_name( "an instance" );
    claim_name( name );
    expect_punct( ":=" );
    csp_instance inst;
    std::map<std::string, uint32_t> index;
    inst.atoms = parse_product( index, inst.vars, /* extend = */ true );
    doc.instances.emplace_back( name.text, std::move( inst ) );
  }

  lexer lx_;
  std::set<std::string> names_;
};

}  // namespace detail

/*! \brief Parses a whole document.  Throws \ref parse_error with the
 * position of the first problem. */
inline dsl_document parse_document( std::string_view text )
{
  return detail::document_parser( text ).run();
}

/*! \brief Renders a table declaration (two lines). */
inline std::string serialize_table( const std::string& name, const fn_table& f )
{
  std::string out = "fn " + name + " arity " + std::to_string( f.arity() ) + "\ntable";
  for ( uint64_t m = 0; m < f.size(); ++m )
  {
    out += " ";
    out += f.at( m ).to_string();
  }
  out += "\n";
  return out;
}

namespace detail
{

inline std::string render_product( const std::vector<atom>& atoms,
                                   const std::vector<std::string>& vars )
{
  if ( atoms.empty() )
  {
    return "1";
  }
  std::string out;
  for ( std::size_t i = 0; i < atoms.size(); ++i )
  {
    if ( i > 0 )
    {
      out += " * ";
    }
    out += atoms[i].fn;
    out += "(";
    for ( std::size_t j = 0; j < atoms[i].args.size(); ++j )
    {
      if ( j > 0 )
      {
        out += ", ";
      }
      out += vars.at( atoms[i].args[j] );
    }
    out += ")";
  }
  return out;
}

}  // namespace detail

/*! \brief Renders a formula declaration (one line). */
inline std::string serialize_formula( const std::string& name, const pps_formula& psi )
{
  std::string out = "formula " + name + "(";
  for ( uint32_t i = 0; i < psi.free_count; ++i )
  {
    if ( i > 0 )
    {
      out += ", ";
    }
    out += psi.vars[i];
  }
  out += ") := ";
  if ( psi.bound_count() > 0 )
  {
    out += "sum";
    for ( uint32_t i = psi.free_count; i < psi.vars.size(); ++i )
    {
      out += " " + psi.vars[i];
    }
    out += " . ";
  }
  out += detail::render_product( psi.atoms, psi.vars );
  out += "\n";
  return out;
}

/*! \brief Renders an instance declaration (one line).
 *
 * Parsing recovers the variables from the atoms, so an instance with a
 * variable no atom touches cannot be written; that case throws
 * `std::invalid_argument`.  Re-parsing lists the variables in first-use
 * order, which reproduces any parsed instance identically.
 */
inline std::string serialize_instance( const std::string& name,
                                       const csp_instance& inst )
{
  std::vector<bool> used( inst.vars.size(), false );
  for ( const auto& a : inst.atoms )
  {
    for ( auto v : a.args )
    {
      used.at( v ) = true;
    }
  }
  for ( std::size_t i = 0; i < used.size(); ++i )
  {
    if ( !used[i] )
    {
      throw std::invalid_argument( "serialize_instance: variable '" + inst.vars[i] +
                                   "' is not used by any atom" );
    }
  }
  return "instance " + name + " := " + detail::render_product( inst.atoms, inst.vars ) +
         "\n";
}

/*! \brief Renders a whole document: tables, then formulas, then
 * instances, blank-line separated. */
inline std::string serialize_document( const dsl_document& doc )
{
  std::string out;
  const auto gap = [&] {
    if ( !out.empty() )
    {
      out += "\n";
    }
  };
  for ( const auto& [name, f] : doc.tables )
  {
    gap();
    out += serialize_table( name, f );
  }
  for ( const auto& [name, psi] : doc.formulas )
  {
    gap();
    out += serialize_formula( name, psi );
  }
  for ( const auto& [name, inst] : doc.instances )
  {
    gap();
    out += serialize_instance( name, inst );
  }
  return out;
}

}  // namespace ccsp
