#pragma once

#include <string_view>

#include "fixrank/syntax_tree.hpp"

namespace fixrank {

enum class ParseMode {
  Auto,             // compilation unit, then class-body members, then statements
  CompilationUnit,
  ClassBody,
  Statements,
};

/// Parses Java-family source into a SyntaxTree. Comments and parentheses do
/// not produce nodes; types are leaves holding their whitespace-free text.
///
/// Throws Error(Unparseable) with a line number on syntax errors.
SyntaxTree parse_java(std::string_view source, ParseMode mode = ParseMode::Auto);

}  // namespace fixrank
