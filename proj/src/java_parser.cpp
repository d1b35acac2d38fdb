#include "fixrank/java_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <vector>

#include "fixrank/error.hpp"

namespace fixrank {

namespace {

// --- lexer ------------------------------------------------------------------

enum class Tok { Ident, Number, String, Char, Op, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::uint32_t offset;
};

constexpr std::array kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",        "char",
    "class",    "const",      "continue",  "default",   "do",       "double",    "else",         "enum",
    "extends",  "final",      "finally",   "float",     "for",      "goto",      "if",           "implements",
    "import",   "instanceof", "int",       "interface", "long",     "native",    "new",          "package",
    "private",  "protected",  "public",    "return",    "short",    "static",    "strictfp",     "super",
    "switch",   "synchronized", "this",    "throw",     "throws",   "transient", "try",          "void",
    "volatile", "while",      "true",      "false",     "null",
};

constexpr std::array kPrimitives = {"boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};

constexpr std::array kModifiers = {"public",   "private",  "protected",    "static",    "final",
                                   "abstract", "native",   "synchronized", "transient", "volatile",
                                   "strictfp", "default",  "sealed",       "non-sealed"};

template <std::size_t N>
bool one_of(std::string_view s, const std::array<const char*, N>& set) {
  return std::any_of(set.begin(), set.end(), [s](const char* k) { return s == k; });
}

bool is_keyword(std::string_view s) { return one_of(s, kKeywords); }

// Longest match first; '>' is always emitted alone so that nested generics
// close cleanly. The parser glues adjacent '>' tokens back into shift ops.
constexpr std::array kOperators = {"<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "<<",
                                   "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^="};

int line_of(std::string_view src, std::uint32_t offset) {
  return 1 + static_cast<int>(std::count(src.begin(), src.begin() + std::min<std::size_t>(offset, src.size()), '\n'));
}

[[noreturn]] void syntax_error(std::string_view src, std::uint32_t offset, const std::string& what) {
  fail(ErrorCode::Unparseable, "line " + std::to_string(line_of(src, offset)) + ": " + what);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      auto end = src.find("*/", i + 2);
      if (end == std::string_view::npos) syntax_error(src, static_cast<std::uint32_t>(i), "unterminated comment");
      i = end + 2;
      continue;
    }
    auto start = i;
    auto push = [&](Tok kind) {
      out.push_back({kind, src.substr(start, i - start), static_cast<std::uint32_t>(start)});
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || static_cast<unsigned char>(c) >= 0x80) {
      while (i < n && (ident_char(src[i]) || static_cast<unsigned char>(src[i]) >= 0x80)) ++i;
      // non-sealed is the only hyphenated keyword
      if (src.substr(start, i - start) == "non" && src.substr(i, 7) == "-sealed") i += 7;
      push(Tok::Ident);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      if (c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X' || src[i + 1] == 'b' || src[i + 1] == 'B')) {
        i += 2;
        while (i < n && (std::isxdigit(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      } else {
        while (i < n && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '.')) {
          if (src[i] == '.' && i + 1 < n && src[i + 1] == '.') break;
          ++i;
        }
        if (i < n && (src[i] == 'e' || src[i] == 'E')) {
          ++i;
          if (i < n && (src[i] == '+' || src[i] == '-')) ++i;
          while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      while (i < n && std::string_view("lLfFdD").find(src[i]) != std::string_view::npos) ++i;
      push(Tok::Number);
      continue;
    }
    if (c == '"') {
      if (src.substr(i, 3) == "\"\"\"") {
        auto end = src.find("\"\"\"", i + 3);
        if (end == std::string_view::npos) syntax_error(src, static_cast<std::uint32_t>(i), "unterminated text block");
        i = end + 3;
      } else {
        ++i;
        while (i < n && src[i] != '"') {
          if (src[i] == '\\') ++i;
          if (i < n && src[i] == '\n') syntax_error(src, static_cast<std::uint32_t>(start), "unterminated string");
          ++i;
        }
        if (i >= n) syntax_error(src, static_cast<std::uint32_t>(start), "unterminated string");
        ++i;
      }
      push(Tok::String);
      continue;
    }
    if (c == '\'') {
      ++i;
      while (i < n && src[i] != '\'') {
        if (src[i] == '\\') ++i;
        ++i;
      }
      if (i >= n) syntax_error(src, static_cast<std::uint32_t>(start), "unterminated char literal");
      ++i;
      push(Tok::Char);
      continue;
    }
    bool matched = false;
    for (const char* op : kOperators) {
      std::string_view o(op);
      if (src.substr(i, o.size()) == o) {
        i += o.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (std::string_view("(){}[];,.@=><!~?:+-*/&|^%").find(c) == std::string_view::npos)
        syntax_error(src, static_cast<std::uint32_t>(i), std::string("unexpected character '") + c + "'");
      ++i;
    }
    push(Tok::Op);
  }
  out.push_back({Tok::End, {}, static_cast<std::uint32_t>(n)});
  return out;
}

// --- parser -----------------------------------------------------------------

struct Backtrack {};

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> tokens) : src_(src), toks_(std::move(tokens)) {}

  SyntaxTree compilation_unit() {
    auto unit = add(NodeKind::CompilationUnit, "", 0);
    skip_annotations_if_package();
    if (at("package")) {
      auto start = offset();
      next();
      auto name = qualified_name();
      expect(";");
      attach(unit, add(NodeKind::Package, name, start));
    }
    while (at("import")) {
      auto start = offset();
      next();
      std::string text;
      if (accept("static")) text = "static ";
      text += qualified_name();
      if (accept(".")) {
        expect("*");
        text += ".*";
      }
      expect(";");
      attach(unit, add(NodeKind::Import, text, start));
    }
    while (!at_end()) {
      if (accept(";")) continue;
      auto start = offset();
      auto mods = modifiers();
      attach(unit, type_declaration(mods, start));
    }
    return finish(unit);
  }

  SyntaxTree class_body_snippet() {
    auto decl = add(NodeKind::ClassDecl, "", 0);
    auto body = add(NodeKind::ClassBody, "", 0);
    attach(decl, body);
    while (!at_end()) member(body, "");
    return finish(decl);
  }

  SyntaxTree statements_snippet() {
    auto block = add(NodeKind::Block, "", 0);
    while (!at_end()) attach(block, block_statement());
    return finish(block);
  }

 private:
  // -- token helpers
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool at(std::string_view text, std::size_t k = 0) const {
    const auto& t = peek(k);
    return t.kind != Tok::String && t.kind != Tok::Char && t.kind != Tok::End && t.text == text;
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool accept(std::string_view text) {
    if (!at(text)) return false;
    next();
    return true;
  }
  void expect(std::string_view text) {
    if (!accept(text)) error("expected '" + std::string(text) + "' but found '" + describe(peek()) + "'");
  }
  std::string describe(const Token& t) const { return t.kind == Tok::End ? "end of input" : std::string(t.text); }
  [[noreturn]] void error(const std::string& what) const {
    if (speculating_ > 0) throw Backtrack{};
    syntax_error(src_, peek().offset, what);
  }
  bool is_ident(std::size_t k = 0) const {
    const auto& t = peek(k);
    return t.kind == Tok::Ident && !is_keyword(t.text);
  }
  std::string ident() {
    if (!is_ident()) error("expected identifier but found '" + describe(peek()) + "'");
    return std::string(next().text);
  }
  std::uint32_t offset() const { return peek().offset; }
  std::uint32_t prev_end() const {
    if (pos_ == 0) return 0;
    const auto& t = toks_[pos_ - 1];
    return t.offset + static_cast<std::uint32_t>(t.text.size());
  }
  // Adjacent tokens with no whitespace between them (for '>' '>' '=' gluing).
  bool adjacent(std::size_t k) const {
    const auto& a = peek(k);
    const auto& b = peek(k + 1);
    return a.offset + a.text.size() == b.offset;
  }
  // Source text between two offsets with whitespace and comments dropped.
  std::string compact(std::uint32_t begin, std::uint32_t end) const {
    std::string out;
    auto first = std::lower_bound(toks_.begin(), toks_.end(), begin,
                                  [](const Token& t, std::uint32_t off) { return t.offset < off; });
    for (auto it = first; it != toks_.end(); ++it) {
      const auto& t = *it;
      if (t.offset >= end || t.kind == Tok::End) break;
      // keep a space between two word-like tokens
      if (!out.empty() && (std::isalnum(static_cast<unsigned char>(out.back())) || out.back() == '_') &&
          (t.kind == Tok::Ident || t.kind == Tok::Number))
        out += ' ';
      out += t.text;
    }
    return out;
  }

  // -- tree helpers
  NodeId add(NodeKind kind, std::string value, std::uint32_t start) {
    return tree_.add(kind, std::move(value), {start, start});
  }
  void attach(NodeId parent, NodeId child) { tree_.attach(parent, child); }
  NodeId close(NodeId id, std::uint32_t start) {
    tree_.set_span(id, {start, std::max(start, prev_end())});
    return id;
  }
  NodeId wrap(NodeKind kind, NodeId child, std::uint32_t start) {
    auto w = add(kind, "", start);
    attach(w, child);
    return close(w, start);
  }
  SyntaxTree finish(NodeId root) {
    close(root, 0);
    tree_.finalize(root);
    return std::move(tree_);
  }

  // Runs `fn` speculatively; on failure restores the position and discards
  // any nodes it created.
  template <typename Fn>
  bool speculate(Fn&& fn) {
    auto saved = pos_;
    ++speculating_;
    try {
      fn();
      --speculating_;
      return true;
    } catch (const Backtrack&) {
      --speculating_;
      pos_ = saved;
      return false;
    }
  }

  // -- names, types, modifiers
  std::string qualified_name() {
    std::string name = ident();
    while (at(".") && is_ident(1)) {
      next();
      name += '.';
      name += next().text;
    }
    return name;
  }

  void annotation() {
    expect("@");
    qualified_name();
    if (at("(")) skip_balanced("(", ")");
  }

  void skip_annotations_if_package() {
    auto saved = pos_;
    while (at("@") && !at("interface", 1)) annotation();
    if (!at("package")) pos_ = saved;
  }

  void skip_balanced(std::string_view open, std::string_view close_tok) {
    expect(open);
    int depth = 1;
    while (depth > 0) {
      if (at_end()) error("unbalanced '" + std::string(open) + "'");
      if (at(open)) ++depth;
      if (at(close_tok)) --depth;
      next();
    }
  }

  std::string modifiers() {
    auto start = offset();
    while (true) {
      if (at("@") && !at("interface", 1)) {
        annotation();
        continue;
      }
      if (peek().kind == Tok::Ident && one_of(peek().text, kModifiers)) {
        // `synchronized (` / `default:` are statements, not modifiers
        if ((at("synchronized") && at("(", 1)) || (at("default") && (at(":", 1) || at("->", 1)))) break;
        next();
        continue;
      }
      break;
    }
    return compact(start, offset());
  }

  void type_arguments() {
    expect("<");
    if (accept(">")) return;  // diamond
    while (true) {
      while (at("@")) annotation();
      if (accept("?")) {
        if (accept("extends") || accept("super")) type();
      } else {
        type();
      }
      if (!accept(",")) break;
    }
    expect(">");
  }

  // Parses a type and returns its compact text.
  std::string type() {
    auto start = offset();
    while (at("@")) annotation();
    if (peek().kind == Tok::Ident && one_of(peek().text, kPrimitives)) {
      next();
    } else {
      ident();
      if (at("<")) type_arguments();
      while (at(".") && (is_ident(1) || at("@", 1))) {
        next();
        while (at("@")) annotation();
        ident();
        if (at("<")) type_arguments();
      }
    }
    while (at("[") && at("]", 1)) {
      next();
      next();
    }
    return compact(start, prev_end());
  }

  std::string type_parameters() {
    auto start = offset();
    expect("<");
    int depth = 1;
    while (depth > 0) {
      if (at_end()) error("unbalanced type parameters");
      if (at("<")) ++depth;
      if (at(">")) --depth;
      next();
    }
    return compact(start, prev_end());
  }

  // -- declarations
  NodeId type_declaration(const std::string& mods, std::uint32_t start) {
    std::string keyword;
    if (at("@") && at("interface", 1)) {
      next();
      next();
      keyword = "@interface";
    } else if (at("class") || at("interface") || at("enum") || (at("record") && is_ident(1))) {
      keyword = std::string(next().text);
    } else {
      error("expected type declaration but found '" + describe(peek()) + "'");
    }
    auto name = ident();
    auto decl = add(NodeKind::ClassDecl, name, start);
    attach(decl, add(NodeKind::Modifiers, mods.empty() ? keyword : mods + " " + keyword, start));
    if (at("<")) attach(decl, add(NodeKind::TypeParams, type_parameters(), start));
    if (keyword == "record") attach(decl, parameters());
    auto sup_start = offset();
    while (at("extends") || at("implements") || at("permits")) {
      next();
      type();
      while (accept(",")) type();
    }
    if (offset() != sup_start) attach(decl, close(add(NodeKind::Supertypes, compact(sup_start, prev_end()), sup_start), sup_start));
    attach(decl, class_body(keyword == "enum", name));
    return close(decl, start);
  }

  NodeId class_body(bool is_enum, const std::string& class_name) {
    auto start = offset();
    expect("{");
    auto body = add(NodeKind::ClassBody, "", start);
    if (is_enum) {
      while (!at(";") && !at("}")) {
        auto cstart = offset();
        while (at("@")) annotation();
        auto constant = add(NodeKind::EnumConstant, ident(), cstart);
        if (at("(")) attach(constant, arguments());
        if (at("{")) attach(constant, class_body(false, ""));
        attach(body, close(constant, cstart));
        if (!accept(",")) break;
      }
      accept(";");
    }
    while (!accept("}")) {
      if (at_end()) error("unterminated class body");
      member(body, class_name);
    }
    return close(body, start);
  }

  void member(NodeId body, const std::string& class_name) {
    if (accept(";")) return;
    auto start = offset();
    if (at("{") || (at("static") && at("{", 1))) {
      accept("static");
      attach(body, close(wrap(NodeKind::InitializerBlock, block(), start), start));
      return;
    }
    auto mods = modifiers();
    if (at("class") || at("interface") || at("enum") || (at("@") && at("interface", 1)) ||
        (at("record") && is_ident(1) && (at("(", 2) || at("<", 2)))) {
      attach(body, type_declaration(mods, start));
      return;
    }
    std::string tparams;
    if (at("<")) tparams = type_parameters();
    // constructor: Name '(' (or compact record constructor Name '{')
    if (is_ident() && at("(", 1) && (class_name.empty() || peek().text == class_name)) {
      auto name = ident();
      auto decl = add(NodeKind::CtorDecl, name, start);
      attach(decl, add(NodeKind::Modifiers, mods, start));
      if (!tparams.empty()) attach(decl, add(NodeKind::TypeParams, tparams, start));
      attach(decl, parameters());
      throws_clause(decl);
      attach(decl, block());
      attach(body, close(decl, start));
      return;
    }
    if (is_ident() && at("{", 1) && peek().text == class_name) {
      auto decl = add(NodeKind::CtorDecl, ident(), start);
      attach(decl, add(NodeKind::Modifiers, mods, start));
      attach(decl, block());
      attach(body, close(decl, start));
      return;
    }
    auto tstart = offset();
    auto type_text = type();
    auto type_node = close(add(NodeKind::TypeRef, type_text, tstart), tstart);
    auto name_start = offset();
    auto name = ident();
    if (at("(")) {
      auto decl = add(NodeKind::MethodDecl, name, start);
      attach(decl, add(NodeKind::Modifiers, mods, start));
      if (!tparams.empty()) attach(decl, add(NodeKind::TypeParams, tparams, start));
      attach(decl, type_node);
      attach(decl, parameters());
      while (at("[") && at("]", 1)) {
        next();
        next();
      }
      throws_clause(decl);
      if (accept("default")) {
        auto dstart = offset();
        attach(decl, wrap(NodeKind::Initializer, element_value(), dstart));
        expect(";");
      } else if (!accept(";")) {
        attach(decl, block());
      }
      attach(body, close(decl, start));
      return;
    }
    auto decl = add(NodeKind::FieldDecl, "", start);
    attach(decl, add(NodeKind::Modifiers, mods, start));
    attach(decl, type_node);
    attach(decl, declarator_rest(name, name_start));
    while (accept(",")) {
      auto s = offset();
      attach(decl, declarator_rest(ident(), s));
    }
    expect(";");
    attach(body, close(decl, start));
  }

  NodeId element_value() {
    if (at("{")) return array_initializer();
    if (at("@")) {
      auto start = offset();
      annotation();
      return close(add(NodeKind::Literal, compact(start, prev_end()), start), start);
    }
    return expression();
  }

  void throws_clause(NodeId decl) {
    if (!at("throws")) return;
    auto start = offset();
    next();
    type();
    while (accept(",")) type();
    attach(decl, close(add(NodeKind::Throws, compact(start, prev_end()), start), start));
  }

  NodeId parameters() {
    auto start = offset();
    expect("(");
    auto params = add(NodeKind::Parameters, "", start);
    if (!at(")")) {
      while (true) {
        auto pstart = offset();
        auto mods = modifiers();
        auto tstart = offset();
        auto t = type();
        if (accept("...")) t += "...";
        std::string name;
        if (at("this")) {
          next();
          name = "this";
        } else {
          name = ident();
        }
        while (at("[") && at("]", 1)) {
          next();
          next();
          t += "[]";
        }
        auto p = add(NodeKind::Parameter, name, pstart);
        if (!mods.empty()) attach(p, add(NodeKind::Modifiers, mods, pstart));
        attach(p, close(add(NodeKind::TypeRef, t, tstart), tstart));
        attach(params, close(p, pstart));
        if (!accept(",")) break;
      }
    }
    expect(")");
    return close(params, start);
  }

  // name [dims] [= initializer]
  NodeId declarator_rest(std::string name, std::uint32_t start) {
    while (at("[") && at("]", 1)) {
      next();
      next();
      name += "[]";
    }
    auto decl = add(NodeKind::Declarator, std::move(name), start);
    if (accept("=")) {
      auto istart = offset();
      attach(decl, wrap(NodeKind::Initializer, at("{") ? array_initializer() : expression(), istart));
    }
    return close(decl, start);
  }

  // -- statements
  NodeId block() {
    auto start = offset();
    expect("{");
    auto b = add(NodeKind::Block, "", start);
    while (!accept("}")) {
      if (at_end()) error("unterminated block");
      attach(b, block_statement());
    }
    return close(b, start);
  }

  bool looks_like_local_class() const {
    std::size_t k = 0;
    while (peek(k).kind == Tok::Ident && (peek(k).text == "final" || peek(k).text == "abstract" ||
                                          peek(k).text == "static" || peek(k).text == "strictfp"))
      ++k;
    return at("class", k) || at("interface", k) || at("enum", k) ||
           (at("record", k) && peek(k + 1).kind == Tok::Ident && (at("(", k + 2) || at("<", k + 2)));
  }

  NodeId block_statement() {
    auto start = offset();
    if (looks_like_local_class() || (at("@") && !at("interface", 1) && local_class_after_annotations())) {
      auto mods = modifiers();
      return type_declaration(mods, start);
    }
    if (at("yield") && !at("=", 1) && !at("(", 1) && !at(".", 1)) return statement();
    NodeId local = kNoNode;
    if (speculate([&] { local = local_variable(start, true); })) return local;
    return statement();
  }

  bool local_class_after_annotations() {
    auto saved = pos_;
    bool result = false;
    speculate([&] {
      modifiers();
      result = looks_like_local_class();
      throw Backtrack{};
    });
    pos_ = saved;
    return result;
  }

  // [mods] Type name [= init] {, name [= init]} [;]
  NodeId local_variable(std::uint32_t start, bool require_semicolon) {
    auto mods = modifiers();
    if (at("(") || at("-") || at("!") || peek().kind != Tok::Ident) error("not a declaration");
    auto tstart = offset();
    auto t = type();
    if (!is_ident()) error("not a declaration");
    auto name_start = offset();
    auto name = ident();
    if (!(at("=") || at(";") || at(",") || at("[") || at(":") || at(")"))) error("not a declaration");
    auto decl = add(NodeKind::LocalVar, "", start);
    attach(decl, add(NodeKind::Modifiers, mods, start));
    attach(decl, close(add(NodeKind::TypeRef, t, tstart), tstart));
    attach(decl, declarator_rest(name, name_start));
    while (accept(",")) {
      auto s = offset();
      attach(decl, declarator_rest(ident(), s));
    }
    if (require_semicolon) expect(";");
    return close(decl, start);
  }

  NodeId condition_in_parens() {
    expect("(");
    auto start = offset();
    auto c = wrap(NodeKind::Condition, expression(), start);
    expect(")");
    return c;
  }

  NodeId statement() {
    auto start = offset();
    if (at("{")) return block();
    if (accept(";")) return close(add(NodeKind::Empty, "", start), start);
    if (at("if")) {
      next();
      auto s = add(NodeKind::If, "", start);
      attach(s, condition_in_parens());
      auto tstart = offset();
      attach(s, wrap(NodeKind::Then, statement(), tstart));
      if (at("else")) {
        auto estart = offset();
        next();
        attach(s, wrap(NodeKind::Else, statement(), estart));
      }
      return close(s, start);
    }
    if (at("while")) {
      next();
      auto s = add(NodeKind::While, "", start);
      attach(s, condition_in_parens());
      attach(s, statement());
      return close(s, start);
    }
    if (at("do")) {
      next();
      auto s = add(NodeKind::Do, "", start);
      attach(s, statement());
      expect("while");
      attach(s, condition_in_parens());
      expect(";");
      return close(s, start);
    }
    if (at("for")) return for_statement();
    if (at("try")) return try_statement();
    if (at("switch")) {
      auto s = switch_construct();
      accept(";");
      return s;
    }
    if (at("synchronized") && at("(", 1)) {
      next();
      auto s = add(NodeKind::Synchronized, "", start);
      expect("(");
      auto lstart = offset();
      attach(s, wrap(NodeKind::Lock, expression(), lstart));
      expect(")");
      attach(s, block());
      return close(s, start);
    }
    if (at("return")) {
      next();
      auto s = add(NodeKind::Return, "", start);
      if (!at(";")) attach(s, expression());
      expect(";");
      return close(s, start);
    }
    if (at("throw")) {
      next();
      auto s = add(NodeKind::Throw, "", start);
      attach(s, expression());
      expect(";");
      return close(s, start);
    }
    if (at("break") || at("continue")) {
      auto kind = at("break") ? NodeKind::Break : NodeKind::Continue;
      next();
      std::string label;
      if (is_ident()) label = ident();
      expect(";");
      return close(add(kind, label, start), start);
    }
    if (at("assert")) {
      next();
      auto s = add(NodeKind::Assert, "", start);
      auto pstart = offset();
      attach(s, wrap(NodeKind::Predicate, expression(), pstart));
      if (accept(":")) {
        auto mstart = offset();
        attach(s, wrap(NodeKind::Message, expression(), mstart));
      }
      expect(";");
      return close(s, start);
    }
    if (at("yield") && !at("=", 1) && !at("(", 1) && !at(".", 1)) {
      next();
      auto s = add(NodeKind::Yield, "", start);
      attach(s, expression());
      expect(";");
      return close(s, start);
    }
    if (is_ident() && at(":", 1) && !at("::", 1)) {
      auto s = add(NodeKind::Labeled, ident(), start);
      expect(":");
      attach(s, statement());
      return close(s, start);
    }
    auto s = add(NodeKind::ExprStmt, "", start);
    attach(s, expression());
    expect(";");
    return close(s, start);
  }

  NodeId for_statement() {
    auto start = offset();
    expect("for");
    expect("(");
    // enhanced for: [mods] Type name ':'
    NodeId var = kNoNode;
    bool is_each = speculate([&] {
      auto vstart = offset();
      auto mods = modifiers();
      auto tstart = offset();
      auto t = type();
      auto name = ident();
      if (!at(":")) error("not enhanced for");
      var = add(NodeKind::ForVar, name, vstart);
      if (!mods.empty()) attach(var, add(NodeKind::Modifiers, mods, vstart));
      attach(var, close(add(NodeKind::TypeRef, t, tstart), tstart));
      close(var, vstart);
    });
    if (is_each) {
      expect(":");
      auto s = add(NodeKind::ForEach, "", start);
      attach(s, var);
      auto istart = offset();
      attach(s, wrap(NodeKind::Iterable, expression(), istart));
      expect(")");
      attach(s, statement());
      return close(s, start);
    }
    auto s = add(NodeKind::For, "", start);
    auto istart = offset();
    auto init = add(NodeKind::ForInit, "", istart);
    if (!at(";")) {
      NodeId local = kNoNode;
      if (speculate([&] { local = local_variable(offset(), false); })) {
        attach(init, local);
      } else {
        attach(init, expression());
        while (accept(",")) attach(init, expression());
      }
    }
    attach(s, close(init, istart));
    expect(";");
    if (!at(";")) {
      auto cstart = offset();
      attach(s, wrap(NodeKind::Condition, expression(), cstart));
    }
    expect(";");
    auto ustart = offset();
    auto update = add(NodeKind::ForUpdate, "", ustart);
    if (!at(")")) {
      attach(update, expression());
      while (accept(",")) attach(update, expression());
    }
    attach(s, close(update, ustart));
    expect(")");
    attach(s, statement());
    return close(s, start);
  }

  NodeId try_statement() {
    auto start = offset();
    expect("try");
    auto s = add(NodeKind::Try, "", start);
    if (at("(")) {
      auto rstart = offset();
      next();
      auto res = add(NodeKind::Resources, "", rstart);
      while (!at(")")) {
        NodeId local = kNoNode;
        if (speculate([&] { local = local_variable(offset(), false); }))
          attach(res, local);
        else
          attach(res, expression());
        if (!accept(";")) break;
      }
      expect(")");
      attach(s, close(res, rstart));
    }
    attach(s, block());
    while (at("catch")) {
      auto cstart = offset();
      next();
      expect("(");
      auto pstart = offset();
      modifiers();
      auto tstart = offset();
      std::string t = type();
      while (accept("|")) t += "|" + type();
      auto param = add(NodeKind::CatchParam, ident(), pstart);
      attach(param, close(add(NodeKind::TypeRef, t, tstart), tstart));
      expect(")");
      auto c = add(NodeKind::Catch, "", cstart);
      attach(c, close(param, pstart));
      attach(c, block());
      attach(s, close(c, cstart));
    }
    if (at("finally")) {
      auto fstart = offset();
      next();
      attach(s, wrap(NodeKind::Finally, block(), fstart));
    }
    return close(s, start);
  }

  // Used for both switch statements and switch expressions.
  NodeId switch_construct() {
    auto start = offset();
    expect("switch");
    auto s = add(NodeKind::Switch, "", start);
    expect("(");
    auto sstart = offset();
    attach(s, wrap(NodeKind::Selector, expression(), sstart));
    expect(")");
    expect("{");
    while (!accept("}")) {
      auto cstart = offset();
      NodeId c = kNoNode;
      if (accept("default")) {
        c = add(NodeKind::Case, "default", cstart);
      } else {
        expect("case");
        c = add(NodeKind::Case, "case", cstart);
        while (true) {
          if (at("default")) {
            next();
          } else {
            attach(c, case_label());
          }
          if (!accept(",")) break;
        }
      }
      if (accept("->")) {
        if (at("{"))
          attach(c, block());
        else if (at("throw"))
          attach(c, statement());
        else {
          auto estart = offset();
          auto e = add(NodeKind::ExprStmt, "", estart);
          attach(e, expression());
          expect(";");
          attach(c, close(e, estart));
        }
      } else {
        expect(":");
        while (!at("case") && !at("default") && !at("}")) {
          if (at_end()) error("unterminated switch");
          attach(c, block_statement());
        }
        // `default` used as a label only when followed by ':' or '->'
      }
      attach(s, close(c, cstart));
    }
    return close(s, start);
  }

  NodeId case_label() {
    // type pattern `case Foo f ->`
    NodeId pattern = kNoNode;
    auto start = offset();
    if (speculate([&] {
          auto t = type();
          auto name = ident();
          if (!(at("->") || at(":") || at(","))) error("not a pattern");
          pattern = close(add(NodeKind::InstanceOf, t + " " + name, start), start);
        }))
      return pattern;
    return ternary();
  }

  // -- expressions
  NodeId expression() {
    if (lambda_ahead()) return lambda();
    auto start = offset();
    auto lhs = ternary();
    auto op = assignment_operator();
    if (op.empty()) return lhs;
    auto a = add(NodeKind::Assign, op, start);
    attach(a, lhs);
    attach(a, expression());
    return close(a, start);
  }

  std::string assignment_operator() {
    static constexpr std::array ops = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="};
    for (const char* op : ops)
      if (at(op)) {
        next();
        return op;
      }
    // >>= and >>>= arrive as separate '>' tokens
    if (at(">") && at(">", 1) && adjacent(0)) {
      if (at("=", 2) && adjacent(1)) {
        pos_ += 3;
        return ">>=";
      }
      if (at(">", 2) && adjacent(1) && at("=", 3) && adjacent(2)) {
        pos_ += 4;
        return ">>>=";
      }
    }
    return {};
  }

  bool lambda_ahead() const {
    if (is_ident() && at("->", 1)) return true;
    if (!at("(")) return false;
    int depth = 0;
    for (std::size_t k = 0;; ++k) {
      const auto& t = peek(k);
      if (t.kind == Tok::End) return false;
      if (at("(", k)) ++depth;
      if (at(")", k) && --depth == 0) return at("->", k + 1);
    }
  }

  NodeId lambda() {
    auto start = offset();
    auto l = add(NodeKind::Lambda, "", start);
    if (is_ident()) {
      auto name = ident();
      attach(l, add(NodeKind::Parameters, name, start));
    } else {
      skip_balanced("(", ")");
      attach(l, add(NodeKind::Parameters, compact(start, prev_end()), start));
    }
    expect("->");
    attach(l, at("{") ? block() : expression());
    return close(l, start);
  }

  NodeId ternary() {
    auto start = offset();
    auto cond = binary(1);
    if (!accept("?")) return cond;
    auto t = add(NodeKind::Ternary, "", start);
    attach(t, cond);
    attach(t, lambda_ahead() ? lambda() : ternary());
    expect(":");
    attach(t, lambda_ahead() ? lambda() : ternary());
    return close(t, start);
  }

  // Binary operator at the cursor with its precedence, or 0.
  std::pair<std::string, int> binary_operator() const {
    const auto& t = peek();
    if (t.kind != Tok::Op && !(t.kind == Tok::Ident && t.text == "instanceof")) return {"", 0};
    auto s = t.text;
    if (s == "||") return {"||", 1};
    if (s == "&&") return {"&&", 2};
    if (s == "|") return {"|", 3};
    if (s == "^") return {"^", 4};
    if (s == "&") return {"&", 5};
    if (s == "==" || s == "!=") return {std::string(s), 6};
    if (s == "<" || s == "<=" || s == "instanceof") return {std::string(s), 7};
    if (s == ">") {
      if (at("=", 1) && adjacent(0) && !at("=", 2)) return {">=", 7};
      if (at(">", 1) && adjacent(0)) {
        if (at(">", 2) && adjacent(1)) {
          if (at("=", 3) && adjacent(2)) return {"", 0};  // >>>=
          return {">>>", 8};
        }
        if (at("=", 2) && adjacent(1)) return {"", 0};  // >>=
        return {">>", 8};
      }
      return {">", 7};
    }
    if (s == "<<") return {"<<", 8};
    if (s == "+" || s == "-") return {std::string(s), 9};
    if (s == "*" || s == "/" || s == "%") return {std::string(s), 10};
    return {"", 0};
  }

  void consume_operator(const std::string& op) {
    if (op == ">=") pos_ += 2;
    else if (op == ">>") pos_ += 2;
    else if (op == ">>>") pos_ += 3;
    else next();
  }

  NodeId binary(int min_prec) {
    auto start = offset();
    auto lhs = unary();
    while (true) {
      auto [op, prec] = binary_operator();
      if (prec == 0 || prec < min_prec) break;
      consume_operator(op);
      if (op == "instanceof") {
        accept("final");
        auto t = type();
        if (is_ident()) t += " " + ident();
        auto n = add(NodeKind::InstanceOf, t, start);
        attach(n, lhs);
        lhs = close(n, start);
        continue;
      }
      auto rhs = binary(prec + 1);
      auto n = add(NodeKind::Binary, op, start);
      attach(n, lhs);
      attach(n, rhs);
      lhs = close(n, start);
    }
    return lhs;
  }

  NodeId unary() {
    auto start = offset();
    for (const char* op : {"++", "--", "+", "-", "!", "~"}) {
      if (at(op)) {
        next();
        auto n = add(NodeKind::Unary, op, start);
        attach(n, unary());
        return close(n, start);
      }
    }
    if (at("(")) {
      NodeId cast = kNoNode;
      if (speculate([&] { cast = cast_expression(); })) return cast;
    }
    return postfix(primary());
  }

  NodeId cast_expression() {
    auto start = offset();
    expect("(");
    bool primitive = peek().kind == Tok::Ident && one_of(peek().text, kPrimitives);
    auto t = type();
    while (accept("&")) t += "&" + type();
    expect(")");
    if (!primitive) {
      const auto& n = peek();
      bool operand_start = (n.kind == Tok::Ident && (!is_keyword(n.text) || n.text == "this" || n.text == "new" ||
                                                     n.text == "super" || n.text == "true" || n.text == "false" ||
                                                     n.text == "null" || n.text == "switch")) ||
                           n.kind == Tok::Number || n.kind == Tok::String || n.kind == Tok::Char || at("(") ||
                           at("!") || at("~");
      if (!operand_start || n.text == "instanceof") error("not a cast");
    }
    auto c = add(NodeKind::Cast, t, start);
    attach(c, lambda_ahead() ? lambda() : unary());
    return close(c, start);
  }

  NodeId arguments() {
    auto start = offset();
    expect("(");
    auto args = add(NodeKind::Arguments, "", start);
    if (!at(")")) {
      attach(args, expression());
      while (accept(",")) attach(args, expression());
    }
    expect(")");
    return close(args, start);
  }

  NodeId array_initializer() {
    auto start = offset();
    expect("{");
    auto init = add(NodeKind::ArrayInit, "", start);
    while (!at("}")) {
      attach(init, at("{") ? array_initializer() : expression());
      if (!accept(",")) break;
    }
    expect("}");
    return close(init, start);
  }

  NodeId creator(std::uint32_t start) {
    expect("new");
    if (at("<")) type_arguments();
    auto tstart = offset();
    while (at("@")) annotation();
    if (peek().kind == Tok::Ident && one_of(peek().text, kPrimitives)) {
      next();
    } else {
      ident();
      if (at("<")) type_arguments();
      while (accept(".")) {
        while (at("@")) annotation();
        ident();
        if (at("<")) type_arguments();
      }
    }
    auto type_text = compact(tstart, prev_end());
    if (at("[")) {
      auto n = add(NodeKind::NewArray, "", start);
      std::string dims;
      while (at("[")) {
        next();
        if (accept("]")) {
          dims += "[]";
          continue;
        }
        attach(n, expression());
        expect("]");
        dims += "[]";
      }
      if (at("{")) attach(n, array_initializer());
      tree_.set_value(n, type_text + dims);
      return close(n, start);
    }
    auto n = add(NodeKind::New, type_text, start);
    attach(n, arguments());
    if (at("{")) attach(n, class_body(false, ""));
    return close(n, start);
  }

  NodeId primary() {
    auto start = offset();
    const auto& t = peek();
    if (t.kind == Tok::Number || t.kind == Tok::String || t.kind == Tok::Char) {
      next();
      return close(add(NodeKind::Literal, std::string(t.text), start), start);
    }
    if (at("true") || at("false") || at("null")) {
      return close(add(NodeKind::Literal, std::string(next().text), start), start);
    }
    if (at("(")) {
      next();
      auto e = expression();
      expect(")");
      return e;
    }
    if (at("new")) return creator(start);
    if (at("switch")) return switch_construct();
    if (at("this") || at("super")) {
      auto name = std::string(next().text);
      if (at("(")) {
        auto call = add(NodeKind::MethodCall, name, start);
        attach(call, arguments());
        return close(call, start);
      }
      return close(add(NodeKind::Name, name, start), start);
    }
    if (t.kind == Tok::Ident && one_of(t.text, kPrimitives)) {
      // int.class, int[].class, int[]::new
      auto ty = type();
      auto target = close(add(NodeKind::Name, ty, start), start);
      if (accept("::")) {
        auto ref = add(NodeKind::MethodRef, at("new") ? std::string(next().text) : ident(), start);
        attach(ref, target);
        return close(ref, start);
      }
      expect(".");
      expect("class");
      auto fa = add(NodeKind::FieldAccess, "class", start);
      attach(fa, target);
      return close(fa, start);
    }
    if (at("@")) {
      annotation();
      return primary();
    }
    auto name = ident();
    if (at("(")) {
      auto call = add(NodeKind::MethodCall, name, start);
      attach(call, arguments());
      return close(call, start);
    }
    // array type in expression position: String[].class / String[]::new
    if (at("[") && at("]", 1)) {
      while (at("[") && at("]", 1)) {
        next();
        next();
        name += "[]";
      }
    }
    return close(add(NodeKind::Name, name, start), start);
  }

  NodeId postfix(NodeId expr) {
    auto start = tree_.node(expr).span.begin;
    while (true) {
      if (at(".")) {
        next();
        if (at("<")) type_arguments();
        if (at("new")) {
          auto inner = creator(offset());
          attach(inner, expr);
          expr = close(inner, start);
          continue;
        }
        std::string name;
        if (at("this") || at("class") || at("super"))
          name = std::string(next().text);
        else
          name = ident();
        if (at("(")) {
          auto call = add(NodeKind::MethodCall, name, start);
          attach(call, expr);
          attach(call, arguments());
          expr = close(call, start);
        } else {
          auto fa = add(NodeKind::FieldAccess, name, start);
          attach(fa, expr);
          expr = close(fa, start);
        }
        continue;
      }
      if (at("[")) {
        next();
        auto aa = add(NodeKind::ArrayAccess, "", start);
        attach(aa, expr);
        attach(aa, expression());
        expect("]");
        expr = close(aa, start);
        continue;
      }
      if (at("++") || at("--")) {
        auto u = add(NodeKind::Unary, "post" + std::string(next().text), start);
        attach(u, expr);
        expr = close(u, start);
        continue;
      }
      if (at("::")) {
        next();
        auto ref = add(NodeKind::MethodRef, at("new") ? std::string(next().text) : ident(), start);
        attach(ref, expr);
        expr = close(ref, start);
        continue;
      }
      // generic type before method reference: List<String>::new
      if (at("<") && tree_.kind(expr) == NodeKind::Name) {
        auto saved = pos_;
        if (speculate([&] {
              type_arguments();
              if (!at("::")) error("not a method reference");
            }))
          continue;
        pos_ = saved;
      }
      return expr;
    }
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int speculating_ = 0;
  SyntaxTree tree_;
};

}  // namespace

SyntaxTree parse_java(std::string_view source, ParseMode mode) {
  auto tokens = lex(source);
  switch (mode) {
    case ParseMode::CompilationUnit:
      return Parser(source, tokens).compilation_unit();
    case ParseMode::ClassBody:
      return Parser(source, tokens).class_body_snippet();
    case ParseMode::Statements:
      return Parser(source, tokens).statements_snippet();
    case ParseMode::Auto:
      break;
  }
  try {
    return Parser(source, tokens).compilation_unit();
  } catch (const Error& first) {
    try {
      return Parser(source, tokens).class_body_snippet();
    } catch (const Error&) {
    }
    try {
      return Parser(source, tokens).statements_snippet();
    } catch (const Error&) {
    }
    throw first;
  }
}

}  // namespace fixrank
