#include <cctype>
#include <optional>

#include "cdl/error.hpp"
#include "cdl/syntax.hpp"

namespace cdl {

namespace {

enum class Tok {
  end, ident, word,  // word: any identifier starting with an upper-case letter
  lparen, rparen, lbrack, rbrack, lbrace, rbrace,
  colon, tilde, amp, bar, arrow, iff, dot, plus,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = std::islower(static_cast<unsigned char>(c)) ? Tok::ident : Tok::word;
      if (t.kind == Tok::ident) {
        for (char ch : t.text)
          if (std::isupper(static_cast<unsigned char>(ch))) throw ParseError("invalid identifier '" + t.text + "'", start);
      }
      return t;
    }
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      ++pos_;
      return t;
    };
    switch (c) {
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case '[': return single(Tok::lbrack);
      case ']': return single(Tok::rbrack);
      case '{': return single(Tok::lbrace);
      case '}': return single(Tok::rbrace);
      case ':': return single(Tok::colon);
      case '~': return single(Tok::tilde);
      case '&': return single(Tok::amp);
      case '|': return single(Tok::bar);
      case '.': return single(Tok::dot);
      case '+': return single(Tok::plus);
      default: break;
    }
    if (src_.substr(pos_, 2) == "->") {
      pos_ += 2;
      t.kind = Tok::arrow;
      t.text = "->";
      return t;
    }
    if (src_.substr(pos_, 3) == "<->") {
      pos_ += 3;
      t.kind = Tok::iff;
      t.text = "<->";
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, Language lang) : lexer_(src), lang_(lang) { advance(); }

  SurfaceFormula formula_eof() {
    SurfaceFormula f = formula();
    expect(Tok::end, "end of input");
    return f;
  }

  SurfaceTerm term_eof() {
    SurfaceTerm t = term();
    expect(Tok::end, "end of input");
    return t;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur_.pos); }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) {
      fail(std::string("expected ") + what + (cur_.kind == Tok::end ? " but found end of input"
                                                                    : " but found '" + cur_.text + "'"));
    }
    advance();
  }

  static SurfaceFormula node(SurfaceKind k, std::vector<SurfaceFormula> args = {}) {
    SurfaceFormula f;
    f.kind = k;
    f.args = std::move(args);
    return f;
  }

  SurfaceFormula formula() { return iff(); }

  SurfaceFormula iff() {
    SurfaceFormula lhs = impl();
    if (cur_.kind == Tok::iff) {
      advance();
      SurfaceFormula rhs = iff();
      return node(SurfaceKind::iff, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  SurfaceFormula impl() {
    SurfaceFormula lhs = disj();
    if (cur_.kind == Tok::arrow) {
      advance();
      SurfaceFormula rhs = impl();
      return node(SurfaceKind::implies, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  SurfaceFormula disj() {
    SurfaceFormula lhs = conj();
    while (cur_.kind == Tok::bar) {
      advance();
      SurfaceFormula rhs = conj();
      lhs = node(SurfaceKind::disj, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  SurfaceFormula conj() {
    SurfaceFormula lhs = neg();
    while (cur_.kind == Tok::amp) {
      advance();
      SurfaceFormula rhs = neg();
      lhs = node(SurfaceKind::conj, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  SurfaceFormula neg() {
    if (cur_.kind == Tok::tilde) {
      advance();
      return node(SurfaceKind::neg, {neg()});
    }
    return atom();
  }

  std::optional<SurfaceFormula> cond() {
    if (cur_.kind != Tok::lbrack) return std::nullopt;
    advance();
    SurfaceFormula c = formula();
    expect(Tok::rbrack, "']'");
    return c;
  }

  SurfaceFormula modal(SurfaceKind k) {
    std::optional<SurfaceFormula> c = cond();
    SurfaceFormula body = neg();
    SurfaceFormula f = node(k);
    if (c) f.args.push_back(std::move(*c));
    f.args.push_back(std::move(body));
    return f;
  }

  void require_jcdl(const std::string& what) const {
    if (lang_ != Language::jcdl) fail(what + " is JCDL syntax and not allowed in CDL");
  }

  void require_cdl(const std::string& what) const {
    if (lang_ != Language::cdl) fail(what + " is CDL syntax and not allowed in JCDL");
  }

  SurfaceFormula atom() {
    switch (cur_.kind) {
      case Tok::ident: {
        std::string name = cur_.text;
        advance();
        if (name == "false") return node(SurfaceKind::bottom);
        if (name == "true") return node(SurfaceKind::top);
        SurfaceFormula f = node(SurfaceKind::letter);
        f.name = std::move(name);
        return f;
      }
      case Tok::word: {
        std::string word = cur_.text;
        if (word == "B") {
          require_cdl("conditional belief 'B'");
          advance();
          return modal(SurfaceKind::belief);
        }
        if (word == "K") {
          require_cdl("knowledge 'K'");
          advance();
          return modal_no_cond(SurfaceKind::know);
        }
        if (word == "Bd") {
          require_jcdl("certified belief 'Bd'");
          advance();
          return modal(SurfaceKind::dotted);
        }
        fail("unknown abbreviation '" + word + "'");
      }
      case Tok::lbrace: {
        require_jcdl("term support '{t}:'");
        advance();
        SurfaceTerm t = term();
        expect(Tok::rbrace, "'}'");
        if (cur_.kind != Tok::colon) fail("expected ':' after term");
        advance();
        SurfaceFormula f = modal(SurfaceKind::supports);
        f.term.push_back(std::move(t));
        return f;
      }
      case Tok::colon:
        if (lang_ == Language::cdl) fail("term syntax ':' is not allowed in CDL");
        fail("unexpected ':'");
      case Tok::lparen: {
        advance();
        SurfaceFormula f = formula();
        expect(Tok::rparen, "')'");
        return f;
      }
      case Tok::end:
        fail("unexpected end of input");
      default:
        fail("unexpected '" + cur_.text + "'");
    }
  }

  SurfaceFormula modal_no_cond(SurfaceKind k) {
    if (cur_.kind == Tok::lbrack) fail("'K' takes no condition");
    return node(k, {neg()});
  }

  SurfaceTerm term() {
    SurfaceTerm lhs = app();
    while (cur_.kind == Tok::plus) {
      advance();
      SurfaceTerm rhs = app();
      SurfaceTerm s;
      s.kind = TermKind::sum;
      s.operands = {std::move(lhs), std::move(rhs)};
      lhs = std::move(s);
    }
    return lhs;
  }

  SurfaceTerm app() {
    SurfaceTerm lhs = tatom();
    while (cur_.kind == Tok::dot) {
      advance();
      SurfaceTerm rhs = tatom();
      SurfaceTerm s;
      s.kind = TermKind::app;
      s.operands = {std::move(lhs), std::move(rhs)};
      lhs = std::move(s);
    }
    return lhs;
  }

  SurfaceTerm tatom() {
    if (cur_.kind == Tok::ident && cur_.text == "c") {
      advance();
      expect(Tok::lparen, "'(' after certificate 'c'");
      SurfaceTerm t;
      t.kind = TermKind::cert;
      t.certified.push_back(formula());
      expect(Tok::rparen, "')'");
      return t;
    }
    if (cur_.kind == Tok::lparen) {
      advance();
      SurfaceTerm t = term();
      expect(Tok::rparen, "')'");
      return t;
    }
    fail("expected a term: c(formula) or (term)");
  }

  Lexer lexer_;
  Language lang_;
  Token cur_;
};

}  // namespace

SurfaceFormula parse_surface(std::string_view text, Language lang) { return Parser(text, lang).formula_eof(); }

Formula parse_formula(std::string_view text, Language lang) {
  return expand_abbreviations(parse_surface(text, lang));
}

Term parse_term(std::string_view text) { return expand_abbreviations(Parser(text, Language::jcdl).term_eof()); }

Term expand_abbreviations(const SurfaceTerm& t) {
  switch (t.kind) {
    case TermKind::cert:
      return Term::cert(expand_abbreviations(t.certified.at(0)));
    case TermKind::app:
      return Term::app(expand_abbreviations(t.operands.at(0)), expand_abbreviations(t.operands.at(1)));
    case TermKind::sum:
      return Term::sum(expand_abbreviations(t.operands.at(0)), expand_abbreviations(t.operands.at(1)));
  }
  throw Error("invalid surface term");
}

Formula expand_abbreviations(const SurfaceFormula& f) {
  auto arg = [&](std::size_t i) { return expand_abbreviations(f.args.at(i)); };
  // Condition and body of a modal node whose condition may be omitted.
  auto cond_body = [&]() -> std::pair<Formula, Formula> {
    if (f.args.size() == 1) return {top(), arg(0)};
    return {arg(0), arg(1)};
  };
  switch (f.kind) {
    case SurfaceKind::bottom:
      return Formula::bottom();
    case SurfaceKind::top:
      return top();
    case SurfaceKind::letter:
      return Formula::letter(f.name);
    case SurfaceKind::neg:
      return neg(arg(0));
    case SurfaceKind::conj:
      return conj(arg(0), arg(1));
    case SurfaceKind::disj:
      return disj(arg(0), arg(1));
    case SurfaceKind::implies:
      return Formula::implies(arg(0), arg(1));
    case SurfaceKind::iff:
      return iff(arg(0), arg(1));
    case SurfaceKind::belief: {
      auto [c, b] = cond_body();
      return Formula::belief(c, b);
    }
    case SurfaceKind::know:
      return know(arg(0));
    case SurfaceKind::dotted: {
      auto [c, b] = cond_body();
      return dotted(c, b);
    }
    case SurfaceKind::supports: {
      auto [c, b] = cond_body();
      return Formula::supports(expand_abbreviations(f.term.at(0)), c, b);
    }
  }
  throw Error("invalid surface formula");
}

namespace {

SurfaceTerm to_surface_term(const Term& t) {
  SurfaceTerm s;
  s.kind = t.kind();
  if (t.is_cert()) {
    s.certified.push_back(to_surface(t.certified()));
  } else {
    s.operands.push_back(to_surface_term(t.left()));
    s.operands.push_back(to_surface_term(t.right()));
  }
  return s;
}

}  // namespace

SurfaceFormula to_surface(const Formula& f) {
  SurfaceFormula s;
  switch (f.kind()) {
    case FormulaKind::bottom:
      s.kind = SurfaceKind::bottom;
      break;
    case FormulaKind::letter:
      s.kind = SurfaceKind::letter;
      s.name = f.name();
      break;
    case FormulaKind::implies:
      s.kind = SurfaceKind::implies;
      s.args = {to_surface(f.lhs()), to_surface(f.rhs())};
      break;
    case FormulaKind::belief:
      s.kind = SurfaceKind::belief;
      s.args = {to_surface(f.cond()), to_surface(f.body())};
      break;
    case FormulaKind::supports:
      s.kind = SurfaceKind::supports;
      s.args = {to_surface(f.cond()), to_surface(f.body())};
      s.term.push_back(to_surface_term(f.term()));
      break;
  }
  return s;
}

}  // namespace cdl
