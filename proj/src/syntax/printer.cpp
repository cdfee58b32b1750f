#include <sstream>

#include "cdl/syntax.hpp"

namespace cdl {

namespace {

class Printer {
 public:
  explicit Printer(RenderStyle style) : style_(style) {}

  void formula(std::ostream& out, const Formula& f) const {
    if (f.is_implies()) {
      Formula negated = Formula::bottom();
      if (sugared() && is_negation(f, &negated) && !negated.is_bottom()) {
        out << '~';
        operand(out, negated);
        return;
      }
      operand(out, f.lhs());
      out << " -> ";
      formula(out, f.rhs());
      return;
    }
    atom(out, f);
  }

  void term(std::ostream& out, const Term& t) const {
    switch (t.kind()) {
      case TermKind::cert:
        out << "c(";
        formula(out, t.certified());
        out << ')';
        return;
      case TermKind::app:
        term_operand(out, t.left(), t.left().is_sum());
        out << '.';
        term_operand(out, t.right(), !t.right().is_cert());
        return;
      case TermKind::sum:
        term(out, t.left());
        out << " + ";
        term_operand(out, t.right(), t.right().is_sum());
        return;
    }
  }

 private:
  bool sugared() const { return style_ == RenderStyle::sugared; }

  // Operand at the prefix-operator level: an implication needs parentheses
  // unless it prints as a negation.
  void operand(std::ostream& out, const Formula& f) const {
    bool paren = f.is_implies();
    if (paren && sugared()) {
      Formula negated = Formula::bottom();
      if (is_negation(f, &negated) && !negated.is_bottom()) paren = false;
    }
    if (paren) out << '(';
    formula(out, f);
    if (paren) out << ')';
  }

  void term_operand(std::ostream& out, const Term& t, bool paren) const {
    if (paren) out << '(';
    term(out, t);
    if (paren) out << ')';
  }

  void condition(std::ostream& out, const Formula& c) const {
    if (sugared() && is_top(c)) {
      out << ' ';
      return;
    }
    out << '[';
    formula(out, c);
    out << "] ";
  }

  void atom(std::ostream& out, const Formula& f) const {
    switch (f.kind()) {
      case FormulaKind::bottom:
        out << "false";
        return;
      case FormulaKind::letter:
        out << f.name();
        return;
      case FormulaKind::belief:
        out << 'B';
        condition(out, f.cond());
        operand(out, f.body());
        return;
      case FormulaKind::supports:
        if (sugared() && is_dotted(f)) {
          out << "Bd";
        } else {
          out << '{';
          term(out, f.term());
          out << "}:";
        }
        condition(out, f.cond());
        operand(out, f.body());
        return;
      case FormulaKind::implies:
        break;
    }
    out << '(';
    formula(out, f);
    out << ')';
  }

  RenderStyle style_;
};

}  // namespace

std::string render(const Formula& f, RenderStyle style) {
  std::ostringstream out;
  Printer(style).formula(out, f);
  return out.str();
}

std::string render(const Term& t, RenderStyle style) {
  std::ostringstream out;
  Printer(style).term(out, t);
  return out.str();
}

}  // namespace cdl
