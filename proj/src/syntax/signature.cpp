#include <deque>
#include <unordered_set>

#include "cdl/syntax.hpp"

namespace cdl {

std::set<SupportPair> signature_closure(const std::vector<Formula>& fs) {
  std::vector<Formula> subs;
  std::unordered_set<Formula> seen;
  for (const Formula& f : fs) {
    for (const Formula& g : subformulas(f)) {
      if (seen.insert(g).second) subs.push_back(g);
    }
  }

  std::set<SupportPair> out;
  std::deque<SupportPair> work;
  auto add = [&](const Term& t, const Formula& phi) {
    if (out.emplace(t, phi).second) work.emplace_back(t, phi);
  };
  for (const Formula& g : subs) {
    if (!g.is_supports()) continue;
    add(g.term(), g.body());
    add(Term::cert(g.body()), g.body());
  }

  while (!work.empty()) {
    auto [t, phi] = work.front();
    work.pop_front();
    if (t.is_sum()) {
      add(t.left(), phi);
      add(t.right(), phi);
    } else if (t.is_app()) {
      std::vector<Formula> antecedents;
      for (const Formula& g : subs) {
        if (g.is_implies() && g.rhs() == phi) antecedents.push_back(g.lhs());
      }
      Term fun = t.left();
      if (fun.is_cert() && fun.certified().is_implies() && fun.certified().rhs() == phi)
        antecedents.push_back(fun.certified().lhs());
      for (const Formula& a : antecedents) {
        add(fun, Formula::implies(a, phi));
        add(t.right(), a);
      }
    }
  }
  return out;
}

std::set<SupportPair> signature_closure(const Formula& f) { return signature_closure(std::vector<Formula>{f}); }

}  // namespace cdl
