#include <algorithm>
#include <cctype>
#include <optional>
#include <fstream>
#include <sstream>

#include "cdl/error.hpp"
#include "cdl/models.hpp"

namespace cdl {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ModelError("line " + std::to_string(line) + ": " + msg);
}

struct PendingAdm {
  int line;
  std::vector<std::string> worlds;
  std::string term;
  std::string formula;
};

// "{term} for formula", with braces allowed inside the term.
PendingAdm parse_adm_rhs(int line, std::string_view rhs) {
  std::string s = trim(rhs);
  if (s.empty() || s[0] != '{') fail(line, "expected '{term} for formula'");
  int depth = 0;
  std::size_t close = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string::npos) fail(line, "unbalanced braces in admissibility fact");
  std::string rest = trim(std::string_view(s).substr(close + 1));
  if (rest.rfind("for", 0) != 0 || (rest.size() > 3 && !std::isspace(static_cast<unsigned char>(rest[3]))))
    fail(line, "expected 'for' after the term");
  PendingAdm adm;
  adm.line = line;
  adm.term = s.substr(1, close - 1);
  adm.formula = trim(std::string_view(rest).substr(3));
  if (adm.formula.empty()) fail(line, "missing formula after 'for'");
  return adm;
}

}  // namespace

AnyModel load_model(std::string_view text) {
  std::optional<std::string> kind;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> le_pairs;
  std::vector<std::vector<std::vector<std::string>>> orders;
  bool have_le = false;
  bool have_order = false;
  bool autorefl = false;
  std::vector<std::pair<std::string, std::vector<std::string>>> vals;
  std::vector<PendingAdm> adms;
  std::optional<AdmDefault> adm_default;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.rfind("model", 0) == 0 && line.find(':') == std::string::npos) {
      auto toks = split_ws(line);
      if (toks.size() != 2 || (toks[1] != "plausibility" && toks[1] != "fitting"))
        fail(line_no, "expected 'model plausibility' or 'model fitting'");
      if (kind) fail(line_no, "duplicate model header");
      kind = toks[1];
      continue;
    }
    if (line == "autorefl") {
      autorefl = true;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) fail(line_no, "unrecognized line '" + line + "'");
    std::string head = trim(std::string_view(line).substr(0, colon));
    std::string rhs = line.substr(colon + 1);
    auto head_toks = split_ws(head);
    if (head_toks.empty()) fail(line_no, "missing keyword");
    const std::string& key = head_toks[0];

    if (key == "worlds" && head_toks.size() == 1) {
      if (!names.empty()) fail(line_no, "duplicate 'worlds' line");
      names = split_ws(rhs);
      if (names.empty()) fail(line_no, "empty world set");
      std::vector<std::string> sorted = names;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail(line_no, "duplicate world name");
    } else if (key == "le" && head_toks.size() == 1) {
      have_le = true;
      std::istringstream items(rhs);
      for (std::string item; std::getline(items, item, ',');) {
        item = trim(item);
        if (item.empty()) continue;
        auto op = item.find("<=");
        if (op == std::string::npos) fail(line_no, "expected 'x<=y' but found '" + item + "'");
        le_pairs.emplace_back(trim(std::string_view(item).substr(0, op)), trim(std::string_view(item).substr(op + 2)));
      }
    } else if (key == "order" && head_toks.size() == 1) {
      have_order = true;
      std::string spaced;
      for (char c : rhs) {
        if (c == '<' || c == '=') {
          spaced += ' ';
          spaced += c;
          spaced += ' ';
        } else {
          spaced += c;
        }
      }
      orders.emplace_back();
      auto& order_ranks = orders.back();
      order_ranks.emplace_back();
      bool expect_name = true;
      for (const std::string& tok : split_ws(spaced)) {
        if (tok == "<" || tok == "=") {
          if (expect_name) fail(line_no, "misplaced '" + tok + "' in order");
          if (tok == "<") order_ranks.emplace_back();
          expect_name = true;
        } else {
          if (!expect_name) fail(line_no, "missing '<' or '=' before '" + tok + "'");
          order_ranks.back().push_back(tok);
          expect_name = false;
        }
      }
      if (expect_name) fail(line_no, "order ends with an operator");
    } else if (key == "val" && head_toks.size() == 2) {
      vals.emplace_back(head_toks[1], split_ws(rhs));
    } else if (key == "adm" && head_toks.size() >= 2) {
      PendingAdm adm = parse_adm_rhs(line_no, rhs);
      adm.worlds.assign(head_toks.begin() + 1, head_toks.end());
      adms.push_back(std::move(adm));
    } else if (key == "adm-default" && head_toks.size() == 1) {
      std::string v = trim(rhs);
      if (v == "empty") {
        adm_default = AdmDefault::empty;
      } else if (v == "full") {
        adm_default = AdmDefault::full;
      } else {
        fail(line_no, "adm-default must be 'empty' or 'full'");
      }
    } else {
      fail(line_no, "unrecognized line '" + line + "'");
    }
  }

  if (!kind) throw ModelError("missing 'model plausibility' or 'model fitting' header");
  if (names.empty()) throw ModelError("empty world set");
  if (have_le && have_order) throw ModelError("'le:' and 'order:' are mutually exclusive");
  if (*kind == "plausibility" && (!adms.empty() || adm_default))
    throw ModelError("admissibility lines are only allowed in fitting models");

  auto index = [&](const std::string& name) -> World {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ModelError("unknown world '" + name + "'");
    return static_cast<World>(it - names.begin());
  };

  std::map<std::string, WorldSet> valuation;
  for (const auto& [w, letters] : vals) {
    World i = index(w);
    for (const std::string& p : letters) {
      if (p.empty() || !std::islower(static_cast<unsigned char>(p[0])))
        throw ModelError("invalid letter '" + p + "' in valuation of " + w);
      valuation[p].insert(i);
    }
  }

  std::optional<PlausibilityModel> base;
  if (have_order) {
    // Each 'order:' line is one connected component; '<' separates ranks.
    std::vector<int> component(names.size(), -1);
    std::vector<int> rank(names.size(), 0);
    for (std::size_t c = 0; c < orders.size(); ++c) {
      for (std::size_t r = 0; r < orders[c].size(); ++r) {
        for (const std::string& name : orders[c][r]) {
          World i = index(name);
          if (component[i] >= 0) throw ModelError("world '" + name + "' appears twice in order");
          component[i] = static_cast<int>(c);
          rank[i] = static_cast<int>(r);
        }
      }
    }
    for (World i = 0; i < names.size(); ++i) {
      if (component[i] < 0) throw ModelError("world '" + names[i] + "' missing from order");
    }
    base = PlausibilityModel::from_ranks(names, component, rank, valuation);
  } else {
    std::vector<std::pair<World, World>> pairs;
    for (const auto& [x, y] : le_pairs) pairs.emplace_back(index(x), index(y));
    if (autorefl) {
      for (World i = 0; i < names.size(); ++i) pairs.emplace_back(i, i);
    }
    base = PlausibilityModel::from_relation(names, pairs, valuation);
  }

  if (*kind == "plausibility") return AnyModel(std::move(*base));

  std::vector<AdmFact> facts;
  for (const PendingAdm& adm : adms) {
    WorldSet ws;
    for (const std::string& w : adm.worlds) ws.insert(index(w));
    Term t = parse_term(adm.term);
    Formula f = parse_formula(adm.formula, Language::jcdl);
    facts.push_back({t, f, ws});
  }
  return AnyModel(FittingModel(std::move(*base), std::move(facts), adm_default.value_or(AdmDefault::empty)));
}

AnyModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

namespace {

std::string render_base(const PlausibilityModel& m, const char* kind) {
  std::ostringstream out;
  out << "model " << kind << "\n";
  out << "worlds:";
  for (const std::string& n : m.names()) out << ' ' << n;
  out << "\n";
  ModelClass cls = classify_model(m);
  if (cls.locally_total) {
    // One order line per component, worlds grouped by rank.
    for (WorldSet comp : m.components()) {
      std::vector<World> rest(comp.begin(), comp.end());
      out << "order:";
      bool first_rank = true;
      while (!rest.empty()) {
        WorldSet left;
        for (World w : rest) left.insert(w);
        WorldSet layer = m.min_worlds(left);
        out << (first_rank ? " " : " < ");
        first_rank = false;
        bool first = true;
        for (World w : layer) {
          out << (first ? "" : " = ") << m.name(w);
          first = false;
        }
        std::erase_if(rest, [&](World w) { return layer.contains(w); });
      }
      out << "\n";
    }
  } else {
    out << "le:";
    bool first = true;
    for (World y = 0; y < m.size(); ++y) {
      for (World x : m.down(y)) {
        out << (first ? " " : ", ") << m.name(x) << "<=" << m.name(y);
        first = false;
      }
    }
    out << "\n";
  }
  for (World w = 0; w < m.size(); ++w) {
    out << "val " << m.name(w) << ":";
    for (const std::string& p : m.true_letters(w)) out << ' ' << p;
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::string render_model(const PlausibilityModel& m) { return render_base(m, "plausibility"); }

std::string render_model(const FittingModel& m) {
  std::ostringstream out;
  out << render_base(m.base(), "fitting");
  for (const AdmFact& f : m.facts()) {
    out << "adm";
    for (World w : f.worlds) out << ' ' << m.base().name(w);
    out << ": {" << render(f.term) << "} for " << render(f.formula) << "\n";
  }
  out << "adm-default: " << (m.mode() == AdmDefault::full ? "full" : "empty") << "\n";
  return out.str();
}

}  // namespace cdl
