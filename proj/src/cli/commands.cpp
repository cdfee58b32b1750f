#include "cdl/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "cdl/agm.hpp"
#include "cdl/error.hpp"
#include "cdl/models.hpp"
#include "cdl/proofs.hpp"
#include "cdl/search.hpp"
#include "cdl/semantics.hpp"
#include "cdl/syntax.hpp"
#include "cdl/transforms.hpp"

namespace cdl::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

// Parses as CDL when possible, otherwise as JCDL; `lang` forces one.
Formula read_formula(const std::string& text, const std::string& lang) {
  if (lang == "cdl") return parse_formula(text, Language::cdl);
  if (lang == "jcdl") return parse_formula(text, Language::jcdl);
  try {
    return parse_formula(text, Language::cdl);
  } catch (const ParseError&) {
    return parse_formula(text, Language::jcdl);
  }
}

std::vector<std::string> split_letters(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (!parse_formula(item, Language::cdl).is_letter()) throw Error("'" + item + "' is not a letter");
    out.push_back(item);
  }
  return out;
}

std::string world_list(const PlausibilityModel& m, WorldSet s) {
  std::string out = "{";
  for (World w : s) {
    if (out.size() > 1) out += ", ";
    out += m.name(w);
  }
  return out + "}";
}

void write_derivation(const proofs::Derivation& d, const std::string& path, std::ostream& out) {
  std::string text = proofs::render_derivation(d);
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
}

const PlausibilityModel& base_of(const AnyModel& m) {
  if (const auto* f = std::get_if<FittingModel>(&m)) return f->base();
  return std::get<PlausibilityModel>(m);
}

WorldSet extension_in(const AnyModel& m, const Formula& f, Clause clause) {
  return std::visit([&](const auto& model) { return Evaluator(model, clause).extension(f); }, m);
}

Language language_for(const AnyModel& m) {
  return std::holds_alternative<FittingModel>(m) ? Language::jcdl : Language::cdl;
}

struct Options {
  bool porcelain = false;

  std::string formula;
  std::string lang;
  std::string style = "primitive";

  std::string model_file;
  std::string world;
  std::string clause = "general";

  std::string proof_file;
  std::string output;
  bool project = false;
  bool realize = false;
  std::string cond;

  std::string letters;
  std::string believe;
  std::string by;
  std::string strategy = "two_layer";
  std::size_t letter_count = 2;

  std::size_t worlds = 3;
  std::string model_class = "wo";

  std::string macro;
  std::vector<std::string> macro_args;
};

class Runner {
 public:
  Runner(Options& o, std::ostream& out) : o_(o), out_(out) {}

  int parse() {
    Formula f = read_formula(o_.formula, o_.lang);
    RenderStyle style = o_.style == "sugared" ? RenderStyle::sugared : RenderStyle::primitive;
    out_ << render(f, style) << "\n";
    return kOk;
  }

  int eval() {
    AnyModel m = load_model_file(o_.model_file);
    const PlausibilityModel& base = base_of(m);
    Formula f = parse_formula(o_.formula, language_for(m));
    WorldSet ext = extension_in(m, f, o_.clause == "min" ? Clause::min : Clause::general);
    if (o_.world.empty()) {
      out_ << (o_.porcelain ? "" : "extension: ") << world_list(base, ext) << "\n";
      return kOk;
    }
    World w = base.index_of(o_.world);
    bool holds = ext.contains(w);
    out_ << (holds ? "true" : "false") << "\n";
    return holds ? kOk : kNo;
  }

  int valid() {
    AnyModel m = load_model_file(o_.model_file);
    const PlausibilityModel& base = base_of(m);
    Formula f = parse_formula(o_.formula, language_for(m));
    WorldSet failing = base.all() - extension_in(m, f, Clause::general);
    if (failing.empty()) {
      out_ << "valid\n";
      return kOk;
    }
    out_ << (o_.porcelain ? "invalid " : "not valid; fails at ") << world_list(base, failing) << "\n";
    return kNo;
  }

  int classify() {
    AnyModel m = load_model_file(o_.model_file);
    ModelClass c = classify_model(base_of(m));
    const std::pair<const char*, bool> rows[] = {
        {"finite", c.finite},
        {"well_founded", c.well_founded},
        {"smooth", c.smooth},
        {"total", c.total},
        {"locally_total", c.locally_total},
        {"connected", c.connected},
        {"well_ordered", c.well_ordered},
        {"locally_well_ordered", c.locally_well_ordered},
    };
    if (o_.porcelain) {
      bool first = true;
      for (const auto& [name, value] : rows) {
        if (!value) continue;
        out_ << (first ? "" : " ") << name;
        first = false;
      }
      out_ << "\n";
      return kOk;
    }
    for (const auto& [name, value] : rows) out_ << name << ": " << (value ? "yes" : "no") << "\n";
    return kOk;
  }

  int check_proof() {
    proofs::Derivation d = proofs::load_derivation_file(o_.proof_file);
    proofs::CheckReport r = proofs::check_derivation(d);
    if (r.ok) {
      const std::size_t n = d.lines.size();
      if (o_.porcelain)
        out_ << "ok " << n << "\n";
      else
        out_ << "OK (" << n << (n == 1 ? " line)" : " lines)") << "\n";
      return kOk;
    }
    if (o_.porcelain)
      out_ << "fail " << r.first_bad_line << " " << r.reason << "\n";
    else
      out_ << "FAIL at line " << r.first_bad_line << ": " << r.reason << "\n";
    return kNo;
  }

  int translate() {
    if (o_.project == o_.realize) throw CLI::ValidationError("translate", "give exactly one of --project and --realize");
    proofs::Derivation d = proofs::load_derivation_file(o_.proof_file);
    proofs::Derivation t = o_.project ? transforms::forget_derivation(d) : transforms::realize_derivation(d);
    write_derivation(t, o_.output, out_);
    return kOk;
  }

  int eliminate() {
    proofs::Derivation d = proofs::load_derivation_file(o_.proof_file);
    proofs::Derivation e = transforms::eliminate_troublesome(d);
    write_derivation(e, o_.output, out_);
    return kOk;
  }

  int internalize() {
    proofs::Derivation d = proofs::load_derivation_file(o_.proof_file);
    Formula cond = parse_formula(o_.cond, Language::jcdl);
    transforms::Internalized in = transforms::internalize(d, cond);
    out_ << (o_.porcelain ? "" : "term: ") << render(in.term) << "\n";
    if (o_.output.empty() && o_.porcelain) return kOk;
    write_derivation(in.derivation, o_.output, out_);
    return kOk;
  }

  int revise() {
    std::vector<std::string> letters = split_letters(o_.letters);
    agm::Strategy s = agm::parse_strategy(o_.strategy);
    agm::BeliefState t = agm::consequence_close({parse_formula(o_.believe, Language::cdl)}, letters);
    agm::Revision rev = agm::grove_revision(s);
    agm::BeliefState r = rev(t, parse_formula(o_.by, Language::cdl));
    out_ << agm::canonical_dnf(r.models, letters) << "\n";
    return kOk;
  }

  int check_agm() {
    static const char* const names[] = {"p", "q", "r", "s", "t", "u"};
    if (o_.letter_count < 1 || o_.letter_count > 3) throw CLI::ValidationError("--letters", "must be between 1 and 3");
    std::vector<std::string> letters(names, names + o_.letter_count);
    agm::Revision rev =
        o_.strategy == "broken" ? agm::expansion_revision() : agm::grove_revision(agm::parse_strategy(o_.strategy));
    bool all = true;
    for (const agm::PostulateResult& r : agm::check_postulates(rev, letters)) {
      all = all && r.pass;
      out_ << r.name << ": " << (r.pass ? "pass" : "FAIL");
      if (!r.pass) out_ << (o_.porcelain ? " " : " (witness: ") << r.witness << (o_.porcelain ? "" : ")");
      out_ << "\n";
    }
    return all ? kOk : kNo;
  }

  int falsify() {
    Formula f = read_formula(o_.formula, o_.lang);
    search::SearchBounds b;
    b.max_worlds = o_.worlds;
    b.letters = o_.letters.empty() ? search::letters_for({f}) : split_letters(o_.letters);
    if (o_.model_class == "lwo")
      b.shape = search::Shape::locally_well_ordered;
    else if (o_.model_class != "wo")
      throw CLI::ValidationError("--class", "expected lwo or wo");
    search::SearchResult r = search::find_countermodel(f, b);
    if (!r.countermodel) {
      out_ << (o_.porcelain ? "none" : "no countermodel within bounds") << "\n";
      return kOk;
    }
    const AnyModel& m = r.countermodel->model;
    const std::string at = base_of(m).name(r.countermodel->world);
    if (o_.porcelain) {
      out_ << "countermodel " << at << "\n";
      return kNo;
    }
    out_ << "# countermodel at " << at << "\n";
    out_ << std::visit([](const auto& model) { return render_model(model); }, m);
    return kNo;
  }

  int derive() {
    proofs::MacroArgs args;
    const bool jcdl = !o_.macro.empty() && o_.macro[0] == 'e';
    for (const std::string& a : o_.macro_args) {
      auto eq = a.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--arg", "expected name=formula, got '" + a + "'");
      args.formulas.emplace(a.substr(0, eq),
                            parse_formula(a.substr(eq + 1), jcdl ? Language::jcdl : Language::cdl));
    }
    write_derivation(proofs::derive_macro(o_.macro, args), o_.output, out_);
    return kOk;
  }

 private:
  Options& o_;
  std::ostream& out_;
};

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Conditional doxastic logic toolkit", "cdl"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--porcelain", o.porcelain, "One stable machine-readable line per result");

  auto* parse = app.add_subcommand("parse", "Parse a formula and print it");
  parse->add_option("formula", o.formula, "Formula text")->required();
  parse->add_option("--lang", o.lang, "cdl or jcdl (default: try cdl, then jcdl)")
      ->check(CLI::IsMember({"cdl", "jcdl"}));
  parse->add_option("--style", o.style, "primitive or sugared")->check(CLI::IsMember({"primitive", "sugared"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a formula on a model file");
  eval->add_option("model", o.model_file, "Model file")->required();
  eval->add_option("formula", o.formula, "Formula text")->required();
  eval->add_option("--world", o.world, "Print truth at this world instead of the extension");
  eval->add_option("--clause", o.clause, "general or min")->check(CLI::IsMember({"general", "min"}));

  auto* valid = app.add_subcommand("valid", "Check truth at every world of a model file");
  valid->add_option("model", o.model_file, "Model file")->required();
  valid->add_option("formula", o.formula, "Formula text")->required();

  auto* classify = app.add_subcommand("classify", "Order-theoretic properties of a model file");
  classify->add_option("model", o.model_file, "Model file")->required();

  auto* check = app.add_subcommand("check-proof", "Check a derivation file");
  check->add_option("file", o.proof_file, "Derivation file")->required();

  auto* translate = app.add_subcommand("translate", "Project a JCDL derivation or realize a CDL derivation");
  translate->add_option("file", o.proof_file, "Derivation file")->required();
  translate->add_flag("--project", o.project, "JCDL to CDL");
  translate->add_flag("--realize", o.realize, "CDL to JCDL");
  translate->add_option("-o,--output", o.output, "Write the derivation here");

  auto* eliminate = app.add_subcommand("eliminate", "Remove troublesome necessitations");
  eliminate->add_option("file", o.proof_file, "JCDL derivation file")->required();
  eliminate->add_option("-o,--output", o.output, "Write the derivation here");

  auto* internalize = app.add_subcommand("internalize", "Logical term for a closed JCDL derivation");
  internalize->add_option("file", o.proof_file, "JCDL derivation file")->required();
  internalize->add_option("--cond", o.cond, "Condition formula")->required();
  internalize->add_option("-o,--output", o.output, "Write the derivation here");

  auto* revise = app.add_subcommand("revise", "Revise a belief set through a Grove system");
  revise->add_option("--letters", o.letters, "Comma-separated letters")->required();
  revise->add_option("--believe", o.believe, "Formula generating the belief set")->required();
  revise->add_option("--by", o.by, "Revising formula")->required();
  revise->add_option("--strategy", o.strategy, "two_layer or hamming")
      ->check(CLI::IsMember({"two_layer", "hamming"}));

  auto* check_agm = app.add_subcommand("check-agm", "Check the eight AGM postulates exhaustively");
  check_agm->add_option("--letters", o.letter_count, "Number of letters (1-3)");
  check_agm->add_option("--strategy", o.strategy, "two_layer, hamming or broken")
      ->check(CLI::IsMember({"two_layer", "hamming", "broken"}));

  auto* falsify = app.add_subcommand("falsify", "Search for a countermodel");
  falsify->add_option("formula", o.formula, "Formula text")->required();
  falsify->add_option("--worlds", o.worlds, "Maximum number of worlds")->check(CLI::Range(1, 8));
  falsify->add_option("--letters", o.letters, "Comma-separated letters (default: those of the formula)");
  falsify->add_option("--class", o.model_class, "wo or lwo")->check(CLI::IsMember({"wo", "lwo"}));
  falsify->add_option("--lang", o.lang, "cdl or jcdl")->check(CLI::IsMember({"cdl", "jcdl"}));

  auto* derive = app.add_subcommand("derive", "Emit the derivation of a derived theorem or rule");
  derive->add_option("macro", o.macro, "Macro name, e.g. Cut or eCut")->required();
  derive->add_option("--arg", o.macro_args, "name=formula, repeatable");
  derive->add_option("-o,--output", o.output, "Write the derivation here");

  for (const std::string& a : args) {
    if (a.empty() || a[0] == '-') continue;
    if (app.get_subcommand_no_throw(a) == nullptr) {
      err << "error: unknown command '" << a << "'\n" << app.help();
      return kUsage;
    }
    break;
  }

  std::vector<std::string> argv_storage{"cdl"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  Runner run(o, out);
  try {
    if (*parse) return run.parse();
    if (*eval) return run.eval();
    if (*valid) return run.valid();
    if (*classify) return run.classify();
    if (*check) return run.check_proof();
    if (*translate) return run.translate();
    if (*eliminate) return run.eliminate();
    if (*internalize) return run.internalize();
    if (*revise) return run.revise();
    if (*check_agm) return run.check_agm();
    if (*falsify) return run.falsify();
    if (*derive) return run.derive();
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n" << app.get_subcommands().front()->help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace cdl::cli
