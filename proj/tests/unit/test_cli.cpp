#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cdl/cli.hpp"
#include "cdl/proofs.hpp"
#include "support.hpp"

using cdl::testing::data_path;
using cdl::testing::Rng;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cdl::cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cdl_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Splits a command line on spaces, honouring double quotes.
std::vector<std::string> split_command(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool have = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      have = true;
    } else if (c == ' ' && !quoted) {
      if (have) out.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur += c;
      have = true;
    }
  }
  if (have) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("check-proof") {
  Run ok = run({"check-proof", data_path("succ.drv")});
  CHECK(ok.code == 0);
  CHECK(ok.out == "OK (1 line)\n");
  CHECK(run({"check-proof", data_path("mn.drv")}).out == "OK (2 lines)\n");
  Run bad = run({"check-proof", data_path("bad_succ.drv")});
  CHECK(bad.code == 1);
  CHECK(bad.out.rfind("FAIL at line 1: schema mismatch", 0) == 0);
  CHECK(run({"--porcelain", "check-proof", data_path("succ.drv")}).out == "ok 1\n");
  CHECK(run({"check-proof", "/nonexistent.drv"}).code == 2);
}

TEST_CASE("falsify") {
  Run r = run({"falsify", "B[true] p", "--worlds", "1", "--letters", "p"});
  CHECK(r.code == 1);
  CHECK(r.out == "# countermodel at w1\nmodel plausibility\nworlds: w1\norder: w1\nval w1:\n");
  Run none = run({"falsify", "B[p] p", "--worlds", "2", "--letters", "p"});
  CHECK(none.code == 0);
  CHECK(none.out == "no countermodel within bounds\n");
  CHECK(run({"falsify", "Bd[q] p -> p", "--worlds", "2"}).code == 1);
  CHECK(run({"falsify", "r", "--letters", "p"}).code == 2);
  CHECK(run({"falsify", "B[true] p", "--class", "xyz"}).code == 2);
  Run lwo = run({"--porcelain", "falsify", "p -> B[true] p", "--worlds", "2", "--class", "lwo"});
  CHECK(lwo.code == 1);
  CHECK(lwo.out.rfind("countermodel ", 0) == 0);
}

TEST_CASE("internalize") {
  std::string out = temp_file("internalized.drv");
  Run r = run({"internalize", data_path("nested.drv"), "--cond", "q", "-o", out});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("term: ", 0) == 0);
  auto d = cdl::proofs::load_derivation_file(out);
  CHECK(cdl::proofs::check_derivation(d).ok);
  CHECK(d.conclusion().is_supports());
  CHECK(run({"internalize", data_path("nested.drv")}).code == 2);
  std::filesystem::remove(out);
}

TEST_CASE("translate and eliminate") {
  std::string realized = temp_file("realized.drv");
  CHECK(run({"translate", "--realize", data_path("mn.drv"), "-o", realized}).code == 0);
  CHECK(run({"check-proof", realized}).code == 0);
  Run back = run({"translate", "--project", realized});
  CHECK(back.code == 0);
  CHECK(back.out.find("theory CDL\n") == 0);
  CHECK(run({"translate", data_path("mn.drv")}).code == 2);
  CHECK(run({"translate", "--project", "--realize", data_path("mn.drv")}).code == 2);

  std::string cleaned = temp_file("cleaned.drv");
  CHECK(run({"eliminate", data_path("nested.drv"), "-o", cleaned}).code == 0);
  auto d = cdl::proofs::load_derivation_file(cleaned);
  CHECK(cdl::proofs::count_troublesome(d) == 0);
  CHECK(slurp(cleaned).find("theory JCDL") == 0);
  std::filesystem::remove(realized);
  std::filesystem::remove(cleaned);
}

TEST_CASE("models on the command line") {
  CHECK(run({"eval", data_path("chain.mdl"), "B[true] ~p"}).out == "extension: {w1, w2}\n");
  Run at = run({"eval", data_path("chain.mdl"), "p", "--world", "w2"});
  CHECK(at.code == 0);
  CHECK(at.out == "true\n");
  CHECK(run({"eval", data_path("chain.mdl"), "p", "--world", "w1"}).code == 1);
  CHECK(run({"eval", data_path("chain.mdl"), "p", "--world", "w9"}).code == 2);
  CHECK(run({"eval", data_path("chain.mdl"), "p", "--clause", "min"}).out == "extension: {w2}\n");
  CHECK(run({"valid", data_path("chain.mdl"), "B[p] p"}).code == 0);
  CHECK(run({"valid", data_path("chain.mdl"), "p"}).out == "not valid; fails at {w1}\n");
  CHECK(run({"eval", data_path("fitting.mdl"), "{c(p -> q)}:[true] (p -> q)"}).code == 0);
  CHECK(run({"--porcelain", "classify", data_path("two_components.mdl")}).out ==
        "finite well_founded smooth locally_total locally_well_ordered\n");
  CHECK(run({"classify", data_path("not_transitive.mdl")}).code == 2);
}

TEST_CASE("revision on the command line") {
  Run r = run({"revise", "--letters", "p,q", "--believe", "p & q", "--by", "~p", "--strategy", "hamming"});
  CHECK(r.code == 0);
  CHECK(r.out == "~p & q\n");
  CHECK(run({"revise", "--letters", "p,q", "--believe", "p & q", "--by", "~p"}).out == "~p\n");
  CHECK(run({"revise", "--letters", "p", "--believe", "p", "--by", "q"}).code == 2);

  Run good = run({"check-agm", "--letters", "2", "--strategy", "hamming"});
  CHECK(good.code == 0);
  CHECK(std::count(good.out.begin(), good.out.end(), '\n') == 8);
  Run broken = run({"check-agm", "--letters", "2", "--strategy", "broken"});
  CHECK(broken.code == 1);
  CHECK(broken.out.find("Consistency: FAIL (witness: T = Cn(") != std::string::npos);
  CHECK(run({"check-agm", "--letters", "4"}).code == 2);
}

TEST_CASE("derive") {
  Run r = run({"derive", "Cut", "--arg", "psi=p", "--arg", "phi=q", "--arg", "chi=r"});
  CHECK(r.code == 0);
  auto d = cdl::proofs::parse_derivation(r.out);
  CHECK(cdl::proofs::check_derivation(d).ok);
  CHECK(run({"derive", "Cut", "--arg", "psi"}).code == 2);
  CHECK(run({"derive", "Nope"}).code == 2);
}

TEST_CASE("usage errors") {
  Run none = run({});
  CHECK(none.code == 2);
  Run unknown = run({"bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown command 'bogus'") != std::string::npos);
  Run flag = run({"falsify", "p", "--wrolds", "2"});
  CHECK(flag.code == 2);
  CHECK(flag.err.find("--wrolds") != std::string::npos);
  CHECK(flag.err.find("Usage: falsify") != std::string::npos);
  Run parse = run({"parse", "p ->"});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("error:") == 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("property: parse output is a fixpoint") {
  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    cdl::Language lang = i % 2 == 0 ? cdl::Language::cdl : cdl::Language::jcdl;
    std::string text = cdl::render(cdl::testing::random_formula(rng, {"p", "q"}, 3, lang, 1), cdl::RenderStyle::sugared);
    for (const char* style : {"primitive", "sugared"}) {
      Run once = run({"parse", text, "--style", style});
      REQUIRE(once.code == 0);
      std::string first = once.out.substr(0, once.out.size() - 1);
      CHECK(run({"parse", first, "--style", style}).out == once.out);
    }
  }
}

TEST_CASE("README examples exit as documented") {
  const std::filesystem::path root = std::filesystem::path(data_path("")).parent_path().parent_path().parent_path();
  std::ifstream readme(root / "README.md");
  REQUIRE(readme);
  const auto old = std::filesystem::current_path();
  std::filesystem::current_path(root);
  const std::regex example(R"(^cdl (.*?)\s+# exit (\d)\s*$)");
  int seen = 0;
  bool in_block = false;
  for (std::string line; std::getline(readme, line);) {
    if (line.rfind("```", 0) == 0) {
      in_block = !in_block;
      continue;
    }
    std::smatch m;
    if (!in_block || !std::regex_match(line, m, example)) continue;
    ++seen;
    CAPTURE(line);
    CHECK(run(split_command(m[1])).code == std::stoi(m[2]));
  }
  std::filesystem::current_path(old);
  CHECK(seen >= 8);
}
