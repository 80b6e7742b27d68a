#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + THINSPAN_CLI + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Standard output of a successful run.
std::string output(const std::string& args) {
  const std::string cmd = std::string(THINSPAN_CLI) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

const std::string kDouble =
    R"J(--ctx "f:o->o->o, x:o, y:o" --term "f (f y x) (f x y)" )J"
    R"J(--point '{"ctx": {"f": "[[*]-o[]-o*, []-o[*]-o*]", "x": "[*]", "y": "[]"}, "type": "*"}')J";

const std::string kAbstracted =
    R"J(--ctx "f:(o->o)->o, g:o->o" --term "f (\x:o. g x)" )J"
    R"J(--point '{"ctx": {"f": "[[[]-o*, [*]-o*]-o*]", "g": "[[]-o*, [*]-o*]"}, "type": "*"}')J";

const std::string kNested =
    R"J(--ctx "f:o->o, g:o->o, y:o" --term "f (g y)" )J"
    R"J(--point '{"ctx": {"f": "[[*,*]-o*]", "g": "[[]-o*, [*]-o*]", "y": "[*]"}, "type": "*"}')J";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("success") {
    CHECK(run(R"J(check --ctx "f:o->o" --term "\x:o. f x")J") == 0);
    CHECK(run("witnesses " + kNested) == 0);
    CHECK(run("witnesses --json " + kNested) == 0);
    CHECK(run("weight " + kNested) == 0);
    CHECK(run("verify " + kNested) == 0);
    CHECK(run(std::string("verify --corpus ") + THINSPAN_CORPUS) == 0);
  }

  TEST_CASE("printed results") {
    CHECK(output(R"J(check --ctx "f:o->o->o, x:o, y:o" --term "f (f y x) (f x y)")J") == "o\n");
    CHECK(output(R"J(check --ctx "" --term "\x:o. x")J") == "o -> o\n");
    CHECK(output("weight " + kDouble) == "2\n");
    CHECK(output("weight " + kNested) == "2\n");
    CHECK(output("weight " + kAbstracted) == "1\n");
  }

  TEST_CASE("witness reports") {
    const auto nested = nlohmann::json::parse(output("witnesses --json " + kNested));
    CHECK(nested["wit_plus"] == 2);
    CHECK(nested["witnesses"].size() == 2);
    CHECK(nested["classes"].size() == 1);
    const auto dbl = nlohmann::json::parse(output("witnesses --json " + kDouble));
    CHECK(dbl["wit_plus"] == 2);
    CHECK(dbl["classes"].size() == 2);
    const auto id = nlohmann::json::parse(output(
        R"J(witnesses --json --ctx "" --term "\x:o. x" --point '{"ctx": {}, "type": "[*]-o*"}')J"));
    CHECK(id["wit_plus"] == 1);
    CHECK(id["witnesses"][0]["term"] == "\\x. x^{*}");
  }

  TEST_CASE("JSON output is byte-for-byte deterministic") {
    const std::string args = std::string("verify --json --corpus ") + THINSPAN_CORPUS;
    const auto a = output(args);
    CHECK_FALSE(a.empty());
    CHECK(a == output(args));
    CHECK(output("witnesses --json " + kDouble) == output("witnesses --json " + kDouble));
  }

  TEST_CASE("type and refinement errors exit 1") {
    CHECK(run(R"J(check --ctx "" --term "x")J") == 1);
    CHECK(run(R"J(check --ctx "x:o" --term "x x")J") == 1);
    CHECK(run(R"J(weight --ctx "y:o" --term "y" --point '{"ctx": {"y": "[[]-o*]"}, "type": "*"}')J") == 1);
  }

  TEST_CASE("usage and syntax errors exit 2") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run(R"J(check --ctx "x:o" --term "(x")J") == 2);
    CHECK(run(R"J(weight --ctx "y:o" --term "y" --point '{broken')J") == 2);
    CHECK(run("verify") == 2);
  }

  TEST_CASE("a redex without a budget exits 3") {
    const std::string redex =
        R"J(--ctx "y:o" --term "(\x:o. x) y" --point '{"ctx": {"y": "[*]"}, "type": "*"}')J";
    CHECK(run("witnesses " + redex) == 3);
    CHECK(run("witnesses --budget 2 " + redex) == 0);
    CHECK(run("witnesses " + redex, "THINSPAN_BUDGET=2") == 0);
    CHECK(run("witnesses " + redex, "THINSPAN_BUDGET=two") == 2);
  }

  TEST_CASE("a duplicating redex verifies at budget 3") {
    CHECK(run(R"J(verify --budget 3 --ctx "f:o->o->o, y:o" --term "(\x:o. f x x) y" )J"
              R"J(--point '{"ctx": {"f": "[[*]-o[*]-o*]", "y": "[*,*]"}, "type": "*"}')J") == 0);
  }

  TEST_CASE("a wrong expected value exits 4") {
    const std::string path = "thinspan_cli_wrong.json";
    {
      std::ofstream out(path);
      out << R"J([{"name": "nested", "context": "f:o->o, g:o->o, y:o", "term": "f (g y)",
                  "point": {"ctx": {"f": "[[*,*]-o*]", "g": "[[]-o*, [*]-o*]", "y": "[*]"}, "type": "*"},
                  "expected": {"wrel": 3}}])J";
    }
    CHECK(run("verify --corpus " + path) == 4);
    std::remove(path.c_str());
  }
}
