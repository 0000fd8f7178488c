#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace crdeg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc parse_error(const std::string& text, std::string* msg = nullptr, const Overrides& ov = {}) {
  try {
    (void)parse_problem_text(text, ov);
  } catch (const Error& e) {
    if (msg) *msg = e.what();
    return e.code();
  }
  FAIL("expected a parse error");
  return Errc::internal;
}

const char* kHq = R"({"order": 4, "source": {"n": 1, "d": 1, "Q": [[{"c": "1", "e": [0, 0, 1]},
                     {"c": "0", "ci": "2", "e": [1, 1, 0]}]], "polynomial": true}})";

Report run(const std::string& cmd, std::vector<std::string> names, const Overrides& ov = {}) {
  std::vector<std::string> paths;
  for (const auto& n : names) paths.push_back(test::fixture_path(n));
  return run_files(cmd, paths, ov);
}

std::string summary(const Report& r) { return r.body["result"]["summary"].get<std::string>(); }

}  // namespace

TEST_CASE("problem files parse and validate") {
  ProblemFile p = parse_problem_text(kHq);
  CHECK(p.order == 4);
  CHECK(p.source->real() == std::optional<bool>(true));
  CHECK(p.target == p.source);
  CHECK_FALSE(p.map.has_value());
  CHECK(p.digest == sha256_hex(kHq));

  ProblemFile f = test::fixture("id");
  CHECK(f.source->real() == std::optional<bool>(true));
  CHECK(f.map.has_value());
}

TEST_CASE("problem file errors") {
  std::string msg;
  CHECK(parse_error("{\"order\": 4,\n \"source\": }", &msg) == Errc::invalid_input);
  CHECK(msg.find("line 2") != std::string::npos);

  CHECK(parse_error(R"({"order": 4, "source": {"n": 1, "d": 1, "Q": [[]], "colour": 1}})", &msg) ==
        Errc::invalid_input);
  CHECK(msg.find("source: unknown field \"colour\"") != std::string::npos);

  CHECK(parse_error(R"({"source": {"n": 1, "d": 1, "Q": [[]]}})", &msg) == Errc::invalid_input);
  CHECK(msg.find("order") != std::string::npos);
  CHECK(parse_error(R"({"order": 0, "source": {"n": 1, "d": 1, "Q": [[]]}})") == Errc::invalid_input);

  CHECK(parse_error(R"({"order": 4, "source": {"order": 5, "n": 1, "d": 1,
                        "Q": [[{"c": "1", "e": [0, 0, 1]}]]}})") == Errc::order_mismatch);

  // normality: the error names the generator
  try {
    (void)test::fixture("bad_normality");
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Q1") != std::string::npos);
  }

  // truncated data cannot be read above its declared order
  Overrides up;
  up.order = 12;
  CHECK_THROWS_AS(test::fixture("hprime", up), Error);
  Overrides down;
  down.order = 5;
  CHECK(test::fixture("hprime", down).order == 5);
  CHECK(test::fixture("hprime", down).declared_order == 8);
}

TEST_CASE("sha256 digests") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(test::fixture("balls").digest == sha256_hex(slurp(test::fixture_path("balls"))));
}

TEST_CASE("command examples") {
  Report b = run("degeneracy", {"balls"});
  CHECK(b.exit_code == exit_ok);
  CHECK(summary(b).find("k0=1 s=1 constant") != std::string::npos);
  CHECK(b.body["result"]["s"] == 1);
  CHECK(b.body["result"]["k0"] == 1);

  Report lf = run("finite-type", {"leviflat"});
  CHECK(lf.exit_code == exit_ok);
  CHECK(summary(lf).find("NOT_FINITE_TYPE") != std::string::npos);

  Report j = run("jets", {"id", "id"});
  CHECK(j.exit_code == exit_ok);
  CHECK(summary(j).find("determined") != std::string::npos);
  CHECK(j.body["result"]["equal_through"] == 8);

  Report m = run("degeneracy", {"hyperquadric"});
  CHECK(m.exit_code == exit_input);
  CHECK(m.body["error"]["message"].get<std::string>().find("map required") != std::string::npos);

  Report h = run("basic-identity-1deg", {"id"});
  CHECK(h.exit_code == exit_hypothesis);

  Report u = run("frobnicate", {"id"});
  CHECK(u.exit_code == exit_usage);

  Report one = run("jets", {"id"});
  CHECK(one.exit_code != exit_ok);
}

TEST_CASE("every command runs on a suitable fixture") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"check", {"balls"}},          {"degeneracy", {"bh_z2"}},       {"constancy", {"bh_z2"}},
      {"holvf", {"balls"}},          {"segre", {"hyperquadric"}},     {"finite-type", {"hyperquadric"}},
      {"basic-identity", {"id"}},    {"basic-identity-1deg", {"eps"}}, {"jets", {"scale_2", "scale_1i"}},
  };
  CHECK(cases.size() == command_names().size());
  for (const auto& [cmd, files] : cases) {
    CAPTURE(cmd);
    CHECK(known_command(cmd));
    Report r = run(cmd, files);
    CHECK(r.exit_code == exit_ok);
    CHECK(r.body["schema"] == "crdeg/1");
    CHECK(r.body["command"] == cmd);
    CHECK(r.body.contains("order"));
    CHECK(r.body["seed"] == 0);
    CHECK(r.body["inputs"].size() == files.size());
    CHECK(r.body["result"].contains("summary"));
  }
}

TEST_CASE("reports are byte-identical for identical inputs") {
  for (const auto& [cmd, files] : std::vector<std::pair<std::string, std::vector<std::string>>>{
           {"degeneracy", {"bh_zw"}}, {"constancy", {"bh_z2"}}, {"finite-type", {"hyperquadric"}},
           {"jets", {"id", "hprime"}}, {"basic-identity", {"scale_1i"}}}) {
    CAPTURE(cmd);
    Report a = run(cmd, files), b = run(cmd, files);
    CHECK(a.render(true) == b.render(true));
    CHECK(a.render(false) == b.render(false));
  }
}

TEST_CASE("overrides are recorded in the report") {
  Overrides ov;
  ov.order = 6;
  ov.seed = 42;
  Report r = run("degeneracy", {"balls"}, ov);
  CHECK(r.body["order"] == 6);
  CHECK(r.body["seed"] == 42);
  CHECK(r.render(false).find("order: 6") != std::string::npos);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(Errc::invalid_input) == exit_input);
  CHECK(exit_code_for(Errc::order_mismatch) == exit_input);
  CHECK(exit_code_for(Errc::context_mismatch) == exit_input);
  CHECK(exit_code_for(Errc::hypothesis) == exit_hypothesis);
  CHECK(exit_code_for(Errc::singular) == exit_hypothesis);
  CHECK(exit_code_for(Errc::order_exhausted) == exit_hypothesis);
  CHECK(exit_code_for(Errc::internal) == exit_internal);
}
