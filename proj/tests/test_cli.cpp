#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string("cd ") + CSTRICT_SOURCE_DIR + " && " + CSTRICT_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parsed(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(CliTest, CheckCategory) {
  EXPECT_EQ(cli("check-category tests/fixtures/interval.json").code, 0);
  auto bad = cli("check-category tests/fixtures/broken_composition.json");
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(parsed(bad)["verdict"], "fail");
  EXPECT_TRUE(parsed(bad).contains("witness"));
  auto dangling = cli("check-category tests/fixtures/dangling.json");
  EXPECT_EQ(dangling.code, 2);
  EXPECT_EQ(parsed(dangling)["verdict"], "malformed");
}

TEST(CliTest, UnreadableInputIsMalformed) {
  auto trunc = cli("check-category tests/fixtures/truncated.json");
  EXPECT_EQ(trunc.code, 2);
  EXPECT_EQ(parsed(trunc)["verdict"], "malformed");
  EXPECT_EQ(cli("check-category tests/fixtures/no_such_file.json").code, 2);
  EXPECT_EQ(cli("verify-theorem tests/fixtures/truncated.json").code, 2);
  EXPECT_EQ(cli("no-such-subcommand").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(CliTest, CheckCsystem) {
  EXPECT_EQ(cli("check-csystem unit --bound 4").code, 0);
  EXPECT_EQ(cli("check-csystem th1 --bound 3").code, 0);
  auto mutant = cli("check-csystem onetype --bound 3 --mutant star_drops_base");
  EXPECT_EQ(mutant.code, 1);
  EXPECT_FALSE(parsed(mutant)["witness"].get<std::string>().empty());
  EXPECT_EQ(cli("check-csystem nat").code, 2);
  EXPECT_EQ(cli("check-csystem unit --mutant nope").code, 2);
}

TEST(CliTest, Image) {
  EXPECT_EQ(cli("image unit --ambient jobs/unit_copy.json").code, 0);
  auto dis = cli("image unit --ambient jobs/unit_disconnected.json");
  EXPECT_EQ(dis.code, 1);
  EXPECT_NE(parsed(dis)["witness"].get<std::string>().find("object d"), std::string::npos);
}

TEST(CliTest, KanToy) {
  auto r = cli("kan tests/fixtures/kan_toy.json --truncation 1");
  ASSERT_EQ(r.code, 0);
  auto j = parsed(r);
  EXPECT_EQ(j["lan"]["0"].size(), 3u);
  EXPECT_EQ(j["lan"]["1"].size(), 0u);
  EXPECT_EQ(j["stabilization"]["verdict"], "pass");
}

TEST(CliTest, VerifyTheorem) {
  auto a = cli("verify-theorem jobs/unit_copy.json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(parsed(a)["theorem"]["verdict"], "pass");
  auto b = cli("verify-theorem jobs/unit_copy.json");
  EXPECT_EQ(a.out, b.out);  // byte-identical
  EXPECT_EQ(cli("verify-theorem jobs/unit_disconnected.json").code, 1);
  EXPECT_EQ(cli("verify-theorem tests/fixtures/job_unknown_field.json").code, 2);
  EXPECT_EQ(cli("verify-theorem tests/fixtures/job_bad_bounds.json").code, 2);
}
