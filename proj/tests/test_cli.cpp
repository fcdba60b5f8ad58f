// Drives the nl2asp executable end to end.

#include "nl2asp/process.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace t = nl2asp::test;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        auto name = ::testing::UnitTest::GetInstance()->current_test_info()->name();
        dir_ = fs::temp_directory_path() / ("nl2asp-cli-" + std::to_string(::getpid()) + "-" + name);
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Outcome run(std::vector<std::string> args) {
        args.insert(args.begin(), NL2ASP_TOOL);
        auto r = nl2asp::run_process(args, {}, std::chrono::milliseconds{60000});
        return {r.exit_code, r.out, r.err};
    }

    std::vector<std::string> zoo(std::string const &sub, std::string const &out) {
        return {sub,
                "--puzzle",    t::corpus("zoo/puzzle.txt").string(),
                "--fixtures",  t::corpus("zoo/transcript.jsonl").string(),
                "--amr-dir",   t::corpus("zoo/amr").string(),
                "--reference", "child",
                "--out",       (dir_ / out).string()};
    }

    std::string artifact(std::string const &out, std::string const &name) { return t::slurp(dir_ / out / name); }

    std::string fake_clingo(std::string const &json, int code) {
        auto path = dir_ / "clingo";
        std::ofstream(path) << "#!/bin/sh\ncat <<'EOF'\n" << json << "\nEOF\nexit " << code << "\n";
        fs::permissions(path, fs::perms::owner_all);
        return path.string();
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, ZooEndToEnd) {
    auto r = run(zoo("e2e", "e2e"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, t::slurp(t::corpus("zoo/expected/solution.txt")));
    EXPECT_EQ(artifact("e2e", "program.lp"), t::slurp(t::corpus("zoo/expected/program.lp")));
    for (auto name : {"kb.txt", "facts.lp", "rules.lp", "sentences.txt", "constraints.lp", "constraints_report.txt",
                      "program.lp", "solution.txt"}) {
        EXPECT_TRUE(fs::exists(dir_ / "e2e" / name)) << name;
    }
}

TEST_F(Cli, EinsteinEndToEnd) {
    auto r = run({"e2e", "--puzzle", t::corpus("einstein/puzzle.txt").string(), "--fixtures",
                  t::corpus("einstein/transcript.jsonl").string(), "--amr-dir", t::corpus("einstein/amr").string(),
                  "--reference", "house_color", "--workers", "4", "--out", (dir_ / "e").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, t::slurp(t::corpus("einstein/expected/solution.txt")));
    EXPECT_NE(r.out.find("solution(\"yellow\",\"norwegian\",1,\"water\",\"kools\",\"fox\")"), std::string::npos);
}

// Stages run one by one on each other's artifacts give the same bytes as e2e.
TEST_F(Cli, StagesCompose) {
    ASSERT_EQ(run(zoo("e2e", "all")).code, 0);

    auto facts = run(zoo("facts", "s1"));
    ASSERT_EQ(facts.code, 0) << facts.err;
    EXPECT_EQ(artifact("s1", "kb.txt"), artifact("all", "kb.txt"));
    EXPECT_EQ(artifact("s1", "facts.lp"), artifact("all", "facts.lp"));

    auto kb = (dir_ / "s1" / "kb.txt").string();
    auto rules = run({"rules", "--kb", kb, "--out", (dir_ / "s2").string()});
    ASSERT_EQ(rules.code, 0) << rules.err;
    EXPECT_EQ(artifact("s2", "rules.lp"), artifact("all", "rules.lp"));

    auto simplify = run(zoo("simplify", "s3"));
    ASSERT_EQ(simplify.code, 0) << simplify.err;
    EXPECT_EQ(artifact("s3", "sentences.txt"), artifact("all", "sentences.txt"));

    auto sentences = (dir_ / "s3" / "sentences.txt").string();
    auto constraints = run({"constraints", "--kb", kb, "--sentences", sentences, "--amr-dir",
                            t::corpus("zoo/amr").string(), "--out", (dir_ / "s4").string()});
    ASSERT_EQ(constraints.code, 0) << constraints.err;
    EXPECT_EQ(artifact("s4", "constraints.lp"), artifact("all", "constraints.lp"));

    auto compile = run({"compile", "--kb", kb, "--sentences", sentences, "--amr-dir", t::corpus("zoo/amr").string(),
                        "--out", (dir_ / "s5").string()});
    ASSERT_EQ(compile.code, 0) << compile.err;
    EXPECT_EQ(artifact("s5", "program.lp"), artifact("all", "program.lp"));
    EXPECT_EQ(compile.out, artifact("all", "program.lp"));

    auto solve = run({"solve", "--program", (dir_ / "s5" / "program.lp").string(), "--out", (dir_ / "s6").string()});
    ASSERT_EQ(solve.code, 0) << solve.err;
    EXPECT_EQ(artifact("s6", "solution.txt"), artifact("all", "solution.txt"));
}

TEST_F(Cli, CompileWithoutLanguageModel) {
    auto r = run({"compile", "--kb", t::corpus("zoo/kb.txt").string(), "--amr-dir", t::corpus("zoo/amr").string(),
                  "--out", (dir_ / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, t::slurp(t::corpus("zoo/expected/program.lp")));
}

TEST_F(Cli, AmrCommand) {
    auto cmd = std::string(NL2ASP_SCRIPTS_DIR) + "/amr_from_dir.sh " + t::corpus("zoo/amr").string() + " {sentence}";
    auto args = zoo("constraints", "o");
    args.erase(args.begin() + 5, args.begin() + 7);
    args.insert(args.end(), {"--amr-cmd", cmd});
    auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(artifact("o", "constraints.lp"), t::slurp(t::corpus("zoo/expected/constraints.lp")));
}

TEST_F(Cli, Deterministic) {
    auto a = run(zoo("e2e", "a"));
    auto b = run(zoo("e2e", "b"));
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    for (auto name : {"program.lp", "constraints_report.txt", "solution.txt"}) {
        EXPECT_EQ(artifact("a", name), artifact("b", name));
    }
}

TEST_F(Cli, UnsatExitCode) {
    auto program = t::slurp(t::corpus("zoo/expected/program.lp"));
    auto pos = program.find("#show");
    program.insert(pos, ":- not order_in_line_of(\"Johan\",1).\n");
    std::ofstream(dir_ / "unsat.lp") << program;
    auto r = run({"solve", "--program", (dir_ / "unsat.lp").string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("unsat"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    auto both = zoo("constraints", "o");
    both.insert(both.end(), {"--amr-cmd", "cat"});
    EXPECT_EQ(run(both).code, 1);
    EXPECT_EQ(run({"constraints", "--kb", t::corpus("zoo/kb.txt").string(), "--out", (dir_ / "o").string()}).code, 1);
    EXPECT_EQ(run({"solve", "--program", "/nonexistent.lp", "--out", (dir_ / "o").string()}).code, 1);
    EXPECT_EQ(run({"solve", "--solver", "magic"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, StageFailuresNameTheStage) {
    auto r = run({"facts", "--puzzle", t::corpus("einstein/puzzle.txt").string(), "--fixtures",
                  t::corpus("zoo/transcript.jsonl").string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("llm"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("ReplayMiss"), std::string::npos) << r.err;

    auto bad = dir_ / "bad_amr";
    fs::create_directories(bad);
    std::ofstream(bad / "01.amr") << "(a / b :ARG0 (c / d)";
    r = run({"constraints", "--kb", t::corpus("zoo/kb.txt").string(), "--amr-dir", bad.string(), "--out",
             (dir_ / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("amr"), std::string::npos) << r.err;
}

TEST_F(Cli, MisalignedGraphsAreReported) {
    std::ofstream(dir_ / "sentences.txt") << "Mario is first in line.\n";
    auto amr = dir_ / "amr";
    fs::create_directories(amr);
    fs::copy(t::corpus("zoo/amr/05.amr"), amr / "01.amr");
    auto r = run({"constraints", "--kb", t::corpus("zoo/kb.txt").string(), "--sentences",
                  (dir_ / "sentences.txt").string(), "--amr-dir", amr.string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("Mario is first in line."), std::string::npos) << r.err;
}

TEST_F(Cli, FaultyParseChangesTheProgram) {
    auto amr = dir_ / "amr";
    fs::copy(t::corpus("zoo/amr"), amr);
    fs::copy(t::corpus("zoo/faulty/05.amr"), amr / "05.amr", fs::copy_options::overwrite_existing);
    auto args = zoo("e2e", "o");
    args[6] = amr.string();
    auto r = run(args);
    EXPECT_NE(artifact("o", "constraints.lp").find(":- not order_in_line_of(\"Johan\",5)."), std::string::npos);
    EXPECT_NE(r.out, t::slurp(t::corpus("zoo/expected/solution.txt")));
}

TEST_F(Cli, MissingClingo) {
    auto r = run({"solve", "--program", t::corpus("zoo/expected/program.lp").string(), "--solver", "clingo",
                  "--clingo-path", "/nonexistent/clingo", "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("BinaryNotFound"), std::string::npos) << r.err;
}

TEST_F(Cli, CrossCheckWithScriptedClingo) {
    auto agree = fake_clingo(R"js({"Call": [{"Witnesses": [{"Value": [
        "solution(\"Kerry\",\"tigers\",\"swirls\",3)", "solution(\"Johan\",\"chimpanzees\",\"stripes\",2)",
        "solution(\"Mario\",\"giraffes\",\"hearts\",1)", "solution(\"Lani\",\"lions\",\"polka_dots\",5)",
        "solution(\"Naomi\",\"zebras\",\"rainbow\",4)"]}]}]})js",
                             30);
    auto r = run({"solve", "--program", t::corpus("zoo/expected/program.lp").string(), "--clingo-path", agree,
                  "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("clingo agrees"), std::string::npos) << r.err;

    auto disagree = fake_clingo(R"({"Call": [{}]})", 20);
    r = run({"solve", "--program", t::corpus("zoo/expected/program.lp").string(), "--clingo-path", disagree,
             "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("disagree"), std::string::npos) << r.err;
}
