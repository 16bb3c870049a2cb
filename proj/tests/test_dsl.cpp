#include <gtest/gtest.h>

#include "fsmforge/dsl.hpp"
#include "paths.hpp"

using namespace fsmforge;
using namespace fsmforge::testing;

namespace {

DiagCode first_code(std::string_view text) {
  auto r = parse_dsl(text, "t.fsm");
  EXPECT_FALSE(r.ok()) << text;
  return r.ok() ? DiagCode::Syntax : r.diagnostics().front().code;
}

}  // namespace

TEST(Dsl, BlindAuctionCorpus) {
  const ContractModel m = load_corpus("blind_auction.fsm");
  EXPECT_EQ(m.name, "BlindAuction");
  EXPECT_EQ(m.states, (std::vector<std::string>{"ABB", "RB", "F", "C"}));
  EXPECT_EQ(m.initial_state, "ABB");
  EXPECT_TRUE(m.plugins.locking);
  EXPECT_TRUE(m.plugins.counter);
  ASSERT_NE(m.find_transition("close"), nullptr);
  EXPECT_EQ(m.find_transition("close")->guards.at(0).text, "now >= creationTime + 5 days");
  EXPECT_EQ(m.find_transition("bid")->statements.size(), 2u);
  EXPECT_EQ(m.find_transition("withdraw")->locals, (std::vector<Param>{{"uint", "amount"}}));
}

TEST(Dsl, MinimalContract) {
  auto r = parse_dsl("contract T { states { initial A; } }");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().states, std::vector<std::string>{"A"});
  EXPECT_EQ(r.value().initial_state, "A");
  EXPECT_TRUE(r.value().transitions.empty());
}

TEST(Dsl, MinimalEmitIsHeaderAndStates) {
  auto r = parse_dsl("contract T { states { initial A; } }");
  ASSERT_TRUE(r.ok());
  const std::string text = emit_dsl(r.value());
  EXPECT_EQ(text, "contract T {\n    states { initial A; }\n}\n");
  auto again = parse_dsl(text);
  ASSERT_TRUE(again.ok());
  EXPECT_TRUE(equals(again.value(), r.value()));
}

TEST(Dsl, TimedUnitConversion) {
  auto r = parse_dsl(
      "contract T { states { initial ABB; RB; } plugins { timed; }\n"
      "  timed close from ABB to RB at 5 days { } }");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.value().timed_transitions.size(), 1u);
  EXPECT_EQ(r.value().timed_transitions[0].at_seconds, 432000u);
  auto bare = parse_dsl("contract T { states { initial A; } timed t from A to A at 90 { } }");
  ASSERT_TRUE(bare.ok());
  EXPECT_EQ(bare.value().timed_transitions[0].at_seconds, 90u);
}

TEST(Dsl, TimedListIsSortedOnParse) {
  auto r = parse_dsl(
      "contract T { states { initial A; }\n"
      "  timed b from A to A at 10 days { }\n"
      "  timed a from A to A at 5 days { }\n"
      "  timed c from A to A at 5 days { } }");
  ASSERT_TRUE(r.ok());
  const auto& tt = r.value().timed_transitions;
  EXPECT_EQ(tt[0].name, "a");
  EXPECT_EQ(tt[1].name, "c");
  EXPECT_EQ(tt[2].name, "b");
}

TEST(Dsl, NestedBracesPreserved) {
  const std::string body = "if (x) { y(\"}\"); } // }";
  auto r = parse_dsl("contract T { states { initial A; }\n"
                     "  transition t from A to A { action { " + body + "\n } } }");
  ASSERT_TRUE(r.ok()) << (r.ok() ? "" : r.diagnostics()[0].message);
  EXPECT_EQ(r.value().transitions[0].statements[0].text, body);
  auto again = parse_dsl(emit_dsl(r.value()));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(again.value().transitions[0].statements[0].text, body);
}

TEST(Dsl, CorpusRoundTrip) {
  for (const char* name : {"blind_auction.fsm", "voting.fsm", "rps.fsm"}) {
    const ContractModel m = load_corpus(name);
    auto again = parse_dsl(emit_dsl(m));
    ASSERT_TRUE(again.ok()) << name;
    EXPECT_TRUE(equals(again.value(), m)) << name;
    EXPECT_EQ(emit_dsl(again.value()), emit_dsl(m)) << name;
  }
}

TEST(Dsl, Errors) {
  EXPECT_EQ(first_code("contract"), DiagCode::Syntax);
  EXPECT_EQ(first_code("contract T { bogus }"), DiagCode::Syntax);
  EXPECT_EQ(first_code("contract T { states { initial A; } } trailing"), DiagCode::Syntax);
  EXPECT_EQ(first_code("contract T { states { initial A; } states { B; } }"), DiagCode::DupDecl);
  EXPECT_EQ(first_code("contract T { states { initial A; } timed t from A to A at 3 fortnights { } }"),
            DiagCode::BadUnit);
  EXPECT_EQ(first_code("contract T { states { initial A; } transition t from A to A { guard { x } "),
            DiagCode::Syntax);
}

TEST(Dsl, ErrorSpanPointsAtLexeme) {
  auto r = parse_dsl("contract T {\n  states { initial A; }\n  bogus\n}", "t.fsm");
  ASSERT_FALSE(r.ok());
  const auto& span = r.diagnostics().front().span;
  ASSERT_TRUE(span);
  EXPECT_EQ(span->file, "t.fsm");
  EXPECT_EQ(span->line, 3);
  EXPECT_EQ(span->column, 3);
}

TEST(Dsl, SourceMapLocatesNodes) {
  const ContractModel m = load_corpus("blind_auction.fsm");
  auto span = m.source_map.find("transitions[1]");
  ASSERT_TRUE(span);
  EXPECT_EQ(span->line, 26);
  auto guard = m.source_map.find("transitions[1].guards[0]");
  ASSERT_TRUE(guard);
  EXPECT_EQ(guard->line, 27);
}
