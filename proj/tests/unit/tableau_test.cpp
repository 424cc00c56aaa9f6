#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ctg/fol/tptp.hpp"
#include "ctg/tableau/proof.hpp"
#include "ctg/tableau/prover.hpp"
#include "test_util.hpp"

namespace ctg {
namespace {

std::vector<std::string> expansion_strings(const CheckedProof& p) {
  std::vector<std::string> out;
  for (const auto& e : record_expansions(p)) out.push_back(to_string(e.node) + ":" + e.clause);
  return out;
}

const TableauNode& at(const ProofTree& p, const NodePath& path) {
  const TableauNode* n = &p.roots.at(path.at(0));
  for (std::size_t i = 1; i < path.size(); ++i) n = &n->children.at(path[i]);
  return *n;
}

TEST(CandidateExtensions, RootOfFigureOne) {
  Matrix m = parse_tptp_cnf(testing::kFig1InOrder);
  VarSupply supply(static_cast<VarId>(m.var_count()));
  Literal goal = parse_literal("p(a)", m.symbols(), [](std::string_view) -> VarId { return 0; });
  auto cands = candidate_extensions(goal, m, {}, supply);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(m.clauses()[cands[0].clause_index].name, "c2");
  EXPECT_EQ(cands[0].literal_index, 1u);
  const Term& x = cands[0].instance.literals[1].atom.args()[0];
  ASSERT_TRUE(x.is_var());
  EXPECT_GE(x.var_id(), m.var_count());
  EXPECT_EQ(print(*cands[0].sigma.lookup(x.var_id()), m), "a");
}

TEST(CandidateExtensions, ComplementsOfRab) {
  Matrix m = parse_tptp_cnf(testing::kFig1InOrder);
  VarSupply supply(static_cast<VarId>(m.var_count()));
  Literal goal = parse_literal("r(a,b)", m.symbols(), [](std::string_view) -> VarId { return 0; });
  auto cands = candidate_extensions(goal, m, {}, supply);
  // Hand enumeration of c1..c6: only c5 (literal 1) and c6 (literal 0)
  // carry ~r(a,X), each binding its X to b.
  ASSERT_EQ(cands.size(), 2u);
  EXPECT_EQ(m.clauses()[cands[0].clause_index].name, "c5");
  EXPECT_EQ(cands[0].literal_index, 1u);
  EXPECT_EQ(m.clauses()[cands[1].clause_index].name, "c6");
  EXPECT_EQ(cands[1].literal_index, 0u);
  for (const auto& c : cands) {
    const Literal inst = c.sigma.apply(c.instance.literals[c.literal_index]);
    EXPECT_EQ(print(inst, m.symbols(), fresh_var_name), "~r(a,b)");
  }
}

TEST(CandidateExtensions, EmptyMatrix) {
  Matrix m({}, std::make_shared<SymbolTable>(), {});
  VarSupply supply;
  EXPECT_TRUE(candidate_extensions({true, Term::app(SymbolTable::kVar)}, m, {}, supply).empty());
}

TEST(Prove, FigureOneReproducesReferenceTableau) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  auto r = prove(m, SearchLimits{}, ClauseOrdering::input_order(), {}, "fig1");
  ASSERT_TRUE(r.proof);
  EXPECT_EQ(r.stats.outcome, SearchOutcome::Proved);
  EXPECT_EQ(r.stats.depth, 3u);
  CheckedProof cp = certify(m, *r.proof);
  EXPECT_EQ(expansion_strings(cp),
            (std::vector<std::string>{"0:c2", "0.0:c6", "0.0.0:c5", "0.1:c3", "0.1.0:c4"}));
  const ProofTree& p = cp.tree();
  auto lit = [&](const NodePath& path) { return print(at(p, path).literal, m.symbols(), fresh_var_name); };
  EXPECT_EQ(lit({0}), "p(a)");
  EXPECT_EQ(lit({0, 0}), "r(a,b)");
  EXPECT_EQ(lit({0, 0, 0}), "q(b)");
  EXPECT_EQ(lit({0, 0, 0, 0}), "~r(a,b)");
  EXPECT_EQ(lit({0, 1}), "q(b)");
  EXPECT_EQ(lit({0, 1, 0}), "s(b)");
  EXPECT_EQ(lit({0, 1, 0, 0}), "~q(b)");
  EXPECT_EQ(std::get<Reduction>(at(p, {0, 0, 0, 0}).closure).ancestor_depth, 2u);
  EXPECT_EQ(std::get<Reduction>(at(p, {0, 1, 0, 0}).closure).ancestor_depth, 2u);
}

TEST(Prove, FigureOneInSourceOrderFindsAnotherProof) {
  Matrix m = parse_tptp_cnf(testing::kFig1InOrder);
  auto r = prove(m, SearchLimits{});
  ASSERT_TRUE(r.proof);
  EXPECT_TRUE(check_proof(m, *r.proof).accepted());
}

TEST(Prove, MinimalUnsatisfiableSet) {
  Matrix m = parse_tptp_cnf("cnf(a,axiom,p).\ncnf(b,axiom,~p).");
  auto r = prove(m, SearchLimits{});
  ASSERT_TRUE(r.proof);
  CheckedProof cp = certify(m, *r.proof);
  EXPECT_EQ(expansion_strings(cp), (std::vector<std::string>{"0:b"}));
  EXPECT_EQ(r.stats.depth, 1u);
}

TEST(Prove, SatisfiableHasNoProof) {
  Matrix m = parse_tptp_cnf("cnf(a,axiom,p(a)).");
  for (std::size_t depth : {1u, 3u, 10u}) {
    auto r = prove(m, SearchLimits{depth});
    EXPECT_FALSE(r.proof);
    EXPECT_EQ(r.stats.outcome, SearchOutcome::SearchExhausted);
  }
}

TEST(Prove, BudgetDistinctFromDepth) {
  // Infinite ascent q(a), q(f(a)), ... never closes, so every round hits
  // the depth limit.
  Matrix m = parse_tptp_cnf("cnf(a,axiom,q(a)).\ncnf(b,axiom,~q(X) | q(f(X))).\ncnf(c,axiom,~q(b)).");
  SearchLimits shallow{4};
  auto depth = prove(m, shallow);
  EXPECT_EQ(depth.stats.outcome, SearchOutcome::DepthExhausted);
  SearchLimits tight{50};
  tight.node_budget = 30;
  auto budget = prove(m, tight);
  EXPECT_EQ(budget.stats.outcome, SearchOutcome::BudgetExhausted);
  EXPECT_FALSE(budget.proof);
}

TEST(Prove, RejectsEmptyMatrixAndBadLimits) {
  Matrix empty({}, std::make_shared<SymbolTable>(), {});
  EXPECT_THROW(prove(empty, SearchLimits{}), std::invalid_argument);
  Matrix m = parse_tptp_cnf("cnf(a,axiom,p).");
  EXPECT_THROW(prove(m, SearchLimits{0}), std::invalid_argument);
}

TEST(Prove, Deterministic) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix m = parse_tptp_cnf(testing::random_cnf_text(rng, 5));
    for (auto ordering : {ClauseOrdering::input_order(), ClauseOrdering::random(9)}) {
      SearchLimits limits{6};
      limits.node_budget = 20000;
      auto a = prove(m, limits, ordering);
      auto b = prove(m, limits, ordering);
      EXPECT_EQ(a.proof, b.proof);
      EXPECT_EQ(a.stats.inferences, b.stats.inferences);
      EXPECT_EQ(a.stats.outcome, b.stats.outcome);
    }
  }
}

TEST(Prove, FirstOrderSoundness) {
  std::mt19937_64 rng(4);
  int proved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Matrix m = parse_tptp_cnf(testing::random_cnf_text(rng, 6));
    SearchLimits limits{5};
    limits.node_budget = 20000;
    auto r = prove(m, limits, ClauseOrdering::random(trial));
    if (!r.proof) continue;
    ++proved;
    auto check = check_proof(m, *r.proof);
    EXPECT_TRUE(check.accepted()) << check.describe() << "\n" << print(m);
  }
  EXPECT_GT(proved, 20);
}

// ---------------------------------------------------------------------------
// Checker mutations

class CheckerTest : public ::testing::Test {
 protected:
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  ProofTree proof = *prove(m, SearchLimits{}).proof;
};

TEST_F(CheckerTest, AcceptsProverOutput) { EXPECT_TRUE(check_proof(m, proof).accepted()); }

TEST_F(CheckerTest, RetargetedReductionViolatesC) {
  auto& red = proof.roots[0].children[0].children[0].children[0];
  red.closure = Reduction{1};
  auto r = check_proof(m, proof);
  EXPECT_EQ(r.violated, CheckResult::Condition::Reduction);
  EXPECT_EQ(r.node, (NodePath{0, 0, 0, 0}));
}

TEST_F(CheckerTest, WrongClauseChildrenViolateB) {
  // The right q(b) cites c3; give it c4's remaining literal instead.
  auto& qb = proof.roots[0].children[1];
  ASSERT_EQ(qb.extension()->clause, "c3");
  Literal not_s = qb.children[0].literal.complement();
  qb.children[0] = TableauNode{not_s, Reduction{1}, {}};
  auto r = check_proof(m, proof);
  EXPECT_EQ(r.violated, CheckResult::Condition::ExtensionChildren);
  EXPECT_EQ(r.node, (NodePath{0, 1}));
}

TEST_F(CheckerTest, UnknownClauseViolatesA) {
  auto& node = proof.roots[0].children[0];
  std::get<Extension>(node.closure).clause = "c9";
  EXPECT_EQ(check_proof(m, proof).violated, CheckResult::Condition::ClauseInstance);
}

TEST_F(CheckerTest, OpenLeafViolatesD) {
  proof.roots[0].children[1].children[0].children[0].closure = OpenLeaf{};
  EXPECT_EQ(check_proof(m, proof).violated, CheckResult::Condition::Closed);
}

TEST_F(CheckerTest, CertifyRejectsAndRecordRequiresCertificate) {
  proof.roots[0].children[0].children[0].children[0].closure = Reduction{1};
  EXPECT_THROW(certify(m, proof), PreconditionError);
}

TEST(RecordExpansions, SingleExtension) {
  Matrix m = parse_tptp_cnf("cnf(a,axiom,p).\ncnf(b,axiom,~p).");
  auto cp = certify(m, *prove(m, SearchLimits{}).proof);
  EXPECT_EQ(record_expansions(cp).size(), 1u);
}

// ---------------------------------------------------------------------------
// Serialization

TEST(ProofFormat, FigureOneText) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  ProofTree p = *prove(m, SearchLimits{}, {}, {}, "fig1").proof;
  const std::string text = write_proofs(m, {p});
  EXPECT_EQ(text,
            "v1\n"
            "proof fig1 c1\n"
            "1 p(a) ext c2 1\n"
            "2 r(a,b) ext c6 0\n"
            "3 ~r(a,b)\n"
            "3 q(b) ext c5 0\n"
            "4 ~q(b)\n"
            "4 ~r(a,b) red 2\n"
            "2 ~p(a)\n"
            "2 q(b) ext c3 1\n"
            "3 s(b) ext c4 0\n"
            "4 ~s(b)\n"
            "4 ~q(b) red 2\n"
            "3 ~q(b)\n");
  auto back = read_proofs(text, m);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], p);
}

TEST(ProofFormat, RoundTripRandomProofs) {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix m = parse_tptp_cnf(testing::random_cnf_text(rng, 6));
    SearchLimits limits{5};
    limits.node_budget = 20000;
    auto r = prove(m, limits);
    if (!r.proof) continue;
    const std::string text = write_proofs(m, {*r.proof, *r.proof});
    auto back = read_proofs(text, m);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0], *r.proof) << text;
    EXPECT_EQ(write_proofs(m, back), text);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(ProofFormat, Errors) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  EXPECT_THROW(read_proofs("proof x c1\n", m), ProofFormatError);
  EXPECT_THROW(read_proofs("v1\n1 p(a)\n", m), ProofFormatError);
  EXPECT_THROW(read_proofs("v1\nproof x c1\n1 zz(a)\n", m), ProofFormatError);
  EXPECT_THROW(read_proofs("v1\nproof x c1\n1 p(a) ext c2 1\n2 r(a,b) red 1\n", m), ProofFormatError);
  // A tree with an open leaf parses; the checker rejects it.
  auto open = read_proofs("v1\nproof x c1\n1 p(a)\n", m);
  ASSERT_EQ(open.size(), 1u);
  EXPECT_EQ(check_proof(m, open[0]).violated, CheckResult::Condition::Closed);
}

// ---------------------------------------------------------------------------
// Completeness against a truth-table oracle

TEST(Prove, PropositionalCompleteness) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    testing::PropMatrix pm = testing::random_prop_matrix(rng);
    Matrix m = parse_tptp_cnf(pm.text);
    const bool unsat = !testing::truth_table_satisfiable(pm.clauses);
    for (auto ordering : {ClauseOrdering::input_order(), ClauseOrdering::random(trial)}) {
      auto r = prove(m, SearchLimits{pm.literal_count}, ordering);
      ASSERT_EQ(r.proof.has_value(), unsat) << pm.text;
      if (r.proof) {
        EXPECT_TRUE(check_proof(m, *r.proof).accepted());
      }
    }
  }
}

TEST(Prove, RegularityOffStillSound) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    testing::PropMatrix pm = testing::random_prop_matrix(rng);
    Matrix m = parse_tptp_cnf(pm.text);
    SearchLimits limits{pm.literal_count};
    limits.node_budget = 200000;
    auto r = prove(m, limits, {}, ProverFlags{false, true});
    if (r.proof) {
      EXPECT_TRUE(check_proof(m, *r.proof).accepted());
      EXPECT_FALSE(testing::truth_table_satisfiable(pm.clauses));
    }
  }
}

}  // namespace
}  // namespace ctg
