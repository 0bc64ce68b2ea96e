#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "../support/builders.hpp"
#include "../support/random_network.hpp"
#include "roadrisk/bbn/errors.hpp"
#include "roadrisk/bbn/inference.hpp"
#include "roadrisk/bbn/validation.hpp"

namespace roadrisk::bbn {
namespace {

using testing::binary;
using testing::categorical;

std::vector<std::string> all_ids(const Network& net) {
  std::vector<std::string> ids;
  for (const auto& n : net.nodes()) ids.push_back(n.id);
  return ids;
}

// Sum of the joint over every full assignment, by odometer.
double joint_total(const Network& net) {
  std::vector<std::size_t> digits(net.size(), 0);
  double total = 0;
  while (true) {
    Evidence full;
    for (std::size_t i = 0; i < net.size(); ++i) full.set(net[i].id, net[i].states[digits[i]]);
    total += joint_probability(net, full);
    std::size_t k = net.size();
    while (k-- > 0) {
      if (++digits[k] < net.cardinality(k)) break;
      digits[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

TEST(JointProbability, IndependentRoots) {
  const Network net("roots", {binary("a", {}, {0.3}), binary("b", {}, {0.5})});
  EXPECT_DOUBLE_EQ(joint_probability(net, {{"a", "yes"}, {"b", "yes"}}), 0.15);
}

TEST(JointProbability, PrecipitationMudslideChain) {
  const Network net("chain", {binary("extreme_precipitation", {}, {0.63}),
                              binary("mudslides", {"extreme_precipitation"}, {0.20, 0.00})});
  EXPECT_NEAR(joint_probability(net, {{"extreme_precipitation", "yes"}, {"mudslides", "yes"}}),
              0.126, 1e-15);
  EXPECT_DOUBLE_EQ(joint_probability(net, {{"extreme_precipitation", "no"}, {"mudslides", "yes"}}),
                   0.0);
}

TEST(JointProbability, MissingOrUnknownNodes) {
  const Network net("roots", {binary("a", {}, {0.3}), binary("b", {}, {0.5})});
  EXPECT_THROW(joint_probability(net, {{"a", "yes"}}), IncompleteAssignment);
  EXPECT_THROW(joint_probability(net, {{"a", "yes"}, {"b", "yes"}, {"c", "yes"}}),
               InvalidReference);
  EXPECT_THROW(joint_probability(net, {{"a", "maybe"}, {"b", "yes"}}), InvalidReference);
}

TEST(JointProbability, SumsToOneOnRandomBinaryNets) {
  std::mt19937_64 rng(11);
  testing::RandomNetworkOptions opt;
  opt.max_states = 2;
  opt.max_nodes = 10;
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = testing::random_network(rng, opt);
    EXPECT_NEAR(joint_total(net), 1.0, 1e-9);
  }
}

TEST(Enumerate, RootWithoutEvidenceIsPrior) {
  const Network net("r", {categorical("a", {"x", "y", "z"}, {}, {{0.2, 0.5, 0.3}}),
                          binary("b", {"a"}, {0.1, 0.5, 0.9})});
  const auto d = enumerate_posterior(net, {}, "a");
  EXPECT_NEAR(d["x"], 0.2, 1e-15);
  EXPECT_NEAR(d["y"], 0.5, 1e-15);
  EXPECT_NEAR(d["z"], 0.3, 1e-15);
}

TEST(Enumerate, DeterministicInversion) {
  const Network net("inv", {binary("a", {}, {0.5}), binary("b", {"a"}, {1.0, 0.0})});
  const auto d = enumerate_posterior(net, {{"b", "yes"}}, "a");
  EXPECT_DOUBLE_EQ(d["yes"], 1.0);
  EXPECT_DOUBLE_EQ(d["no"], 0.0);
}

TEST(Enumerate, CapAndImpossibleEvidence) {
  const Network net("inv", {binary("a", {}, {0.5}), binary("b", {"a"}, {1.0, 0.0})});
  EXPECT_THROW(enumerate_posterior(net, {}, "a", 2), StateSpaceTooLarge);
  EXPECT_NO_THROW(enumerate_posterior(net, {}, "a", 4));
  // Evidence shrinks the enumerated space below the cap.
  EXPECT_NO_THROW(enumerate_posterior(net, {{"b", "yes"}}, "a", 2));
  EXPECT_THROW(enumerate_posterior(net, {{"a", "no"}, {"b", "yes"}}, "a"), ImpossibleEvidence);
}

TEST(Eliminate, RootPriorAndPointMass) {
  const Network net("r", {categorical("a", {"x", "y", "z"}, {}, {{0.2, 0.5, 0.3}}),
                          binary("b", {"a"}, {0.1, 0.5, 0.9})});
  const auto d = eliminate_posterior(net, {}, {"a", "b"});
  EXPECT_NEAR(d[0]["y"], 0.5, 1e-15);
  EXPECT_NEAR(d[1]["yes"], 0.2 * 0.1 + 0.5 * 0.5 + 0.3 * 0.9, 1e-15);

  const auto e = eliminate_posterior(net, {{"b", "no"}}, {"b"});
  EXPECT_EQ(e[0].probabilities, Eigen::Vector2d(0, 1));
}

TEST(Eliminate, ImpossibleEvidenceIsTypedError) {
  // flooding is forced yes by its parent; observing it "no" is impossible.
  const Network net("det", {binary("rain", {}, {1.0}), binary("flooding", {"rain"}, {1.0, 0.0}),
                            binary("damage", {"flooding"}, {0.7, 0.1})});
  EXPECT_THROW(eliminate_posterior(net, {{"flooding", "no"}}, {"damage"}), ImpossibleEvidence);
  // Still an error when every target is itself observed.
  EXPECT_THROW(eliminate_posterior(net, {{"flooding", "no"}}, {"flooding"}), ImpossibleEvidence);
  EXPECT_THROW(eliminate_posterior(net, {{"flooding", "no"}}, {}), ImpossibleEvidence);
}

TEST(Eliminate, RejectsBadReferencesAndInvalidNetworks) {
  const Network net("r", {binary("a", {}, {0.5})});
  EXPECT_THROW(eliminate_posterior(net, {{"zz", "yes"}}, {"a"}), InvalidReference);
  EXPECT_THROW(eliminate_posterior(net, {}, {"zz"}), InvalidReference);
  const Network bad("bad", {categorical("a", {"x", "y"}, {}, {{0.5, 0.6}})});
  EXPECT_THROW(eliminate_posterior(bad, {}, {"a"}), InvalidNetwork);
}

TEST(MinFill, LeavesOfAStarGoFirst) {
  // Hub 0 with leaves 1..3: eliminating the hub first would add 3 fill edges.
  std::vector<Factor> fs;
  for (VarId leaf : {1, 2, 3}) fs.emplace_back(std::vector<VarId>{0, leaf}, std::vector<std::size_t>{2, 2}, Factor::Values::Ones(4));
  const auto order = min_fill_order(fs, {0, 1, 2, 3});
  ASSERT_EQ(order.size(), 4u);
  EXPECT_EQ(order.front(), 1u);
  EXPECT_NE(order[0], 0u);
  EXPECT_NE(order[1], 0u);
}

TEST(MinFill, TiesBrokenBySmallestIndex) {
  std::vector<Factor> fs{Factor({4, 5}, {2, 2}, Factor::Values::Ones(4)),
                         Factor({5, 6}, {2, 2}, Factor::Values::Ones(4))};
  EXPECT_EQ(min_fill_order(fs, {6, 5, 4}), (std::vector<VarId>{4, 5, 6}));
}

// Oracle equivalence: elimination agrees with brute-force enumeration.
TEST(OracleEquivalence, RandomNetworksAndEvidence) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0, 1);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = testing::random_network(rng);
    const Evidence ev = testing::sampled_evidence(net, rng, unit(rng) * 0.5);
    const auto ids = all_ids(net);
    const auto elim = eliminate_posterior(net, ev, ids);
    const auto enumd = enumerate_posteriors(net, ev, ids);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double dev = (elim[k].probabilities - enumd[k].probabilities).cwiseAbs().maxCoeff();
      worst = std::max(worst, dev);
      EXPECT_NEAR(elim[k].probabilities.sum(), 1.0, 1e-9);
      EXPECT_NEAR(enumd[k].probabilities.sum(), 1.0, 1e-9);
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(OrderingInvariance, AnyEliminationOrderGivesSamePosteriors) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = testing::random_network(rng);
    const Evidence ev = testing::sampled_evidence(net, rng, 0.25);
    const auto ids = all_ids(net);
    const auto ref = eliminate_posterior(net, ev, ids);
    for (int perm = 0; perm < 3; ++perm) {
      auto order = ids;
      std::shuffle(order.begin(), order.end(), rng);
      const auto got = eliminate_posterior_with_order(net, ev, ids, order);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        EXPECT_LE((ref[k].probabilities - got[k].probabilities).cwiseAbs().maxCoeff(), 1e-9);
      }
    }
  }
}

TEST(EvidenceFixedPoint, ObservedNodesArePointMasses) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = testing::random_network(rng);
    const Evidence ev = testing::sampled_evidence(net, rng, 0.5);
    for (const auto& [node, state] : ev.assignments()) {
      for (const auto& d : {eliminate_posterior(net, ev, {node}).front(),
                            enumerate_posterior(net, ev, node)}) {
        EXPECT_DOUBLE_EQ(d[state], 1.0);
        EXPECT_DOUBLE_EQ(d.probabilities.sum(), 1.0);
      }
    }
  }
}

TEST(Concurrency, SharedNetworkAcrossThreads) {
  std::mt19937_64 rng(3);
  const Network net = testing::random_network(rng, {8, 10, 3, 3, 0.0, true});
  const auto ids = all_ids(net);
  const auto ref = eliminate_posterior(net, {}, ids);
  std::vector<std::thread> pool;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&] {
      for (int rep = 0; rep < 20; ++rep) {
        const auto got = eliminate_posterior(net, {}, ids);
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (got[k].probabilities != ref[k].probabilities) ++mismatches;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(mismatches.load(), 0);
}

}  // namespace
}  // namespace roadrisk::bbn
