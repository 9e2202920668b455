#include <gtest/gtest.h>

#include "test_support.hpp"

namespace aasl {
namespace {

// Every hop from j lands on a multiple of 2^l with 2^l | j.
TEST(Invariants, HopDivisibilityExhaustive) {
  std::uint64_t violations = 0;
  for (ElementIndex n = 1; n <= 512; ++n) {
    for (ElementIndex i = 0; i < n; ++i) {
      for (const Hop& h : traversal_path(i, n)) {
        const ElementIndex span = level_span(h.level);
        if (h.source % span != 0 || h.destination % span != 0 || h.destination > n) ++violations;
        if (h.source != 0 && h.level > max_level(h.source)) ++violations;
      }
    }
  }
  EXPECT_EQ(violations, 0u);
}

class BasisInvariants : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    log_ = new Log(create_log({8, 0, {}, {}}));
    test::fill(*log_, 4096, 50);
  }
  static void TearDownTestSuite() {
    delete log_;
    log_ = nullptr;
  }

  static Checked<VerifierState> step(const VerifierState& s, ElementIndex to) {
    return verify_advancement(log_->config().hash, s, to, log_->digest_at(to),
                              log_->build_advancement_proof(s.size, to));
  }

  static Log* log_;
};

Log* BasisInvariants::log_ = nullptr;

// Depth-first over every composition of [0, 20] into advancements. Each
// reached state must have basis population == binary(size) and equal the
// canonical state for that size.
TEST_F(BasisInvariants, AllPartitionsUpToTwenty) {
  constexpr ElementIndex kLimit = 20;
  std::vector<VerifierState> canonical;
  for (ElementIndex j = 0; j <= kLimit; ++j) canonical.push_back(test::honest_state(*log_, j));

  std::uint64_t states = 0, violations = 0;
  std::vector<VerifierState> stack{VerifierState::fresh(log_->config().genesis_value())};
  while (!stack.empty()) {
    VerifierState s = std::move(stack.back());
    stack.pop_back();
    for (ElementIndex next = s.size + 1; next <= kLimit; ++next) {
      auto r = step(s, next);
      ++states;
      if (!r.ok() || !r.value().basis.matches(next) || !(r.value() == canonical[next])) {
        ++violations;
        continue;
      }
      stack.push_back(std::move(r).value());
    }
  }
  // Compositions of j have 2^(j-1) members; summed over j = 1..20.
  EXPECT_EQ(states, (std::uint64_t{1} << kLimit) - 1);
  EXPECT_EQ(violations, 0u);
}

// Since the state after any partition depends only on its size (checked
// above and by induction here), checking every single advancement a -> b
// from the canonical state at a covers all partitions of [0, 64].
TEST_F(BasisInvariants, EverySingleAdvancementUpToSixtyFour) {
  std::uint64_t violations = 0;
  for (ElementIndex a = 0; a < 64; ++a) {
    const VerifierState from = test::honest_state(*log_, a);
    for (ElementIndex b = a + 1; b <= 64; ++b) {
      auto r = step(from, b);
      if (!r.ok() || !(r.value() == test::honest_state(*log_, b))) ++violations;
    }
  }
  EXPECT_EQ(violations, 0u);
}

TEST_F(BasisInvariants, RandomPartitionsUpTo4096) {
  std::mt19937_64 rng(60);
  std::uint64_t violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ElementIndex target = std::uniform_int_distribution<ElementIndex>(1, 4096)(rng);
    VerifierState s = VerifierState::fresh(log_->config().genesis_value());
    while (s.size < target) {
      // Mix short and long strides so partitions vary in granularity.
      const ElementIndex room = target - s.size;
      const ElementIndex stride = rng() % 2 ? std::uniform_int_distribution<ElementIndex>(1, std::min<ElementIndex>(room, 8))(rng)
                                            : std::uniform_int_distribution<ElementIndex>(1, room)(rng);
      auto r = step(s, s.size + stride);
      if (!r.ok()) {
        ++violations;
        break;
      }
      s = std::move(r).value();
      if (!s.basis.matches(s.size)) ++violations;
    }
    if (!(s == test::honest_state(*log_, target))) ++violations;
  }
  EXPECT_EQ(violations, 0u);
}

}  // namespace
}  // namespace aasl
