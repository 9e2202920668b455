#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>

#include "aasl/aasl.hpp"

namespace {

using namespace aasl;

Datum datum_for(std::uint64_t k) {
  Bytes b;
  put_be(b, k, 8);
  b.resize(32, 0);
  return Datum(std::move(b));
}

Log& shared_log(ElementIndex n) {
  static std::map<ElementIndex, std::unique_ptr<Log>> logs;
  auto& slot = logs[n];
  if (!slot) {
    slot = std::make_unique<Log>(std::make_unique<MemoryStore>(LogConfig{}));
    for (ElementIndex k = 1; k <= n; ++k) slot->append(datum_for(k));
  }
  return *slot;
}

void BM_Append(benchmark::State& state) {
  Log log = create_log({});
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(log.append(datum_for(++k)));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Append);

void BM_BuildMembershipProof(benchmark::State& state) {
  const ElementIndex n = state.range(0);
  Log& log = shared_log(n);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    const ElementIndex i = std::uniform_int_distribution<ElementIndex>(1, n)(rng);
    benchmark::DoNotOptimize(log.build_membership_proof(i, n));
  }
}
BENCHMARK(BM_BuildMembershipProof)->RangeMultiplier(16)->Range(1 << 8, 1 << 16);

void BM_VerifyMembership(benchmark::State& state) {
  const ElementIndex n = state.range(0);
  Log& log = shared_log(n);
  const MembershipProof proof = log.build_membership_proof(1, n);
  const MembershipClaim claim{1, n, log.entry(1).record.sensitive};
  const Digest anchor = log.digest();
  for (auto _ : state) benchmark::DoNotOptimize(verify_membership(log.config().hash, claim, anchor, proof));
  state.counters["components"] = static_cast<double>(proof.components.size());
}
BENCHMARK(BM_VerifyMembership)->RangeMultiplier(16)->Range(1 << 8, 1 << 16);

void BM_VerifyAdvancement(benchmark::State& state) {
  const ElementIndex n = state.range(0);
  Log& log = shared_log(n);
  const VerifierState fresh = VerifierState::fresh(log.digest_at(0));
  const AdvancementProof proof = log.build_advancement_proof(0, n - 1);
  const Digest target = log.digest_at(n - 1);
  for (auto _ : state) benchmark::DoNotOptimize(verify_advancement(log.config().hash, fresh, n - 1, target, proof));
  state.counters["components"] = static_cast<double>(proof.components.size());
}
BENCHMARK(BM_VerifyAdvancement)->RangeMultiplier(16)->Range(1 << 8, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
