// Copyright 2026 The PIR-CSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pircsi/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pircsi/model.h"
#include "pircsi/protocol.h"
#include "pircsi/protocol_csi2.h"
#include "pircsi/status_macros.h"

namespace pircsi {
namespace {

uint64_t CountCombinations(size_t n, size_t k) {
  const BigInt c = Binomial(static_cast<long>(n), static_cast<long>(k));
  if (!c.fits_ulong_p()) throw std::overflow_error("too many combinations to enumerate");
  return c.get_ui();
}

// Number of ways to split n items into unordered blocks of size b.
BigInt SetPartitions(long n, long b) {
  if (n == 0) return 1;
  const long blocks = n / b;
  BigInt denom = Factorial(blocks);
  for (long i = 0; i < blocks; ++i) denom *= Factorial(b);
  return Factorial(n) / denom;
}

std::vector<MessageIndex> Iota(int K) {
  std::vector<MessageIndex> all(static_cast<size_t>(K));
  std::iota(all.begin(), all.end(), 1);
  return all;
}

// Calls fn(demand, support) for every scenario the model allows.
template <typename Fn>
absl::Status ForEachScenario(Model model, int K, int M, Fn fn) {
  const std::vector<MessageIndex> all = Iota(K);
  const uint64_t subsets = CountCombinations(all.size(), static_cast<size_t>(M));
  for (uint64_t rank = 0; rank < subsets; ++rank) {
    const std::vector<MessageIndex> support = UnrankCombination(all, static_cast<size_t>(M), rank);
    for (MessageIndex w : all) {
      const bool inside = std::binary_search(support.begin(), support.end(), w);
      if (inside != (model == Model::kII)) continue;
      PIRCSI_RETURN_IF_ERROR(fn(w, support));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<FieldParamsPtr> AuditField() { return FieldParams::Create(3, 1); }

Scenario UnitScenario(Model model, MessageIndex demand, const std::vector<MessageIndex>& support,
                      const FieldParamsPtr& params) {
  Scenario sc;
  sc.model = model;
  sc.demand = demand;
  sc.support = support;
  sc.coeffs.assign(support.size(), FieldElement::One(params));
  sc.side_info = FieldElement::Zero(params);  // all-zero database
  return sc;
}

ChiSquareResult MakeTest(std::string name, double statistic, double dof) {
  ChiSquareResult t;
  t.name = std::move(name);
  t.statistic = statistic;
  t.dof = dof;
  t.p_value = ChiSquareSurvival(statistic, dof);
  return t;
}

// Pearson statistic of observed counts against a uniform spread of their total.
double UniformPearson(const std::vector<long long>& observed) {
  long long total = 0;
  for (long long o : observed) total += o;
  const double expected = static_cast<double>(total) / static_cast<double>(observed.size());
  double x2 = 0;
  for (long long o : observed) {
    const double d = static_cast<double>(o) - expected;
    x2 += d * d / expected;
  }
  return x2;
}

}  // namespace

uint64_t BranchEnumerator::Decide(uint64_t count) {
  if (count == 0) throw std::logic_error("decision with no options");
  if (depth_ < path_.size()) {
    if (path_[depth_].count != count) throw std::logic_error("branch replay diverged");
    return path_[depth_++].choice;
  }
  path_.push_back(Decision{0, count});
  ++depth_;
  return 0;
}

bool BranchEnumerator::Advance() {
  path_.resize(depth_);
  while (!path_.empty() && path_.back().choice + 1 >= path_.back().count) path_.pop_back();
  depth_ = 0;
  weight_ = 1;
  if (path_.empty()) return false;
  ++path_.back().choice;
  return true;
}

size_t BranchEnumerator::Choose(const DiscretePmf& pmf) {
  std::vector<size_t> nonzero;
  for (size_t i = 0; i < pmf.size(); ++i) {
    if (pmf.masses()[i] != 0) nonzero.push_back(i);
  }
  const size_t pick = nonzero[Decide(nonzero.size())];
  weight_ *= pmf.masses()[pick];
  return pick;
}

std::vector<MessageIndex> BranchEnumerator::Subset(std::span<const MessageIndex> pool, size_t k) {
  if (k > pool.size()) throw std::invalid_argument("subset larger than pool");
  const uint64_t count = CountCombinations(pool.size(), k);
  const uint64_t rank = Decide(count);
  weight_ /= Rational(BigInt(static_cast<unsigned long>(count)));
  std::vector<MessageIndex> out = UnrankCombination(pool, k, rank);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<MessageIndex>> BranchEnumerator::Partition(
    std::span<const MessageIndex> pool, size_t block_size) {
  if (block_size == 0 || pool.size() % block_size != 0) {
    throw std::invalid_argument("pool size is not a multiple of the block size");
  }
  std::vector<MessageIndex> remaining(pool.begin(), pool.end());
  std::sort(remaining.begin(), remaining.end());
  std::vector<std::vector<MessageIndex>> blocks;
  while (!remaining.empty()) {
    // The smallest remaining index anchors a block; pick its companions.
    const std::vector<MessageIndex> rest(remaining.begin() + 1, remaining.end());
    const uint64_t count = CountCombinations(rest.size(), block_size - 1);
    const uint64_t rank = Decide(count);
    weight_ /= Rational(BigInt(static_cast<unsigned long>(count)));
    std::vector<MessageIndex> block = UnrankCombination(rest, block_size - 1, rank);
    std::vector<MessageIndex> left;
    std::set_difference(rest.begin(), rest.end(), block.begin(), block.end(),
                        std::back_inserter(left));
    block.insert(block.begin(), remaining.front());
    blocks.push_back(std::move(block));
    remaining = std::move(left);
  }
  return blocks;
}

std::vector<size_t> BranchEnumerator::Permutation(size_t n) {
  std::vector<size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

FieldElement BranchEnumerator::Coefficient(const FieldParamsPtr& params,
                                           std::optional<uint32_t> exclude) {
  const uint64_t v = exclude && *exclude == 1 ? 2 : 1;
  return FieldElement::FromBase(params, v);
}

std::vector<MessageIndex> UnrankCombination(std::span<const MessageIndex> pool, size_t k,
                                            uint64_t rank) {
  std::vector<MessageIndex> out;
  size_t j = 0;
  while (k > 0) {
    const uint64_t with_j = CountCombinations(pool.size() - j - 1, k - 1);
    if (rank < with_j) {
      out.push_back(pool[j]);
      --k;
    } else {
      rank -= with_j;
    }
    ++j;
  }
  return out;
}

absl::StatusOr<BigInt> EstimateExactBranches(Model model, int K, int M, RpMutation mutation) {
  PIRCSI_RETURN_IF_ERROR(ValidateInstance(model, K, M));
  BigInt per_scenario = 0;
  BigInt scenarios = 0;
  if (model == Model::kI) {
    PIRCSI_ASSIGN_OR_RETURN(RpQueryBuilder builder, RpQueryBuilder::Create(K, M, mutation));
    const long n = builder.set_count();
    const long b = M + 1;
    for (const auto& [s, r] : builder.support()) {
      BigInt ways = Binomial(M, s) * Binomial(K - M - 1, r);
      const long pool = b * (n - 1) - 2L * r;
      const long fill = b - r;
      if (n >= 2) ways *= Binomial(pool, fill);
      if (n >= 3) ways *= Binomial(pool - fill, fill);
      if (n >= 4) ways *= SetPartitions(pool - 2 * fill, b);
      per_scenario += ways;
    }
    scenarios = Binomial(K - 1, M) * K;
  } else {
    switch (Csi2CaseFor(K, M)) {
      case CaseTag::kNone:
      case CaseTag::kCase4:
        per_scenario = 1;
        break;
      case CaseTag::kCase1:
        per_scenario = 2;
        break;
      case CaseTag::kCase2: {
        PIRCSI_ASSIGN_OR_RETURN(auto law, Case2Pmf(K, M));
        for (const auto& [r, mass] : law) {
          if (mass != 0) per_scenario += Binomial(K - M, r);
        }
        break;
      }
      case CaseTag::kCase3: {
        PIRCSI_ASSIGN_OR_RETURN(auto law, Case3Pmf(K, M));
        for (const auto& [s, mass] : law) {
          if (mass != 0) per_scenario += Binomial(M - 1, s);
        }
        break;
      }
    }
    scenarios = Binomial(K - 1, M - 1) * K;
  }
  return per_scenario * scenarios;
}

absl::StatusOr<PosteriorReport> AuditExact(Model model, int K, int M,
                                           const ExactAuditOptions& options) {
  PIRCSI_ASSIGN_OR_RETURN(BigInt estimate, EstimateExactBranches(model, K, M, options.mutation));
  if (estimate > BigInt(static_cast<long>(options.max_branches))) {
    return absl::ResourceExhaustedError(
        absl::StrCat("exact audit would walk ", estimate.get_str(), " branches (limit ",
                     options.max_branches, "); use the Monte-Carlo audit"));
  }
  PIRCSI_ASSIGN_OR_RETURN(FieldParamsPtr params, AuditField());
  PIRCSI_ASSIGN_OR_RETURN(Protocol protocol, Protocol::Create(model, K, M, options.mutation));

  const Rational prior =
      1 / Rational(model == Model::kI ? Binomial(K - 1, M) * K : Binomial(K - 1, M - 1) * K);
  std::map<Fingerprint, std::vector<Rational>> joint;
  long long branches = 0;
  PIRCSI_RETURN_IF_ERROR(ForEachScenario(
      model, K, M, [&](MessageIndex w, const std::vector<MessageIndex>& support) -> absl::Status {
        const Scenario sc = UnitScenario(model, w, support, params);
        BranchEnumerator e;
        do {
          PIRCSI_ASSIGN_OR_RETURN(BuiltQuery built, protocol.Build(sc, e));
          auto [it, inserted] = joint.try_emplace(CanonicalFingerprint(built.query));
          if (inserted) it->second.assign(static_cast<size_t>(K), Rational(0));
          it->second[w - 1] += prior * e.weight();
          ++branches;
        } while (e.Advance());
        return absl::OkStatus();
      }));

  PosteriorReport report;
  report.model = model;
  report.num_messages = K;
  report.side_size = M;
  report.branches = branches;
  const Rational flat = MakeRational(1, K);
  for (auto& [fp, row] : joint) {
    Rational total = 0;
    for (const Rational& x : row) total += x;
    PosteriorRow out;
    out.fingerprint = fp;
    for (const Rational& x : row) {
      out.likelihood.push_back(x * K);  // W is uniform on [K] under both models
      out.posterior.push_back(x / total);
      const Rational dev = abs(out.posterior.back() - flat);
      if (dev > report.worst_deviation) report.worst_deviation = dev;
    }
    report.rows.push_back(std::move(out));
  }
  report.uniform = report.worst_deviation == 0;
  return report;
}

double ChiSquareSurvival(double statistic, double dof) {
  if (dof <= 0) return 1.0;
  if (statistic <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

absl::StatusOr<MonteCarloReport> AuditMonteCarlo(Model model, int K, int M, long long trials,
                                                 Rng& rng, RpMutation mutation,
                                                 double family_alpha) {
  if (trials < kMinMonteCarloTrials) {
    return absl::InvalidArgumentError(
        absl::StrCat("Monte-Carlo audit needs at least ", kMinMonteCarloTrials, " trials, got ", trials));
  }
  if (!(family_alpha > 0 && family_alpha < 1)) {
    return absl::InvalidArgumentError("family alpha must lie in (0, 1)");
  }
  PIRCSI_ASSIGN_OR_RETURN(FieldParamsPtr params, AuditField());
  PIRCSI_ASSIGN_OR_RETURN(Protocol protocol, Protocol::Create(model, K, M, mutation));
  const Database db = Database::Random(params, static_cast<uint32_t>(K), rng);
  SeededSource source(rng);

  std::map<Fingerprint, std::vector<long long>> counts;
  // Slot of the first set holding W; the last category means "no set".
  std::vector<long long> slot_observed;
  std::vector<double> slot_expected;
  for (long long t = 0; t < trials; ++t) {
    PIRCSI_ASSIGN_OR_RETURN(Scenario sc, SampleScenario(db, M, model, rng));
    PIRCSI_ASSIGN_OR_RETURN(BuiltQuery built, protocol.Build(sc, source));
    const auto& sets = built.query.sets;
    auto [it, inserted] = counts.try_emplace(CanonicalFingerprint(built.query));
    if (inserted) it->second.assign(static_cast<size_t>(K), 0);
    ++it->second[sc.demand - 1];

    if (slot_observed.size() < sets.size() + 1) {
      slot_observed.resize(sets.size() + 1, 0);
      slot_expected.resize(sets.size() + 1, 0.0);
    }
    std::vector<size_t> first(static_cast<size_t>(K) + 1, sets.size());
    for (size_t j = sets.size(); j-- > 0;) {
      for (MessageIndex i : sets[j].indices) first[i] = j;
    }
    ++slot_observed[first[sc.demand]];
    for (int i = 1; i <= K; ++i) slot_expected[first[i]] += 1.0 / K;
  }

  MonteCarloReport report;
  report.model = model;
  report.num_messages = K;
  report.side_size = M;
  report.trials = trials;
  report.fingerprints = counts.size();
  report.family_alpha = family_alpha;

  double pooled = 0;
  double pooled_dof = 0;
  std::vector<ChiSquareResult> per_fp;
  for (const auto& [fp, row] : counts) {
    long long n = 0;
    for (long long c : row) n += c;
    if (n < 2) continue;  // a single draw carries no information
    const double x2 = UniformPearson(row);
    pooled += x2;
    pooled_dof += K - 1;
    if (static_cast<double>(n) / K >= kMinExpectedPerCell) {
      per_fp.push_back(MakeTest(absl::StrCat("fingerprint#", per_fp.size()), x2, K - 1));
    }
  }
  report.tests.push_back(MakeTest("pooled", pooled, pooled_dof));

  double slot_x2 = 0;
  int slot_cells = 0;
  bool impossible_slot = false;
  for (size_t j = 0; j < slot_observed.size(); ++j) {
    if (slot_expected[j] <= 1e-9) {
      if (slot_observed[j] > 0) impossible_slot = true;
      continue;
    }
    const double d = static_cast<double>(slot_observed[j]) - slot_expected[j];
    slot_x2 += d * d / slot_expected[j];
    ++slot_cells;
  }
  ChiSquareResult slot = MakeTest("slot", slot_x2, slot_cells - 1);
  if (impossible_slot) slot.p_value = 0;
  report.tests.push_back(slot);
  for (ChiSquareResult& t : per_fp) report.tests.push_back(std::move(t));

  report.threshold = family_alpha / static_cast<double>(report.tests.size());
  for (const ChiSquareResult& t : report.tests) {
    report.min_p_value = std::min(report.min_p_value, t.p_value);
  }
  report.passed = report.min_p_value >= report.threshold;
  return report;
}

absl::StatusOr<RecoverabilityReport> AuditRecoverability(Model model, int K, int M,
                                                         long long trials,
                                                         const FieldParamsPtr& params, Rng& rng,
                                                         const RecoverabilityOptions& options) {
  if (trials < 1) return absl::InvalidArgumentError("trials must be positive");
  if (!params) return absl::InvalidArgumentError("missing field parameters");
  PIRCSI_ASSIGN_OR_RETURN(Protocol protocol, Protocol::Create(model, K, M));
  SeededSource source(rng);
  RecoverabilityReport report;
  report.model = model;
  report.num_messages = K;
  report.side_size = M;
  report.field = params->ToString();
  report.trials = trials;
  for (long long t = 0; t < trials; ++t) {
    const Database db = Database::Random(params, static_cast<uint32_t>(K), rng);
    PIRCSI_ASSIGN_OR_RETURN(Scenario sc, SampleScenario(db, M, model, rng));
    PIRCSI_ASSIGN_OR_RETURN(BuiltQuery built, protocol.Build(sc, source));
    PIRCSI_RETURN_IF_ERROR(ValidateQuery(built.query, params, static_cast<uint32_t>(K)));
    PIRCSI_ASSIGN_OR_RETURN(Answer answer, ServeQuery(db, built.query));
    if (options.corrupt_demand_answer && built.state.demand_slot < answer.values.size()) {
      FieldElement& a = answer.values[built.state.demand_slot];
      a = a + FieldElement::One(params);
    }
    absl::StatusOr<FieldElement> decoded = RecoverDemand(answer, built.state);
    if (decoded.ok() && *decoded == db.message(sc.demand)) {
      ++report.successes;
    } else if (report.first_failure.empty()) {
      report.first_failure =
          decoded.ok() ? absl::StrCat("trial ", t, ": decoded ", decoded->ToString(), ", expected ",
                                      db.message(sc.demand).ToString())
                       : absl::StrCat("trial ", t, ": ", decoded.status().ToString());
    }
  }
  return report;
}

absl::StatusOr<RateReport> MeasureRate(Model model, int K, int M) {
  PIRCSI_ASSIGN_OR_RETURN(FieldParamsPtr params, AuditField());
  PIRCSI_ASSIGN_OR_RETURN(Protocol protocol, Protocol::Create(model, K, M));
  Rng rng(static_cast<uint64_t>(K) * 1000 + static_cast<uint64_t>(M));
  const Database db = Database::Random(params, static_cast<uint32_t>(K), rng);
  PIRCSI_ASSIGN_OR_RETURN(Scenario sc, SampleScenario(db, M, model, rng));
  SeededSource source(rng);
  PIRCSI_ASSIGN_OR_RETURN(BuiltQuery built, protocol.Build(sc, source));
  RateReport report;
  report.model = model;
  report.num_messages = K;
  report.side_size = M;
  report.elements = static_cast<long long>(DownloadCount(built.query));
  report.measured = Rate::FromDownload(static_cast<long>(report.elements));
  PIRCSI_ASSIGN_OR_RETURN(report.capacity, Capacity(model, K, M));
  report.equal = report.measured == report.capacity;
  return report;
}

}  // namespace pircsi
