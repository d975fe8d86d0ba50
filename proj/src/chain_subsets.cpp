#include <cmath>
#include <limits>
#include <string>

#include "dmlimits/finite_chain.hpp"

namespace dmlimits {

namespace {

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
  double pi = 0.0;
  double eps = 0.0;
  std::uint64_t scanned = 0;
};

bool better(const Candidate& a, const Candidate& b) {
  return a.value < b.value || (a.value == b.value && a.mask < b.mask);
}

enum class Kind { A, B };

struct SubsetScan {
  const FiniteChain& chain;
  const Distribution& pi;
  Kind kind;

  // Evaluates one subset; returns false when it does not qualify.
  bool evaluate(std::uint64_t mask, Candidate& out, std::vector<double>& colmin) const {
    const std::size_t n = chain.size();
    double mass = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      if (mask >> x & 1U) mass += pi[x];
    if (kind == Kind::A ? !(mass > 0.0) : !(mass > 0.5 + kChainTolerance)) return false;
    colmin.assign(n, std::numeric_limits<double>::infinity());
    for (std::size_t x = 0; x < n; ++x) {
      if (!(mask >> x & 1U)) continue;
      for (std::size_t y = 0; y < n; ++y) colmin[y] = std::min(colmin[y], chain(x, y));
    }
    double eps = 0.0;
    for (double c : colmin) eps += c;
    eps = std::min(eps, 1.0);
    out.mask = mask;
    out.pi = mass;
    out.eps = eps;
    out.value = kind == Kind::A ? chain_specific_lower_A(Probability(eps), Probability::clamped(mass, 1e-9)).value()
                                : chain_specific_lower_B(Probability(eps)).value();
    return true;
  }

  Candidate run_serial() const {
    const std::uint64_t end = std::uint64_t{1} << chain.size();
    Candidate best;
    Candidate c;
    std::vector<double> colmin;
    for (std::uint64_t mask = 1; mask < end; ++mask) {
      if (!evaluate(mask, c, colmin)) continue;
      ++best.scanned;
      if (better(c, best)) {
        const auto scanned = best.scanned;
        best = c;
        best.scanned = scanned;
      }
    }
    return best;
  }

  Candidate run_parallel() const {
    const auto end = static_cast<std::int64_t>(std::uint64_t{1} << chain.size());
    Candidate best;
#pragma omp parallel num_threads(max_threads())
    {
      Candidate local;
      Candidate c;
      std::vector<double> colmin;
#pragma omp for schedule(static)
      for (std::int64_t mask = 1; mask < end; ++mask) {
        if (!evaluate(static_cast<std::uint64_t>(mask), c, colmin)) continue;
        ++local.scanned;
        if (better(c, local)) {
          const auto scanned = local.scanned;
          local = c;
          local.scanned = scanned;
        }
      }
#pragma omp critical(dmlimits_subset_merge)
      {
        const auto scanned = best.scanned + local.scanned;
        if (better(local, best)) best = local;
        best.scanned = scanned;
      }
    }
    return best;
  }
};

SubsetFloor scan(const FiniteChain& chain, Kind kind, Exec exec) {
  const std::size_t n = chain.size();
  if (n > kSubsetMaxStates)
    throw PreconditionError("subset enumeration is capped at " + std::to_string(kSubsetMaxStates) + " states, got " +
                            std::to_string(n));
  const auto st = stationary_distribution(chain);
  if (!st.unique) throw PreconditionError("subset floors require a unique stationary law");
  const SubsetScan job{chain, st.pi, kind};
  const Candidate best = exec == Exec::parallel ? job.run_parallel() : job.run_serial();

  SubsetFloor out{best.value, {}, best.pi, best.eps, best.scanned, {}};
  for (std::size_t x = 0; x < n; ++x)
    if (best.mask >> x & 1U) out.best_set.push_back(x);
  if (n > kSubsetWarnStates)
    out.warnings.push_back("enumerating " + std::to_string((std::uint64_t{1} << n) - 1) + " subsets of a " +
                           std::to_string(n) + "-state chain");
  return out;
}

}  // namespace

SubsetFloor chain_floor_A(const FiniteChain& chain, Exec exec) { return scan(chain, Kind::A, exec); }

SubsetFloor chain_floor_B(const FiniteChain& chain, Exec exec) { return scan(chain, Kind::B, exec); }

}  // namespace dmlimits
