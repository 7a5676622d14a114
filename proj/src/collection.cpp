#include "cpc/collection.hpp"

#include <algorithm>
#include <unordered_set>

namespace cpc {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kNfd: return "NFD";
    case Provenance::kNfi: return "NFI";
    case Provenance::kCbp: return "CBP";
    case Provenance::kGamer: return "GAMER";
    case Provenance::kManual: return "manual";
  }
  return "unknown";
}

std::vector<Pattern> PdbCollection::patterns() const {
  std::vector<Pattern> out;
  out.reserve(pdbs.size());
  for (const auto& pdb : pdbs) out.push_back(pdb->pattern());
  return out;
}

bool PdbCollection::has_partial() const {
  return std::any_of(pdbs.begin(), pdbs.end(), [](const auto& p) { return p->is_partial(); });
}

std::size_t PdbCollection::memory_bytes() const {
  std::size_t bytes = 0;
  for (const auto& p : pdbs) bytes += p->memory_bytes();
  return bytes;
}

Cost collection_heuristic(const PdbCollection& c, const State& s) {
  Cost sum = 0;
  for (const auto& pdb : c.pdbs) {
    sum = add_costs(sum, pdb->lookup(s));
    if (sum == kInfiniteCost) break;
  }
  return sum;
}

std::size_t CollectionSet::memory_bytes() const {
  // Collections may share PDB objects; count each once.
  std::unordered_set<const Pdb*> seen;
  std::size_t bytes = 0;
  for (const auto& c : collections_) {
    for (const auto& p : c.pdbs) {
      if (seen.insert(p.get()).second) bytes += p->memory_bytes();
    }
  }
  return bytes;
}

Cost max_heuristic(const CollectionSet& set, const State& s) {
  Cost best = 0;
  for (const auto& c : set.collections()) {
    best = std::max(best, collection_heuristic(c, s));
    if (best == kInfiniteCost) break;
  }
  return best;
}

PdbCollection build_collection(const SasTask& task, std::span<const Pattern> patterns, Provenance provenance,
                               const PdbLimits& limits, Clock& clock) {
  PdbCollection c;
  c.provenance = provenance;
  const auto costs = apply_zero_one_partition(task, patterns);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (auto pdb = build_pdb(task, patterns[i], costs[i], limits, clock)) {
      c.pdbs.push_back(std::make_shared<const Pdb>(std::move(*pdb)));
    }
  }
  return c;
}

}  // namespace cpc
