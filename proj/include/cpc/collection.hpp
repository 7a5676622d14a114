#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cpc/clock.hpp"
#include "cpc/pdb.hpp"

namespace cpc {

enum class Provenance { kNfd, kNfi, kCbp, kGamer, kManual };

std::string to_string(Provenance p);

/// PDBs sharing one zero-one cost partition; their values add up.
struct PdbCollection {
  std::vector<std::shared_ptr<const Pdb>> pdbs;
  Provenance provenance = Provenance::kManual;
  std::uint64_t creation_seq = 0;

  std::vector<Pattern> patterns() const;
  bool has_partial() const;
  std::size_t memory_bytes() const;
};

/// Sum of member lookups; kInfiniteCost if any member proves a dead end.
Cost collection_heuristic(const PdbCollection& c, const State& s);

/// Canonical combination: maximum over collections, 0 when empty.
class CollectionSet {
 public:
  std::vector<PdbCollection>& collections() { return collections_; }
  const std::vector<PdbCollection>& collections() const { return collections_; }
  std::size_t size() const { return collections_.size(); }
  bool empty() const { return collections_.empty(); }
  void add(PdbCollection c) { collections_.push_back(std::move(c)); }

  std::size_t memory_bytes() const;

 private:
  std::vector<PdbCollection> collections_;
};

Cost max_heuristic(const CollectionSet& set, const State& s);

/// Zero-one partitions the patterns in the given order and builds one PDB
/// per pattern. Patterns whose build is refused are left out. Returns an
/// empty collection when every build is refused.
PdbCollection build_collection(const SasTask& task, std::span<const Pattern> patterns, Provenance provenance,
                               const PdbLimits& limits, Clock& clock);

}  // namespace cpc
