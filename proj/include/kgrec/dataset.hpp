#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kgrec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed input files; the message carries the line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

using RawId = std::int64_t;
using UserId = std::int64_t;  // internal, [0, num_users)
using ItemId = std::int64_t;  // internal, [0, num_items)
using EntityId = std::int64_t;
using RelationId = std::int64_t;

enum class InteractionFormat { Adjacency, Pairs };

struct RawPair {
  RawId user;
  RawId item;
  bool operator==(const RawPair&) const = default;
};

/// Parses an interaction file into (raw-user, raw-item) pairs in file order.
/// Adjacency lines are "user item item ..."; pairs lines are "user<TAB>item".
/// Duplicates are preserved; dedup happens in build_dataset.
std::vector<RawPair> load_interactions(const std::filesystem::path& path,
                                       InteractionFormat format);

/// Implicit-feedback interactions with contiguous internal ids and
/// train/validation/test partitions. Immutable once built; safe to share
/// across threads.
struct InteractionDataset {
  std::string name = "dataset";
  std::int64_t num_users = 0;
  std::int64_t num_items = 0;
  std::vector<RawId> user_ids;  // internal user id -> raw id
  std::vector<RawId> item_ids;  // internal item id -> raw id
  // Per-user item lists, strictly increasing, pairwise disjoint.
  std::vector<std::vector<ItemId>> train_pos;
  std::vector<std::vector<ItemId>> valid_pos;
  std::vector<std::vector<ItemId>> test_pos;
  std::int64_t num_cold_users = 0;  // users first seen in the test split
  std::int64_t num_cold_items = 0;  // items first seen in the test split
  std::vector<std::string> warnings;

  std::int64_t train_count() const;
  std::int64_t valid_count() const;
  std::int64_t test_count() const;

  std::int64_t num_entities() const { return num_users + num_items; }
  EntityId item_entity(ItemId i) const { return num_users + i; }
  ItemId entity_item(EntityId e) const { return e - num_users; }

  /// Checks all structural invariants; throws Error on violation.
  void validate() const;
};

/// Single-relation graph recast of the train split: one
/// <user, 0, num_users + item> triple per train positive, ascending (u, i).
struct Triple {
  EntityId subject;
  RelationId relation;
  EntityId object;
  bool operator==(const Triple&) const = default;
};

struct TripleGraph {
  std::int64_t num_entities = 0;
  std::int64_t num_relations = 1;
  std::int64_t num_users = 0;  // subjects are [0, num_users)
  std::int64_t num_items = 0;  // objects are [num_users, num_users+num_items)
  std::vector<Triple> triples;
};

struct DatasetStats {
  std::int64_t num_users = 0;
  std::int64_t num_items = 0;
  std::int64_t num_interactions = 0;  // train + valid + test
  double sparsity = 0.0;              // 1 - interactions / (users * items)
};

/// Assigns contiguous ids in first-appearance order (train pairs first, then
/// test pairs), drops duplicate interactions, and moves a per-user fraction
/// of train positives into the validation split with the seeded sampler.
InteractionDataset build_dataset(const std::vector<RawPair>& train_pairs,
                                 const std::vector<RawPair>& test_pairs,
                                 double valid_fraction, std::uint64_t seed,
                                 std::string name = "dataset");

/// Returns a copy with train+valid merged and a fresh per-user holdout drawn
/// with the given seed. Used for the multiple validation splittings of the
/// hyper-parameter search.
InteractionDataset reslice_validation(const InteractionDataset& dataset,
                                      double valid_fraction,
                                      std::uint64_t seed);

TripleGraph recast_to_triples(const InteractionDataset& dataset);

DatasetStats dataset_stats(const InteractionDataset& dataset);

/// Loads a corpus directory: either a prepared cache (meta.tsv present) or a
/// raw corpus with train.txt and optional test.txt in the given format.
InteractionDataset load_corpus_dir(const std::filesystem::path& dir,
                                   InteractionFormat format,
                                   double valid_fraction, std::uint64_t seed,
                                   std::string name = "");

/// Prepared-cache round trip. Files are written atomically with LF line ends
/// so identical inputs produce byte-identical caches.
void save_prepared(const InteractionDataset& dataset,
                   const std::filesystem::path& dir);
InteractionDataset load_prepared(const std::filesystem::path& dir);
bool is_prepared_dir(const std::filesystem::path& dir);

}  // namespace kgrec
