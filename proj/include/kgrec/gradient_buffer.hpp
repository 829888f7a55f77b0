#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "kgrec/dataset.hpp"

namespace kgrec {

struct EmbeddingModel;

enum class ParamTable : std::uint8_t { Entity = 0, EntityObj = 1, Relation = 2 };

struct ParamRef {
  ParamTable table;
  std::int64_t row;
  bool operator==(const ParamRef&) const = default;
};

/// Sparse per-row gradient accumulator. Rows are created on first touch and
/// kept in first-touch order so that every reduction over the buffer is
/// deterministic. `reg_rows` records, with multiplicity, the rows the batch's
/// training units touched; the regularizer penalizes exactly those.
class GradientBuffer {
 public:
  explicit GradientBuffer(const EmbeddingModel& model);

  std::span<double> entity(EntityId e) { return row(ParamTable::Entity, e); }
  std::span<double> entity_obj(EntityId e) { return row(ParamTable::EntityObj, e); }
  std::span<double> relation(RelationId r) { return row(ParamTable::Relation, r); }
  std::span<double> row(ParamTable table, std::int64_t index);

  void mark_regularized(ParamTable table, std::int64_t row);
  const std::vector<ParamRef>& reg_rows() const { return reg_rows_; }

  struct Entry {
    ParamRef ref;
    std::span<const double> grad;
  };
  /// Rows in first-touch order.
  std::vector<Entry> entries() const;

  void clear();
  std::int64_t width() const { return width_; }
  bool empty() const { return keys_.empty(); }

 private:
  std::int64_t width_;
  std::unordered_map<std::uint64_t, std::size_t> index_;  // packed key -> slot
  std::vector<ParamRef> keys_;                            // first-touch order
  std::vector<std::vector<double>> rows_;
  std::vector<ParamRef> reg_rows_;
};

}  // namespace kgrec
