#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgrec/dataset.hpp"

namespace kgrec {

enum class ModelKind { TransE, DistMult, CP, ComplEx, MF };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);

struct InitSpec {
  enum class Scheme { Uniform, Normal };
  Scheme scheme = Scheme::Uniform;
  double scale = 0.1;  // uniform: half-width; normal: standard deviation
  std::uint64_t seed = 0;

  /// Uniform in [-0.1/sqrt(dim), 0.1/sqrt(dim)].
  static InitSpec default_for(std::int64_t dim, std::uint64_t seed);
};

class GradientBuffer;

/// Embedding tables for one scoring kind. ComplEx stores k complex
/// components as 2k reals per row, real block first. CP keeps a second
/// entity table for object-role rows. MF has no relation table; its score
/// ignores the relation argument.
struct EmbeddingModel {
  ModelKind kind = ModelKind::DistMult;
  std::int64_t dim = 0;
  std::int64_t num_entities = 0;
  std::int64_t num_relations = 0;
  std::vector<double> entity_table;      // num_entities x width, row-major
  std::vector<double> entity_table_obj;  // present iff kind == CP
  std::vector<double> relation_table;    // num_relations x width; empty for MF

  std::int64_t width() const { return kind == ModelKind::ComplEx ? 2 * dim : dim; }
  bool has_object_table() const { return kind == ModelKind::CP; }
  bool has_relation_table() const { return kind != ModelKind::MF; }

  std::span<const double> entity_row(EntityId e) const;
  std::span<const double> entity_obj_row(EntityId e) const;
  std::span<const double> relation_row(RelationId r) const;
  std::span<double> entity_row(EntityId e);
  std::span<double> entity_obj_row(EntityId e);
  std::span<double> relation_row(RelationId r);

  /// Row used when the entity appears in object position (CP uses the
  /// second table; all other kinds share one table).
  std::span<const double> object_role_row(EntityId e) const {
    return kind == ModelKind::CP ? entity_obj_row(e) : entity_row(e);
  }

  bool all_finite() const;
  std::int64_t parameter_count() const;
};

EmbeddingModel init_model(ModelKind kind, std::int64_t dim,
                          std::int64_t num_entities, std::int64_t num_relations,
                          const InitSpec& init);

/// phi(s, p, o) for the model's kind. TransE is -||s + p - o||_2 (always
/// <= 0); DistMult / CP / ComplEx are tri-linear forms; MF is the plain
/// user-item dot product.
double score_triple(const EmbeddingModel& model, EntityId s, RelationId p,
                    EntityId o);

/// Scores a contiguous candidate range [first, last) in object position;
/// out[j] == score_triple(model, s, p, first + j) exactly.
void score_candidates(const EmbeddingModel& model, EntityId s, RelationId p,
                      EntityId first, EntityId last, std::span<double> out);
std::vector<double> score_candidates(const EmbeddingModel& model, EntityId s,
                                     RelationId p, EntityId first,
                                     EntityId last);

/// Scores subject candidates [first, last) against a fixed (p, o).
void score_subject_candidates(const EmbeddingModel& model, RelationId p,
                              EntityId o, EntityId first, EntityId last,
                              std::span<double> out);

/// Accumulates coeff * d phi(s,p,o) / d params into the buffer.
void accumulate_score_gradient(const EmbeddingModel& model, EntityId s,
                               RelationId p, EntityId o, double coeff,
                               GradientBuffer& grads);

}  // namespace kgrec
