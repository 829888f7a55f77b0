#include "kgrec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "kgrec/rng.hpp"
#include "kgrec/text_io.hpp"

namespace kgrec {

namespace {

std::string location(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

std::int64_t parse_id(std::string_view token, const std::filesystem::path& path,
                      std::size_t line_no) {
  std::int64_t value = 0;
  if (!parse_int64(token, value)) {
    throw ParseError(location(path, line_no) + ": expected integer id, got '" +
                     std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> whitespace_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::int64_t count_of(const std::vector<std::vector<ItemId>>& lists) {
  std::int64_t total = 0;
  for (const auto& l : lists) total += static_cast<std::int64_t>(l.size());
  return total;
}

/// Moves floor(fraction * n) seeded picks from `pool` into the returned
/// holdout; both outputs end up sorted.
std::vector<ItemId> hold_out(std::vector<ItemId>& pool, double fraction,
                             std::uint64_t seed, UserId user) {
  const auto n = pool.size();
  const auto holdout_size =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  std::vector<ItemId> held;
  if (holdout_size == 0) return held;
  Rng rng(seed, substream(RngStream::Split, static_cast<std::uint64_t>(user)));
  for (std::size_t k = 0; k < holdout_size; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.next_below(n - k));
    std::swap(pool[k], pool[j]);
  }
  held.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(holdout_size));
  pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(holdout_size));
  std::sort(held.begin(), held.end());
  std::sort(pool.begin(), pool.end());
  return held;
}

}  // namespace

std::vector<RawPair> load_interactions(const std::filesystem::path& path,
                                       InteractionFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());

  std::vector<RawPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  bool saw_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (format == InteractionFormat::Adjacency) {
      const auto tokens = whitespace_tokens(line);
      if (tokens.empty()) continue;  // blank line
      saw_content = true;
      const RawId user = parse_id(tokens[0], path, line_no);
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        pairs.push_back({user, parse_id(tokens[t], path, line_no)});
      }
    } else {
      if (line.empty()) continue;
      saw_content = true;
      const auto fields = split(line, '\t');
      if (fields.size() != 2) {
        throw ParseError(location(path, line_no) +
                         ": expected 'user<TAB>item', got " +
                         std::to_string(fields.size()) + " field(s)");
      }
      pairs.push_back({parse_id(fields[0], path, line_no),
                       parse_id(fields[1], path, line_no)});
    }
  }
  if (!saw_content) throw Error("empty interaction file: " + path.string());
  return pairs;
}

std::int64_t InteractionDataset::train_count() const { return count_of(train_pos); }
std::int64_t InteractionDataset::valid_count() const { return count_of(valid_pos); }
std::int64_t InteractionDataset::test_count() const { return count_of(test_pos); }

void InteractionDataset::validate() const {
  if (num_users != static_cast<std::int64_t>(user_ids.size()) ||
      num_items != static_cast<std::int64_t>(item_ids.size())) {
    throw Error("dataset: id map sizes disagree with counts");
  }
  const auto check_lists = [&](const std::vector<std::vector<ItemId>>& lists,
                               const char* which) {
    if (static_cast<std::int64_t>(lists.size()) != num_users) {
      throw Error(std::string("dataset: ") + which + " has wrong user count");
    }
    for (const auto& items : lists) {
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (items[k] < 0 || items[k] >= num_items) {
          throw Error(std::string("dataset: ") + which + " item id out of range");
        }
        if (k > 0 && items[k] <= items[k - 1]) {
          throw Error(std::string("dataset: ") + which +
                      " list not strictly increasing");
        }
      }
    }
  };
  check_lists(train_pos, "train_pos");
  check_lists(valid_pos, "valid_pos");
  check_lists(test_pos, "test_pos");
  for (UserId u = 0; u < num_users; ++u) {
    auto overlaps = [&](const std::vector<ItemId>& a,
                        const std::vector<ItemId>& b) {
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        (a[i] < b[j]) ? ++i : ++j;
      }
      return false;
    };
    if (overlaps(train_pos[u], valid_pos[u]) ||
        overlaps(train_pos[u], test_pos[u]) ||
        overlaps(valid_pos[u], test_pos[u])) {
      throw Error("dataset: partitions overlap for user " + std::to_string(u));
    }
  }
}

InteractionDataset build_dataset(const std::vector<RawPair>& train_pairs,
                                 const std::vector<RawPair>& test_pairs,
                                 double valid_fraction, std::uint64_t seed,
                                 std::string name) {
  if (train_pairs.empty()) throw Error("build_dataset: train pairs are empty");
  if (valid_fraction < 0.0 || valid_fraction >= 1.0) {
    throw Error("build_dataset: valid_fraction must be in [0, 1)");
  }

  InteractionDataset ds;
  ds.name = std::move(name);

  std::unordered_map<RawId, std::int64_t> user_map;
  std::unordered_map<RawId, std::int64_t> item_map;
  auto intern = [](std::unordered_map<RawId, std::int64_t>& map,
                   std::vector<RawId>& ids, RawId raw) {
    auto [it, inserted] = map.try_emplace(raw, static_cast<std::int64_t>(ids.size()));
    if (inserted) ids.push_back(raw);
    return it->second;
  };

  std::vector<std::pair<UserId, ItemId>> train_internal;
  train_internal.reserve(train_pairs.size());
  for (const auto& p : train_pairs) {
    train_internal.emplace_back(intern(user_map, ds.user_ids, p.user),
                                intern(item_map, ds.item_ids, p.item));
  }
  const auto train_user_count = static_cast<std::int64_t>(ds.user_ids.size());
  const auto train_item_count = static_cast<std::int64_t>(ds.item_ids.size());

  std::vector<std::pair<UserId, ItemId>> test_internal;
  test_internal.reserve(test_pairs.size());
  for (const auto& p : test_pairs) {
    test_internal.emplace_back(intern(user_map, ds.user_ids, p.user),
                               intern(item_map, ds.item_ids, p.item));
  }
  ds.num_users = static_cast<std::int64_t>(ds.user_ids.size());
  ds.num_items = static_cast<std::int64_t>(ds.item_ids.size());
  ds.num_cold_users = ds.num_users - train_user_count;
  ds.num_cold_items = ds.num_items - train_item_count;
  if (ds.num_cold_users > 0) {
    ds.warnings.push_back("test split introduces " +
                          std::to_string(ds.num_cold_users) +
                          " user(s) never seen in train");
  }
  if (ds.num_cold_items > 0) {
    ds.warnings.push_back("test split introduces " +
                          std::to_string(ds.num_cold_items) +
                          " item(s) never seen in train");
  }

  ds.train_pos.assign(static_cast<std::size_t>(ds.num_users), {});
  ds.valid_pos.assign(static_cast<std::size_t>(ds.num_users), {});
  ds.test_pos.assign(static_cast<std::size_t>(ds.num_users), {});

  for (const auto& [u, i] : train_internal) ds.train_pos[static_cast<std::size_t>(u)].push_back(i);
  for (const auto& [u, i] : test_internal) ds.test_pos[static_cast<std::size_t>(u)].push_back(i);

  std::int64_t dropped_overlap = 0;
  for (UserId u = 0; u < ds.num_users; ++u) {
    auto& train = ds.train_pos[static_cast<std::size_t>(u)];
    auto& test = ds.test_pos[static_cast<std::size_t>(u)];
    std::sort(train.begin(), train.end());
    train.erase(std::unique(train.begin(), train.end()), train.end());
    std::sort(test.begin(), test.end());
    test.erase(std::unique(test.begin(), test.end()), test.end());
    // keep partitions disjoint: an interaction listed in both splits stays in train
    const auto before = test.size();
    test.erase(std::remove_if(test.begin(), test.end(),
                              [&](ItemId i) {
                                return std::binary_search(train.begin(),
                                                          train.end(), i);
                              }),
               test.end());
    dropped_overlap += static_cast<std::int64_t>(before - test.size());
  }
  if (dropped_overlap > 0) {
    ds.warnings.push_back("dropped " + std::to_string(dropped_overlap) +
                          " test interaction(s) already present in train");
  }

  if (valid_fraction > 0.0) {
    for (UserId u = 0; u < ds.num_users; ++u) {
      auto& train = ds.train_pos[static_cast<std::size_t>(u)];
      ds.valid_pos[static_cast<std::size_t>(u)] =
          hold_out(train, valid_fraction, seed, u);
    }
  }
  return ds;
}

InteractionDataset reslice_validation(const InteractionDataset& dataset,
                                      double valid_fraction,
                                      std::uint64_t seed) {
  if (valid_fraction < 0.0 || valid_fraction >= 1.0) {
    throw Error("reslice_validation: valid_fraction must be in [0, 1)");
  }
  InteractionDataset ds = dataset;
  for (UserId u = 0; u < ds.num_users; ++u) {
    auto& train = ds.train_pos[static_cast<std::size_t>(u)];
    auto& valid = ds.valid_pos[static_cast<std::size_t>(u)];
    std::vector<ItemId> merged;
    merged.reserve(train.size() + valid.size());
    std::merge(train.begin(), train.end(), valid.begin(), valid.end(),
               std::back_inserter(merged));
    train = std::move(merged);
    valid.clear();
    if (valid_fraction > 0.0) valid = hold_out(train, valid_fraction, seed, u);
  }
  return ds;
}

TripleGraph recast_to_triples(const InteractionDataset& dataset) {
  TripleGraph graph;
  graph.num_entities = dataset.num_entities();
  graph.num_relations = 1;
  graph.num_users = dataset.num_users;
  graph.num_items = dataset.num_items;
  graph.triples.reserve(static_cast<std::size_t>(dataset.train_count()));
  for (UserId u = 0; u < dataset.num_users; ++u) {
    for (const ItemId i : dataset.train_pos[static_cast<std::size_t>(u)]) {
      graph.triples.push_back({u, 0, dataset.item_entity(i)});
    }
  }
  return graph;
}

DatasetStats dataset_stats(const InteractionDataset& dataset) {
  DatasetStats stats;
  stats.num_users = dataset.num_users;
  stats.num_items = dataset.num_items;
  stats.num_interactions =
      dataset.train_count() + dataset.valid_count() + dataset.test_count();
  const double cells = static_cast<double>(dataset.num_users) *
                       static_cast<double>(dataset.num_items);
  stats.sparsity =
      cells > 0.0 ? 1.0 - static_cast<double>(stats.num_interactions) / cells
                  : 0.0;
  return stats;
}

namespace {

constexpr const char* kMetaFile = "meta.tsv";

std::string adjacency_lines(const std::vector<std::vector<ItemId>>& lists) {
  std::string out;
  for (std::size_t u = 0; u < lists.size(); ++u) {
    out += std::to_string(u);
    for (const ItemId i : lists[u]) {
      out += ' ';
      out += std::to_string(i);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<ItemId>> read_internal_adjacency(
    const std::filesystem::path& path, std::int64_t num_users,
    std::int64_t num_items) {
  std::vector<std::vector<ItemId>> lists(static_cast<std::size_t>(num_users));
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = whitespace_tokens(line);
    if (tokens.empty()) continue;
    const auto u = parse_id(tokens[0], path, line_no);
    if (u < 0 || u >= num_users) {
      throw ParseError(location(path, line_no) + ": user id out of range");
    }
    auto& items = lists[static_cast<std::size_t>(u)];
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto i = parse_id(tokens[t], path, line_no);
      if (i < 0 || i >= num_items) {
        throw ParseError(location(path, line_no) + ": item id out of range");
      }
      items.push_back(i);
    }
  }
  return lists;
}

std::vector<RawId> read_id_column(const std::filesystem::path& path) {
  std::vector<RawId> ids;
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ids.push_back(parse_id(line, path, line_no));
  }
  return ids;
}

}  // namespace

bool is_prepared_dir(const std::filesystem::path& dir) {
  return std::filesystem::exists(dir / kMetaFile);
}

void save_prepared(const InteractionDataset& dataset,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string meta;
  meta += "name\t" + dataset.name + "\n";
  meta += "num_users\t" + std::to_string(dataset.num_users) + "\n";
  meta += "num_items\t" + std::to_string(dataset.num_items) + "\n";
  meta += "num_cold_users\t" + std::to_string(dataset.num_cold_users) + "\n";
  meta += "num_cold_items\t" + std::to_string(dataset.num_cold_items) + "\n";
  atomic_write_file(dir / kMetaFile, meta);

  std::string users, items;
  for (const RawId r : dataset.user_ids) users += std::to_string(r) + "\n";
  for (const RawId r : dataset.item_ids) items += std::to_string(r) + "\n";
  atomic_write_file(dir / "users.tsv", users);
  atomic_write_file(dir / "items.tsv", items);
  atomic_write_file(dir / "train.adj", adjacency_lines(dataset.train_pos));
  atomic_write_file(dir / "valid.adj", adjacency_lines(dataset.valid_pos));
  atomic_write_file(dir / "test.adj", adjacency_lines(dataset.test_pos));
}

InteractionDataset load_prepared(const std::filesystem::path& dir) {
  InteractionDataset ds;
  const auto meta_path = dir / kMetaFile;
  std::ifstream in(meta_path);
  if (!in) throw Error("cannot open file: " + meta_path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(location(meta_path, line_no) + ": expected key<TAB>value");
    }
    const std::string key(fields[0]);
    if (key == "name") {
      ds.name = std::string(fields[1]);
    } else if (key == "num_users") {
      ds.num_users = parse_id(fields[1], meta_path, line_no);
    } else if (key == "num_items") {
      ds.num_items = parse_id(fields[1], meta_path, line_no);
    } else if (key == "num_cold_users") {
      ds.num_cold_users = parse_id(fields[1], meta_path, line_no);
    } else if (key == "num_cold_items") {
      ds.num_cold_items = parse_id(fields[1], meta_path, line_no);
    } else {
      throw ParseError(location(meta_path, line_no) + ": unknown key '" + key + "'");
    }
  }
  ds.user_ids = read_id_column(dir / "users.tsv");
  ds.item_ids = read_id_column(dir / "items.tsv");
  ds.train_pos = read_internal_adjacency(dir / "train.adj", ds.num_users, ds.num_items);
  ds.valid_pos = read_internal_adjacency(dir / "valid.adj", ds.num_users, ds.num_items);
  ds.test_pos = read_internal_adjacency(dir / "test.adj", ds.num_users, ds.num_items);
  ds.validate();
  return ds;
}

InteractionDataset load_corpus_dir(const std::filesystem::path& dir,
                                   InteractionFormat format,
                                   double valid_fraction, std::uint64_t seed,
                                   std::string name) {
  if (name.empty()) {
    name = dir.filename().string();
    if (name.empty()) name = dir.parent_path().filename().string();
    if (name.empty()) name = "dataset";
  }
  if (is_prepared_dir(dir)) {
    auto ds = load_prepared(dir);
    if (!name.empty()) ds.name = name;
    return ds;
  }
  const auto train_path = dir / "train.txt";
  const auto test_path = dir / "test.txt";
  const auto train_pairs = load_interactions(train_path, format);
  std::vector<RawPair> test_pairs;
  if (std::filesystem::exists(test_path)) {
    test_pairs = load_interactions(test_path, format);
  }
  return build_dataset(train_pairs, test_pairs, valid_fraction, seed, name);
}

}  // namespace kgrec
