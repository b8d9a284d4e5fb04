#include "predjoin/cardinality.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <unordered_set>

#include <json.hpp>

#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"
#include "predjoin/keys.hpp"

namespace predjoin {

AliasSet full_set(const QuerySpec& query) {
  return query.relations.size() >= 32 ? ~AliasSet{0} : (AliasSet{1} << query.relations.size()) - 1;
}

namespace {

AliasSet bit(std::size_t i) { return AliasSet{1} << i; }

bool in_set(const QuerySpec& q, AliasSet set, const std::string& alias) {
  return (set & bit(q.alias_index(alias))) != 0;
}

}  // namespace

bool joined(const QuerySpec& query, AliasSet a, AliasSet b) {
  for (const auto& p : query.join_preds) {
    const AliasSet l = bit(query.alias_index(p.left.alias));
    const AliasSet r = bit(query.alias_index(p.right.alias));
    if (((l & a) && (r & b)) || ((l & b) && (r & a))) return true;
  }
  return false;
}

bool is_connected(const QuerySpec& query, AliasSet set) {
  if (set == 0) return false;
  AliasSet reached = set & (~set + 1);  // lowest bit
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& p : query.join_preds) {
      const AliasSet l = bit(query.alias_index(p.left.alias));
      const AliasSet r = bit(query.alias_index(p.right.alias));
      if (!(l & set) || !(r & set)) continue;
      if ((l & reached) && !(r & reached)) {
        reached |= r;
        grew = true;
      } else if ((r & reached) && !(l & reached)) {
        reached |= l;
        grew = true;
      }
    }
  }
  return reached == set;
}

namespace {

struct AliasRows {
  const Table* table = nullptr;
  std::vector<std::uint32_t> rows;  // rows passing the alias's filters
};

bool passes(const Table& table, const FilterPredicate& f, std::size_t row) {
  const std::size_t col = table.column_index(f.column.column);
  if (f.type == DataType::Str) return compare(table.strings(col)[row], f.op, std::get<std::string>(f.constant));
  return compare(table.ints(col)[row], f.op, std::get<std::int64_t>(f.constant));
}

AliasRows filtered_rows(const Catalog& catalog, const QuerySpec& q, std::size_t rel) {
  AliasRows out;
  out.table = &catalog.table(q.relations[rel].table);
  std::vector<const FilterPredicate*> filters;
  for (const auto& f : q.filter_preds)
    if (f.column.alias == q.relations[rel].alias) filters.push_back(&f);
  for (std::size_t r = 0; r < out.table->row_count(); ++r) {
    bool ok = true;
    for (const auto* f : filters) ok = ok && passes(*out.table, *f, r);
    if (ok) out.rows.push_back(static_cast<std::uint32_t>(r));
  }
  return out;
}

// Column positions of an edge between two aliases, oriented (a side, b side).
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<std::size_t> a_cols;
  std::vector<std::size_t> b_cols;
};

std::string row_key(const Table& t, const std::vector<std::size_t>& cols, std::size_t row) {
  std::string key;
  for (auto c : cols) {
    if (t.columns()[c].type == DataType::Str)
      append_key(key, t.strings(c)[row]);
    else
      append_key(key, t.ints(c)[row]);
  }
  return key;
}

bool int_key(const Table& t, const std::vector<std::size_t>& cols) {
  return cols.size() == 1 && t.columns()[cols[0]].type != DataType::Str;
}

std::vector<Edge> edges_within(const Catalog& catalog, const QuerySpec& q, AliasSet set) {
  std::vector<Edge> edges;
  for (const auto& p : q.join_preds) {
    std::size_t l = q.alias_index(p.left.alias);
    std::size_t r = q.alias_index(p.right.alias);
    if (!(set & bit(l)) || !(set & bit(r))) continue;
    std::string lc = p.left.column, rc = p.right.column;
    if (l > r) {
      std::swap(l, r);
      std::swap(lc, rc);
    }
    auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.a == l && e.b == r; });
    if (it == edges.end()) {
      edges.push_back({l, r, {}, {}});
      it = edges.end() - 1;
    }
    it->a_cols.push_back(catalog.table(q.relations[l].table).column_index(lc));
    it->b_cols.push_back(catalog.table(q.relations[r].table).column_index(rc));
  }
  return edges;
}

// Acyclic alias graph: weighted semijoin passes from the leaves to the root.
std::uint64_t count_tree(const std::vector<AliasRows>& data, const std::vector<Edge>& edges, std::size_t root,
                         AliasSet set) {
  std::vector<std::vector<std::uint64_t>> weight(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    if (set & bit(i)) weight[i].assign(data[i].rows.size(), 1);

  std::function<void(std::size_t, std::size_t)> solve = [&](std::size_t node, std::size_t parent) {
    for (const auto& e : edges) {
      if (e.a != node && e.b != node) continue;
      const std::size_t other = e.a == node ? e.b : e.a;
      if (other == parent) continue;
      solve(other, node);
      const auto& node_cols = e.a == node ? e.a_cols : e.b_cols;
      const auto& other_cols = e.a == node ? e.b_cols : e.a_cols;
      const Table& nt = *data[node].table;
      const Table& ot = *data[other].table;
      if (int_key(ot, other_cols)) {
        std::unordered_map<std::int64_t, std::uint64_t> sums;
        const auto col = ot.ints(other_cols[0]);
        for (std::size_t i = 0; i < data[other].rows.size(); ++i) sums[col[data[other].rows[i]]] += weight[other][i];
        const auto ncol = nt.ints(node_cols[0]);
        for (std::size_t i = 0; i < data[node].rows.size(); ++i) {
          auto it = sums.find(ncol[data[node].rows[i]]);
          weight[node][i] *= it == sums.end() ? 0 : it->second;
        }
      } else {
        std::unordered_map<std::string, std::uint64_t> sums;
        for (std::size_t i = 0; i < data[other].rows.size(); ++i)
          sums[row_key(ot, other_cols, data[other].rows[i])] += weight[other][i];
        for (std::size_t i = 0; i < data[node].rows.size(); ++i) {
          auto it = sums.find(row_key(nt, node_cols, data[node].rows[i]));
          weight[node][i] *= it == sums.end() ? 0 : it->second;
        }
      }
    }
  };
  solve(root, root);
  std::uint64_t total = 0;
  for (auto w : weight[root]) total += w;
  return total;
}

// Cyclic alias graph: index nested loops in BFS order.
std::uint64_t count_cyclic(const std::vector<AliasRows>& data, const std::vector<Edge>& edges, std::size_t root,
                           AliasSet set) {
  std::vector<std::size_t> order{root};
  AliasSet seen = bit(root);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (const auto& e : edges) {
      for (auto [x, y] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
        if (x == order[k] && !(seen & bit(y))) {
          seen |= bit(y);
          order.push_back(y);
        }
      }
    }
  }
  PREDJOIN_CHECK(seen == set, "counting a disconnected alias set");

  struct Step {
    std::size_t alias;
    std::vector<std::pair<std::size_t, std::size_t>> lookups;  // (earlier alias, its column), paired with own_cols
    std::vector<std::size_t> own_cols;
    std::unordered_map<std::string, std::vector<std::uint32_t>> index;
  };
  std::vector<Step> steps;
  for (std::size_t k = 0; k < order.size(); ++k) {
    Step s;
    s.alias = order[k];
    for (const auto& e : edges) {
      for (std::size_t i = 0; i < e.a_cols.size(); ++i) {
        if (e.a == s.alias && std::find(order.begin(), order.begin() + k, e.b) != order.begin() + k) {
          s.lookups.push_back({e.b, e.b_cols[i]});
          s.own_cols.push_back(e.a_cols[i]);
        } else if (e.b == s.alias && std::find(order.begin(), order.begin() + k, e.a) != order.begin() + k) {
          s.lookups.push_back({e.a, e.a_cols[i]});
          s.own_cols.push_back(e.b_cols[i]);
        }
      }
    }
    for (auto r : data[s.alias].rows) s.index[row_key(*data[s.alias].table, s.own_cols, r)].push_back(r);
    steps.push_back(std::move(s));
  }

  std::vector<std::uint32_t> bound(data.size());
  std::function<std::uint64_t(std::size_t)> rec = [&](std::size_t k) -> std::uint64_t {
    if (k == steps.size()) return 1;
    const Step& s = steps[k];
    std::string key;
    for (auto [alias, col] : s.lookups) {
      const Table& t = *data[alias].table;
      if (t.columns()[col].type == DataType::Str)
        append_key(key, t.strings(col)[bound[alias]]);
      else
        append_key(key, t.ints(col)[bound[alias]]);
    }
    auto it = s.index.find(key);
    if (it == s.index.end()) return 0;
    std::uint64_t total = 0;
    for (auto r : it->second) {
      bound[s.alias] = r;
      total += rec(k + 1);
    }
    return total;
  };
  return rec(0);
}

}  // namespace

std::uint64_t exact_cardinality(const Catalog& catalog, const QuerySpec& query, AliasSet set) {
  if (!is_connected(query, set))
    fail(ErrorKind::DisconnectedJoinGraph, "cardinality of a disconnected alias set");
  std::vector<AliasRows> data(query.relations.size());
  std::size_t root = 0;
  std::size_t members = 0;
  for (std::size_t i = query.relations.size(); i-- > 0;) {
    if (!(set & bit(i))) continue;
    data[i] = filtered_rows(catalog, query, i);
    root = i;
    ++members;
  }
  if (members == 1) return data[root].rows.size();
  const auto edges = edges_within(catalog, query, set);
  if (edges.size() == members - 1) return count_tree(data, edges, root, set);
  return count_cyclic(data, edges, root, set);
}

CardinalitySource::CardinalitySource(const Catalog& catalog, const QuerySpec& query, CardinalityMode mode)
    : catalog_(catalog), query_(query), mode_(mode) {}

CardinalitySource CardinalitySource::from_file(const Catalog& catalog, const QuerySpec& query,
                                               const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open cardinality file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::ParseError, path + ": expected a JSON object");
  CardinalitySource src(catalog, query, CardinalityMode::UserFile);
  for (const auto& [k, v] : doc.items()) {
    if (!v.is_number()) fail(ErrorKind::ParseError, path + ": value for '" + k + "' is not a number");
    src.user_[k] = v.get<double>();
  }
  return src;
}

std::string CardinalitySource::key(AliasSet set) const {
  std::string out;
  for (std::size_t i = 0; i < query_.relations.size(); ++i)
    if (set & bit(i)) out += (out.empty() ? "" : ",") + query_.relations[i].alias;
  return out;
}

double CardinalitySource::cardinality(AliasSet set) {
  if (auto it = memo_.find(set); it != memo_.end()) return it->second;
  double v = 0;
  switch (mode_) {
    case CardinalityMode::ExactOracle:
      v = static_cast<double>(exact_cardinality(catalog_, query_, set));
      break;
    case CardinalityMode::IndependenceEstimate:
      v = estimate(set);
      break;
    case CardinalityMode::UserFile:
      if (auto it = user_.find(key(set)); it != user_.end())
        v = it->second;
      else
        v = estimate(set);
      break;
  }
  memo_[set] = v;
  return v;
}

double CardinalitySource::distinct_count(const ColumnRef& col) {
  if (auto it = ndv_.find(col); it != ndv_.end()) return it->second;
  const Table& t = catalog_.table(query_.relation(col.alias).table);
  const std::size_t c = t.column_index(col.column);
  double n = 0;
  if (t.columns()[c].type == DataType::Str) {
    const auto v = t.strings(c);
    n = static_cast<double>(std::unordered_set<std::string>(v.begin(), v.end()).size());
  } else {
    const auto v = t.ints(c);
    n = static_cast<double>(std::unordered_set<std::int64_t>(v.begin(), v.end()).size());
  }
  ndv_[col] = n;
  return n;
}

double CardinalitySource::estimate(AliasSet set) {
  double card = 1;
  for (std::size_t i = 0; i < query_.relations.size(); ++i) {
    if (!(set & bit(i))) continue;
    auto it = memo_.find(bit(i));
    double base = 0;
    if (it != memo_.end() && mode_ == CardinalityMode::IndependenceEstimate) {
      base = it->second;
    } else {
      base = static_cast<double>(filtered_rows(catalog_, query_, i).rows.size());
      if (mode_ == CardinalityMode::IndependenceEstimate) memo_[bit(i)] = base;
    }
    card *= base;
  }
  for (const auto& p : query_.join_preds) {
    if (!in_set(query_, set, p.left.alias) || !in_set(query_, set, p.right.alias)) continue;
    const double d = std::max({distinct_count(p.left), distinct_count(p.right), 1.0});
    card /= d;
  }
  return card;
}

}  // namespace predjoin
