#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "predjoin/catalog.hpp"
#include "predjoin/exec.hpp"
#include "predjoin/sql.hpp"

namespace oracle {

using predjoin::Catalog;
using predjoin::QuerySpec;
using predjoin::Rid;
using predjoin::Value;

using Row = std::vector<Value>;

// Every combination of rows (one per relation in `aliases`, indexed like query.relations) that
// satisfies all filters and join predicates among those relations. Plain nested loops.
std::vector<std::vector<Rid>> bindings(const Catalog& catalog, const QuerySpec& query,
                                       const std::vector<std::string>& aliases);

// Full query result by nested loops, in output column order.
std::vector<Row> evaluate(const Catalog& catalog, const QuerySpec& query);

std::vector<Row> sorted(std::vector<Row> rows);
std::vector<Row> rows_of(const predjoin::QueryResult& r);

// Zero-padding-free RID list of a predefined join computed by scanning both tables.
std::vector<Rid> rid_column(const Catalog& catalog, const std::string& from_table,
                            const std::vector<std::string>& from_cols, const std::string& to_table,
                            const std::vector<std::string>& to_cols);

// Running example: Person(ID, name) and Follows(ID1, ID2, year).
Catalog running_example(bool predefine);

struct ForeignKey {
  std::string from;
  std::vector<std::string> from_cols;
  std::string to;
  std::vector<std::string> to_cols;
};

struct RandomDb {
  Catalog catalog;
  std::vector<std::string> tables;
  std::vector<ForeignKey> fks;  // every total foreign key, predefined or not
};

// Random schema with keys, single and composite foreign keys, random predefined joins and indices.
RandomDb random_db(std::uint64_t seed, std::size_t max_rows = 64);

// Random connected conjunctive query (1..max_relations) rendered as SQL.
std::string random_query(const RandomDb& db, std::mt19937_64& rng, std::size_t max_relations = 4);

}  // namespace oracle
