#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "predjoin/plan.hpp"
#include "predjoin/sip.hpp"
#include "predjoin/storage.hpp"

namespace predjoin {

class Catalog;

struct OperatorStats {
  int id = -1;
  OpKind kind = OpKind::Scan;
  std::string alias;  // scans: alias; joins: sip target, if any
  std::string table;  // scans only

  // scans
  std::uint64_t zones_visited = 0;
  std::uint64_t tuples_materialized = 0;  // rows of visited zones
  std::uint64_t tuples_emitted = 0;       // rows surviving selection and local filters
  std::vector<int> filter_sources;        // ids of joins that registered sip filters
  std::optional<SipFilter> combined_filter;  // kept only with ExecOptions::capture_filters

  // joins
  std::uint64_t build_rows = 0;
  std::uint64_t probe_rows = 0;
  std::uint64_t output_rows = 0;
};

struct ExecStats {
  std::vector<OperatorStats> operators;  // indexed by plan node id
  double wall_ms = 0;

  std::uint64_t tuples_materialized() const;
  std::uint64_t tuples_materialized_of_table(const std::string& table) const;
  std::size_t scan_operators() const;
  std::string to_json() const;
};

struct ExecOptions {
  bool capture_filters = false;
};

struct QueryResult {
  std::vector<std::string> column_names;
  std::vector<DataType> column_types;
  std::vector<std::vector<Value>> rows;
  ExecStats stats;

  // CSV with a header row; dates rendered as ISO strings.
  std::string to_csv() const;
};

// Pull-based execution. Every join consumes its build side, builds and routes its sip
// filter, and only then opens its probe side.
QueryResult execute(const LogicalPlan& plan, const Catalog& catalog, const ZoneConfig& zones,
                    const ExecOptions& options = {});

}  // namespace predjoin
