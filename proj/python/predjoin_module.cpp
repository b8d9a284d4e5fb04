#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "predjoin/bench.hpp"
#include "predjoin/error.hpp"
#include "predjoin/session.hpp"

namespace py = pybind11;
using namespace predjoin;

namespace {

py::object to_py(const Value& v, DataType type) {
  if (type == DataType::Str) return py::str(std::get<std::string>(v));
  if (type == DataType::Date) return py::str(format_date(std::get<std::int64_t>(v)));
  return py::int_(std::get<std::int64_t>(v));
}

py::dict result_dict(const QueryResult& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::list out;
    for (std::size_t i = 0; i < row.size(); ++i) out.append(to_py(row[i], r.column_types[i]));
    rows.append(py::tuple(out));
  }
  py::dict d;
  d["columns"] = r.column_names;
  d["rows"] = rows;
  d["stats"] = r.stats.to_json();
  d["tuples_materialized"] = r.stats.tuples_materialized();
  return d;
}

AblationFlags flags_from(bool rid_mat, bool rsj, bool jm) {
  AblationFlags f{rid_mat, rsj, jm};
  if (!f.valid()) throw Error(ErrorKind::ResolutionError, "ablation flags must form nested sets");
  return f;
}

Catalog social(std::size_t n_person, double avg_degree, std::size_t comments, std::uint64_t seed) {
  SocialDbConfig cfg{n_person, avg_degree, comments, seed, 1.2};
  Catalog c = generate_social(cfg);
  prepare_social_indices(c);
  return c;
}

}  // namespace

PYBIND11_MODULE(predjoin, m) {
  m.doc() = "In-memory columnar query engine with predefined RID joins";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<Session>(m, "Session")
      .def(py::init([](std::size_t zone_size, bool rid_mat, bool rsj, bool jm, const std::string& cards,
                       const std::string& base_dir) {
             SessionOptions o;
             o.zones.zone_size = zone_size;
             o.flags = flags_from(rid_mat, rsj, jm);
             if (cards == "exact") {
               o.card_mode = CardinalityMode::ExactOracle;
             } else if (cards == "estimate") {
               o.card_mode = CardinalityMode::IndependenceEstimate;
             } else if (cards.starts_with("file=")) {
               o.card_mode = CardinalityMode::UserFile;
               o.card_file = cards.substr(5);
             } else {
               throw Error(ErrorKind::ResolutionError, "cards must be exact, estimate or file=PATH");
             }
             return Session(o, base_dir);
           }),
           py::arg("zone_size") = 1024, py::arg("rid_mat") = true, py::arg("rsj") = true, py::arg("jm") = true,
           py::arg("cards") = "exact", py::arg("base_dir") = ".")
      .def(
          "run_script",
          [](Session& s, const std::string& script) {
            py::list out;
            for (const auto& o : s.run_script(script)) {
              if (o.result)
                out.append(result_dict(*o.result));
              else if (o.kind == StatementOutcome::Kind::Explain)
                out.append(py::make_tuple(o.explain_before, o.explain_after));
              else
                out.append(py::str(o.message));
            }
            return out;
          },
          "Execute ';'-separated statements; returns one entry per statement")
      .def(
          "query", [](Session& s, const std::string& sql) { return result_dict(s.query(sql)); },
          "Plan, rewrite and execute one SELECT")
      .def(
          "explain",
          [](Session& s, const std::string& sql) {
            const PlannedQuery p = s.plan(std::string_view(sql));
            return py::make_tuple(explain(p.baseline), explain(p.rewritten));
          },
          "Plan text before and after the predefined-join rewrite")
      .def("tables", [](const Session& s) { return s.catalog().table_names(); })
      .def("row_count", [](const Session& s, const std::string& t) { return s.catalog().table(t).row_count(); })
      .def(
          "rid_column",
          [](const Session& s, const std::string& table, const std::vector<std::string>& cols) {
            const PredefinedJoin* j = s.catalog().find_join(table, cols);
            if (!j) throw Error(ErrorKind::NotPredefined, table + " has no predefined join on those columns");
            const auto span = rid_column_of(s.catalog(), *j);
            return std::vector<Rid>(span.begin(), span.end());
          },
          "Materialized RID column of a predefined join");

  m.def(
      "bench_micro",
      [](const std::string& which, std::size_t n_person, double avg_degree, std::uint64_t seed, std::size_t zone_size,
         std::size_t reps, std::vector<double> swept) {
        MicroSpec spec;
        spec.which = which == "K" ? MicroKind::K : MicroKind::P;
        if (!swept.empty()) spec.swept = std::move(swept);
        const Catalog c = social(n_person, avg_degree, 1, seed);
        return micro_csv(run_micro(spec, c, {zone_size, reps, 1}));
      },
      py::arg("which") = "P", py::arg("n_person") = 10000, py::arg("avg_degree") = 50, py::arg("seed") = 42,
      py::arg("zone_size") = 1024, py::arg("reps") = 5, py::arg("swept") = std::vector<double>{},
      "MICRO-P / MICRO-K report as CSV");
  m.def(
      "bench_ablation",
      [](std::size_t n_person, double avg_degree, std::size_t comments, std::uint64_t seed, std::size_t zone_size,
         std::size_t reps) {
        const Catalog c = social(n_person, avg_degree, comments, seed);
        return ablation_csv(run_ablation(social_suite(c), c, {zone_size, reps, 1}));
      },
      py::arg("n_person") = 4000, py::arg("avg_degree") = 20, py::arg("comments") = 4, py::arg("seed") = 42,
      py::arg("zone_size") = 1024, py::arg("reps") = 5, "Ablation report as CSV");
  m.def(
      "bench_spectrum",
      [](std::size_t query_index, std::size_t n_person, double avg_degree, std::uint64_t seed, std::size_t cap,
         std::size_t zone_size, std::size_t reps) {
        const Catalog c = social(n_person, avg_degree, 4, seed);
        const auto suite = spectrum_suite(c);
        if (query_index >= suite.size()) throw Error(ErrorKind::ResolutionError, "query_index out of range");
        return spectrum_csv(run_spectrum(suite[query_index].sql, c, cap, {zone_size, reps, 1}));
      },
      py::arg("query_index") = 0, py::arg("n_person") = 2000, py::arg("avg_degree") = 10, py::arg("seed") = 42,
      py::arg("cap") = 1000000, py::arg("zone_size") = 1024, py::arg("reps") = 1, "Plan spectrum report as CSV");
  m.def(
      "gen_data",
      [](const std::string& out_dir, std::size_t n_person, double avg_degree, std::size_t comments,
         std::uint64_t seed, bool with_indices) {
        const Catalog c = generate_social({n_person, avg_degree, comments, seed, 1.2});
        dump_social(c, out_dir, with_indices);
      },
      py::arg("out_dir"), py::arg("n_person") = 1000, py::arg("avg_degree") = 10, py::arg("comments") = 2,
      py::arg("seed") = 42, py::arg("with_indices") = true, "Write the synthetic social database as CSV plus load.sql");
}
