#include "predjoin/sql.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"

namespace predjoin {

std::size_t QuerySpec::alias_index(std::string_view alias) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].alias == alias) return i;
  fail(ErrorKind::ResolutionError, "unknown alias " + std::string(alias));
}

namespace {

enum class Tok { Ident, Int, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifiers keep their case; symbols are the literal characters
  std::size_t pos = 0;
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(text.substr(start, i - start)), start});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::Int, std::string(text.substr(start, i - start)), start});
    } else if (c == '\'') {
      std::string value;
      ++i;
      for (;;) {
        if (i >= text.size()) throw SqlSyntaxError(start, "closing quote", "end of input");
        if (text[i] == '\'') {
          if (i + 1 < text.size() && text[i + 1] == '\'') {
            value.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value.push_back(text[i++]);
      }
      out.push_back({Tok::String, std::move(value), start});
    } else {
      static const char* two[] = {"<>", "<=", ">=", "!=", "||"};
      std::string sym(1, c);
      for (const char* t : two)
        if (text.substr(i, 2) == t) sym = t;
      i += sym.size();
      static const std::string allowed = ",.()*;=<>!+-/|%";
      if (allowed.find(sym[0]) == std::string::npos)
        throw SqlSyntaxError(start, "a token", "'" + sym + "'");
      out.push_back({Tok::Symbol, sym, start});
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

const std::set<std::string>& reserved() {
  static const std::set<std::string> words = {
      "SELECT", "FROM",   "WHERE", "AND",     "OR",     "NOT",       "AS",    "ON",     "GROUP",
      "ORDER",  "BY",     "LIMIT", "HAVING",  "JOIN",   "IN",        "LIKE",  "BETWEEN", "UNION",
      "EXISTS", "COUNT",  "MIN",   "MAX",     "DATE",   "PREDEFINE", "REFERENCES", "CREATE", "TABLE",
      "COPY",   "EXPLAIN", "INDEX", "EXTENDED", "TO",    "WITH",      "DISTINCT", "SUM", "AVG", "IS", "NULL"};
  return words;
}

// Unsupported-but-recognized SQL that gets a dedicated error instead of a syntax error.
const std::set<std::string>& unsupported_words() {
  static const std::set<std::string> words = {"OR",    "NOT",    "GROUP",  "ORDER", "LIMIT", "HAVING",
                                              "JOIN",  "IN",     "LIKE",   "BETWEEN", "UNION", "EXISTS",
                                              "DISTINCT", "SUM", "AVG", "IS", "NULL"};
  return words;
}

struct ParsedOperand {
  bool is_column = false;
  std::optional<std::string> qualifier;
  std::string name;
  std::size_t pos = 0;
  // literal
  Value literal;
  bool is_date_literal = false;
  bool is_string = false;
};

struct RawCondition {
  ParsedOperand lhs;
  CmpOp op = CmpOp::Eq;
  ParsedOperand rhs;
  std::size_t pos = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const Catalog& catalog) : tokens_(lex(text)), catalog_(catalog) {}

  Statement statement() {
    Statement out = dispatch();
    if (peek_symbol(";")) advance();
    if (cur().kind != Tok::End) expected("end of statement");
    return out;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  bool peek_keyword(const char* kw) const { return cur().kind == Tok::Ident && upper(cur().text) == kw; }
  bool peek_symbol(const char* s) const { return cur().kind == Tok::Symbol && cur().text == s; }

  [[noreturn]] void expected(const std::string& what) const {
    std::string found;
    switch (cur().kind) {
      case Tok::End: found = "end of input"; break;
      case Tok::String: found = "string '" + cur().text + "'"; break;
      default: found = "'" + cur().text + "'";
    }
    check_unsupported();
    throw SqlSyntaxError(cur().pos, what, found);
  }

  void check_unsupported() const {
    const Token& t = cur();
    if (t.kind == Tok::Ident && unsupported_words().count(upper(t.text)))
      fail(ErrorKind::UnsupportedFeature, upper(t.text) + " at offset " + std::to_string(t.pos));
    if (t.kind == Tok::Symbol && (t.text == "+" || t.text == "-" || t.text == "/" || t.text == "%" || t.text == "||"))
      fail(ErrorKind::UnsupportedFeature, "arithmetic at offset " + std::to_string(t.pos));
  }

  void keyword(const char* kw) {
    if (!peek_keyword(kw)) expected(kw);
    advance();
  }
  void symbol(const char* s) {
    if (!peek_symbol(s)) expected(std::string("'") + s + "'");
    advance();
  }
  std::string identifier(const char* what = "identifier") {
    if (cur().kind != Tok::Ident || reserved().count(upper(cur().text))) expected(what);
    return advance().text;
  }
  std::vector<std::string> identifier_list() {
    symbol("(");
    std::vector<std::string> out{identifier("column name")};
    while (peek_symbol(",")) {
      advance();
      out.push_back(identifier("column name"));
    }
    symbol(")");
    return out;
  }

  Statement dispatch() {
    if (peek_keyword("EXPLAIN")) {
      advance();
      if (!peek_keyword("SELECT")) expected("SELECT");
      return QueryStmt{select(), true};
    }
    if (peek_keyword("SELECT")) return QueryStmt{select(), false};
    if (peek_keyword("PREDEFINE")) return predefine();
    if (peek_keyword("CREATE")) return create();
    if (peek_keyword("COPY")) return copy();
    expected("{SELECT, EXPLAIN, PREDEFINE, CREATE, COPY}");
  }

  PredefineJoinStmt predefine() {
    keyword("PREDEFINE");
    keyword("JOIN");
    PredefineJoinStmt s;
    s.from_table = identifier("table name");
    s.from_cols = identifier_list();
    keyword("REFERENCES");
    s.to_table = identifier("table name");
    s.to_cols = identifier_list();
    return s;
  }

  Statement create() {
    keyword("CREATE");
    if (peek_keyword("TABLE")) {
      advance();
      CreateTableStmt s;
      s.name = identifier("table name");
      symbol("(");
      for (;;) {
        ColumnDef def;
        def.name = identifier("column name");
        def.type = type_name();
        s.columns.push_back(std::move(def));
        if (peek_symbol(",")) {
          advance();
          continue;
        }
        break;
      }
      symbol(")");
      return s;
    }
    if (peek_keyword("EXTENDED")) {
      advance();
      keyword("RID");
      keyword("INDEX");
      keyword("ON");
      CreateExtendedRidIndexStmt s;
      s.from_table = identifier("table name");
      keyword("FROM");
      s.near_table = identifier("table name");
      s.near_cols = identifier_list();
      keyword("TO");
      s.far_table = identifier("table name");
      s.far_cols = identifier_list();
      return s;
    }
    if (peek_keyword("RID")) {
      advance();
      keyword("INDEX");
      keyword("ON");
      CreateRidIndexStmt s;
      s.from_table = identifier("table name");
      keyword("REFERENCES");
      s.to_table = identifier("table name");
      s.from_cols = identifier_list();
      return s;
    }
    expected("{TABLE, RID, EXTENDED}");
  }

  DataType type_name() {
    if (cur().kind != Tok::Ident) expected("type name");
    const std::string t = upper(cur().text);
    DataType type;
    if (t == "INTEGER" || t == "INT" || t == "BIGINT" || t == "INT64")
      type = DataType::Int64;
    else if (t == "VARCHAR" || t == "TEXT" || t == "STRING")
      type = DataType::Str;
    else if (t == "DATE")
      type = DataType::Date;
    else
      expected("{INTEGER, VARCHAR, DATE}");
    advance();
    if (type == DataType::Str && peek_symbol("(")) {  // VARCHAR(n)
      advance();
      if (cur().kind != Tok::Int) expected("length");
      advance();
      symbol(")");
    }
    return type;
  }

  CopyCsvStmt copy() {
    keyword("COPY");
    CopyCsvStmt s;
    s.table = identifier("table name");
    keyword("FROM");
    if (cur().kind != Tok::String) expected("file path string");
    s.path = advance().text;
    if (peek_keyword("WITH")) {
      advance();
      if (peek_keyword("HEADER")) {
        advance();
        s.header = true;
        return s;
      }
    }
    if (peek_symbol("(")) {
      advance();
      keyword("HEADER");
      s.header = true;
      if (peek_keyword("TRUE")) advance();
      else if (peek_keyword("FALSE")) {
        advance();
        s.header = false;
      }
      symbol(")");
    } else if (peek_keyword("HEADER")) {
      advance();
      s.header = true;
    }
    return s;
  }

  ParsedOperand column_ref() {
    ParsedOperand op;
    op.is_column = true;
    op.pos = cur().pos;
    std::string first = identifier("column reference");
    if (peek_symbol(".")) {
      advance();
      op.qualifier = first;
      op.name = identifier("column name");
    } else {
      op.name = first;
    }
    return op;
  }

  ParsedOperand operand() {
    ParsedOperand op;
    op.pos = cur().pos;
    if (peek_symbol("(") && pos_ + 1 < tokens_.size() && tokens_[pos_ + 1].kind == Tok::Ident &&
        upper(tokens_[pos_ + 1].text) == "SELECT")
      fail(ErrorKind::UnsupportedFeature, "subquery at offset " + std::to_string(cur().pos));
    if (peek_symbol("-")) {
      advance();
      if (cur().kind != Tok::Int) expected("integer literal");
      auto v = parse_int64("-" + advance().text);
      if (!v) throw SqlSyntaxError(op.pos, "64-bit integer", "out-of-range literal");
      op.literal = *v;
      return op;
    }
    if (cur().kind == Tok::Int) {
      auto v = parse_int64(cur().text);
      if (!v) throw SqlSyntaxError(op.pos, "64-bit integer", "out-of-range literal");
      advance();
      op.literal = *v;
      return op;
    }
    if (cur().kind == Tok::String) {
      op.literal = advance().text;
      op.is_string = true;
      return op;
    }
    if (peek_keyword("DATE")) {
      advance();
      if (cur().kind != Tok::String) expected("date string");
      auto d = parse_date(cur().text);
      if (!d) throw SqlSyntaxError(cur().pos, "date 'YYYY-MM-DD'", "'" + cur().text + "'");
      advance();
      op.literal = *d;
      op.is_date_literal = true;
      return op;
    }
    if (cur().kind == Tok::Ident && !reserved().count(upper(cur().text))) return column_ref();
    expected("column reference or literal");
  }

  std::optional<CmpOp> comparison() {
    if (cur().kind != Tok::Symbol) return std::nullopt;
    const std::string& s = cur().text;
    std::optional<CmpOp> op;
    if (s == "=") op = CmpOp::Eq;
    else if (s == "<>" || s == "!=") op = CmpOp::Ne;
    else if (s == "<") op = CmpOp::Lt;
    else if (s == "<=") op = CmpOp::Le;
    else if (s == ">") op = CmpOp::Gt;
    else if (s == ">=") op = CmpOp::Ge;
    if (op) advance();
    return op;
  }

  QuerySpec select() {
    keyword("SELECT");
    std::vector<ParsedOperand> columns;
    bool star = false;
    std::optional<AggKind> agg;
    ParsedOperand agg_col;
    if (peek_symbol("*")) {
      advance();
      star = true;
    } else if (peek_keyword("COUNT")) {
      advance();
      symbol("(");
      symbol("*");
      symbol(")");
      agg = AggKind::CountStar;
    } else if (peek_keyword("MIN") || peek_keyword("MAX")) {
      agg = upper(advance().text) == "MIN" ? AggKind::Min : AggKind::Max;
      symbol("(");
      agg_col = column_ref();
      symbol(")");
    } else {
      columns.push_back(column_ref());
      while (peek_symbol(",")) {
        advance();
        if (peek_keyword("COUNT") || peek_keyword("MIN") || peek_keyword("MAX"))
          fail(ErrorKind::UnsupportedFeature, "mixing aggregates and columns requires GROUP BY");
        columns.push_back(column_ref());
      }
    }
    if (agg && peek_symbol(","))
      fail(ErrorKind::UnsupportedFeature, "mixing aggregates and columns requires GROUP BY");
    if (peek_symbol("+") || peek_symbol("-") || peek_symbol("/") || peek_symbol("*")) check_unsupported();
    keyword("FROM");

    QuerySpec q;
    std::vector<std::size_t> rel_pos;
    for (;;) {
      if (peek_symbol("(")) fail(ErrorKind::UnsupportedFeature, "subquery at offset " + std::to_string(cur().pos));
      Relation r;
      rel_pos.push_back(cur().pos);
      r.table = identifier("table name");
      if (peek_keyword("AS")) {
        advance();
        r.alias = identifier("alias");
      } else if (cur().kind == Tok::Ident && !reserved().count(upper(cur().text))) {
        r.alias = advance().text;
      } else {
        r.alias = r.table;
      }
      q.relations.push_back(std::move(r));
      if (!peek_symbol(",")) break;
      advance();
    }
    if (peek_keyword("JOIN")) check_unsupported();

    std::vector<RawCondition> conds;
    if (peek_keyword("WHERE")) {
      advance();
      for (;;) {
        RawCondition c;
        c.pos = cur().pos;
        c.lhs = operand();
        if (auto op = comparison())
          c.op = *op;
        else
          expected("comparison operator");
        c.rhs = operand();
        conds.push_back(std::move(c));
        if (!peek_keyword("AND")) break;
        advance();
      }
    }
    if (cur().kind != Tok::End && !peek_symbol(";")) check_unsupported();

    resolve_relations(q, rel_pos);
    for (auto& c : conds) add_condition(q, c);
    if (star) {
      for (const auto& r : q.relations) {
        const Table& t = catalog_.table(r.table);
        for (const auto& def : t.columns())
          if (def.visibility == Visibility::User) q.projection.push_back({r.alias, def.name});
      }
    } else if (agg) {
      AggregateSpec a{*agg, {}};
      if (*agg != AggKind::CountStar) a.column = resolve_column(q, agg_col).first;
      q.aggregate = a;
    } else {
      for (auto& c : columns) q.projection.push_back(resolve_column(q, c).first);
    }
    return q;
  }

  void resolve_relations(const QuerySpec& q, const std::vector<std::size_t>& pos) {
    std::set<std::string> aliases;
    for (std::size_t i = 0; i < q.relations.size(); ++i) {
      const auto& r = q.relations[i];
      if (!catalog_.find_table(r.table))
        fail(ErrorKind::ResolutionError, "unknown table " + r.table + " at offset " + std::to_string(pos[i]));
      if (!aliases.insert(r.alias).second)
        fail(ErrorKind::ResolutionError, "duplicate alias " + r.alias + " at offset " + std::to_string(pos[i]));
    }
  }

  std::pair<ColumnRef, DataType> resolve_column(const QuerySpec& q, const ParsedOperand& op) const {
    const std::string where = " at offset " + std::to_string(op.pos);
    if (op.qualifier) {
      for (const auto& r : q.relations) {
        if (r.alias != *op.qualifier) continue;
        const Table& t = catalog_.table(r.table);
        auto idx = t.find_user_column(op.name);
        if (!idx) fail(ErrorKind::ResolutionError, "unknown column " + *op.qualifier + "." + op.name + where);
        return {{r.alias, op.name}, t.columns()[*idx].type};
      }
      fail(ErrorKind::ResolutionError, "unknown alias " + *op.qualifier + where);
    }
    std::optional<std::pair<ColumnRef, DataType>> found;
    for (const auto& r : q.relations) {
      const Table& t = catalog_.table(r.table);
      if (auto idx = t.find_user_column(op.name)) {
        if (found) fail(ErrorKind::ResolutionError, "ambiguous column " + op.name + where);
        found = {{r.alias, op.name}, t.columns()[*idx].type};
      }
    }
    if (!found) fail(ErrorKind::ResolutionError, "unknown column " + op.name + where);
    return *found;
  }

  static CmpOp flip(CmpOp op) {
    switch (op) {
      case CmpOp::Lt: return CmpOp::Gt;
      case CmpOp::Le: return CmpOp::Ge;
      case CmpOp::Gt: return CmpOp::Lt;
      case CmpOp::Ge: return CmpOp::Le;
      default: return op;
    }
  }

  void add_condition(QuerySpec& q, const RawCondition& c) const {
    const std::string where = " at offset " + std::to_string(c.pos);
    if (c.lhs.is_column && c.rhs.is_column) {
      auto [l, lt] = resolve_column(q, c.lhs);
      auto [r, rt] = resolve_column(q, c.rhs);
      if (c.op != CmpOp::Eq) fail(ErrorKind::UnsupportedFeature, "non-equality join predicate" + where);
      if (l.alias == r.alias) fail(ErrorKind::UnsupportedFeature, "column-to-column filter on one relation" + where);
      if (lt != rt) fail(ErrorKind::ResolutionError, "join columns " + l.str() + " and " + r.str() + " differ in type" + where);
      q.join_preds.push_back({l, r});
      return;
    }
    if (!c.lhs.is_column && !c.rhs.is_column)
      fail(ErrorKind::UnsupportedFeature, "constant-only predicate" + where);
    const bool col_left = c.lhs.is_column;
    const ParsedOperand& col = col_left ? c.lhs : c.rhs;
    const ParsedOperand& lit = col_left ? c.rhs : c.lhs;
    auto [ref, type] = resolve_column(q, col);
    FilterPredicate f{ref, col_left ? c.op : flip(c.op), lit.literal, type};
    switch (type) {
      case DataType::Str:
        if (!lit.is_string) fail(ErrorKind::ResolutionError, ref.str() + " is VARCHAR but compared with a non-string" + where);
        break;
      case DataType::Int64:
        if (lit.is_string || lit.is_date_literal)
          fail(ErrorKind::ResolutionError, ref.str() + " is INTEGER but compared with a non-integer" + where);
        break;
      case DataType::Date:
        if (lit.is_string) {
          auto d = parse_date(std::get<std::string>(lit.literal));
          if (!d) fail(ErrorKind::ResolutionError, "'" + std::get<std::string>(lit.literal) + "' is not a date" + where);
          f.constant = *d;
        } else if (!lit.is_date_literal) {
          fail(ErrorKind::ResolutionError, ref.str() + " is DATE but compared with an integer" + where);
        }
        break;
    }
    q.filter_preds.push_back(std::move(f));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Catalog& catalog_;
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  return out + "'";
}

}  // namespace

Statement parse(std::string_view text, const Catalog& catalog) { return Parser(text, catalog).statement(); }

QuerySpec parse_query(std::string_view text, const Catalog& catalog) {
  auto stmt = parse(text, catalog);
  if (auto* q = std::get_if<QueryStmt>(&stmt)) return std::move(q->query);
  fail(ErrorKind::UnsupportedFeature, "expected a SELECT statement");
}

std::string render(const QuerySpec& query) {
  std::string out = "SELECT ";
  if (query.aggregate) {
    switch (query.aggregate->kind) {
      case AggKind::CountStar: out += "COUNT(*)"; break;
      case AggKind::Min: out += "MIN(" + query.aggregate->column.str() + ")"; break;
      case AggKind::Max: out += "MAX(" + query.aggregate->column.str() + ")"; break;
    }
  } else {
    for (std::size_t i = 0; i < query.projection.size(); ++i) out += (i ? ", " : "") + query.projection[i].str();
  }
  out += " FROM ";
  for (std::size_t i = 0; i < query.relations.size(); ++i)
    out += (i ? ", " : "") + query.relations[i].table + " " + query.relations[i].alias;
  std::vector<std::string> conds;
  for (const auto& j : query.join_preds) conds.push_back(j.left.str() + " = " + j.right.str());
  for (const auto& f : query.filter_preds) {
    std::string lit;
    if (f.type == DataType::Str)
      lit = quote(std::get<std::string>(f.constant));
    else if (f.type == DataType::Date)
      lit = "DATE '" + format_date(std::get<std::int64_t>(f.constant)) + "'";
    else
      lit = std::to_string(std::get<std::int64_t>(f.constant));
    conds.push_back(f.column.str() + " " + to_string(f.op) + " " + lit);
  }
  for (std::size_t i = 0; i < conds.size(); ++i) out += (i ? " AND " : " WHERE ") + conds[i];
  return out;
}

std::vector<ScriptStatement> split_script(std::string_view script) {
  std::vector<ScriptStatement> out;
  std::size_t start = 0;
  bool in_string = false;
  auto flush = [&](std::size_t end) {
    std::string_view piece = script.substr(start, end - start);
    // Skip leading whitespace and comment lines to find the real statement start.
    std::size_t i = 0;
    for (;;) {
      while (i < piece.size() && std::isspace(static_cast<unsigned char>(piece[i]))) ++i;
      if (piece.substr(i, 2) == "--") {
        while (i < piece.size() && piece[i] != '\n') ++i;
        continue;
      }
      break;
    }
    if (i < piece.size()) out.push_back({start + i, std::string(piece.substr(i))});
  };
  for (std::size_t i = 0; i < script.size(); ++i) {
    const char c = script[i];
    if (!in_string && c == '-' && i + 1 < script.size() && script[i + 1] == '-') {
      while (i < script.size() && script[i] != '\n') ++i;
      continue;
    }
    if (c == '\'') in_string = !in_string;
    if (c == ';' && !in_string) {
      flush(i);
      start = i + 1;
    }
  }
  flush(script.size());
  return out;
}

}  // namespace predjoin
