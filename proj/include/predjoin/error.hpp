#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace predjoin {

enum class ErrorKind {
  DuplicateTable,
  DuplicateColumn,
  UnknownTable,
  UnknownColumn,
  ParseError,
  ArityMismatch,
  ZoneOutOfRange,
  NotAKey,
  DanglingForeignKey,
  AlreadyPredefined,
  NotPredefined,
  AlreadyIndexed,
  JoinsOnDifferentTables,
  RidOutOfRange,
  SyntaxError,
  ResolutionError,
  UnsupportedFeature,
  DisconnectedJoinGraph,
  IoError,
  Internal,
};

const char* to_string(ErrorKind kind);

// All user-facing failures. Internal is reserved for broken invariants.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// ParseError from CSV input; line and column are 1-based.
class CsvParseError : public Error {
 public:
  CsvParseError(std::size_t line, std::size_t column, const std::string& detail)
      : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + detail),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// SyntaxError from the SQL front end; position is a 0-based byte offset.
class SqlSyntaxError : public Error {
 public:
  SqlSyntaxError(std::size_t position, const std::string& expected, const std::string& found)
      : Error(ErrorKind::SyntaxError, "at offset " + std::to_string(position) + ": expected " +
                                          expected + ", found " + found),
        position_(position),
        expected_(expected),
        found_(found) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

#define PREDJOIN_CHECK(cond, msg)                                                  \
  do {                                                                             \
    if (!(cond)) ::predjoin::fail(::predjoin::ErrorKind::Internal,                 \
                                  std::string(__FILE__) + ":" +                    \
                                      std::to_string(__LINE__) + ": " + (msg));    \
  } while (0)

}  // namespace predjoin
