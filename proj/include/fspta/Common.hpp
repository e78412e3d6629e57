#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fspta {

using NodeId = uint32_t;
using VarId = uint32_t;   // index into Program's variable table
using LabelId = uint32_t; // statement label, dense, declaration-ordered
using FuncId = uint32_t;
using FieldId = uint32_t;

inline constexpr uint32_t kInvalidId = 0xffffffffu;

// Thrown on malformed input text; carries a 1-based source position.
struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string &msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line), col(col) {}
};

// Graph construction violated a structural precondition (e.g. a def-use
// edge names a label with no version node).
struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver left its iteration budget; signals a monotonicity bug, never a
// property of the input program.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace log {

enum class Level { Off = 0, Info = 1, Debug = 2 };

Level level();
void setLevel(Level l);
// Reads FSCONSG_LOG={off,info,debug}; unknown values leave the level off.
void setLevelFromEnv();

void info(const std::string &msg);
void debug(const std::string &msg);

} // namespace log

} // namespace fspta
