#pragma once

#include "fspta/Ir.hpp"

#include <string_view>

namespace fspta {

struct ParseOptions {
  // Lenient mode auto-declares top-level variables that are used but never
  // assigned; strict mode rejects them.
  bool lenient = false;
  // Rejects multiply-assigned top-level variables (SSA-shaped fixtures).
  bool requireSsa = false;
};

Program parseProgram(std::string_view text, const ParseOptions &opts = {});

} // namespace fspta
