#pragma once

#include "splitlab/lang/ast.hpp"

#include <string_view>

namespace splitlab::lang {

struct ParseLimits {
  int max_depth = 200;
  int max_literal_digits = 64;
  int max_power = 12;
  std::size_t max_length = 1 << 20;
};

// Throws LangError on malformed input.
OpAst parse(std::string_view text, const ParseLimits& limits = {});

}  // namespace splitlab::lang
