#pragma once

#include <memory>

#include "vibench/problems.hpp"

namespace testutil {

// Strongly monotone 1-D model problem F(x) = x on the whole line.
inline vibench::ProblemInstance identity_line() {
  return vibench::ProblemInstance{
      "f=x",
      std::make_shared<vibench::Mapping>(1, [](const vibench::Vector& x) { return x; }),
      vibench::FeasibleSet::whole_space(1),
      1.0,
      vibench::Vector{0.0},
      vibench::Vector{1.0}};
}

inline vibench::ProblemInstance constant_map(vibench::Vector c) {
  int dim = static_cast<int>(c.size());
  return vibench::ProblemInstance{
      "f=c",
      std::make_shared<vibench::Mapping>(
          dim, [c](const vibench::Vector&) { return c; }),
      vibench::FeasibleSet::whole_space(dim),
      0.0,
      std::nullopt,
      vibench::Vector(dim, 1.0)};
}

}  // namespace testutil
