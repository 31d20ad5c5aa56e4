#pragma once
// Expressions shared by the test suites and the acceptance binary.

#include <string>
#include <vector>

namespace dunkl::testing {

struct CorpusEntry {
  const char* source;
  int dim;  // smallest dimension the expression lives in
};

// Finite and twice differentiable (away from measure-zero kinks) on [-2, 2]^n.
inline const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c{
      {"x1", 1},
      {"x1^2", 1},
      {"x1^3 - 2*x1", 1},
      {"exp(-x1^2)", 1},
      {"exp(x1)", 1},
      {"ln(1 + x1^2)", 1},
      {"sqrt(1 + x1^2)", 1},
      {"smoothstep(0, 1, x1)", 1},
      {"clampzero(1 - x1^2)", 1},
      {"abs(x1)^3", 1},
      {"1/(1 + x1^2)", 1},
      {"x1*exp(-x1^2/2)", 1},
      {"r^2", 1},
      {"exp(-r^2)", 1},
      {"clampzero(1 - 0.2*r^1.5)", 1},
      {"(1 + r^2)^(-0.5)", 1},
      {"pow(1 + x1^2, 1.5)", 1},
      {"max(x1, 0)^3", 1},
      {"min(x1^2, 1)", 1},
      {"x1^4 - 3*x1^2 + 1", 1},
      {"exp(-abs(x1))*(1 + abs(x1))", 1},
      {"smoothstep(-1, 2, x1)^2", 1},
      {"2^x1", 1},
      {"(x1 - 0.3)^2", 1},
      {"ln(3 + x1)", 1},
      {"x1^2 + x2^2", 2},
      {"x1*x2", 2},
      {"x1^2*x2^2", 2},
      {"exp(-(x1^2 + 2*x2^2))", 2},
      {"x1^3*x2 - x2^3*x1", 2},
      {"sqrt(1 + x1^2 + x2^2)", 2},
      {"ln(1 + r^2)", 2},
      {"smoothstep(0, 1, x1)*smoothstep(0, 1, x2)", 2},
      {"clampzero(1 - r^2)^2", 2},
      {"x1/(1 + x2^2)", 2},
      {"exp(x1 - x2)", 2},
      {"(x1 + 2*x2)^3", 2},
      {"max(x1, x2)^2", 2},
      {"abs(x1*x2)", 2},
      {"r^3", 2},
      {"x1^2 - x2^2", 2},
      {"exp(-r)*(1 + r)", 2},
      {"1/(5 + x1*x2)", 2},
      {"x2*exp(-x1^2)", 2},
      {"(1 + x1^2)*(1 + x2^4)", 2},
      {"x1^2 + x2^2 + x3^2", 3},
      {"x1*x2*x3", 3},
      {"exp(-r^2)*x3", 3},
      {"x1^2*x2^2*x3^2 + x3", 3},
      {"smoothstep(0, 1, x3)*r^2", 3},
  };
  return c;
}

struct InvariantEntry {
  const char* system;
  int dim;
  std::vector<double> k;
  const char* source;
};

// Ten fields, each invariant under the reflection group it is paired with.
inline const std::vector<InvariantEntry>& invariant_fields() {
  static const std::vector<InvariantEntry> c{
      {"rank1", 1, {1.0}, "x1^2"},
      {"rank1", 1, {0.5}, "exp(-x1^2)"},
      {"rank1", 1, {1.0}, "clampzero(1 - 0.2*r^1.5)"},
      {"rank1", 1, {2.0}, "ln(1 + x1^2)"},
      {"rank1", 1, {1.5}, "sqrt(1 + x1^4)"},
      {"product_Z2", 2, {0.5, 1.0}, "x1^2*x2^2 + 1"},
      {"product_Z2", 2, {1.0, 2.0}, "exp(-(x1^2 + 2*x2^2))"},
      {"A2", 2, {1.0}, "r^2"},
      {"A2", 2, {0.5}, "exp(-r^2)"},
      {"B2", 2, {1.0, 0.5}, "x1^2*x2^2 + r^2"},
  };
  return c;
}

inline const std::vector<const char*>& chain_profiles() {
  static const std::vector<const char*> c{"s", "s^2", "exp(s)", "s^3 + s", "ln(1 + s)"};
  return c;
}

struct SystemEntry {
  const char* name;
  int dim;
  int orbits;
};

inline const std::vector<SystemEntry>& catalog() {
  static const std::vector<SystemEntry> c{
      {"rank1", 1, 1},   {"product_Z2", 1, 1}, {"product_Z2", 2, 2}, {"product_Z2", 3, 3},
      {"A2", 2, 1},      {"B2", 2, 2},         {"dihedral(5)", 2, 1}, {"dihedral(6)", 2, 2},
  };
  return c;
}

}  // namespace dunkl::testing
