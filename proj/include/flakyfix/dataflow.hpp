#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "flakyfix/java_ast.hpp"

namespace flakyfix {

struct DataFlowVariable {
  std::string normalized;  // var_0, var_1, ... in first-definition order
  std::string original;
};

// A def-use edge. The comparison key is (var, def_ordinal, use_ordinal):
// def_ordinal counts the variable's definitions, use_ordinal counts reads
// reached by that definition. Both start at 0.
struct DataFlowEdge {
  std::size_t var = 0;
  std::size_t def_ordinal = 0;
  std::size_t use_ordinal = 0;
  std::size_t def_line = 0;
  std::size_t use_line = 0;

  auto key() const { return std::tuple(var, def_ordinal, use_ordinal); }
};

struct DataFlowGraph {
  std::vector<DataFlowVariable> variables;
  std::vector<DataFlowEdge> edges;
};

/// Defs: local declarations, parameters, catch/for variables, lambda
/// parameters and assignments (compound assignments and ++/-- also read).
/// Uses: reads of a name with a visible binding; member accesses and call
/// names are not reads. Each use links to the binding's latest def.
DataFlowGraph extract_dataflow(const JavaAst& ast);
DataFlowGraph extract_dataflow(std::string_view code);

struct DataflowMatch {
  double score = 1.0;
  bool reference_has_no_edges = false;
};

/// Fraction of reference edge keys present in the candidate. A reference
/// without edges scores 1.0 and sets the flag.
DataflowMatch dataflow_match(const DataFlowGraph& candidate, const DataFlowGraph& reference);
DataflowMatch dataflow_match(std::string_view candidate_code, std::string_view reference_code);

}  // namespace flakyfix
