#include "flakyfix/codebleu.hpp"

#include <cmath>

#include "flakyfix/bleu.hpp"
#include "flakyfix/dataflow.hpp"
#include "flakyfix/error.hpp"
#include "flakyfix/java_ast.hpp"

namespace flakyfix {

void validate_weights(const CodeBleuWeights& w) {
  for (double x : {w.alpha, w.beta, w.gamma, w.delta}) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error("codebleu: weights must be non-negative");
  }
  const double sum = w.alpha + w.beta + w.gamma + w.delta;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error("codebleu: weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

double composite_score(const CodeBleuWeights& w, double bleu, double weighted, double ast,
                       double dataflow) {
  return w.alpha * bleu + w.beta * weighted + w.gamma * ast + w.delta * dataflow;
}

CodeBleuReport codebleu(std::string_view candidate_code, std::string_view reference_code,
                        const CodeBleuOptions& options) {
  validate_weights(options.weights);
  const TokenSeq cand = tokenize_java(candidate_code);
  const TokenSeq ref = tokenize_java(reference_code);
  const JavaAst cand_ast = parse_java_subset(cand);
  const JavaAst ref_ast = parse_java_subset(ref);

  CodeBleuReport r;
  r.weights = options.weights;
  r.bleu = bleu(cand, {ref});
  r.weighted_bleu = weighted_ngram_match(cand, ref, options.keyword_weight);
  r.ast_match = ast_match(cand_ast, ref_ast);
  const DataflowMatch df = dataflow_match(extract_dataflow(cand_ast), extract_dataflow(ref_ast));
  r.dataflow_match = df.score;
  r.dataflow_reference_empty = df.reference_has_no_edges;
  r.composite = composite_score(r.weights, r.bleu, r.weighted_bleu, r.ast_match, r.dataflow_match);
  return r;
}

}  // namespace flakyfix
