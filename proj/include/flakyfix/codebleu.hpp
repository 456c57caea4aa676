#pragma once

#include <string_view>

namespace flakyfix {

struct CodeBleuWeights {
  double alpha = 0.25;  // bleu
  double beta = 0.25;   // keyword-weighted n-gram match
  double gamma = 0.25;  // ast match
  double delta = 0.25;  // dataflow match
};

struct CodeBleuOptions {
  CodeBleuWeights weights;
  double keyword_weight = 5.0;
};

struct CodeBleuReport {
  double bleu = 0;
  double weighted_bleu = 0;
  double ast_match = 0;
  double dataflow_match = 0;
  double composite = 0;
  CodeBleuWeights weights;
  bool dataflow_reference_empty = false;
};

/// Throws flakyfix::Error unless the weights are non-negative and sum to 1
/// (within 1e-9).
void validate_weights(const CodeBleuWeights& w);

double composite_score(const CodeBleuWeights& w, double bleu, double weighted, double ast,
                       double dataflow);

/// Throws flakyfix::Error on bad weights or a candidate without tokens.
CodeBleuReport codebleu(std::string_view candidate_code, std::string_view reference_code,
                        const CodeBleuOptions& options = {});

}  // namespace flakyfix
