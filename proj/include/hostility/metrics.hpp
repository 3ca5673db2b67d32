#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hostility/label.hpp"

namespace hostility {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool zero_division = false;  // some ratio had an empty denominator
};

struct BinaryReport {
  ClassMetrics neg;  // class 0
  ClassMetrics pos;  // class 1
  double accuracy = 0.0;
  std::size_t total = 0;
};

// Standard confusion-matrix report; zero denominators yield 0 with the flag
// set. Throws DataError on length mismatch or empty input.
BinaryReport binary_report(const std::vector<int>& gold, const std::vector<int>& pred);

// Sum(v_i * s_i) / Sum(s_i). Throws DataError when every support is zero.
double support_weighted_mean(const std::vector<double>& values,
                             const std::vector<std::size_t>& supports);

// Hostile/non-hostile binarization, then the support-weighted mean of the
// two class F1s.
double coarse_f1(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred);

struct FineF1 {
  double value = 0.0;
  bool zero_support = false;  // no gold positives for the dimension
};

// Positive-class F1 for membership of `dim`, over all samples (posts
// predicted non-hostile count as negatives for every dimension).
FineF1 fine_f1(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, Label dim);

// Per-dimension fine F1s averaged with gold supports as weights.
double weighted_fine_f1(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred);

enum class EvalScope { end_to_end, second_level };

std::string_view to_string(EvalScope s);
std::optional<EvalScope> parse_scope(std::string_view s);

struct EvalReport {
  EvalScope scope = EvalScope::end_to_end;
  std::size_t total = 0;          // samples evaluated (after scope restriction)
  double coarse = 0.0;
  BinaryReport coarse_report;     // positive class = non-hostile
  std::array<FineF1, 4> fine{};   // hostile label order
  std::array<BinaryReport, 4> fine_reports;
  double weighted_fine = 0.0;
  std::optional<std::size_t> fallback_count;  // echoed from the prediction run
};

// scope second_level restricts both sides to gold-hostile samples first.
EvalReport evaluate(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred,
                    EvalScope scope);

// Fixed-width per-class classification report plus the F1 summary block.
std::string render_table(const EvalReport& report);

std::string report_to_json(const EvalReport& report);

}  // namespace hostility
