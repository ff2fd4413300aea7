#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intake/signal.hpp"

// Evaluation schemes and metrics: strict/relaxed bite matching, discretized
// interval confusion, the derived metric set, and per-subject aggregation.

namespace intake {

// Counts are doubles so fold-averaged results (fractional counts) flow through
// the same metric formulas.
struct BiteEvalResult {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
};

struct IntervalEvalResult {
  double tp_s = 0.0;
  double fp_s = 0.0;
  double fn_s = 0.0;
  double tn_s = 0.0;
};

struct MetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double weighted_accuracy = 0.0;  // balanced: (recall + specificity) / 2
  double jaccard = 0.0;
  double weight_factor = 0.0;      // total / positives

  // Metrics whose denominator was zero; their value is reported as 0.
  std::vector<std::string> degenerate;

  bool is_degenerate(std::string_view name) const;
};

// Strict scheme: the first detection inside a ground-truth interval is a TP,
// further in-interval detections are FPs, detections outside any interval are
// FPs, and intervals with no detection are FNs. Half-open intervals.
BiteEvalResult strict_bite_eval(const IntervalSet& gt, const EventSet& det);

// Relaxed scheme: one TP per interval containing at least one detection;
// extra in-interval detections are forgiven; only out-of-interval detections
// count as FPs.
BiteEvalResult relaxed_bite_eval(const IntervalSet& gt, const EventSet& det);

// Rasterizes both sets over [span_start, span_end) at grid_step and counts
// TP/FP/FN/TN cells (converted to seconds). Cell membership tests the cell
// center.
IntervalEvalResult interval_eval(const IntervalSet& gt, const IntervalSet& det, double grid_step,
                                 double span_start, double span_end);

MetricReport metrics(const BiteEvalResult& r);
MetricReport metrics(const IntervalEvalResult& r);

enum class AggregateMode { loso_macro, cumulative_micro };

// loso_macro: unweighted mean of per-subject metric values (degenerate values
// enter the mean as 0). cumulative_micro: metrics of the pooled counts.
MetricReport aggregate(std::span<const BiteEvalResult> per_subject, AggregateMode mode);
MetricReport aggregate(std::span<const IntervalEvalResult> per_subject, AggregateMode mode);

// Fold-averaged raw counts (the fractional-count presentation style).
BiteEvalResult average_counts(std::span<const BiteEvalResult> per_subject);

}  // namespace intake
