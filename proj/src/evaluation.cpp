#include "intake/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intake {

namespace {

struct Ratio {
  double value = 0.0;
  bool defined = false;
};

Ratio ratio(double num, double den) {
  if (den <= 0.0) return {0.0, false};
  return {num / den, true};
}

void note(MetricReport& report, std::string_view name, const Ratio& r) {
  if (!r.defined) report.degenerate.emplace_back(name);
}

MetricReport metrics_from_counts(double tp, double fp, double fn, double tn) {
  MetricReport m;
  const Ratio precision = ratio(tp, tp + fp);
  const Ratio recall = ratio(tp, tp + fn);
  const Ratio specificity = ratio(tn, tn + fp);
  m.precision = precision.value;
  m.recall = recall.value;
  m.specificity = specificity.value;
  note(m, "precision", precision);
  note(m, "recall", recall);
  note(m, "specificity", specificity);

  const double pr_sum = m.precision + m.recall;
  if (pr_sum > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / pr_sum;
  } else {
    m.f1 = 0.0;
    m.degenerate.emplace_back("f1");
  }

  const double total = tp + fp + fn + tn;
  const Ratio accuracy = ratio(tp + tn, total);
  m.accuracy = accuracy.value;
  note(m, "accuracy", accuracy);

  m.weighted_accuracy = 0.5 * (m.recall + m.specificity);
  if (!recall.defined || !specificity.defined) m.degenerate.emplace_back("weighted_accuracy");

  const Ratio jaccard = ratio(tp, tp + fp + fn);
  m.jaccard = jaccard.value;
  note(m, "jaccard", jaccard);

  const Ratio weight_factor = ratio(total, tp + fn);
  m.weight_factor = weight_factor.value;
  note(m, "weight_factor", weight_factor);
  return m;
}

// Detections partitioned per ground-truth interval: hit counts per interval
// plus the number falling outside every interval.
struct DetPartition {
  std::vector<std::size_t> hits;
  std::size_t outside = 0;
};

DetPartition partition_detections(const IntervalSet& gt, const EventSet& det) {
  DetPartition p;
  p.hits.assign(gt.size(), 0);
  const auto& ivs = gt.intervals();
  for (double t : det.times()) {
    auto it = std::upper_bound(ivs.begin(), ivs.end(), t,
                               [](double v, const LabeledInterval& iv) { return v < iv.start; });
    if (it != ivs.begin() && std::prev(it)->contains(t))
      ++p.hits[static_cast<std::size_t>(std::prev(it) - ivs.begin())];
    else
      ++p.outside;
  }
  return p;
}

MetricReport macro_mean(std::span<const MetricReport> reports) {
  MetricReport m;
  const auto n = static_cast<double>(reports.size());
  for (const MetricReport& r : reports) {
    m.precision += r.precision / n;
    m.recall += r.recall / n;
    m.specificity += r.specificity / n;
    m.f1 += r.f1 / n;
    m.accuracy += r.accuracy / n;
    m.weighted_accuracy += r.weighted_accuracy / n;
    m.jaccard += r.jaccard / n;
    m.weight_factor += r.weight_factor / n;
  }
  return m;
}

}  // namespace

bool MetricReport::is_degenerate(std::string_view name) const {
  return std::find(degenerate.begin(), degenerate.end(), name) != degenerate.end();
}

BiteEvalResult strict_bite_eval(const IntervalSet& gt, const EventSet& det) {
  const DetPartition p = partition_detections(gt, det);
  BiteEvalResult r;
  for (std::size_t h : p.hits) {
    if (h > 0) {
      r.tp += 1.0;
      r.fp += static_cast<double>(h - 1);
    } else {
      r.fn += 1.0;
    }
  }
  r.fp += static_cast<double>(p.outside);
  return r;
}

BiteEvalResult relaxed_bite_eval(const IntervalSet& gt, const EventSet& det) {
  const DetPartition p = partition_detections(gt, det);
  BiteEvalResult r;
  for (std::size_t h : p.hits) {
    if (h > 0)
      r.tp += 1.0;
    else
      r.fn += 1.0;
  }
  r.fp = static_cast<double>(p.outside);
  return r;
}

IntervalEvalResult interval_eval(const IntervalSet& gt, const IntervalSet& det, double grid_step,
                                 double span_start, double span_end) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("interval_eval: grid_step must be > 0");
  if (!(span_end > span_start)) throw std::invalid_argument("interval_eval: empty span");
  const auto cells = static_cast<std::size_t>(std::llround((span_end - span_start) / grid_step));
  IntervalEvalResult r;
  for (std::size_t i = 0; i < cells; ++i) {
    const double center = span_start + (static_cast<double>(i) + 0.5) * grid_step;
    const bool in_gt = gt.contains(center);
    const bool in_det = det.contains(center);
    if (in_gt && in_det)
      r.tp_s += grid_step;
    else if (!in_gt && in_det)
      r.fp_s += grid_step;
    else if (in_gt && !in_det)
      r.fn_s += grid_step;
    else
      r.tn_s += grid_step;
  }
  return r;
}

MetricReport metrics(const BiteEvalResult& r) {
  if (r.tp < 0.0 || r.fp < 0.0 || r.fn < 0.0)
    throw std::invalid_argument("metrics: counts must be non-negative");
  MetricReport m = metrics_from_counts(r.tp, r.fp, r.fn, 0.0);
  // Point-event counts carry no true negatives, so TN-based metrics are
  // reported as 0 with a flag.
  m.specificity = 0.0;
  m.weighted_accuracy = 0.0;
  if (!m.is_degenerate("specificity")) m.degenerate.emplace_back("specificity");
  if (!m.is_degenerate("weighted_accuracy")) m.degenerate.emplace_back("weighted_accuracy");
  return m;
}

MetricReport metrics(const IntervalEvalResult& r) {
  if (r.tp_s < 0.0 || r.fp_s < 0.0 || r.fn_s < 0.0 || r.tn_s < 0.0)
    throw std::invalid_argument("metrics: durations must be non-negative");
  return metrics_from_counts(r.tp_s, r.fp_s, r.fn_s, r.tn_s);
}

MetricReport aggregate(std::span<const BiteEvalResult> per_subject, AggregateMode mode) {
  if (per_subject.empty()) throw std::invalid_argument("aggregate: empty input");
  if (mode == AggregateMode::cumulative_micro) {
    BiteEvalResult pooled;
    for (const BiteEvalResult& r : per_subject) {
      pooled.tp += r.tp;
      pooled.fp += r.fp;
      pooled.fn += r.fn;
    }
    return metrics(pooled);
  }
  std::vector<MetricReport> reports;
  reports.reserve(per_subject.size());
  for (const BiteEvalResult& r : per_subject) reports.push_back(metrics(r));
  return macro_mean(reports);
}

MetricReport aggregate(std::span<const IntervalEvalResult> per_subject, AggregateMode mode) {
  if (per_subject.empty()) throw std::invalid_argument("aggregate: empty input");
  if (mode == AggregateMode::cumulative_micro) {
    IntervalEvalResult pooled;
    for (const IntervalEvalResult& r : per_subject) {
      pooled.tp_s += r.tp_s;
      pooled.fp_s += r.fp_s;
      pooled.fn_s += r.fn_s;
      pooled.tn_s += r.tn_s;
    }
    return metrics(pooled);
  }
  std::vector<MetricReport> reports;
  reports.reserve(per_subject.size());
  for (const IntervalEvalResult& r : per_subject) reports.push_back(metrics(r));
  return macro_mean(reports);
}

BiteEvalResult average_counts(std::span<const BiteEvalResult> per_subject) {
  if (per_subject.empty()) throw std::invalid_argument("average_counts: empty input");
  BiteEvalResult mean;
  const auto n = static_cast<double>(per_subject.size());
  for (const BiteEvalResult& r : per_subject) {
    mean.tp += r.tp / n;
    mean.fp += r.fp / n;
    mean.fn += r.fn / n;
  }
  return mean;
}

}  // namespace intake
