#include "intake/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace intake {

namespace {

constexpr double kJitterTolerance = 1e-6;

std::string location(const std::filesystem::path& path, std::size_t line) {
  std::string s = path.string();
  if (line > 0) s += ":" + std::to_string(line);
  return s;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_comment(const std::string& line) { return !line.empty() && line[0] == '#'; }

// "# key=value" header comments.
std::optional<std::string> comment_value(const std::string& line, std::string_view key) {
  if (!is_comment(line)) return std::nullopt;
  std::size_t i = 1;
  while (i < line.size() && line[i] == ' ') ++i;
  const std::string_view body(line.data() + i, line.size() - i);
  if (body.substr(0, key.size()) != key || body.size() <= key.size() ||
      body[key.size()] != '=')
    return std::nullopt;
  return std::string(body.substr(key.size() + 1));
}

double parse_double(std::string_view text, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || p != end)
    throw ParseError(path, line, "malformed number '" + std::string(text) + "'");
  if (!std::isfinite(v))
    throw ParseError(path, line, "non-finite value '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

// Writes through a temp file so failed runs leave no partial output.
class AtomicWriter {
 public:
  explicit AtomicWriter(const std::filesystem::path& path)
      : path_(path), tmp_(path.string() + ".tmp"), out_(tmp_, std::ios::binary) {
    if (!out_) throw ParseError(path, 0, "cannot open file for writing");
  }

  std::ofstream& stream() { return out_; }

  void commit() {
    out_.flush();
    if (!out_) throw ParseError(path_, 0, "write failed");
    out_.close();
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

  ~AtomicWriter() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

struct CsvTable {
  std::optional<std::string> subject_id;
  std::optional<double> start;
  std::optional<double> rate;
  std::optional<double> step;
  std::size_t columns = 0;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
};

CsvTable read_csv(const std::filesystem::path& path, std::size_t expected_columns) {
  const std::vector<std::string> lines = read_lines(path);
  CsvTable table;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::size_t lineno = i + 1;
    if (line.empty()) continue;
    if (is_comment(line)) {
      if (auto v = comment_value(line, "subject_id")) table.subject_id = *v;
      if (auto v = comment_value(line, "start")) table.start = parse_double(*v, path, lineno);
      if (auto v = comment_value(line, "rate")) table.rate = parse_double(*v, path, lineno);
      if (auto v = comment_value(line, "step")) table.step = parse_double(*v, path, lineno);
      continue;
    }
    if (!header_seen) {
      // Column-name header row.
      table.columns = split(line, ',').size();
      if (expected_columns != 0 && table.columns != expected_columns)
        throw ParseError(path, lineno,
                         "expected " + std::to_string(expected_columns) + " columns, found " +
                             std::to_string(table.columns));
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != table.columns)
      throw ParseError(path, lineno, "row has " + std::to_string(fields.size()) +
                                         " fields, expected " + std::to_string(table.columns));
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) row[c] = parse_double(fields[c], path, lineno);
    table.rows.push_back(std::move(row));
    table.row_lines.push_back(lineno);
  }
  if (!header_seen) throw ParseError(path, 0, "missing header row");
  return table;
}

struct Timeline {
  double start = 0.0;
  double rate = 1.0;  // exact header value when present; 1/dt otherwise
  double step = 1.0;
};

// start/rate from header comments when present, otherwise inferred from the
// time column; either way every timestamp must sit on the uniform grid within
// the jitter tolerance.
Timeline timeline_of(const CsvTable& table, const std::filesystem::path& path) {
  Timeline tl;
  if (table.start && (table.rate || table.step)) {
    tl.start = *table.start;
    if (table.rate) {
      tl.rate = *table.rate;
      tl.step = 1.0 / tl.rate;
    } else {
      tl.step = *table.step;
      tl.rate = 1.0 / tl.step;
    }
  } else {
    if (table.rows.size() < 2)
      throw ParseError(path, 0, "need start/rate headers or at least 2 rows to infer the rate");
    tl.start = table.rows.front()[0];
    tl.step = (table.rows.back()[0] - tl.start) / static_cast<double>(table.rows.size() - 1);
    tl.rate = 1.0 / tl.step;
  }
  if (!(tl.step > 0.0)) throw ParseError(path, 0, "non-increasing timestamps");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double expected = tl.start + static_cast<double>(i) * tl.step;
    if (std::abs(table.rows[i][0] - expected) > kJitterTolerance)
      throw ParseError(path, table.row_lines[i],
                       "non-uniform timestamp " + format_double(table.rows[i][0]) + ", expected " +
                           format_double(expected));
  }
  return tl;
}

void write_timeline_header(std::ofstream& out, std::string_view kind, std::string_view subject_id,
                           double start, std::optional<double> rate, std::optional<double> step) {
  out << "# intake-" << kind << " v1\n";
  if (!subject_id.empty()) out << "# subject_id=" << subject_id << "\n";
  out << "# start=" << format_double(start) << "\n";
  if (rate) out << "# rate=" << format_double(*rate) << "\n";
  if (step) out << "# step=" << format_double(*step) << "\n";
}

std::optional<std::string> line_field(std::string_view line, std::string_view key) {
  for (const auto part : split(line, ' ')) {
    if (part.size() > key.size() && part.substr(0, key.size()) == key && part[key.size()] == '=')
      return std::string(part.substr(key.size() + 1));
  }
  return std::nullopt;
}

}  // namespace

ParseError::ParseError(const std::filesystem::path& path, std::size_t line,
                       const std::string& message)
    : std::runtime_error(location(path, line) + ": " + message) {}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

InertialRecording read_inertial_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, 7);
  if (table.rows.empty()) throw ParseError(path, 0, "signal file has no samples");
  const Timeline tl = timeline_of(table, path);
  std::vector<Vec3> accel(table.rows.size()), gyro(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    accel[i] = Vec3{r[1], r[2], r[3]};
    gyro[i] = Vec3{r[4], r[5], r[6]};
  }
  const std::string subject = table.subject_id.value_or(path.stem().string());
  try {
    return InertialRecording(subject, tl.start, tl.rate, std::move(accel), std::move(gyro));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, 0, e.what());
  }
}

void write_inertial_csv(const std::filesystem::path& path, const InertialRecording& rec) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  write_timeline_header(out, "signals", rec.subject_id(), rec.start_time(), rec.rate(),
                        std::nullopt);
  out << "t,ax,ay,az,gx,gy,gz\n";
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const Vec3& a = rec.accel()[i];
    const Vec3& g = rec.gyro()[i];
    out << format_double(rec.time_at(i)) << ',' << format_double(a.x) << ',' << format_double(a.y)
        << ',' << format_double(a.z) << ',' << format_double(g.x) << ',' << format_double(g.y)
        << ',' << format_double(g.z) << '\n';
  }
  writer.commit();
}

ScoreSeries read_series_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, 2);
  if (table.rows.empty()) {
    const double start = table.start.value_or(0.0);
    const double step = table.step ? *table.step : (table.rate ? 1.0 / *table.rate : 1.0);
    return ScoreSeries(start, step, {});
  }
  const Timeline tl = timeline_of(table, path);
  std::vector<double> values(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) values[i] = table.rows[i][1];
  try {
    return ScoreSeries(tl.start, tl.step, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, 0, e.what());
  }
}

void write_series_csv(const std::filesystem::path& path, const ScoreSeries& series,
                      std::string_view subject_id) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  write_timeline_header(out, "series", subject_id, series.start_time(), std::nullopt,
                        series.step());
  out << "t,v\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << format_double(series.time_at(i)) << ',' << format_double(series.values()[i]) << '\n';
  writer.commit();
}

TriaxialSeries read_triaxial_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, 4);
  if (table.rows.empty()) throw ParseError(path, 0, "triaxial file has no samples");
  const Timeline tl = timeline_of(table, path);
  std::vector<Vec3> samples(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    samples[i] = Vec3{table.rows[i][1], table.rows[i][2], table.rows[i][3]};
  try {
    return TriaxialSeries(tl.start, tl.rate, std::move(samples));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, 0, e.what());
  }
}

void write_triaxial_csv(const std::filesystem::path& path, const TriaxialSeries& series,
                        std::string_view subject_id) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  write_timeline_header(out, "triaxial", subject_id, series.start_time(), series.rate(),
                        std::nullopt);
  out << "t,x,y,z\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Vec3& v = series.samples()[i];
    out << format_double(series.time_at(i)) << ',' << format_double(v.x) << ','
        << format_double(v.y) << ',' << format_double(v.z) << '\n';
  }
  writer.commit();
}

FeatureMatrix read_feature_matrix_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, 0);
  if (table.columns < 2) throw ParseError(path, 0, "feature file needs t plus >= 1 feature");
  FeatureMatrix fm;
  fm.cols = table.columns - 1;
  if (table.rows.empty()) {
    fm.step = table.step.value_or(1.0);
    fm.start_time = table.start.value_or(0.0);
    return fm;
  }
  const Timeline tl = timeline_of(table, path);
  fm.start_time = tl.start;
  fm.step = tl.step;
  fm.data.reserve(table.rows.size() * fm.cols);
  for (const auto& row : table.rows)
    for (std::size_t c = 1; c < row.size(); ++c) fm.data.push_back(row[c]);
  fm.validate();
  return fm;
}

void write_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& features,
                              std::string_view subject_id) {
  features.validate();
  AtomicWriter writer(path);
  auto& out = writer.stream();
  write_timeline_header(out, "features", subject_id, features.start_time, std::nullopt,
                        features.step);
  out << 't';
  for (std::size_t c = 0; c < features.cols; ++c) out << ",f" << c;
  out << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    out << format_double(features.time_at(r));
    for (double v : features.row(r)) out << ',' << format_double(v);
    out << '\n';
  }
  writer.commit();
}

EventSet read_events(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<double> times;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || is_comment(line)) continue;
    const auto value = line_field(line, "t");
    if (!value) throw ParseError(path, i + 1, "expected 't=<seconds>'");
    times.push_back(parse_double(*value, path, i + 1));
  }
  try {
    return EventSet(std::move(times));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, 0, e.what());
  }
}

void write_events(const std::filesystem::path& path, const EventSet& events,
                  std::string_view subject_id) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  out << "# intake-events v1\n";
  if (!subject_id.empty()) out << "# subject_id=" << subject_id << "\n";
  for (double t : events.times()) out << "t=" << format_double(t) << '\n';
  writer.commit();
}

IntervalSet read_intervals(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<LabeledInterval> intervals;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || is_comment(line)) continue;
    const auto start = line_field(line, "start");
    const auto end = line_field(line, "end");
    if (!start || !end) throw ParseError(path, i + 1, "expected 'start=<s> end=<s> label=<name>'");
    LabeledInterval iv;
    iv.start = parse_double(*start, path, i + 1);
    iv.end = parse_double(*end, path, i + 1);
    iv.label = IntervalLabel::other;
    if (const auto label = line_field(line, "label")) {
      const auto parsed = interval_label_from_string(*label);
      if (!parsed) throw ParseError(path, i + 1, "unknown label '" + *label + "'");
      iv.label = *parsed;
    }
    intervals.push_back(iv);
  }
  try {
    return IntervalSet(std::move(intervals));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, 0, e.what());
  }
}

void write_intervals(const std::filesystem::path& path, const IntervalSet& intervals,
                     std::string_view subject_id) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  out << "# intake-intervals v1\n";
  if (!subject_id.empty()) out << "# subject_id=" << subject_id << "\n";
  for (const LabeledInterval& iv : intervals.intervals())
    out << "start=" << format_double(iv.start) << " end=" << format_double(iv.end)
        << " label=" << to_string(iv.label) << '\n';
  writer.commit();
}

MetricReport read_metrics(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  MetricReport report;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || is_comment(line)) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path, i + 1, "expected 'name=value'");
    const std::string name = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (name == "degenerate") {
      if (!value.empty())
        for (const auto part : split(value, ','))
          report.degenerate.emplace_back(part);
      continue;
    }
    const double v = parse_double(value, path, i + 1);
    if (name == "precision")
      report.precision = v;
    else if (name == "recall")
      report.recall = v;
    else if (name == "specificity")
      report.specificity = v;
    else if (name == "f1")
      report.f1 = v;
    else if (name == "accuracy")
      report.accuracy = v;
    else if (name == "weighted_accuracy")
      report.weighted_accuracy = v;
    else if (name == "jaccard")
      report.jaccard = v;
    else if (name == "weight_factor")
      report.weight_factor = v;
    else
      throw ParseError(path, i + 1, "unknown metric '" + name + "'");
  }
  return report;
}

void write_metrics(const std::filesystem::path& path, const MetricReport& report) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  out << "# intake-metrics v1\n";
  out << "precision=" << format_double(report.precision) << '\n';
  out << "recall=" << format_double(report.recall) << '\n';
  out << "specificity=" << format_double(report.specificity) << '\n';
  out << "f1=" << format_double(report.f1) << '\n';
  out << "accuracy=" << format_double(report.accuracy) << '\n';
  out << "weighted_accuracy=" << format_double(report.weighted_accuracy) << '\n';
  out << "jaccard=" << format_double(report.jaccard) << '\n';
  out << "weight_factor=" << format_double(report.weight_factor) << '\n';
  out << "degenerate=";
  for (std::size_t i = 0; i < report.degenerate.size(); ++i) {
    if (i > 0) out << ',';
    out << report.degenerate[i];
  }
  out << '\n';
  writer.commit();
}

std::optional<std::string> file_subject_id(const std::filesystem::path& path) {
  for (const std::string& line : read_lines(path)) {
    if (!is_comment(line)) break;
    if (auto v = comment_value(line, "subject_id")) return v;
  }
  return std::nullopt;
}

}  // namespace intake
