#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "intake/chew_detect.hpp"
#include "intake/evaluation.hpp"
#include "intake/signal.hpp"

// File formats. All files are UTF-8 text with '.' decimal separators and
// '#'-prefixed header comments. Doubles are written in shortest round-trip
// form, so write(read(x)) reproduces canonical files byte for byte. Writers
// are atomic (write to a temp file, then rename).
//
//   signals:   CSV  t,ax,ay,az,gx,gy,gz   (+ start/rate header comments)
//   triaxial:  CSV  t,x,y,z
//   series:    CSV  t,v
//   features:  CSV  t,f0,...,fk
//   events:    one "t=<seconds>" per line
//   intervals: one "start=<s> end=<s> label=<name>" per line
//   metrics:   "name=value" lines plus a "degenerate=" list

namespace intake {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path& path, std::size_t line, const std::string& message);
};

// Shortest round-trip representation.
std::string format_double(double v);

InertialRecording read_inertial_csv(const std::filesystem::path& path);
void write_inertial_csv(const std::filesystem::path& path, const InertialRecording& rec);

ScoreSeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(const std::filesystem::path& path, const ScoreSeries& series,
                      std::string_view subject_id = {});

TriaxialSeries read_triaxial_csv(const std::filesystem::path& path);
void write_triaxial_csv(const std::filesystem::path& path, const TriaxialSeries& series,
                        std::string_view subject_id = {});

FeatureMatrix read_feature_matrix_csv(const std::filesystem::path& path);
void write_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& features,
                              std::string_view subject_id = {});

EventSet read_events(const std::filesystem::path& path);
void write_events(const std::filesystem::path& path, const EventSet& events,
                  std::string_view subject_id = {});

IntervalSet read_intervals(const std::filesystem::path& path);
void write_intervals(const std::filesystem::path& path, const IntervalSet& intervals,
                     std::string_view subject_id = {});

MetricReport read_metrics(const std::filesystem::path& path);
void write_metrics(const std::filesystem::path& path, const MetricReport& report);

// Subject tag from a "# subject_id=..." header comment, when present.
std::optional<std::string> file_subject_id(const std::filesystem::path& path);

}  // namespace intake
