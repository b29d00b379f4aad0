#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace nhse {

/// value(t) = offset + amplitude * cos(omega * t + phase)
struct CosDrive {
  double offset = 0.0;
  double amplitude = 0.0;
  double omega = 1.0;
  double phase = 0.0;
};

/// Piecewise-constant periodic schedule.
///
/// Segments are stored on the canonical window [0, T). Quench tempos are
/// written on [-T/2, T/2); a lab time t is mapped into the window by
/// u = (t + origin_shift) mod T, with origin_shift = T/2 for the built-in
/// tempos. Each segment is half-open [start, end), so a breakpoint belongs to
/// the segment that starts there.
struct QuenchDrive {
  struct Segment {
    double start;
    double end;
    double value;
  };
  double period = 1.0;
  double origin_shift = 0.0;
  std::vector<Segment> segments;
};

struct ConstantDrive {
  double value = 0.0;
};

using DriveSchedule = std::variant<ConstantDrive, CosDrive, QuenchDrive>;

enum class Tempo { A, B, C };

Tempo parse_tempo(const std::string& name);
std::string to_string(Tempo tempo);

/// Validates segment coverage; throws ValidationError on gaps or overlaps.
QuenchDrive make_quench(double period, double origin_shift,
                        std::vector<QuenchDrive::Segment> segments);

double eval_drive(const DriveSchedule& drive, double t);

/// Period of the schedule; 0 for constants (any period fits).
double drive_period(const DriveSchedule& drive);

bool is_piecewise_constant(const DriveSchedule& drive);

/// Lab-time breakpoints of a quench schedule inside [0, T), sorted.
std::vector<double> breakpoints(const DriveSchedule& drive);

/// The (v, gamma) quench pair for tempo A, B or C.
std::pair<DriveSchedule, DriveSchedule> tempo_schedules(Tempo tempo, double v0,
                                                        double gamma0, double period);
std::pair<DriveSchedule, DriveSchedule> tempo_schedules(const std::string& name,
                                                        double v0, double gamma0,
                                                        double period);

/// JSON forms:
///   {"type":"cos","a":..,"b":..,"omega":..,"phi":..}
///   {"type":"const","value":..}  or a bare number
///   {"type":"quench","tempo":"A","v0":..,"gamma0":..,"T":..,"component":"v"|"gamma"}
DriveSchedule drive_from_json(const nlohmann::json& j);
nlohmann::json drive_to_json(const DriveSchedule& drive);

}  // namespace nhse
