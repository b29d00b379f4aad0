#include "nhse/drive.hpp"

#include <algorithm>
#include <cmath>

#include "nhse/linalg.hpp"

namespace nhse {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double wrap_into_period(double t, double period) {
  double u = std::fmod(t, period);
  if (u < 0.0) u += period;
  if (u >= period) u -= period;
  return u;
}

double eval_quench(const QuenchDrive& q, double t) {
  const double u = wrap_into_period(t + q.origin_shift, q.period);
  // Segments are sorted and contiguous.
  auto it = std::upper_bound(q.segments.begin(), q.segments.end(), u,
                             [](double x, const QuenchDrive::Segment& s) { return x < s.end; });
  if (it == q.segments.end()) return q.segments.back().value;
  return it->value;
}

}  // namespace

Tempo parse_tempo(const std::string& name) {
  if (name == "A" || name == "a") return Tempo::A;
  if (name == "B" || name == "b") return Tempo::B;
  if (name == "C" || name == "c") return Tempo::C;
  throw ValidationError("drive.tempo_schedules", "unknown tempo '" + name + "'");
}

std::string to_string(Tempo tempo) {
  switch (tempo) {
    case Tempo::A: return "A";
    case Tempo::B: return "B";
    case Tempo::C: return "C";
  }
  return "?";
}

QuenchDrive make_quench(double period, double origin_shift,
                        std::vector<QuenchDrive::Segment> segments) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ValidationError("drive.quench", "period must be positive and finite");
  }
  if (segments.empty()) {
    throw ValidationError("drive.quench", "no segments");
  }
  std::sort(segments.begin(), segments.end(),
            [](const auto& l, const auto& r) { return l.start < r.start; });
  const double tol = 1e-12 * period;
  if (std::abs(segments.front().start) > tol ||
      std::abs(segments.back().end - period) > tol) {
    throw ValidationError("drive.quench", "segments must cover [0, T) exactly");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].end > segments[i].start)) {
      throw ValidationError("drive.quench", "empty or reversed segment");
    }
    if (!std::isfinite(segments[i].value)) {
      throw ValidationError("drive.quench", "non-finite segment value");
    }
    if (i + 1 < segments.size() && std::abs(segments[i].end - segments[i + 1].start) > tol) {
      throw ValidationError("drive.quench", "segments have a gap or overlap");
    }
  }
  segments.front().start = 0.0;
  segments.back().end = period;
  return QuenchDrive{period, origin_shift, std::move(segments)};
}

double eval_drive(const DriveSchedule& drive, double t) {
  return std::visit(
      Overloaded{
          [](const ConstantDrive& c) { return c.value; },
          [t](const CosDrive& c) { return c.offset + c.amplitude * std::cos(c.omega * t + c.phase); },
          [t](const QuenchDrive& q) { return eval_quench(q, t); },
      },
      drive);
}

double drive_period(const DriveSchedule& drive) {
  return std::visit(Overloaded{
                        [](const ConstantDrive&) { return 0.0; },
                        [](const CosDrive& c) { return 2.0 * M_PI / c.omega; },
                        [](const QuenchDrive& q) { return q.period; },
                    },
                    drive);
}

bool is_piecewise_constant(const DriveSchedule& drive) {
  return !std::holds_alternative<CosDrive>(drive);
}

std::vector<double> breakpoints(const DriveSchedule& drive) {
  std::vector<double> out;
  if (const auto* q = std::get_if<QuenchDrive>(&drive)) {
    for (const auto& s : q->segments) {
      out.push_back(wrap_into_period(s.start - q->origin_shift, q->period));
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::pair<DriveSchedule, DriveSchedule> tempo_schedules(Tempo tempo, double v0,
                                                        double gamma0, double period) {
  if (!(period > 0.0)) {
    throw ValidationError("drive.tempo_schedules", "T must be positive");
  }
  // Breakpoints in lab time on [-T/2, T/2) with the (v, gamma) value that
  // holds from each breakpoint to the next.
  struct Piece {
    double start;  // in units of T
    double v;
    double g;
  };
  std::vector<Piece> pieces;
  switch (tempo) {
    case Tempo::A:
      pieces = {{-0.5, v0, -gamma0}, {-0.25, -v0, -gamma0}, {0.0, -v0, gamma0}, {0.25, v0, gamma0}};
      break;
    case Tempo::B:
      pieces = {{-0.5, -v0, -gamma0}, {0.0, v0, gamma0}};
      break;
    case Tempo::C:
      pieces = {{-0.5, v0, -gamma0},
                {-1.0 / 12.0, -v0, -gamma0},
                {0.0, -v0, gamma0},
                {5.0 / 12.0, v0, gamma0}};
      break;
  }
  std::vector<QuenchDrive::Segment> vs;
  std::vector<QuenchDrive::Segment> gs;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double start = (pieces[i].start + 0.5) * period;
    const double end = i + 1 < pieces.size() ? (pieces[i + 1].start + 0.5) * period : period;
    vs.push_back({start, end, pieces[i].v});
    gs.push_back({start, end, pieces[i].g});
  }
  const double shift = 0.5 * period;
  return {make_quench(period, shift, vs), make_quench(period, shift, gs)};
}

std::pair<DriveSchedule, DriveSchedule> tempo_schedules(const std::string& name,
                                                        double v0, double gamma0,
                                                        double period) {
  return tempo_schedules(parse_tempo(name), v0, gamma0, period);
}

DriveSchedule drive_from_json(const nlohmann::json& j) {
  const std::string where = "drive.from_json";
  if (j.is_number()) return ConstantDrive{j.get<double>()};
  if (!j.is_object() || !j.contains("type")) {
    throw ValidationError(where, "drive must be a number or an object with a 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  auto number = [&](const char* key, double fallback, bool required) {
    if (!j.contains(key)) {
      if (required) throw ValidationError(where, std::string("missing field '") + key + "'");
      return fallback;
    }
    if (!j.at(key).is_number()) {
      throw ValidationError(where, std::string("field '") + key + "' must be a number");
    }
    const double value = j.at(key).get<double>();
    if (!std::isfinite(value)) {
      throw ValidationError(where, std::string("field '") + key + "' must be finite");
    }
    return value;
  };
  if (type == "const") return ConstantDrive{number("value", 0.0, true)};
  if (type == "cos") {
    CosDrive c{number("a", 0.0, false), number("b", 0.0, false), number("omega", 0.0, true),
               number("phi", 0.0, false)};
    if (!(c.omega > 0.0)) throw ValidationError(where, "omega must be positive");
    return c;
  }
  if (type == "quench") {
    const auto tempo = j.value("tempo", std::string("A"));
    const auto component = j.value("component", std::string("v"));
    auto [v, g] = tempo_schedules(tempo, number("v0", 1.0, false), number("gamma0", 1.0, false),
                                  number("T", 0.0, true));
    if (component == "v") return v;
    if (component == "gamma") return g;
    throw ValidationError(where, "quench component must be 'v' or 'gamma'");
  }
  if (type == "segments") {
    std::vector<QuenchDrive::Segment> segs;
    for (const auto& s : j.at("segments")) {
      if (!s.is_array() || s.size() != 3) {
        throw ValidationError(where, "each segment must be [start, end, value]");
      }
      segs.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
    }
    return make_quench(number("T", 0.0, true), number("origin_shift", 0.0, false), segs);
  }
  throw ValidationError(where, "unknown drive type '" + type + "'");
}

nlohmann::json drive_to_json(const DriveSchedule& drive) {
  return std::visit(
      Overloaded{
          [](const ConstantDrive& c) { return nlohmann::json{{"type", "const"}, {"value", c.value}}; },
          [](const CosDrive& c) {
            return nlohmann::json{
                {"type", "cos"}, {"a", c.offset}, {"b", c.amplitude}, {"omega", c.omega}, {"phi", c.phase}};
          },
          [](const QuenchDrive& q) {
            nlohmann::json segs = nlohmann::json::array();
            for (const auto& s : q.segments) segs.push_back({s.start, s.end, s.value});
            return nlohmann::json{
                {"type", "segments"}, {"T", q.period}, {"origin_shift", q.origin_shift}, {"segments", segs}};
          },
      },
      drive);
}

}  // namespace nhse
