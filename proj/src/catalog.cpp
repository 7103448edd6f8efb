#include "etas/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace etas {

void ObservationWindow::validate() const {
  if (!(t_start < t_end)) {
    throw std::invalid_argument("ObservationWindow: t_start must be < t_end");
  }
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(m_cutoff)) {
    throw std::invalid_argument("ObservationWindow: non-finite field");
  }
}

EventCatalog::EventCatalog(std::vector<Event> events, ObservationWindow window,
                           TiePolicy policy, double jitter_eps)
    : events_(std::move(events)), origin_(window.t_start) {
  window.validate();
  window_ = ObservationWindow{0.0, window.t_end - window.t_start, window.m_cutoff};

  for (auto& e : events_) {
    if (!std::isfinite(e.time) || !std::isfinite(e.magnitude)) {
      throw std::invalid_argument("EventCatalog: non-finite event");
    }
    e.time -= origin_;
    if (e.time < 0.0 || e.time > window_.t_end) {
      throw std::invalid_argument("EventCatalog: event time outside window");
    }
    if (e.magnitude < window_.m_cutoff) {
      throw std::invalid_argument("EventCatalog: magnitude below cutoff");
    }
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });

  bool had_ties = false;
  for (std::size_t i = 0; i + 1 < events_.size(); ++i) {
    if (events_[i].time == events_[i + 1].time) {
      had_ties = true;
      break;
    }
  }
  if (had_ties) {
    if (policy == TiePolicy::reject) {
      throw std::invalid_argument(
          "EventCatalog: tied event times (strict ordering required; use the jitter policy)");
    }
    std::size_t i = 0;
    while (i < events_.size()) {
      std::size_t j = i + 1;
      while (j < events_.size() && events_[j].time == events_[i].time) ++j;
      for (std::size_t k = i; k < j; ++k) {
        events_[k].time -= static_cast<double>(k - i) * jitter_eps;
      }
      i = j;
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
    for (std::size_t k = 0; k + 1 < events_.size(); ++k) {
      if (!(events_[k].time < events_[k + 1].time)) {
        throw std::invalid_argument("EventCatalog: jitter failed to break ties");
      }
    }
    if (!events_.empty() && events_.front().time < 0.0) {
      events_.front().time = 0.0;
    }
  }
}

std::span<const Event> EventCatalog::history_before(double t) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), t,
                             [](const Event& e, double v) { return e.time < v; });
  return {events_.data(), static_cast<std::size_t>(it - events_.begin())};
}

namespace {

std::vector<std::string> split_row(const std::string& line, bool comma) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    const bool sep = comma ? (ch == ',') : (std::isspace(static_cast<unsigned char>(ch)) != 0);
    if (sep) {
      if (comma || !cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() || (comma && !out.empty())) out.push_back(cur);
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double parse_field(const std::string& field, std::size_t line_no, const char* what) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("parse_catalog: bad " + std::string(what) + " field '" + field +
                     "' at line " + std::to_string(line_no));
  }
  return value;
}

}  // namespace

ParseResult parse_catalog(std::string_view text, const ObservationWindow& window,
                          TiePolicy policy, double jitter_eps) {
  window.validate();
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;

  // header
  bool comma = false;
  int time_col = -1;
  int mag_col = -1;
  int n_cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    comma = line.find(',') != std::string::npos;
    const auto cols = split_row(line, comma);
    n_cols = static_cast<int>(cols.size());
    for (int i = 0; i < n_cols; ++i) {
      const std::string name = lower(cols[static_cast<std::size_t>(i)]);
      if (name == "time") time_col = i;
      if (name == "magnitude") mag_col = i;
    }
    break;
  }
  if (time_col < 0 || mag_col < 0) {
    throw ParseError("parse_catalog: header must name `time` and `magnitude` columns");
  }

  std::vector<Event> kept;
  std::size_t dropped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const auto cols = split_row(line, comma);
    if (static_cast<int>(cols.size()) <= std::max(time_col, mag_col)) {
      throw ParseError("parse_catalog: too few fields at line " + std::to_string(line_no));
    }
    const double t = parse_field(cols[static_cast<std::size_t>(time_col)], line_no, "time");
    const double m = parse_field(cols[static_cast<std::size_t>(mag_col)], line_no, "magnitude");
    if (t < window.t_start || t > window.t_end || m < window.m_cutoff) {
      ++dropped;
      continue;
    }
    kept.push_back(Event{t, m});
  }
  if (kept.empty()) {
    throw ParseError("parse_catalog: no events inside the window (empty catalog)");
  }
  return ParseResult{EventCatalog(std::move(kept), window, policy, jitter_eps), dropped};
}

std::string serialize_catalog(const EventCatalog& catalog) {
  std::string out = "time magnitude\n";
  char buf[80];
  for (const auto& e : catalog.events()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", e.time + catalog.origin(), e.magnitude);
    out += buf;
  }
  return out;
}

}  // namespace etas
