#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace etas {

struct Event {
  double time;       // days since window start (internal origin)
  double magnitude;  // moment magnitude
};

struct ObservationWindow {
  double t_start;   // T1, days
  double t_end;     // T2, days
  double m_cutoff;  // M0

  void validate() const;
  double duration() const { return t_end - t_start; }
};

enum class TiePolicy { reject, jitter };

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered event history over an observation window. Times are shifted so the
// window starts at 0 internally (large absolute dates would otherwise lose
// precision in every t - t_h difference); `origin()` restores original units.
// Immutable after construction, safe for concurrent shared reads.
class EventCatalog {
 public:
  // `events` carry times in original units; they are shifted, sorted and
  // checked against the window here. Ties are rejected unless policy is
  // jitter, in which case the k-th tied time gets k*jitter_eps subtracted.
  EventCatalog(std::vector<Event> events, ObservationWindow window,
               TiePolicy policy = TiePolicy::reject, double jitter_eps = 1e-9);

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  // Window in internal (shifted) units: t_start is always 0.
  const ObservationWindow& window() const { return window_; }
  double origin() const { return origin_; }
  double duration() const { return window_.t_end; }
  double m_cutoff() const { return window_.m_cutoff; }

  // Events with time strictly less than t (internal units), in order.
  std::span<const Event> history_before(double t) const;

 private:
  std::vector<Event> events_;
  ObservationWindow window_;  // shifted: {0, T2-T1, M0}
  double origin_;
};

struct ParseResult {
  EventCatalog catalog;
  std::size_t dropped_rows;  // outside window or below cutoff
};

// Parses a delimited event table (comma or whitespace separated) with a
// header line naming at least `time` and `magnitude`; other columns are
// ignored. Rows outside the window or below the cutoff are dropped.
ParseResult parse_catalog(std::string_view text, const ObservationWindow& window,
                          TiePolicy policy = TiePolicy::reject,
                          double jitter_eps = 1e-9);

// Inverse of parse_catalog on valid catalogs: emits times in original units
// with round-trip-exact decimal formatting.
std::string serialize_catalog(const EventCatalog& catalog);

}  // namespace etas
