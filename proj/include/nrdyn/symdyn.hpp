#pragma once

// Symbolic dynamics over the interval alphabet (Sigma_c) and the arc
// alphabet (Sigma): itineraries, the spa map, periodicity detection and
// the harness that collects evidence that both encodings agree.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "nrdyn/embedding.hpp"
#include "nrdyn/partition.hpp"
#include "nrdyn/ratmap.hpp"

namespace nrdyn {

template <Alphabet A>
struct Itinerary {
  std::vector<Symbol<A>> symbols;
  Orbit source_orbit;

  [[nodiscard]] static constexpr Alphabet alphabet() { return A; }
};

using IntervalItinerary = Itinerary<Alphabet::interval>;
using ArcItinerary = Itinerary<Alphabet::arc>;

inline IntervalItinerary itinerary_of(const PartitionPoints& pp, Orbit orb) {
  IntervalItinerary it;
  it.symbols.reserve(orb.points.size());
  for (const ExtReal& x : orb.points) it.symbols.push_back(classify_pa(pp, x));
  it.source_orbit = std::move(orb);
  return it;
}

inline IntervalItinerary itinerary_interval(const Params& p, const PartitionPoints& pp, const ExtReal& x0,
                                            std::size_t n) {
  return itinerary_of(pp, iterate(p, x0, n));
}

/// The arc letter attached to x through its interval: z(I_i) sweeps J_i.
inline SymbolJ spa(const PartitionPoints& pp, const ExtReal& x) {
  const SymbolI s = classify_pa(pp, x);
  return {static_cast<SymbolJ::Kind>(s.kind), s.index};
}

inline SymbolJ spa(const Params& /*p*/, const PartitionPoints& pp, const ExtReal& x) { return spa(pp, x); }

inline ArcItinerary itinerary_arc(const Params& p, const PartitionPoints& pp, const ExtReal& x0, std::size_t n) {
  ArcItinerary it;
  it.source_orbit = iterate(p, x0, n);
  it.symbols.reserve(it.source_orbit.points.size());
  for (const ExtReal& x : it.source_orbit.points) it.symbols.push_back(spa(pp, x));
  return it;
}

/// Chordal distance on R u {inf}; bounded by 1 and symmetric in inf.
inline double chordal_distance(const ExtReal& x, const ExtReal& y) {
  if (x.is_infinite() && y.is_infinite()) return 0.0;
  if (x.is_infinite()) return 1.0 / std::hypot(1.0, y.value());
  if (y.is_infinite()) return 1.0 / std::hypot(1.0, x.value());
  const double u = x.value();
  const double v = y.value();
  return std::abs(u - v) / (std::hypot(1.0, u) * std::hypot(1.0, v));
}

struct PeriodEvidence {
  bool concluded = false;
  std::size_t preperiod = 0;
  std::size_t period = 0;
};

struct PeriodicityReport {
  bool eventually_periodic = false;
  std::size_t preperiod = 0;  ///< numeric preperiod when periodic
  std::size_t period = 0;
  PeriodEvidence numeric;
  PeriodEvidence symbolic;
  double tolerance = 0.0;
};

namespace detail {

/// Brent's cycle search with approximate equality, then the smallest
/// divisor of the found cycle length that holds on the whole tail.
inline PeriodEvidence numeric_period(const std::vector<ExtReal>& pts, double tol) {
  PeriodEvidence ev;
  const std::size_t len = pts.size();
  if (len < 3) return ev;
  auto close = [&](std::size_t i, std::size_t j) { return chordal_distance(pts[i], pts[j]) < tol; };

  // Tail periodicity for candidate d: smallest mu with
  // close(k, k + d) for every k in [mu, len - d).
  auto accept = [&](std::size_t d) {
    std::size_t mu = len - d;
    while (mu > 0 && close(mu - 1, mu - 1 + d)) --mu;
    if (mu + 2 * d <= len - 1 && mu <= (len - 1) / 2) {
      ev = {true, mu, d};
      return true;
    }
    return false;
  };

  std::size_t power = 1;
  std::size_t lam = 1;
  std::size_t tortoise = 0;
  std::size_t hare = 1;
  bool hit = true;
  while (!close(tortoise, hare)) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    ++hare;
    ++lam;
    if (hare >= len) {
      hit = false;
      break;
    }
  }
  if (hit) {
    for (std::size_t d = 1; d <= lam; ++d)
      if (lam % d == 0 && accept(d)) return ev;
  }
  // A chance near-return in the transient can mislead Brent; fall back to
  // the smallest period that the tail supports.
  for (std::size_t d = 1; 2 * d < len; ++d)
    if (accept(d)) return ev;
  return ev;
}

template <Alphabet A>
PeriodEvidence symbolic_period(const std::vector<Symbol<A>>& s) {
  PeriodEvidence ev;
  const std::size_t len = s.size();
  for (std::size_t d = 1; 2 * d <= len; ++d) {
    std::size_t mu = len - d;
    while (mu > 0 && s[mu - 1] == s[mu - 1 + d]) --mu;
    if (mu + 2 * d <= len - 1 && mu <= (len - 1) / 2) {
      ev.concluded = true;
      ev.preperiod = mu;
      ev.period = d;
      return ev;
    }
  }
  return ev;
}

}  // namespace detail

/// Both channels must conclude with the same period for a positive verdict.
/// A verdict also needs preperiod + 2 period <= n and the periodic tail to
/// cover at least half of the observed orbit.
template <Alphabet A>
PeriodicityReport detect_periodicity(const Orbit& orb, const Itinerary<A>& itin, double num_tol) {
  if (orb.points.size() != itin.symbols.size())
    throw std::invalid_argument("detect_periodicity: orbit and itinerary lengths differ");
  PeriodicityReport rep;
  rep.tolerance = num_tol;
  rep.numeric = detail::numeric_period(orb.points, num_tol);
  rep.symbolic = detail::symbolic_period(itin.symbols);
  if (rep.numeric.concluded && rep.symbolic.concluded && rep.numeric.period == rep.symbolic.period) {
    rep.eventually_periodic = true;
    rep.preperiod = rep.numeric.preperiod;
    rep.period = rep.numeric.period;
  }
  return rep;
}

struct Mismatch {
  ExtReal x0 = 0.0;
  std::optional<std::size_t> step;  ///< empty for a periodicity disagreement
  int interval_index = 0;
  std::vector<int> arc_set;
};

struct BoundaryHit {
  ExtReal x0 = 0.0;
  std::size_t step = 0;
  SymbolI symbol;
};

struct ConjectureReport {
  std::size_t samples = 0;
  std::size_t consistent = 0;
  std::size_t boundary_hits = 0;
  std::vector<Mismatch> mismatches;
  std::vector<BoundaryHit> boundary_log;

  friend bool operator==(const ConjectureReport& x, const ConjectureReport& y) {
    if (x.samples != y.samples || x.consistent != y.consistent || x.boundary_hits != y.boundary_hits ||
        x.mismatches.size() != y.mismatches.size() || x.boundary_log.size() != y.boundary_log.size())
      return false;
    for (std::size_t k = 0; k < x.mismatches.size(); ++k) {
      const auto& u = x.mismatches[k];
      const auto& v = y.mismatches[k];
      if (!(u.x0 == v.x0) || u.step != v.step || u.interval_index != v.interval_index || u.arc_set != v.arc_set)
        return false;
    }
    for (std::size_t k = 0; k < x.boundary_log.size(); ++k) {
      const auto& u = x.boundary_log[k];
      const auto& v = y.boundary_log[k];
      if (!(u.x0 == v.x0) || u.step != v.step || !(u.symbol == v.symbol)) return false;
    }
    return true;
  }
};

/// Start points for the harness: the special points 0, -sqrt b, sqrt b, inf
/// followed by `sample_count` uniform draws from [-2 x_13, 2 x_13].
inline std::vector<ExtReal> harness_starts(const Params& p, const PartitionPoints& pp, std::size_t sample_count,
                                           std::uint64_t seed) {
  std::vector<ExtReal> starts = {0.0, -std::sqrt(p.b()), std::sqrt(p.b()), ExtReal::infinity()};
  std::mt19937_64 rng(seed);
  const double r = 2.0 * pp.x(13);
  for (std::size_t k = 0; k < sample_count; ++k) {
    // Explicit 53-bit mapping keeps the draw sequence independent of the
    // standard library's distribution implementation.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    starts.emplace_back(-r + 2.0 * r * u);
  }
  return starts;
}

/// Tallies, for every orbit point of every start, whether the arc letter
/// attached through the interval is one of the arcs containing z(x), and,
/// once per orbit, whether both itineraries reach the same periodicity
/// verdict. samples = consistent + boundary_hits + mismatches.
inline ConjectureReport conjecture_harness(const Params& p, std::size_t sample_count, std::size_t n,
                                           std::uint64_t seed, double num_tol = 1e-8) {
  const PartitionPoints pp = build_partition(p);
  ConjectureReport rep;
  for (const ExtReal& x0 : harness_starts(p, pp, sample_count, seed)) {
    const IntervalItinerary ii = itinerary_interval(p, pp, x0, n);
    ArcItinerary ji;
    ji.source_orbit = ii.source_orbit;
    ji.symbols.reserve(ii.symbols.size());

    for (std::size_t k = 0; k < ii.symbols.size(); ++k) {
      const ExtReal& x = ii.source_orbit.points[k];
      const SymbolI si = ii.symbols[k];
      const SymbolJ sj = spa(pp, x);
      ji.symbols.push_back(sj);
      ++rep.samples;
      if (!si.is_cell()) {
        ++rep.boundary_hits;
        rep.boundary_log.push_back({x0, k, si});
        continue;
      }
      const ArcSet arcs = arc_membership(p, pp, z_eval(p, x));
      if (sj.is_cell() && sj.index == si.index && arcs.contains(sj.index)) {
        ++rep.consistent;
      } else {
        rep.mismatches.push_back({x0, k, si.index, arcs.indices()});
      }
    }

    const PeriodicityReport pi = detect_periodicity(ii.source_orbit, ii, num_tol);
    const PeriodicityReport pj = detect_periodicity(ji.source_orbit, ji, num_tol);
    ++rep.samples;
    if (pi.eventually_periodic == pj.eventually_periodic && pi.period == pj.period) {
      ++rep.consistent;
    } else {
      rep.mismatches.push_back({x0, std::nullopt, 0, {}});
    }
  }
  return rep;
}

/// lo, lo + step, ... up to hi (inclusive within rounding). Values are
/// snapped to 12 significant digits so decimal grids hit decimal points.
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  [[nodiscard]] std::vector<double> values() const {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("grid range must satisfy lo <= hi and step > 0");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", lo + static_cast<double>(k) * step);
      out.push_back(std::strtod(buf, nullptr));
    }
    return out;
  }
};

enum class ScanStatus { periodic, aperiodic_budget, skipped, error };

inline const char* to_string(ScanStatus s) {
  switch (s) {
    case ScanStatus::periodic: return "periodic";
    case ScanStatus::aperiodic_budget: return "aperiodic-budget";
    case ScanStatus::skipped: return "skipped";
    case ScanStatus::error: return "error";
  }
  return "?";
}

struct ScanRecord {
  double a = 0.0;
  double b = 0.0;
  ScanStatus status = ScanStatus::skipped;
  std::size_t preperiod = 0;
  std::size_t period = 0;
  std::string message;

  [[nodiscard]] bool eventually_periodic() const { return status == ScanStatus::periodic; }
};

/// Critical orbit (x0 = 0) periodicity for one parameter pair.
inline ScanRecord scan_cell(double a, double b, std::size_t n, double num_tol) {
  ScanRecord rec;
  rec.a = a;
  rec.b = b;
  if (!(a > b && b > 0.0)) return rec;
  try {
    const Params p(a, b);
    const PartitionPoints pp = build_partition(p);
    const IntervalItinerary it = itinerary_interval(p, pp, 0.0, n);
    const PeriodicityReport rep = detect_periodicity(it.source_orbit, it, num_tol);
    rec.status = rep.eventually_periodic ? ScanStatus::periodic : ScanStatus::aperiodic_budget;
    rec.preperiod = rep.preperiod;
    rec.period = rep.period;
  } catch (const std::exception& e) {
    rec.status = ScanStatus::error;
    rec.message = e.what();
  }
  return rec;
}

/// Grid scan in a-major, b-fastest order. Cells are independent; with
/// threads > 1 they are distributed over workers, results are stored by
/// grid index.
inline std::vector<ScanRecord> scan(const GridRange& a_range, const GridRange& b_range, std::size_t n,
                                    double num_tol, unsigned threads = 1) {
  const std::vector<double> as = a_range.values();
  const std::vector<double> bs = b_range.values();
  std::vector<ScanRecord> out(as.size() * bs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < out.size(); k = next++) out[k] = scan_cell(as[k / bs.size()], bs[k % bs.size()], n, num_tol);
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(out.size())));
  if (nt <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace nrdyn
