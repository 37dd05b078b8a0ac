#pragma once

// Front end for the nrdyn tool: report builders (JSON, CSV, SVG) and the
// argument-driven dispatcher. The builders are usable without the
// dispatcher so tests can exercise every output surface directly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrdyn/nrdyn.hpp"

namespace nrdyn::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kStructural = 3,
  kUnwritable = 4,
};

struct Tolerances {
  double ellipse = 1e-9;
  double symmetry = 1e-12;
  double vertex = 1e-9;
  double support = 1e-9;
  double contain = 1e-8;
  double tangency = 1e-10;
  double coincidence = 1e-8;
  double shift = 1e-9;
  double num = 1e-8;
};

struct RunConfig {
  std::string command;
  double a = 0.0;
  double b = 0.0;
  ExtReal x0 = 0.0;
  bool x0_given = false;
  std::size_t n = 5000;
  Tolerances tol;
  std::optional<std::string> output_path;
  std::string format;  ///< empty: command default
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<GridRange> a_range;
  std::optional<GridRange> b_range;
};

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// "inf", "+inf", "-inf", "infinity" (any case) or a real literal.
ExtReal parse_ext_real(const std::string& text);

/// "lo:hi:step".
GridRange parse_range(const std::string& text);

nlohmann::json ext_to_json(const ExtReal& x);

nlohmann::json analysis_report(const Params& p);
nlohmann::json partition_report(const Params& p);
nlohmann::json itinerary_report(const Params& p, const ExtReal& x0, std::size_t n, double num_tol);
std::string itinerary_csv(const Params& p, const ExtReal& x0, std::size_t n);

struct CheckOutcome {
  nlohmann::json detail;
  bool all_pass = false;
};

/// The invariant battery for one parameter pair.
CheckOutcome run_checks(const Params& p, const Tolerances& tol, std::uint64_t seed);

std::string scan_csv(const std::vector<ScanRecord>& rows);
nlohmann::json scan_json(const std::vector<ScanRecord>& rows);

struct OrbitOverlay {
  ExtReal x0 = 0.0;
  std::size_t n = 0;
};

std::string plot_svg(const Params& p, const std::optional<OrbitOverlay>& orbit);

/// Default worker count: NRDYN_THREADS if set, else hardware concurrency.
unsigned default_threads();

/// Full command-line entry point. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrdyn::cli
