#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace nrdyn::cli {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

ExtReal parse_ext_real(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "inf" || t == "+inf" || t == "-inf" || t == "infinity" || t == "+infinity" || t == "-infinity")
    return ExtReal::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a real number or inf: '" + text + "'");
  }
  if (used != text.size() || std::isnan(v)) throw std::invalid_argument("not a real number or inf: '" + text + "'");
  return v;
}

GridRange parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed range '" + text + "' (expected lo:hi:step)");
    }
    if (used != item.size() || !std::isfinite(v))
      throw std::invalid_argument("malformed range '" + text + "' (expected lo:hi:step)");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw std::invalid_argument("malformed range '" + text + "' (expected lo:hi:step)");
  GridRange r{parts[0], parts[1], parts[2]};
  (void)r.values();  // validates lo <= hi, step > 0
  return r;
}

json ext_to_json(const ExtReal& x) {
  if (x.is_infinite()) return "inf";
  return x.value();
}

namespace {

json complex_json(Complex w) { return json::array({w.real(), w.imag()}); }

json params_json(const Params& p) { return {{"a", p.a()}, {"b", p.b()}}; }

template <Alphabet A>
json symbols_json(const std::vector<Symbol<A>>& s) {
  json arr = json::array();
  for (const auto& sym : s) arr.push_back(sym.to_string());
  return arr;
}

json periodicity_json(const PeriodicityReport& r) {
  auto ev = [](const PeriodEvidence& e) {
    return json{{"concluded", e.concluded}, {"preperiod", e.preperiod}, {"period", e.period}};
  };
  return {{"eventually_periodic", r.eventually_periodic},
          {"preperiod", r.preperiod},
          {"period", r.period},
          {"tolerance", r.tolerance},
          {"evidence", {{"numeric", ev(r.numeric)}, {"symbolic", ev(r.symbolic)}}}};
}

json partition_json(const Params& p, const PartitionPoints& pp) {
  json xs = json::array();
  json ss = json::array();
  json roles = json::array();
  for (std::size_t i = 0; i < kPartitionSize; ++i) {
    xs.push_back(pp.xs[i]);
    ss.push_back(complex_json(pp.Ss[i]));
    roles.push_back({{"kind", to_string(pp.roles[i].kind)}, {"tag", to_string(pp.roles[i].tag)}});
  }
  (void)p;
  return {{"xs", xs}, {"Ss", ss}, {"roles", roles}};
}

json t14_json() {
  const TransferMatrix t = t_matrix();
  return {{"signs", t.signs}, {"involutory", t.is_involutory()}, {"det", t.determinant()}};
}

}  // namespace

json analysis_report(const Params& p) {
  const OmegaEllipse om = omega(p);
  const ComplexMatrix b = resultant_matrix(p.a(), p.b());
  const Ellipse2D w = numerical_range_2x2(coefficient_matrix(p.a(), p.b()));
  const PartitionPoints pp = build_partition(p);
  const VertexImages vi = vertex_images(p);
  const ShiftPoints sp = shift_points(p);

  json shifts = json::array();
  for (const auto& s : sp.solutions)
    shifts.push_back({{"outer_sign", s.outer_sign}, {"inner_sign", s.inner_sign}, {"x", s.x}});

  return {
      {"params", params_json(p)},
      {"omega", {{"center_x", om.center_x}, {"rx", om.rx}, {"ry", om.ry}}},
      {"matrixes",
       {{"detB", determinant(b).real()},
        {"A2_ellipse",
         {{"center", complex_json(w.center)},
          {"semi_axis_u", w.semi_axis_u},
          {"semi_axis_v", w.semi_axis_v},
          {"axis_angle", w.axis_angle},
          {"foci", json::array({complex_json(w.foci[0]), complex_json(w.foci[1])})}}}}},
      {"partition", partition_json(p, pp)},
      {"t14", t14_json()},
      {"vertex_images",
       {{"fix_plus", complex_json(vi.fix_plus)},
        {"fix_minus", complex_json(vi.fix_minus)},
        {"pole_img", complex_json(vi.pole_img)},
        {"zero_img", complex_json(vi.zero_img)}}},
      {"shift_points", {{"solutions", shifts}, {"dropped", sp.dropped}}},
  };
}

json partition_report(const Params& p) {
  const PartitionPoints pp = build_partition(p);
  const PartitionReport rep = verify_partition(p, pp);
  json arcs = json::array();
  for (int i = 1; i <= kAlphabetSize; ++i) {
    const Arc arc = arc_of(pp, i);
    arcs.push_back({{"index", i}, {"sign", sign_of(i)}, {"start_angle", arc.start}, {"span", arc.span}});
  }
  json out = partition_json(p, pp);
  out["params"] = params_json(p);
  out["angles"] = pp.angles;
  out["arcs"] = arcs;
  out["verification"] = {{"ok", rep.ok()},
                         {"ordering", rep.ordering},
                         {"coincidences", rep.coincidences},
                         {"coincidence_residuals", rep.coincidence_residuals},
                         {"anchors", rep.anchors},
                         {"anchor_residual", rep.anchor_residual},
                         {"arc_coverage", rep.arc_coverage},
                         {"orientation", rep.orientation},
                         {"failures", rep.failures}};
  out["t14"] = t14_json();
  return out;
}

json itinerary_report(const Params& p, const ExtReal& x0, std::size_t n, double num_tol) {
  const PartitionPoints pp = build_partition(p);
  const IntervalItinerary ii = itinerary_interval(p, pp, x0, n);
  const ArcItinerary ji = itinerary_arc(p, pp, x0, n);
  json orbit = json::array();
  for (const ExtReal& x : ii.source_orbit.points) orbit.push_back(ext_to_json(x));
  json boundaries = json::array();
  for (std::size_t k = 0; k < ii.symbols.size(); ++k)
    if (!ii.symbols[k].is_cell()) boundaries.push_back({{"step", k}, {"symbol", ii.symbols[k].to_string()}});
  return {
      {"params", params_json(p)},
      {"x0", ext_to_json(x0)},
      {"n", n},
      {"orbit", orbit},
      {"pole_hits", ii.source_orbit.pole_hits},
      {"interval", {{"symbols", symbols_json(ii.symbols)},
                    {"periodicity", periodicity_json(detect_periodicity(ii.source_orbit, ii, num_tol))}}},
      {"arc", {{"symbols", symbols_json(ji.symbols)},
               {"periodicity", periodicity_json(detect_periodicity(ji.source_orbit, ji, num_tol))}}},
      {"boundary_markers", boundaries},
  };
}

std::string itinerary_csv(const Params& p, const ExtReal& x0, std::size_t n) {
  const PartitionPoints pp = build_partition(p);
  const IntervalItinerary ii = itinerary_interval(p, pp, x0, n);
  std::ostringstream os;
  os << "step,x,I,J\n";
  for (std::size_t k = 0; k < ii.symbols.size(); ++k) {
    const ExtReal& x = ii.source_orbit.points[k];
    os << k << ',' << (x.is_infinite() ? std::string("inf") : format_number(x.value())) << ','
       << ii.symbols[k].to_string() << ',' << spa(pp, x).to_string() << '\n';
  }
  return os.str();
}

CheckOutcome run_checks(const Params& p, const Tolerances& tol, std::uint64_t seed) {
  CheckOutcome res;
  res.all_pass = true;
  json checks = json::array();
  auto record = [&](const std::string& name, bool pass, double residual, double tolerance, json extra = json::object()) {
    json c = {{"name", name}, {"pass", pass}, {"residual", residual}, {"tolerance", tolerance}};
    for (auto it = extra.begin(); it != extra.end(); ++it) c[it.key()] = it.value();
    checks.push_back(c);
    res.all_pass = res.all_pass && pass;
  };

  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
  const double sa = std::sqrt(p.a());
  const double sb = std::sqrt(p.b());
  std::vector<ExtReal> xs = {0.0, sb, -sb, sa, -sa, ExtReal::infinity()};
  for (int k = 0; k < 10000; ++k) {
    // Mix a bounded window with a heavy tail reaching far from the origin.
    const double u = uniform(-1.0, 1.0);
    xs.emplace_back(k % 4 == 3 ? 1.0 / (u == 0.0 ? 1e-300 : u) : 10.0 * u);
  }

  double worst = 0.0;
  for (const ExtReal& x : xs) worst = std::max(worst, std::abs(omega_residual(p, z_eval(p, x))));
  record("ellipse_membership", worst <= tol.ellipse, worst, tol.ellipse, {{"samples", xs.size()}});

  const bool exact = z_eval(p, sb) == Complex(-p.b(), 0.0) && z_eval(p, -sb) == Complex(-p.b(), 0.0) &&
                     z_eval(p, ExtReal::infinity()) == Complex(1.0, 0.0);
  record("special_values", exact, exact ? 0.0 : 1.0, 0.0);

  worst = 0.0;
  for (const ExtReal& x : xs)
    if (x.is_finite()) worst = std::max(worst, std::abs(z_eval(p, -x.value()) - std::conj(z_eval(p, x))));
  record("conjugation_symmetry", worst <= tol.symmetry, worst, tol.symmetry);

  const VertexImages vi = vertex_images(p);
  worst = 0.0;
  for (double x : fixed_points(p, 1)) worst = std::max(worst, std::abs(z_eval(p, x) - vi.fix_plus));
  for (double x : fixed_points(p, -1)) worst = std::max(worst, std::abs(z_eval(p, x) - vi.fix_minus));
  record("vertex_lemma", worst <= tol.vertex, worst, tol.vertex);

  const ComplexMatrix a2 = coefficient_matrix(p.a(), p.b());
  const ComplexMatrix bm = resultant_matrix(p.a(), p.b());
  worst = 0.0;
  for (int k = 0; k < 720; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 720.0;
    worst = std::max(worst, std::abs(support_function(bm, t) - support_function(a2, t)));
  }
  record("support_equality", worst <= tol.support, worst, tol.support, {{"angles", 720}});

  const BlockDecomposition bd = block_decompose(bm);
  const bool blocks = bd.top == a2 && bd.bottom == a2 &&
                      bd.unitary.adjoint() * bd.unitary == ComplexMatrix::identity(4);
  record("block_decomposition", blocks, blocks ? 0.0 : 1.0, 0.0);

  const Ellipse2D wa = numerical_range_2x2(a2);
  std::size_t outside = 0;
  for (const ExtReal& x : xs)
    if (!ellipse_contains(wa, z_eval(p, x), tol.contain)) ++outside;
  record("psi_containment", outside == 0, static_cast<double>(outside), tol.contain, {{"outside", outside}});

  const double tangency = std::abs(0.5 * (1.0 + p.a()) - support_function(a2, 0.5 * std::numbers::pi));
  record("vertical_tangency", tangency < tol.tangency, tangency, tol.tangency);

  bool extrema = true;
  for (double x0 : {sa, -sa})
    for (double d : {1e-3, 1e-2}) {
      const double dd = d * std::max(1.0, std::abs(x0));
      extrema = extrema && gh_eval(p, x0 + dd).g < gh_eval(p, x0).g && gh_eval(p, x0 - dd).g < gh_eval(p, x0).g;
    }
  for (double x0 : {sb, -sb, 0.0})
    for (double d : {1e-3, 1e-2}) {
      const double dd = d * std::max(1.0, std::abs(x0));
      extrema = extrema && gh_eval(p, x0 + dd).g > gh_eval(p, x0).g && gh_eval(p, x0 - dd).g > gh_eval(p, x0).g;
    }
  record("extremum_lemmas", extrema, extrema ? 0.0 : 1.0, 0.0);

  try {
    const PartitionPoints pp = build_partition(p);
    const PartitionReport rep = verify_partition(p, pp);
    const double cres = *std::max_element(rep.coincidence_residuals.begin(), rep.coincidence_residuals.end());
    record("partition_verification", rep.ok() && cres < tol.coincidence, cres, tol.coincidence,
           {{"failures", rep.failures}});
  } catch (const std::exception& e) {
    record("partition_verification", false, 1.0, tol.coincidence, {{"error", e.what()}});
  }

  const TransferMatrix t = t_matrix();
  record("t14", t.is_involutory() && t.determinant() == 1, 0.0, 0.0,
         {{"involutory", t.is_involutory()}, {"det", t.determinant()}});

  worst = 0.0;
  const ShiftPoints sp = shift_points(p);
  for (const auto& s : sp.solutions) worst = std::max(worst, std::abs(z_eval(p, s.x + 1.0) - z_eval(p, s.x)));
  record("shift_identity", worst < tol.shift, worst, tol.shift, {{"real_solutions", sp.solutions.size()}});

  res.detail = {{"params", params_json(p)}, {"all_pass", res.all_pass}, {"checks", checks}};
  return res;
}

std::string scan_csv(const std::vector<ScanRecord>& rows) {
  std::ostringstream os;
  os << "a,b,status,preperiod,period\n";
  for (const auto& r : rows) {
    os << format_number(r.a) << ',' << format_number(r.b) << ',' << to_string(r.status) << ',';
    if (r.status == ScanStatus::periodic) os << r.preperiod << ',' << r.period;
    else os << ',';
    os << '\n';
  }
  return os.str();
}

json scan_json(const std::vector<ScanRecord>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row = {{"a", r.a}, {"b", r.b}, {"status", to_string(r.status)}};
    if (r.status == ScanStatus::periodic) {
      row["preperiod"] = r.preperiod;
      row["period"] = r.period;
    }
    if (!r.message.empty()) row["message"] = r.message;
    arr.push_back(row);
  }
  return arr;
}

namespace {

std::string fx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  return s == "-0.0000" ? "0.0000" : s;
}

}  // namespace

std::string plot_svg(const Params& p, const std::optional<OrbitOverlay>& orbit) {
  const OmegaEllipse om = omega(p);
  const Ellipse2D wa = numerical_range_2x2(coefficient_matrix(p.a(), p.b()));
  const PartitionPoints pp = build_partition(p);

  // Bounding box of W(A2), which contains Omega.
  const double c = std::cos(wa.axis_angle);
  const double s = std::sin(wa.axis_angle);
  const double half_w = std::hypot(wa.semi_axis_u * c, wa.semi_axis_v * s);
  const double half_h = std::hypot(wa.semi_axis_u * s, wa.semi_axis_v * c);
  const double xmin = wa.center.real() - half_w;
  const double ymax = wa.center.imag() + half_h;
  constexpr double size = 800.0;
  constexpr double pad = 60.0;
  const double scale = (size - 2.0 * pad) / (2.0 * std::max(half_w, half_h));
  const double off_x = pad + ((size - 2.0 * pad) - 2.0 * half_w * scale) / 2.0;
  const double off_y = pad + ((size - 2.0 * pad) - 2.0 * half_h * scale) / 2.0;
  auto X = [&](double x) { return off_x + (x - xmin) * scale; };
  auto Y = [&](double y) { return off_y + (ymax - y) * scale; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
     << "<title>Omega for a=" << format_number(p.a()) << ", b=" << format_number(p.b()) << "</title>\n"
     << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" markerWidth=\"6\" "
        "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes.
  os << "<line class=\"axis\" x1=\"" << fx(X(xmin)) << "\" y1=\"" << fx(Y(0.0)) << "\" x2=\""
     << fx(X(xmin + 2.0 * half_w)) << "\" y2=\"" << fx(Y(0.0)) << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";

  const double deg = -wa.axis_angle * 180.0 / std::numbers::pi;
  os << "<ellipse class=\"numerical-range\" cx=\"" << fx(X(wa.center.real())) << "\" cy=\"" << fx(Y(wa.center.imag()))
     << "\" rx=\"" << fx(wa.semi_axis_u * scale) << "\" ry=\"" << fx(wa.semi_axis_v * scale) << "\" transform=\"rotate("
     << fx(deg) << ' ' << fx(X(wa.center.real())) << ' ' << fx(Y(wa.center.imag()))
     << ")\" fill=\"#eaf2fb\" stroke=\"#2e86c1\" stroke-width=\"1.5\"/>\n";
  os << "<ellipse class=\"omega\" cx=\"" << fx(X(om.center_x)) << "\" cy=\"" << fx(Y(0.0)) << "\" rx=\""
     << fx(om.rx * scale) << "\" ry=\"" << fx(om.ry * scale)
     << "\" fill=\"none\" stroke=\"#1c2833\" stroke-width=\"2\"/>\n";

  // Orientation arrows: direction of travel of z over each I_i.
  for (int i = 1; i <= kAlphabetSize; ++i) {
    const auto samples = interval_samples(pp, i, 31);
    const double xm = samples[15];
    const double xn = samples[16];
    const Complex w0 = z_eval(p, xm);
    const Complex w1 = z_eval(p, xn);
    const Complex dir = w1 - w0;
    if (std::abs(dir) == 0.0) continue;
    const Complex tip = w0 + dir / std::abs(dir) * (0.25 * std::min(om.rx, om.ry));
    os << "<line class=\"orientation\" data-interval=\"" << i << "\" data-sign=\"" << sign_of(i) << "\" x1=\""
       << fx(X(w0.real())) << "\" y1=\"" << fx(Y(w0.imag())) << "\" x2=\"" << fx(X(tip.real())) << "\" y2=\""
       << fx(Y(tip.imag())) << "\" stroke=\"#c0392b\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
  }

  for (const Complex v : {Complex(1.0, 0.0), Complex(-p.b(), 0.0)}) {
    os << "<rect class=\"vertex\" x=\"" << fx(X(v.real()) - 5.0) << "\" y=\"" << fx(Y(v.imag()) - 5.0)
       << "\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"#117a65\" stroke-width=\"2\"/>\n";
  }

  std::map<std::pair<long, long>, int> stacked;
  for (int i = 1; i <= static_cast<int>(kPartitionSize); ++i) {
    const Complex w = pp.S(i);
    const auto key = std::make_pair(std::lround(X(w.real())), std::lround(Y(w.imag())));
    const int slot = stacked[key]++;
    os << "<circle class=\"partition-point\" cx=\"" << fx(X(w.real())) << "\" cy=\"" << fx(Y(w.imag()))
       << "\" r=\"3.5\" fill=\"#1c2833\"/>\n";
    const double dx = w.real() >= om.center_x ? 8.0 : -30.0;
    os << "<text class=\"label\" x=\"" << fx(X(w.real()) + dx) << "\" y=\"" << fx(Y(w.imag()) - 6.0 + 14.0 * slot)
       << "\" font-family=\"sans-serif\" font-size=\"12\">S" << i << "</text>\n";
  }

  if (orbit) {
    const Orbit orb = iterate(p, orbit->x0, orbit->n);
    os << "<polyline class=\"orbit\" fill=\"none\" stroke=\"#8e44ad\" stroke-width=\"0.8\" stroke-opacity=\"0.7\" "
          "points=\"";
    for (std::size_t k = 0; k < orb.points.size(); ++k) {
      const Complex w = z_eval(p, orb.points[k]);
      os << (k ? " " : "") << fx(X(w.real())) << ',' << fx(Y(w.imag()));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

unsigned default_threads() {
  if (const char* env = std::getenv("NRDYN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

json error_object(int code, const std::string& kind, const std::string& message) {
  return {{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
}

int emit(const RunConfig& cfg, const std::string& body, std::ostream& out, std::ostream& err) {
  if (!cfg.output_path) {
    out << body;
    return kOk;
  }
  std::ofstream f(*cfg.output_path, std::ios::binary | std::ios::trunc);
  if (f) f << body;
  if (!f) {
    err << error_object(kUnwritable, "io", "cannot write output file '" + *cfg.output_path + "'").dump(2) << '\n';
    return kUnwritable;
  }
  return kOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& cmd = cfg.command;
  auto bad_format = [&](const char* allowed) {
    err << error_object(kUsage, "usage", "--format " + cfg.format + " is not valid for '" + cmd + "' (use " + allowed + ")")
               .dump(2)
        << '\n';
    return kUsage;
  };

  if (cmd == "scan") {
    if (!cfg.a_range || !cfg.b_range) {
      err << error_object(kUsage, "usage", "scan needs --a-range and --b-range").dump(2) << '\n';
      return kUsage;
    }
    const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
    if (fmt != "csv" && fmt != "json") return bad_format("csv or json");
    const auto rows = scan(*cfg.a_range, *cfg.b_range, cfg.n, cfg.tol.num, cfg.threads);
    return emit(cfg, fmt == "csv" ? scan_csv(rows) : scan_json(rows).dump(2) + "\n", out, err);
  }

  const Params p(cfg.a, cfg.b);
  if (cmd == "analyze" || cmd == "partition" || cmd == "check") {
    if (!cfg.format.empty() && cfg.format != "json") return bad_format("json");
  }
  if (cmd == "analyze") return emit(cfg, analysis_report(p).dump(2) + "\n", out, err);
  if (cmd == "partition") return emit(cfg, partition_report(p).dump(2) + "\n", out, err);
  if (cmd == "itinerary") {
    const std::string fmt = cfg.format.empty() ? "json" : cfg.format;
    if (fmt == "json") return emit(cfg, itinerary_report(p, cfg.x0, cfg.n, cfg.tol.num).dump(2) + "\n", out, err);
    if (fmt == "csv") return emit(cfg, itinerary_csv(p, cfg.x0, cfg.n), out, err);
    return bad_format("json or csv");
  }
  if (cmd == "check") {
    const CheckOutcome res = run_checks(p, cfg.tol, cfg.seed);
    const int rc = emit(cfg, res.detail.dump(2) + "\n", out, err);
    if (rc != kOk) return rc;
    return res.all_pass ? kOk : kCheckFailed;
  }
  if (cmd == "plot") {
    if (!cfg.format.empty() && cfg.format != "svg") return bad_format("svg");
    std::optional<OrbitOverlay> overlay;
    if (cfg.x0_given) overlay = OrbitOverlay{cfg.x0, cfg.n};
    return emit(cfg, plot_svg(p, overlay), out, err);
  }
  err << error_object(kUsage, "usage", "unknown command '" + cmd + "'").dump(2) << '\n';
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical-range embedding and symbolic dynamics of f(x) = (x^2 - a)/(x^2 - b)", "nrdyn"};
  app.footer(
      "Scan grids run a-major with b varying fastest. Exit codes: 0 ok, 1 check failed, 2 usage, "
      "3 partition structure failure, 4 unwritable output. NRDYN_THREADS overrides the --threads default.");

  RunConfig cfg;
  cfg.threads = default_threads();
  std::optional<double> a;
  std::optional<double> b;
  std::string x0_text;
  std::string a_range;
  std::string b_range;
  long long n = 5000;

  app.add_option("command", cfg.command, "analyze | partition | itinerary | scan | check | plot")
      ->required()
      ->check(CLI::IsMember({"analyze", "partition", "itinerary", "scan", "check", "plot"}));
  app.add_option("--a", a, "parameter a (a > b > 0)");
  app.add_option("--b", b, "parameter b");
  app.add_option("--x0", x0_text, "orbit start, a real or 'inf' (default 0)");
  app.add_option("--n", n, "orbit length (default 5000)");
  app.add_option("--a-range", a_range, "scan grid for a, lo:hi:step");
  app.add_option("--b-range", b_range, "scan grid for b, lo:hi:step");
  app.add_option("--seed", cfg.seed, "sampling seed (default 0)");
  app.add_option("--threads", cfg.threads, "scan workers");
  app.add_option("--out", cfg.output_path, "output file (default stdout)");
  app.add_option("--format", cfg.format, "json | csv | svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--tol-ellipse", cfg.tol.ellipse, "ellipse residual tolerance");
  app.add_option("--tol-symmetry", cfg.tol.symmetry, "conjugation symmetry tolerance");
  app.add_option("--tol-vertex", cfg.tol.vertex, "vertex lemma tolerance");
  app.add_option("--tol-support", cfg.tol.support, "support function tolerance");
  app.add_option("--tol-contain", cfg.tol.contain, "containment tolerance");
  app.add_option("--tol-tangency", cfg.tol.tangency, "vertical tangency tolerance");
  app.add_option("--tol-coincidence", cfg.tol.coincidence, "coincidence identity tolerance");
  app.add_option("--tol-shift", cfg.tol.shift, "shift identity tolerance");
  app.add_option("--num-tol", cfg.tol.num, "cycle detection tolerance");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (n < 0) throw std::invalid_argument("--n must be >= 0");
    cfg.n = static_cast<std::size_t>(n);
    if (!x0_text.empty()) {
      cfg.x0 = parse_ext_real(x0_text);
      cfg.x0_given = true;
    }
    if (!a_range.empty()) cfg.a_range = parse_range(a_range);
    if (!b_range.empty()) cfg.b_range = parse_range(b_range);
    if (cfg.command != "scan") {
      if (!a || !b) throw std::invalid_argument("--a and --b are required for '" + cfg.command + "'");
      cfg.a = *a;
      cfg.b = *b;
      (void)Params(cfg.a, cfg.b);
    }
    if (cfg.threads == 0) cfg.threads = 1;
  } catch (const std::exception& e) {
    err << error_object(kUsage, "usage", e.what()).dump(2) << '\n';
    return kUsage;
  }

  try {
    return dispatch(cfg, out, err);
  } catch (const InvalidParams& e) {
    err << error_object(kUsage, "usage", e.what()).dump(2) << '\n';
    return kUsage;
  } catch (const StructuralError& e) {
    err << error_object(kStructural, "structural", e.what()).dump(2) << '\n';
    return kStructural;
  } catch (const NumericalError& e) {
    err << error_object(kStructural, "numerical", e.what()).dump(2) << '\n';
    return kStructural;
  }
}

}  // namespace nrdyn::cli
