#include "spb/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "spb/common.hpp"
#include "spb/fdm.hpp"

namespace spb {
namespace {

using nlohmann::json;

constexpr int kCaseSchemaVersion = 1;
constexpr std::size_t kMaxFailureRecords = 10;
constexpr long kAnalyticNMax = 200000;
constexpr long kFdmNMax = 1000;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_domain_json(std::string& out, const DomainSpec& domain) {
  if (const Box* b = as_box(domain)) {
    out += "{\"type\":\"box\",\"lengths\":[";
    for (std::size_t i = 0; i < b->lengths.size(); ++i) {
      if (i) out += ',';
      out += fmt_g(b->lengths[i]);
    }
    out += "]}";
  } else if (const Ball* ball = as_ball(domain)) {
    out += "{\"type\":\"ball\",\"d\":" + std::to_string(ball->d) +
           ",\"radius\":" + fmt_g(ball->radius) + "}";
  } else {
    const Mask2D& m = *as_mask(domain);
    out += "{\"type\":\"mask\",\"width\":" + std::to_string(m.width) +
           ",\"height\":" + std::to_string(m.height) + ",\"h\":" + fmt_g(m.h) +
           ",\"cells\":" + std::to_string(m.occupied_count()) + "}";
  }
}

void append_eval_json(std::string& out, const BoundEvaluation& ev) {
  out += "{\"kind\":";
  append_json_string(out, ev.kind);
  out += ",\"n\":" + std::to_string(ev.n);
  if (ev.k >= 0) out += ",\"k\":" + std::to_string(ev.k);
  if (ev.ell >= 0) out += ",\"ell\":" + std::to_string(ev.ell);
  out += ",\"lhs\":" + fmt_g(ev.lhs);
  out += ",\"rhs\":" + fmt_g(ev.rhs);
  out += ",\"margin\":" + fmt_g(ev.margin());
  out += ",\"sharpness\":" + fmt_g(ev.sharpness());
  out += ",\"verified\":";
  out += ev.verified ? "true" : "false";
  out += '}';
}

// Accumulates one bound kind's sweep into its summary.
struct KindAccum {
  KindSummary s;
  double best_sharp = std::numeric_limits<double>::infinity();
  double worst_margin = std::numeric_limits<double>::infinity();

  explicit KindAccum(const std::string& kind) { s.kind = kind; }

  void add(const BoundEvaluation& ev) {
    ++s.total;
    if (ev.verified) {
      ++s.verified;
    } else if (s.failures.size() < kMaxFailureRecords) {
      s.failures.push_back(ev);
    }
    double sh = ev.sharpness();
    if (sh < best_sharp) best_sharp = sh;
    double mg = ev.margin();
    if (mg < worst_margin) {
      worst_margin = mg;
      s.worst = ev;
    }
  }

  KindSummary finish() {
    if (s.total > 0) {
      s.min_sharpness = best_sharp;
      s.worst_margin = worst_margin;
    }
    return std::move(s);
  }
};

// Shared per-case context: spectrum, prefix sums, index powers.
struct CaseData {
  const Spectrum* s = nullptr;
  const DomainSpec* domain = nullptr;
  int d = 0;
  double vol = 0.0;
  double c = 0.0;  // Li-Yau constant
  double defl = 0.0;
  std::vector<double> prefix;  // prefix[n] = sum of the first n eigenvalues
  std::vector<double> ipow;    // ipow[n] = index_power(n, d)
};

CaseData make_case_data(const Spectrum& s, double defl) {
  CaseData cd;
  cd.s = &s;
  cd.domain = &s.domain;
  cd.d = dimension(s.domain);
  cd.vol = volume(s.domain);
  cd.c = ly_constant(cd.d, cd.vol).value;
  cd.defl = defl;
  std::size_t n = s.eigenvalues.size();
  cd.prefix.resize(n + 1);
  cd.ipow.resize(n + 1);
  cd.prefix[0] = 0.0;
  cd.ipow[0] = 1.0;
  long double run = 0.0L;
  for (std::size_t m = 1; m <= n; ++m) {
    run += s.eigenvalues[m - 1];
    cd.prefix[m] = static_cast<double>(run);
    cd.ipow[m] = index_power(static_cast<long>(m), cd.d);
  }
  return cd;
}

bool holds(const CaseData& cd, double lhs, double rhs, bool strict) {
  double bar = rhs * (1.0 - cd.defl);
  return strict ? lhs > bar : lhs >= bar;
}

long smallest_admissible_shift(long n, long hi, int d) {
  // (n+l)^2 l^d grows in l and l = n is always admissible.
  if (hi < 1 || !two_point_admissible(n, hi, d)) return 0;
  long lo = 1;
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (two_point_admissible(n, mid, d)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

KindSummary evaluate_kind(const CaseData& cd, const CaseSpec& spec,
                          const std::string& kind) {
  KindAccum acc(kind);
  const Spectrum& s = *cd.s;
  long N = static_cast<long>(s.eigenvalues.size());
  if (kind == "liyau-sum" || kind == "liyau-single" || kind == "polya" ||
      kind == "melas") {
    double inertia = kind == "melas" ? moment_of_inertia(*cd.domain) : 0.0;
    for (long n = 1; n <= N; ++n) {
      BoundEvaluation ev;
      ev.kind = kind;
      ev.n = n;
      if (kind == "liyau-sum") {
        ev.lhs = cd.prefix[n];
        ev.rhs = liyau_sum_bound(n, cd.d, cd.vol);
      } else if (kind == "liyau-single") {
        ev.lhs = s.eigenvalues[n - 1];
        ev.rhs = liyau_single_bound(n, cd.d, cd.vol);
      } else if (kind == "polya") {
        ev.lhs = s.eigenvalues[n - 1];
        ev.rhs = polya_bound(n, cd.d, cd.vol);
      } else {
        ev.lhs = cd.prefix[n];
        ev.rhs = melas_bound(n, cd.d, cd.vol, inertia, spec.melas_c);
      }
      ev.verified = holds(cd, ev.lhs, ev.rhs, false);
      acc.add(ev);
    }
  } else if (kind == "one-point") {
    // The largest shifted right-hand side over k dominates the family, so
    // verifying at the best shift verifies every k <= n.
    for (long n = 1; n <= N; ++n) {
      BestShift best = one_point_best_shift(s, n);
      BoundEvaluation ev;
      ev.kind = kind;
      ev.n = n;
      ev.k = best.k;
      ev.lhs = s.eigenvalues[n - 1];
      ev.rhs = one_point_rhs(s, n, best.k);
      ev.verified = holds(cd, ev.lhs, ev.rhs, false);
      acc.add(ev);
    }
  } else if (kind == "two-point") {
    for (long n = 1; n < N; ++n) {
      long lstar = smallest_admissible_shift(n, N - n, cd.d);
      if (lstar == 0) continue;
      for (long l = lstar; l <= N - n; ++l) {
        BoundEvaluation ev;
        ev.kind = kind;
        ev.n = n;
        ev.ell = l;
        ev.lhs = s.eigenvalues[n - 1] / cd.ipow[n] +
                 s.eigenvalues[n + l - 1] / cd.ipow[n + l];
        ev.rhs = two_point_factor(n, l, cd.d) * cd.c;
        ev.verified = holds(cd, ev.lhs, ev.rhs, false);
        acc.add(ev);
      }
    }
  } else if (kind == "avg-ratio") {
    long double run = 0.0L;
    for (long n = 1; n <= N; ++n) {
      run += s.eigenvalues[n - 1] / cd.ipow[n];
      BoundEvaluation ev;
      ev.kind = kind;
      ev.n = n;
      ev.lhs = static_cast<double>(run) / n;
      ev.rhs = cd.c;
      ev.verified = holds(cd, ev.lhs, ev.rhs, true);
      acc.add(ev);
    }
  } else {
    throw ParseError("unknown bound kind: " + kind);
  }
  return acc.finish();
}

Mask2D refined_mask(const Mask2D& mask, int grid) {
  Mask2D m = mask;
  while (grid > 0 && std::max(m.width, m.height) < grid) {
    m = refine(m);
  }
  return m;
}

int env_threads() {
  const char* v = std::getenv("SPECTRAL_BOUNDS_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  long t = std::strtol(v, &end, 10);
  if (end == nullptr || *end != '\0' || t < 1) return 1;
  return static_cast<int>(std::min<long>(t, 32));
}

const json& schema_json();

void validate_node(const json& sch, const json& root, const json& node,
                   const std::string& path) {
  if (sch.contains("$ref")) {
    const std::string ref = sch["$ref"].get<std::string>();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) {
      throw ParseError("schema: unsupported $ref " + ref);
    }
    validate_node(root["definitions"][ref.substr(prefix.size())], root, node, path);
    return;
  }
  if (sch.contains("type")) {
    const std::string t = sch["type"].get<std::string>();
    bool ok = (t == "object" && node.is_object()) ||
              (t == "array" && node.is_array()) ||
              (t == "string" && node.is_string()) ||
              (t == "boolean" && node.is_boolean()) ||
              (t == "integer" && node.is_number_integer()) ||
              (t == "number" && node.is_number());
    if (!ok) throw ParseError(path + ": expected " + t);
  }
  if (sch.contains("enum")) {
    bool ok = false;
    for (const json& v : sch["enum"]) {
      if (v == node) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ParseError(path + ": value not in enum");
  }
  if (node.is_object()) {
    if (sch.contains("required")) {
      for (const json& key : sch["required"]) {
        if (!node.contains(key.get<std::string>())) {
          throw ParseError(path + ": missing required field " +
                           key.get<std::string>());
        }
      }
    }
    if (sch.contains("properties")) {
      for (auto it = sch["properties"].begin(); it != sch["properties"].end();
           ++it) {
        if (node.contains(it.key())) {
          validate_node(it.value(), root, node[it.key()], path + "." + it.key());
        }
      }
    }
  }
  if (node.is_array() && sch.contains("items")) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      validate_node(sch["items"], root, node[i],
                    path + "[" + std::to_string(i) + "]");
    }
  }
}

DomainSpec parse_domain_json(const json& j, const std::string& ctx) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ParseError(ctx + ": domain must be an object with a type");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "box") {
    if (!j.contains("lengths") || !j["lengths"].is_array() ||
        j["lengths"].empty()) {
      throw ParseError(ctx + ": box domain needs a lengths array");
    }
    std::vector<double> lengths;
    for (const json& v : j["lengths"]) {
      if (!v.is_number()) throw ParseError(ctx + ": box lengths must be numbers");
      lengths.push_back(v.get<double>());
    }
    return make_box(lengths);
  }
  if (type == "ball") {
    if (!j.contains("d") || !j["d"].is_number_integer() || !j.contains("radius") ||
        !j["radius"].is_number()) {
      throw ParseError(ctx + ": ball domain needs integer d and radius");
    }
    return make_ball(j["d"].get<int>(), j["radius"].get<double>());
  }
  if (type == "mask") {
    if (!j.contains("path") || !j["path"].is_string()) {
      throw ParseError(ctx + ": mask domain needs a path");
    }
    return make_mask(load_mask(j["path"].get<std::string>()));
  }
  throw ParseError(ctx + ": unknown domain type " + type);
}

}  // namespace

const char* version_string() { return "1.0.0"; }

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds = {
      "liyau-sum", "liyau-single", "polya",    "melas",
      "one-point", "two-point",    "avg-ratio"};
  return kinds;
}

std::vector<CaseSpec> parse_cases_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("case file is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("schema_version") ||
      root["schema_version"] != kCaseSchemaVersion) {
    throw ParseError("case file must declare schema_version 1");
  }
  if (!root.contains("cases") || !root["cases"].is_array() ||
      root["cases"].empty()) {
    throw ParseError("case file must contain a nonempty cases array");
  }
  std::vector<CaseSpec> out;
  for (std::size_t i = 0; i < root["cases"].size(); ++i) {
    const json& cj = root["cases"][i];
    std::string ctx = "case " + std::to_string(i + 1);
    if (!cj.is_object()) throw ParseError(ctx + ": must be an object");
    CaseSpec spec;
    if (!cj.contains("name") || !cj["name"].is_string() ||
        cj["name"].get<std::string>().empty()) {
      throw ParseError(ctx + ": needs a nonempty name");
    }
    spec.name = cj["name"].get<std::string>();
    ctx = "case " + spec.name;
    if (!cj.contains("domain")) throw ParseError(ctx + ": needs a domain");
    spec.domain = parse_domain_json(cj["domain"], ctx);
    if (cj.contains("source")) {
      if (!cj["source"].is_string()) throw ParseError(ctx + ": source must be a string");
      spec.source = cj["source"].get<std::string>();
    }
    if (spec.source != "analytic" && spec.source != "fdm" &&
        spec.source != "fdm-richardson") {
      throw ParseError(ctx + ": unknown source " + spec.source);
    }
    bool is_mask = as_mask(spec.domain) != nullptr;
    if (spec.source == "analytic" && is_mask) {
      throw ParseError(ctx + ": mask domains have no analytic spectrum; use fdm");
    }
    if (spec.source != "analytic" && !is_mask) {
      throw ParseError(ctx + ": fdm sources require a mask domain");
    }
    if (cj.contains("grid")) {
      if (!cj["grid"].is_number_integer() || cj["grid"].get<long>() < 0 ||
          cj["grid"].get<long>() > 4096) {
        throw ParseError(ctx + ": grid must be an integer in [0, 4096]");
      }
      spec.grid = cj["grid"].get<int>();
    }
    if (cj.contains("n_max")) {
      if (!cj["n_max"].is_number_integer() || cj["n_max"].get<long>() < 1) {
        throw ParseError(ctx + ": n_max must be a positive integer");
      }
      spec.n_max = cj["n_max"].get<long>();
    }
    long cap = spec.source == "analytic" ? kAnalyticNMax : kFdmNMax;
    if (spec.n_max > cap) {
      throw ParseError(ctx + ": n_max exceeds the " + spec.source + " cap of " +
                       std::to_string(cap));
    }
    if (!cj.contains("kinds") || !cj["kinds"].is_array() || cj["kinds"].empty()) {
      throw ParseError(ctx + ": needs a nonempty kinds array");
    }
    for (const json& kv : cj["kinds"]) {
      if (!kv.is_string()) throw ParseError(ctx + ": kinds must be strings");
      std::string kind = kv.get<std::string>();
      if (std::find(known_kinds().begin(), known_kinds().end(), kind) ==
          known_kinds().end()) {
        throw ParseError(ctx + ": unknown bound kind " + kind);
      }
      spec.kinds.push_back(kind);
    }
    if (cj.contains("melas_c")) {
      if (!cj["melas_c"].is_number()) throw ParseError(ctx + ": melas_c must be a number");
      spec.melas_c = cj["melas_c"].get<double>();
    }
    bool wants_melas = std::find(spec.kinds.begin(), spec.kinds.end(), "melas") !=
                       spec.kinds.end();
    if (wants_melas && !(spec.melas_c >= 0.0 && std::isfinite(spec.melas_c))) {
      throw ParseError(ctx + ": melas kind requires a nonnegative melas_c constant");
    }
    if (cj.contains("inject")) {
      const json& inj = cj["inject"];
      if (!inj.is_object() || !inj.contains("index") ||
          !inj["index"].is_number_integer() || inj["index"].get<long>() < 1 ||
          !inj.contains("scale") || !inj["scale"].is_number()) {
        throw ParseError(ctx + ": inject needs {index >= 1, scale}");
      }
      spec.inject_index = inj["index"].get<long>();
      spec.inject_scale = inj["scale"].get<double>();
      if (spec.inject_index > spec.n_max) {
        throw ParseError(ctx + ": inject index exceeds n_max");
      }
      if (!std::isfinite(spec.inject_scale) || spec.inject_scale < 0.0) {
        throw ParseError(ctx + ": inject scale must be finite and nonnegative");
      }
    }
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<CaseSpec> default_cases() {
  std::vector<CaseSpec> out;
  const std::vector<std::string> kinds = {"liyau-sum", "liyau-single",
                                          "one-point", "two-point", "avg-ratio"};
  auto add = [&](const std::string& name, DomainSpec domain) {
    CaseSpec spec;
    spec.name = name;
    spec.domain = std::move(domain);
    spec.source = "analytic";
    spec.n_max = 1000;
    spec.kinds = kinds;
    out.push_back(std::move(spec));
  };
  add("interval", make_box({1.0}));
  add("unit-square", make_box({1.0, 1.0}));
  add("rectangle-2x1", make_box({2.0, 1.0}));
  add("unit-disk", make_ball(2, 1.0 / std::sqrt(M_PI)));
  return out;
}

std::string default_cases_json() {
  std::string out = "{\"schema_version\":1,\"cases\":[";
  bool first_case = true;
  for (const CaseSpec& spec : default_cases()) {
    if (!first_case) out += ',';
    first_case = false;
    out += "{\"name\":";
    append_json_string(out, spec.name);
    out += ",\"domain\":";
    append_domain_json(out, spec.domain);
    out += ",\"source\":";
    append_json_string(out, spec.source);
    out += ",\"n_max\":" + std::to_string(spec.n_max);
    out += ",\"kinds\":[";
    for (std::size_t i = 0; i < spec.kinds.size(); ++i) {
      if (i) out += ',';
      append_json_string(out, spec.kinds[i]);
    }
    out += "]}";
  }
  out += "]}";
  return out;
}

CaseReport run_case(const CaseSpec& spec) {
  CaseReport report;
  report.spec = spec;

  Spectrum spectrum;
  if (spec.source == "analytic") {
    spectrum = analytic_spectrum(spec.domain, spec.n_max);
    report.deflation = 0.0;
  } else {
    Mask2D solved = refined_mask(*as_mask(spec.domain), spec.grid);
    DomainSpec dom = make_mask(solved, spec.name);
    DiscreteLaplacian lap(dom);
    SolverConfig cfg;
    cfg.count = static_cast<int>(spec.n_max);
    FdmEigen eig = smallest_eigs(lap, cfg);
    if (spec.source == "fdm-richardson") {
      Mask2D fine_mask = refine(solved);
      DomainSpec fine_dom = make_mask(fine_mask, spec.name);
      DiscreteLaplacian fine_lap(fine_dom);
      FdmEigen fine = smallest_eigs(fine_lap, cfg);
      spectrum = richardson_extrapolate(eig.spectrum, fine.spectrum);
      report.solved_width = fine_mask.width;
      report.solved_height = fine_mask.height;
      report.solved_h = fine_mask.h;
    } else {
      spectrum = eig.spectrum;
      report.solved_width = solved.width;
      report.solved_height = solved.height;
      report.solved_h = solved.h;
    }
    double lam_max = spectrum.eigenvalues.back();
    report.deflation =
        deflation_tolerance(lam_max, report.solved_h, spectrum.provenance) /
        lam_max;
  }
  report.provenance = spectrum.provenance;

  if (spec.inject_index >= 1) {
    if (spec.inject_index > static_cast<long>(spectrum.eigenvalues.size())) {
      throw ParseError("case " + spec.name + ": inject index exceeds the spectrum");
    }
    spectrum.eigenvalues[spec.inject_index - 1] *= spec.inject_scale;
  }

  CaseData cd = make_case_data(spectrum, report.deflation);
  double best_sharp = std::numeric_limits<double>::infinity();
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const std::string& kind : spec.kinds) {
    KindSummary ks = evaluate_kind(cd, spec, kind);
    report.total += ks.total;
    report.verified += ks.verified;
    if (ks.total > 0) {
      best_sharp = std::min(best_sharp, ks.min_sharpness);
      worst_margin = std::min(worst_margin, ks.worst_margin);
    }
    report.kinds.push_back(std::move(ks));
  }
  if (report.total > 0) {
    report.min_sharpness = best_sharp;
    report.worst_margin = worst_margin;
  }
  return report;
}

RunReport run_cases(std::vector<CaseSpec> cases) {
  std::stable_sort(cases.begin(), cases.end(),
                   [](const CaseSpec& a, const CaseSpec& b) { return a.name < b.name; });
  RunReport run;
  run.cases.resize(cases.size());
  int threads = std::min<int>(env_threads(), static_cast<int>(cases.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      run.cases[i] = run_case(cases[i]);
    }
  } else {
    std::vector<std::exception_ptr> errors(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cases.size()) return;
        try {
          run.cases[i] = run_case(cases[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (const CaseReport& c : run.cases) {
    run.total += c.total;
    run.verified += c.verified;
  }
  run.all_verified = run.total == run.verified;
  return run;
}

std::string report_to_json(const RunReport& report) {
  std::string out = "{\"schema_version\":1,\"version\":";
  append_json_string(out, version_string());
  out += ",\"total\":" + std::to_string(report.total);
  out += ",\"verified\":" + std::to_string(report.verified);
  out += ",\"all_verified\":";
  out += report.all_verified ? "true" : "false";
  out += ",\"cases\":[";
  bool first_case = true;
  for (const CaseReport& c : report.cases) {
    if (!first_case) out += ',';
    first_case = false;
    out += "{\"name\":";
    append_json_string(out, c.spec.name);
    out += ",\"domain\":";
    append_domain_json(out, c.spec.domain);
    out += ",\"source\":";
    append_json_string(out, c.spec.source);
    out += ",\"provenance\":";
    append_json_string(out, provenance_name(c.provenance));
    out += ",\"n_max\":" + std::to_string(c.spec.n_max);
    out += ",\"deflation\":" + fmt_g(c.deflation);
    if (c.spec.melas_c >= 0.0) out += ",\"melas_c\":" + fmt_g(c.spec.melas_c);
    if (c.solved_width > 0) {
      out += ",\"solved\":{\"width\":" + std::to_string(c.solved_width) +
             ",\"height\":" + std::to_string(c.solved_height) +
             ",\"h\":" + fmt_g(c.solved_h) + "}";
    }
    if (c.spec.inject_index >= 1) {
      out += ",\"inject\":{\"index\":" + std::to_string(c.spec.inject_index) +
             ",\"scale\":" + fmt_g(c.spec.inject_scale) + "}";
    }
    out += ",\"total\":" + std::to_string(c.total);
    out += ",\"verified\":" + std::to_string(c.verified);
    out += ",\"min_sharpness\":" + fmt_g(c.min_sharpness);
    out += ",\"worst_margin\":" + fmt_g(c.worst_margin);
    out += ",\"kinds\":[";
    bool first_kind = true;
    for (const KindSummary& ks : c.kinds) {
      if (!first_kind) out += ',';
      first_kind = false;
      out += "{\"kind\":";
      append_json_string(out, ks.kind);
      out += ",\"total\":" + std::to_string(ks.total);
      out += ",\"verified\":" + std::to_string(ks.verified);
      out += ",\"min_sharpness\":" + fmt_g(ks.min_sharpness);
      out += ",\"worst_margin\":" + fmt_g(ks.worst_margin);
      if (ks.total > 0) {
        out += ",\"worst\":";
        append_eval_json(out, ks.worst);
      }
      out += ",\"failures\":[";
      for (std::size_t i = 0; i < ks.failures.size(); ++i) {
        if (i) out += ',';
        append_eval_json(out, ks.failures[i]);
      }
      out += "]}";
    }
    out += "]}";
  }
  out += "]}";
  return out;
}

namespace {

const char kReportSchema[] = R"SCHEMA({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "spectral-bounds verification report",
  "type": "object",
  "required": ["schema_version", "version", "total", "verified", "all_verified", "cases"],
  "properties": {
    "schema_version": {"type": "integer", "enum": [1]},
    "version": {"type": "string"},
    "total": {"type": "integer"},
    "verified": {"type": "integer"},
    "all_verified": {"type": "boolean"},
    "cases": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "domain", "source", "provenance", "n_max", "deflation", "total", "verified", "min_sharpness", "worst_margin", "kinds"],
        "properties": {
          "name": {"type": "string"},
          "domain": {"type": "object"},
          "source": {"type": "string", "enum": ["analytic", "fdm", "fdm-richardson"]},
          "provenance": {"type": "string", "enum": ["analytic-box", "analytic-ball", "fdm-discrete", "fdm-extrapolated"]},
          "n_max": {"type": "integer"},
          "deflation": {"type": "number"},
          "melas_c": {"type": "number"},
          "solved": {
            "type": "object",
            "required": ["width", "height", "h"],
            "properties": {
              "width": {"type": "integer"},
              "height": {"type": "integer"},
              "h": {"type": "number"}
            }
          },
          "inject": {
            "type": "object",
            "required": ["index", "scale"],
            "properties": {
              "index": {"type": "integer"},
              "scale": {"type": "number"}
            }
          },
          "total": {"type": "integer"},
          "verified": {"type": "integer"},
          "min_sharpness": {"type": "number"},
          "worst_margin": {"type": "number"},
          "kinds": {
            "type": "array",
            "items": {
              "type": "object",
              "required": ["kind", "total", "verified", "min_sharpness", "worst_margin", "failures"],
              "properties": {
                "kind": {"type": "string"},
                "total": {"type": "integer"},
                "verified": {"type": "integer"},
                "min_sharpness": {"type": "number"},
                "worst_margin": {"type": "number"},
                "worst": {"$ref": "#/definitions/evaluation"},
                "failures": {"type": "array", "items": {"$ref": "#/definitions/evaluation"}}
              }
            }
          }
        }
      }
    }
  },
  "definitions": {
    "evaluation": {
      "type": "object",
      "required": ["kind", "n", "lhs", "rhs", "margin", "sharpness", "verified"],
      "properties": {
        "kind": {"type": "string"},
        "n": {"type": "integer"},
        "k": {"type": "integer"},
        "ell": {"type": "integer"},
        "lhs": {"type": "number"},
        "rhs": {"type": "number"},
        "margin": {"type": "number"},
        "sharpness": {"type": "number"},
        "verified": {"type": "boolean"}
      }
    }
  }
}
)SCHEMA";

const json& schema_json() {
  static const json schema = json::parse(kReportSchema);
  return schema;
}

}  // namespace

const char* report_schema_json() { return kReportSchema; }

void validate_report_json(const std::string& text) {
  json node;
  try {
    node = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  validate_node(schema_json(), schema_json(), node, "$");
}

std::string report_summary(const std::string& report_json) {
  validate_report_json(report_json);
  json r = json::parse(report_json);
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "verification report v%s: %ld case(s), %ld/%ld verified\n",
                r["version"].get<std::string>().c_str(),
                static_cast<long>(r["cases"].size()), r["verified"].get<long>(),
                r["total"].get<long>());
  out += buf;
  for (const json& c : r["cases"]) {
    std::snprintf(buf, sizeof(buf), "  %s [%s, n <= %ld]: %ld/%ld verified",
                  c["name"].get<std::string>().c_str(),
                  c["provenance"].get<std::string>().c_str(),
                  c["n_max"].get<long>(), c["verified"].get<long>(),
                  c["total"].get<long>());
    out += buf;
    if (c["deflation"].get<double>() > 0.0) {
      out += ", deflation " + fmt_g(c["deflation"].get<double>());
    }
    out += '\n';
    for (const json& ks : c["kinds"]) {
      std::snprintf(buf, sizeof(buf), "    %-12s %ld/%ld",
                    ks["kind"].get<std::string>().c_str(),
                    ks["verified"].get<long>(), ks["total"].get<long>());
      out += buf;
      if (ks["total"].get<long>() > 0) {
        out += "  min sharpness " + fmt_g(ks["min_sharpness"].get<double>()) +
               "  worst margin " + fmt_g(ks["worst_margin"].get<double>());
      }
      out += '\n';
      for (const json& f : ks["failures"]) {
        out += "      FAIL n=" + std::to_string(f["n"].get<long>());
        if (f.contains("k")) out += " k=" + std::to_string(f["k"].get<long>());
        if (f.contains("ell")) out += " ell=" + std::to_string(f["ell"].get<long>());
        out += " lhs=" + fmt_g(f["lhs"].get<double>()) +
               " rhs=" + fmt_g(f["rhs"].get<double>()) + '\n';
      }
    }
  }
  out += r["all_verified"].get<bool>() ? "all bounds verified\n"
                                       : "UNVERIFIED bounds present\n";
  return out;
}

ScanQuantity parse_scan_quantity(const std::string& name) {
  if (name == "weyl-ratio") return ScanQuantity::WeylRatio;
  if (name == "onepoint-improvement") return ScanQuantity::OnePointImprovement;
  if (name == "twopoint-factor") return ScanQuantity::TwoPointFactor;
  if (name == "avg-constant") return ScanQuantity::AvgConstant;
  throw std::invalid_argument(
      "unknown scan quantity " + name +
      " (choose weyl-ratio, onepoint-improvement, twopoint-factor, avg-constant)");
}

std::string scan_tsv(const DomainSpec& domain, ScanQuantity quantity, long n_max) {
  if (n_max < 1) throw std::invalid_argument("scan requires n_max >= 1");
  if (as_mask(domain) != nullptr) {
    throw std::invalid_argument("scan requires a closed-form domain (box or ball)");
  }
  int d = dimension(domain);
  double vol = volume(domain);
  double c = ly_constant(d, vol).value;
  std::string out;
  char buf[160];
  switch (quantity) {
    case ScanQuantity::WeylRatio: {
      if (n_max > kAnalyticNMax) {
        throw std::invalid_argument("weyl-ratio scan capped at n_max = 200000");
      }
      Spectrum s = analytic_spectrum(domain, n_max);
      out += "n\tweyl_ratio\n";
      for (long n = 1; n <= n_max; ++n) {
        std::snprintf(buf, sizeof(buf), "%ld\t%.17g\n", n, weyl_ratio(s, n));
        out += buf;
      }
      break;
    }
    case ScanQuantity::OnePointImprovement: {
      if (n_max > 20000) {
        throw std::invalid_argument("onepoint-improvement scan capped at n_max = 20000");
      }
      Spectrum s = analytic_spectrum(domain, n_max);
      out += "n\tbest_k\tbest_ratio\thalf_k_ratio\n";
      for (long n = 1; n <= n_max; ++n) {
        BestShift best = one_point_best_shift(s, n);
        long half_k = std::max<long>(1, n / 2);
        double lam_n = s.eigenvalues[n - 1];
        double half_gain =
            (static_cast<double>(half_k) / n) * (lam_n - s.eigenvalues[half_k - 1]);
        double norm = 0.5 * liyau_single_bound(n, d, vol);
        std::snprintf(buf, sizeof(buf), "%ld\t%d\t%.17g\t%.17g\n", n, best.k,
                      best.improvement / norm, half_gain / norm);
        out += buf;
      }
      break;
    }
    case ScanQuantity::TwoPointFactor: {
      if (n_max > 1000000) {
        throw std::invalid_argument("twopoint-factor scan capped at n_max = 1000000");
      }
      out += "n\tl_min\tfactor\n";
      for (long n = 1; n <= n_max; ++n) {
        long lstar = smallest_admissible_shift(n, n, d);
        std::snprintf(buf, sizeof(buf), "%ld\t%ld\t%.17g\n", n, lstar,
                      two_point_factor(n, lstar, d));
        out += buf;
      }
      break;
    }
    case ScanQuantity::AvgConstant: {
      if (n_max > kAnalyticNMax) {
        throw std::invalid_argument("avg-constant scan capped at n_max = 200000");
      }
      Spectrum s = analytic_spectrum(domain, n_max);
      out += "n\tavg_ratio\n";
      long double run = 0.0L;
      for (long n = 1; n <= n_max; ++n) {
        run += s.eigenvalues[n - 1] / index_power(n, d);
        std::snprintf(buf, sizeof(buf), "%ld\t%.17g\n", n,
                      static_cast<double>(run) / n / c);
        out += buf;
      }
      break;
    }
  }
  return out;
}

}  // namespace spb
