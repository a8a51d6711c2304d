#pragma once

#include <string>
#include <vector>

#include "spb/bounds.hpp"
#include "spb/geometry.hpp"
#include "spb/spectrum.hpp"

namespace spb {

const char* version_string();

// One declarative verification case: a domain, a spectrum source, and the
// bound kinds to sweep over 1..n_max.
struct CaseSpec {
  std::string name;
  DomainSpec domain;
  std::string source = "analytic";  // "analytic" | "fdm" | "fdm-richardson"
  int grid = 0;       // fdm: refine the mask until max(width, height) >= grid
  long n_max = 100;
  std::vector<std::string> kinds;
  double melas_c = -1.0;  // required when kinds include "melas"
  long inject_index = 0;  // fault injection: 1-based index, 0 = off
  double inject_scale = 1.0;
};

// Known bound kinds, in canonical order.
const std::vector<std::string>& known_kinds();

struct KindSummary {
  std::string kind;
  long total = 0;
  long verified = 0;
  double min_sharpness = 0.0;
  double worst_margin = 0.0;
  BoundEvaluation worst;                  // meaningful when total > 0
  std::vector<BoundEvaluation> failures;  // capped at 10 records
};

struct CaseReport {
  CaseSpec spec;
  Provenance provenance = Provenance::AnalyticBox;
  double deflation = 0.0;  // relative verification tolerance applied
  long solved_width = 0;   // fdm sources: the grid actually solved
  long solved_height = 0;
  double solved_h = 0.0;
  std::vector<KindSummary> kinds;
  long total = 0;
  long verified = 0;
  double min_sharpness = 0.0;
  double worst_margin = 0.0;
};

struct RunReport {
  std::vector<CaseReport> cases;
  long total = 0;
  long verified = 0;
  bool all_verified = false;
};

// Throws ParseError on malformed input, unknown kinds, missing mask files,
// or a Melas request without its constant.
std::vector<CaseSpec> parse_cases_json(const std::string& text);

std::vector<CaseSpec> default_cases();
std::string default_cases_json();

CaseReport run_case(const CaseSpec& spec);
// Runs cases sorted by name; SPECTRAL_BOUNDS_THREADS caps worker threads
// (default 1).  Assembly is deterministic regardless of thread count.
RunReport run_cases(std::vector<CaseSpec> cases);

// 17-significant-digit serialization; byte-identical across reruns.
std::string report_to_json(const RunReport& report);

// Shipped JSON schema for the report format and a validator for the subset
// it uses (type, required, properties, items, enum, $ref into definitions).
const char* report_schema_json();
void validate_report_json(const std::string& text);  // throws ParseError
std::string report_summary(const std::string& report_json);

enum class ScanQuantity {
  WeylRatio,
  OnePointImprovement,
  TwoPointFactor,
  AvgConstant,
};
ScanQuantity parse_scan_quantity(const std::string& name);
std::string scan_tsv(const DomainSpec& domain, ScanQuantity quantity, long n_max);

}  // namespace spb
