#include "spectral_bounds.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "spb/bounds.hpp"
#include "spb/common.hpp"
#include "spb/fdm.hpp"
#include "spb/fourier.hpp"
#include "spb/geometry.hpp"
#include "spb/report.hpp"
#include "spb/special_functions.hpp"
#include "spb/spectrum.hpp"

struct sb_domain {
  spb::DomainSpec spec;
};

struct sb_spectrum {
  spb::Spectrum s;
};

namespace {

thread_local std::string t_error;

sb_status to_status(const std::exception& e) {
  t_error = e.what();
  if (dynamic_cast<const spb::ParseError*>(&e)) return SB_ERR_PARSE;
  if (dynamic_cast<const spb::ConvergenceError*>(&e)) return SB_ERR_NO_CONVERGENCE;
  if (dynamic_cast<const spb::QuadratureError*>(&e)) return SB_ERR_QUADRATURE;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return SB_ERR_INVALID_ARGUMENT;
  return SB_ERR_INTERNAL;
}

template <typename F>
sb_status guarded(F&& f) {
  try {
    f();
    return SB_OK;
  } catch (const std::exception& e) {
    return to_status(e);
  } catch (...) {
    t_error = "unknown error";
    return SB_ERR_INTERNAL;
  }
}

template <typename F>
double guarded_value(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    to_status(e);
    return std::numeric_limits<double>::quiet_NaN();
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sb_status require(bool ok, const char* msg) {
  if (ok) return SB_OK;
  t_error = msg;
  return SB_ERR_INVALID_ARGUMENT;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spb::ParseError(std::string("cannot open file: ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const spb::Mask2D& require_mask(const sb_domain* domain) {
  const spb::Mask2D* mask = spb::as_mask(domain->spec);
  if (mask == nullptr) throw std::invalid_argument("a mask domain is required");
  return *mask;
}

spb::Spectrum solve_fdm(const sb_domain* mask, int count, double tol) {
  require_mask(mask);
  spb::DiscreteLaplacian lap(mask->spec);
  spb::SolverConfig cfg;
  cfg.count = count;
  if (tol > 0.0) cfg.tol = tol;
  return spb::smallest_eigs(lap, cfg).spectrum;
}

sb_status verify_cases(std::vector<spb::CaseSpec> cases, char** report_json) {
  spb::RunReport run = spb::run_cases(std::move(cases));
  *report_json = dup_string(spb::report_to_json(run));
  if (!run.all_verified) {
    t_error = "unverified bounds present";
    return SB_ERR_UNVERIFIED;
  }
  return SB_OK;
}

}  // namespace

extern "C" {

const char* sb_version(void) { return spb::version_string(); }

const char* sb_last_error(void) { return t_error.c_str(); }

void sb_string_free(char* s) { std::free(s); }

sb_status sb_domain_box(const double* lengths, int d, sb_domain** out) {
  sb_status st = require(lengths != nullptr && out != nullptr && d >= 1,
                         "sb_domain_box: lengths, out, and d >= 1 required");
  if (st != SB_OK) return st;
  return guarded([&] {
    std::vector<double> ls(lengths, lengths + d);
    *out = new sb_domain{spb::make_box(ls)};
  });
}

sb_status sb_domain_ball(int d, double radius, sb_domain** out) {
  sb_status st = require(out != nullptr, "sb_domain_ball: out required");
  if (st != SB_OK) return st;
  return guarded([&] { *out = new sb_domain{spb::make_ball(d, radius)}; });
}

sb_status sb_domain_mask_load(const char* path, sb_domain** out) {
  sb_status st = require(path != nullptr && out != nullptr,
                         "sb_domain_mask_load: path and out required");
  if (st != SB_OK) return st;
  return guarded([&] { *out = new sb_domain{spb::make_mask(spb::load_mask(path))}; });
}

sb_status sb_domain_mask_parse(const char* text, sb_domain** out) {
  sb_status st = require(text != nullptr && out != nullptr,
                         "sb_domain_mask_parse: text and out required");
  if (st != SB_OK) return st;
  return guarded([&] {
    *out = new sb_domain{spb::make_mask(spb::parse_mask(text))};
  });
}

sb_status sb_domain_mask_refine(const sb_domain* mask, int target, sb_domain** out) {
  sb_status st = require(mask != nullptr && out != nullptr && target >= 1 &&
                             target <= 4096,
                         "sb_domain_mask_refine: mask, out, target in [1, 4096]");
  if (st != SB_OK) return st;
  return guarded([&] {
    spb::Mask2D m = require_mask(mask);
    while (std::max(m.width, m.height) < target) m = spb::refine(m);
    *out = new sb_domain{spb::make_mask(std::move(m))};
  });
}

void sb_domain_free(sb_domain* domain) { delete domain; }

int sb_domain_dimension(const sb_domain* domain) {
  if (domain == nullptr) return 0;
  return spb::dimension(domain->spec);
}

double sb_domain_volume(const sb_domain* domain) {
  if (domain == nullptr) return std::numeric_limits<double>::quiet_NaN();
  return guarded_value([&] { return spb::volume(domain->spec); });
}

double sb_domain_inertia(const sb_domain* domain) {
  if (domain == nullptr) return std::numeric_limits<double>::quiet_NaN();
  return guarded_value([&] { return spb::moment_of_inertia(domain->spec); });
}

sb_status sb_spectrum_analytic(const sb_domain* domain, long count, sb_spectrum** out) {
  sb_status st = require(domain != nullptr && out != nullptr,
                         "sb_spectrum_analytic: domain and out required");
  if (st != SB_OK) return st;
  return guarded([&] {
    *out = new sb_spectrum{spb::analytic_spectrum(domain->spec, count)};
  });
}

sb_status sb_spectrum_fdm(const sb_domain* mask, int count, double tol,
                          sb_spectrum** out) {
  sb_status st = require(mask != nullptr && out != nullptr,
                         "sb_spectrum_fdm: mask and out required");
  if (st != SB_OK) return st;
  return guarded([&] { *out = new sb_spectrum{solve_fdm(mask, count, tol)}; });
}

sb_status sb_spectrum_fdm_richardson(const sb_domain* mask, int count, double tol,
                                     sb_spectrum** out) {
  sb_status st = require(mask != nullptr && out != nullptr,
                         "sb_spectrum_fdm_richardson: mask and out required");
  if (st != SB_OK) return st;
  return guarded([&] {
    spb::Spectrum coarse = solve_fdm(mask, count, tol);
    spb::Mask2D fine_mask = spb::refine(require_mask(mask));
    sb_domain fine{spb::make_mask(std::move(fine_mask))};
    spb::Spectrum fine_spec = solve_fdm(&fine, count, tol);
    *out = new sb_spectrum{spb::richardson_extrapolate(coarse, fine_spec)};
  });
}

void sb_spectrum_free(sb_spectrum* s) { delete s; }

long sb_spectrum_count(const sb_spectrum* s) {
  if (s == nullptr) return 0;
  return static_cast<long>(s->s.eigenvalues.size());
}

double sb_spectrum_eigenvalue(const sb_spectrum* s, long n) {
  if (s == nullptr) {
    t_error = "sb_spectrum_eigenvalue: null spectrum";
    return std::numeric_limits<double>::quiet_NaN();
  }
  return guarded_value([&] { return spb::eigenvalue(s->s, n); });
}

const char* sb_spectrum_provenance(const sb_spectrum* s) {
  if (s == nullptr) return "";
  return spb::provenance_name(s->s.provenance);
}

sb_status sb_spectrum_csv(const sb_spectrum* s, char** out) {
  sb_status st = require(s != nullptr && out != nullptr,
                         "sb_spectrum_csv: spectrum and out required");
  if (st != SB_OK) return st;
  return guarded([&] { *out = dup_string(spb::spectrum_to_csv(s->s)); });
}

double sb_liyau_sum_bound(long n, int d, double volume) {
  return guarded_value([&] { return spb::liyau_sum_bound(n, d, volume); });
}

double sb_liyau_single_bound(long n, int d, double volume) {
  return guarded_value([&] { return spb::liyau_single_bound(n, d, volume); });
}

double sb_polya_bound(long n, int d, double volume) {
  return guarded_value([&] { return spb::polya_bound(n, d, volume); });
}

double sb_faber_krahn_bound(int d, double volume) {
  return guarded_value([&] { return spb::faber_krahn_bound(d, volume); });
}

double sb_melas_bound(long n, int d, double volume, double inertia, double c) {
  return guarded_value([&] { return spb::melas_bound(n, d, volume, inertia, c); });
}

int sb_two_point_admissible(long n, long l, int d) {
  try {
    return spb::two_point_admissible(n, l, d) ? 1 : 0;
  } catch (const std::exception& e) {
    to_status(e);
    return -1;
  }
}

double sb_two_point_factor(long n, long l, int d) {
  return guarded_value([&] { return spb::two_point_factor(n, l, d); });
}

double sb_concentration_factor(double eta, int d) {
  return guarded_value([&] { return spb::concentration_factor(eta, d); });
}

double sb_bessel_zero(double nu, int k) {
  return guarded_value([&] { return spb::bessel_zero(nu, k); });
}

double sb_gamma(double x) {
  return guarded_value([&] { return spb::gamma_fn(x); });
}

sb_status sb_verify_file(const char* case_path, char** report_json) {
  sb_status st = require(case_path != nullptr && report_json != nullptr,
                         "sb_verify_file: case_path and report_json required");
  if (st != SB_OK) return st;
  try {
    return verify_cases(spb::parse_cases_json(read_file(case_path)), report_json);
  } catch (const std::exception& e) {
    return to_status(e);
  }
}

sb_status sb_verify_default(char** report_json) {
  sb_status st = require(report_json != nullptr, "sb_verify_default: report_json required");
  if (st != SB_OK) return st;
  try {
    return verify_cases(spb::default_cases(), report_json);
  } catch (const std::exception& e) {
    return to_status(e);
  }
}

sb_status sb_verify_default_melas(double melas_c, char** report_json) {
  sb_status st = require(report_json != nullptr,
                         "sb_verify_default_melas: report_json required");
  if (st != SB_OK) return st;
  try {
    if (!(melas_c >= 0.0) || !std::isfinite(melas_c)) {
      throw spb::ParseError("melas constant must be finite and nonnegative");
    }
    std::vector<spb::CaseSpec> cases = spb::default_cases();
    for (spb::CaseSpec& spec : cases) {
      spec.kinds.push_back("melas");
      spec.melas_c = melas_c;
    }
    return verify_cases(std::move(cases), report_json);
  } catch (const std::exception& e) {
    return to_status(e);
  }
}

sb_status sb_default_cases(char** cases_json) {
  sb_status st = require(cases_json != nullptr, "sb_default_cases: cases_json required");
  if (st != SB_OK) return st;
  return guarded([&] { *cases_json = dup_string(spb::default_cases_json()); });
}

sb_status sb_scan_tsv(const sb_domain* domain, const char* quantity, long n_max,
                      char** tsv) {
  sb_status st = require(domain != nullptr && quantity != nullptr && tsv != nullptr,
                         "sb_scan_tsv: domain, quantity, and tsv required");
  if (st != SB_OK) return st;
  return guarded([&] {
    spb::ScanQuantity q = spb::parse_scan_quantity(quantity);
    *tsv = dup_string(spb::scan_tsv(domain->spec, q, n_max));
  });
}

sb_status sb_eta_json(const sb_domain* domain, int k, char** json_text) {
  sb_status st = require(domain != nullptr && json_text != nullptr,
                         "sb_eta_json: domain and json_text required");
  if (st != SB_OK) return st;
  return guarded([&] {
    spb::EtaDiagnostic diag = spb::eta_diagnostic(domain->spec, k);
    *json_text = dup_string(spb::eta_to_json(diag));
  });
}

sb_status sb_eta_profile_tsv(const sb_domain* domain, int k, char** tsv) {
  sb_status st = require(domain != nullptr && tsv != nullptr,
                         "sb_eta_profile_tsv: domain and tsv required");
  if (st != SB_OK) return st;
  return guarded([&] {
    spb::SpectralMassProfile profile = spb::g_profile(domain->spec, k);
    *tsv = dup_string(spb::profile_to_tsv(profile));
  });
}

sb_status sb_report_schema(char** schema_json) {
  sb_status st = require(schema_json != nullptr, "sb_report_schema: schema_json required");
  if (st != SB_OK) return st;
  return guarded([&] { *schema_json = dup_string(spb::report_schema_json()); });
}

sb_status sb_report_summary(const char* report_json, char** summary) {
  sb_status st = require(report_json != nullptr && summary != nullptr,
                         "sb_report_summary: report_json and summary required");
  if (st != SB_OK) return st;
  return guarded([&] { *summary = dup_string(spb::report_summary(report_json)); });
}

}  // extern "C"
