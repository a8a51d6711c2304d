#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectral_bounds.h"

namespace {

int status_exit(sb_status st) {
  switch (st) {
    case SB_OK: return 0;
    case SB_ERR_UNVERIFIED: return 1;
    case SB_ERR_INVALID_ARGUMENT:
    case SB_ERR_PARSE: return 2;
    default: return 3;
  }
}

int fail(sb_status st) {
  std::fprintf(stderr, "error: %s\n", sb_last_error());
  return status_exit(st);
}

int config_fail(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return 2;
}

// Write to --out when given, stdout otherwise; file errors are config errors.
int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) return config_fail("cannot write " + out_path);
  return 0;
}

struct DomainArgs {
  std::string box;
  std::vector<double> ball;
  std::string mask;
  int grid = 0;
};

void add_domain_flags(CLI::App* cmd, DomainArgs& args) {
  cmd->add_option("--box", args.box, "box side lengths a1,a2[,a3...]");
  cmd->add_option("--ball", args.ball, "ball as dimension and radius")
      ->expected(2);
  cmd->add_option("--mask", args.mask, "path to a mask file");
  cmd->add_option("--grid", args.grid,
                  "refine the mask until max(width, height) >= N")
      ->check(CLI::Range(1, 4096));
}

// Builds the requested domain; masks honor --grid refinement.  Returns null
// with *exit_code set on failure.
sb_domain* build_domain(const DomainArgs& args, bool default_square,
                        int* exit_code) {
  int given = (!args.box.empty() ? 1 : 0) + (!args.ball.empty() ? 1 : 0) +
              (!args.mask.empty() ? 1 : 0);
  if (given > 1) {
    *exit_code = config_fail("choose exactly one of --box, --ball, --mask");
    return nullptr;
  }
  if (given == 0 && !default_square) {
    *exit_code = config_fail("a domain is required: --box, --ball, or --mask");
    return nullptr;
  }
  sb_domain* domain = nullptr;
  sb_status st = SB_OK;
  if (!args.box.empty()) {
    std::vector<double> lengths;
    std::stringstream ss(args.box);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        lengths.push_back(v);
      } catch (const std::exception&) {
        *exit_code = config_fail("--box expects comma-separated numbers, got " + tok);
        return nullptr;
      }
    }
    if (lengths.empty()) {
      *exit_code = config_fail("--box expects at least one side length");
      return nullptr;
    }
    st = sb_domain_box(lengths.data(), static_cast<int>(lengths.size()), &domain);
  } else if (!args.ball.empty()) {
    double d_arg = args.ball[0];
    if (d_arg != static_cast<int>(d_arg)) {
      *exit_code = config_fail("--ball dimension must be an integer");
      return nullptr;
    }
    st = sb_domain_ball(static_cast<int>(d_arg), args.ball[1], &domain);
  } else if (!args.mask.empty()) {
    st = sb_domain_mask_load(args.mask.c_str(), &domain);
    if (st == SB_OK && args.grid >= 1) {
      sb_domain* refined = nullptr;
      st = sb_domain_mask_refine(domain, args.grid, &refined);
      sb_domain_free(domain);
      domain = refined;
    }
  } else {
    const double unit[2] = {1.0, 1.0};
    st = sb_domain_box(unit, 2, &domain);
  }
  if (st != SB_OK) {
    *exit_code = fail(st);
    return nullptr;
  }
  return domain;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_spectrum(const DomainArgs& dargs, long count, bool as_json,
                 const std::string& out_path) {
  int code = 0;
  sb_domain* domain = build_domain(dargs, false, &code);
  if (domain == nullptr) return code;
  sb_spectrum* spectrum = nullptr;
  sb_status st;
  if (!dargs.mask.empty()) {
    st = sb_spectrum_fdm(domain, static_cast<int>(count), 0.0, &spectrum);
  } else {
    st = sb_spectrum_analytic(domain, count, &spectrum);
  }
  sb_domain_free(domain);
  if (st != SB_OK) return fail(st);

  int rc;
  if (as_json) {
    std::string text = "{\"provenance\":\"";
    text += sb_spectrum_provenance(spectrum);
    text += "\",\"count\":" + std::to_string(sb_spectrum_count(spectrum));
    text += ",\"eigenvalues\":[";
    long n = sb_spectrum_count(spectrum);
    for (long i = 1; i <= n; ++i) {
      if (i > 1) text += ',';
      text += fmt17(sb_spectrum_eigenvalue(spectrum, i));
    }
    text += "]}\n";
    rc = emit(text, out_path);
  } else {
    char* csv = nullptr;
    st = sb_spectrum_csv(spectrum, &csv);
    if (st != SB_OK) {
      sb_spectrum_free(spectrum);
      return fail(st);
    }
    rc = emit(csv, out_path);
    sb_string_free(csv);
  }
  sb_spectrum_free(spectrum);
  return rc;
}

int run_verify(const std::string& cases_path, double melas_c, bool melas_given,
               const std::string& out_path) {
  if (!cases_path.empty() && melas_given) {
    return config_fail("--melas-c applies to the default matrix; case files "
                       "carry their own melas_c");
  }
  char* report = nullptr;
  sb_status st;
  if (!cases_path.empty()) {
    st = sb_verify_file(cases_path.c_str(), &report);
  } else if (melas_given) {
    st = sb_verify_default_melas(melas_c, &report);
  } else {
    st = sb_verify_default(&report);
  }
  if (report == nullptr) return fail(st);
  std::string text = std::string(report) + "\n";
  sb_string_free(report);
  int rc = emit(text, out_path);
  if (rc != 0) return rc;
  if (st != SB_OK) {
    std::fprintf(stderr, "error: %s\n", sb_last_error());
    return status_exit(st);
  }
  return 0;
}

int run_scan(const DomainArgs& dargs, const std::string& quantity, long n_max,
             const std::string& out_path) {
  int code = 0;
  sb_domain* domain = build_domain(dargs, true, &code);
  if (domain == nullptr) return code;
  char* tsv = nullptr;
  sb_status st = sb_scan_tsv(domain, quantity.c_str(), n_max, &tsv);
  sb_domain_free(domain);
  if (st != SB_OK) return fail(st);
  int rc = emit(tsv, out_path);
  sb_string_free(tsv);
  return rc;
}

int run_eta(const DomainArgs& dargs, int k, const std::string& dump_profile,
            const std::string& out_path) {
  int code = 0;
  sb_domain* domain = build_domain(dargs, false, &code);
  if (domain == nullptr) return code;
  char* diag = nullptr;
  sb_status st = sb_eta_json(domain, k, &diag);
  if (st != SB_OK) {
    sb_domain_free(domain);
    return fail(st);
  }
  std::string text = std::string(diag) + "\n";
  sb_string_free(diag);
  int rc = emit(text, out_path);
  if (rc == 0 && !dump_profile.empty()) {
    char* tsv = nullptr;
    st = sb_eta_profile_tsv(domain, k, &tsv);
    if (st != SB_OK) {
      sb_domain_free(domain);
      return fail(st);
    }
    rc = emit(tsv, dump_profile);
    sb_string_free(tsv);
  }
  sb_domain_free(domain);
  return rc;
}

int run_report(const std::string& report_path, bool show_schema,
               const std::string& out_path) {
  if (show_schema) {
    char* schema = nullptr;
    sb_status st = sb_report_schema(&schema);
    if (st != SB_OK) return fail(st);
    int rc = emit(schema, out_path);
    sb_string_free(schema);
    return rc;
  }
  std::ifstream in(report_path, std::ios::binary);
  if (!in) return config_fail("cannot open " + report_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  char* summary = nullptr;
  sb_status st = sb_report_summary(ss.str().c_str(), &summary);
  if (st != SB_OK) return fail(st);
  int rc = emit(summary, out_path);
  sb_string_free(summary);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("spectral bounds toolkit v") + sb_version()};
  app.require_subcommand(1);

  DomainArgs spec_args;
  long spec_count = 10;
  bool spec_json = false;
  bool spec_csv = false;
  std::string spec_out;
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of a domain");
  add_domain_flags(spectrum, spec_args);
  spectrum->add_option("-n,--count", spec_count, "number of eigenvalues")
      ->check(CLI::Range(1L, 200000L));
  CLI::Option* oj = spectrum->add_flag("--json", spec_json, "JSON output");
  spectrum->add_flag("--csv", spec_csv, "CSV output (default)")->excludes(oj);
  spectrum->add_option("--out", spec_out, "write output to a file");

  std::string verify_cases_path;
  double verify_melas = -1.0;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand("verify", "verify bounds over a case matrix");
  verify->add_option("--cases", verify_cases_path, "case file (default: built-in matrix)")
      ->check(CLI::ExistingFile);
  CLI::Option* melas_opt =
      verify->add_option("--melas-c", verify_melas,
                         "add a Melas sweep with this constant to the default matrix");
  verify->add_flag("--json", "JSON output (default)");
  verify->add_option("--out", verify_out, "write the report to a file");

  DomainArgs scan_args;
  std::string scan_quantity;
  long scan_n_max = 1000;
  std::string scan_out;
  CLI::App* scan = app.add_subcommand("scan", "tabulate a quantity against n");
  add_domain_flags(scan, scan_args);
  scan->add_option("--quantity", scan_quantity,
                   "weyl-ratio | onepoint-improvement | twopoint-factor | avg-constant")
      ->required();
  scan->add_option("--n-max", scan_n_max, "largest index")->check(CLI::Range(1L, 1000000L));
  scan->add_flag("--tsv", "TSV output (default)");
  scan->add_option("--out", scan_out, "write output to a file");

  DomainArgs eta_args;
  int eta_k = 0;
  std::string eta_dump;
  std::string eta_out;
  CLI::App* eta = app.add_subcommand("eta", "concentration diagnostic for k modes");
  add_domain_flags(eta, eta_args);
  eta->add_option("-k,--modes", eta_k, "number of eigenfunctions")->required();
  eta->add_option("--dump-profile", eta_dump, "also write the profile TSV here");
  eta->add_flag("--json", "JSON output (default)");
  eta->add_option("--out", eta_out, "write the diagnostic to a file");

  std::string report_path;
  bool report_schema = false;
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "validate and summarize a report");
  CLI::Option* rfile = report->add_option("file", report_path, "report JSON file");
  report->add_flag("--schema", report_schema, "print the report schema")->excludes(rfile);
  report->add_option("--out", report_out, "write output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (spectrum->parsed()) {
    return run_spectrum(spec_args, spec_count, spec_json, spec_out);
  }
  if (verify->parsed()) {
    return run_verify(verify_cases_path, verify_melas, melas_opt->count() > 0,
                      verify_out);
  }
  if (scan->parsed()) {
    return run_scan(scan_args, scan_quantity, scan_n_max, scan_out);
  }
  if (eta->parsed()) {
    return run_eta(eta_args, eta_k, eta_dump, eta_out);
  }
  if (report->parsed()) {
    if (!report_schema && report_path.empty()) {
      return config_fail("report needs a file argument or --schema");
    }
    return run_report(report_path, report_schema, report_out);
  }
  return 2;
}
