#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "spectral_bounds.h"

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Grabs a char** result and frees it on scope exit.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { sb_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? std::string() : ptr; }
};

struct OwnedDomain {
  sb_domain* ptr = nullptr;
  ~OwnedDomain() { sb_domain_free(ptr); }
};

struct OwnedSpectrum {
  sb_spectrum* ptr = nullptr;
  ~OwnedSpectrum() { sb_spectrum_free(ptr); }
};

const char* kSquareMask7 =
    "MASK2D 7 7 0.125\n"
    "1 1 1 1 1 1 1\n"
    "1 1 1 1 1 1 1\n"
    "1 1 1 1 1 1 1\n"
    "1 1 1 1 1 1 1\n"
    "1 1 1 1 1 1 1\n"
    "1 1 1 1 1 1 1\n"
    "1 1 1 1 1 1 1\n";

// Unit-square 5-point Laplacian eigenvalue for mode (i, j) at spacing h.
double discrete_square_eig(int i, int j, double h) {
  double si = std::sin(i * kPi * h / 2.0);
  double sj = std::sin(j * kPi * h / 2.0);
  return 4.0 / (h * h) * (si * si + sj * sj);
}

}  // namespace

TEST_CASE("version and trivial frees") {
  CHECK(std::string(sb_version()) == "1.0.0");
  sb_string_free(nullptr);
  sb_domain_free(nullptr);
  sb_spectrum_free(nullptr);
  CHECK(sb_last_error() != nullptr);
}

TEST_CASE("box domains expose geometry") {
  double lengths[2] = {2.0, 1.0};
  OwnedDomain box;
  REQUIRE(sb_domain_box(lengths, 2, &box.ptr) == SB_OK);
  CHECK(sb_domain_dimension(box.ptr) == 2);
  CHECK(sb_domain_volume(box.ptr) == doctest::Approx(2.0).epsilon(1e-15));
  // I = ab (a^2 + b^2) / 12 about the centroid.
  CHECK(sb_domain_inertia(box.ptr) == doctest::Approx(2.0 * 5.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("ball domains expose geometry") {
  OwnedDomain disk;
  REQUIRE(sb_domain_ball(2, 1.0, &disk.ptr) == SB_OK);
  CHECK(sb_domain_dimension(disk.ptr) == 2);
  CHECK(sb_domain_volume(disk.ptr) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(sb_domain_inertia(disk.ptr) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
}

TEST_CASE("domain constructors reject bad arguments with messages") {
  sb_domain* out = nullptr;
  CHECK(sb_domain_box(nullptr, 2, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(std::string(sb_last_error()).find("sb_domain_box") != std::string::npos);

  double lengths[1] = {1.0};
  CHECK(sb_domain_box(lengths, 0, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_domain_box(lengths, 1, nullptr) == SB_ERR_INVALID_ARGUMENT);

  double bad[2] = {1.0, -1.0};
  CHECK(sb_domain_box(bad, 2, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_last_error()[0] != '\0');

  CHECK(sb_domain_ball(2, 0.0, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_domain_ball(4, 1.0, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(out == nullptr);

  CHECK(sb_domain_dimension(nullptr) == 0);
  CHECK(std::isnan(sb_domain_volume(nullptr)));
  CHECK(std::isnan(sb_domain_inertia(nullptr)));
}

TEST_CASE("mask parse, load, and refine") {
  OwnedDomain mask;
  REQUIRE(sb_domain_mask_parse("MASK2D 2 1 0.5\n1 1\n", &mask.ptr) == SB_OK);
  CHECK(sb_domain_dimension(mask.ptr) == 2);
  CHECK(sb_domain_volume(mask.ptr) == doctest::Approx(0.5).epsilon(1e-15));

  OwnedDomain fine;
  REQUIRE(sb_domain_mask_refine(mask.ptr, 4, &fine.ptr) == SB_OK);
  CHECK(sb_domain_volume(fine.ptr) == doctest::Approx(0.5).epsilon(1e-15));

  sb_domain* out = nullptr;
  CHECK(sb_domain_mask_parse("MASK3D 1 1 1\n1\n", &out) == SB_ERR_PARSE);
  CHECK(sb_last_error()[0] != '\0');
  CHECK(sb_domain_mask_load("definitely_missing.mask", &out) == SB_ERR_PARSE);
  CHECK(std::string(sb_last_error()).find("definitely_missing.mask") !=
        std::string::npos);
  CHECK(sb_domain_mask_refine(mask.ptr, 0, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_domain_mask_refine(mask.ptr, 5000, &out) == SB_ERR_INVALID_ARGUMENT);

  double lengths[1] = {1.0};
  OwnedDomain box;
  REQUIRE(sb_domain_box(lengths, 1, &box.ptr) == SB_OK);
  CHECK(sb_domain_mask_refine(box.ptr, 4, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(std::string(sb_last_error()).find("mask domain") != std::string::npos);

  {
    std::ofstream f("capi_roundtrip.mask");
    f << kSquareMask7;
  }
  OwnedDomain loaded;
  REQUIRE(sb_domain_mask_load("capi_roundtrip.mask", &loaded.ptr) == SB_OK);
  CHECK(sb_domain_volume(loaded.ptr) ==
        doctest::Approx(49.0 / 64.0).epsilon(1e-15));
}

TEST_CASE("analytic spectra through the C interface") {
  double lengths[2] = {1.0, 1.0};
  OwnedDomain square;
  REQUIRE(sb_domain_box(lengths, 2, &square.ptr) == SB_OK);

  OwnedSpectrum s;
  REQUIRE(sb_spectrum_analytic(square.ptr, 4, &s.ptr) == SB_OK);
  CHECK(sb_spectrum_count(s.ptr) == 4);
  CHECK(std::string(sb_spectrum_provenance(s.ptr)) == "analytic-box");
  CHECK(sb_spectrum_eigenvalue(s.ptr, 1) ==
        doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
  CHECK(sb_spectrum_eigenvalue(s.ptr, 2) ==
        doctest::Approx(5.0 * kPi * kPi).epsilon(1e-14));

  // Out-of-range indices surface as NaN plus a recorded message.
  CHECK(std::isnan(sb_spectrum_eigenvalue(s.ptr, 0)));
  CHECK(sb_last_error()[0] != '\0');
  CHECK(std::isnan(sb_spectrum_eigenvalue(s.ptr, 5)));
  CHECK(std::isnan(sb_spectrum_eigenvalue(nullptr, 1)));
  CHECK(sb_spectrum_count(nullptr) == 0);
  CHECK(std::string(sb_spectrum_provenance(nullptr)).empty());

  OwnedString csv;
  REQUIRE(sb_spectrum_csv(s.ptr, &csv.ptr) == SB_OK);
  CHECK(csv.str().rfind("index,eigenvalue\n1,", 0) == 0);

  sb_spectrum* out = nullptr;
  CHECK(sb_spectrum_analytic(square.ptr, 0, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_spectrum_analytic(nullptr, 4, &out) == SB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("fdm spectra require masks and match the discrete closed form") {
  OwnedDomain mask;
  REQUIRE(sb_domain_mask_parse(kSquareMask7, &mask.ptr) == SB_OK);

  OwnedSpectrum s;
  REQUIRE(sb_spectrum_fdm(mask.ptr, 3, 0.0, &s.ptr) == SB_OK);
  CHECK(std::string(sb_spectrum_provenance(s.ptr)) == "fdm-discrete");
  // 7x7 interior cells at h = 1/8 discretize the unit square.
  CHECK(sb_spectrum_eigenvalue(s.ptr, 1) ==
        doctest::Approx(discrete_square_eig(1, 1, 0.125)).epsilon(1e-10));
  CHECK(sb_spectrum_eigenvalue(s.ptr, 2) ==
        doctest::Approx(discrete_square_eig(1, 2, 0.125)).epsilon(1e-10));

  OwnedSpectrum r;
  REQUIRE(sb_spectrum_fdm_richardson(mask.ptr, 1, 0.0, &r.ptr) == SB_OK);
  CHECK(std::string(sb_spectrum_provenance(r.ptr)) == "fdm-extrapolated");
  // Cell-split refinement keeps the cell union fixed (a square of side 7/8),
  // so the extrapolation converges there, not to the unit square.
  double extrapolated = sb_spectrum_eigenvalue(r.ptr, 1);
  double union_lam1 = 2.0 * kPi * kPi * (64.0 / 49.0);
  CHECK(std::abs(extrapolated - union_lam1) <
        std::abs(discrete_square_eig(1, 1, 0.125) - union_lam1));

  sb_spectrum* out = nullptr;
  double lengths[2] = {1.0, 1.0};
  OwnedDomain box;
  REQUIRE(sb_domain_box(lengths, 2, &box.ptr) == SB_OK);
  CHECK(sb_spectrum_fdm(box.ptr, 3, 0.0, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(std::string(sb_last_error()).find("mask domain") != std::string::npos);
  CHECK(sb_spectrum_fdm(mask.ptr, 0, 0.0, &out) == SB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("closed-form bound evaluators") {
  CHECK(sb_liyau_sum_bound(10, 1, 1.0) ==
        doctest::Approx(kPi * kPi / 3.0 * 1000.0).epsilon(1e-13));
  CHECK(sb_liyau_single_bound(7, 2, 1.0) ==
        doctest::Approx(2.0 * kPi * 7.0).epsilon(1e-13));
  CHECK(sb_polya_bound(3, 1, 1.0) ==
        doctest::Approx(9.0 * kPi * kPi).epsilon(1e-13));
  CHECK(sb_faber_krahn_bound(1, 1.0) == doctest::Approx(kPi * kPi).epsilon(1e-13));
  double j01 = sb_bessel_zero(0.0, 1);
  CHECK(sb_faber_krahn_bound(2, kPi) == doctest::Approx(j01 * j01).epsilon(1e-12));
  CHECK(sb_melas_bound(4, 1, 1.0, 1.0 / 12.0, 0.5) ==
        doctest::Approx(sb_liyau_sum_bound(4, 1, 1.0) + 0.5 * 12.0 * 4.0)
            .epsilon(1e-13));

  CHECK(std::isnan(sb_liyau_sum_bound(0, 1, 1.0)));
  CHECK(std::isnan(sb_liyau_sum_bound(1, 1, -1.0)));
  CHECK(std::isnan(sb_polya_bound(1, 0, 1.0)));
}

TEST_CASE("two-point helpers") {
  CHECK(sb_two_point_admissible(1, 1, 2) == 1);
  CHECK(sb_two_point_admissible(1000, 618, 2) == 0);
  CHECK(sb_two_point_admissible(1000, 619, 2) == 1);
  CHECK(sb_two_point_admissible(0, 1, 2) == -1);
  CHECK(sb_last_error()[0] != '\0');

  CHECK(sb_two_point_factor(5, 5, 2) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(std::isnan(sb_two_point_factor(5, 0, 2)));

  CHECK(sb_concentration_factor(0.0, 2) == 1.0);
  CHECK(sb_concentration_factor(1.0, 2) == 2.0);
  CHECK(std::isnan(sb_concentration_factor(-0.1, 2)));
  CHECK(std::isnan(sb_concentration_factor(0.5, 0)));
}

TEST_CASE("special functions") {
  CHECK(sb_bessel_zero(0.0, 1) == doctest::Approx(2.4048255576957729).epsilon(1e-9));
  CHECK(sb_bessel_zero(1.0, 1) == doctest::Approx(3.8317059702075125).epsilon(1e-9));
  CHECK(std::isnan(sb_bessel_zero(0.0, 0)));
  CHECK(std::isnan(sb_bessel_zero(-1.0, 1)));

  CHECK(sb_gamma(2.5) == doctest::Approx(1.329340388179137).epsilon(1e-14));
  CHECK(sb_gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(std::isnan(sb_gamma(0.0)));
}

TEST_CASE("default verification passes and is deterministic") {
  OwnedString a;
  REQUIRE(sb_verify_default(&a.ptr) == SB_OK);
  json r = json::parse(a.str());
  CHECK(r["all_verified"] == true);
  CHECK(r["cases"].size() == 4);
  CHECK(r["total"].get<long>() > 0);

  OwnedString b;
  REQUIRE(sb_verify_default(&b.ptr) == SB_OK);
  CHECK(a.str() == b.str());

  OwnedString summary;
  REQUIRE(sb_report_summary(a.ptr, &summary.ptr) == SB_OK);
  CHECK(summary.str().find("all bounds verified") != std::string::npos);
  CHECK(summary.str().find("unit-square") != std::string::npos);
}

TEST_CASE("verify_file distinguishes unverified from parse failures") {
  {
    std::ofstream f("capi_failing.json");
    f << R"({"schema_version":1,"cases":[{"name":"broken",)"
      << R"("domain":{"type":"box","lengths":[1]},"n_max":10,)"
      << R"("kinds":["liyau-single"],"inject":{"index":1,"scale":0.1}}]})";
  }
  OwnedString rep;
  CHECK(sb_verify_file("capi_failing.json", &rep.ptr) == SB_ERR_UNVERIFIED);
  REQUIRE(rep.ptr != nullptr);  // report filled despite the failure
  json r = json::parse(rep.str());
  CHECK(r["all_verified"] == false);
  CHECK(r["verified"].get<long>() == r["total"].get<long>() - 1);
  CHECK(std::string(sb_last_error()).find("unverified") != std::string::npos);

  char* out = nullptr;
  CHECK(sb_verify_file("missing_cases.json", &out) == SB_ERR_PARSE);
  CHECK(out == nullptr);
  CHECK(std::string(sb_last_error()).find("missing_cases.json") !=
        std::string::npos);

  {
    std::ofstream f("capi_garbage.json");
    f << "{broken";
  }
  CHECK(sb_verify_file("capi_garbage.json", &out) == SB_ERR_PARSE);
  CHECK(out == nullptr);
  CHECK(sb_verify_file(nullptr, &out) == SB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("melas sweep over the default matrix") {
  OwnedString ok;
  REQUIRE(sb_verify_default_melas(1e-6, &ok.ptr) == SB_OK);
  json r = json::parse(ok.str());
  CHECK(r["all_verified"] == true);
  for (const json& c : r["cases"]) {
    CHECK(c["melas_c"].get<double>() == 1e-6);
    bool has_melas = false;
    for (const json& ks : c["kinds"]) {
      if (ks["kind"] == "melas") has_melas = true;
    }
    CHECK(has_melas);
  }

  OwnedString bad;
  CHECK(sb_verify_default_melas(1e9, &bad.ptr) == SB_ERR_UNVERIFIED);
  REQUIRE(bad.ptr != nullptr);
  CHECK(json::parse(bad.str())["all_verified"] == false);

  char* out = nullptr;
  CHECK(sb_verify_default_melas(-1.0, &out) == SB_ERR_PARSE);
  CHECK(sb_verify_default_melas(std::nan(""), &out) == SB_ERR_PARSE);
  CHECK(out == nullptr);
}

TEST_CASE("default cases and schema round trip") {
  OwnedString cases;
  REQUIRE(sb_default_cases(&cases.ptr) == SB_OK);
  json c = json::parse(cases.str());
  CHECK(c["schema_version"] == 1);
  CHECK(c["cases"].size() == 4);
  CHECK(c["cases"][0]["name"] == "interval");

  OwnedString schema;
  REQUIRE(sb_report_schema(&schema.ptr) == SB_OK);
  json s = json::parse(schema.str());
  CHECK(s["title"] == "spectral-bounds verification report");
  CHECK(s["required"].size() == 6);

  char* out = nullptr;
  CHECK(sb_report_summary("{}", &out) == SB_ERR_PARSE);
  CHECK(out == nullptr);
  CHECK(sb_report_summary("not json", &out) == SB_ERR_PARSE);
}

TEST_CASE("scan tsv through the C interface") {
  double lengths[1] = {1.0};
  OwnedDomain interval;
  REQUIRE(sb_domain_box(lengths, 1, &interval.ptr) == SB_OK);

  OwnedString tsv;
  REQUIRE(sb_scan_tsv(interval.ptr, "weyl-ratio", 5, &tsv.ptr) == SB_OK);
  std::string text = tsv.str();
  CHECK(text.rfind("n\tweyl_ratio\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);

  char* out = nullptr;
  CHECK(sb_scan_tsv(interval.ptr, "volume", 5, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(std::string(sb_last_error()).find("volume") != std::string::npos);
  CHECK(sb_scan_tsv(interval.ptr, "weyl-ratio", 0, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_scan_tsv(nullptr, "weyl-ratio", 5, &out) == SB_ERR_INVALID_ARGUMENT);

  OwnedDomain mask;
  REQUIRE(sb_domain_mask_parse("MASK2D 2 1 0.5\n1 1\n", &mask.ptr) == SB_OK);
  CHECK(sb_scan_tsv(mask.ptr, "weyl-ratio", 5, &out) == SB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("eta diagnostic through the C interface") {
  double lengths[1] = {1.0};
  OwnedDomain interval;
  REQUIRE(sb_domain_box(lengths, 1, &interval.ptr) == SB_OK);

  OwnedString diag;
  REQUIRE(sb_eta_json(interval.ptr, 1, &diag.ptr) == SB_OK);
  json d = json::parse(diag.str());
  CHECK(d["k"] == 1);
  CHECK(d["d"] == 1);
  CHECK(d["radius"].get<double>() == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(d["eta"].get<double>() > 0.0);
  CHECK(d["eta"].get<double>() < 1.0);
  CHECK(d["sum_holds"] == true);
  CHECK(d["approximate"] == false);

  OwnedString profile;
  REQUIRE(sb_eta_profile_tsv(interval.ptr, 1, &profile.ptr) == SB_OK);
  CHECK(profile.str().rfind("xi_1\tg\n", 0) == 0);

  char* out = nullptr;
  CHECK(sb_eta_json(interval.ptr, 0, &out) == SB_ERR_INVALID_ARGUMENT);
  OwnedDomain ball;
  REQUIRE(sb_domain_ball(2, 1.0, &ball.ptr) == SB_OK);
  CHECK(sb_eta_json(ball.ptr, 1, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_eta_profile_tsv(ball.ptr, 1, &out) == SB_ERR_INVALID_ARGUMENT);
  CHECK(sb_eta_json(nullptr, 1, &out) == SB_ERR_INVALID_ARGUMENT);
}
