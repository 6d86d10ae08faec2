#include <doctest.h>

#include <cmath>

#include "fdnet/numerics.hpp"
#include "fdnet/spectrum.hpp"

using namespace fdnet;

TEST_CASE("band plan widens both channels and closes the gap") {
  BandPlan hd = make_band_plan(1e6, 1e6, 0.03134, 0.0);
  CHECK(hd.bw_dl == 1e6);
  CHECK(hd.bw_ul == 1e6);
  CHECK(hd.delta_f == doctest::Approx(1031340.0).epsilon(1e-12));

  BandPlan fd = make_band_plan(1e6, 1e6, 0.03134, 1.0);
  CHECK(fd.bw_dl == doctest::Approx(2031340.0).epsilon(1e-12));
  CHECK(fd.bw_ul == fd.bw_dl);
  // Full overlap: centers coincide.
  CHECK(std::abs(fd.delta_f) < 1e-6);

  // Width grows linearly; the center gap shrinks linearly.
  BandPlan mid = make_band_plan(1e6, 1e6, 0.03134, 0.5);
  CHECK(mid.bw_dl == doctest::Approx(0.5 * (hd.bw_dl + fd.bw_dl)).epsilon(1e-12));
  CHECK(mid.delta_f ==
        doctest::Approx(0.5 * (hd.delta_f + fd.delta_f)).epsilon(1e-12));
}

TEST_CASE("band plan with asymmetric channels widens by the narrower one") {
  BandPlan p = make_band_plan(2e6, 1e6, 0.0, 1.0);
  CHECK(p.bw_dl == doctest::Approx(3e6).epsilon(1e-12));
  CHECK(p.bw_ul == doctest::Approx(2e6).epsilon(1e-12));
  CHECK(p.delta_f == doctest::Approx(0.5e6).epsilon(1e-12));
}

TEST_CASE("pulse spectra are unit energy with nulls at channel edges") {
  for (PulseKind kind : {PulseKind::Rectangular, PulseKind::Triangular}) {
    double bw = 1.7e6;
    auto s = pulse_spectrum(kind, bw);
    CHECK(std::abs(s(bw / 2)) < 1e-12 * s(0.0));
    CHECK(std::abs(s(-bw / 2)) < 1e-12 * s(0.0));
    CHECK(s(0.1 * bw) == s(-0.1 * bw));

    // +-25 bandwidths hold all but the far sidelobe energy.
    auto energy = integrate([&s](double f) { return s(f) * s(f); },
                            -25.0 * bw, 25.0 * bw, {1e-10, 1e-14, 20000});
    double tail = kind == PulseKind::Rectangular ? 5e-3 : 1e-5;
    CHECK(energy.value > 1.0 - tail);
    CHECK(energy.value < 1.0 + 1e-9);
  }
  // Peak values pin the normalization: 2/bw and 3/bw.
  double bw = 1.7e6;
  auto rect = pulse_spectrum(PulseKind::Rectangular, bw);
  auto tri = pulse_spectrum(PulseKind::Triangular, bw);
  CHECK(rect(0.0) * rect(0.0) == doctest::Approx(2.0 / bw).epsilon(1e-12));
  CHECK(tri(0.0) * tri(0.0) == doctest::Approx(3.0 / bw).epsilon(1e-12));
}

TEST_CASE("in-band weights match exact references and ignore bandwidth") {
  // 30-digit quadrature of the band-limited energy fractions; the windowed
  // evaluation with tail correction is good to ~1e-7.
  double ir = 0.902823333580280627;
  double it = 0.997055444452603262;
  for (double bw : {2.5e5, 1e6, 2031340.0}) {
    CHECK(intra_mode_factor(PulseKind::Rectangular, bw) ==
          doctest::Approx(ir).epsilon(2e-7));
    CHECK(intra_mode_factor(PulseKind::Triangular, bw) ==
          doctest::Approx(it).epsilon(2e-7));
  }
}

TEST_CASE("in-band weights sit strictly inside (1/2, 1)") {
  for (PulseKind kind : {PulseKind::Rectangular, PulseKind::Triangular}) {
    double v = intra_mode_factor(kind, 1e6);
    CHECK(v > 0.5);
    CHECK(v < 1.0);
  }
}

TEST_CASE("zero-shift cross weight of a pulse against itself is its in-band weight") {
  for (PulseKind kind : {PulseKind::Rectangular, PulseKind::Triangular}) {
    for (double bw : {1e6, 1.5e6}) {
      double c = cross_mode_factor(kind, bw, kind, bw, 0.0);
      CHECK(c == doctest::Approx(intra_mode_factor(kind, bw)).epsilon(1e-7));
    }
  }
}

TEST_CASE("cross weight is signed") {
  // Shifted copies of the same pulse de-correlate and go negative between
  // the orthogonality nulls.
  double bw = 1e6;
  double most_negative = 0.0;
  for (int i = 0; i <= 60; ++i) {
    double shift = i * 0.05 * bw;
    double c = cross_mode_factor(PulseKind::Rectangular, bw,
                                 PulseKind::Rectangular, bw, shift);
    most_negative = std::min(most_negative, c);
  }
  CHECK(most_negative < -1e-3);
}

TEST_CASE("half-duplex leakage across the guard gap stays below 1e-3") {
  BandPlan hd = make_band_plan(1e6, 1e6, 0.03134, 0.0);
  SpectralFactors f = spectral_factors(hd, PulseKind::Rectangular,
                                       PulseKind::Triangular);
  // Measured leakage 4.525e-4: small but not negligible at these guards.
  CHECK(f.c_dl == doctest::Approx(4.5252086e-4).epsilon(1e-4));
  CHECK(f.c_dl < 1e-3);
  CHECK(f.c_ul < 1e-9);
  CHECK(f.i_dl == doctest::Approx(0.815089971657010669).epsilon(4e-7));
  CHECK(f.i_ul == doctest::Approx(0.994119559312578229).epsilon(4e-7));
}

TEST_CASE("uplink cross weight dips to zero near alpha 0.28859") {
  // Scan starts past the near-zero overlap region at small alpha; the claim
  // is the interior null between the two leakage lobes.
  double best_alpha = -1.0;
  double best = 1e300;
  for (int i = 15; i <= 100; ++i) {
    double alpha = i / 100.0;
    BandPlan plan = make_band_plan(1e6, 1e6, 0.03134, alpha);
    SpectralFactors f = spectral_factors(plan, PulseKind::Rectangular,
                                         PulseKind::Triangular);
    if (f.c_ul < best) {
      best = f.c_ul;
      best_alpha = alpha;
    }
  }
  // The null falls between grid points; the nearest one still drops four
  // orders below the neighboring lobes.
  CHECK(std::abs(best_alpha - 0.28859) <= 0.011);
  CHECK(best < 1e-4);

  BandPlan star = make_band_plan(1e6, 1e6, 0.03134, 0.28859);
  SpectralFactors f = spectral_factors(star, PulseKind::Rectangular,
                                       PulseKind::Triangular);
  CHECK(f.c_ul < 1e-9);
}

TEST_CASE("frozen cross weights at the reference operating points") {
  auto at = [](double alpha) {
    BandPlan plan = make_band_plan(1e6, 1e6, 0.03134, alpha);
    return spectral_factors(plan, PulseKind::Rectangular,
                            PulseKind::Triangular);
  };
  SpectralFactors q = at(0.25);
  CHECK(q.c_dl == doctest::Approx(8.5030664e-3).epsilon(1e-4));
  CHECK(q.c_ul == doctest::Approx(3.5015649e-3).epsilon(1e-4));
  SpectralFactors h = at(0.5);
  CHECK(h.c_dl == doctest::Approx(0.2221).epsilon(1e-3));
  CHECK(h.c_ul == doctest::Approx(0.1930).epsilon(1e-3));
  SpectralFactors full = at(1.0);
  CHECK(full.c_dl == doctest::Approx(0.86035122).epsilon(1e-6));
  CHECK(full.c_ul == doctest::Approx(full.c_dl).epsilon(1e-9));
}

TEST_CASE("factors vary continuously in alpha") {
  auto at = [](double alpha) {
    BandPlan plan = make_band_plan(1e6, 1e6, 0.03134, alpha);
    return spectral_factors(plan, PulseKind::Rectangular,
                            PulseKind::Triangular);
  };
  for (double alpha : {0.1, 0.4, 0.9}) {
    SpectralFactors a = at(alpha);
    SpectralFactors b = at(alpha + 1e-5);
    CHECK(b.c_dl == doctest::Approx(a.c_dl).epsilon(1e-2).scale(1e-4));
    CHECK(b.c_ul == doctest::Approx(a.c_ul).epsilon(1e-2).scale(1e-4));
    CHECK(b.i_dl == doctest::Approx(a.i_dl).epsilon(1e-9));
  }
}

TEST_CASE("repeated factor evaluation is bit-stable across the cache") {
  BandPlan plan = make_band_plan(1e6, 1e6, 0.03134, 0.37);
  SpectralFactors a = spectral_factors(plan, PulseKind::Rectangular,
                                       PulseKind::Triangular);
  SpectralFactors b = spectral_factors(plan, PulseKind::Rectangular,
                                       PulseKind::Triangular);
  CHECK(a.i_dl == b.i_dl);
  CHECK(a.i_ul == b.i_ul);
  CHECK(a.c_dl == b.c_dl);
  CHECK(a.c_ul == b.c_ul);
}
