#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "setdepth/distance.hpp"
#include "setdepth/rng.hpp"
#include "test_util.hpp"

using namespace setdepth;
using namespace setdepth::testutil;

TEST_CASE("hausdorff distance on simple configurations") {
  const Grid g{41, 41, 1.0};
  const BinaryRaster disc3 = centred_disc(g, 3.0);

  SECTION("identical masks") { REQUIRE(hausdorff_distance(disc3, disc3) == 0.0); }

  SECTION("3-4-5 pixel pair") {
    BinaryRaster a(g), b(g);
    a.set(0, 0, true);
    b.set(3, 4, true);
    REQUIRE(hausdorff_distance(a, b) == Catch::Approx(5.0));
  }

  SECTION("nested discs are one ring apart") {
    const BinaryRaster disc2 = centred_disc(g, 2.0);
    const double d = hausdorff_distance(disc2, disc3);
    REQUIRE(d == Catch::Approx(brute_force_hausdorff(disc2, disc3)));
    REQUIRE(d >= 0.5);
    REQUIRE(d <= 1.5);
  }

  SECTION("empty input is an error") {
    REQUIRE_THROWS_AS(hausdorff_distance(disc3, BinaryRaster(g)), std::invalid_argument);
  }

  SECTION("pixel size scales the result") {
    const Grid fine{41, 41, 0.25};
    BinaryRaster a(fine), b(fine);
    a.set(0, 0, true);
    b.set(3, 4, true);
    REQUIRE(hausdorff_distance(a, b) == Catch::Approx(1.25));
  }
}

TEST_CASE("transform hausdorff equals all-pairs brute force on random masks") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 4 + static_cast<int>(rng.below(29));
    const int h = 4 + static_cast<int>(rng.below(29));
    const Grid g{w, h, 1.0};
    BinaryRaster a = random_mask(g, 0.2, rng);
    BinaryRaster b = random_mask(g, 0.2, rng);
    if (a.none()) a.set(static_cast<int>(rng.below(w)), static_cast<int>(rng.below(h)), true);
    if (b.none()) b.set(static_cast<int>(rng.below(w)), static_cast<int>(rng.below(h)), true);
    REQUIRE(hausdorff_distance(a, b) == brute_force_hausdorff(a, b));
  }
}

TEST_CASE("hausdorff and symmetric difference are metrics on masks") {
  Rng rng(13);
  const Grid g{16, 16, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    BinaryRaster a = random_mask(g, 0.3, rng);
    BinaryRaster b = random_mask(g, 0.3, rng);
    if (a.none()) a.set(1, 1, true);
    if (b.none()) b.set(2, 2, true);
    REQUIRE(hausdorff_distance(a, b) == hausdorff_distance(b, a));
    REQUIRE(hausdorff_distance(a, b) >= 0.0);
    REQUIRE((hausdorff_distance(a, b) == 0.0) == (a == b));
    REQUIRE((symmetric_difference_area(a, b) == 0.0) == (a == b));
  }
}

namespace {

double brute_signed_distance(const BinaryRaster& a, int x, int y) {
  const bool inside = a.get(x, y);
  long long best = -1;
  for (int qy = 0; qy < a.height(); ++qy)
    for (int qx = 0; qx < a.width(); ++qx) {
      if (a.get(qx, qy) == inside) continue;
      const long long dx = x - qx, dy = y - qy;
      const long long d = dx * dx + dy * dy;
      if (best < 0 || d < best) best = d;
    }
  const double dist = std::sqrt(static_cast<double>(best)) * a.pixel_size();
  return inside ? -dist : dist;
}

}  // namespace

TEST_CASE("signed distance field") {
  const Grid g{21, 21, 1.0};
  const BinaryRaster disc = centred_disc(g, 3.0);
  const ScalarField f = signed_distance_field(disc);

  SECTION("sign matches membership everywhere") {
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x)
        REQUIRE((f.at(x, y) < 0.0) == disc.get(x, y));
  }

  SECTION("boundary pixels sit one step inside") {
    const BinaryRaster boundary_ring = set_intersection(
        disc, complement(erode(disc, Neighbourhood::cross)));
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x)
        if (boundary_ring.get(x, y)) REQUIRE(f.at(x, y) == Catch::Approx(-1.0));
  }

  SECTION("matches brute force at the centre and far outside") {
    REQUIRE(f.at(10, 10) == Catch::Approx(brute_signed_distance(disc, 10, 10)));
    REQUIRE(f.at(10, 10) <= -2.5);
    REQUIRE(f.at(10, 10) >= -3.5);
    REQUIRE(f.at(20, 10) == Catch::Approx(brute_signed_distance(disc, 20, 10)));
    REQUIRE(f.at(20, 10) == Catch::Approx(10.0 - 3.0).margin(1.0));
  }

  SECTION("whole field equals brute force on a random mask") {
    Rng rng(5);
    const Grid small{12, 10, 0.5};
    BinaryRaster m = random_mask(small, 0.35, rng);
    m.set(3, 3, true);
    m.set(6, 6, false);
    const ScalarField sf = signed_distance_field(m);
    for (int y = 0; y < small.height; ++y)
      for (int x = 0; x < small.width; ++x)
        REQUIRE(sf.at(x, y) == Catch::Approx(brute_signed_distance(m, x, y)));
  }

  SECTION("empty and full masks are rejected") {
    BinaryRaster empty(g), full(g);
    full.fill();
    REQUIRE_THROWS_AS(signed_distance_field(empty), std::invalid_argument);
    REQUIRE_THROWS_AS(signed_distance_field(full), std::invalid_argument);
  }
}

TEST_CASE("derived fields") {
  const Grid g{21, 21, 1.0};
  const ScalarField f = signed_distance_field(centred_disc(g, 4.0));
  const ScalarField grad = gradient_magnitude_field(f);
  // away from the centre and border the signed distance has unit slope
  REQUIRE(grad.at(10, 6) == Catch::Approx(1.0).margin(0.3));
  const ScalarField lap = laplacian_field(f);
  REQUIRE(lap.values.size() == f.values.size());
}
