#include <doctest.h>

#include <numbers>

#include "rhino/errors.hpp"
#include "rhino/lidar.hpp"
#include "support.hpp"

using namespace rhino;
using namespace rhino::testing;

TEST_SUITE("lidar") {

TEST_CASE("empty world returns no hits") {
  const LidarFrame f = scan(WorldModel{}, {}, {}, 0);
  CHECK(f.ranges.size() == 360);
  for (const auto& r : f.ranges) CHECK_FALSE(r);
  CHECK(f.hit_points.empty());
}

TEST_CASE("wall 1.5 m ahead of beam 0") {
  WorldModel w;
  w.ingest_chunk(make_chunk("wall", wall_x(2.5, -3, 3, 0, 2)));
  const Pose2D pose{1.0, 0.0, 0.0, 0.0};
  const LidarFrame f = scan(w, pose, {}, 0);
  REQUIRE(f.ranges[0]);
  CHECK(*f.ranges[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.origin == Vec3{1.0, 0.3, 0.0});
  CHECK(f.hit_points.front().x == doctest::Approx(2.5));
  CHECK(f.hit_points.front().y == doctest::Approx(0.3));
  // beam 180 points away from the wall
  CHECK_FALSE(f.ranges[180]);
  // beam i at 45 degrees sees the wall at 1.5 / cos 45
  CHECK(*f.ranges[45] == doctest::Approx(1.5 * std::numbers::sqrt2));
}

TEST_CASE("beam azimuth follows heading") {
  WorldModel w;
  w.ingest_chunk(make_chunk("wall", wall_x(2.0, -3, 3, 0, 2)));
  const Pose2D facing_z{0.0, 0.0, std::numbers::pi / 2, 0.0};
  const LidarFrame f = scan(w, facing_z, {}, 0);
  CHECK_FALSE(f.ranges[0]);
  REQUIRE(f.ranges[270]);  // heading + 3pi/2 = 2pi -> +x
  CHECK(*f.ranges[270] == doctest::Approx(2.0));
}

TEST_CASE("max range cuts off far walls") {
  WorldModel w;
  w.ingest_chunk(make_chunk("wall", wall_x(9.0, -3, 3, 0, 2)));
  LidarParams p;
  CHECK_FALSE(scan(w, {}, p, 0).ranges[0]);
  p.max_range = 10.0;
  CHECK(scan(w, {}, p, 0).ranges[0]);
}

TEST_CASE("highlighted beam is periodic") {
  LidarParams p;
  p.beam_count = 360;
  p.rotation_period = 120;
  CHECK(highlighted_beam(p, 0) == 0);
  CHECK(highlighted_beam(p, 1) == 3);
  CHECK(highlighted_beam(p, 60) == 180);
  for (int t = 0; t < 500; ++t) {
    CHECK(highlighted_beam(p, t) == highlighted_beam(p, t + 120));
    CHECK(highlighted_beam(p, t) >= 0);
    CHECK(highlighted_beam(p, t) < 360);
  }
  p.beam_count = 7;
  p.rotation_period = 3;
  CHECK(highlighted_beam(p, 2) == 4);
}

TEST_CASE("undiscovered glass lets beams through") {
  WorldModel truth;
  truth.ingest_chunk(make_chunk("glass", wall_x(1.0, -1, 1, 0, 1), Material::Transparent));
  truth.ingest_chunk(make_chunk("wall", wall_x(3.0, -6, 6, 0, 2)));
  WorldModel discovered;
  discovered.ingest_chunk(*truth.find("wall"));
  const LidarFrame real = scan(truth, {}, {}, 0);
  const LidarFrame seen = scan(discovered, {}, {}, 0);
  CHECK(*real.ranges[0] == doctest::Approx(1.0));
  CHECK(*seen.ranges[0] == doctest::Approx(3.0));
  // beam 50 passes beside the glass; both frames see the wall
  REQUIRE(real.ranges[50].has_value());
  REQUIRE(seen.ranges[50].has_value());
  CHECK(*real.ranges[50] == doctest::Approx(3.0 / std::cos(50 * std::numbers::pi / 180)));
  CHECK(*seen.ranges[50] == doctest::Approx(*real.ranges[50]));
}

TEST_CASE("validation") {
  LidarParams p;
  p.beam_count = 0;
  CHECK_THROWS_AS(scan(WorldModel{}, {}, p, 0), Error);
  CHECK_THROWS_AS(scan(WorldModel{}, {std::nan(""), 0, 0, 0}, {}, 0), Error);
}

}  // TEST_SUITE
