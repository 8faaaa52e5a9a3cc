#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "sobex/geom/koch.hpp"
#include "sobex/geom/partition.hpp"
#include "sobex/geom/probe.hpp"
#include "sobex/geom/whitney.hpp"

using namespace sobex;
using namespace sobex::geom;

namespace {

// Independent brute-force Whitney enumeration for the open unit square:
// exact closed-form cube-to-boundary distance, no recursion shortcuts.
struct BruteCube {
  int level;
  std::int64_t i, j;
};

std::vector<BruteCube> brute_square_whitney(int j_max) {
  std::vector<BruteCube> out;
  std::set<std::pair<std::int64_t, std::int64_t>> covered_at_next;  // rejected parents by level
  // walk levels top-down; a cube is accepted iff inside and distance bound
  // holds and no ancestor was accepted
  std::set<std::tuple<int, std::int64_t, std::int64_t>> accepted;
  auto ancestor_accepted = [&](int lvl, std::int64_t i, std::int64_t j) {
    for (int l = lvl - 1; l >= 0; --l) {
      int shift = lvl - l;
      if (accepted.count({l, i >> shift, j >> shift})) return true;
    }
    return false;
  };
  for (int lvl = 0; lvl <= j_max; ++lvl) {
    double ell = std::ldexp(1.0, -lvl);
    std::int64_t m = std::int64_t(1) << lvl;
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t j = 0; j < m; ++j) {
        if (ancestor_accepted(lvl, i, j)) continue;
        double a = i * ell, b = (i + 1) * ell, c = j * ell, d = (j + 1) * ell;
        // closed cube strictly inside the open square
        bool inside = (a > 0) && (b < 1) && (c > 0) && (d < 1);
        if (!inside) continue;
        double distb = std::min(std::min(a, c), std::min(1 - b, 1 - d));
        if (distb * distb >= 2.0 * ell * ell) {
          accepted.insert({lvl, i, j});
          out.push_back({lvl, i, j});
        }
      }
  }
  (void)covered_at_next;
  return out;
}

}  // namespace

TEST_CASE("dyadic cube children partition the parent exactly") {
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 64; ++trial) {
    DyadicCube q;
    q.level = int(rng() % 6);
    q.idx = {std::int64_t(rng() % (1u << q.level)), std::int64_t(rng() % (1u << q.level)), 0};
    Box pb = f.cube_box(q);
    auto kids = f.children(q);
    REQUIRE(kids.size() == 4);
    double area = 0;
    for (const auto& k : kids) {
      Box kb = f.cube_box(k);
      area += kb.volume();
      CHECK(kb.lo[0] >= pb.lo[0]);
      CHECK(kb.hi[0] <= pb.hi[0]);
      // corners exactly representable: midpoints coincide bitwise
      CHECK((kb.lo[0] == pb.lo[0] || kb.lo[0] == 0.5 * (pb.lo[0] + pb.hi[0])));
    }
    CHECK(area == doctest::Approx(pb.volume()).epsilon(1e-15));
  }
}

TEST_CASE("whitney on the open unit square matches brute-force enumeration") {
  auto sq = make_unit_square();
  RootFrame f = square_frame(pt(0, 0), 1.0, 2);
  auto cover = whitney_decompose(sq, f, 6);

  auto brute = brute_square_whitney(6);
  std::set<std::tuple<int, std::int64_t, std::int64_t>> got, want;
  double covered = 0;
  for (std::size_t i = 0; i < cover.cubes.size(); ++i) {
    if (cover.cubes[i].truncated) continue;
    const auto& q = cover.cubes[i].cube;
    got.insert({q.level, q.idx[0], q.idx[1]});
    covered += cover.cube_box(int(i)).volume();
  }
  for (const auto& b : brute) want.insert({b.level, b.i, b.j});
  CHECK(got == want);

  // truncated cubes complete the interior coverage
  for (std::size_t i = 0; i < cover.cubes.size(); ++i)
    if (cover.cubes[i].truncated) covered += cover.cube_box(int(i)).volume();
  CHECK(covered >= 1.0 - 4 * std::ldexp(1.0, -6) * 4);

  auto rep = verify_whitney_exact(cover);
  CHECK(rep.checked > 0);
  CHECK(rep.lower_violations == 0);
  CHECK(rep.upper_violations == 0);
  CHECK(neighbor_ratio_ok(cover));
}

TEST_CASE("whitney: empty oracle raises EmptyDomain") {
  RootFrame f = square_frame(pt(0, 0), 1.0, 2);
  CHECK_THROWS_AS(whitney_decompose(make_empty(), f, 6), EmptyDomain);
}

TEST_CASE("whitney of a horizontal strip is translation invariant in x") {
  auto strip = make_strip();
  RootFrame f;
  f.origin = pt(0, 0);
  f.base = 1.0;
  f.cells = {4, 1, 1};
  f.n = 2;
  auto cover = whitney_decompose(strip, f, 6);
  // cubes with the same vertical band must share one level
  std::map<std::pair<double, double>, int> band_level;
  for (std::size_t i = 0; i < cover.cubes.size(); ++i) {
    if (cover.cubes[i].truncated) continue;
    Box b = cover.cube_box(int(i));
    auto key = std::make_pair(b.lo[1], b.hi[1]);
    auto it = band_level.find(key);
    if (it == band_level.end())
      band_level[key] = cover.cubes[i].cube.level;
    else
      CHECK(it->second == cover.cubes[i].cube.level);
  }
  auto rep = verify_whitney_exact(cover);
  CHECK(rep.lower_violations == 0);
  CHECK(rep.upper_violations == 0);
}

TEST_CASE("small cube selection by side cutoff") {
  auto sq = make_unit_square();
  RootFrame f = square_frame(pt(0, 0), 1.0, 2);
  auto cover = whitney_decompose(sq, f, 6);

  SUBCASE("eps=1 delta=1: cutoff 1/32 keeps levels >= 5") {
    auto small = small_cubes(cover, 1.0, 1.0);
    CHECK(!small.empty());
    for (int id : small) CHECK(cover.cubes[id].cube.level >= 5);
    // and nothing at level >= 5 is missed
    std::size_t expect = 0;
    for (const auto& c : cover.cubes)
      if (!c.truncated && c.cube.level >= 5) ++expect;
    CHECK(small.size() == expect);
  }
  SUBCASE("delta = inf keeps everything") {
    auto small = small_cubes(cover, 1.0, std::numeric_limits<double>::infinity(), true);
    CHECK(small.size() == cover.cubes.size());
  }
  SUBCASE("eps=0.5 delta=0.2: only sides <= 1/512 survive") {
    // synthetic cover with levels 7..10
    WhitneyCover synth;
    synth.frame = f;
    synth.oracle = sq;
    synth.j_max = 10;
    for (int lvl = 7; lvl <= 10; ++lvl) synth.cubes.push_back({{lvl, {0, 0, 0}}, 1.0, false});
    auto small = small_cubes(synth, 0.5, 0.2);
    REQUIRE(small.size() == 2);
    CHECK(synth.cubes[small[0]].cube.level == 9);
    CHECK(synth.cubes[small[1]].cube.level == 10);
  }
}

TEST_CASE("reflection across a flat interface picks mirror cubes") {
  // Omega = (0,1)x(0,1) inside root [0,2]x[0,1]; complement interior is the
  // right half plus frame margins
  auto omega = make_rect(box2(0, 0, 1, 1));
  RootFrame f;
  f.origin = pt(0, 0);
  f.base = 1.0;
  f.cells = {2, 1, 1};
  f.n = 2;
  auto inside = whitney_decompose(omega, f, 6);
  auto comp = make_complement(omega, f.root_box());
  auto outside = whitney_decompose(comp, f, 6);

  auto small = small_cubes(outside, 1.0, 1.0);
  // keep cubes in the right half (mirror partners exist for those)
  std::vector<int> right;
  for (int id : small) {
    Box b = outside.cube_box(id);
    if (b.lo[0] >= 1.0 && b.hi[0] <= 2.0 && outside.cube_side(id) < 0.25) right.push_back(id);
  }
  REQUIRE(!right.empty());
  auto res = reflect_cubes(outside, right, inside, 16.0);
  CHECK(res.unreflected.empty());
  CHECK(res.realized_constant <= 12.0);
  // mirror proximity: the assigned cube straddles the mirror image of Q's
  // center (a coarser admissible cube can tie the mirror cube in center
  // distance, so identity is not guaranteed, closeness is)
  int exact_mirror = 0;
  for (std::size_t s = 0; s < right.size(); ++s) {
    Box q = outside.cube_box(right[s]);
    Box qs = inside.cube_box(res.assigned[s]);
    double ell = q.side(0);
    Pt mirror = pt(2.0 - q.center()[0], q.center()[1]);
    CHECK(dist(qs.center(), mirror) <= 6 * ell);
    if (qs.lo[0] == 2.0 - q.hi[0] && qs.hi[0] == 2.0 - q.lo[0] && qs.lo[1] == q.lo[1]) ++exact_mirror;
  }
  CHECK(exact_mirror >= 1);
}

TEST_CASE("reflection reports NoReflection diagnostics when nothing admissible") {
  RootFrame f = square_frame(pt(0, 0), 1.0, 2);
  WhitneyCover outside;
  outside.frame = f;
  outside.oracle = make_unit_square();
  outside.j_max = 6;
  outside.cubes.push_back({{6, {0, 0, 0}}, 1.0, false});
  WhitneyCover inside = outside;
  inside.cubes.clear();
  inside.cubes.push_back({{1, {1, 1, 0}}, 1.0, false});  // too big: l* = 8 l
  auto res = reflect_cubes(outside, {0}, inside, 16.0);
  CHECK(res.assigned[0] == -1);
  REQUIRE(res.unreflected.size() == 1);
}

TEST_CASE("partition of unity over whitney cubes") {
  auto lshape = make_lshape();
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  auto comp = make_complement(lshape, f.root_box());
  auto cover = whitney_decompose(comp, f, 7);
  auto small = small_cubes(cover, 1.0, 1.0, true);
  REQUIRE(!small.empty());
  PartitionFamily part(&cover, small);

  SUBCASE("sum is 1 on the cube union to machine precision") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0, 1);
    int tested = 0;
    while (tested < 1000) {
      int m = int(rng() % small.size());
      Box b = part.member_box(m);
      Pt x = pt(b.lo[0] + U(rng) * b.side(0), b.lo[1] + U(rng) * b.side(1));
      auto terms = part.evaluate(x);
      double sum = 0;
      for (const auto& t : terms) {
        sum += t.phi;
        CHECK(t.phi >= 0);
        CHECK(t.phi <= 1.0 + 1e-15);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      ++tested;
    }
  }
  SUBCASE("phi vanishes outside the 17/16 dilate") {
    for (int m = 0; m < int(small.size()); m += 37) {
      Box d = part.member_box(m).dilated(17.0 / 16.0 + 1e-12);
      Pt x = pt(d.hi[0] + 1e-9, d.hi[1] + 1e-9);
      auto terms = part.evaluate(x);
      for (const auto& t : terms) CHECK(t.member != m);
    }
  }
  SUBCASE("point outside every dilate gives no terms") {
    // far corner of the root box lies inside the L-shape complement cover?
    // use a point in the domain interior instead: dilates only poke l/32
    // outward, so the L-shape center body is clear of them
    auto terms = part.evaluate(pt(0.25, 0.25));
    (void)terms;  // must not throw DegenerateCover; may legitimately be empty
    CHECK(!part.in_union(pt(0.25, 0.25)));
  }
}

TEST_CASE("single isolated cube partition") {
  RootFrame f = square_frame(pt(0, 0), 1.0, 2);
  WhitneyCover cover;
  cover.frame = f;
  cover.oracle = make_unit_square();
  cover.j_max = 4;
  cover.cubes.push_back({{3, {2, 3, 0}}, 1.0, false});
  PartitionFamily part(&cover, {0});
  Box q = cover.cube_box(0);
  CHECK(part.evaluate(q.center()).at(0).phi == 1.0);
  CHECK(part.evaluate(pt(q.lo[0], q.lo[1])).at(0).phi == 1.0);  // flat top includes the closed cube
  Box d = q.dilated(17.0 / 16.0);
  CHECK(part.evaluate(pt(d.hi[0] + 1e-9, q.center()[1])).empty());
}

TEST_CASE("koch prefractal generator") {
  SUBCASE("level 0 is the triangle") {
    auto k = koch_prefractal(0);
    CHECK(k.domain->segments()->size() == 3);
    CHECK(k.cloud.points.size() == 3);
  }
  SUBCASE("level 3 has 192 edges of length 3^-3") {
    auto k = koch_prefractal(3);
    const auto& segs = *k.domain->segments();
    CHECK(segs.size() == 192);
    for (const auto& s : segs) CHECK(dist(s.a, s.b) == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
    // total cloud mass normalized to 1
    CHECK(k.cloud.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("level-5 cloud passes the regularity check with C <= 4") {
    auto k = koch_prefractal(5);
    std::vector<double> radii = {1.0 / 3, 1.0 / 9, 1.0 / 27, 1.0 / 81};
    double c5 = ahlfors_check(k.cloud, radii, 100.0, 128);
    CHECK(c5 <= 4.0);
    // stable as the level grows
    auto k4 = koch_prefractal(4);
    double c4 = ahlfors_check(k4.cloud, radii, 100.0, 128);
    CHECK(std::abs(c5 - c4) / c4 < 0.35);
  }
}

TEST_CASE("ahlfors regularity check on model clouds") {
  SUBCASE("uniform segment cloud has C <= 2 (plus discretization)") {
    // inclusive ball counts add 1/(r N) to the interior ratio 2
    auto c = segment_cloud(1024);
    std::vector<double> radii = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};
    double C = ahlfors_check(c, radii, 100.0);
    CHECK(C <= 2.0 + 0.1);
  }
  SUBCASE("single point is not regular") {
    AhlforsCloud c;
    c.points = {pt(0, 0)};
    c.weights = {1.0};
    c.d = 1.0;
    std::vector<double> radii = {1.0 / 4, 1.0 / 8, 1.0 / 16};
    CHECK_THROWS_AS(ahlfors_check(c, radii, 10.0), NotRegular);
  }
}

TEST_CASE("whitney covers of model domains verify exactly") {
  struct Case {
    OraclePtr oracle;
    RootFrame frame;
  };
  std::vector<Case> cases;
  cases.push_back({make_lshape(), square_frame(pt(0, 0), 1.0, 2)});
  auto koch = koch_prefractal(2);
  RootFrame kf = square_frame(pt(-0.5, -0.5), 2.0, 2);
  cases.push_back({koch.domain, kf});
  for (auto& c : cases) {
    auto cover = whitney_decompose(c.oracle, c.frame, 6);
    auto rep = verify_whitney_exact(cover);
    CHECK(rep.checked > 0);
    CHECK(rep.lower_violations == 0);
    CHECK(rep.upper_violations == 0);
    CHECK(neighbor_ratio_ok(cover));
  }
}

TEST_CASE("oracle sanity: 1-Lipschitz distance and positivity inside") {
  std::vector<OraclePtr> oracles = {make_unit_square(), make_lshape(), make_cusp(4.0),
                                    koch_prefractal(3).domain};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.3, 1.3);
  for (const auto& o : oracles) {
    for (int t = 0; t < 400; ++t) {
      Pt x = pt(U(rng), U(rng));
      Pt y = pt(U(rng), U(rng));
      double dx = o->boundary_distance(x), dy = o->boundary_distance(y);
      CHECK(std::abs(dx - dy) <= dist(x, y) + 1e-10);
      if (o->contains(x)) CHECK(dx > 0);
    }
  }
}

TEST_CASE("epsilon-delta probe") {
  SUBCASE("unit square: bounded below across refinements") {
    auto sq = make_unit_square();
    RootFrame f = square_frame(pt(0, 0), 1.0, 2);
    double prev = -1;
    for (int jm : {5, 6, 7}) {
      auto cover = whitney_decompose(sq, f, jm);
      auto res = epsilon_delta_probe(cover, 60);
      CHECK(res.eps > 0.05);
      if (prev > 0) CHECK(res.eps > 0.5 * prev);
      prev = res.eps;
    }
  }
  SUBCASE("cusp domain: certificate collapses") {
    auto sq = make_unit_square();
    RootFrame f = square_frame(pt(0, 0), 1.0, 2);
    auto sq_cover = whitney_decompose(sq, f, 7);
    auto sq_res = epsilon_delta_probe(sq_cover, 60);

    auto cusp = make_cusp(4.0);
    auto cu_cover = whitney_decompose(cusp, f, 9);
    auto cu_res = epsilon_delta_probe(cu_cover, 200);
    CHECK(cu_res.eps < 0.3 * sq_res.eps);
  }
  SUBCASE("two disjoint squares: Disconnected") {
    auto u = make_union({make_rect(box2(0, 0, 0.375, 0.375)), make_rect(box2(0.625, 0.625, 1, 1))});
    RootFrame f = square_frame(pt(0, 0), 1.0, 2);
    auto cover = whitney_decompose(u, f, 6);
    CHECK_THROWS_AS(epsilon_delta_probe(cover, 100), Disconnected);
  }
}
