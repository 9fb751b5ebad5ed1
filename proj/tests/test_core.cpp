#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"
#include "zflab/grid.hpp"
#include "zflab/kinematics.hpp"
#include "zflab/quadrature.hpp"
#include "zflab/rng.hpp"
#include "zflab/tensor.hpp"

using namespace zflab;

TEST_CASE("splitmix generator: deterministic, sensible moments") {
  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  Rng c(123);
  double mean = 0.0, var = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = c.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
    var += (u - 0.5) * (u - 0.5);
  }
  mean /= n;
  var /= n;
  CHECK(std::abs(mean - 0.5) < 5e-3);
  CHECK(std::abs(var - 1.0 / 12.0) < 5e-3);

  Rng g(99);
  double gm = 0.0, gv = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = g.gaussian();
    gm += x;
    gv += x * x;
  }
  gm /= n;
  gv /= n;
  CHECK(std::abs(gm) < 2e-2);
  CHECK(std::abs(gv - 1.0) < 2e-2);

  // derived streams differ from the parent
  Rng parent(5);
  Rng child(Rng::derive(5, 1));
  bool any_diff = false;
  for (int i = 0; i < 16; ++i) {
    if (parent.next_u64() != child.next_u64()) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("gauss legendre rules") {
  for (int n : {2, 8, 33}) {
    const QuadratureRule& r = gauss_legendre_cached(n);
    REQUIRE(static_cast<int>(r.nodes.size()) == n);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(std::abs(wsum - 2.0) < 1e-13);
    // node symmetry
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(r.nodes[i] + r.nodes[n - 1 - i]) < 1e-13);
    }
  }

  // exact to degree 2n-1
  const cplx i7 =
      integrate_gl([](double x) { return x * x * x * x * x * x * x; }, 0.0,
                   1.0, 4);
  CHECK(std::abs(i7 - 0.125) < 1e-14);

  const cplx ie = integrate_gl([](double x) { return std::exp(x); }, -1.0,
                               2.0, 24);
  CHECK(std::abs(ie - (std::exp(2.0) - std::exp(-1.0))) < 1e-12);

  const cplx iosc =
      integrate_gl([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0, 64);
  CHECK(std::abs(iosc - std::sin(40.0) / 40.0) < 1e-12);
}

TEST_CASE("contour average equals the enclosed residue sum") {
  const cplx inside =
      contour_average([](cplx z) { return 1.0 / (z - cplx(0.0, 0.03)); },
                      cplx(0.0), 0.1, 64);
  CHECK(std::abs(inside - cplx(1.0)) < 1e-10);

  const cplx outside =
      contour_average([](cplx z) { return 1.0 / (z - cplx(0.5)); }, cplx(0.0),
                      0.1, 64);
  CHECK(std::abs(outside) < 1e-10);

  const cplx entire =
      contour_average([](cplx z) { return std::exp(z); }, cplx(0.2), 0.1, 64);
  CHECK(std::abs(entire) < 1e-12);
}

TEST_CASE("rapidity grid") {
  const RapidityGrid g(-4.0, 4.0, 33);
  REQUIRE(g.size() == 33);
  CHECK(std::abs(g.dtheta() - 0.25) < 1e-15);
  CHECK(std::abs(g.theta(0) + 4.0) < 1e-15);
  CHECK(std::abs(g.theta(32) - 4.0) < 1e-15);
  double wsum = 0.0;
  for (int i = 0; i < g.size(); ++i) wsum += g.weight(i);
  CHECK(std::abs(wsum - 8.0) < 1e-13);
  CHECK(std::abs(g.weight(0) - 0.125) < 1e-15);
  CHECK(std::abs(g.weight(16) - 0.25) < 1e-15);

  CHECK(g == RapidityGrid(-4.0, 4.0, 33));
  CHECK(!(g == RapidityGrid(-4.0, 4.0, 17)));
  CHECK_THROWS_AS(RapidityGrid(0.0, 1.0, 1), DimensionError);
  CHECK_THROWS_AS(RapidityGrid(1.0, -1.0, 5), DimensionError);
}

TEST_CASE("tensor layout and slot moves") {
  Tensor t(3, 2);
  REQUIRE(t.size() == 9);
  REQUIRE(t.stride(0) == 3);
  REQUIRE(t.stride(1) == 1);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t[t.flat_index({i, j})] = cplx(i, j);
    }
  }
  // odometer order matches flat order
  std::vector<int> digits{0, 0};
  std::size_t flat = 0;
  do {
    REQUIRE(t.flat_index(digits) == flat);
    ++flat;
  } while (Tensor::next_index(digits, 3));

  // out(i, j) = in(j, i)
  const Tensor tt = t.slot_permute({1, 0});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(tt[tt.flat_index({i, j})] == t[t.flat_index({j, i})]);
    }
  }

  Tensor r3(2, 3);
  for (std::size_t f = 0; f < r3.size(); ++f) r3[f] = cplx(double(f), 0.0);
  const Tensor rev = r3.reverse_front(3);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        CHECK(rev[rev.flat_index({a, b, c})] == r3[r3.flat_index({c, b, a})]);
      }
    }
  }

  CHECK(Tensor(3, 0).is_zero());
  CHECK_THROWS_AS(Tensor(100, 5), DimensionError);
}

TEST_CASE("weighted inner product") {
  const RapidityGrid g(0.0, 1.0, 3);
  Tensor a(3, 1), b(3, 1);
  a[0] = cplx(1, 1);
  a[1] = 2.0;
  a[2] = cplx(0, -1);
  b[0] = 1.0;
  b[1] = cplx(0, 1);
  b[2] = 3.0;
  cplx expect = 0.0;
  for (int i = 0; i < 3; ++i) {
    expect += g.weight(i) * std::conj(a[i]) * b[i];
  }
  CHECK(std::abs(weighted_dot(g, a, b) - expect) < 1e-15);
  CHECK(std::abs(weighted_dot(g, a, b) - std::conj(weighted_dot(g, b, a))) <
        1e-15);
  CHECK(weighted_norm_sq(g, a) > 0.0);
}

TEST_CASE("kinematics: momenta, causal order, regions") {
  const TwoMomentum p = two_momentum(1.3, 0.8);
  CHECK(std::abs(minkowski_square(p) - 1.69) < 1e-12);

  CHECK(is_spacelike({0.0, 0.0}, {0.0, 1.0}));
  CHECK(!is_spacelike({0.0, 0.0}, {2.0, 1.0}));
  CHECK(is_spacelike_left({0.0, -1.0}, {0.0, 0.5}));
  CHECK(!is_spacelike_left({0.0, 0.5}, {0.0, -1.0}));

  const Region rw = Region::right_wedge({0.0, 0.0});
  CHECK(region_contains(rw, {0.0, 1.0}));
  CHECK(!region_contains(rw, {0.0, -1.0}));
  CHECK(!region_contains(rw, {1.5, 1.0}));

  const Region lw = Region::left_wedge({0.0, 0.0});
  CHECK(region_contains(lw, {0.0, -1.0}));
  CHECK(!region_contains(lw, {0.0, 1.0}));

  const Region dc = Region::double_cone(1.0);
  CHECK(region_contains(dc, {0.0, 0.0}));
  CHECK(region_contains(dc, {0.3, 0.4}));
  CHECK(!region_contains(dc, {0.6, 0.5}));
}

TEST_CASE("scattering functions by model") {
  const ScatteringFunction sfree(make_model(ModelKind::free_field));
  CHECK(sfree.eval(cplx(0.37, 0.2)) == cplx(1.0));

  const ScatteringFunction sising(make_model(ModelKind::ising));
  CHECK(sising.eval(cplx(1.1, 0.0)) == cplx(-1.0));

  const double b = 0.7;
  const ScatteringFunction sg(make_model(ModelKind::sinh_gordon, 1.0, b));
  CHECK(std::abs(sg.eval(cplx(0.0)) - cplx(-1.0)) < 1e-14);
  for (double x : {-2.0, -0.3, 0.9, 3.1}) {
    const cplx v = sg.eval(cplx(x));
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-13);          // unitary
    CHECK(std::abs(v * sg.eval(cplx(-x)) - 1.0) < 1e-13);  // S(x) S(-x) = 1
    // crossing: S(i pi - zeta) = S(zeta)
    const cplx crossed = sg.eval(cplx(0.0, pi) - cplx(x));
    CHECK(std::abs(crossed - v) < 1e-12);
  }
  // simple poles of the defining rational expression
  CHECK_THROWS_AS(sg.eval(cplx(0.0, -b)), PoleError);
  CHECK_THROWS_AS(sg.eval(cplx(0.0, pi + b)), PoleError);

  CHECK_THROWS_AS(make_model(ModelKind::sinh_gordon, 1.0, 0.0), ModelError);
  CHECK_THROWS_AS(make_model(ModelKind::sinh_gordon, 1.0, pi), ModelError);
  CHECK_THROWS_AS(make_model(ModelKind::free_field, -1.0), ModelError);
}
