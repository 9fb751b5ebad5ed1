#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "zflab/fock.hpp"

using namespace zflab;

namespace {

ContextPtr shg_ctx(int n_max = 3) {
  return make_context(RapidityGrid(-1.5, 1.5, 5),
                      make_model(ModelKind::sinh_gordon, 1.0, 0.7), n_max);
}

double state_distance(const FockState& a, const FockState& b) {
  FockState d = a;
  d -= b;
  return d.norm();
}

std::vector<cplx> random_amp(const RapidityGrid& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> amp(static_cast<std::size_t>(g.size()));
  for (auto& v : amp) v = rng.gaussian_cplx();
  return amp;
}

// diagonal dressing (T_e psi)(t) = prod_j S(theta_{t_j} - theta_e) psi(t)
FockState dress(const FockState& in, int e) {
  const ContextPtr& ctx = in.context();
  FockState out = in;
  for (int n = 1; n <= ctx->n_max; ++n) {
    Tensor& t = out.sector(n);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (std::size_t f = 0; f < t.size(); ++f) {
      cplx phase = 1.0;
      for (int d : digits) phase *= ctx->exchange(d, e);
      t[f] *= phase;
      Tensor::next_index(digits, ctx->grid.size());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("ladder pair satisfies the discrete exchange algebra") {
  const ContextPtr ctx = shg_ctx();
  const FockState psi = random_state(ctx, 5, 2);
  const int n_pts = ctx->grid.size();

  for (int i = 0; i < n_pts; ++i) {
    for (int j = 0; j < n_pts; ++j) {
      // z_i z'_j = S(j - i) z'_j z_i + delta_ij / w_i
      FockState lhs = apply_annihilate_at(apply_create_at(psi, j), i);
      FockState rhs = apply_create_at(apply_annihilate_at(psi, i), j);
      rhs *= ctx->exchange(j, i);
      if (i == j) {
        FockState extra = psi;
        extra *= cplx(1.0 / ctx->grid.weight(i));
        rhs += extra;
      }
      REQUIRE(state_distance(lhs, rhs) < 1e-11);

      // z'_i z'_j = S(i - j) z'_j z'_i
      FockState cc_ij = apply_create_at(apply_create_at(psi, j), i);
      FockState cc_ji = apply_create_at(apply_create_at(psi, i), j);
      cc_ji *= ctx->exchange(i, j);
      REQUIRE(state_distance(cc_ij, cc_ji) < 1e-11);

      // z_i z_j = S(i - j) z_j z_i
      FockState aa_ij = apply_annihilate_at(apply_annihilate_at(psi, j), i);
      FockState aa_ji = apply_annihilate_at(apply_annihilate_at(psi, i), j);
      aa_ji *= ctx->exchange(i, j);
      REQUIRE(state_distance(aa_ij, aa_ji) < 1e-11);
    }
  }
}

TEST_CASE("reflected ladder pair: mirrored algebra and mixed relations") {
  const ContextPtr ctx = shg_ctx();
  const FockState psi = random_state(ctx, 6, 2);
  const RapidityGrid& grid = ctx->grid;

  for (int i = 0; i < grid.size(); ++i) {
    const auto di = grid_delta_amplitude(grid, i);
    for (int j = 0; j < grid.size(); ++j) {
      const auto dj = grid_delta_amplitude(grid, j);

      // primed pair: Z'_i Z''_j = S(i - j) Z''_j Z'_i + delta
      FockState lhs =
          apply_annihilate_prime(apply_create_prime(psi, dj), di);
      FockState rhs =
          apply_create_prime(apply_annihilate_prime(psi, di), dj);
      rhs *= ctx->exchange(i, j);
      if (i == j) {
        FockState extra = psi;
        extra *= cplx(1.0 / grid.weight(i));
        rhs += extra;
      }
      REQUIRE(state_distance(lhs, rhs) < 1e-11);

      // the two creators commute exactly
      FockState m1 = apply_create_at(apply_create_prime(psi, dj), i);
      FockState m2 = apply_create_prime(apply_create_at(psi, i), dj);
      REQUIRE(state_distance(m1, m2) < 1e-11);

      // annihilator meets mirror creator: the delta term carries the
      // diagonal dressing by S(theta_k - theta_e) over spectator slots
      FockState a1 = apply_annihilate_at(apply_create_prime(psi, dj), i);
      FockState a2 = apply_create_prime(apply_annihilate_at(psi, i), dj);
      if (i == j) {
        FockState extra = dress(psi, i);
        extra *= cplx(1.0 / grid.weight(i));
        a2 += extra;
      }
      REQUIRE(state_distance(a1, a2) < 1e-11);
    }
  }
}

TEST_CASE("monomial overlaps and lattice statistics") {
  const ContextPtr ctx = shg_ctx();
  const RapidityGrid& grid = ctx->grid;

  const FockState two = monomial_state(ctx, {1, 3});
  const double expected = 1.0 / (grid.weight(1) * grid.weight(3));
  CHECK(std::abs(two.norm_sq() - expected) < 1e-12);

  // S(0) = -1 makes coinciding rapidities drop out on the lattice
  const FockState same = monomial_state(ctx, {2, 2});
  CHECK(same.norm() < 1e-12);

  const ContextPtr free_ctx = make_context(
      grid, make_model(ModelKind::free_field), 3);
  const FockState same_free = monomial_state(free_ctx, {2, 2});
  CHECK(std::abs(same_free.norm_sq() -
                 2.0 / (grid.weight(2) * grid.weight(2))) < 1e-12);

  // distinct monomials are orthogonal
  const FockState other = monomial_state(ctx, {0, 3});
  CHECK(std::abs(inner_product(two, other)) < 1e-12);
}

TEST_CASE("creation and annihilation are mutual adjoints") {
  const ContextPtr ctx = shg_ctx();
  const FockState psi = random_state(ctx, 7, 2);
  const FockState chi = random_state(ctx, 8, 3);
  const auto amp = random_amp(ctx->grid, 9);
  std::vector<cplx> conj_amp(amp.size());
  for (std::size_t k = 0; k < amp.size(); ++k) conj_amp[k] = std::conj(amp[k]);

  const cplx lhs = inner_product(apply_create(psi, amp), chi);
  const cplx rhs = inner_product(psi, apply_annihilate(chi, conj_amp));
  CHECK(std::abs(lhs - rhs) < 1e-12);

  const cplx lhsp = inner_product(apply_create_prime(psi, amp), chi);
  const cplx rhsp = inner_product(psi, apply_annihilate_prime(chi, conj_amp));
  CHECK(std::abs(lhsp - rhsp) < 1e-12);
}

TEST_CASE("truncation loss at the cutoff is accounted exactly") {
  const ContextPtr small = shg_ctx(2);
  const ContextPtr big = shg_ctx(3);
  const auto amp = random_amp(small->grid, 17);

  FockState psi = random_state(small, 33, 2);
  FockState lifted(big);
  for (int n = 0; n <= 2; ++n) lifted.sector(n) = psi.sector(n);

  const FockState cut = apply_create(psi, amp);
  const FockState full = apply_create(lifted, amp);
  const double exact_loss = weighted_norm_sq(big->grid, full.sector(3));
  CHECK(std::abs(cut.dropped_norm_sq() - exact_loss) <
        1e-11 * std::max(1.0, exact_loss));
  // sectors below the cutoff agree
  for (int n = 0; n <= 2; ++n) {
    Tensor d = cut.sector(n);
    d -= full.sector(n);
    CHECK(std::sqrt(weighted_norm_sq(small->grid, d)) < 1e-12);
  }

  const FockState cutp = apply_create_prime(psi, amp);
  const FockState fullp = apply_create_prime(lifted, amp);
  const double exact_lossp = weighted_norm_sq(big->grid, fullp.sector(3));
  CHECK(std::abs(cutp.dropped_norm_sq() - exact_lossp) <
        1e-11 * std::max(1.0, exact_lossp));
}

TEST_CASE("translations: unitary one-parameter action") {
  const ContextPtr ctx = shg_ctx();
  const FockState psi = random_state(ctx, 44, 3);
  const SpacetimePoint x{0.3, -0.7}, y{-0.1, 0.4};

  const FockState ux = apply_translation(psi, x);
  CHECK(std::abs(ux.norm() - psi.norm()) < 1e-12);

  const FockState uxy = apply_translation(ux, y);
  const FockState both = apply_translation(psi, {x.t + y.t, x.x + y.x});
  CHECK(state_distance(uxy, both) < 1e-12);

  CHECK(state_distance(apply_translation(FockState::vacuum(ctx), x),
                       FockState::vacuum(ctx)) < 1e-15);

  const FockState chi = random_state(ctx, 45, 3);
  CHECK(std::abs(inner_product(ux, apply_translation(chi, x)) -
                 inner_product(psi, chi)) < 1e-12);
}

TEST_CASE("lattice boosts: shifts, commensurability, exact loss") {
  const ContextPtr ctx = shg_ctx();
  const double dtheta = ctx->grid.dtheta();

  CHECK_THROWS_AS(apply_boost(random_state(ctx, 1, 1), 0.5 * dtheta),
                  BoostCommensurabilityError);

  // interior support: shift one step right and back is the identity
  FockState interior(ctx);
  interior.sector(1)[1] = 1.0;
  interior.sector(2)[interior.sector(2).flat_index({1, 2})] = 0.5;
  interior.sector(2) = sym_project(interior.sector(2), ctx->exchange);
  const FockState there = apply_boost(interior, dtheta);
  CHECK(std::abs(there.dropped_norm()) < 1e-15);
  const FockState back = apply_boost_steps(there, -1);
  CHECK(state_distance(back, interior) < 1e-14);

  // edge support boosted off the grid: everything is lost, exactly
  const FockState edge = monomial_state(ctx, {4});
  const FockState gone = apply_boost_steps(edge, 1);
  CHECK(gone.norm() < 1e-15);
  CHECK(std::abs(gone.dropped_norm_sq() - edge.norm_sq()) < 1e-12);
}

TEST_CASE("reflection: antiunitary involution intertwining the two wedges") {
  const ContextPtr ctx = shg_ctx();
  const FockState psi = random_state(ctx, 55, 3);
  const FockState chi = random_state(ctx, 56, 3);

  CHECK(state_distance(apply_reflection(apply_reflection(psi)), psi) < 1e-14);

  const cplx lhs = inner_product(apply_reflection(psi), apply_reflection(chi));
  CHECK(std::abs(lhs - std::conj(inner_product(psi, chi))) < 1e-12);

  FockState scaled = psi;
  scaled *= cplx(0.3, -1.1);
  FockState want = apply_reflection(psi);
  want *= std::conj(cplx(0.3, -1.1));
  CHECK(state_distance(apply_reflection(scaled), want) < 1e-12);

  // U z'(theta_i) U = Z''(theta_i): reflection route equals the direct
  // primed creator
  const auto d2 = grid_delta_amplitude(ctx->grid, 2);
  const FockState via_reflect =
      apply_reflection(apply_create_at(apply_reflection(psi), 2));
  const FockState direct = apply_create_prime(psi, d2);
  CHECK(state_distance(via_reflect, direct) < 1e-11);
}

TEST_CASE("random states are S-symmetric and normalized") {
  const ContextPtr ctx = shg_ctx();
  const FockState psi = random_state(ctx, 99, 3);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  for (int n = 2; n <= 3; ++n) {
    Tensor p = sym_project(psi.sector(n), ctx->exchange);
    p -= psi.sector(n);
    CHECK(std::sqrt(weighted_norm_sq(ctx->grid, p)) < 1e-12);
  }
}
