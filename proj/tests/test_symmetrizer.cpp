#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "zflab/grid.hpp"
#include "zflab/kinematics.hpp"
#include "zflab/rng.hpp"
#include "zflab/symmetrizer.hpp"
#include "zflab/tensor.hpp"

using namespace zflab;

namespace {

struct Fixture {
  RapidityGrid grid{-1.5, 1.5, 5};
  ScatteringFunction smat{make_model(ModelKind::sinh_gordon, 1.0, 0.7)};
  ExchangeTable table{grid, smat};
};

Tensor random_tensor(int n_points, int rank, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(n_points, rank);
  for (std::size_t f = 0; f < t.size(); ++f) t[f] = rng.gaussian_cplx();
  return t;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  double worst = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    worst = std::max(worst, std::abs(a[f] - b[f]));
  }
  return worst;
}

}  // namespace

TEST_CASE("exchange table: inverse pairs and diagonal") {
  Fixture fx;
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(fx.table(i, i) - cplx(-1.0)) < 1e-14);
    for (int j = 0; j < 5; ++j) {
      CHECK(std::abs(fx.table(i, j) * fx.table(j, i) - 1.0) < 1e-13);
      CHECK(std::abs(std::abs(fx.table(i, j)) - 1.0) < 1e-13);
    }
  }
}

TEST_CASE("exchange action is a homomorphism") {
  Fixture fx;
  const Tensor t = random_tensor(5, 3, 11);
  const auto perms = all_permutations(3);
  for (const auto& sigma : perms) {
    for (const auto& rho : perms) {
      const Tensor lhs =
          apply_exchange(apply_exchange(t, rho, fx.table), sigma, fx.table);
      std::vector<int> tau(3);
      for (int j = 0; j < 3; ++j) tau[j] = sigma[rho[j]];
      const Tensor rhs = apply_exchange(t, tau, fx.table);
      REQUIRE(max_abs_diff(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("projector: idempotent, self-adjoint, exchange-invariant") {
  Fixture fx;
  const Tensor a = random_tensor(5, 3, 21);
  const Tensor b = random_tensor(5, 3, 22);
  const Tensor pa = sym_project(a, fx.table);

  CHECK(max_abs_diff(sym_project(pa, fx.table), pa) < 1e-12);

  const cplx left = weighted_dot(fx.grid, pa, b);
  const cplx right = weighted_dot(fx.grid, a, sym_project(b, fx.table));
  CHECK(std::abs(left - right) < 1e-12);

  for (const auto& sigma : all_permutations(3)) {
    CHECK(max_abs_diff(apply_exchange(pa, sigma, fx.table), pa) < 1e-12);
  }
}

TEST_CASE("constant scattering limits: symmetrizer and antisymmetrizer") {
  const RapidityGrid grid(-1.0, 1.0, 4);

  const ScatteringFunction sfree(make_model(ModelKind::free_field));
  const ExchangeTable tfree(grid, sfree);
  const ScatteringFunction sising(make_model(ModelKind::ising));
  const ExchangeTable tising(grid, sising);

  const Tensor raw = random_tensor(4, 3, 31);
  const auto perms = all_permutations(3);

  Tensor plain(4, 3), signed_avg(4, 3);
  for (const auto& sigma : perms) {
    const Tensor moved = raw.slot_permute(sigma);
    const double sign =
        inversion_pairs(sigma).size() % 2 == 0 ? 1.0 : -1.0;
    plain += moved;
    Tensor sm = moved;
    sm *= cplx(sign);
    signed_avg += sm;
  }
  plain *= cplx(1.0 / 6.0);
  signed_avg *= cplx(1.0 / 6.0);

  CHECK(max_abs_diff(sym_project(raw, tfree), plain) < 1e-13);
  CHECK(max_abs_diff(sym_project(raw, tising), signed_avg) < 1e-13);
}

TEST_CASE("shuffle average equals the full projector on block-symmetric input") {
  Fixture fx;
  for (int rank : {3, 4}) {
    for (int m = 1; m < rank; ++m) {
      Tensor t = random_tensor(5, rank, 100 + 10 * rank + m);
      t = sym_project_block(t, 0, m, fx.table);
      t = sym_project_block(t, m, rank - m, fx.table);
      const Tensor via_shuffle = shuffle_project(t, m, fx.table);
      const Tensor via_full = sym_project(t, fx.table);
      REQUIRE(max_abs_diff(via_shuffle, via_full) < 1e-12);
    }
  }
}

TEST_CASE("front insertion equals projecting the product tensor") {
  Fixture fx;
  Rng rng(77);
  std::vector<cplx> amp(5);
  for (auto& v : amp) v = rng.gaussian_cplx();

  for (int rank : {1, 2, 3}) {
    const Tensor psi = sym_project(random_tensor(5, rank, 200 + rank), fx.table);
    // product amp x psi
    Tensor prod(5, rank + 1);
    std::vector<int> digits(rank + 1, 0);
    std::size_t flat = 0;
    do {
      std::size_t tail = 0;
      for (int a = 1; a <= rank; ++a) {
        tail = tail * 5 + static_cast<std::size_t>(digits[a]);
      }
      prod[flat++] = amp[digits[0]] * psi[tail];
    } while (Tensor::next_index(digits, 5));

    const Tensor direct = sym_project(prod, fx.table);
    const Tensor fast = sym_insert_front(amp, psi, fx.table);
    REQUIRE(max_abs_diff(fast, direct) < 1e-12);
  }
}

TEST_CASE("back insertion equals projecting the product tensor") {
  Fixture fx;
  Rng rng(78);
  std::vector<cplx> amp(5);
  for (auto& v : amp) v = rng.gaussian_cplx();

  for (int rank : {1, 2, 3}) {
    const Tensor psi = sym_project(random_tensor(5, rank, 300 + rank), fx.table);
    Tensor prod(5, rank + 1);
    std::vector<int> digits(rank + 1, 0);
    std::size_t flat = 0;
    do {
      std::size_t head = 0;
      for (int a = 0; a < rank; ++a) {
        head = head * 5 + static_cast<std::size_t>(digits[a]);
      }
      prod[flat++] = psi[head] * amp[digits[rank]];
    } while (Tensor::next_index(digits, 5));

    const Tensor direct = sym_project(prod, fx.table);
    const Tensor fast = sym_insert_back(amp, psi, fx.table);
    REQUIRE(max_abs_diff(fast, direct) < 1e-12);
  }
}

TEST_CASE("group-restricted projector acts only inside its range") {
  Fixture fx;
  const Tensor t = random_tensor(5, 3, 41);
  const Tensor p12 = sym_project_block(t, 1, 2, fx.table);

  // manual average over identity and the 1<->2 exchange
  Tensor manual(5, 3);
  exchange_accumulate(manual, t, {0, 1, 2}, fx.table, 0.5);
  exchange_accumulate(manual, t, {0, 2, 1}, fx.table, 0.5);
  CHECK(max_abs_diff(p12, manual) < 1e-13);

  CHECK(max_abs_diff(sym_project_block(p12, 1, 2, fx.table), p12) < 1e-12);

  // projecting both groups then shuffling is the full projector (rank 2 + 1)
  Tensor t2 = sym_project_block(t, 0, 2, fx.table);
  const Tensor full = sym_project(t2, fx.table);
  const Tensor sh = shuffle_project(t2, 2, fx.table);
  CHECK(max_abs_diff(full, sh) < 1e-12);
}
