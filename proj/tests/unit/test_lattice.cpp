#include "phnls/error.hpp"
#include "phnls/field_io.hpp"
#include "support.hpp"

#include <doctest.h>
#include <limits>
#include <sstream>

using namespace phnls;
using namespace phnls::test;

TEST_SUITE("lattice") {
  TEST_CASE("Hermite functions are orthonormal under the collocation rule") {
    const auto b = make_hermite_basis(24);
    for (int a = 0; a < 24; ++a)
      for (int c = 0; c < 24; ++c) {
        double s = 0.0;
        for (int j = 0; j < 24; ++j)
          s += b.weights[j] * b.synthesis(j, a) * b.synthesis(j, c);
        CHECK(s == doctest::Approx(a == c ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
      }
    const auto h = hermite_functions(3, 0.7);
    CHECK(h[0] == doctest::Approx(std::pow(std::numbers::pi, -0.25) * std::exp(-0.245)).epsilon(1e-14));
  }

  TEST_CASE("basis vector maps to a single coefficient") {
    const double L = 20.0;
    const auto g = grid2(16, 64, L);
    const auto f = Field::sample(d2(), g, [&](double y, std::span<const double> z) {
      return hermite_functions(1, y)[0] * std::exp(cplx(0, 2 * std::numbers::pi * z[0] / L));
    });
    const auto c = f.to_coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i == 1)
        CHECK(std::abs(c.data()[i] - cplx(1.0)) < 1e-12);
      else
        CHECK(std::abs(c.data()[i]) < 1e-12);
    }
    CHECK(f.l2_norm() == doctest::Approx(std::sqrt(L)).epsilon(1e-12));
  }

  TEST_CASE("zero field has zero coefficients") {
    const auto c = Field::zeros(d2(), grid2()).to_coefficients();
    for (auto v : c.data())
      CHECK(v == cplx(0.0));
  }

  TEST_CASE("round trip and Parseval on random fields") {
    for (auto [params, g] : {std::pair{d2(), grid2(24, 64, 16.0)}, std::pair{d3(), grid3()}}) {
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto f = random_field(params, g, seed);
        const auto c = f.to_coefficients();
        const auto back = c.from_coefficients();
        CHECK(distance(back, f) <= 1e-12 * f.l2_norm());
        double phys = 0.0;
        const auto &w = g->y_weights();
        for (int j = 0; j < g->hermite_modes(); ++j)
          for (std::size_t q = 0; q < g->z_size(); ++q)
            phys += w[j] * g->z_cell() * std::norm(f.data()[j * g->z_size() + q]);
        CHECK(rel(c.l2_norm() * c.l2_norm(), phys) < 1e-12);
        CHECK(rel(g->z_volume() * sum_abs2(c.data()), phys) < 1e-12);
      }
    }
  }

  TEST_CASE("finer quadrature reproduces coefficients") {
    const auto g = Grid::make(16, {{32, 12.0}}, 40);
    const auto f = random_field(d2(), g, 3).to_coefficients();
    const auto back = g->from_quadrature(g->to_quadrature(f.data().data()).data());
    double err = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i)
      err = std::max(err, std::abs(back[i] - f.data()[i]));
    CHECK(err < 1e-12);
  }

  TEST_CASE("z gradient of a Fourier mode") {
    const double L = 20.0;
    const auto g = grid2(16, 64, L);
    const auto f = Field::sample(d2(), g, [&](double y, std::span<const double> z) {
      return std::exp(-y * y) * std::exp(cplx(0, 2 * std::numbers::pi * z[0] / L));
    });
    const auto dz = gradient_z(f);
    REQUIRE(dz.size() == 1);
    const auto expected = f * cplx(0, 2 * std::numbers::pi / L);
    CHECK(distance(dz[0], expected) < 1e-12 * expected.l2_norm());
  }

  TEST_CASE("y derivative and y multiplication of h0") {
    const auto g = grid2(16, 16, 10.0);
    const auto h0 = Field::sample(d2(), g, [](double y, std::span<const double>) {
      return std::pow(std::numbers::pi, -0.25) * std::exp(-y * y / 2);
    });
    const auto dy = gradient_y(h0);
    const auto &ys = g->y_nodes();
    double err = 0.0;
    for (int j = 0; j < g->hermite_modes(); ++j)
      for (std::size_t q = 0; q < g->z_size(); ++q) {
        const auto i = j * g->z_size() + q;
        err = std::max(err, std::abs(dy.data()[i] + ys[j] * h0.data()[i]));
      }
    CHECK(err < 1e-10);
    const auto yh = multiply_y(h0);
    CHECK(yh.l2_norm() * yh.l2_norm() / g->z_volume() == doctest::Approx(0.5).epsilon(1e-10));
  }

  TEST_CASE("ladder rows keep the top mode") {
    std::vector<cplx> c(4, 0.0);
    c[3] = 1.0;
    const auto up = ladder::y(c.data(), 4, 1);
    REQUIRE(up.size() == 5);
    CHECK(std::abs(up[4] - std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(up[2] - std::sqrt(1.5)) < 1e-14);
  }

  TEST_CASE("tail fraction of a low-mode field is negligible") {
    const auto f = gaussian(d2(), grid2());
    CHECK(tail_fraction(f) < 1e-12);
  }

  TEST_CASE("non-finite data and mismatched grids are rejected") {
    const auto g = grid2(8, 16, 8.0);
    std::vector<cplx> data(g->size(), 0.0);
    data[3] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(Field(d2(), g, Representation::Physical, data), ValidationError);
    data[3] = cplx(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(Field(d2(), g, Representation::Physical, data), ValidationError);
    CHECK_THROWS_AS(Field(d2(), g, Representation::Physical, std::vector<cplx>(5)), ValidationError);
    CHECK_THROWS_AS(Field::zeros(d3(), g), ValidationError);
    CHECK_THROWS_AS(Grid::make(4, {{16, 8.0}}), ValidationError);
    CHECK_THROWS_AS(Grid::make(8, {{12, 8.0}}), ValidationError);
  }

  TEST_CASE("field files round trip bit for bit") {
    const auto f = random_field(d3(), grid3(), 11);
    std::stringstream ss;
    write_field(ss, f);
    const auto h = read_field_header(ss);
    CHECK(h.params == f.params());
    CHECK(h.hermite_modes == 16);
    ss.seekg(0);
    const auto g = read_field(ss);
    CHECK(g.grid().same_layout(f.grid()));
    CHECK(g.data() == f.data());
    std::stringstream bad("NOTAFILE");
    CHECK_THROWS(read_field(bad));
  }
}
