#include <doctest.h>

#include "otfs/kernels.hpp"
#include "test_util.hpp"

using namespace otfs;

TEST_CASE("parallel kernels match the serial loops") {
  for (auto dir : {fft::Direction::forward, fft::Direction::inverse}) {
    const CMatrix x = test::random_grid(37, 96, 1);
    CMatrix a = x, b = x;
    kernels::dft_rows(a, dir);
    reference::dft_rows(b, dir);
    CHECK(test::max_abs_diff(a, b) < 1e-12);
    a = x;
    b = x;
    kernels::dft_cols(a, dir);
    reference::dft_cols(b, dir);
    CHECK(test::max_abs_diff(a, b) < 1e-12);
  }

  const CVector s = test::random_vector(4000, 2);
  TargetSet ts(3);
  ts[0] = {Complex(1.0, 0.2), 0, 873.2, 1.0};
  ts[1] = {Complex(0.1, -0.4), 17, -2200.0, 1.0};
  ts[2] = {Complex(-0.6, 0.0), 49, 4000.0, 1.0};
  CVector a(s.size(), Complex(0.5, 0.5)), b = a;
  kernels::accumulate_echo(s, ts, 1.0 / 12e6, a);
  reference::accumulate_echo(s, ts, 1.0 / 12e6, b);
  CHECK(test::max_abs_diff(a, b) < 1e-12);

  const CMatrix num = test::random_grid(20, 300, 3), ref = test::random_grid(20, 300, 4);
  CMatrix oa, ob;
  Mask ma, mb;
  kernels::masked_divide(num, ref, 4.0, oa, ma);
  reference::masked_divide(num, ref, 4.0, ob, mb);
  CHECK(ma == mb);
  CHECK(test::max_abs_diff(oa, ob) == 0.0);

  const CMatrix g = test::random_grid(12, 80, 5);
  for (double lt : {0.0, 3.7, 79.2})
    for (double nt : {0.0, 5.5, 11.9})
      CHECK(std::abs(kernels::offgrid_coefficient(g, lt, nt) - reference::offgrid_coefficient(g, lt, nt)) < 1e-10);
}
