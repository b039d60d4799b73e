#include "otfs/frame.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "otfs/fft.hpp"
#include "otfs/kernels.hpp"

namespace otfs {

double energy(std::span<const Complex> x) {
  double e = 0.0;
  for (const auto& v : x) e += std::norm(v);
  return e;
}

CVector constellation_points(Constellation c, double sigma_d2) {
  int side = 0;
  switch (c) {
    case Constellation::qpsk: side = 2; break;
    case Constellation::qam16: side = 4; break;
    case Constellation::qam64: side = 8; break;
  }
  // levels -(side-1), ..., side-1 in steps of 2; mean power 2(side^2-1)/3
  const double norm = std::sqrt(sigma_d2 * 3.0 / (2.0 * (side * side - 1)));
  CVector pts;
  pts.reserve(side * side);
  for (int i = 0; i < side; ++i)
    for (int q = 0; q < side; ++q)
      pts.emplace_back((2 * i - side + 1) * norm, (2 * q - side + 1) * norm);
  return pts;
}

CMatrix draw_symbols(const SystemConfig& cfg, std::uint64_t seed) {
  if (cfg.M == 0 || cfg.N == 0) throw std::invalid_argument("draw_symbols: empty grid");
  const CVector pts = constellation_points(cfg.constellation, cfg.sigma_d2);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  CMatrix d(cfg.N, cfg.M);
  for (auto& v : d.storage()) v = pts[pick(rng)];
  return d;
}

CMatrix isfft(const CMatrix& dd) {
  if (dd.empty()) throw std::invalid_argument("isfft: empty grid");
  // dd is [k][l]; inverse DFT over k then forward DFT over l
  CMatrix x = dd;
  kernels::dft_cols(x, fft::Direction::inverse);
  kernels::dft_rows(x, fft::Direction::forward);
  return x.transposed();
}

CMatrix sfft(const CMatrix& tf) {
  if (tf.empty()) throw std::invalid_argument("sfft: empty grid");
  CMatrix x = tf.transposed();
  kernels::dft_rows(x, fft::Direction::inverse);
  kernels::dft_cols(x, fft::Direction::forward);
  return x;
}

CVector heisenberg(const CMatrix& tf) {
  if (tf.empty()) throw std::invalid_argument("heisenberg: empty grid");
  // rows of the transpose are OFDM symbols
  CMatrix x = tf.transposed();
  kernels::dft_rows(x, fft::Direction::inverse);
  return std::move(x.storage());
}

CMatrix wigner(std::span<const Complex> s, std::size_t M, std::size_t N) {
  if (s.size() != M * N || s.empty()) throw std::invalid_argument("wigner: length is not M*N");
  CMatrix x(N, M);
  std::copy(s.begin(), s.end(), x.data());
  kernels::dft_rows(x, fft::Direction::forward);
  return x.transposed();
}

CVector modulate(const CMatrix& dd) { return heisenberg(isfft(dd)); }

CMatrix demodulate(std::span<const Complex> s, std::size_t M, std::size_t N) {
  return sfft(wigner(s, M, N));
}

CVector add_cp(std::span<const Complex> s, std::size_t cp_len) {
  if (cp_len > s.size()) throw std::invalid_argument("add_cp: prefix longer than block");
  CVector out;
  out.reserve(s.size() + cp_len);
  out.insert(out.end(), s.end() - static_cast<std::ptrdiff_t>(cp_len), s.end());
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

CVector remove_cp(std::span<const Complex> s, std::size_t cp_len) {
  if (cp_len > s.size()) throw std::invalid_argument("remove_cp: prefix longer than input");
  return CVector(s.begin() + static_cast<std::ptrdiff_t>(cp_len), s.end());
}

}  // namespace otfs
