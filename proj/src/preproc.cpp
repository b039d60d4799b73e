#include "otfs/preproc.hpp"

#include <cmath>
#include <stdexcept>

#include "otfs/fft.hpp"
#include "otfs/kernels.hpp"

namespace otfs {

CMatrix segment(std::span<const Complex> x, const SystemConfig& cfg) {
  if (cfg.Mtilde == 0 || cfg.Mtilde > x.size())
    throw std::invalid_argument("segment: Mtilde must be in [1, MN]");
  const std::size_t rows = x.size() / cfg.Mtilde;
  CMatrix out(rows, cfg.Mtilde);
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(rows * cfg.Mtilde), out.data());
  return out;
}

CMatrix add_vcp(const CMatrix& blocks, std::size_t Q) {
  if (blocks.cols() < Q + 2) throw std::invalid_argument("add_vcp: Mtilde - Q must be at least 2");
  const std::size_t Mbar = blocks.cols() - Q;
  CMatrix out(blocks.rows(), Mbar);
  for (std::size_t n = 0; n < blocks.rows(); ++n) {
    for (std::size_t m = 0; m < Mbar; ++m) out(n, m) = blocks(n, m);
    for (std::size_t m = 0; m < Q; ++m) out(n, m) += blocks(n, m + Mbar);
  }
  return out;
}

CMatrix reference_blocks(std::span<const Complex> s, const SystemConfig& cfg) {
  if (cfg.Mtilde < cfg.Q + 2) throw std::invalid_argument("reference_blocks: Mtilde - Q must be at least 2");
  const CMatrix blocks = segment(s, cfg);
  const std::size_t Mbar = cfg.Mtilde - cfg.Q;
  CMatrix out(blocks.rows(), Mbar);
  for (std::size_t n = 0; n < blocks.rows(); ++n)
    for (std::size_t m = 0; m < Mbar; ++m) out(n, m) = blocks(n, m);
  return out;
}

double choose_k(double sigma_d2, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("choose_k: eps must lie in (0, 1)");
  if (!(sigma_d2 > 0.0)) throw std::invalid_argument("choose_k: sigma_d2 must be positive");
  return 1.0 / (std::sqrt(sigma_d2) * std::sqrt(std::log(1.0 / (1.0 - eps))));
}

PreprocOutput remove_symbols(const CMatrix& folded, const CMatrix& reference, double k) {
  if (folded.rows() != reference.rows() || folded.cols() != reference.cols())
    throw std::invalid_argument("remove_symbols: shape mismatch");
  if (!(k > 0.0)) throw std::invalid_argument("remove_symbols: k must be positive");
  for (std::size_t n = 0; n < reference.rows(); ++n)
    if (energy(reference.row(n)) == 0.0)
      throw std::invalid_argument("remove_symbols: reference row is identically zero");

  CMatrix X = folded;
  CMatrix S = reference;
  kernels::dft_rows(X, fft::Direction::forward);
  kernels::dft_rows(S, fft::Direction::forward);
  PreprocOutput out;
  out.k = k;
  kernels::masked_divide(X, S, k, out.Xt, out.mask);
  return out;
}

PreprocOutput preprocess(std::span<const Complex> x, std::span<const Complex> s,
                         const SystemConfig& cfg) {
  if (x.size() != s.size()) throw std::invalid_argument("preprocess: echo and reference lengths differ");
  const double k = choose_k(cfg.sigma_d2, cfg.epsilon());
  return remove_symbols(add_vcp(segment(x, cfg), cfg.Q), reference_blocks(s, cfg), k);
}

}  // namespace otfs
