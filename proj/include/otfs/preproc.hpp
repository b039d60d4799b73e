#pragma once

#include <span>

#include "otfs/config.hpp"
#include "otfs/types.hpp"

namespace otfs {

// Symbol-free sub-block spectra. Xt and mask are Ntilde x Mbar, indexed [n][l].
struct PreprocOutput {
  CMatrix Xt;
  Mask mask;
  double k = 1.0;
};

// Rows of Mtilde consecutive samples; the trailing MN - Mtilde*Ntilde
// samples are dropped.
CMatrix segment(std::span<const Complex> x, const SystemConfig& cfg);

// Virtual cyclic prefix: fold the last Q samples of each row onto its head
// and keep the first Mbar = Mtilde - Q samples.
CMatrix add_vcp(const CMatrix& blocks, std::size_t Q);

// Essential part of each transmit sub-block, without fold.
CMatrix reference_blocks(std::span<const Complex> s, const SystemConfig& cfg);

// Scale that makes P{|k S| <= 1} = eps for S ~ CN(0, sigma_d2).
double choose_k(double sigma_d2, double eps);

// Row DFTs of both inputs, then Xt = X / (k S) with bins |k S| <= 1 zeroed.
PreprocOutput remove_symbols(const CMatrix& folded, const CMatrix& reference, double k);

// segment -> add_vcp -> remove_symbols with k from the config.
PreprocOutput preprocess(std::span<const Complex> x, std::span<const Complex> s,
                         const SystemConfig& cfg);

}  // namespace otfs
