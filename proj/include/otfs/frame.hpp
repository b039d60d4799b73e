#pragma once

#include <cstdint>
#include <span>

#include "otfs/config.hpp"
#include "otfs/types.hpp"

namespace otfs {

// Delay-Doppler symbols are stored N x M, indexed [k][l] (Doppler, delay).
// Time-frequency grids are stored M x N, indexed [m][n] (subcarrier, symbol).

// Unit-average-energy constellation points scaled to sigma_d2.
CVector constellation_points(Constellation c, double sigma_d2);

// i.i.d. uniform symbols on the configured constellation.
CMatrix draw_symbols(const SystemConfig& cfg, std::uint64_t seed);

// Inverse DFT along Doppler and forward DFT along delay. Unitary.
CMatrix isfft(const CMatrix& dd);
CMatrix sfft(const CMatrix& tf);

// Per-symbol M-point inverse DFT; output length M*N, unitary.
CVector heisenberg(const CMatrix& tf);
CMatrix wigner(std::span<const Complex> s, std::size_t M, std::size_t N);

// Complete transmitter chain d -> s.
CVector modulate(const CMatrix& dd);
// Receiver chain back to the delay-Doppler grid (inverse of modulate).
CMatrix demodulate(std::span<const Complex> s, std::size_t M, std::size_t N);

CVector add_cp(std::span<const Complex> s, std::size_t cp_len);
CVector remove_cp(std::span<const Complex> s, std::size_t cp_len);

}  // namespace otfs
