#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "otfs/types.hpp"

namespace otfs {

enum class Constellation { qpsk, qam16, qam64 };

// Which power of pi sits in the denominator of the velocity bound.
enum class CrlbForm { printed, derived };

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// System parameters. Defaults are the single-target vehicular setup
// (5.89 GHz carrier, 10 MHz bandwidth, 25 x 40 grid).
struct SystemConfig {
  double fc = 5.89e9;  // carrier [Hz]
  double B = 10e6;     // bandwidth [Hz]
  std::size_t M = 25;  // subcarriers
  std::size_t N = 40;  // OTFS symbols per block
  double sigma_d2 = 1.0;
  double sigma_w2 = 0.1;
  std::size_t Q = 4;          // upper bound on target delay [samples]
  std::size_t Mtilde = 100;   // receiver sub-block length
  double eps = 0.0;           // mask probability, 0 selects 1/Mbar
  std::size_t N_iter = 5;
  std::size_t P = 1;
  Constellation constellation = Constellation::qam64;
  CrlbForm crlb_form = CrlbForm::printed;

  double Ts() const { return 1.0 / B; }
  double delta_f() const { return B / static_cast<double>(M); }
  double symbol_time() const { return static_cast<double>(M) * Ts(); }
  double lambda() const { return kSpeedOfLight / fc; }
  std::size_t block_len() const { return M * N; }
  std::size_t Mbar() const { return Mtilde - Q; }
  std::size_t Ntilde() const { return Mtilde == 0 ? 0 : block_len() / Mtilde; }
  double epsilon() const { return eps > 0.0 ? eps : 1.0 / static_cast<double>(Mbar()); }

  // Throws ConfigError naming the offending key(s).
  void validate() const;

  bool operator==(const SystemConfig&) const = default;
};

std::string to_string(Constellation c);
Constellation constellation_from_string(const std::string& s);

}  // namespace otfs
