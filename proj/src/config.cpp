#include "otfs/config.hpp"

namespace otfs {

void SystemConfig::validate() const {
  if (!(fc > 0.0)) throw ConfigError("fc", "carrier frequency must be positive");
  if (!(B > 0.0)) throw ConfigError("B", "bandwidth must be positive");
  if (M == 0) throw ConfigError("M", "must be >= 1");
  if (N == 0) throw ConfigError("N", "must be >= 1");
  if (!(sigma_d2 > 0.0)) throw ConfigError("sigma_d2", "must be positive");
  if (!(sigma_w2 >= 0.0)) throw ConfigError("sigma_w2", "must be non-negative");
  if (Mtilde <= Q) throw ConfigError("Mtilde,Q", "Mtilde must exceed Q");
  if (Mtilde - Q < 2) throw ConfigError("Mtilde,Q", "Mtilde - Q must be at least 2");
  if (Mtilde > M * N) throw ConfigError("Mtilde", "sub-block longer than the M*N block");
  if (!(eps >= 0.0 && eps < 1.0)) throw ConfigError("eps", "must lie in (0, 1), or 0 for 1/Mbar");
  if (N_iter == 0) throw ConfigError("N_iter", "must be >= 1");
}

std::string to_string(Constellation c) {
  switch (c) {
    case Constellation::qpsk: return "qpsk";
    case Constellation::qam16: return "16qam";
    case Constellation::qam64: return "64qam";
  }
  return "?";
}

Constellation constellation_from_string(const std::string& s) {
  if (s == "qpsk" || s == "QPSK") return Constellation::qpsk;
  if (s == "16qam" || s == "16QAM") return Constellation::qam16;
  if (s == "64qam" || s == "64QAM") return Constellation::qam64;
  throw ConfigError("constellation", "unknown alphabet '" + s + "'");
}

}  // namespace otfs
