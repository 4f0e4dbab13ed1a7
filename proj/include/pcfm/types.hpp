#pragma once

// WDM comb, span and island domain types. All values are SI linear units:
// frequencies in Hz, lengths in m, beta2 in s^2/m, PSDs in W/Hz.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace pcfm {

struct Channel {
  int index = 0;
  double center_frequency_hz = 0.0;
  double bandwidth_hz = 0.0;
  double launch_psd_w_per_hz = 0.0;
  std::string profile_id;
};

struct WdmComb {
  std::vector<Channel> channels;  // sorted by center frequency
  int cut_index = 0;

  const Channel& cut() const { return channels.at(static_cast<std::size_t>(cut_index)); }

  void validate() const {
    if (channels.empty()) throw std::invalid_argument("comb: no channels");
    if (cut_index < 0 || cut_index >= static_cast<int>(channels.size()))
      throw std::invalid_argument("comb: cut_index out of range");
    for (std::size_t i = 0; i < channels.size(); ++i) {
      const Channel& c = channels[i];
      if (!(c.bandwidth_hz > 0.0))
        throw std::invalid_argument("comb: channel " + std::to_string(i) +
                                    ": bandwidth must be > 0");
      if (c.launch_psd_w_per_hz < 0.0)
        throw std::invalid_argument("comb: channel " + std::to_string(i) +
                                    ": launch PSD must be >= 0");
      if (i > 0) {
        const Channel& p = channels[i - 1];
        if (!(c.center_frequency_hz > p.center_frequency_hz))
          throw std::invalid_argument("comb: channels must be sorted by center frequency");
        if (p.center_frequency_hz + 0.5 * p.bandwidth_hz >
            c.center_frequency_hz - 0.5 * c.bandwidth_hz + 1e-9 * c.bandwidth_hz)
          throw std::invalid_argument("comb: channels " + std::to_string(i - 1) + " and " +
                                      std::to_string(i) + " overlap");
      }
    }
  }
};

// Key for per-island effective-dispersion overrides.
using IslandKey = std::tuple<int, int, int>;  // (k_ch, m_ch, n_ch)

struct SpanParams {
  double span_length_m = 0.0;
  double beta2_s2_per_m = 0.0;                    // default effective dispersion
  std::map<IslandKey, double> beta2_eff_override;  // per-island replacement
  double gamma_per_w_m = 0.0;
  double big_gamma = 1.0;      // user-supplied normalization at f_CUT
  double cut_end_power = 1.0;  // CUT profile value at z = span length

  double beta2_eff(const IslandKey& key) const {
    auto it = beta2_eff_override.find(key);
    return it == beta2_eff_override.end() ? beta2_s2_per_m : it->second;
  }

  void validate() const {
    if (!(span_length_m > 0.0)) throw std::invalid_argument("span: length must be > 0");
    if (!(gamma_per_w_m > 0.0)) throw std::invalid_argument("span: gamma must be > 0");
    if (!(big_gamma > 0.0)) throw std::invalid_argument("span: big_gamma must be > 0");
    if (!(cut_end_power > 0.0)) throw std::invalid_argument("span: cut_end_power must be > 0");
  }
};

// Integration rectangle in CUT-relative frequency coordinates: f1 in
// [a_k, b_k] spans the k-channel band and f2 in [c_m, d_m] the m-channel band.
struct FrequencyRectangle {
  double a_k = 0.0;
  double b_k = 0.0;
  double c_m = 0.0;
  double d_m = 0.0;

  double width_k() const { return b_k - a_k; }
  double width_m() const { return d_m - c_m; }
  double area() const { return width_k() * width_m(); }
  FrequencyRectangle transposed() const { return {c_m, d_m, a_k, b_k}; }
};

enum class IslandKind { Sci, Xci, Mci };

inline const char* to_string(IslandKind k) {
  switch (k) {
    case IslandKind::Sci: return "SCI";
    case IslandKind::Xci: return "XCI";
    default: return "MCI";
  }
}

struct Island {
  int m_ch = 0;
  int k_ch = 0;
  int n_ch = -1;  // -1 when the image frequency falls in no channel
  FrequencyRectangle rectangle;
  IslandKind kind = IslandKind::Mci;
  bool skipped = false;  // image frequency outside the comb
  bool clipped = false;  // rectangle shrunk to honor the image-band constraint
};

enum class NliMethod { ClosedForm, OracleFallback, Skipped };

inline const char* to_string(NliMethod m) {
  switch (m) {
    case NliMethod::ClosedForm: return "closed-form";
    case NliMethod::OracleFallback: return "oracle-fallback";
    default: return "skipped";
  }
}

struct NliContribution {
  Island island;
  double k_value = 0.0;  // core integral, m^2 Hz^2
  double g_nli = 0.0;    // PSD contribution at f_CUT, W/Hz
  NliMethod method = NliMethod::ClosedForm;
};

}  // namespace pcfm
