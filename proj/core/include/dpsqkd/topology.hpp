#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpsqkd {

/// One (wavelength, value) sample of a tabulated spectral quantity.
struct SpectralPoint {
  double wavelength_nm = 0.0;
  double value = 0.0;
};

/// Single-mode fiber section with a piecewise-linear attenuation table.
struct FiberSpan {
  double length_km = 0.0;
  std::vector<SpectralPoint> attenuation;  // dB/km, sorted by wavelength

  /// Default G.652 table: 0.37 dB/km at 1310 nm, 0.21 dB/km at 1550 nm,
  /// with band-edge anchors at 1260 and 1625 nm.
  static std::vector<SpectralPoint> default_attenuation();
  static FiberSpan standard(double length_km);

  double loss_db(double wavelength_nm) const;
  void validate() const;
};

/// Attenuation (dB/km) interpolated linearly inside the table hull.
/// Throws RangeError outside the hull.
double attenuation_at(const FiberSpan& span, double wavelength_nm);

/// Pump-depletion length (1 - exp(-aL))/a with a in 1/km; tends to L as a -> 0.
double effective_length(double length_km, double attenuation_db_per_km);

/// Passive 2:N power splitter.
struct Splitter {
  int ports = 16;
  double excess_loss_db = 0.0;
  double directivity_db = 55.0;  // isolation between ports on the same side

  double split_loss_db() const;  // 10 log10(N)
  double loss_db() const { return split_loss_db() + excess_loss_db; }
  void validate() const;
};

/// Optical band-pass filter. Without a table the passband is a flat top of
/// width fwhm_nm, surrounded by out_of_band_rejection_db.
struct FilterProfile {
  double center_nm = 1310.0;
  double fwhm_nm = 13.0;
  double insertion_loss_db = 0.0;
  double out_of_band_rejection_db = 30.0;
  std::vector<SpectralPoint> table;  // relative transmission in dB, optional

  /// Equivalent noise bandwidth (nm): integral of the linear transmission
  /// normalized to its peak. Flat tops return fwhm_nm.
  double noise_bandwidth_nm() const;
  /// Total loss seen by a narrow line at the given wavelength.
  double loss_db(double wavelength_nm) const;
  double in_band_transmission() const;
  void validate() const;

  static FilterProfile flat(double center_nm, double fwhm_nm, double insertion_loss_db = 0.0);
};

/// Loads a two-column CSV (wavelength_nm, relative dB) into a filter table.
std::vector<SpectralPoint> load_filter_table_csv(const std::string& path);

enum class Element { feeder_down, feeder_up, drop, splitter, onu_filter, co_filter };

/// Parses "feeder_down", "feeder_up", "drop", "splitter", "onu_filter",
/// "co_filter". Throws LookupError for anything else.
Element parse_element(std::string_view id);
std::string_view to_string(Element element);

/// Dual-feeder optical distribution network. All N drops are identical.
struct OdnTopology {
  FiberSpan feeder_down = FiberSpan::standard(13.2);
  FiberSpan feeder_up = FiberSpan::standard(15.1);
  FiberSpan drop = FiberSpan::standard(1.0);
  Splitter splitter;
  FilterProfile onu_filter = FilterProfile::flat(1310.0, 13.0);
  FilterProfile co_filter = FilterProfile::flat(1310.0, 1.22);
  /// Named taps, each the element sequence from the ONU to the tap.
  std::map<std::string, std::vector<Element>> probes = {
      {"rho", {Element::onu_filter, Element::drop, Element::splitter}}};

  /// ONU transmitter -> CO receiver for an upstream quantum channel.
  static std::vector<Element> upstream_quantum_path();

  double reach_km() const { return drop.length_km + feeder_up.length_km; }
  void validate() const;
};

double element_loss(const OdnTopology& topology, Element element, double wavelength_nm);

/// Sum of element losses along an explicit path.
double path_loss(const OdnTopology& topology, double wavelength_nm, std::span<const Element> path);
/// String-id variant; unknown ids throw LookupError.
double path_loss(const OdnTopology& topology, double wavelength_nm,
                 std::span<const std::string> path);

}  // namespace dpsqkd
