#include "dpsqkd/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dpsqkd/error.hpp"
#include "dpsqkd/units.hpp"

namespace dpsqkd {

namespace {

double interpolate(std::span<const SpectralPoint> table, double wavelength_nm, const char* what) {
  if (table.empty()) {
    throw RangeError(std::string(what) + ": empty table");
  }
  const double lo = table.front().wavelength_nm;
  const double hi = table.back().wavelength_nm;
  if (!(wavelength_nm >= lo && wavelength_nm <= hi)) {
    std::ostringstream msg;
    msg << what << ": wavelength " << wavelength_nm << " nm outside table hull [" << lo << ", "
        << hi << "] nm";
    throw RangeError(msg.str());
  }
  auto upper = std::lower_bound(table.begin(), table.end(), wavelength_nm,
                                [](const SpectralPoint& p, double w) { return p.wavelength_nm < w; });
  if (upper->wavelength_nm == wavelength_nm) {
    return upper->value;
  }
  const auto lower = upper - 1;
  const double t = (wavelength_nm - lower->wavelength_nm) / (upper->wavelength_nm - lower->wavelength_nm);
  return lower->value + t * (upper->value - lower->value);
}

void check_sorted(std::span<const SpectralPoint> table, const char* what) {
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].wavelength_nm > table[i - 1].wavelength_nm)) {
      throw DomainError(std::string(what) + ": wavelengths must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<SpectralPoint> FiberSpan::default_attenuation() {
  return {{1260.0, 0.40}, {1310.0, 0.37}, {1550.0, 0.21}, {1625.0, 0.24}};
}

FiberSpan FiberSpan::standard(double length_km) {
  return FiberSpan{length_km, default_attenuation()};
}

double FiberSpan::loss_db(double wavelength_nm) const {
  return length_km * attenuation_at(*this, wavelength_nm);
}

void FiberSpan::validate() const {
  if (!(length_km >= 0.0) || !std::isfinite(length_km)) {
    throw DomainError("fiber length must be >= 0 km");
  }
  if (attenuation.empty()) {
    throw DomainError("fiber attenuation table is empty");
  }
  check_sorted(attenuation, "fiber attenuation");
  for (const auto& p : attenuation) {
    if (!(p.value > 0.0)) {
      throw DomainError("fiber attenuation values must be > 0 dB/km");
    }
  }
}

double attenuation_at(const FiberSpan& span, double wavelength_nm) {
  return interpolate(span.attenuation, wavelength_nm, "fiber attenuation");
}

double effective_length(double length_km, double attenuation_db_per_km) {
  if (length_km < 0.0 || attenuation_db_per_km < 0.0) {
    throw DomainError("effective_length: negative length or attenuation");
  }
  const double a = db_per_km_to_nepers(attenuation_db_per_km);
  const double x = a * length_km;
  if (x < 1e-12) {
    return length_km;
  }
  return -std::expm1(-x) / a;
}

double Splitter::split_loss_db() const { return linear_to_db(static_cast<double>(ports)); }

void Splitter::validate() const {
  if (ports < 1 || (ports & (ports - 1)) != 0) {
    throw DomainError("splitter port count must be a power of two >= 1");
  }
  if (excess_loss_db < 0.0) {
    throw DomainError("splitter excess loss must be >= 0 dB");
  }
  if (directivity_db < 0.0) {
    throw DomainError("splitter directivity must be >= 0 dB");
  }
}

FilterProfile FilterProfile::flat(double center_nm, double fwhm_nm, double insertion_loss_db) {
  FilterProfile f;
  f.center_nm = center_nm;
  f.fwhm_nm = fwhm_nm;
  f.insertion_loss_db = insertion_loss_db;
  return f;
}

double FilterProfile::noise_bandwidth_nm() const {
  if (table.empty()) {
    if (!(fwhm_nm > 0.0)) {
      throw DomainError("filter bandwidth must be > 0 nm");
    }
    return fwhm_nm;
  }
  // Linear-in-dB segments integrate in closed form.
  double peak_db = table.front().value;
  for (const auto& p : table) peak_db = std::max(peak_db, p.value);
  double area = 0.0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const double w = table[i].wavelength_nm - table[i - 1].wavelength_nm;
    const double a = table[i - 1].value - peak_db;
    const double b = table[i].value - peak_db;
    if (std::abs(b - a) < 1e-12) {
      area += w * db_to_linear(a);
    } else {
      area += w * (db_to_linear(b) - db_to_linear(a)) / ((b - a) * std::numbers::ln10 / 10.0);
    }
  }
  if (!(area > 0.0)) {
    throw DomainError("filter noise bandwidth must be > 0 nm");
  }
  return area;
}

double FilterProfile::loss_db(double wavelength_nm) const {
  if (table.empty()) {
    const bool in_band = std::abs(wavelength_nm - center_nm) <= fwhm_nm / 2.0;
    return insertion_loss_db + (in_band ? 0.0 : out_of_band_rejection_db);
  }
  if (wavelength_nm < table.front().wavelength_nm || wavelength_nm > table.back().wavelength_nm) {
    return insertion_loss_db + out_of_band_rejection_db;
  }
  double peak_db = table.front().value;
  for (const auto& p : table) peak_db = std::max(peak_db, p.value);
  return insertion_loss_db + (peak_db - interpolate(table, wavelength_nm, "filter table"));
}

double FilterProfile::in_band_transmission() const { return db_to_linear(-insertion_loss_db); }

void FilterProfile::validate() const {
  if (!(fwhm_nm > 0.0)) {
    throw DomainError("filter fwhm must be > 0 nm");
  }
  if (out_of_band_rejection_db < 0.0) {
    throw DomainError("filter rejection must be >= 0 dB");
  }
  if (!table.empty()) {
    check_sorted(table, "filter table");
    if (center_nm < table.front().wavelength_nm || center_nm > table.back().wavelength_nm) {
      throw DomainError("filter table must contain the center wavelength");
    }
  }
}

std::vector<SpectralPoint> load_filter_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open filter table: " + path);
  }
  std::vector<SpectralPoint> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    SpectralPoint p;
    if (!(fields >> p.wavelength_nm >> p.value)) {
      if (table.empty()) continue;  // header row
      throw DataError(path + ":" + std::to_string(line_no) + ": expected wavelength_nm,dB");
    }
    table.push_back(p);
  }
  check_sorted(table, "filter table");
  return table;
}

Element parse_element(std::string_view id) {
  if (id == "feeder_down") return Element::feeder_down;
  if (id == "feeder_up") return Element::feeder_up;
  if (id == "drop") return Element::drop;
  if (id == "splitter") return Element::splitter;
  if (id == "onu_filter") return Element::onu_filter;
  if (id == "co_filter") return Element::co_filter;
  throw LookupError("unknown ODN element '" + std::string(id) + "'");
}

std::string_view to_string(Element element) {
  switch (element) {
    case Element::feeder_down: return "feeder_down";
    case Element::feeder_up: return "feeder_up";
    case Element::drop: return "drop";
    case Element::splitter: return "splitter";
    case Element::onu_filter: return "onu_filter";
    case Element::co_filter: return "co_filter";
  }
  return "?";
}

std::vector<Element> OdnTopology::upstream_quantum_path() {
  return {Element::onu_filter, Element::drop, Element::splitter, Element::feeder_up,
          Element::co_filter};
}

void OdnTopology::validate() const {
  feeder_down.validate();
  feeder_up.validate();
  drop.validate();
  splitter.validate();
  onu_filter.validate();
  co_filter.validate();
}

double element_loss(const OdnTopology& topology, Element element, double wavelength_nm) {
  switch (element) {
    case Element::feeder_down: return topology.feeder_down.loss_db(wavelength_nm);
    case Element::feeder_up: return topology.feeder_up.loss_db(wavelength_nm);
    case Element::drop: return topology.drop.loss_db(wavelength_nm);
    case Element::splitter: return topology.splitter.loss_db();
    case Element::onu_filter: return topology.onu_filter.loss_db(wavelength_nm);
    case Element::co_filter: return topology.co_filter.loss_db(wavelength_nm);
  }
  throw LookupError("unknown ODN element");
}

double path_loss(const OdnTopology& topology, double wavelength_nm, std::span<const Element> path) {
  double total = 0.0;
  for (Element e : path) {
    total += element_loss(topology, e, wavelength_nm);
  }
  return total;
}

double path_loss(const OdnTopology& topology, double wavelength_nm,
                 std::span<const std::string> path) {
  std::vector<Element> elements;
  elements.reserve(path.size());
  for (const auto& id : path) {
    elements.push_back(parse_element(id));
  }
  return path_loss(topology, wavelength_nm, elements);
}

}  // namespace dpsqkd
