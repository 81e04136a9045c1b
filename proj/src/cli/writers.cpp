#include "nlpc/cli/writers.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace nlpc::cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14e", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CSV row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

CsvTable bands_csv(const LayeredStack& stack, const std::vector<BandDiagram>& diagrams) {
  CsvTable t({"omega_norm", "kpar_norm", "pol", "propagating", "attenuation_norm", "above_light_line"});
  for (const auto& d : diagrams) {
    for (std::size_t i = 0; i < d.omega_grid.size(); ++i) {
      for (std::size_t j = 0; j < d.kpar_grid.size(); ++j) {
        const BandCell& c = d.at(i, j);
        t.add({fmt(stack.omega_norm(d.omega_grid[i])), fmt(stack.k_norm(d.kpar_grid[j])),
               std::string(to_string(d.pol)), c.propagating ? "1" : "0",
               fmt(stack.k_norm(c.attenuation)), c.above_light_line ? "1" : "0"});
      }
    }
  }
  return t;
}

CsvTable surface_csv(const LayeredStack& stack, const std::vector<DispersionSurface>& surfaces) {
  CsvTable t({"kpar_norm", "kz_norm", "pol", "band", "gap_flag", "above_light_line"});
  for (const auto& s : surfaces) {
    for (const auto& smp : s.samples) {
      t.add({fmt(stack.k_norm(smp.kpar)), smp.kz ? fmt(stack.k_norm(*smp.kz)) : "nan",
             std::string(to_string(s.pol)), std::to_string(s.band), smp.kz ? "0" : "1",
             smp.above_light_line ? "1" : "0"});
    }
  }
  return t;
}

CsvTable harmonics_csv(const HarmonicSpectrum& spectrum) {
  CsvTable t({"g_index", "re", "im", "abs"});
  for (const auto& h : spectrum.harmonics)
    t.add({std::to_string(h.g), fmt(h.e.real()), fmt(h.e.imag()), fmt(h.abs)});
  return t;
}

CsvTable cone_csv(const LayeredStack& stack, const EmissionCone& cone) {
  CsvTable t({"phi", "k1x", "k1y", "k1z", "k2x", "k2y", "k2z", "residual"});
  for (const auto& s : cone.samples) {
    t.add({fmt(s.phi), fmt(stack.k_norm(s.k1.x())), fmt(stack.k_norm(s.k1.y())),
           fmt(stack.k_norm(s.k1.z())), fmt(stack.k_norm(s.k2.x())), fmt(stack.k_norm(s.k2.y())),
           fmt(stack.k_norm(s.k2.z())), fmt(stack.k_norm(s.residual))});
  }
  return t;
}

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }
json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json photon_json(const LayeredStack& stack, const Photon& p) {
  json j;
  j["pol"] = to_string(p.pol);
  j["band"] = p.band;
  j["backward"] = p.backward;
  j["omega"] = p.omega;
  j["omega_norm"] = stack.omega_norm(p.omega);
  j["wavelength"] = wavelength_from_omega(p.omega);
  j["kpar"] = vec_json(p.kpar);
  j["kpar_norm"] = vec_json(Vec2(p.kpar * stack.period() / kPi));
  j["kz"] = p.kz;
  j["kz_norm"] = stack.k_norm(p.kz);
  return j;
}

json solution_json(const LayeredStack& stack, const MatchSolution& m) {
  json j;
  j["type"] = to_string(m.type);
  j["channel"] = std::string(to_string(m.photon1.pol)) + "/" + std::string(to_string(m.photon2.pol));
  j["signs"] = json::array({m.signs.s1, m.signs.s2});
  j["g_p"] = m.g_p;
  j["g_dc"] = m.g_dc;
  j["residual"] = m.residual;
  j["residual_norm"] = stack.k_norm(m.residual);
  j["scan_coordinate"] = m.scan_coordinate;
  j["scan_coordinate_norm"] = stack.k_norm(m.scan_coordinate);
  j["photon1"] = photon_json(stack, m.photon1);
  j["photon2"] = photon_json(stack, m.photon2);
  return j;
}

json stopbands_json(const LayeredStack& stack, Polarization pol,
                    const std::vector<FrequencyInterval>& bands) {
  json arr = json::array();
  for (const auto& b : bands) {
    json j;
    j["pol"] = to_string(pol);
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["lo_norm"] = stack.omega_norm(b.lo);
    j["hi_norm"] = stack.omega_norm(b.hi);
    arr.push_back(j);
  }
  return arr;
}

json cone_summary_json(const LayeredStack& stack, const EmissionCone& cone) {
  json j;
  j["type"] = to_string(cone.type);
  j["channel"] = std::string(to_string(cone.pol1)) + "/" + std::string(to_string(cone.pol2));
  j["samples"] = cone.samples.size();
  j["closed"] = cone.closed;
  j["center_norm"] = vec_json(Vec2(cone.center * stack.period() / kPi));
  j["centroid_norm"] = vec_json(Vec2(cone.centroid() * stack.period() / kPi));
  if (cone.source) j["signs"] = json::array({cone.source->signs.s1, cone.source->signs.s2});
  return j;
}

json intersections_json(const LayeredStack& stack, const EntanglementDirections& dirs) {
  const double s = stack.period() / kPi;
  json pairs = json::array();
  for (const auto& p : dirs.pairs) {
    json j;
    j["kpar1_norm"] = vec_json(Vec2(p.kpar1 * s));
    j["k1_a_norm"] = vec_json(Vec3(p.k1_a * s));
    j["k2_a_norm"] = vec_json(Vec3(p.k2_a * s));
    j["k1_b_norm"] = vec_json(Vec3(p.k1_b * s));
    j["k2_b_norm"] = vec_json(Vec3(p.k2_b * s));
    j["residual_a_norm"] = p.residual_a * s;
    j["residual_b_norm"] = p.residual_b * s;
    pairs.push_back(j);
  }
  json j;
  j["pairs"] = pairs;
  j["crossing_separation"] = dirs.crossing_separation;
  return j;
}

}  // namespace nlpc::cli
