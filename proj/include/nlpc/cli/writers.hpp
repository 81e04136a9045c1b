#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlpc/bandstructure.hpp"
#include "nlpc/blochmodes.hpp"
#include "nlpc/efficiency.hpp"
#include "nlpc/phasematch.hpp"
#include "nlpc/surfaces.hpp"

namespace nlpc::cli {

using json = nlohmann::ordered_json;

/// Scientific notation, 15 significant digits.
std::string fmt(double v);

/// Comma-separated table with a fixed header; every row must match its width.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::size_t columns() const { return header_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

CsvTable bands_csv(const LayeredStack& stack, const std::vector<BandDiagram>& diagrams);
CsvTable surface_csv(const LayeredStack& stack, const std::vector<DispersionSurface>& surfaces);
CsvTable harmonics_csv(const HarmonicSpectrum& spectrum);
CsvTable cone_csv(const LayeredStack& stack, const EmissionCone& cone);

json photon_json(const LayeredStack& stack, const Photon& photon);
json solution_json(const LayeredStack& stack, const MatchSolution& solution);
json stopbands_json(const LayeredStack& stack, Polarization pol,
                    const std::vector<FrequencyInterval>& bands);
json cone_summary_json(const LayeredStack& stack, const EmissionCone& cone);
json intersections_json(const LayeredStack& stack, const EntanglementDirections& dirs);
json vec_json(const Vec2& v);
json vec_json(const Vec3& v);

}  // namespace nlpc::cli
