#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fdrrt/kcprm.hpp"
#include "fdrrt/scenarios.hpp"

namespace fdrrt {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON documents tagged with a format name and version. Doubles are written
// with round-trip precision, so load(save(x)) == x bit for bit. Infinite
// heuristic values are stored as null.

std::string save_roadmap(const LocalRoadmap& roadmap);
LocalRoadmap load_roadmap(std::string_view text);

std::string save_roadmaps(const std::vector<LocalRoadmap>& roadmaps);
std::vector<LocalRoadmap> load_roadmaps(std::string_view text);

std::string save_scenario(const Scenario& scenario);
Scenario load_scenario(std::string_view text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace fdrrt
