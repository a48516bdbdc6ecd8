#pragma once

#include <filesystem>
#include <string>

#include "lsdnet/geometry.hpp"

namespace lsdnet {

// Shortest round-trip decimal form of a double (std::to_chars), so written
// coordinates re-read to the identical bit pattern.
std::string format_double(double value);

// Fixed 9-significant-digit form used for reported probabilities.
std::string format_double_sig9(double value);

// Writes content to path via a temporary sibling file and an atomic rename.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// sensor_id,x,y per row. Reading validates the header and rejects malformed
// rows with BadFile; writing is atomic and uses round-trip formatting.
SensorField read_sensor_csv(const std::filesystem::path& path);
void write_sensor_csv(const std::filesystem::path& path, const SensorField& field);

}  // namespace lsdnet
