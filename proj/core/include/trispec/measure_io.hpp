#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "trispec/measure.hpp"

namespace trispec {

/// Version of the measure document written by write_measure_json.
inline constexpr int kMeasureFormatVersion = 1;

/// Writes the versioned measure document
///
///   {"format": "trispec.joint_spectral_measure", "version": 1,
///    "manifold": {...}, "cutoff": c, "key_kind": "...", "count_scale": s,
///    "atoms": [{"q1":..,"q2":..,"q3":..,"count":..}, ...]}
///
/// Sphere measures use {"l1","l2","l3","weight"} atoms. Output is a pure
/// function of the measure.
void write_measure_json(const JointSpectralMeasure& measure, std::ostream& out);

/// Parses a document produced by write_measure_json. Frequencies are
/// recomputed from the integer keys. Throws DomainError on schema errors.
[[nodiscard]] JointSpectralMeasure read_measure_json(std::istream& in);

void save_measure(const JointSpectralMeasure& measure, const std::filesystem::path& path);
[[nodiscard]] JointSpectralMeasure load_measure(const std::filesystem::path& path);

/// Shortest decimal string that round-trips to `value`.
[[nodiscard]] std::string format_double(double value);

}  // namespace trispec
