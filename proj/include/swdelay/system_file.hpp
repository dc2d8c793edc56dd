#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "swdelay/delay_model.hpp"
#include "swdelay/perturb.hpp"

namespace swdelay {

/// Current value of the optional top-level "version" field.
inline constexpr int kSystemFileVersion = 1;

/// A switched system with its optional perturbation structure and bounding
/// subsystem, as stored on disk (see docs/system_file_schema.md).
struct SystemFile {
  SwitchedDelaySystem system;
  std::optional<PerturbationStructure> perturbation;
  std::optional<DelaySubsystem> bound;
  std::optional<StructureQuadruple> bound_perturbation;

  friend bool operator==(const SystemFile&, const SystemFile&) = default;
};

/// Throws ParseError naming the offending field, e.g. "subsystems[1].discrete[0].A".
SystemFile parse_system_file(std::string_view text);
SystemFile load_system_file(const std::filesystem::path& path);
/// Pretty-printed JSON that parses back to an equal SystemFile.
std::string serialize_system_file(const SystemFile& file);

/// Disturbance document: {"disturbance": [{"Delta": [[...]], "delta": {"discrete": [...],
/// "kernel": {...}}}, ...]}, one entry per subsystem.
Disturbance parse_disturbance(std::string_view text);
Disturbance load_disturbance(const std::filesystem::path& path);
std::string serialize_disturbance(const Disturbance& d);

}  // namespace swdelay
