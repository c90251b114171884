#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rxnemb::io {

inline constexpr const char* kToolVersion = "rxnemb 0.1.0";

// FNV-1a over the file bytes; the provenance hash written into manifests.
std::uint64_t fnv1a_file(const std::string& path);

// manifest.json written next to every command's outputs: the command, the
// tool version, the seed, input hashes and the resolved config. No
// timestamps, so reruns stay byte-identical.
void write_manifest(const std::string& out_dir, const std::string& command,
                    std::uint64_t seed, const std::vector<std::string>& input_paths,
                    const std::string& resolved_config_json);

}  // namespace rxnemb::io
