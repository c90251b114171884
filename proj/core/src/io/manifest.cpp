#include "rxnemb/io/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "rxnemb/common/error.hpp"

namespace rxnemb::io {

using nlohmann::json;

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::DataError, "cannot hash missing file " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return hash;
}

void write_manifest(const std::string& out_dir, const std::string& command, std::uint64_t seed,
                    const std::vector<std::string>& input_paths,
                    const std::string& resolved_config_json) {
  json inputs = json::array();
  for (const std::string& path : input_paths) {
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(path)));
    inputs.push_back({{"path", path}, {"fnv1a64", hex}});
  }
  json manifest = {{"tool", kToolVersion},
                   {"command", command},
                   {"seed", seed},
                   {"inputs", std::move(inputs)}};
  manifest["config"] = json::parse(resolved_config_json);
  std::ofstream out(out_dir + "/manifest.json");
  if (!out) throw Error(ErrorCode::DataError, "cannot write manifest in " + out_dir);
  out << manifest.dump(2) << '\n';
}

}  // namespace rxnemb::io
