#include "rxnemb/io/embedding_file.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "rxnemb/common/error.hpp"

namespace rxnemb::io {

using nlohmann::json;

void save_embeddings(const std::string& path, const EmbeddingFile& file) {
  if (file.matrix.values.size() != static_cast<std::size_t>(file.matrix.count) *
                                       static_cast<std::size_t>(file.matrix.dim) ||
      static_cast<int>(file.ids.size()) != file.matrix.count) {
    throw Error(ErrorCode::LengthMismatch, "embedding matrix/id shapes disagree");
  }
  const json header = {{"format", "rxnemb-embeddings-v1"},
                       {"count", file.matrix.count},
                       {"emb_dim", file.matrix.dim},
                       {"skipped", file.skipped},
                       {"ids", file.ids}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::DataError, "cannot open " + path + " for writing");
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(file.matrix.values.data()),
            static_cast<std::streamsize>(file.matrix.values.size() * sizeof(float)));
  if (!out) throw Error(ErrorCode::DataError, "failed writing " + path);
}

EmbeddingFile load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::DataError, "cannot open embedding file " + path);
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw Error(ErrorCode::DataError, path + " is missing its header");
  }
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::DataError, "bad embedding header: " + std::string(e.what()));
  }
  if (header.value("format", "") != "rxnemb-embeddings-v1") {
    throw Error(ErrorCode::DataError, "unrecognized embedding format in " + path);
  }
  EmbeddingFile file;
  file.matrix.count = header.at("count").get<int>();
  file.matrix.dim = header.at("emb_dim").get<int>();
  file.skipped = header.at("skipped").get<int>();
  file.ids = header.at("ids").get<std::vector<std::string>>();
  if (static_cast<int>(file.ids.size()) != file.matrix.count) {
    throw Error(ErrorCode::DataError, "id count does not match embedding count");
  }
  const std::size_t floats =
      static_cast<std::size_t>(file.matrix.count) * static_cast<std::size_t>(file.matrix.dim);
  file.matrix.values.resize(floats);
  in.read(reinterpret_cast<char*>(file.matrix.values.data()),
          static_cast<std::streamsize>(floats * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(floats * sizeof(float))) {
    throw Error(ErrorCode::DataError, "embedding blob truncated in " + path);
  }
  return file;
}

}  // namespace rxnemb::io
