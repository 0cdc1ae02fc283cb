#include "rgl/io.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "rgl/errors.hpp"

namespace rgl {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return f;
}

}  // namespace

void write_csv_with_provenance(const std::filesystem::path& path, const nlohmann::json& config,
                               const std::string& body) {
  auto f = open_out(path);
  f << "# config: " << config.dump() << '\n';
  f << "# sha256: " << sha256_hex(body) << '\n';
  f << body;
}

void write_json_with_provenance(const std::filesystem::path& path, const nlohmann::json& config,
                                const nlohmann::json& result) {
  auto f = open_out(path);
  nlohmann::json doc{{"config", config}, {"sha256", sha256_hex(result.dump())}, {"result", result}};
  f << doc.dump(2) << '\n';
}

}  // namespace rgl
