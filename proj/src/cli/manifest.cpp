// Copyright 2026 The DSR Workbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsr/cli/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "dsr/util/error.hpp"

namespace dsr::cli {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error("cannot initialise SHA-256");
    }
  }
  void update(const char* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw Error("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len) != 1) throw Error("SHA-256 final failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

RunManifest::RunManifest(std::string subcommand)
    : subcommand_(std::move(subcommand)), started_(std::chrono::steady_clock::now()) {}

void RunManifest::config(const std::string& key, jsonl::OrderedJson value) {
  config_[key] = std::move(value);
}

void RunManifest::input(const std::filesystem::path& path) {
  inputs_.emplace_back(path.string(), sha256_file(path));
}

void RunManifest::output(const std::filesystem::path& path) { outputs_.push_back(path.string()); }

jsonl::OrderedJson RunManifest::to_json() const {
  jsonl::OrderedJson j;
  j["subcommand"] = subcommand_;
  j["config"] = config_;
  auto inputs = jsonl::OrderedJson::array();
  for (const auto& [path, digest] : inputs_) inputs.push_back({{"path", path}, {"sha256", digest}});
  j["inputs"] = std::move(inputs);
  j["outputs"] = outputs_;
  const auto elapsed = std::chrono::steady_clock::now() - started_;
  j["duration_ms"] =
      std::chrono::duration<double, std::milli>(elapsed).count();
  return j;
}

std::filesystem::path RunManifest::path_for(const std::filesystem::path& primary) {
  return primary.string() + ".manifest.json";
}

std::filesystem::path RunManifest::write(const std::filesystem::path& primary) const {
  const auto path = path_for(primary);
  jsonl::write_file(path, to_json().dump(2) + "\n");
  return path;
}

}  // namespace dsr::cli
