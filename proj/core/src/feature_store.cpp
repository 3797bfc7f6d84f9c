// Copyright 2026 The mmfd Authors
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

#include <bit>
#include <fstream>

#include "mmfd/error.hpp"
#include "mmfd/features.hpp"

namespace mmfd {
namespace {

constexpr char kMagic[8] = {'M', 'M', 'F', 'D', 'F', 'S', '0', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

class Reader {
 public:
  Reader(std::istream& in, const std::filesystem::path& path) : in_(in), path_(path) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw Error("truncated feature store: " + path_.string());
  }

  std::uint32_t u32() {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4);
    return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
  }

  double f64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return std::bit_cast<double>(v);
  }

  std::string str(std::size_t n) {
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::istream& in_;
  const std::filesystem::path& path_;
};

}  // namespace

void save_feature_store(const FeatureStore& store, const std::filesystem::path& path) {
  const auto& dims = store.header.dims;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write feature store: " + path.string());
  const nlohmann::json header = {
      {"schema_version", store.header.schema_version},
      {"dims", {dims.text, dims.image, dims.social}},
      {"text_encoder", store.header.text_encoder},
      {"image_encoder", store.header.image_encoder},
      {"count", store.bundles.size()},
  };
  const std::string header_text = header.dump();
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& b : store.bundles) {
    if (b.fusion_vec.size() != dims.total()) throw DimensionMismatch("bundle '" + b.tweet_id + "' has wrong length");
    put_u32(out, static_cast<std::uint32_t>(b.tweet_id.size()));
    out.write(b.tweet_id.data(), static_cast<std::streamsize>(b.tweet_id.size()));
    const char mask = static_cast<char>((b.modality_mask.text ? 1 : 0) | (b.modality_mask.image ? 2 : 0) |
                                        (b.modality_mask.social ? 4 : 0));
    out.put(mask);
    for (double d : b.fusion_vec) put_f64(out, d);
  }
  if (!out) throw Error("failed writing feature store: " + path.string());
}

FeatureStore load_feature_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature store: " + path.string());
  Reader r(in, path);
  char magic[8];
  r.bytes(magic, 8);
  if (!std::equal(magic, magic + 8, kMagic)) throw Error("not a feature store: " + path.string());

  FeatureStore store;
  const auto header = nlohmann::json::parse(r.str(r.u32()), nullptr, false);
  if (header.is_discarded()) throw Error("corrupt feature store header: " + path.string());
  std::size_t count = 0;
  try {
    store.header.schema_version = header.at("schema_version").get<int>();
    const auto& dims = header.at("dims");
    store.header.dims = {dims.at(0).get<std::size_t>(), dims.at(1).get<std::size_t>(), dims.at(2).get<std::size_t>()};
    store.header.text_encoder = header.at("text_encoder").get<std::string>();
    store.header.image_encoder = header.at("image_encoder").get<std::string>();
    count = header.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("corrupt feature store header: " + std::string(e.what()));
  }

  const FusionDims dims = store.header.dims;
  store.bundles.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::string id = r.str(r.u32());
    char mask_byte = 0;
    r.bytes(&mask_byte, 1);
    std::vector<double> fusion(dims.total());
    for (auto& d : fusion) d = r.f64();
    auto block = [&](Modality m, bool present) -> std::optional<std::vector<double>> {
      if (!present) return std::nullopt;
      auto first = fusion.begin() + static_cast<std::ptrdiff_t>(dims.offset(m));
      return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(dims.width(m)));
    };
    store.bundles.push_back(assemble_fusion(std::move(id), block(Modality::Text, mask_byte & 1),
                                            block(Modality::Image, mask_byte & 2),
                                            block(Modality::Social, mask_byte & 4), dims));
  }
  return store;
}

}  // namespace mmfd
