// Copyright (c) 2026 The tfa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TFA_SERIALIZE_HPP
#define TFA_SERIALIZE_HPP

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/errors.hpp"
#include "tfa/tensor.hpp"

namespace tfa {

using json = nlohmann::ordered_json;

// Portable array container:
//   magic "TFATENS1" | u32 version | u32 dtype | u32 ndim | u64 dims[ndim] | payload
// Payload is row-major little-endian. dtype 1 = float64 (the only dtype the
// toolkit currently emits; the tag exists so readers can reject others).
namespace arrayfile {

constexpr char kMagic[8] = {'T', 'F', 'A', 'T', 'E', 'N', 'S', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeF64 = 1;

}  // namespace arrayfile

namespace detail {

template <typename T>
void write_pod(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("array file: truncated");
  return v;
}

}  // namespace detail

inline void save_tensor(const Tensor& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_tensor: cannot open " + path);
  os.write(arrayfile::kMagic, sizeof(arrayfile::kMagic));
  detail::write_pod<std::uint32_t>(os, arrayfile::kVersion);
  detail::write_pod<std::uint32_t>(os, arrayfile::kDtypeF64);
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.shape()) detail::write_pod<std::uint64_t>(os, d);
  os.write(reinterpret_cast<const char*>(t.data()),
           static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!os) throw IoError("save_tensor: short write to " + path);
}

inline Tensor load_tensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_tensor: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, arrayfile::kMagic, sizeof(magic)) != 0)
    throw IoError("load_tensor: bad magic in " + path);
  if (detail::read_pod<std::uint32_t>(is) != arrayfile::kVersion)
    throw IoError("load_tensor: unsupported version in " + path);
  if (detail::read_pod<std::uint32_t>(is) != arrayfile::kDtypeF64)
    throw IoError("load_tensor: unsupported dtype in " + path);
  const auto ndim = detail::read_pod<std::uint32_t>(is);
  if (ndim == 0 || ndim > 8) throw IoError("load_tensor: bad rank in " + path);
  std::vector<std::size_t> shape(ndim);
  for (auto& d : shape) d = static_cast<std::size_t>(detail::read_pod<std::uint64_t>(is));
  Tensor t(shape);
  is.read(reinterpret_cast<char*>(t.data()),
          static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!is) throw IoError("load_tensor: truncated payload in " + path);
  return t;
}

/// Sidecar metadata lives next to the array as "<path>.json".
inline void save_tensor_with_meta(const Tensor& t, const std::string& path, const json& meta) {
  save_tensor(t, path);
  std::ofstream os(path + ".json");
  if (!os) throw IoError("save_tensor_with_meta: cannot open " + path + ".json");
  os << meta.dump(2) << "\n";
}

inline json load_tensor_meta(const std::string& path) {
  std::ifstream is(path + ".json");
  if (!is) throw IoError("load_tensor_meta: cannot open " + path + ".json");
  return json::parse(is);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_text_file: cannot open " + path);
  os << content;
  if (!os) throw IoError("write_text_file: short write to " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_text_file: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return data;
}

// Checkpoint container: magic "TFADET01" | u64 header_len | JSON header |
// concatenated float64 blobs. The header's "tensors" array records name,
// shape, and element offset of each blob.
namespace checkpoint {

constexpr char kMagic[8] = {'T', 'F', 'A', 'D', 'E', 'T', '0', '1'};

struct Entry {
  std::string name;
  Tensor tensor;
};

inline void save(const std::string& path, json header, const std::vector<Entry>& entries) {
  json tensors = json::array();
  std::uint64_t offset = 0;
  for (const auto& e : entries) {
    json t;
    t["name"] = e.name;
    t["dtype"] = "f64";
    t["shape"] = e.tensor.shape();
    t["offset"] = offset;
    tensors.push_back(t);
    offset += e.tensor.size();
  }
  header["tensors"] = tensors;
  const std::string head = header.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("checkpoint::save: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  detail::write_pod<std::uint64_t>(os, head.size());
  os.write(head.data(), static_cast<std::streamsize>(head.size()));
  for (const auto& e : entries)
    os.write(reinterpret_cast<const char*>(e.tensor.data()),
             static_cast<std::streamsize>(e.tensor.size() * sizeof(double)));
  if (!os) throw IoError("checkpoint::save: short write to " + path);
}

struct Loaded {
  json header;
  std::vector<Entry> entries;
};

inline Loaded load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("checkpoint::load: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw IoError("checkpoint::load: bad magic in " + path);
  const auto head_len = detail::read_pod<std::uint64_t>(is);
  std::string head(head_len, '\0');
  is.read(head.data(), static_cast<std::streamsize>(head_len));
  if (!is) throw IoError("checkpoint::load: truncated header in " + path);

  Loaded out;
  out.header = json::parse(head);
  for (const auto& t : out.header.at("tensors")) {
    if (t.at("dtype").get<std::string>() != "f64")
      throw IoError("checkpoint::load: unsupported dtype in " + path);
    Entry e;
    e.name = t.at("name").get<std::string>();
    e.tensor = Tensor(t.at("shape").get<std::vector<std::size_t>>());
    is.read(reinterpret_cast<char*>(e.tensor.data()),
            static_cast<std::streamsize>(e.tensor.size() * sizeof(double)));
    if (!is) throw IoError("checkpoint::load: truncated blob in " + path);
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace checkpoint

}  // namespace tfa

#endif  // TFA_SERIALIZE_HPP
