// SPDX-License-Identifier: Apache-2.0
#include "absa/bundle.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "absa/errors.hpp"

namespace absa {

using nlohmann::ordered_json;

namespace {

constexpr char kMagic[8] = {'A', 'B', 'S', 'A', 'B', 'N', 'D', 'L'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("bundle truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

const NamedArray& ModelBundle::array(const std::string& name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return a;
  }
  throw DataError("bundle has no parameter '" + name + "'");
}

std::size_t ModelBundle::parameter_count() const {
  std::size_t n = 0;
  for (const auto& a : arrays) n += a.data.size();
  return n;
}

ordered_json hyperparams_to_json(const HyperParams& hp) {
  ordered_json j;
  j["word_dim"] = hp.word_dim;
  j["pos_dim"] = hp.pos_dim;
  j["dist_dim"] = hp.dist_dim;
  j["conv_maps"] = hp.conv_maps;
  j["conv_width"] = hp.conv_width;
  j["gru_units"] = hp.gru_units;
  j["polarity_units"] = hp.polarity_units;
  j["relation_units"] = hp.relation_units;
  j["polarity_window"] = hp.polarity_window;
  j["relation_window"] = hp.relation_window;
  j["maxout_pieces"] = hp.maxout_pieces;
  j["distance_clip"] = hp.distance_clip;
  j["max_pair_gap"] = hp.max_pair_gap;
  j["dropout"] = hp.dropout;
  return j;
}

HyperParams hyperparams_from_json(const ordered_json& j) {
  HyperParams hp;
  try {
    hp.word_dim = j.at("word_dim").get<std::size_t>();
    hp.pos_dim = j.at("pos_dim").get<std::size_t>();
    hp.dist_dim = j.at("dist_dim").get<std::size_t>();
    hp.conv_maps = j.at("conv_maps").get<std::size_t>();
    hp.conv_width = j.at("conv_width").get<std::size_t>();
    hp.gru_units = j.at("gru_units").get<std::size_t>();
    hp.polarity_units = j.at("polarity_units").get<std::size_t>();
    hp.relation_units = j.at("relation_units").get<std::size_t>();
    hp.polarity_window = j.at("polarity_window").get<std::size_t>();
    hp.relation_window = j.at("relation_window").get<std::size_t>();
    hp.maxout_pieces = j.at("maxout_pieces").get<std::size_t>();
    hp.distance_clip = j.at("distance_clip").get<std::size_t>();
    hp.max_pair_gap = j.at("max_pair_gap").get<std::size_t>();
    hp.dropout = j.at("dropout").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bundle hyperparameters: ") + e.what());
  }
  return hp;
}

void write_bundle(std::ostream& out, const ModelBundle& b) {
  static_assert(std::endian::native == std::endian::little ||
                    std::endian::native == std::endian::big,
                "mixed-endian platforms are not supported");
  ordered_json header;
  header["format_version"] = b.format_version;
  header["kind"] = b.kind;
  header["hyperparams"] = hyperparams_to_json(b.hyper);
  header["config"] = b.config;
  header["vocabulary"] = b.vocabulary;
  header["parameters"] = ordered_json::array();
  for (const auto& a : b.arrays) {
    if (a.data.size() != a.rows * a.cols) {
      throw DataError("parameter '" + a.name + "' length disagrees with its shape");
    }
    ordered_json entry;
    entry["name"] = a.name;
    entry["shape"] = {a.rows, a.cols};
    header["parameters"].push_back(entry);
  }
  const std::string text = header.dump();
  out.write(kMagic, sizeof kMagic);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& a : b.arrays) {
    for (double v : a.data) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
}

ModelBundle read_bundle(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw DataError("not a model bundle (bad magic)");
  }
  const std::uint64_t header_len = get_u64(in);
  std::string text(header_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_len))) {
    throw DataError("bundle header truncated");
  }
  ModelBundle b;
  try {
    const ordered_json header = ordered_json::parse(text);
    b.format_version = header.at("format_version").get<std::uint32_t>();
    if (b.format_version != ModelBundle::kFormatVersion) {
      throw DataError("bundle format version " + std::to_string(b.format_version) +
                      " is not supported (expected " +
                      std::to_string(ModelBundle::kFormatVersion) + ")");
    }
    b.kind = header.at("kind").get<std::string>();
    b.hyper = hyperparams_from_json(header.at("hyperparams"));
    b.config = header.at("config");
    b.vocabulary = header.at("vocabulary").get<std::vector<std::string>>();
    for (const auto& entry : header.at("parameters")) {
      NamedArray a;
      a.name = entry.at("name").get<std::string>();
      a.rows = entry.at("shape").at(0).get<std::size_t>();
      a.cols = entry.at("shape").at(1).get<std::size_t>();
      b.arrays.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bundle header: ") + e.what());
  }
  for (auto& a : b.arrays) {
    a.data.resize(a.rows * a.cols);
    for (double& v : a.data) {
      try {
        v = std::bit_cast<double>(get_u64(in));
      } catch (const DataError&) {
        throw DataError("bundle payload truncated in parameter '" + a.name + "'");
      }
    }
  }
  return b;
}

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write bundle " + path.string());
  write_bundle(out, bundle);
  if (!out) throw DataError("failed writing bundle " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open bundle " + path.string());
  return read_bundle(in);
}

void store_parameters(ModelBundle& bundle, std::span<const Parameter* const> params) {
  for (const Parameter* p : params) {
    NamedArray a{p->name, p->rows(), p->cols(), {}};
    a.data.assign(p->value.data().begin(), p->value.data().end());
    bundle.arrays.push_back(std::move(a));
  }
}

void restore_parameters(const ModelBundle& bundle, std::span<Parameter* const> params) {
  if (bundle.arrays.size() != params.size()) {
    throw DataError("bundle holds " + std::to_string(bundle.arrays.size()) +
                    " parameters, model expects " + std::to_string(params.size()));
  }
  for (Parameter* p : params) {
    const NamedArray& a = bundle.array(p->name);
    if (a.rows != p->rows() || a.cols != p->cols()) {
      throw DataError("parameter '" + p->name + "' has shape " + std::to_string(a.rows) + "x" +
                      std::to_string(a.cols) + ", model expects " + std::to_string(p->rows()) +
                      "x" + std::to_string(p->cols()));
    }
    std::copy(a.data.begin(), a.data.end(), p->value.data().begin());
  }
}

}  // namespace absa
