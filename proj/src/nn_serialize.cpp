#include "tactile/nn/serialize.hpp"

#include <json.hpp>

#include <array>
#include <cstring>
#include <fstream>
#include <vector>

namespace tactile {

namespace {

constexpr char kMagic[8] = {'T', 'G', 'R', 'M', 'O', 'D', 'E', 'L'};

std::uint32_t crc32(const unsigned char* data, std::size_t len) {
  static std::array<std::uint32_t, 256> table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xffffffffu;
  for (std::size_t i = 0; i < len; ++i)
    crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
  return crc ^ 0xffffffffu;
}

template <typename T>
void append_le(std::vector<unsigned char>& buf, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T read_le(const unsigned char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  return value;
}

nlohmann::json stats_to_json(const ChannelStats& s) {
  nlohmann::json j;
  j["mean"] = std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size());
  j["std"] = std::vector<double>(s.std.data(), s.std.data() + s.std.size());
  return j;
}

ChannelStats stats_from_json(const nlohmann::json& j) {
  ChannelStats s;
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto std_ = j.at("std").get<std::vector<double>>();
  s.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), mean.size());
  s.std = Eigen::Map<const Eigen::VectorXd>(std_.data(), std_.size());
  return s;
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
  nlohmann::json header;
  header["spec"] = model.spec.name;
  header["filters"] = model.spec.filters;
  header["windowing"] = {{"detect_len", model.windowing.detect_len},
                         {"detect_step", model.windowing.detect_step},
                         {"sub_len", model.windowing.sub_len},
                         {"sub_hop", model.windowing.sub_hop}};
  header["representation"] = {
      {"kind", representation_name(model.rep.kind)},
      {"window", spectral_window_name(model.rep.window)},
      {"scale", spectral_scale_name(model.rep.scale)}};
  header["normalization"] = stats_to_json(model.norm);
  header["seed"] = model.seed;
  header["epochs"] = model.epochs_trained;
  header["final_loss"] = model.final_loss;
  header["param_count"] = model.params.size();
  const std::string text = header.dump();

  std::vector<unsigned char> buf;
  buf.insert(buf.end(), kMagic, kMagic + 8);
  append_le<std::uint32_t>(buf, kModelFormatVersion);
  append_le<std::uint64_t>(buf, text.size());
  buf.insert(buf.end(), text.begin(), text.end());
  for (Eigen::Index i = 0; i < model.params.size(); ++i)
    append_le<double>(buf, model.params[i]);
  append_le<std::uint32_t>(buf, crc32(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 8 + 4 + 8 + 4)
    throw Error(ErrorCode::ChecksumMismatch, "file too short: " + path);
  if (std::memcmp(buf.data(), kMagic, 8) != 0)
    throw Error(ErrorCode::ChecksumMismatch, "bad magic in " + path);
  const std::uint32_t version = read_le<std::uint32_t>(buf.data() + 8);
  if (version != kModelFormatVersion)
    throw Error(ErrorCode::FormatVersionMismatch,
                "format version " + std::to_string(version) + ", expected " +
                    std::to_string(kModelFormatVersion));
  const std::uint32_t stored =
      read_le<std::uint32_t>(buf.data() + buf.size() - 4);
  if (crc32(buf.data(), buf.size() - 4) != stored)
    throw Error(ErrorCode::ChecksumMismatch, "checksum mismatch in " + path);

  const std::uint64_t header_len = read_le<std::uint64_t>(buf.data() + 12);
  const std::size_t header_begin = 20;
  if (header_begin + header_len + 4 > buf.size())
    throw Error(ErrorCode::ChecksumMismatch, "corrupt header length in " + path);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(buf.begin() + header_begin,
                                   buf.begin() + header_begin + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ChecksumMismatch,
                std::string("corrupt header: ") + e.what());
  }

  const std::string name = header.at("spec").get<std::string>();
  if (!is_known_model(name))
    throw Error(ErrorCode::SpecUnknown, "model file declares unknown spec '" +
                                            name + "'");
  const int filters = header.at("filters").get<int>();
  WindowingConfig wcfg;
  wcfg.detect_len = header.at("windowing").at("detect_len").get<int>();
  wcfg.detect_step = header.at("windowing").at("detect_step").get<int>();
  wcfg.sub_len = header.at("windowing").at("sub_len").get<int>();
  wcfg.sub_hop = header.at("windowing").at("sub_hop").get<int>();
  RepresentationParams rep;
  rep.kind = representation_from_name(
      header.at("representation").at("kind").get<std::string>());
  rep.window = spectral_window_from_name(
      header.at("representation").at("window").get<std::string>());
  rep.scale = spectral_scale_from_name(
      header.at("representation").at("scale").get<std::string>());

  Model model = init_model(make_model_spec(name, filters), wcfg, rep,
                           header.at("seed").get<std::uint64_t>());
  model.norm = stats_from_json(header.at("normalization"));
  model.epochs_trained = header.at("epochs").get<int>();
  model.final_loss = header.at("final_loss").get<double>();

  const Eigen::Index param_count = header.at("param_count").get<Eigen::Index>();
  if (param_count != model.params.size())
    throw Error(ErrorCode::ShapeMismatch,
                "parameter blob size does not match spec " + name);
  const std::size_t blob_begin = header_begin + header_len;
  if (blob_begin + static_cast<std::size_t>(param_count) * 8 + 4 != buf.size())
    throw Error(ErrorCode::ChecksumMismatch, "parameter blob truncated");
  for (Eigen::Index i = 0; i < param_count; ++i)
    model.params[i] = read_le<double>(buf.data() + blob_begin + i * 8);
  return model;
}

}  // namespace tactile
