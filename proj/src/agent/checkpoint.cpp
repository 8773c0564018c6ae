#include "deephedge/agent/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "deephedge/config_json.hpp"
#include "deephedge/errors.hpp"
#include "deephedge/fs_util.hpp"

namespace dhedge::agent {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'H', 'R', 'L', 'C', 'K', 'P', 'T'};
constexpr int kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

void put_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ValidationError("checkpoint: truncated header");
  return v;
}

void put_doubles(std::ostream& out, const Eigen::VectorXd& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  using config::Json;
  const Eigen::VectorXd flat = ckpt.params.flatten();
  Json tensors = Json::array();
  std::int64_t offset = 0;
  for (const auto& t : ckpt.params.layout()) {
    tensors.push_back(Json{{"name", t.name}, {"shape", t.shape}, {"offset", offset}});
    offset += t.size();
  }
  Json manifest{{"format", "deephedge-checkpoint"},
                {"version", kFormatVersion},
                {"update", ckpt.update},
                {"seed", ckpt.train.seed},
                {"valid_sharpe", config::number_or_null(ckpt.valid_sharpe)},
                {"train_sharpe", config::number_or_null(ckpt.train_sharpe)},
                {"feature_fingerprint", ckpt.feature_fingerprint},
                {"env_fingerprint", ckpt.env_fingerprint},
                {"input_dim", ckpt.params.input_dim()},
                {"hidden", ckpt.params.hidden()},
                {"train", config::to_json(ckpt.train)},
                {"env", config::to_json(ckpt.env)},
                {"tensors", tensors},
                {"num_params", flat.size()}};
  std::int64_t total = flat.size();
  if (ckpt.adam) {
    manifest["adam"] = Json{{"step", ckpt.adam->step}, {"m_offset", total}, {"v_offset", total + flat.size()}};
    total += 2 * flat.size();
  } else {
    manifest["adam"] = nullptr;
  }
  manifest["binary_doubles"] = total;

  const std::string text = manifest.dump(2);
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  put_doubles(out, flat);
  if (ckpt.adam) {
    if (ckpt.adam->m.size() != flat.size() || ckpt.adam->v.size() != flat.size()) {
      throw ValidationError("checkpoint: optimizer state does not match the parameter count");
    }
    put_doubles(out, ckpt.adam->m);
    put_doubles(out, ckpt.adam->v);
  }
  if (!out) throw ValidationError("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  using config::Json;
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ValidationError("checkpoint: bad magic, not a checkpoint file");
  }
  const std::uint64_t len = get_u64(in);
  if (len > (std::uint64_t{1} << 30)) throw ValidationError("checkpoint: implausible manifest length");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw ValidationError("checkpoint: truncated manifest");

  Checkpoint c;
  Eigen::Index num_params = 0;
  std::int64_t total = 0;
  try {
    const Json m = Json::parse(text);
    if (m.at("format") != "deephedge-checkpoint" || m.at("version") != kFormatVersion) {
      throw ValidationError("checkpoint: unsupported format or version");
    }
    c.update = m.at("update").get<int>();
    c.valid_sharpe = config::number_or_missing(m.at("valid_sharpe"));
    c.train_sharpe = config::number_or_missing(m.at("train_sharpe"));
    c.feature_fingerprint = m.at("feature_fingerprint").get<std::string>();
    c.env_fingerprint = m.at("env_fingerprint").get<std::string>();
    c.train = config::train_config_from_json(m.at("train"));
    c.env = config::env_config_from_json(m.at("env"));
    const auto input_dim = m.at("input_dim").get<Eigen::Index>();
    const auto hidden = m.at("hidden").get<Eigen::Index>();
    if (input_dim < 1 || hidden < 1) throw ValidationError("checkpoint: invalid network shape");
    c.params = PolicyParams::zeros(input_dim, hidden);
    num_params = m.at("num_params").get<Eigen::Index>();
    if (num_params != c.params.num_params()) throw ValidationError("checkpoint: parameter count does not match shapes");
    const auto layout = c.params.layout();
    const Json& tensors = m.at("tensors");
    if (tensors.size() != layout.size()) throw ValidationError("checkpoint: tensor list does not match the network");
    std::int64_t offset = 0;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (tensors[i].at("name") != layout[i].name ||
          tensors[i].at("shape").get<std::vector<Eigen::Index>>() != layout[i].shape ||
          tensors[i].at("offset").get<std::int64_t>() != offset) {
        throw ValidationError("checkpoint: tensor '" + layout[i].name + "' does not match the expected layout");
      }
      offset += layout[i].size();
    }
    total = m.at("binary_doubles").get<std::int64_t>();
    if (!m.at("adam").is_null()) {
      AdamState a;
      a.step = m.at("adam").at("step").get<std::int64_t>();
      c.adam = a;
    }
    if (total != num_params * (c.adam ? 3 : 1)) throw ValidationError("checkpoint: binary section size mismatch");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint: malformed manifest (") + e.what() + ")");
  }

  auto read_vec = [&](Eigen::VectorXd& v) {
    v.resize(num_params);
    const auto bytes = static_cast<std::streamsize>(num_params * static_cast<Eigen::Index>(sizeof(double)));
    if (!in.read(reinterpret_cast<char*>(v.data()), bytes)) {
      throw ValidationError("checkpoint: truncated parameter section");
    }
  };
  Eigen::VectorXd flat;
  read_vec(flat);
  c.params.unflatten(flat);
  if (c.adam) {
    read_vec(c.adam->m);
    read_vec(c.adam->v);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ValidationError("checkpoint: trailing bytes after data");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ostringstream os(std::ios::binary);
  write_checkpoint(os, ckpt);
  write_file_atomic(path, os.str());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("checkpoint: cannot open " + path.string());
  return read_checkpoint(in);
}

void check_compatible(const Checkpoint& ckpt, const data::NormStats& stats, const env::EnvConfig& env_cfg) {
  const std::string fp = data::fingerprint(stats);
  if (ckpt.feature_fingerprint != fp) {
    throw IncompatibleError("checkpoint feature fingerprint " + ckpt.feature_fingerprint +
                            " does not match the panel's normalization/features " + fp +
                            "; it was trained on a different feature set or normalization");
  }
  const auto expected = static_cast<Eigen::Index>(env_cfg.window) * static_cast<Eigen::Index>(data::kNumFeatures) + 1;
  if (ckpt.params.input_dim() != expected) {
    throw IncompatibleError("checkpoint expects observations of length " + std::to_string(ckpt.params.input_dim()) +
                            ", the environment produces " + std::to_string(expected));
  }
}

}  // namespace dhedge::agent
