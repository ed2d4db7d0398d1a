#include "gdm/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "gdm/config_json.hpp"
#include "gdm/rng.hpp"

namespace gdm {

namespace {
constexpr char kMagic[4] = {'G', 'D', 'M', 'C'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_checkpoint(const std::string& path, const VectorFieldNet& net, const FlowConfig& cfg) {
    nlohmann::json header;
    header["layer_dims"] = net.layer_dims();
    header["activation"] = activation_name(net.activation());
    header["cond_embed_dim"] = net.cond_embed_dim();
    header["param_count"] = net.param_count();
    header["flow_config"] = flow_config_to_json(cfg);
    const std::string json = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    const uint64_t json_len = json.size();
    out.write(reinterpret_cast<const char*>(&json_len), 8);
    out.write(json.data(), static_cast<std::streamsize>(json.size()));
    out.write(reinterpret_cast<const char*>(net.params().data()),
              static_cast<std::streamsize>(sizeof(double) * net.param_count()));
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[4];
    uint32_t version = 0;
    uint64_t json_len = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&json_len), 8);
    if (!in || std::string(magic, 4) != std::string(kMagic, 4))
        throw std::runtime_error("checkpoint: bad magic in " + path);
    if (version != kVersion)
        throw std::runtime_error("checkpoint: unsupported version in " + path);
    std::string json(json_len, '\0');
    in.read(json.data(), static_cast<std::streamsize>(json_len));
    if (!in) throw std::runtime_error("checkpoint: truncated header in " + path);

    nlohmann::json header = nlohmann::json::parse(json);
    FlowConfig cfg = flow_config_from_json(header.at("flow_config"));
    VectorFieldNet net(header.at("layer_dims").get<std::vector<int>>(),
                       activation_from_name(header.at("activation").get<std::string>()),
                       cfg.d(), cfg.k(), header.at("cond_embed_dim").get<int>());
    const int param_count = header.at("param_count").get<int>();
    if (param_count != net.param_count())
        throw std::runtime_error("checkpoint: parameter count mismatch in " + path);
    in.read(reinterpret_cast<char*>(net.mutable_params().data()),
            static_cast<std::streamsize>(sizeof(double) * param_count));
    if (!in) throw std::runtime_error("checkpoint: truncated parameter block in " + path);
    return Checkpoint{std::move(net), std::move(cfg)};
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("hash: cannot open " + path);
    uint64_t h = 0xcbf29ce484222325ull;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h = fnv1a64(buf.data(), static_cast<size_t>(in.gcount()), h);
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace gdm
