#include "lmvs/scorer/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "lmvs/error.hpp"
#include "lmvs/util/atomic_file.hpp"

namespace lmvs::scorer {
namespace {

constexpr std::string_view kMagic = "LMVSCKPT";

static_assert(std::endian::native == std::endian::little, "checkpoint encoding assumes a little-endian host");

class Writer {
public:
    template <typename T>
    void put(T value) {
        char buf[sizeof(T)];
        std::memcpy(buf, &value, sizeof(T));
        out_.append(buf, sizeof(T));
    }
    void put_string(std::string_view s) {
        put(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    void put_raw(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T value;
        std::memcpy(&value, in_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }
    std::string get_string() {
        const auto n = get<std::uint32_t>();
        need(n);
        std::string s(in_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    std::string_view get_raw(std::size_t n) {
        need(n);
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw ParseError("checkpoint truncated");
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const Checkpoint& checkpoint) {
    const auto& cfg = checkpoint.model.config;
    Writer w;
    w.put_raw(kMagic);
    w.put(kCheckpointVersion);
    w.put(static_cast<std::int32_t>(cfg.d_model));
    w.put(static_cast<std::int32_t>(cfg.n_layers));
    w.put(static_cast<std::int32_t>(cfg.n_heads));
    w.put(static_cast<std::int32_t>(cfg.d_ff));
    w.put(static_cast<std::int32_t>(cfg.max_seq_len));
    w.put(cfg.dropout);
    w.put(static_cast<std::uint8_t>(cfg.positional_encoding == PositionalEncoding::sinusoidal ? 1 : 0));
    w.put(static_cast<std::uint64_t>(cfg.seed));
    w.put(static_cast<std::uint32_t>(checkpoint.metadata.size()));
    for (const auto& [key, value] : checkpoint.metadata) {
        w.put_string(key);
        w.put_string(value);
    }
    std::uint32_t count = 0;
    checkpoint.model.params.for_each([&](const std::string&, const Matrix&) { ++count; });
    w.put(count);
    checkpoint.model.params.for_each([&](const std::string& name, const Matrix& m) {
        w.put_string(name);
        w.put(static_cast<std::uint32_t>(m.rows()));
        w.put(static_cast<std::uint32_t>(m.cols()));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) w.put(m(i, j));
        }
    });
    return w.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
    Reader r(bytes);
    if (r.get_raw(kMagic.size()) != kMagic) throw ParseError("not an lmvs checkpoint (bad magic)");
    const auto version = r.get<std::uint32_t>();
    if (version != kCheckpointVersion) {
        throw ParseError("unsupported checkpoint version " + std::to_string(version));
    }
    ModelConfig cfg;
    cfg.d_model = r.get<std::int32_t>();
    cfg.n_layers = r.get<std::int32_t>();
    cfg.n_heads = r.get<std::int32_t>();
    cfg.d_ff = r.get<std::int32_t>();
    cfg.max_seq_len = r.get<std::int32_t>();
    cfg.dropout = r.get<double>();
    cfg.positional_encoding = r.get<std::uint8_t>() != 0 ? PositionalEncoding::sinusoidal : PositionalEncoding::none;
    cfg.seed = r.get<std::uint64_t>();
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ParseError(std::string("checkpoint config invalid: ") + e.what());
    }

    Checkpoint out;
    const auto meta_count = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < meta_count; ++i) {
        auto key = r.get_string();
        out.metadata[std::move(key)] = r.get_string();
    }

    out.model = init_model(cfg);
    std::uint32_t expected = 0;
    out.model.params.for_each([&](const std::string&, const Matrix&) { ++expected; });
    if (r.get<std::uint32_t>() != expected) throw ParseError("checkpoint tensor count does not match config");
    out.model.params.for_each([&](const std::string& name, Matrix& m) {
        if (r.get_string() != name) throw ParseError("checkpoint tensor order mismatch at " + name);
        const auto rows = r.get<std::uint32_t>();
        const auto cols = r.get<std::uint32_t>();
        if (rows != m.rows() || cols != m.cols()) throw ParseError("checkpoint tensor shape mismatch at " + name);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                const double x = r.get<double>();
                if (!std::isfinite(x)) throw ParseError("non-finite parameter in " + name);
                m(i, j) = x;
            }
        }
    });
    if (!r.done()) throw ParseError("trailing bytes after checkpoint tensors");
    return out;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    util::write_file_atomic(path, encode_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(util::read_file(path)); }

}  // namespace lmvs::scorer
